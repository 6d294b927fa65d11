//! Experiment configuration: a TOML document selecting the code, channel,
//! and campaign parameters.

use serde::{Deserialize, Serialize};

use rldc_core::analysis::ChannelSpec;
use rldc_core::concat::{CodeMode, ConcatCode};
use rldc_core::error::{Error, Result};
use rldc_core::inner;
use rldc_core::outer::outer_by_name;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum IndexSelection {
    All(String),
    List(Vec<usize>),
}

impl Default for IndexSelection {
    fn default() -> Self {
        IndexSelection::All("all".to_string())
    }
}

/// One experiment: code parameters, channel, trial counts.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub mode: CodeMode,
    /// Outer message length (RLDC targets) — the Hadamard outer code has
    /// codeword length 2^n.
    pub n: usize,
    /// Outer code name: "hadamard" or "identity".
    pub outer: String,
    /// Inner codeword / buffer length.
    pub t: usize,
    pub target_delta_in: f64,
    pub delta_out: f64,
    #[serde(default = "default_inner_seed")]
    pub inner_seed: u64,
    /// Channel strategy name: identity | random | random_balanced |
    /// dangerous | shift | buffer | swap | hamming.
    #[serde(default = "default_strategy")]
    pub strategy: String,
    /// Edit budget as a fraction of 2m; must not exceed the code's delta.
    /// Defaults to delta (the full guaranteed radius).
    #[serde(default)]
    pub budget_fraction: Option<f64>,
    /// Explicit edit budget override (still capped by delta * 2m).
    #[serde(default)]
    pub budget_edits: Option<usize>,
    #[serde(default)]
    pub shift_r: Option<usize>,
    #[serde(default)]
    pub buffer_j: Option<usize>,
    #[serde(default)]
    pub swap_blocks: Option<(usize, usize)>,
    #[serde(default)]
    pub dangerous_targets: Option<Vec<usize>>,
    pub trials: u64,
    #[serde(default)]
    pub indices: IndexSelection,
    pub seed: u64,
    /// Run the exhaustive self-nonsimilarity scan as part of the campaign.
    #[serde(default)]
    pub verify_nonsimilarity: bool,
    /// Skip the decoder's two-query length check.
    #[serde(default)]
    pub skip_length_check: bool,
    /// Directory for cached inner codebooks.
    #[serde(default = "default_cache_dir")]
    pub cache_dir: String,
}

fn default_inner_seed() -> u64 {
    42
}

fn default_strategy() -> String {
    "identity".to_string()
}

fn default_cache_dir() -> String {
    "codebooks".to_string()
}

impl ExperimentConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    #[allow(dead_code)] // exercised by the config round-trip test
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Build the concatenation code this config describes (codebook loaded
    /// from the cache directory or constructed).
    pub fn build_code(&self) -> Result<ConcatCode> {
        let k = match self.outer.as_str() {
            "hadamard" => 1usize << self.n,
            "identity" => self.n,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown outer code '{other}'"
                )))
            }
        };
        let book = inner::load_or_build(
            std::path::Path::new(&self.cache_dir),
            k,
            self.t,
            self.target_delta_in,
            self.inner_seed,
        )?;
        let outer = outer_by_name(&self.outer, self.n, self.delta_out)?;
        if self.outer == "identity" {
            ConcatCode::with_delta_out(book, outer, self.mode, self.delta_out)
        } else {
            ConcatCode::new(book, outer, self.mode)
        }
    }

    /// The per-trial edit budget: explicit edits, or a fraction of 2m,
    /// or the full delta * 2m. Errors when the request exceeds delta.
    pub fn edit_budget(&self, code: &ConcatCode) -> Result<usize> {
        let delta = code.params.delta;
        let two_m = 2.0 * code.params.m as f64;
        if let Some(edits) = self.budget_edits {
            return Ok(edits);
        }
        let fraction = self.budget_fraction.unwrap_or(delta);
        if fraction > delta + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "budget_fraction {fraction} exceeds delta = {delta}; lower it or raise \
                 delta_in/delta_out"
            )));
        }
        Ok((fraction * two_m).floor() as usize)
    }

    /// Resolve the channel strategy for this code.
    pub fn channel(&self, code: &ConcatCode) -> Result<ChannelSpec> {
        let budget = self.edit_budget(code)?;
        Ok(match self.strategy.as_str() {
            "identity" => ChannelSpec::Identity,
            "random" => ChannelSpec::Random { budget },
            "random_balanced" => ChannelSpec::RandomBalanced { budget },
            "dangerous" => ChannelSpec::Dangerous {
                targets: self.dangerous_targets.clone().unwrap_or_default(),
                budget,
            },
            "shift" => ChannelSpec::Shift {
                r: self.shift_r.unwrap_or(1),
            },
            "buffer" => ChannelSpec::Buffer {
                j: self.buffer_j.unwrap_or(1),
            },
            "swap" => {
                let (j, j2) = self.swap_blocks.unwrap_or((1, 2));
                ChannelSpec::Swap { j, j2, budget }
            }
            "hamming" => ChannelSpec::Hamming { flips: budget / 2 },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown channel strategy '{other}'"
                )))
            }
        })
    }

    /// The target indices: message bits in RLDC mode, codeword positions in
    /// RLCC mode.
    pub fn target_indices(&self, code: &ConcatCode) -> Result<Vec<usize>> {
        let bound = match self.mode {
            CodeMode::Rldc => code.params.n,
            CodeMode::Rlcc => code.params.m,
        };
        match &self.indices {
            IndexSelection::All(word) if word == "all" => Ok((1..=bound).collect()),
            IndexSelection::All(word) => Err(Error::Parse(format!(
                "indices must be \"all\" or a list, found '{word}'"
            ))),
            IndexSelection::List(list) => {
                for &i in list {
                    if i == 0 || i > bound {
                        return Err(Error::IndexOutOfRange { index: i, bound });
                    }
                }
                Ok(list.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
mode = "rldc"
n = 2
outer = "hadamard"
t = 8
target_delta_in = 0.1
delta_out = 0.2
strategy = "random"
trials = 10
indices = [1, 2]
seed = 7
"#;

    #[test]
    fn parse_and_build() {
        let config = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(config.n, 2);
        assert_eq!(config.indices, IndexSelection::List(vec![1, 2]));
        let round = ExperimentConfig::from_toml(&config.to_toml()).unwrap();
        assert_eq!(config, round);
    }

    #[test]
    fn budget_fraction_capped_by_delta() {
        let mut config = ExperimentConfig::from_toml(SAMPLE).unwrap();
        config.cache_dir = std::env::temp_dir()
            .join("rldc-test-cache")
            .to_string_lossy()
            .into_owned();
        let code = config.build_code().unwrap();
        config.budget_fraction = Some(0.4);
        assert!(config.edit_budget(&code).is_err());
        config.budget_fraction = None;
        assert_eq!(
            code.params.edit_budget(),
            config.edit_budget(&code).unwrap()
        );
    }
}

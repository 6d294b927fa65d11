//! Experiment runner for the insdel relaxed local decoding laboratory.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::Rng;

use rldc_core::analysis::{
    self, amplification_reps, amplified_outcome, binomial_tail, danger_survey,
    estimate_success_rate, verify_self_nonsimilarity, ChannelSpec,
};
use rldc_core::bits::{BitString, QuerySymbol};
use rldc_core::decode::{rlcc_correct, rldc_decode, DecodeOptions, WordOracle};
use rldc_core::error::{Error, Result};
use rldc_core::inner::{build_codebook, verify_codebook, InnerCodebook};
use rldc_core::lab::{
    check_claims, check_completeness, compare_restricted_fixability, compute_fixability,
    decoding_fn_parse, determinize, read_index_decoder, reduce_to_ldc, restrict_code,
    sample_restriction, xor_pair_decoder, Dist, TruthTableCode,
};
use rldc_core::rng;

use config::ExperimentConfig;
use report::{DerivedParams, Report, VerifierOutcomes};

#[derive(Parser)]
#[command(
    name = "rldc",
    about = "Relaxed local decoding under insertion-deletion errors: encode, corrupt, \
             decode, and verify the construction's guarantees at desk scale",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an inner codebook by greedy search and print its report.
    BuildInner {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        /// Target minimum normalized edit distance in (0, 1/2).
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the codebook file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message under the configured concatenation code.
    Encode {
        #[arg(long)]
        config: PathBuf,
        /// Message bits, e.g. 01011.
        #[arg(long)]
        message: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corrupt an encoded message with the configured channel strategy.
    Corrupt {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        message: String,
        /// Override the config's channel strategy.
        #[arg(long)]
        strategy: Option<String>,
        /// Override the edit budget.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the corruption plan here (insdel strategies only).
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Decode one message bit from a received word.
    Decode {
        #[arg(long)]
        config: PathBuf,
        /// Received word bits (or @FILE to read from a file).
        #[arg(long)]
        word: String,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the decode transcript as JSON.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        skip_length_check: bool,
    },
    /// Correct one codeword position (RLCC mode).
    Correct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        pos: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        skip_length_check: bool,
    },
    /// Run a full campaign: build, encode, corrupt, decode, verify, report.
    Trial {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's channel strategy.
        #[arg(long)]
        strategy: Option<String>,
        /// Override the config's trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here (default: stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the CSV projection here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a verifier.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Truth-table decoder analysis.
    #[command(subcommand)]
    Lab(LabCommand),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Re-verify every invariant of a codebook file.
    Inner {
        #[arg(long)]
        book: PathBuf,
    },
    /// Exhaustive self-nonsimilarity scan of an encoded message.
    Nonsimilarity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        message: String,
    },
    /// Dangerous-block analysis across corrupted samples.
    Dangerous {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct LabCodeArgs {
    /// Code spec: a generator like hadamard:3 / identity:4 /
    /// hadamard+and:3 / hadamard-punctured:4, or a truth-table file path.
    #[arg(long)]
    code: String,
    /// Fixability threshold parameter.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
}

#[derive(Subcommand)]
enum LabCommand {
    /// Fixable-set profile of a truth-table code.
    Fixable(LabCodeArgs),
    /// Sample a random restriction and report both post-restriction views.
    Restrict {
        #[command(flatten)]
        code: LabCodeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_attempts: usize,
    },
    /// Check the query-structure claims of a decoder model.
    Claims {
        #[command(flatten)]
        code: LabCodeArgs,
        /// Decoder model: "xor" (pair decoder) or "read" (read-your-index).
        #[arg(long, default_value = "xor")]
        decoder: String,
    },
    /// Reduce to a never-abort decoder and measure it under flips.
    Reduce {
        #[command(flatten)]
        code: LabCodeArgs,
        #[arg(long, default_value = "xor")]
        decoder: String,
        /// Target message bit.
        #[arg(long)]
        index: usize,
        /// Exhaustive adversary: all error sets up to this many flips.
        #[arg(long, default_value_t = 1)]
        flips: usize,
        /// Sampled decode paths for the never-abort check.
        #[arg(long, default_value_t = 10000)]
        paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Determinize a distribution over output functions for a query pair.
    Determinize {
        #[command(flatten)]
        code: LabCodeArgs,
        /// Target message bit.
        #[arg(long)]
        index: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        /// Output functions as TT[:WEIGHT], TT over {0,1,b} indexed by
        /// (answer_j, answer_k) in order 00,01,10,11. Repeatable.
        #[arg(long = "fn", required = true)]
        functions: Vec<String>,
    },
    /// Confidence amplification demo: majority of repeated runs.
    Amplify {
        /// Base decoder advantage: its error rate is 1/2 - beta.
        #[arg(long, default_value_t = 0.25)]
        beta: f64,
        /// Target error rate after amplification.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 10000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn read_word_arg(word: &str) -> Result<BitString> {
    if let Some(path) = word.strip_prefix('@') {
        std::fs::read_to_string(path)?.trim().parse()
    } else {
        word.parse()
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::BuildInner {
            k,
            t,
            target,
            seed,
            out,
        } => {
            let book = build_codebook(k, t, target, seed)?;
            let report = verify_codebook(&book);
            if let Some(path) = out {
                book.write_to(&path)?;
                println!("codebook written to {}", path.display());
            }
            println!(
                "k={k} t={t} delta_in={} rate={:.4} min_ed={} pass={}",
                book.delta_in(),
                report.rate,
                report.min_ed,
                report.pass
            );
            Ok(report.pass)
        }
        Command::Encode {
            config,
            message,
            out,
        } => {
            let config = ExperimentConfig::from_path(&config)?;
            let code = config.build_code()?;
            let x: BitString = message.parse()?;
            let cw = code.encode(&x)?;
            match out {
                Some(path) => std::fs::write(path, cw.to_string())?,
                None => println!("{cw}"),
            }
            Ok(true)
        }
        Command::Corrupt {
            config,
            message,
            strategy,
            budget,
            seed,
            plan,
        } => {
            let mut config = ExperimentConfig::from_path(&config)?;
            if let Some(s) = strategy {
                config.strategy = s;
            }
            if let Some(b) = budget {
                config.budget_edits = Some(b);
            }
            let code = config.build_code()?;
            let x: BitString = message.parse()?;
            let cw = code.encode(&x)?;
            let y = code.outer_codeword(&x)?;
            let channel = config.channel(&code)?;
            let seed = seed.unwrap_or(config.seed);
            let w = channel.apply(&cw, &code.book, &y, seed)?;
            if let Some(path) = plan {
                let plan_text = match &channel {
                    ChannelSpec::Random { budget } => {
                        rldc_core::channel::random_insdel(&cw, *budget, seed)
                            .1
                            .serialize()
                    }
                    ChannelSpec::RandomBalanced { budget } => {
                        rldc_core::channel::random_insdel_balanced(&cw, *budget, seed)
                            .1
                            .serialize()
                    }
                    _ => String::new(),
                };
                if plan_text.is_empty() {
                    eprintln!("note: no replayable plan for strategy {}", channel.name());
                } else {
                    std::fs::write(path, plan_text)?;
                }
            }
            println!("{w}");
            Ok(true)
        }
        Command::Decode {
            config,
            word,
            index,
            seed,
            transcript,
            skip_length_check,
        } => {
            let config = ExperimentConfig::from_path(&config)?;
            let code = config.build_code()?;
            let w = read_word_arg(&word)?;
            let mut oracle = WordOracle::new(w);
            let options = DecodeOptions { skip_length_check };
            let outcome = rldc_decode(index, &mut oracle, &code, seed, options)?;
            if let Some(path) = transcript {
                std::fs::write(
                    path,
                    serde_json::to_string_pretty(&outcome).expect("transcript serializes"),
                )?;
            }
            println!("{}", outcome.value);
            Ok(true)
        }
        Command::Correct {
            config,
            word,
            pos,
            seed,
            transcript,
            skip_length_check,
        } => {
            let config = ExperimentConfig::from_path(&config)?;
            let code = config.build_code()?;
            let w = read_word_arg(&word)?;
            let mut oracle = WordOracle::new(w);
            let options = DecodeOptions { skip_length_check };
            let outcome = rlcc_correct(pos, &mut oracle, &code, seed, options)?;
            if let Some(path) = transcript {
                std::fs::write(
                    path,
                    serde_json::to_string_pretty(&outcome).expect("transcript serializes"),
                )?;
            }
            println!("{}", outcome.value);
            Ok(true)
        }
        Command::Trial {
            config,
            strategy,
            trials,
            seed,
            json,
            csv,
        } => {
            let mut config = ExperimentConfig::from_path(&config)?;
            if let Some(s) = strategy {
                config.strategy = s;
            }
            if let Some(t) = trials {
                config.trials = t;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            let report = run_campaign(&config)?;
            let text = report.to_json();
            match json {
                Some(path) => std::fs::write(path, &text)?,
                None => println!("{text}"),
            }
            if let Some(path) = csv {
                std::fs::write(path, report.to_csv())?;
            }
            Ok(report.all_invariants_pass)
        }
        Command::Verify(cmd) => run_verify(cmd),
        Command::Lab(cmd) => run_lab(cmd),
    }
}

/// Build, sample, corrupt, decode, verify; aggregate everything into the
/// campaign report.
fn run_campaign(config: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    let code = config.build_code()?;
    let channel = config.channel(&code)?;
    let indices = config.target_indices(&code)?;
    let options = DecodeOptions {
        skip_length_check: config.skip_length_check,
    };
    let results = estimate_success_rate(
        &code,
        &indices,
        config.trials,
        &channel,
        config.seed,
        options,
    )?;
    let codebook_report = verify_codebook(&code.book);
    let danger = match &channel {
        ChannelSpec::Shift { .. } | ChannelSpec::Buffer { .. } => None,
        _ => Some(danger_survey(
            &code,
            &channel,
            config.trials.min(1000),
            rng::split_seed(config.seed, 0xda),
        )?),
    };
    let nonsimilarity = if config.verify_nonsimilarity {
        let mut msg_rng = rng::substream(config.seed, 0x05);
        let x = analysis::random_message(code.params.n, &mut msg_rng);
        let cw = code.encode(&x)?;
        let y = code.outer_codeword(&x)?;
        Some(verify_self_nonsimilarity(
            &cw,
            &code.book,
            &y,
            &code.params,
        )?)
    } else {
        None
    };
    let all_invariants_pass = codebook_report.pass
        && danger.as_ref().is_none_or(|d| d.all_pass)
        && nonsimilarity.as_ref().is_none_or(|n| n.pass);
    Ok(Report {
        config: config.clone(),
        derived: DerivedParams {
            k: code.params.k,
            m: code.params.m,
            d: code.params.d,
            q: code.params.q,
            delta: code.params.delta,
            delta_in_achieved: code.params.delta_in,
            eps_out: code.params.eps_out,
            rate: code.book.rate(),
            edit_budget: config.edit_budget(&code)?,
        },
        results,
        verifiers: VerifierOutcomes {
            codebook: codebook_report,
            danger,
            nonsimilarity,
        },
        all_invariants_pass,
        wall_clock_ms: start.elapsed().as_millis(),
    })
}

fn run_verify(cmd: VerifyCommand) -> Result<bool> {
    match cmd {
        VerifyCommand::Inner { book } => {
            let book = InnerCodebook::read_from(&book)?;
            let report = verify_codebook(&book);
            println!(
                "k={} t={} min_normalized_ed={} rate={:.4} weight_failures={} pass={}",
                report.k,
                report.t,
                report.min_normalized_ed,
                report.rate,
                report.weight_failures.len(),
                report.pass
            );
            Ok(report.pass)
        }
        VerifyCommand::Nonsimilarity { config, message } => {
            let config = ExperimentConfig::from_path(&config)?;
            let code = config.build_code()?;
            let x: BitString = message.parse()?;
            let cw = code.encode(&x)?;
            let y = code.outer_codeword(&x)?;
            let report = verify_self_nonsimilarity(&cw, &code.book, &y, &code.params)?;
            println!(
                "min_ed={} at (start={}, len={}, block={}) bound={:.4} pass={}",
                report.min_ed,
                report.witness.0,
                report.witness.1,
                report.witness.2,
                report.bound,
                report.pass
            );
            Ok(report.pass)
        }
        VerifyCommand::Dangerous {
            config,
            trials,
            seed,
        } => {
            let mut config = ExperimentConfig::from_path(&config)?;
            if let Some(t) = trials {
                config.trials = t;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            let code = config.build_code()?;
            let channel = config.channel(&code)?;
            let survey = danger_survey(&code, &channel, config.trials, config.seed)?;
            println!(
                "strategy={} trials={} analyzed={} max_dangerous={} bound={:.2} pass={}",
                survey.channel,
                survey.trials,
                survey.analyzed,
                survey.max_dangerous,
                survey.bound,
                survey.all_pass
            );
            Ok(survey.all_pass)
        }
    }
}

fn load_decoder(code: &TruthTableCode, name: &str) -> Result<rldc_core::lab::TwoQueryDecoderModel> {
    match name {
        "xor" => xor_pair_decoder(code),
        "read" => read_index_decoder(code),
        other => Err(Error::InvalidParameter(format!(
            "unknown decoder model '{other}' (expected \"xor\" or \"read\")"
        ))),
    }
}

fn run_lab(cmd: LabCommand) -> Result<bool> {
    match cmd {
        LabCommand::Fixable(args) => {
            let code = TruthTableCode::load(&args.code)?;
            let profile = compute_fixability(&code, args.delta)?;
            let (s_total, t_total) = profile.double_count();
            println!(
                "n={} m={} heavy_threshold={:.3} |W|={} sum|S_i|={} sum|T_j|={}",
                code.n(),
                code.m(),
                profile.heavy_threshold,
                profile.heavy.len(),
                s_total,
                t_total
            );
            for i in 1..=code.n() {
                println!(
                    "S_{i} = {:?} (S+ {}, S- {})",
                    profile.s_sets[i - 1],
                    profile.s_plus(i).len(),
                    profile.s_minus(i).len()
                );
            }
            Ok(s_total == t_total)
        }
        LabCommand::Restrict {
            code: args,
            seed,
            max_attempts,
        } => {
            let code = TruthTableCode::load(&args.code)?;
            let profile = compute_fixability(&code, args.delta)?;
            let sample = sample_restriction(&code, &profile, seed, max_attempts)?;
            println!(
                "accepted={} attempts={} |J|={} surviving_heavy={} eliminated={}",
                sample.accepted,
                sample.attempts,
                sample.restriction.free.len(),
                sample.surviving_heavy,
                sample.restriction.eliminated.len()
            );
            let restricted = restrict_code(&code, &sample.restriction)?;
            let cmp = compare_restricted_fixability(&profile, &restricted)?;
            // reported, not asserted: at small n' this bad-index count can
            // exceed n'
            let bad_index_bound =
                12.0 * (8.0 / args.delta).ln() / (args.delta * restricted.code.n() as f64);
            println!(
                "restricted code: n'={} m'={} bad_index_bound={:.2}",
                restricted.code.n(),
                restricted.code.m(),
                bad_index_bound
            );
            for (pos, &old_i) in restricted.free_bits.iter().enumerate() {
                println!(
                    "bit {old_i}: carried S' = {:?}, recomputed = {:?}",
                    cmp.carried[pos], cmp.recomputed[pos]
                );
            }
            Ok(sample.accepted)
        }
        LabCommand::Claims {
            code: args,
            decoder,
        } => {
            let code = TruthTableCode::load(&args.code)?;
            let model = load_decoder(&code, &decoder)?;
            let completeness = check_completeness(&code, &model)?;
            if !completeness.pass() {
                println!(
                    "completeness violations: {} (claims not checked)",
                    completeness.violations.len()
                );
                return Ok(false);
            }
            let profile = compute_fixability(&code, args.delta)?;
            let report = check_claims(&code, &model, &profile)?;
            println!(
                "non_adaptive={} bot_outside_fixable_violations={} trichotomy_violations={} pass={}",
                model.is_non_adaptive(),
                report.bot_outside_fixable.len(),
                report.trichotomy.len(),
                report.pass()
            );
            Ok(report.pass())
        }
        LabCommand::Reduce {
            code: args,
            decoder,
            index,
            flips,
            paths,
            seed,
        } => {
            let code = TruthTableCode::load(&args.code)?;
            let model = load_decoder(&code, &decoder)?;
            let profile = compute_fixability(&code, args.delta)?;
            let reduced = reduce_to_ldc(&model, &profile, index)?;
            let mut stream = rng::stream(seed);
            let mut bots = 0u64;
            for trial in 0..paths {
                let u = (trial as usize) % (1usize << code.n());
                let cw = code.codeword(u);
                if reduced.run(&cw, &mut stream).is_bot() {
                    bots += 1;
                }
            }
            let worst = worst_case_success(&code, &reduced, index, flips);
            println!(
                "sampled_paths={paths} bot_outputs={bots} worst_success={}/{} over <= {flips} flips",
                worst.num, worst.den
            );
            Ok(bots == 0)
        }
        LabCommand::Determinize {
            code: args,
            index,
            j,
            k,
            functions,
        } => {
            let code = TruthTableCode::load(&args.code)?;
            let mut entries = Vec::new();
            for spec in &functions {
                let (tt, weight) = match spec.split_once(':') {
                    Some((tt, w)) => (
                        tt,
                        w.parse::<u64>()
                            .map_err(|e| Error::Parse(format!("bad weight '{w}': {e}")))?,
                    ),
                    None => (spec.as_str(), 1),
                };
                entries.push((decoding_fn_parse(tt)?, weight));
            }
            let dist = Dist::new(entries)?;
            let report = determinize(&code, index, j, k, &dist)?;
            println!(
                "f_D = {} achievable = {:?}",
                rldc_core::lab::decoding_fn_display(&report.f_d),
                report.achievable
            );
            Ok(true)
        }
        LabCommand::Amplify {
            beta,
            eps,
            trials,
            seed,
        } => {
            let reps = amplification_reps(beta, eps);
            let wrong_p = 0.5 - beta;
            let mut stream = rng::stream(seed);
            let mut errors = 0u64;
            for _ in 0..trials {
                let out = amplified_outcome(
                    reps,
                    |r| {
                        if r.gen_bool(wrong_p) {
                            QuerySymbol::Zero // the wrong bit
                        } else {
                            QuerySymbol::One // the correct bit
                        }
                    },
                    &mut stream,
                );
                if out == QuerySymbol::Zero {
                    errors += 1;
                }
            }
            let empirical = errors as f64 / trials as f64;
            // wrong-majority threshold: ceil(reps / 2)
            let exact = binomial_tail(reps as u64, wrong_p, (reps as u64).div_ceil(2));
            let chernoff = (-2.0 * beta * beta * reps as f64).exp();
            println!(
                "reps={reps} empirical_error={empirical:.5} exact_error={exact:.5} chernoff_bound={chernoff:.5}"
            );
            let se = (exact * (1.0 - exact) / trials as f64).sqrt();
            Ok(exact <= chernoff && empirical <= eps + 3.0 * se)
        }
    }
}

/// Exact worst-case success probability of the reduced decoder over all
/// messages and all error sets of size at most `flips`.
fn worst_case_success(
    code: &TruthTableCode,
    reduced: &rldc_core::lab::ReducedDecoder<'_>,
    index: usize,
    flips: usize,
) -> rldc_core::lab::Fraction {
    use rldc_core::lab::Fraction;
    let m = code.m();
    let mut worst = Fraction::new(1, 1);
    let consider = |candidate: Fraction, current: &mut Fraction| {
        if candidate.num * current.den < current.num * candidate.den {
            *current = candidate;
        }
    };
    for u in 0..1usize << code.n() {
        let cw = code.codeword(u);
        let target = code.x_bit(index, u);
        let mut stack: Vec<(BitString, usize, usize)> = vec![(cw.clone(), 1, 0)];
        while let Some((word, next_pos, used)) = stack.pop() {
            consider(reduced.exact_success(&word, target), &mut worst);
            if used < flips {
                for pos in next_pos..=m {
                    let mut flipped = word.clone();
                    flipped.flip(pos);
                    stack.push((flipped, pos + 1, used + 1));
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_case_success_on_clean_punctured_hadamard() {
        let code = TruthTableCode::generator("hadamard-punctured:4").unwrap();
        let model = xor_pair_decoder(&code).unwrap();
        let profile = compute_fixability(&code, 0.1).unwrap();
        let reduced = reduce_to_ldc(&model, &profile, 1).unwrap();
        let worst = worst_case_success(&code, &reduced, 1, 0);
        assert_eq!(worst, rldc_core::lab::Fraction::new(1, 1));
        // one flip kills at most one of the four pairs
        let worst = worst_case_success(&code, &reduced, 1, 1);
        assert_eq!(worst, rldc_core::lab::Fraction::new(3, 4));
    }
}

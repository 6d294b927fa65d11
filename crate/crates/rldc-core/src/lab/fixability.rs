//! Fixable coordinate sets and random restrictions.
//!
//! Coordinate `C_j` is fixable by message bit `x_i` when restricting `x_i`
//! to 0 or to 1 makes `C_j` constant. `S_i` collects the coordinates fixable
//! by `x_i`, `T_j` the bits that fix `C_j`; heavy coordinates (those fixable
//! by at least `3 ln(8/delta)` bits) are the ones a random restriction
//! eliminates with good probability.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

use super::code::{CoordTable, TruthTableCode};

/// The complete fixability bookkeeping of a code at a given `delta`.
#[derive(Clone, Debug)]
pub struct FixabilityProfile {
    /// `S_i` per message bit (1-based `i`, sets of 1-based `j`).
    pub s_sets: Vec<BTreeSet<usize>>,
    /// `T_j` per coordinate (1-based `j`, sets of 1-based `i`).
    pub t_sets: Vec<BTreeSet<usize>>,
    /// Heaviness threshold `3 ln(8/delta)`.
    pub heavy_threshold: f64,
    /// `W`: coordinates with `|T_j| >= 3 ln(8/delta)`.
    pub heavy: BTreeSet<usize>,
    pub delta: f64,
}

impl FixabilityProfile {
    /// `S_{i,+} = S_i ∩ W`.
    pub fn s_plus(&self, i: usize) -> BTreeSet<usize> {
        self.s_sets[i - 1]
            .intersection(&self.heavy)
            .copied()
            .collect()
    }

    /// `S_{i,-} = S_i \ W`.
    pub fn s_minus(&self, i: usize) -> BTreeSet<usize> {
        self.s_sets[i - 1]
            .difference(&self.heavy)
            .copied()
            .collect()
    }

    /// Double-counting identity: `sum_i |S_i| = sum_j |T_j|`.
    pub fn double_count(&self) -> (usize, usize) {
        (
            self.s_sets.iter().map(|s| s.len()).sum(),
            self.t_sets.iter().map(|t| t.len()).sum(),
        )
    }
}

fn fixable_by(coord: &CoordTable, n: usize, i: usize) -> bool {
    let bit = |u: usize| (u >> (n - i)) & 1;
    coord.constant_over(|u| bit(u) == 0) || coord.constant_over(|u| bit(u) == 1)
}

/// Exhaustively compute `S_i`, `T_j`, and the heavy set.
pub fn compute_fixability(code: &TruthTableCode, delta: f64) -> Result<FixabilityProfile> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} outside (0, 1)"
        )));
    }
    let n = code.n();
    let m = code.m();
    let mut s_sets = vec![BTreeSet::new(); n];
    let mut t_sets = vec![BTreeSet::new(); m];
    for j in 1..=m {
        for i in 1..=n {
            if fixable_by(code.coord(j), n, i) {
                s_sets[i - 1].insert(j);
                t_sets[j - 1].insert(i);
            }
        }
    }
    let heavy_threshold = 3.0 * (8.0 / delta).ln();
    let heavy = (1..=m)
        .filter(|&j| t_sets[j - 1].len() as f64 >= heavy_threshold)
        .collect();
    Ok(FixabilityProfile {
        s_sets,
        t_sets,
        heavy_threshold,
        heavy,
        delta,
    })
}

/// A partial assignment: free bits `J` and fixed values `rho`, together
/// with the coordinates that became constant.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub free: BTreeSet<usize>,
    pub fixed: BTreeMap<usize, u8>,
    /// Coordinates whose restricted truth table is constant.
    pub eliminated: BTreeSet<usize>,
}

impl Restriction {
    /// The message indices satisfying the fixed assignment, enumerated over
    /// the free bits (size `2^|J|`).
    fn surviving_messages(&self, n: usize) -> Vec<usize> {
        let free: Vec<usize> = self.free.iter().copied().collect();
        let base: usize = self
            .fixed
            .iter()
            .map(|(&i, &v)| (v as usize) << (n - i))
            .sum();
        (0..1usize << free.len())
            .map(|v| {
                let mut u = base;
                for (pos, &i) in free.iter().enumerate() {
                    u |= ((v >> (free.len() - 1 - pos)) & 1) << (n - i);
                }
                u
            })
            .collect()
    }
}

fn constant_on(coord: &CoordTable, messages: &[usize]) -> bool {
    let first = coord.eval(messages[0]);
    messages[1..].iter().all(|&u| coord.eval(u) == first)
}

fn eliminated_set(code: &TruthTableCode, messages: &[usize]) -> BTreeSet<usize> {
    (1..=code.m())
        .filter(|&j| constant_on(code.coord(j), messages))
        .collect()
}

/// One restriction draw with its acceptance bookkeeping.
#[derive(Clone, Debug)]
pub struct RestrictionSample {
    pub restriction: Restriction,
    pub attempts: usize,
    pub accepted: bool,
    /// `|W \ A|`: heavy coordinates that survived.
    pub surviving_heavy: usize,
}

/// Rejection-sample a restriction: every bit is free with probability 1/3,
/// else fixed to 0 or 1 with probability 1/3 each. Accept when
/// `|J| >= n/6` and at most `delta * m / 4` heavy coordinates survive.
///
/// On exhausting `max_attempts`, the best draw seen (fewest surviving heavy
/// coordinates among those with `|J| >= n/6`, else the last draw) is
/// returned with `accepted = false`.
pub fn sample_restriction(
    code: &TruthTableCode,
    profile: &FixabilityProfile,
    seed: u64,
    max_attempts: usize,
) -> Result<RestrictionSample> {
    let n = code.n();
    let m = code.m();
    let mut rng = rng::stream(seed);
    let mut best: Option<(usize, Restriction)> = None;
    for attempt in 1..=max_attempts {
        let mut free = BTreeSet::new();
        let mut fixed = BTreeMap::new();
        for i in 1..=n {
            match rng.gen_range(0..3u8) {
                0 => {
                    free.insert(i);
                }
                1 => {
                    fixed.insert(i, 0);
                }
                _ => {
                    fixed.insert(i, 1);
                }
            }
        }
        let mut restriction = Restriction {
            free,
            fixed,
            eliminated: BTreeSet::new(),
        };
        if (restriction.free.len() as f64) < n as f64 / 6.0 {
            continue;
        }
        let messages = restriction.surviving_messages(n);
        let surviving_heavy = profile
            .heavy
            .iter()
            .filter(|&&j| !constant_on(code.coord(j), &messages))
            .count();
        if (surviving_heavy as f64) <= profile.delta * m as f64 / 4.0 {
            restriction.eliminated = eliminated_set(code, &messages);
            return Ok(RestrictionSample {
                restriction,
                attempts: attempt,
                accepted: true,
                surviving_heavy,
            });
        }
        if best.as_ref().is_none_or(|(s, _)| surviving_heavy < *s) {
            best = Some((surviving_heavy, restriction));
        }
    }
    let (surviving_heavy, mut restriction) = best.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no draw with |J| >= n/6 in {max_attempts} attempts"
        ))
    })?;
    let messages = restriction.surviving_messages(code.n());
    restriction.eliminated = eliminated_set(code, &messages);
    Ok(RestrictionSample {
        restriction,
        attempts: max_attempts,
        accepted: false,
        surviving_heavy,
    })
}

/// The restricted code together with the coordinate index map.
#[derive(Clone, Debug)]
pub struct RestrictedCode {
    pub code: TruthTableCode,
    /// `index_map[j - 1]` is the new 1-based coordinate of old `j`, or
    /// `None` if `j` was eliminated.
    pub index_map: Vec<Option<usize>>,
    /// New 1-based message index of each old free bit, ascending.
    pub free_bits: Vec<usize>,
}

/// Restrict the code to the fixed assignment and drop constant coordinates.
pub fn restrict_code(code: &TruthTableCode, restriction: &Restriction) -> Result<RestrictedCode> {
    let n = code.n();
    let free_bits: Vec<usize> = restriction.free.iter().copied().collect();
    let n_new = free_bits.len();
    if n_new == 0 {
        return Err(Error::InvalidParameter(
            "restriction leaves no free bits".into(),
        ));
    }
    // surviving message indices in new-message binary order
    let messages = restriction.surviving_messages(n);
    let mut coords = Vec::new();
    let mut index_map = vec![None; code.m()];
    for j in 1..=code.m() {
        if constant_on(code.coord(j), &messages) {
            continue;
        }
        index_map[j - 1] = Some(coords.len() + 1);
        let table = CoordTable::from_fn(n_new, |v| code.eval(j, messages[v]));
        coords.push(table);
    }
    Ok(RestrictedCode {
        code: TruthTableCode::new(n_new, coords)?,
        index_map,
        free_bits,
    })
}

/// Both views of post-restriction fixability: the carried-over sets
/// `S_i' = S_i \ A` and the fully recomputed fixable sets of the restricted
/// code (which may be larger).
#[derive(Clone, Debug)]
pub struct RestrictionComparison {
    /// Per free bit (new numbering): old `S_i` minus eliminated, renumbered.
    pub carried: Vec<BTreeSet<usize>>,
    /// Per free bit: fixable sets recomputed on the restricted code.
    pub recomputed: Vec<BTreeSet<usize>>,
}

pub fn compare_restricted_fixability(
    profile: &FixabilityProfile,
    restricted: &RestrictedCode,
) -> Result<RestrictionComparison> {
    let new_profile = compute_fixability(&restricted.code, profile.delta)?;
    let mut carried = Vec::new();
    for &i in &restricted.free_bits {
        let set: BTreeSet<usize> = profile.s_sets[i - 1]
            .iter()
            .filter_map(|&j| restricted.index_map[j - 1])
            .collect();
        carried.push(set);
    }
    Ok(RestrictionComparison {
        carried,
        recomputed: new_profile.s_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_fixability_structure() {
        // T_j = {i} for row e_i, [n] for the zero row, empty for weight >= 2
        let code = TruthTableCode::generator("hadamard:3").unwrap();
        let profile = compute_fixability(&code, 0.1).unwrap();
        for row in 0..8usize {
            let t = &profile.t_sets[row];
            match row.count_ones() {
                0 => assert_eq!(t.len(), 3, "zero row fixable by every bit"),
                1 => {
                    let i = 3 - row.trailing_zeros() as usize;
                    assert_eq!(t.iter().copied().collect::<Vec<_>>(), vec![i]);
                }
                _ => assert!(t.is_empty(), "row {row} should not be fixable"),
            }
        }
        let (s_total, t_total) = profile.double_count();
        assert_eq!(s_total, t_total);
    }

    #[test]
    fn and_coordinate_fixable_by_all() {
        let code = TruthTableCode::generator("hadamard+and:3").unwrap();
        let profile = compute_fixability(&code, 0.1).unwrap();
        let and_j = code.m();
        assert_eq!(profile.t_sets[and_j - 1].len(), 3);
    }

    #[test]
    fn constant_coordinate_fixable_by_all() {
        let code = TruthTableCode::generator("hadamard+const:3").unwrap();
        let profile = compute_fixability(&code, 0.1).unwrap();
        assert_eq!(profile.t_sets[code.m() - 1].len(), 3);
    }

    #[test]
    fn restriction_sampling_accepts_quickly_when_heavy_is_empty() {
        let code = TruthTableCode::generator("hadamard:3").unwrap();
        let profile = compute_fixability(&code, 0.1).unwrap();
        assert!(profile.heavy.is_empty());
        let sample = sample_restriction(&code, &profile, 7, 1000).unwrap();
        assert!(sample.accepted);
        assert!(!sample.restriction.free.is_empty());
        assert_eq!(sample.surviving_heavy, 0);
    }

    #[test]
    fn acceptance_rate_without_heavy_coordinates() {
        // with W empty, a draw is accepted as soon as |J| >= n/6; at n = 12
        // this happens almost always (well above the 0.49 floor)
        let code = TruthTableCode::generator("hadamard:12").unwrap();
        let profile = compute_fixability(&code, 0.1).unwrap();
        assert!(profile.heavy.is_empty());
        let accepted = (0..1000u64)
            .filter(|&seed| {
                sample_restriction(&code, &profile, seed, 1)
                    .map(|s| s.accepted)
                    .unwrap_or(false)
            })
            .count();
        assert!(accepted as f64 / 1000.0 >= 0.49, "accepted {accepted}/1000");
    }

    #[test]
    fn delta_near_one_empties_heavy_set() {
        let code = TruthTableCode::generator("hadamard+and:3").unwrap();
        let profile = compute_fixability(&code, 0.99).unwrap();
        // threshold 3 ln(8/0.99) > 6 exceeds every |T_j| at n = 3
        assert!(profile.heavy.is_empty());
        let sample = sample_restriction(&code, &profile, 1, 1000).unwrap();
        assert!(sample.accepted);
    }

    #[test]
    fn restriction_eliminates_and_coordinate_when_zero_fixed() {
        let code = TruthTableCode::generator("hadamard+and:3").unwrap();
        let restriction = Restriction {
            free: [2, 3].into_iter().collect(),
            fixed: [(1usize, 0u8)].into_iter().collect(),
            eliminated: BTreeSet::new(),
        };
        let restricted = restrict_code(&code, &restriction).unwrap();
        // the AND coordinate and the rows e_1 and 0 become constant
        let and_j = code.m();
        assert!(restricted.index_map[and_j - 1].is_none());
        // row a = e_1 is coordinate 0b100 + 1 = 5
        assert!(restricted.index_map[4].is_none());
        assert!(restricted.index_map[0].is_none());
        assert_eq!(restricted.code.n(), 2);
        // eliminated truth tables recomputed independently agree
        let messages = restriction.surviving_messages(code.n());
        let elim = eliminated_set(&code, &messages);
        for (j, slot) in restricted.index_map.iter().enumerate() {
            assert_eq!(slot.is_none(), elim.contains(&(j + 1)));
        }
    }

    #[test]
    fn hadamard_restriction_eliminates_matching_rows() {
        let code = TruthTableCode::generator("hadamard:3").unwrap();
        let restriction = Restriction {
            free: [2, 3].into_iter().collect(),
            fixed: [(1usize, 1u8)].into_iter().collect(),
            eliminated: BTreeSet::new(),
        };
        let restricted = restrict_code(&code, &restriction).unwrap();
        // rows 0 and e_1 become constant; all others stay
        assert_eq!(restricted.code.m(), 6);
        for row in 0..8usize {
            let expect_gone = row == 0 || row == 0b100;
            assert_eq!(restricted.index_map[row].is_none(), expect_gone);
        }
        // surviving coordinates evaluate consistently
        for v in 0..4usize {
            for row in 0..8usize {
                if let Some(new_j) = restricted.index_map[row] {
                    let u = 0b100 | v; // x1 = 1, (x2, x3) = bits of v
                    assert_eq!(restricted.code.eval(new_j, v), code.eval(row + 1, u));
                }
            }
        }
    }

    #[test]
    fn and_survival_probability_matches_geometric_rate() {
        // the AND coordinate survives a draw iff no bit is fixed to 0:
        // probability (2/3)^n
        let n = 6;
        let code = TruthTableCode::generator("hadamard+and:6").unwrap();
        let and_j = code.m();
        let mut survived = 0u32;
        let draws = 20_000u32;
        let mut rng = rng::stream(99);
        for _ in 0..draws {
            let mut fixed = BTreeMap::new();
            let mut free = BTreeSet::new();
            for i in 1..=n {
                match rng.gen_range(0..3u8) {
                    0 => {
                        free.insert(i);
                    }
                    1 => {
                        fixed.insert(i, 0);
                    }
                    _ => {
                        fixed.insert(i, 1);
                    }
                }
            }
            let r = Restriction {
                free,
                fixed,
                eliminated: BTreeSet::new(),
            };
            if !constant_on(code.coord(and_j), &r.surviving_messages(n)) {
                survived += 1;
            }
        }
        let rate = survived as f64 / draws as f64;
        let exact = (2.0f64 / 3.0).powi(n as i32);
        let se = (exact * (1.0 - exact) / draws as f64).sqrt();
        assert!(
            (rate - exact).abs() <= 4.0 * se,
            "rate {rate} vs exact {exact}"
        );
        // and the paper-side bound e^{-|T_j|/3} dominates
        assert!(exact < (-(n as f64) / 3.0).exp());
    }

    #[test]
    fn compare_views_reports_both() {
        let code = TruthTableCode::generator("hadamard:3").unwrap();
        let profile = compute_fixability(&code, 0.1).unwrap();
        let sample = sample_restriction(&code, &profile, 3, 1000).unwrap();
        let restricted = restrict_code(&code, &sample.restriction).unwrap();
        let cmp = compare_restricted_fixability(&profile, &restricted).unwrap();
        assert_eq!(cmp.carried.len(), restricted.code.n());
        assert_eq!(cmp.recomputed.len(), restricted.code.n());
        // carried sets never exceed the recomputed ones
        for (c, r) in cmp.carried.iter().zip(&cmp.recomputed) {
            assert!(c.is_subset(r), "carried {c:?} vs recomputed {r:?}");
        }
    }
}

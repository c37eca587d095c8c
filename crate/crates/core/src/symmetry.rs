//! Time-symmetric sharing of the setting register.
//!
//! A [`SharingPair`] splits the setting digits between two commuting
//! measurements: the *initial share*, read on the input side, and the *final
//! share*, read on the output side and propagated backward.  Because every
//! program step is block-diagonal over settings, the final-share projection
//! slides through the circuit unchanged, so the pair carves one run into a
//! pre/post pair of classical records plus a small "advanced" cell of
//! settings the final share has already narrowed down at the input.
//!
//! Whether such a split is admissible at a given setting is pure counting
//! over solution images; [`ValidityReport`] evaluates all four flags with
//! exact integer arithmetic and only converts to floats for the reported
//! bit contributions.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algorithms::AlgorithmUnitary;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::gf2;
use crate::oracle::{OracleProblem, SettingEncoding, SettingSet};
use crate::state::{project, MeasurementSpec, Register, StateVector};

/// How the setting digits are divided between the two shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SharingMode {
    /// Disjoint digit positions covering the whole register.
    #[serde(rename = "coordinate")]
    Coordinate,
    /// Complementary spans of GF(2) parity functionals.
    #[serde(rename = "gf2-linear")]
    Linear,
}

impl SharingMode {
    pub fn label(&self) -> &'static str {
        match self {
            SharingMode::Coordinate => "coordinate",
            SharingMode::Linear => "gf2-linear",
        }
    }
}

/// An ordered pair of commuting setting measurements: `initial` is read on
/// the way in, `final_share` on the way out.
#[derive(Debug, Clone)]
pub struct SharingPair {
    problem: Arc<OracleProblem>,
    mode: SharingMode,
    initial: MeasurementSpec,
    final_share: MeasurementSpec,
}

impl SharingPair {
    /// Builds a digit-position pair.  The two position sets must be disjoint,
    /// cover every setting digit, and have equal sizes — or sizes off by one
    /// when `near_even` is allowed.
    pub fn coordinate(
        problem: Arc<OracleProblem>,
        positions1: Vec<usize>,
        positions2: Vec<usize>,
        near_even: bool,
    ) -> Result<Self> {
        let w = problem.setting_width();
        let mut seen = vec![false; w];
        for p in positions1.iter().chain(&positions2) {
            if *p >= w {
                return Err(Error::InvalidSubset {
                    detail: format!("position {p} outside the {w}-digit setting register"),
                });
            }
            if seen[*p] {
                return Err(Error::InvalidSubset {
                    detail: format!("position {p} appears in both shares"),
                });
            }
            seen[*p] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSubset {
                detail: "the two shares must cover every setting digit".into(),
            });
        }
        check_share_sizes(positions1.len(), positions2.len(), near_even)?;
        let initial = MeasurementSpec::coordinate(Register::B, w, positions1)?;
        let final_share = MeasurementSpec::coordinate(Register::B, w, positions2)?;
        Ok(SharingPair { problem, mode: SharingMode::Coordinate, initial, final_share })
    }

    /// Builds a parity-functional pair.  The two spans must intersect only in
    /// zero and jointly fill the whole dual space; dimensions follow the same
    /// evenness rule as positions.  Only compact settings qualify — a table
    /// encoding has no meaningful linear structure across its chunks.
    pub fn linear(
        problem: Arc<OracleProblem>,
        functionals1: Vec<u32>,
        functionals2: Vec<u32>,
        near_even: bool,
    ) -> Result<Self> {
        if problem.encoding() != SettingEncoding::Compact {
            return Err(Error::InvalidSubset {
                detail: format!(
                    "parity shares need a compact setting encoding; {} is table-encoded",
                    problem.name()
                ),
            });
        }
        let w = problem.setting_width();
        let d1 = functionals1.len();
        let d2 = functionals2.len();
        check_share_sizes(d1, d2, near_even)?;
        let joint: Vec<u32> = functionals1.iter().chain(&functionals2).copied().collect();
        if gf2::rank(&joint) != w {
            return Err(Error::InvalidSubset {
                detail: "the two parity spans must jointly determine every setting digit".into(),
            });
        }
        if d1 + d2 != w {
            return Err(Error::InvalidSubset {
                detail: "the two parity spans must intersect only in zero".into(),
            });
        }
        let initial = MeasurementSpec::linear(Register::B, w, functionals1)?;
        let final_share = MeasurementSpec::linear(Register::B, w, functionals2)?;
        Ok(SharingPair { problem, mode: SharingMode::Linear, initial, final_share })
    }

    pub fn problem(&self) -> &Arc<OracleProblem> {
        &self.problem
    }

    pub fn mode(&self) -> SharingMode {
        self.mode
    }

    pub fn initial_share(&self) -> &MeasurementSpec {
        &self.initial
    }

    pub fn final_share(&self) -> &MeasurementSpec {
        &self.final_share
    }

    /// Stable one-line name, e.g. `B:digits[0,1]|B:digits[2,3]`.
    pub fn label(&self) -> String {
        format!("{}|{}", self.initial, self.final_share)
    }

    /// Settings indistinguishable from `b` under the final share: what the
    /// input side already knows once the final outcome is fixed.
    pub fn advanced_cell(&self, b: &BitString) -> SettingSet {
        cell_of(&self.problem, &self.final_share, b)
    }

    /// Evaluates the admissibility flags of this pair at setting `b`.
    pub fn validity(&self, b: &BitString) -> Result<ValidityReport> {
        if !self.problem.sigma().contains(b) {
            return Err(Error::UnknownOutcome {
                outcome: b.to_string(),
                spec: format!("settings of {}", self.problem.name()),
            });
        }
        let cell1 = cell_of(&self.problem, &self.initial, b);
        let cell2 = cell_of(&self.problem, &self.final_share, b);
        let intersection = cell1.intersect(&cell2);
        let s_sigma = self.problem.solution_image(self.problem.sigma()).len();
        let s1 = self.problem.solution_image(&cell1).len();
        let s2 = self.problem.solution_image(&cell2).len();
        let s12 = self.problem.solution_image(&intersection).len();
        Ok(ValidityReport {
            setting: *b,
            outcome1: self.initial.signature(b),
            outcome2: self.final_share.signature(b),
            cell1,
            cell2,
            intersection,
            c1: (s_sigma as f64).log2() - (s1 as f64).log2(),
            c2: (s_sigma as f64).log2() - (s2 as f64).log2(),
            even: s1 == s2,
            non_redundant: s_sigma * s12 <= s1 * s2,
            jointly_determining: s12 == 1,
            setting_even: self.initial.outcome_width() == self.final_share.outcome_width(),
        })
    }
}

fn check_share_sizes(n1: usize, n2: usize, near_even: bool) -> Result<()> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidSubset { detail: "both shares must be non-empty".into() });
    }
    let gap = n1.abs_diff(n2);
    let allowed = if near_even { 1 } else { 0 };
    if gap > allowed {
        return Err(Error::InvalidSubset {
            detail: format!("share sizes {n1} and {n2} differ by more than {allowed}"),
        });
    }
    Ok(())
}

/// All settings whose signature under `spec` matches that of `b`.
pub fn cell_of(problem: &OracleProblem, spec: &MeasurementSpec, b: &BitString) -> SettingSet {
    let want = spec.signature(b);
    let members: Vec<BitString> =
        problem.sigma().iter().filter(|m| spec.signature(m) == want).copied().collect();
    SettingSet::new(problem.setting_width(), members).expect("cells contain b itself")
}

/// The counting facts behind a pair's admissibility at one setting.
///
/// All flags come from exact set sizes; `c1`/`c2` are the per-share solution
/// information in bits, derived from the same counts.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub setting: BitString,
    pub outcome1: BitString,
    pub outcome2: BitString,
    pub cell1: SettingSet,
    pub cell2: SettingSet,
    pub intersection: SettingSet,
    pub c1: f64,
    pub c2: f64,
    /// Both shares narrow the solution equally far.
    pub even: bool,
    /// The shares' information adds up to no more than the whole.
    pub non_redundant: bool,
    /// Together the shares pin the solution exactly.
    pub jointly_determining: bool,
    /// The shares read equally many digits (or parities).
    pub setting_even: bool,
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.even && self.non_redundant && self.jointly_determining && self.setting_even
    }
}

/// Every sharing pair of the requested mode, in a stable order.
///
/// Coordinate pairs walk all ordered bipartitions of the digit positions;
/// linear pairs walk ordered pairs of complementary subspaces.  The linear
/// walk is brute force over all subspaces, so it is capped at 6 setting
/// digits.
pub fn enumerate_pairs(
    problem: &Arc<OracleProblem>,
    mode: SharingMode,
    near_even: bool,
) -> Result<Vec<SharingPair>> {
    let w = problem.setting_width();
    let mut pairs = Vec::new();
    match mode {
        SharingMode::Coordinate => {
            for mask in 1u32..(1 << w) - 1 {
                let positions1: Vec<usize> = (0..w).filter(|p| mask >> p & 1 == 1).collect();
                let positions2: Vec<usize> = (0..w).filter(|p| mask >> p & 1 == 0).collect();
                if check_share_sizes(positions1.len(), positions2.len(), near_even).is_err() {
                    continue;
                }
                pairs.push(SharingPair::coordinate(
                    problem.clone(),
                    positions1,
                    positions2,
                    near_even,
                )?);
            }
        }
        SharingMode::Linear => {
            if problem.encoding() != SettingEncoding::Compact {
                return Err(Error::InvalidSubset {
                    detail: format!(
                        "parity shares need a compact setting encoding; {} is table-encoded",
                        problem.name()
                    ),
                });
            }
            if w > 6 {
                return Err(Error::SizeLimit { qubits: w, limit: 6 });
            }
            for d1 in 1..w {
                let d2 = w - d1;
                if check_share_sizes(d1, d2, near_even).is_err() {
                    continue;
                }
                for v1 in gf2::subspaces(w, d1) {
                    for v2 in gf2::subspaces(w, d2) {
                        let joint: Vec<u32> = v1.iter().chain(&v2).copied().collect();
                        if gf2::rank(&joint) == w {
                            pairs.push(SharingPair::linear(
                                problem.clone(),
                                v1.clone(),
                                v2,
                                near_even,
                            )?);
                        }
                    }
                }
            }
        }
    }
    Ok(pairs)
}

/// One admissible `(pair, setting)` combination.
#[derive(Debug, Clone)]
pub struct Instance {
    pub pair: SharingPair,
    pub report: ValidityReport,
}

/// All valid instances of a mode, pairs in enumeration order and settings in
/// register order within each pair.
pub fn valid_instances(
    problem: &Arc<OracleProblem>,
    mode: SharingMode,
    near_even: bool,
) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for pair in enumerate_pairs(problem, mode, near_even)? {
        for b in problem.sigma().iter() {
            let report = pair.validity(b)?;
            if report.valid() {
                out.push(Instance { pair: pair.clone(), report });
            }
        }
    }
    Ok(out)
}

/// A physically realized instance: the final share projected on the output
/// and carried back to the input side.
#[derive(Debug)]
pub struct SharedInstance {
    pub setting: BitString,
    pub outcome1: BitString,
    pub outcome2: BitString,
    pub advanced_cell: SettingSet,
    /// Born probability of the final-share outcome.
    pub probability: f64,
    /// Back-propagated post-selected state, normalized.
    pub input_side: StateVector,
    /// Overlap with the uniform superposition over the advanced cell.
    pub match_fidelity: f64,
}

/// Runs the program forward, projects the final share on `b`'s outcome, and
/// propagates the result back to the input.
///
/// The returned state must be the uniform superposition over the advanced
/// cell — the projection commutes with every block-diagonal step — and a
/// miss beyond 1e-9 is a hard error, since it would mean the simulator broke
/// that commutation.
pub fn make_instance(
    algo: &AlgorithmUnitary,
    pair: &SharingPair,
    b: &BitString,
) -> Result<SharedInstance> {
    let outcome2 = pair.final_share().signature(b);
    let output = algo.forward(&algo.initial_state()?)?;
    let (kept, probability) = project(&output, pair.final_share(), &outcome2)?;
    let input_side = algo.backward(&kept.normalized())?;
    let advanced_cell = pair.advanced_cell(b);
    let target = uniform_over_cell(algo, &advanced_cell)?;
    let match_fidelity = target.fidelity(&input_side)?;
    if match_fidelity < 1.0 - crate::algorithms::STATE_TOL {
        return Err(Error::InstanceMismatch { fidelity: match_fidelity });
    }
    Ok(SharedInstance {
        setting: *b,
        outcome1: pair.initial_share().signature(b),
        outcome2,
        advanced_cell,
        probability,
        input_side,
        match_fidelity,
    })
}

fn uniform_over_cell(algo: &AlgorithmUnitary, cell: &SettingSet) -> Result<StateVector> {
    let layout = algo.layout();
    let amp = Complex64::new(1.0 / (cell.len() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::ZERO; layout.dim()];
    for b in cell.iter() {
        amps[layout.index(b.value(), 0, 0)] = amp;
    }
    StateVector::from_amplitudes(layout, amps)
}

/// Full round trip of one instance: project the final share on the output,
/// carry it back, then read the initial share.  Returns the fidelity of the
/// doubly-selected state against the bare `|b>|0...>` input branch — exactly
/// 1 whenever the pair jointly determines the setting.
pub fn round_trip_check(
    algo: &AlgorithmUnitary,
    pair: &SharingPair,
    b: &BitString,
) -> Result<f64> {
    let shared = make_instance(algo, pair, b)?;
    let (kept, _) = project(&shared.input_side, pair.initial_share(), &shared.outcome1)?;
    let reference = StateVector::basis(algo.layout(), b.value(), 0, 0);
    reference.fidelity(&kept.normalized())
}

/// Checks that the final-share measurement is invisible from the input side:
/// Alice's initial-share outcome distribution is the same whether or not the
/// final share was read.  Returns the Bhattacharyya fidelity between the two
/// distributions (1.0 means no disturbance).
pub fn bob_invariance_check(algo: &AlgorithmUnitary, pair: &SharingPair) -> Result<f64> {
    let input = algo.initial_state()?;
    let output = algo.forward(&input)?;
    let w1 = pair.initial_share().outcome_width();
    let w2 = pair.final_share().outcome_width();
    let mut undisturbed = Vec::new();
    let mut conditioned = Vec::new();
    for o1 in 0..1u32 << w1 {
        let o1 = BitString::new(o1, w1);
        let (_, p_plain) = project(&input, pair.initial_share(), &o1)?;
        undisturbed.push(p_plain);
        let mut total = 0.0;
        for o2 in 0..1u32 << w2 {
            let o2 = BitString::new(o2, w2);
            let (kept, p2) = project(&output, pair.final_share(), &o2)?;
            if p2 == 0.0 {
                continue;
            }
            let back = algo.backward(&kept.normalized())?;
            let (_, p1_given_2) = project(&back, pair.initial_share(), &o1)?;
            total += p2 * p1_given_2;
        }
        conditioned.push(total);
    }
    let overlap: f64 = undisturbed
        .iter()
        .zip(&conditioned)
        .map(|(p, q)| (p * q).sqrt())
        .sum();
    Ok(overlap * overlap)
}

/// How well the valid instances of a mode reassemble the full run.
#[derive(Debug)]
pub struct RebuildReport {
    /// Every setting is covered by at least one valid instance, and each
    /// covering instance still solves it exactly.
    pub support_ok: bool,
    /// Mass each setting receives across the instance ensemble, in register
    /// order over the settings.
    pub weight_vector: Vec<(BitString, f64)>,
    /// Whether that mass is spread the way the original input spreads it.
    pub proportional: bool,
    /// Bhattacharyya fidelity between the normalized weights and the input's
    /// uniform distribution.
    pub fidelity: f64,
}

/// Sums the valid instances (deduplicated per advanced cell) into a weight
/// per setting and compares against the uniform input.
pub fn rebuild_check(
    algo: &AlgorithmUnitary,
    mode: SharingMode,
    near_even: bool,
) -> Result<RebuildReport> {
    let problem = algo.problem().clone();
    let instances = valid_instances(&problem, mode, near_even)?;
    let mut seen: BTreeSet<(String, Vec<BitString>)> = BTreeSet::new();
    let mut weights: Vec<(BitString, f64)> =
        problem.sigma().iter().map(|b| (*b, 0.0)).collect();
    let mut support_ok = true;
    let mut covered = vec![false; problem.sigma().len()];
    for inst in &instances {
        let key = (inst.pair.label(), inst.report.cell2.members().to_vec());
        if !seen.insert(key) {
            continue; // same pair and same advanced cell: one physical instance
        }
        let shared = make_instance(algo, &inst.pair, &inst.report.setting)?;
        let run = algo.forward(&shared.input_side)?;
        for (i, (b, w)) in weights.iter_mut().enumerate() {
            if !shared.advanced_cell.contains(b) {
                continue;
            }
            covered[i] = true;
            *w += shared.probability * run.block_mass(b.value());
            if algo.setting_success(&run, b) < 1.0 - crate::algorithms::SUCCESS_TOL {
                support_ok = false;
            }
        }
    }
    support_ok &= covered.iter().all(|c| *c);
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    let n = weights.len() as f64;
    let mut fidelity = 0.0;
    let mut proportional = total > 0.0;
    for (_, w) in &weights {
        let p = if total > 0.0 { w / total } else { 0.0 };
        fidelity += (p / n).sqrt();
        if (p - 1.0 / n).abs() > 1e-9 {
            proportional = false;
        }
    }
    Ok(RebuildReport { support_ok, weight_vector: weights, proportional, fidelity: fidelity * fidelity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{build_deutsch_jozsa, build_grover};
    use crate::oracle::{make_deutsch_jozsa, make_grover, make_simon};

    fn bs(s: &str) -> BitString {
        BitString::parse(s, None).unwrap()
    }

    fn cells_at(
        problem: &Arc<OracleProblem>,
        mode: SharingMode,
        b: &str,
    ) -> BTreeSet<Vec<BitString>> {
        valid_instances(problem, mode, false)
            .unwrap()
            .into_iter()
            .filter(|i| i.report.setting == bs(b))
            .map(|i| i.report.cell2.members().to_vec())
            .collect()
    }

    #[test]
    fn drawer_parity_shares_give_three_advanced_cells() {
        let p = make_grover(2).unwrap();
        let cells = cells_at(&p, SharingMode::Linear, "01");
        let expect: BTreeSet<Vec<BitString>> = [
            vec![bs("01"), bs("11")],
            vec![bs("00"), bs("01")],
            vec![bs("01"), bs("10")],
        ]
        .into_iter()
        .map(|mut v| {
            v.sort();
            v
        })
        .collect();
        assert_eq!(cells, expect);
    }

    #[test]
    fn drawer_digit_shares_give_two_advanced_cells() {
        let p = make_grover(2).unwrap();
        let cells = cells_at(&p, SharingMode::Coordinate, "01");
        let expect: BTreeSet<Vec<BitString>> =
            [vec![bs("01"), bs("11")], vec![bs("00"), bs("01")]].into_iter().collect();
        assert_eq!(cells, expect);
    }

    #[test]
    fn balanced_table_keeps_exactly_two_valid_cells() {
        let p = make_deutsch_jozsa(2).unwrap();
        let cells = cells_at(&p, SharingMode::Coordinate, "0011");
        let expect: BTreeSet<Vec<BitString>> =
            [vec![bs("0000"), bs("0011")], vec![bs("0011"), bs("1111")]].into_iter().collect();
        assert_eq!(cells, expect);
    }

    #[test]
    fn interleaved_digit_split_of_a_balanced_table_is_redundant() {
        let p = make_deutsch_jozsa(2).unwrap();
        let pair = SharingPair::coordinate(p.clone(), vec![0, 2], vec![1, 3], false).unwrap();
        let report = pair.validity(&bs("0011")).unwrap();
        assert!(report.jointly_determining);
        assert!(report.even);
        assert!(!report.non_redundant, "each share alone already fixes the answer");
        assert!(!report.valid());
        // and both shares carry the full bit on their own
        assert_eq!(report.c1, 1.0);
        assert_eq!(report.c2, 1.0);
    }

    #[test]
    fn zero_contribution_shares_can_still_determine_jointly() {
        let p = make_deutsch_jozsa(2).unwrap();
        let pair = SharingPair::coordinate(p.clone(), vec![0, 1], vec![2, 3], false).unwrap();
        let report = pair.validity(&bs("0011")).unwrap();
        assert!(report.valid());
        assert_eq!(report.c1, 0.0);
        assert_eq!(report.c2, 0.0);
        assert_eq!(report.intersection.members(), &[bs("0011")]);
    }

    #[test]
    fn alternating_table_has_one_valid_bipartition() {
        let p = make_deutsch_jozsa(2).unwrap();
        let cells = cells_at(&p, SharingMode::Coordinate, "0101");
        let expect: BTreeSet<Vec<BitString>> =
            [vec![bs("0000"), bs("0101")], vec![bs("0101"), bs("1111")]].into_iter().collect();
        assert_eq!(cells, expect, "only the even/odd position split is admissible");
    }

    #[test]
    fn constant_table_admits_every_bipartition() {
        let p = make_deutsch_jozsa(2).unwrap();
        let cells = cells_at(&p, SharingMode::Coordinate, "0000");
        assert_eq!(cells.len(), 6);
        for cell in &cells {
            assert_eq!(cell.len(), 2);
            assert!(cell.contains(&bs("0000")));
        }
    }

    #[test]
    fn ordered_bipartition_count_matches_binomials() {
        let p = make_grover(4).unwrap();
        assert_eq!(enumerate_pairs(&p, SharingMode::Coordinate, false).unwrap().len(), 6);
        let p3 = make_grover(3).unwrap();
        assert!(enumerate_pairs(&p3, SharingMode::Coordinate, false).unwrap().is_empty());
        assert_eq!(enumerate_pairs(&p3, SharingMode::Coordinate, true).unwrap().len(), 6);
    }

    #[test]
    fn linear_pairs_reject_table_encodings() {
        let p = make_simon(2).unwrap();
        assert_eq!(
            enumerate_pairs(&p, SharingMode::Linear, false).unwrap_err().contract(),
            "INVALID_SUBSET"
        );
    }

    #[test]
    fn overlapping_or_uncovering_digit_shares_are_rejected() {
        let p = make_grover(2).unwrap();
        let overlap = SharingPair::coordinate(p.clone(), vec![0], vec![0, 1], false);
        assert_eq!(overlap.unwrap_err().contract(), "INVALID_SUBSET");
        let gap = SharingPair::coordinate(p.clone(), vec![0], vec![], false);
        assert_eq!(gap.unwrap_err().contract(), "INVALID_SUBSET");
    }

    #[test]
    fn dependent_parity_spans_are_rejected() {
        let p = make_grover(2).unwrap();
        let pair = SharingPair::linear(p.clone(), vec![0b01], vec![0b01], false);
        assert_eq!(pair.unwrap_err().contract(), "INVALID_SUBSET");
    }

    #[test]
    fn instance_back_propagates_to_the_advanced_cell() {
        let algo = build_grover(2).unwrap();
        let pair =
            SharingPair::coordinate(algo.problem().clone(), vec![0], vec![1], false).unwrap();
        let inst = make_instance(&algo, &pair, &bs("01")).unwrap();
        assert_eq!(inst.advanced_cell.members(), &[bs("01"), bs("11")]);
        assert!((inst.probability - 0.5).abs() < 1e-12);
        assert!(inst.match_fidelity > 1.0 - 1e-12);
        // the advanced state is uniform over the cell with blank work digits
        let amp = inst.input_side.amplitude(0b01, 0, 0);
        assert!((amp.norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn valid_instances_round_trip_to_the_bare_setting() {
        let grover = build_grover(2).unwrap();
        for mode in [SharingMode::Coordinate, SharingMode::Linear] {
            for inst in valid_instances(grover.problem(), mode, false).unwrap() {
                let f = round_trip_check(&grover, &inst.pair, &inst.report.setting).unwrap();
                assert!(f > 1.0 - 1e-9, "{} at {}: {f}", inst.pair.label(), inst.report.setting);
            }
        }
        let dj = build_deutsch_jozsa(2).unwrap();
        for inst in valid_instances(dj.problem(), SharingMode::Coordinate, false).unwrap() {
            let f = round_trip_check(&dj, &inst.pair, &inst.report.setting).unwrap();
            assert!(f > 1.0 - 1e-9, "{} at {}: {f}", inst.pair.label(), inst.report.setting);
        }
    }

    #[test]
    fn late_measurement_is_invisible_early() {
        let algo = build_grover(2).unwrap();
        for pair in enumerate_pairs(algo.problem(), SharingMode::Linear, false).unwrap() {
            let f = bob_invariance_check(&algo, &pair).unwrap();
            assert!(f > 1.0 - 1e-12, "pair {}: fidelity {f}", pair.label());
        }
        let dj = build_deutsch_jozsa(2).unwrap();
        let pair = SharingPair::coordinate(dj.problem().clone(), vec![0, 1], vec![2, 3], false)
            .unwrap();
        assert!(bob_invariance_check(&dj, &pair).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn drawer_instances_rebuild_the_uniform_input() {
        let algo = build_grover(2).unwrap();
        for mode in [SharingMode::Coordinate, SharingMode::Linear] {
            let report = rebuild_check(&algo, mode, false).unwrap();
            assert!(report.support_ok);
            assert!(report.proportional, "{mode:?}");
            assert!(report.fidelity > 1.0 - 1e-12);
        }
    }

    #[test]
    fn table_instances_cover_but_skew_the_input() {
        let algo = build_deutsch_jozsa(2).unwrap();
        let report = rebuild_check(&algo, SharingMode::Coordinate, false).unwrap();
        assert!(report.support_ok, "every table is still solved in its instances");
        assert!(!report.proportional, "constant tables are over-represented");
        assert!(report.fidelity < 1.0);
    }
}

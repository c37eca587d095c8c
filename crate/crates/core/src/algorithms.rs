//! Query algorithms as explicit unitary programs.
//!
//! An [`AlgorithmUnitary`] is an ordered list of operators over a fixed
//! register layout, with the oracle calls tagged; the tag count *is* the
//! query count.  Every non-oracle step acts as the identity on the setting
//! register, so a program learns about the setting only through queries.
//!
//! The solved output convention: the argument register ends holding the
//! solution as an integer (leading digits blank), the workspace ends blank.
//! `run_relativized` measures how close a program comes to the ideal
//! `sum_b |b>|s(b)>` form and reports per-setting success of the solution
//! readout, which is always the low solution-width digits of A.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::oracle::OracleProblem;
use crate::state::{
    canonical_solved_state, init_superposed_input, project, MeasurementSpec, Operator,
    OracleBinding, Register, RegisterLayout, StateVector,
};

/// Name of the deterministic generator used wherever sampling is needed.
pub const RNG_NAME: &str = "chacha12";

/// Fidelity tolerance for state-form assertions.
pub const STATE_TOL: f64 = 1e-9;

/// Tolerance on calibrated success probabilities.
pub const SUCCESS_TOL: f64 = 1e-6;

/// One step of a program; `oracle` marks the counted queries.
#[derive(Debug, Clone)]
pub struct Step {
    pub op: Operator,
    pub oracle: bool,
}

/// Iteration count and replacement phase of the calibrated search.
///
/// Both reflections of each iteration turn by `phase` instead of pi; the
/// calibration picks the smallest iteration count whose best phase reaches
/// success 1 within tolerance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LongParameters {
    pub iterations: u32,
    pub phase: f64,
}

/// A query program bound to its problem.
#[derive(Debug, Clone)]
pub struct AlgorithmUnitary {
    name: String,
    problem: Arc<OracleProblem>,
    layout: RegisterLayout,
    steps: Vec<Step>,
    /// Whether the program promises the exact solved output form.
    asserts_canonical: bool,
    long: Option<LongParameters>,
}

impl AlgorithmUnitary {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn problem(&self) -> &Arc<OracleProblem> {
        &self.problem
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn asserts_canonical(&self) -> bool {
        self.asserts_canonical
    }

    pub fn long_parameters(&self) -> Option<LongParameters> {
        self.long
    }

    /// Number of oracle calls in one forward pass.
    pub fn query_count(&self) -> u32 {
        self.steps.iter().filter(|s| s.oracle).count() as u32
    }

    /// Applies all steps in order.
    pub fn forward(&self, state: &StateVector) -> Result<StateVector> {
        let mut s = state.clone();
        for step in &self.steps {
            s = step.op.apply(&s)?;
        }
        Ok(s)
    }

    /// Applies the adjoint program (adjoint steps, reversed order).
    pub fn backward(&self, state: &StateVector) -> Result<StateVector> {
        let mut s = state.clone();
        for step in self.steps.iter().rev() {
            s = step.op.adjoint().apply(&s)?;
        }
        Ok(s)
    }

    /// The shared relativized input for this program's layout.
    pub fn initial_state(&self) -> Result<StateVector> {
        init_superposed_input(&self.problem, self.layout)
    }

    /// Success of the solution readout within one setting block of `state`:
    /// the probability that the low solution digits of A read `s(b)`,
    /// conditioned on the setting register holding `b`.
    pub fn setting_success(&self, state: &StateVector, b: &BitString) -> f64 {
        let layout = self.layout;
        let sol_width = self.problem.solution_width();
        let sol_mask = (1u32 << sol_width) - 1;
        let want = self.problem.solution_value(b.value());
        let mut block = 0.0;
        let mut hit = 0.0;
        for (idx, amp) in state.amplitudes().iter().enumerate() {
            let (bv, av, _) = layout.split(idx);
            if bv == b.value() {
                let p = amp.norm_sqr();
                block += p;
                if av & sol_mask == want {
                    hit += p;
                }
            }
        }
        if block > 0.0 {
            hit / block
        } else {
            0.0
        }
    }
}

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

fn hadamard_argument_digits(layout: RegisterLayout, digits: usize) -> Vec<Step> {
    (0..digits)
        .map(|p| Step { op: Operator::hadamard(layout.a_qubit(p)), oracle: false })
        .collect()
}

/// One-iteration hidden-drawer search.  Exact only over 4 drawers; larger
/// instances must go through [`build_grover_long`].
pub fn build_grover(n: usize) -> Result<AlgorithmUnitary> {
    if n != 2 {
        return Err(Error::UseLongVariant { n });
    }
    let problem = crate::oracle::make_grover(n)?;
    let layout = RegisterLayout::new(n, n, 0)?;
    let a_targets: Vec<usize> = (0..n).map(|p| layout.a_qubit(p)).collect();
    let mut steps = hadamard_argument_digits(layout, n);
    steps.push(Step {
        op: Operator::oracle_phase(OracleBinding::controlled(problem.clone()), PI)?,
        oracle: true,
    });
    steps.extend(hadamard_argument_digits(layout, n));
    steps.push(Step { op: Operator::Reflection { targets: a_targets, angle: PI }, oracle: false });
    steps.extend(hadamard_argument_digits(layout, n));
    // the three reflections above compose to minus the textbook iteration;
    // cancel the sign so the output is literally |b>|b>
    steps.push(Step { op: Operator::GlobalPhase { angle: PI }, oracle: false });
    Ok(AlgorithmUnitary {
        name: format!("grover[n={n}]"),
        problem,
        layout,
        steps,
        asserts_canonical: true,
        long: None,
    })
}

/// Success probability of the phase-replaced search in its two-dimensional
/// invariant subspace (span of the marked state and the uniform rest).
///
/// This reduced model is exact: each setting block of the full circuit stays
/// inside that plane, so it doubles as an independent check on the
/// calibration.
pub fn long_reduced_success(n: usize, iterations: u32, phase: f64) -> f64 {
    let nn = (1u64 << n) as f64;
    let alpha = 1.0 / nn.sqrt();
    let beta = (1.0 - 1.0 / nn).sqrt();
    let rot = Complex64::from_polar(1.0, phase);
    let mut x = Complex64::new(alpha, 0.0);
    let mut y = Complex64::new(beta, 0.0);
    for _ in 0..iterations {
        x *= rot;
        let overlap = x * alpha + y * beta;
        let shift = (rot - 1.0) * overlap;
        x += shift * alpha;
        y += shift * beta;
    }
    x.norm_sqr()
}

/// Finds the smallest iteration count and the matching phase that drive the
/// search success to 1 (within 1e-9 in the reduced model).
///
/// Pure numerics: a coarse phase grid per candidate count, then a ternary
/// refinement around the best grid point.  Deterministic for a given `n`.
pub fn calibrate_long(n: usize) -> Result<LongParameters> {
    const GRID: usize = 512;
    let max_iters = 2 * (1u32 << (n / 2 + 1)) + 4;
    for iterations in 1..=max_iters {
        let mut best_phase = PI;
        let mut best = long_reduced_success(n, iterations, PI);
        for k in 1..=GRID {
            let phase = PI * k as f64 / GRID as f64;
            let p = long_reduced_success(n, iterations, phase);
            if p > best {
                best = p;
                best_phase = phase;
            }
        }
        // ternary-search refinement inside the bracketing grid cell
        let mut lo = (best_phase - PI / GRID as f64).max(0.0);
        let mut hi = (best_phase + PI / GRID as f64).min(PI);
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if long_reduced_success(n, iterations, m1) < long_reduced_success(n, iterations, m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let phase = 0.5 * (lo + hi);
        let p = long_reduced_success(n, iterations, phase);
        if p >= 1.0 - 1e-9 {
            return Ok(LongParameters { iterations, phase });
        }
    }
    Err(Error::CalibrationFailed {
        n,
        detail: format!("no phase reaches certainty within {max_iters} iterations"),
    })
}

/// Zero-failure hidden-drawer search: the pi phases of the standard iteration
/// are replaced by a calibrated angle and iterated a calibrated number of
/// times, so the marked state is reached exactly rather than approximately.
pub fn build_grover_long(n: usize) -> Result<AlgorithmUnitary> {
    let problem = crate::oracle::make_grover(n)?;
    let long = calibrate_long(n)?;
    let layout = RegisterLayout::new(n, n, 0)?;
    let a_targets: Vec<usize> = (0..n).map(|p| layout.a_qubit(p)).collect();
    let mut steps = hadamard_argument_digits(layout, n);
    for _ in 0..long.iterations {
        steps.push(Step {
            op: Operator::oracle_phase(OracleBinding::controlled(problem.clone()), long.phase)?,
            oracle: true,
        });
        steps.extend(hadamard_argument_digits(layout, n));
        steps.push(Step {
            op: Operator::Reflection { targets: a_targets.clone(), angle: long.phase },
            oracle: false,
        });
        steps.extend(hadamard_argument_digits(layout, n));
    }
    Ok(AlgorithmUnitary {
        name: format!("grover-long[n={n}]"),
        problem,
        layout,
        steps,
        asserts_canonical: true,
        long: Some(long),
    })
}

/// One-query constant-vs-balanced decision.
///
/// Layout: A holds the n argument digits plus one trailing solution digit;
/// W holds the single answer digit, prepared to `|->` and restored after the
/// query.  A query-free reversible OR of the argument digits then writes the
/// balanced bit into the solution digit.  The readout digit is exact for
/// every table, but the argument digits keep a residue for balanced tables,
/// so this program does not promise the canonical solved form.
pub fn build_deutsch_jozsa(n: usize) -> Result<AlgorithmUnitary> {
    let problem = crate::oracle::make_deutsch_jozsa(n)?;
    let layout = RegisterLayout::new(problem.setting_width(), n + 1, 1)?;
    let w = layout.w_qubit(0);
    let mut steps = vec![
        Step { op: Operator::pauli_x(w), oracle: false },
        Step { op: Operator::hadamard(w), oracle: false },
    ];
    steps.extend(hadamard_argument_digits(layout, n));
    steps.push(Step {
        op: Operator::OracleXor { oracle: OracleBinding::controlled(problem.clone()) },
        oracle: true,
    });
    steps.extend(hadamard_argument_digits(layout, n));
    steps.push(Step { op: Operator::hadamard(w), oracle: false });
    steps.push(Step { op: Operator::pauli_x(w), oracle: false });
    steps.push(Step {
        op: Operator::FlipIfAnySet {
            target: layout.a_qubit(n),
            controls: (0..n).map(|p| layout.a_qubit(p)).collect(),
        },
        oracle: false,
    });
    Ok(AlgorithmUnitary {
        name: format!("dj[n={n}]"),
        problem,
        layout,
        steps,
        asserts_canonical: false,
        long: None,
    })
}

/// One-query hidden-mask recovery; the Hadamard sandwich turns parity phases
/// into the mask itself, hitting the canonical form exactly.
pub fn build_bernstein_vazirani(n: usize) -> Result<AlgorithmUnitary> {
    let problem = crate::oracle::make_bernstein_vazirani(n)?;
    let layout = RegisterLayout::new(n, n, 0)?;
    let mut steps = hadamard_argument_digits(layout, n);
    steps.push(Step {
        op: Operator::oracle_phase(OracleBinding::controlled(problem.clone()), PI)?,
        oracle: true,
    });
    steps.extend(hadamard_argument_digits(layout, n));
    Ok(AlgorithmUnitary {
        name: format!("bv[n={n}]"),
        problem,
        layout,
        steps,
        asserts_canonical: false,
        long: None,
    })
}

/// The hidden-period problem run with the whole setting register present.
///
/// Useful only to exhibit that a sampling algorithm has no canonical solved
/// output; the practical path is [`run_simon`].
pub fn build_simon_relativized(n: usize) -> Result<AlgorithmUnitary> {
    let problem = crate::oracle::make_simon(n)?;
    let layout = RegisterLayout::new(problem.setting_width(), n, n)?;
    let mut steps = hadamard_argument_digits(layout, n);
    steps.push(Step {
        op: Operator::OracleXor { oracle: OracleBinding::controlled(problem.clone()) },
        oracle: true,
    });
    steps.extend(hadamard_argument_digits(layout, n));
    Ok(AlgorithmUnitary {
        name: format!("simon[n={n}]"),
        problem,
        layout,
        steps,
        asserts_canonical: false,
        long: None,
    })
}

/// One sampling pass of the period-finding circuit for a fixed table.
fn build_simon_pass(problem: &Arc<OracleProblem>, n: usize, b: BitString) -> Result<AlgorithmUnitary> {
    let layout = RegisterLayout::new(0, n, n)?;
    let mut steps = hadamard_argument_digits(layout, n);
    steps.push(Step {
        op: Operator::OracleXor { oracle: OracleBinding::fixed(problem.clone(), b) },
        oracle: true,
    });
    steps.extend(hadamard_argument_digits(layout, n));
    Ok(AlgorithmUnitary {
        name: format!("simon-pass[n={n}]"),
        problem: problem.clone(),
        layout,
        steps,
        asserts_canonical: false,
        long: None,
    })
}

// ---------------------------------------------------------------------------
// runs
// ---------------------------------------------------------------------------

/// Outcome of one relativized run (no setting measured, the whole
/// superposition propagated).
#[derive(Debug)]
pub struct RunResult {
    pub algorithm: String,
    pub queries: u32,
    /// `(setting, probability the readout digits hold the solution)`.
    pub per_setting_success: Vec<(BitString, f64)>,
    /// Overlap with the ideal solved form `sum_b |b>|s(b)>|0>`.
    pub canonical_fidelity: f64,
    pub canonical_ok: bool,
    pub output: StateVector,
    pub annotations: Vec<String>,
}

impl RunResult {
    pub fn min_success(&self) -> f64 {
        self.per_setting_success.iter().map(|(_, p)| *p).fold(f64::INFINITY, f64::min)
    }
}

/// Propagates the full superposed input and grades the output.
///
/// Programs promising the canonical form fail hard when they miss it; other
/// programs get the miss recorded as an annotation instead.
pub fn run_relativized(algo: &AlgorithmUnitary) -> Result<RunResult> {
    let input = algo.initial_state()?;
    let output = algo.forward(&input)?;
    let problem = algo.problem();
    let canon = canonical_solved_state(problem, algo.layout())?;
    let canonical_fidelity = canon.fidelity(&output)?;
    let canonical_ok = canonical_fidelity >= 1.0 - STATE_TOL;
    let mut annotations = Vec::new();
    if !canonical_ok {
        if algo.asserts_canonical() {
            return Err(Error::OutputNotCanonical {
                algorithm: algo.name().into(),
                fidelity: canonical_fidelity,
            });
        }
        annotations
            .push(format!("output is not the solved form (fidelity {canonical_fidelity:.3e})"));
    }
    let per_setting_success = problem
        .sigma()
        .iter()
        .map(|b| (*b, algo.setting_success(&output, b)))
        .collect();
    Ok(RunResult {
        algorithm: algo.name().into(),
        queries: algo.query_count(),
        per_setting_success,
        canonical_fidelity,
        canonical_ok,
        output,
        annotations,
    })
}

/// Outcome of an extended-representation run: the setting register is
/// measured first, then the program runs on the surviving branch.
#[derive(Debug)]
pub struct ExtendedRun {
    pub setting: BitString,
    /// Probability of the chosen setting in the initial measurement.
    pub setting_probability: f64,
    pub queries: u32,
    /// Probability the readout digits hold the solution afterwards.
    pub success: f64,
    pub solution: BitString,
    pub output: StateVector,
}

/// Measures the full setting register on outcome `b`, then runs the program.
pub fn run_extended(algo: &AlgorithmUnitary, b: &BitString) -> Result<ExtendedRun> {
    let problem = algo.problem().clone();
    if !problem.sigma().contains(b) {
        return Err(Error::UnknownOutcome {
            outcome: b.to_string(),
            spec: format!("settings of {}", problem.name()),
        });
    }
    let input = algo.initial_state()?;
    let spec = MeasurementSpec::full(Register::B, algo.layout().b_qubits);
    let (projected, setting_probability) = project(&input, &spec, b)?;
    let output = algo.forward(&projected.normalized())?;
    Ok(ExtendedRun {
        setting: *b,
        setting_probability,
        queries: algo.query_count(),
        success: algo.setting_success(&output, b),
        solution: problem.solution(b),
        output,
    })
}

// ---------------------------------------------------------------------------
// period-finding controller
// ---------------------------------------------------------------------------

/// What happened for one hidden-period table.
#[derive(Debug, Clone)]
pub struct SimonSettingRun {
    pub setting: BitString,
    pub period: BitString,
    /// Sampled argument-register values, one per circuit run.
    pub samples: Vec<BitString>,
    /// Every sample must be orthogonal to the period (GF(2) dot product 0).
    pub all_orthogonal: bool,
    /// Circuit runs used; each run costs exactly one query.
    pub runs: u32,
    pub recovered: BitString,
    pub ok: bool,
}

/// Sweep of the sampling controller over every table of the family.
#[derive(Debug)]
pub struct SimonReport {
    pub n: usize,
    pub seed: u64,
    pub rng: &'static str,
    pub per_setting: Vec<SimonSettingRun>,
}

impl SimonReport {
    pub fn all_ok(&self) -> bool {
        self.per_setting.iter().all(|r| r.ok && r.all_orthogonal)
    }

    pub fn max_runs(&self) -> u32 {
        self.per_setting.iter().map(|r| r.runs).max().unwrap_or(0)
    }
}

/// Runs the one-query sampling circuit until the collected samples span the
/// period's orthogonal complement, then solves for the period.
///
/// The sample distribution is computed exactly from the statevector and drawn
/// with a seeded `chacha12` stream, so a `(n, seed)` pair fixes every number
/// in the report.  A setting that makes no progress within `64 * n` runs
/// aborts the sweep.
pub fn run_simon(n: usize, seed: u64) -> Result<SimonReport> {
    let problem = crate::oracle::make_simon(n)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let budget = 64 * n as u32;
    let mut per_setting = Vec::with_capacity(problem.sigma().len());
    for b in problem.sigma().iter() {
        let pass = build_simon_pass(&problem, n, *b)?;
        let state = pass.forward(&StateVector::basis(pass.layout(), 0, 0, 0))?;
        // exact argument-register distribution for this table
        let mut dist = vec![0.0f64; 1 << n];
        for (idx, amp) in state.amplitudes().iter().enumerate() {
            let (_, a, _) = pass.layout().split(idx);
            dist[a as usize] += amp.norm_sqr();
        }
        let period = problem.solution(b);
        let mut samples = Vec::new();
        let mut rows: Vec<u32> = Vec::new();
        let mut all_orthogonal = true;
        let mut runs = 0u32;
        while crate::gf2::rank(&rows) < n - 1 {
            if runs >= budget {
                return Err(Error::SamplingStall { runs: runs as usize, n });
            }
            runs += 1;
            let y = draw(&mut rng, &dist);
            let y = BitString::new(y, n);
            samples.push(y);
            if (y.value() & period.value()).count_ones() % 2 == 1 {
                all_orthogonal = false;
            }
            rows.push(y.value());
        }
        let basis = crate::gf2::nullspace(&rows, n);
        debug_assert_eq!(basis.len(), 1);
        let recovered = BitString::new(basis[0], n);
        per_setting.push(SimonSettingRun {
            setting: *b,
            period,
            samples,
            all_orthogonal,
            runs,
            recovered,
            ok: recovered == period,
        });
    }
    Ok(SimonReport { n, seed, rng: RNG_NAME, per_setting })
}

/// One setting drawn as the initial measurement would draw it: uniformly
/// over the setting set, from the named seeded stream.
pub fn draw_setting(problem: &OracleProblem, seed: u64) -> BitString {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    problem.sigma().members()[rng.random_range(0..problem.sigma().len())]
}

/// Inverse-CDF draw from an exact distribution.
fn draw(rng: &mut ChaCha12Rng, dist: &[f64]) -> u32 {
    let roll: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in dist.iter().enumerate() {
        acc += p;
        if roll < acc {
            return i as u32;
        }
    }
    (dist.len() - 1) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;

    fn bs(s: &str) -> BitString {
        BitString::parse(s, None).unwrap()
    }

    #[test]
    fn one_iteration_search_is_exact_per_drawer() {
        let algo = build_grover(2).unwrap();
        for b in 0..4u32 {
            let input = StateVector::basis(algo.layout(), b, 0, 0);
            let out = algo.forward(&input).unwrap();
            let amp = out.amplitude(b, b, 0);
            assert!((amp - Complex64::ONE).norm() < 1e-12, "drawer {b}: {amp}");
        }
    }

    #[test]
    fn relativized_search_output_is_the_solved_form() {
        let algo = build_grover(2).unwrap();
        let run = run_relativized(&algo).unwrap();
        assert_eq!(run.queries, 1);
        assert!(run.canonical_ok);
        assert!(run.min_success() > 1.0 - 1e-12);
        // projecting the output's argument register on 01 leaves |01>|01>
        let spec = MeasurementSpec::full(Register::A, 2);
        let (kept, prob) = project(&run.output, &spec, &bs("01")).unwrap();
        assert!((prob - 0.25).abs() < 1e-12);
        assert!((kept.amplitude(0b01, 0b01, 0).norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn larger_search_requires_the_calibrated_variant() {
        assert_eq!(build_grover(3).unwrap_err().contract(), "USE_LONG_VARIANT");
    }

    #[test]
    fn calibration_matches_the_rotation_count_bound() {
        // smallest J with (2J+1) theta >= pi/2, theta = asin(2^{-n/2})
        for n in [1usize, 2, 4, 6] {
            let theta = (1.0 / ((1u64 << n) as f64).sqrt()).asin();
            let bound = ((PI / 2.0 - theta) / (2.0 * theta)).ceil() as u32;
            let long = calibrate_long(n).unwrap();
            assert_eq!(long.iterations, bound.max(1), "n = {n}");
            assert!(long_reduced_success(n, long.iterations, long.phase) >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn calibrated_search_is_exact_on_the_full_state() {
        let algo = build_grover_long(4).unwrap();
        let run = run_relativized(&algo).unwrap();
        assert!(run.canonical_ok);
        assert!(run.min_success() >= 1.0 - SUCCESS_TOL);
        assert_eq!(run.queries, algo.long_parameters().unwrap().iterations);
    }

    #[test]
    fn calibration_is_deterministic() {
        let a = calibrate_long(4).unwrap();
        let b = calibrate_long(4).unwrap();
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.phase.to_bits(), b.phase.to_bits());
    }

    #[test]
    fn table_decision_reads_exactly_for_all_tables() {
        let algo = build_deutsch_jozsa(2).unwrap();
        let run = run_relativized(&algo).unwrap();
        assert_eq!(run.queries, 1);
        assert!(run.min_success() > 1.0 - 1e-12);
        // the argument residue keeps the output away from the solved form
        assert!(!run.canonical_ok);
        assert!(!run.annotations.is_empty());
    }

    #[test]
    fn mask_recovery_is_canonical() {
        let algo = build_bernstein_vazirani(3).unwrap();
        let run = run_relativized(&algo).unwrap();
        assert_eq!(run.queries, 1);
        assert!(run.canonical_ok);
        assert!(run.min_success() > 1.0 - 1e-12);
    }

    #[test]
    fn extended_run_projects_the_setting_first() {
        let algo = build_grover(2).unwrap();
        let run = run_extended(&algo, &bs("01")).unwrap();
        assert!((run.setting_probability - 0.25).abs() < 1e-12);
        assert!(run.success > 1.0 - 1e-12);
        assert_eq!(run.solution, bs("01"));
    }

    #[test]
    fn period_sampling_recovers_every_table() {
        let report = run_simon(2, 0).unwrap();
        assert_eq!(report.per_setting.len(), 36);
        assert!(report.all_ok());
        assert!(report.rng == "chacha12");
    }

    #[test]
    fn period_sampling_is_seed_deterministic() {
        let a = run_simon(2, 7).unwrap();
        let b = run_simon(2, 7).unwrap();
        for (x, y) in a.per_setting.iter().zip(&b.per_setting) {
            assert_eq!(x.samples, y.samples);
        }
    }

    #[test]
    fn relativized_period_finding_is_not_canonical() {
        let algo = build_simon_relativized(2).unwrap();
        let run = run_relativized(&algo).unwrap();
        assert!(!run.canonical_ok);
    }

    #[test]
    fn oversized_relativized_period_register_is_rejected() {
        // 24 setting qubits + 3 + 3 exceed the default cap
        let err = build_simon_relativized(3).unwrap_err();
        assert_eq!(err.contract(), "SIZE_LIMIT");
    }
}

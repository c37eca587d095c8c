//! Dense statevector engine over three named registers.
//!
//! Basis states are written `|b>|a>|w>`: the *setting* register B (most
//! significant bits) carries the problem setting, the *argument* register A
//! carries query arguments and later the solution, and the *workspace*
//! register W carries answer bits and scratch.  Amplitudes are a flat
//! `Vec<Complex64>` indexed by the concatenated bits.
//!
//! Everything here is a plain immutable value; applying an operator builds a
//! new state.  The total width is capped at 24 qubits by default; set
//! `TSOW_MAX_QUBITS` to override (the cap is still validated).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::oracle::OracleProblem;

/// Default total-width cap; keeps every run at desk scale.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Values of `TSOW_MAX_QUBITS` beyond this are clamped: amplitudes are dense,
/// so 2^30 complex entries is already a 16 GiB state.
pub const HARD_MAX_QUBITS: usize = 30;

/// Current qubit cap (`TSOW_MAX_QUBITS` override, default 24).
pub fn qubit_cap() -> usize {
    std::env::var("TSOW_MAX_QUBITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
        .min(HARD_MAX_QUBITS)
}

/// Widths of the three registers.  Qubit 0 is the least significant bit of
/// the basis index (the rightmost workspace digit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    pub b_qubits: usize,
    pub a_qubits: usize,
    pub w_qubits: usize,
}

/// The two registers a measurement may address.  The workspace is never
/// measured; it must be returned to zeros instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Register {
    B,
    A,
}

impl RegisterLayout {
    pub fn new(b_qubits: usize, a_qubits: usize, w_qubits: usize) -> Result<Self> {
        let layout = Self { b_qubits, a_qubits, w_qubits };
        let cap = qubit_cap();
        if layout.total() > cap {
            return Err(Error::SizeLimit { qubits: layout.total(), limit: cap });
        }
        Ok(layout)
    }

    pub fn total(&self) -> usize {
        self.b_qubits + self.a_qubits + self.w_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.total()
    }

    /// Basis index of `|b>|a>|w>`.
    pub fn index(&self, b: u32, a: u32, w: u32) -> usize {
        debug_assert!((b as u64) < (1u64 << self.b_qubits));
        debug_assert!((a as u64) < (1u64 << self.a_qubits));
        debug_assert!((w as u64) < (1u64 << self.w_qubits));
        ((b as usize) << (self.a_qubits + self.w_qubits)) | ((a as usize) << self.w_qubits) | w as usize
    }

    pub fn split(&self, idx: usize) -> (u32, u32, u32) {
        let w = idx & ((1usize << self.w_qubits) - 1);
        let a = (idx >> self.w_qubits) & ((1usize << self.a_qubits) - 1);
        let b = idx >> (self.a_qubits + self.w_qubits);
        (b as u32, a as u32, w as u32)
    }

    pub fn register_width(&self, reg: Register) -> usize {
        match reg {
            Register::B => self.b_qubits,
            Register::A => self.a_qubits,
        }
    }

    pub fn register_value(&self, reg: Register, idx: usize) -> u32 {
        let (b, a, _) = self.split(idx);
        match reg {
            Register::B => b,
            Register::A => a,
        }
    }

    /// Global qubit index of argument-register position `pos` (0 = leftmost).
    pub fn a_qubit(&self, pos: usize) -> usize {
        assert!(pos < self.a_qubits);
        self.w_qubits + self.a_qubits - 1 - pos
    }

    pub fn b_qubit(&self, pos: usize) -> usize {
        assert!(pos < self.b_qubits);
        self.w_qubits + self.a_qubits + self.b_qubits - 1 - pos
    }

    pub fn w_qubit(&self, pos: usize) -> usize {
        assert!(pos < self.w_qubits);
        self.w_qubits - 1 - pos
    }
}

/// A (usually normalized) pure state over a [`RegisterLayout`].
#[derive(Clone)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The basis state `|b>|a>|w>`.
    pub fn basis(layout: RegisterLayout, b: u32, a: u32, w: u32) -> Self {
        let mut amps = vec![Complex64::ZERO; layout.dim()];
        amps[layout.index(b, a, w)] = Complex64::ONE;
        Self { layout, amps }
    }

    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::LengthMismatch {
                what: "amplitude vector".into(),
                expected: layout.dim(),
                found: amps.len(),
            });
        }
        Ok(Self { layout, amps })
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, b: u32, a: u32, w: u32) -> Complex64 {
        self.amps[self.layout.index(b, a, w)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Rescales to unit norm.  Panics on the zero vector.
    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        let amps = self.amps.iter().map(|c| c / n).collect();
        StateVector { layout: self.layout, amps }
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_layout(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| x.conj() * y)
            .sum())
    }

    /// `|<self|other>|^2` after normalizing both sides.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let inner = self.normalized().inner(&other.normalized())?;
        Ok(inner.norm_sqr())
    }

    /// Total weight carried by one value of the setting register.
    pub fn block_mass(&self, b: u32) -> f64 {
        let block = 1usize << (self.layout.a_qubits + self.layout.w_qubits);
        let start = (b as usize) * block;
        self.amps[start..start + block].iter().map(|c| c.norm_sqr()).sum()
    }

    /// Dump lines `bitstring<TAB>re<TAB>im`, one per amplitude with modulus
    /// above 1e-12, ordered by basis index.
    pub fn dump_lines(&self) -> Vec<String> {
        let total = self.layout.total();
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 1e-12)
            .map(|(i, c)| format!("{:0total$b}\t{}\t{}", i, c.re, c.im))
            .collect()
    }

    fn check_same_layout(&self, other: &StateVector) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch {
                detail: format!("{:?} vs {:?}", self.layout, other.layout),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector({:?}, {} amplitudes)", self.layout, self.amps.len())
    }
}

/// The shared input of every relativized run:
/// `(1/sqrt|sigma|) sum_b |b>|0...0>|0...0>`.
pub fn init_superposed_input(problem: &OracleProblem, layout: RegisterLayout) -> Result<StateVector> {
    if layout.b_qubits != problem.setting_width() {
        return Err(Error::LayoutMismatch {
            detail: format!(
                "setting register has {} qubits, settings are {} bits wide",
                layout.b_qubits,
                problem.setting_width()
            ),
        });
    }
    if layout.a_qubits < problem.solution_width() {
        return Err(Error::LayoutMismatch {
            detail: format!(
                "argument register has {} qubits, solutions need {}",
                layout.a_qubits,
                problem.solution_width()
            ),
        });
    }
    let amp = Complex64::new(1.0 / (problem.sigma().len() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::ZERO; layout.dim()];
    for b in problem.sigma().iter() {
        amps[layout.index(b.value(), 0, 0)] = amp;
    }
    Ok(StateVector { layout, amps })
}

/// The solved output form `(1/sqrt|sigma|) sum_b |b>|s(b)>|0...0>`, with the
/// solution written as an integer in the argument register.
pub fn canonical_solved_state(problem: &OracleProblem, layout: RegisterLayout) -> Result<StateVector> {
    let mut amps = vec![Complex64::ZERO; layout.dim()];
    let amp = Complex64::new(1.0 / (problem.sigma().len() as f64).sqrt(), 0.0);
    for b in problem.sigma().iter() {
        amps[layout.index(b.value(), problem.solution(b).value(), 0)] = amp;
    }
    Ok(StateVector { layout, amps })
}

// ---------------------------------------------------------------------------
// measurement specs and projection
// ---------------------------------------------------------------------------

/// A partial projective measurement of one register in the computational
/// basis structure: either a subset of bit positions, or a set of independent
/// GF(2) linear functionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementSpec {
    register: Register,
    reg_width: usize,
    mode: SpecMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum SpecMode {
    /// Read the digits at these positions (0 = leftmost).
    Coordinate { positions: Vec<usize> },
    /// Read the parities `<mask_i, value>` of these independent functionals.
    Linear { functionals: Vec<u32> },
}

impl MeasurementSpec {
    /// Spec reading the digits at `positions` of the chosen register.
    pub fn coordinate(register: Register, reg_width: usize, mut positions: Vec<usize>) -> Result<Self> {
        positions.sort_unstable();
        positions.dedup();
        if positions.last().is_some_and(|&p| p >= reg_width) {
            return Err(Error::LayoutMismatch {
                detail: format!("digit position out of range for a {reg_width}-bit register"),
            });
        }
        Ok(Self { register, reg_width, mode: SpecMode::Coordinate { positions } })
    }

    /// Spec reading the parities of independent linear functionals, given as
    /// masks aligned with the register value.
    pub fn linear(register: Register, reg_width: usize, functionals: Vec<u32>) -> Result<Self> {
        let limit = if reg_width == 32 { u32::MAX } else { (1u32 << reg_width) - 1 };
        if functionals.iter().any(|&m| m == 0 || m > limit) {
            return Err(Error::LayoutMismatch {
                detail: format!("functionals must be nonzero {reg_width}-bit masks"),
            });
        }
        if crate::gf2::rank(&functionals) != functionals.len() {
            return Err(Error::InvalidSubset {
                detail: "linear functionals are not independent".into(),
            });
        }
        Ok(Self { register, reg_width, mode: SpecMode::Linear { functionals } })
    }

    /// Full digit-by-digit readout of the register.
    pub fn full(register: Register, reg_width: usize) -> Self {
        Self::coordinate(register, reg_width, (0..reg_width).collect()).expect("valid positions")
    }

    /// The trivial observable: one cell, learns nothing.
    pub fn trivial(register: Register, reg_width: usize) -> Self {
        Self::coordinate(register, reg_width, Vec::new()).expect("empty positions")
    }

    pub fn register(&self) -> Register {
        self.register
    }

    pub fn reg_width(&self) -> usize {
        self.reg_width
    }

    pub fn is_trivial(&self) -> bool {
        self.outcome_width() == 0
    }

    /// Number of bits an outcome label carries.
    pub fn outcome_width(&self) -> usize {
        match &self.mode {
            SpecMode::Coordinate { positions } => positions.len(),
            SpecMode::Linear { functionals } => functionals.len(),
        }
    }

    /// Coordinate positions when this is a coordinate spec.
    pub fn positions(&self) -> Option<&[usize]> {
        match &self.mode {
            SpecMode::Coordinate { positions } => Some(positions),
            SpecMode::Linear { .. } => None,
        }
    }

    /// Functional masks when this is a linear spec.
    pub fn functionals(&self) -> Option<&[u32]> {
        match &self.mode {
            SpecMode::Linear { functionals } => Some(functionals),
            SpecMode::Coordinate { .. } => None,
        }
    }

    /// The outcome this spec reads off a register value.
    pub fn signature_value(&self, value: u32) -> u32 {
        match &self.mode {
            SpecMode::Coordinate { positions } => {
                let mut out = 0u32;
                for &p in positions {
                    out = (out << 1) | ((value >> (self.reg_width - 1 - p)) & 1);
                }
                out
            }
            SpecMode::Linear { functionals } => {
                let mut out = 0u32;
                for &m in functionals {
                    out = (out << 1) | ((value & m).count_ones() % 2);
                }
                out
            }
        }
    }

    pub fn signature(&self, value: &BitString) -> BitString {
        assert_eq!(value.width(), self.reg_width, "signature of a value with the wrong width");
        BitString::new(self.signature_value(value.value()), self.outcome_width())
    }
}

impl fmt::Display for MeasurementSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reg = match self.register {
            Register::B => "B",
            Register::A => "A",
        };
        match &self.mode {
            SpecMode::Coordinate { positions } => {
                write!(f, "{reg}:digits[")?;
                for (i, p) in positions.iter().enumerate() {
                    write!(f, "{}{p}", if i > 0 { "," } else { "" })?;
                }
                write!(f, "]")
            }
            SpecMode::Linear { functionals } => {
                write!(f, "{reg}:parities[")?;
                for (i, m) in functionals.iter().enumerate() {
                    write!(f, "{}{:0w$b}", if i > 0 { "," } else { "" }, m, w = self.reg_width)?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Projects a state on one outcome of a measurement.
///
/// Returns the (unnormalized) post-projection state together with the outcome
/// probability.  The measured register must match the state's layout, and the
/// outcome label must have the measurement's outcome width.
pub fn project(
    state: &StateVector,
    spec: &MeasurementSpec,
    outcome: &BitString,
) -> Result<(StateVector, f64)> {
    let layout = state.layout();
    if spec.reg_width() != layout.register_width(spec.register()) {
        return Err(Error::LayoutMismatch {
            detail: format!(
                "spec {spec} addresses a {}-bit register, layout has {}",
                spec.reg_width(),
                layout.register_width(spec.register())
            ),
        });
    }
    if outcome.width() != spec.outcome_width() {
        return Err(Error::UnknownOutcome {
            outcome: outcome.to_string(),
            spec: spec.to_string(),
        });
    }
    let total_sq = state.norm_sq();
    let mut amps = vec![Complex64::ZERO; layout.dim()];
    let mut kept_sq = 0.0;
    for (idx, &amp) in state.amplitudes().iter().enumerate() {
        let value = layout.register_value(spec.register(), idx);
        if spec.signature_value(value) == outcome.value() {
            amps[idx] = amp;
            kept_sq += amp.norm_sqr();
        }
    }
    let probability = if total_sq > 0.0 { kept_sq / total_sq } else { 0.0 };
    Ok((StateVector { layout, amps }, probability))
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

/// Binding of an oracle operator to its problem: either controlled by the
/// setting register, or specialized to one fixed setting (used when a circuit
/// runs without a setting register at all).
#[derive(Debug, Clone)]
pub struct OracleBinding {
    pub problem: Arc<OracleProblem>,
    pub fixed_setting: Option<BitString>,
}

impl OracleBinding {
    pub fn controlled(problem: Arc<OracleProblem>) -> Self {
        Self { problem, fixed_setting: None }
    }

    pub fn fixed(problem: Arc<OracleProblem>, setting: BitString) -> Self {
        assert!(problem.sigma().contains(&setting), "fixed setting outside the game");
        Self { problem, fixed_setting: Some(setting) }
    }

    fn check_layout(&self, layout: RegisterLayout) -> Result<()> {
        if self.fixed_setting.is_none() && layout.b_qubits != self.problem.setting_width() {
            return Err(Error::LayoutMismatch {
                detail: format!(
                    "oracle for {} needs a {}-qubit setting register, layout has {}",
                    self.problem.name(),
                    self.problem.setting_width(),
                    layout.b_qubits
                ),
            });
        }
        if layout.a_qubits < self.problem.domain_width() {
            return Err(Error::LayoutMismatch {
                detail: format!(
                    "oracle argument needs {} qubits, argument register has {}",
                    self.problem.domain_width(),
                    layout.a_qubits
                ),
            });
        }
        Ok(())
    }

    /// The query argument is read from the leading digits of register A.
    fn argument_of(&self, layout: RegisterLayout, a: u32) -> u32 {
        a >> (layout.a_qubits - self.problem.domain_width())
    }

    fn setting_of(&self, b: u32) -> u32 {
        match &self.fixed_setting {
            Some(s) => s.value(),
            None => b,
        }
    }
}

/// One linear operator on the full state space.
///
/// Four shapes cover every circuit in the workbench: small dense unitaries,
/// diagonal phases, basis permutations, and phased reflections about the
/// all-zeros state of a register slice.
#[derive(Debug, Clone)]
pub enum Operator {
    /// Dense unitary on the listed qubits; `targets[0]` is the most
    /// significant bit of the local index, `matrix` is row-major `2^k x 2^k`.
    Dense { name: String, targets: Vec<usize>, matrix: Vec<Complex64> },
    /// `e^{i angle}` on basis states whose oracle answer bit is 1
    /// (answer width must be 1).
    OraclePhase { oracle: OracleBinding, angle: f64 },
    /// `|b>|a>|w> -> |b>|a>|w xor f_b(a)>`: the reversible query.
    OracleXor { oracle: OracleBinding },
    /// `I + (e^{i angle} - 1) |0..0><0..0|` on the listed qubits: a phased
    /// reflection about their all-zeros state (angle = pi flips its sign).
    Reflection { targets: Vec<usize>, angle: f64 },
    /// Flips `target` exactly when some control qubit is 1 (a reversible OR).
    FlipIfAnySet { target: usize, controls: Vec<usize> },
    /// Scalar phase on the whole state.
    GlobalPhase { angle: f64 },
}

impl Operator {
    /// Builds a dense operator, checking shape and unitarity (`O^dag O = I`
    /// within 1e-9).
    pub fn dense(name: &str, targets: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        let k = targets.len();
        let dim = 1usize << k;
        if matrix.len() != dim * dim {
            return Err(Error::LengthMismatch {
                what: format!("dense operator `{name}`"),
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        for r in 0..dim {
            for c in 0..dim {
                let mut dot = Complex64::ZERO;
                for k in 0..dim {
                    dot += matrix[k * dim + r].conj() * matrix[k * dim + c];
                }
                let expect = if r == c { Complex64::ONE } else { Complex64::ZERO };
                if (dot - expect).norm() > 1e-9 {
                    return Err(Error::LayoutMismatch {
                        detail: format!("dense operator `{name}` is not unitary"),
                    });
                }
            }
        }
        Ok(Operator::Dense { name: name.into(), targets, matrix })
    }

    /// Single-qubit Hadamard.
    pub fn hadamard(qubit: usize) -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Operator::Dense {
            name: "H".into(),
            targets: vec![qubit],
            matrix: vec![h, h, h, -h],
        }
    }

    /// Single-qubit bit flip.
    pub fn pauli_x(qubit: usize) -> Self {
        Operator::Dense {
            name: "X".into(),
            targets: vec![qubit],
            matrix: vec![Complex64::ZERO, Complex64::ONE, Complex64::ONE, Complex64::ZERO],
        }
    }

    /// The reversible query with the standard phase convention: answer bit 1
    /// picks up a sign of -1.
    pub fn oracle_phase(oracle: OracleBinding, angle: f64) -> Result<Self> {
        if oracle.problem.answer_width() != 1 {
            return Err(Error::PhaseNeedsBinary { answer_width: oracle.problem.answer_width() });
        }
        Ok(Operator::OraclePhase { oracle, angle })
    }

    /// Which of the four operator families this is.
    pub fn kind(&self) -> &'static str {
        match self {
            Operator::Dense { .. } => "dense",
            Operator::OraclePhase { .. } | Operator::GlobalPhase { .. } => "diagonal-phase",
            Operator::OracleXor { .. } | Operator::FlipIfAnySet { .. } => "basis-permutation",
            Operator::Reflection { .. } => "reflection",
        }
    }

    /// All operators in this algebra are unitary by construction; dense
    /// matrices are verified when built through [`Operator::dense`].
    pub fn is_unitary(&self) -> bool {
        true
    }

    /// The Hermitian adjoint (which is also the inverse).
    pub fn adjoint(&self) -> Operator {
        match self {
            Operator::Dense { name, targets, matrix } => {
                let dim = 1usize << targets.len();
                let mut adj = vec![Complex64::ZERO; dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        adj[c * dim + r] = matrix[r * dim + c].conj();
                    }
                }
                Operator::Dense { name: format!("{name}^dag"), targets: targets.clone(), matrix: adj }
            }
            Operator::OraclePhase { oracle, angle } => {
                Operator::OraclePhase { oracle: oracle.clone(), angle: -angle }
            }
            Operator::OracleXor { oracle } => Operator::OracleXor { oracle: oracle.clone() },
            Operator::Reflection { targets, angle } => {
                Operator::Reflection { targets: targets.clone(), angle: -angle }
            }
            Operator::FlipIfAnySet { target, controls } => {
                Operator::FlipIfAnySet { target: *target, controls: controls.clone() }
            }
            Operator::GlobalPhase { angle } => Operator::GlobalPhase { angle: -angle },
        }
    }

    /// Applies the operator, producing a new state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let layout = state.layout();
        let dim = layout.dim();
        match self {
            Operator::Dense { targets, matrix, name } => {
                self.check_targets(targets, layout, name)?;
                let k = targets.len();
                let ldim = 1usize << k;
                let masks: Vec<usize> = targets.iter().map(|&q| 1usize << q).collect();
                let tmask: usize = masks.iter().sum();
                let mut amps = state.amplitudes().to_vec();
                let mut scratch = vec![Complex64::ZERO; ldim];
                let mut members = vec![0usize; ldim];
                for base in 0..dim {
                    if base & tmask != 0 {
                        continue;
                    }
                    for l in 0..ldim {
                        let mut g = base;
                        for (j, &m) in masks.iter().enumerate() {
                            if (l >> (k - 1 - j)) & 1 == 1 {
                                g |= m;
                            }
                        }
                        members[l] = g;
                        scratch[l] = amps[g];
                    }
                    for (r, &g) in members.iter().enumerate() {
                        let mut acc = Complex64::ZERO;
                        for (c, &s) in scratch.iter().enumerate() {
                            acc += matrix[r * ldim + c] * s;
                        }
                        amps[g] = acc;
                    }
                }
                Ok(StateVector { layout, amps })
            }
            Operator::OraclePhase { oracle, angle } => {
                oracle.check_layout(layout)?;
                let phase = Complex64::from_polar(1.0, *angle);
                let mut amps = state.amplitudes().to_vec();
                for (idx, amp) in amps.iter_mut().enumerate() {
                    let (b, a, _) = layout.split(idx);
                    let f = oracle
                        .problem
                        .answer_value(oracle.setting_of(b), oracle.argument_of(layout, a));
                    if f == 1 {
                        *amp *= phase;
                    }
                }
                Ok(StateVector { layout, amps })
            }
            Operator::OracleXor { oracle } => {
                oracle.check_layout(layout)?;
                if layout.w_qubits < oracle.problem.answer_width() {
                    return Err(Error::LayoutMismatch {
                        detail: format!(
                            "answer needs {} workspace qubits, layout has {}",
                            oracle.problem.answer_width(),
                            layout.w_qubits
                        ),
                    });
                }
                let mut amps = vec![Complex64::ZERO; dim];
                for (idx, &amp) in state.amplitudes().iter().enumerate() {
                    let (b, a, w) = layout.split(idx);
                    let f = oracle
                        .problem
                        .answer_value(oracle.setting_of(b), oracle.argument_of(layout, a));
                    amps[layout.index(b, a, w ^ f)] = amp;
                }
                Ok(StateVector { layout, amps })
            }
            Operator::Reflection { targets, angle } => {
                self.check_targets(targets, layout, "reflection")?;
                let tmask: usize = targets.iter().map(|&q| 1usize << q).sum();
                let phase = Complex64::from_polar(1.0, *angle);
                let mut amps = state.amplitudes().to_vec();
                for (idx, amp) in amps.iter_mut().enumerate() {
                    if idx & tmask == 0 {
                        *amp *= phase;
                    }
                }
                Ok(StateVector { layout, amps })
            }
            Operator::FlipIfAnySet { target, controls } => {
                let mut all = controls.clone();
                all.push(*target);
                self.check_targets(&all, layout, "flip-if-any-set")?;
                let cmask: usize = controls.iter().map(|&q| 1usize << q).sum();
                let tbit = 1usize << *target;
                let mut amps = vec![Complex64::ZERO; dim];
                for (idx, &amp) in state.amplitudes().iter().enumerate() {
                    let out = if idx & cmask != 0 { idx ^ tbit } else { idx };
                    amps[out] = amp;
                }
                Ok(StateVector { layout, amps })
            }
            Operator::GlobalPhase { angle } => {
                let phase = Complex64::from_polar(1.0, *angle);
                let amps = state.amplitudes().iter().map(|c| c * phase).collect();
                Ok(StateVector { layout, amps })
            }
        }
    }

    fn check_targets(&self, targets: &[usize], layout: RegisterLayout, name: &str) -> Result<()> {
        let mut seen = targets.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != targets.len() || targets.iter().any(|&q| q >= layout.total()) {
            return Err(Error::LayoutMismatch {
                detail: format!("operator `{name}` targets invalid qubits {targets:?}"),
            });
        }
        Ok(())
    }
}

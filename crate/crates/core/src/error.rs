//! Error type shared across the workbench.
//!
//! Every failure names the contract it violated via [`Error::contract`]; the
//! CLI surfaces that name in its machine-readable error object, so the
//! variants here are deliberately coarse and stable.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A size outside desk scale: a register layout beyond the qubit cap
    /// (24 by default, overridable through `TSOW_MAX_QUBITS`) or a problem
    /// family instantiated outside its supported range.
    #[error("requested size {qubits} exceeds the cap of {limit}")]
    SizeLimit { qubits: usize, limit: usize },

    /// A setting subset is empty or contains strings outside the setting set.
    #[error("invalid setting subset: {detail}")]
    InvalidSubset { detail: String },

    /// A state, operator or measurement was combined with a register layout
    /// it was not built for.
    #[error("layout mismatch: {detail}")]
    LayoutMismatch { detail: String },

    /// The phase oracle is only defined for single-bit answers.
    #[error("phase oracle requires answer width 1, problem has width {answer_width}")]
    PhaseNeedsBinary { answer_width: usize },

    /// A projection was asked for an outcome label the measurement cannot
    /// produce.
    #[error("outcome {outcome} is not a label of measurement {spec}")]
    UnknownOutcome { outcome: String, spec: String },

    /// Two lists that must line up (widths, table rows, functional counts) do not.
    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch { what: String, expected: usize, found: usize },

    /// The one-iteration search circuit is exact only for n = 2; larger
    /// instances must use the phase-calibrated variant.
    #[error("search over {n} qubits is not exact in one iteration; use the calibrated variant")]
    UseLongVariant { n: usize },

    /// The phase calibration failed to reach certainty within its budget.
    #[error("calibration failed for n = {n}: {detail}")]
    CalibrationFailed { n: usize, detail: String },

    /// A circuit advertised as canonical did not reproduce the
    /// `sum_b |b>|s(b)>` output form within tolerance.
    #[error("output of {algorithm} is not canonical (fidelity {fidelity})")]
    OutputNotCanonical { algorithm: String, fidelity: f64 },

    /// The sampling controller made no progress within its run budget.
    #[error("sampling stalled after {runs} circuit runs (n = {n})")]
    SamplingStall { runs: usize, n: usize },

    /// A reconstructed instance input did not match the knowledge-cell
    /// superposition it must equal.
    #[error("instance input does not match its cell superposition (fidelity {fidelity})")]
    InstanceMismatch { fidelity: f64 },

    /// No sharing pair is valid for a setting in the requested mode.
    #[error("no valid sharing pair for setting {setting}")]
    NoValidPair { setting: String },

    /// A setting subset admits no decision tree: distinct solutions remain
    /// but no query separates them.
    #[error("no query separates the remaining solutions in subset {subset}")]
    Undetermined { subset: String },

    /// A problem description file failed validation; `key` names the offender.
    #[error("problem file entry `{key}`: {reason}")]
    ProblemFile { key: String, reason: String },
}

impl Error {
    /// Stable upper-case name of the violated contract.
    pub fn contract(&self) -> &'static str {
        match self {
            Error::SizeLimit { .. } => "SIZE_LIMIT",
            Error::InvalidSubset { .. } => "INVALID_SUBSET",
            Error::LayoutMismatch { .. } => "LAYOUT_MISMATCH",
            Error::PhaseNeedsBinary { .. } => "PHASE_NEEDS_BINARY",
            Error::UnknownOutcome { .. } => "UNKNOWN_OUTCOME",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::UseLongVariant { .. } => "USE_LONG_VARIANT",
            Error::CalibrationFailed { .. } => "CALIBRATION_FAILED",
            Error::OutputNotCanonical { .. } => "OUTPUT_NOT_CANONICAL",
            Error::SamplingStall { .. } => "SAMPLING_STALL",
            Error::InstanceMismatch { .. } => "INSTANCE_MISMATCH",
            Error::NoValidPair { .. } => "NO_VALID_PAIR",
            Error::Undetermined { .. } => "UNDETERMINED",
            Error::ProblemFile { .. } => "PROBLEM_FILE",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contract_names_are_stable() {
        let e = Error::SizeLimit { qubits: 30, limit: 24 };
        assert_eq!(e.contract(), "SIZE_LIMIT");
        assert!(e.to_string().contains("30"));
    }
}

//! Error type shared by all modules.

use core::fmt;

/// Errors raised by constructors, preconditions and algorithm runs.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two vectors (or a vector and a space) disagree on dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// A coordinate is NaN or infinite.
    NonFinite,
    /// An exponent parameter is outside its admissible range.
    InvalidExponent { p: f64 },
    /// The operation is undefined for the zero element.
    ZeroVector,
    /// An input collection is empty where at least one entry is required.
    EmptyInput,
    /// A dictionary element fails the unit-norm requirement.
    NotUnitNorm { index: usize, norm: f64 },
    /// Two dictionary elements coincide within tolerance.
    DuplicateAtom { first: usize, second: usize },
    /// An index is outside the valid range.
    IndexOutOfRange { index: usize, len: usize },
    /// A scalar parameter violates its stated range; `what` names it.
    InvalidParameter { what: &'static str },
    /// An explicit weakness sequence was queried beyond its length.
    SequenceExhausted { k: usize, len: usize },
    /// A replayed selection fails the weak-greedy inequality.
    WeaknessViolated {
        step: usize,
        achieved: f64,
        required: f64,
    },
    /// No dictionary element meets the thresholding inequality.
    ThresholdUnmet {
        step: usize,
        threshold: f64,
        best: f64,
    },
    /// The operation needs an `A1` certificate and none was supplied.
    MissingCertificate,
    /// A supplied certificate is inconsistent; `reason` says how.
    CertificateInvalid { reason: &'static str },
    /// A bound evaluator requires a nonincreasing weakness sequence.
    NonMonotoneWeakness { step: usize },
    /// The counterexample construction needs a summable weakness sequence.
    DivergentWeakness,
    /// The incremental-step inequality failed, signalling the input is not
    /// in the convex hull of the dictionary (or the schedule is too tight).
    IncrementConditionViolated { step: usize, lhs: f64, rhs: f64 },
    /// A stored subspace basis is not orthonormal within tolerance.
    NotOrthonormal { subspace: usize },
    /// The operation is only defined for explicit dictionaries.
    NotExplicit,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NonFinite => write!(f, "non-finite coordinate (NaN or infinity)"),
            Error::InvalidExponent { p } => write!(f, "exponent p = {p} out of range"),
            Error::ZeroVector => write!(f, "operation undefined for the zero element"),
            Error::EmptyInput => write!(f, "empty input"),
            Error::NotUnitNorm { index, norm } => {
                write!(f, "element {index} has norm {norm}, expected 1")
            }
            Error::DuplicateAtom { first, second } => {
                write!(f, "dictionary elements {first} and {second} coincide")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
            Error::SequenceExhausted { k, len } => {
                write!(f, "weakness sequence of length {len} queried at k = {k}")
            }
            Error::WeaknessViolated {
                step,
                achieved,
                required,
            } => write!(
                f,
                "step {step}: replayed selection achieves {achieved} < required threshold {required}"
            ),
            Error::ThresholdUnmet {
                step,
                threshold,
                best,
            } => write!(
                f,
                "step {step}: no element meets threshold {threshold} (best {best})"
            ),
            Error::MissingCertificate => write!(f, "an A1 certificate is required"),
            Error::CertificateInvalid { reason } => write!(f, "invalid certificate: {reason}"),
            Error::NonMonotoneWeakness { step } => {
                write!(f, "weakness sequence increases at k = {step}")
            }
            Error::DivergentWeakness => {
                write!(f, "weakness sequence has a divergent sum")
            }
            Error::IncrementConditionViolated { step, lhs, rhs } => write!(
                f,
                "step {step}: incremental condition failed ({lhs} < {rhs}); input may be outside conv(D)"
            ),
            Error::NotOrthonormal { subspace } => {
                write!(f, "subspace {subspace}: stored basis is not orthonormal")
            }
            Error::NotExplicit => write!(f, "operation requires an explicit dictionary"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

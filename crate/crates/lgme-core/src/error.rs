//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Errors reported by state construction, conditioning, and measures.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix expected to be symmetric is not, within tolerance.
    NotSymmetric { max_asymmetry: f64 },
    /// A mode index is out of range or repeated.
    InvalidModeIndex { index: usize, modes: usize },
    /// A mode subset or grid was empty where a nonempty one is required.
    EmptySelection,
    /// Eigenvalues of `J·Λ` failed to pair up as `±iν` within tolerance.
    SymplecticPairingBroken { mismatch: f64 },
    /// A pure-state precondition failed (some symplectic eigenvalue ≠ 1/2).
    ImpureState { worst_eigenvalue: f64 },
    /// The conditioning block `σ_m + B` is numerically singular.
    SingularConditioning { condition_number: f64 },
    /// The projected homodyne block is numerically zero.
    DegenerateHomodyne,
    /// The requested measurement branch does not apply (e.g. asking the
    /// squeezed-coherent covariance of a homodyne measurement).
    WrongMeasurementBranch,
    /// Fock truncation cannot converge (`tanh r` too close to 1).
    TruncationDiverges { lambda: f64 },
    /// A state ended up with zero norm (e.g. subtraction annihilated it).
    EmptyState,
    /// A scalar argument was out of its documented domain.
    InvalidArgument(String),
    /// Power iteration failed to converge and no dense fallback applies.
    PowerIterationFailed { dimension: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSymmetric { max_asymmetry } => {
                write!(f, "matrix is not symmetric (max asymmetry {max_asymmetry:e})")
            }
            Error::InvalidModeIndex { index, modes } => {
                write!(f, "invalid or duplicate mode index {index} for {modes} modes")
            }
            Error::EmptySelection => write!(f, "empty mode subset or search grid"),
            Error::SymplecticPairingBroken { mismatch } => {
                write!(f, "symplectic eigenvalue pairing broken by {mismatch:e}")
            }
            Error::ImpureState { worst_eigenvalue } => {
                write!(f, "state is not pure (symplectic eigenvalue {worst_eigenvalue})")
            }
            Error::SingularConditioning { condition_number } => {
                write!(f, "singular measurement block (condition number {condition_number:e})")
            }
            Error::DegenerateHomodyne => write!(f, "projected homodyne block is zero"),
            Error::WrongMeasurementBranch => {
                write!(f, "homodyne measurement has no finite covariance; use condition_on_homodyne")
            }
            Error::TruncationDiverges { lambda } => {
                write!(f, "Fock truncation cannot converge at lambda = {lambda}")
            }
            Error::EmptyState => write!(f, "state has zero norm"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::PowerIterationFailed { dimension } => {
                write!(f, "power iteration failed to converge (dimension {dimension})")
            }
        }
    }
}

impl core::error::Error for Error {}

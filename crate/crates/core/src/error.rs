use thiserror::Error;

use crate::canonical::Side;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "invalid density matrix: hermiticity deviation {hermiticity:.3e}, \
         trace deviation {trace:.3e}, min eigenvalue {min_eigenvalue:.3e}"
    )]
    InvalidDensityMatrix {
        hermiticity: f64,
        trace: f64,
        min_eigenvalue: f64,
    },

    /// A Bloch triple whose reconstruction is not positive semidefinite.
    #[error("not a state: reconstructed matrix has eigenvalue {min_eigenvalue:.3e}")]
    NotAState { min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("rotation is not orthogonal (max |QᵀQ - I| = {deviation:.3e})")]
    NonOrthogonalRotation { deviation: f64 },

    #[error("rotation has determinant {determinant:.6}, expected +1")]
    ImproperRotation { determinant: f64 },

    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),

    #[error("no sign assignment of the nonlocal generator reproduces the Bloch map")]
    CalibrationFailure,

    #[error("ambiguous classification: no {side} structure but discord {discord:.3e} is within tolerance")]
    AmbiguousClassification { side: Side, discord: f64 },

    #[error("input is not a zero-discord state for side {side} (discord {discord:.6e})")]
    NotZeroDiscordInput { side: Side, discord: f64 },

    #[error("no prescription: maximally mixed")]
    NoPrescription,

    #[error("no table row matches {0}")]
    UnmatchedCase(String),

    #[error("product-state alignment needs nonzero first and third components, got {0:?}")]
    DegenerateProductVector([f64; 3]),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

use thiserror::Error;

use crate::algebra::Side;
use crate::linalg::{LinalgError, SparseVector};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("not associative: (e{i} e{j}) e{k} != e{i} (e{j} e{k})")]
    AssociativityFailure { i: usize, j: usize, k: usize },

    #[error("not a two-sided ideal: {side} with a = e{algebra_index}, x = ideal vector {ideal_index} gives {product}, outside the span")]
    NotTwoSided { side: Side, algebra_index: usize, ideal_index: usize, product: SparseVector },

    #[error("{what}: vector {index} is linearly dependent on the preceding ones")]
    DependentVectors { what: &'static str, index: usize },

    #[error("the boundary of a degree-0 chain is not defined")]
    DegreeZero,

    #[error("degree {requested} exceeds the configured maximum {max} (tensor space grows as dim^(n+1)); raise EXCISIONLAB_MAX_DEGREE to allow it")]
    DegreeTooLarge { requested: usize, max: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("no local left unit{}: target {target_index} ({target}) cannot be fixed by any element of the ideal", level.map(|l| format!(" for e{l}")).unwrap_or_default())]
    NoLocalUnit {
        /// Schedule position `i` of the unit `e_i` being solved for.
        level: Option<usize>,
        target_index: usize,
        target: SparseVector,
        targets: Vec<SparseVector>,
        /// Equation combination proving the unit system inconsistent.
        witness: SparseVector,
    },

    #[error("unit does not act as a left unit on the initial slot e{slot}")]
    UnitPrecondition { slot: usize },

    #[error("element {0} does not lie in the ideal")]
    NotInIdeal(SparseVector),

    #[error("term {tuple:?} has no slot in the ideal")]
    NotRelative { tuple: Vec<usize> },

    #[error("term {tuple:?} does not have its initial slot in the ideal")]
    NotInitialInIdeal { tuple: Vec<usize> },

    #[error("chain is not a cycle in the {0} complex")]
    NotACycle(&'static str),

    #[error("unit schedule does not match the input: {0}")]
    ScheduleMismatch(String),

    #[error("no homotopy exists for the claimed equality (linear system dumped below)\n{dump}")]
    CertificateUnsolvable { dump: String },

    #[error("certificate mismatch: nonzero residual {residual}")]
    Mismatch { residual: String },

    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(location: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse { location: location.into(), message: message.to_string() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by dataset construction, model use and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    EmptyWindow,
    EmptyDataset,
    /// A feature value is NaN or infinite.
    NonFinite {
        sample: usize,
        feature: usize,
    },
    TimeLabelOutOfRange {
        sample: usize,
        label: usize,
        n_labels: usize,
    },
    MissingTimeLabel(usize),
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    InvalidParameter(&'static str),
    /// ROC-AUC needs at least one positive and one negative sample.
    DegenerateTruth,
    /// The operation needs a decision tree.
    NotATree,
    EmptyInput,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptyWindow => write!(f, "time window is empty"),
            Error::EmptyDataset => write!(f, "dataset is empty"),
            Error::NonFinite { sample, feature } => {
                write!(f, "non-finite value at sample {sample}, feature {feature}")
            }
            Error::TimeLabelOutOfRange { sample, label, n_labels } => {
                write!(f, "sample {sample} has time label {label}, expected < {n_labels}")
            }
            Error::MissingTimeLabel(c) => write!(f, "time label {c} never occurs"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DegenerateTruth => {
                write!(f, "ground truth needs both drifting and non-drifting samples")
            }
            Error::NotATree => write!(f, "model is not a decision tree"),
            Error::EmptyInput => write!(f, "input list is empty"),
        }
    }
}

impl core::error::Error for Error {}

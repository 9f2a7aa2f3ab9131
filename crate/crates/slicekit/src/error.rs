use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("frontier mismatch: out-frontier has {left} ports, in-frontier has {right}")]
    FrontierMismatch { left: usize, right: usize },
    #[error("DAG does not have a unique minimal and a unique maximal vertex")]
    NotSingleRooted,
    #[error("DAG is cyclic")]
    Cyclic,
    #[error("composition produced parallel edges; use the multi-edge coloring")]
    NotSimple,
    #[error("illegal slice string: {0}")]
    IllegalSliceString(String),
    #[error("slice language is not saturated")]
    NotSaturated,
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("not a Hasse diagram (generator): {0}")]
    NotHasse(String),
    #[error("illegal word: {0}")]
    IllegalWord(String),
    #[error("MSCs are over different instance sets")]
    InstanceMismatch,
    #[error("instance {0} has no unique minimal or maximal event")]
    MultipleMinimal(String),
    #[error("invalid MSC: {0}")]
    InvalidMsc(String),
    #[error("transition {0} is not enabled")]
    NotEnabled(String),
    #[error("net is not {0}-safe within the explored depth")]
    NotKSafe(u32),
    #[error("invalid net: {0}")]
    InvalidNet(String),
    #[error("invalid slice: {0}")]
    InvalidSlice(String),
    #[error("invalid slice graph: {0}")]
    InvalidGraph(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Stable name used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FrontierMismatch { .. } => "FrontierMismatch",
            Error::NotSingleRooted => "NotSingleRooted",
            Error::Cyclic => "Cyclic",
            Error::NotSimple => "NotSimple",
            Error::IllegalSliceString(_) => "IllegalSliceString",
            Error::NotSaturated => "NotSaturated",
            Error::AlphabetMismatch(_) => "AlphabetMismatch",
            Error::NotHasse(_) => "NotHasse",
            Error::IllegalWord(_) => "IllegalWord",
            Error::InstanceMismatch => "InstanceMismatch",
            Error::MultipleMinimal(_) => "MultipleMinimal",
            Error::InvalidMsc(_) => "InvalidMsc",
            Error::NotEnabled(_) => "NotEnabled",
            Error::NotKSafe(_) => "NotKSafe",
            Error::InvalidNet(_) => "InvalidNet",
            Error::InvalidSlice(_) => "InvalidSlice",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::Parse { .. } => "Parse",
        }
    }

    /// Precondition violations as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotSaturated
                | Error::NotHasse(_)
                | Error::NotSimple
                | Error::NotKSafe(_)
                | Error::NotSingleRooted
                | Error::AlphabetMismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-contract input.
    Input,
    /// A documented search or enumeration bound was exceeded.
    Capability,
    /// The input is well formed but cannot come from a distribution.
    Consistency,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    VertexOutOfRange { vertex: usize, n: usize },
    SelfLoop { vertex: usize },
    DuplicateEdge { u: usize, v: usize },
    TooManyVertices { n: usize, max: usize },
    BoundExceeded { what: &'static str, requested: usize, max: usize },
    InvalidParameter(String),
    NotANonEdge { u: usize, v: usize },
    NonHereditary { index: usize, subset: u64, level: usize },
    Mismatch(String),
    NonPrincipalFamily,
    Inconsistent(String),
    NotComplete { a: usize, b: usize },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::TooManyVertices { .. }
            | Error::BoundExceeded { .. }
            | Error::NonPrincipalFamily => ErrorKind::Capability,
            Error::Inconsistent(_) => ErrorKind::Consistency,
            _ => ErrorKind::Input,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for a graph on {n} vertices")
            }
            Error::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Error::DuplicateEdge { u, v } => write!(f, "duplicate edge {u}-{v}"),
            Error::TooManyVertices { n, max } => {
                write!(f, "{n} vertices requested, at most {max} supported")
            }
            Error::BoundExceeded { what, requested, max } => {
                write!(f, "{what}: {requested} exceeds the bound {max}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NotANonEdge { u, v } => write!(f, "{u}-{v} is an edge of the host graph"),
            Error::NonHereditary { index, subset, level } => write!(
                f,
                "conjugate is not downward hereditary at index {index}: subset {subset:#b} \
                 is missing a size-{level} subset"
            ),
            Error::Mismatch(msg) => write!(f, "mismatched inputs: {msg}"),
            Error::NonPrincipalFamily => {
                write!(f, "operation requires a principal covering family")
            }
            Error::Inconsistent(msg) => write!(f, "inconsistent trace: {msg}"),
            Error::NotComplete { a, b } => {
                write!(f, "target vertices {a} and {b} are not adjacent")
            }
        }
    }
}

impl core::error::Error for Error {}

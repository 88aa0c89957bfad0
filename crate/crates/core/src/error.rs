use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Hall basis for rank {rank}, class {class} has {size} entries, above the cap of {cap}")]
    BasisCapExceeded {
        rank: usize,
        class: usize,
        size: String,
        cap: usize,
    },

    #[error("elements belong to different presentations: N({0},{1}) vs N({2},{3})")]
    PresentationMismatch(usize, usize, usize, usize),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("subgroup has infinite index")]
    InfiniteIndex,

    #[error("invalid transversal: {0}")]
    InvalidTransversal(String),

    #[error("{0} is not in the domain subgroup")]
    NotInDomain(String),

    #[error("domain lattice is singular")]
    SingularLattice,

    #[error("node cap exceeded: portrait would have {nodes} nodes (cap {cap})")]
    NodeCapExceeded { nodes: String, cap: usize },

    #[error("letter {letter} out of range 1..={alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for a simplex of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("no generator of dimension {dim} with index {index}")]
    UnknownGenerator { dim: usize, index: usize },

    #[error("invalid degeneracy word {word:?} on a generator of dimension {dim}")]
    InvalidWord { word: Vec<usize>, dim: usize },

    #[error("simplicial identity violated: {0}")]
    SimplicialIdentity(String),

    #[error("malformed simplicial set: {0}")]
    Malformed(String),

    #[error("{space} is not {requirement}")]
    Precondition { space: String, requirement: String },

    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("homotopy violates dφ + φd = ∇f - 1: {0}")]
    NotAHomotopy(String),

    #[error("not a twisting cochain: {0}")]
    NotTwisting(String),

    #[error("inconsistent boundary matrices: {0}")]
    InconsistentComplex(String),

    #[error("unknown space specification `{0}`")]
    UnknownSpace(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

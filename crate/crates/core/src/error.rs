use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not orthonormal: max deviation of MᵀM from identity is {0:.3e}")]
    NotOrthonormal(f64),
    #[error("invalid dimensions: {0}")]
    Dimension(String),
    #[error("vector is not normalized: |x| = {0}")]
    NotNormalized(f64),
    #[error("invalid index set: {0}")]
    IndexSet(String),
    #[error("invalid gate: {0}")]
    Gate(String),
    #[error("{what} is limited to {limit} qubits, got {got}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("hole trick requires an explicit complement matrix")]
    MissingComplement,
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Fcidump(#[from] crate::chem::ParseError),
    #[error("qasm line {line}: {msg}")]
    Qasm { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

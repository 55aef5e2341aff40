use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has {got} rows/columns, expected {expected}")]
    Dimension { expected: usize, got: usize },

    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("digon between {0} and {1}")]
    Digon(usize, usize),

    #[error("no arc between {0} and {1}")]
    MissingArc(usize, usize),

    #[error("vertex {vertex} out of range for tournament on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("vertex sets overlap")]
    Overlap,

    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("clique number undecided: bounds [{lower}, {upper}]")]
    Undecided { lower: usize, upper: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

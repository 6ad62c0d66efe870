use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index must be a positive integer")]
    ZeroIndex,
    #[error("invalid word token `{0}`")]
    InvalidToken(String),
    #[error("the empty word has no enumeration index")]
    EmptyWord,
    #[error("enumeration index exceeds the supported range")]
    IndexOverflow,
    #[error("word `{0}` is not reduced")]
    NotReduced(String),
    #[error("word `{0}` reduces to the identity")]
    TrivialWord(String),
    #[error("`{0}` is not a vertex of the pruned tree")]
    NotAVertex(String),
    #[error("invalid point `{0}`")]
    InvalidPoint(String),
    #[error("edge parameter {0} must lie strictly inside (0, 1)")]
    ParameterOutOfRange(String),
    #[error("point {point} lies outside the range of chart {chart}")]
    OutsideChart { chart: String, point: String },
    #[error("{0} must be at least {1}")]
    TooSmall(&'static str, u64),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("not a Latin square: {0}")]
    NotLatinSquare(String),

    #[error("not a loop: no two-sided identity element")]
    NotALoop,

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("not a group isotope: the principal loop isotope at (0,0) is not associative")]
    NotGroupIsotope,

    #[error("the group is not abelian")]
    NotAbelian,

    #[error("{0} is not an automorphism")]
    NotAutomorphism(String),

    #[error("the automorphisms do not commute")]
    NotCommutingPair,

    #[error("map is not an endomorphism")]
    NotAnEndomorphism,

    #[error("order {order} exceeds the configured bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },

    #[error("quasigroup is not in class {0}")]
    NotInClass(String),

    #[error("quasigroup is not simple")]
    NotSimple,

    #[error("loop is not a commutative Moufang loop")]
    NotCML,

    #[error("internal check failed: {0}")]
    InternalCheckFailed(String),

    #[error("inconsistent constraints: {0}")]
    InconsistentConstraints(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

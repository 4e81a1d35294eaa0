use thiserror::Error;

/// Errors raised by the library.
///
/// Validation problems of a raw cover matrix are *not* errors: they are
/// reported as data through [`crate::cover_data::ValidationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    Shape(String),

    #[error("matrix fails validation: {0}")]
    InvalidMatrix(String),

    #[error("element {0:?} is not in the deck group")]
    NotInGroup(Vec<u32>),

    #[error("subgroup H is trivial (pass allow_trivial to accept it)")]
    TrivialSubgroup,

    #[error("resource cap exceeded: {what} > {limit}")]
    ResourceCap { what: &'static str, limit: u64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("cover is reducible (rows are linearly dependent over Z/{0})")]
    Reducible(u32),

    #[error(
        "quadratic differentials are not comparable: character sums {left:?} and {right:?} differ"
    )]
    NotComparable { left: Vec<u32>, right: Vec<u32> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("prime {p} is not congruent to 1 modulo {modulus}")]
    PrimeNotCongruent { p: u64, modulus: u32 },

    #[error("malformed datum file: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

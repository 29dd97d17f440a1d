use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u32),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("AIR dimensions require m >= n >= 1, got m = {m}, n = {n}")]
    InvalidDimensions { m: usize, n: usize },

    #[error("index ({row}, {col}) out of range for a {rows} x {cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("invalid problem (K = {k}, D = {d}, U = {u}): {reason}")]
    InvalidProblem {
        k: usize,
        d: usize,
        u: usize,
        reason: &'static str,
    },

    #[error(
        "pair not in S_{{K,D,U}}: gcd(bK, b(D+1)+a) = gcd({m}, {n}) = {gcd} < b(U+1) = {required} \
         for (a, b) = ({a}, {b})"
    )]
    NotAchievablePair {
        a: usize,
        b: usize,
        m: usize,
        n: usize,
        gcd: usize,
        required: usize,
    },

    #[error("entry ({row}, {col}) has no 1 to its right inside an even-submatrix")]
    NoRightNeighbor { row: usize, col: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("receiver {t} cannot decode: the encoding matrix violates the decodability condition")]
    NotDecodable { t: usize },

    #[error("side information for x_{{{t},{j}}} is not available")]
    MissingSideInfo { t: usize, j: usize },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

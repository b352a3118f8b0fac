use thiserror::Error;

/// Errors raised by the library. Infeasibility is never an error; it is
/// reported through an empty interval or a `false` verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}: expected \"p/q\" or an integer")]
    ParseRational(String),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid polarization (w1 = {w1}, w2 = {w2}): need 0 < w_i < 1 and w1 + w2 = 1")]
    InvalidPolarization { w1: String, w2: String },
    #[error("invalid curve: genera must be >= 1 (got g1 = {g1}, g2 = {g2})")]
    InvalidCurve { g1: i64, g2: i64 },
    #[error("zero sheaf: multirank (0, 0) has no slope")]
    ZeroRank,
    #[error("negative rank {0}")]
    NegativeRank(i64),
    #[error("rank r = {0} out of range: r >= {1} required")]
    RankOutOfRange(i64, i64),
    #[error("gluing rank k = {k} out of range 1..={r}")]
    GluingRankOutOfRange { k: i64, r: i64 },
    #[error("genus g = {0} out of range: g >= 1 required")]
    GenusOutOfRange(i64),
    #[error("matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NonSquareMatrix {
        rows: usize,
        row: usize,
        cols: usize,
    },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("declared rank k = {declared} disagrees with rank of sigma = {actual}")]
    RankMismatch { declared: i64, actual: i64 },
    #[error("invalid subsheaf shape (s = {s}, s1 = {s1}, s2 = {s2}) for r = {r}, k = {k}")]
    InvalidShape {
        s: i64,
        s1: i64,
        s2: i64,
        r: i64,
        k: i64,
    },
    #[error("polarization violates necessary condition {0}")]
    NecessaryConditionViolated(String),
    #[error("subrank s = {s} out of range 1..={max}")]
    SubrankOutOfRange { s: i64, max: i64 },
    #[error("scan of {cells} lattice points exceeds the cap of {cap}")]
    ScanTooLarge { cells: u128, cap: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn checked(what: &'static str, v: Option<i64>) -> Result<i64> {
    v.ok_or(Error::Overflow(what))
}

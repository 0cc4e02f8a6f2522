use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("an instance needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("coordinate {coord} of point {point} is not finite")]
    NonFiniteCoordinate { point: usize, coord: usize },
    #[error("points mix 2D and 3D coordinates")]
    MixedDimensions,
    #[error("cost matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("cost entry ({0}, {1}) is negative or NaN")]
    InvalidCost(usize, usize),
    #[error("tour is not a permutation of 0..{n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("brute force limited to n <= {limit}, instance has {n} vertices")]
    OverBruteForceLimit { n: usize, limit: usize },
    #[error("instance has no planar coordinates")]
    NotPlanar,
    #[error("operation requires a euclidean instance, got {0}")]
    NonEuclidean(String),
    #[error("invalid crossing ({i}, {j}) for a tour of {n} vertices")]
    InvalidCrossing { i: usize, j: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("raster resolution too coarse: closest vertices are {0:.2} pixels apart, need >= 3")]
    ResolutionTooCoarse(f64),
    #[error("raster canvas of {0} pixels exceeds the limit")]
    CanvasTooLarge(usize),
    #[error("edge ({0}, {1}) has zero length")]
    DegenerateEdge(usize, usize),
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid clause: {0}")]
    InvalidClause(String),
    #[error("assignment has {got} digits, instance has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value {value} out of range for {bits} bits")]
    OutOfRange { value: u64, bits: usize },
    #[error("operation requires a simple instance (every clause mentions every variable)")]
    NotSimple,
    #[error("{n} variables exceeds the memory limit of {limit}")]
    MemoryLimit { n: usize, limit: usize },
    #[error("value {value} is not in the {list} list")]
    NotInList { value: u64, list: &'static str },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

use thiserror::Error;

/// Errors raised by the library. Each variant names the violated precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("E(p, q) is undefined for the pair (0, 0)")]
    ZeroPair,
    #[error("expected 0 < q < p, got p = {p}, q = {q}")]
    OutOfRange { p: u64, q: u64 },
    #[error("{a} and {b} are not coprime (gcd = {gcd})")]
    NotCoprime { a: u64, b: u64, gcd: u64 },
    #[error("modulus must be at least 2, got {0}")]
    SmallModulus(u64),

    #[error("{0} and {1} are not joined by a Farey edge")]
    NotFareyEdge(String, String),
    #[error("crossing-count algorithms disagree for {p}/{q}: tree walk {walk}, geodesic {geodesic}")]
    CrossingMismatch { p: i64, q: u64, walk: u64, geodesic: u64 },

    #[error("polygon must have at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("{a}-{b} is not a diagonal of the {p}-gon")]
    NotADiagonal { p: usize, a: usize, b: usize },
    #[error("diagonals {0} and {1} cross")]
    Crossing(String, String),
    #[error("duplicate diagonal {0}")]
    DuplicateDiagonal(String),
    #[error("a triangulation of the {p}-gon needs {expected} diagonals, got {got}")]
    WrongDiagonalCount { p: usize, expected: usize, got: usize },
    #[error("diagonal {0} is not in the triangulation")]
    MissingDiagonal(String),
    #[error("triangulations live on different polygons ({0} vs {1} vertices)")]
    PolygonMismatch(usize, usize),
    #[error("p = {p} exceeds the exhaustive cap {cap}")]
    AboveCap { p: usize, cap: usize },
    #[error("length parameter x = {x} outside [2, p/2] for p = {p}")]
    LengthOutOfRange { p: usize, x: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("profile has {profile} groups but the Euclid trace has {trace}")]
    ProfileLength { profile: usize, trace: usize },
    #[error("the extremal profile needs at least two continued-fraction terms with n1 >= 2")]
    SingleTermTrace,
    #[error("sum of continued-fraction coefficients {sum} exceeds oracle cap {cap}")]
    OracleCap { sum: u64, cap: u64 },

    #[error("points are not in strictly convex cyclic position")]
    NotConvex,
    #[error("no eccentricity in the grid produced a certified triangulation for ({p}, {q}): {diagnostics}")]
    ConstructionFailed { p: usize, q: usize, diagnostics: String },

    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("point set is contained in a hyperplane (affine dimension < 4)")]
    DegenerateHull,
    #[error("base point angle theta = {0} is not strictly inside (0, pi/2)")]
    CoreCircle(f64),
    #[error("no generic base point found after {0} attempts")]
    NoGenericBasePoint(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("row {row} has length {found}, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("cannot multiply {left:?} by {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("determinant of non-square {rows}x{cols} matrix")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] MatrixError),

    // abelian groups and homomorphisms
    #[error("matrix is {found:?} but the map needs {expected:?} (rows x cols)")]
    HomShape { expected: (usize, usize), found: (usize, usize) },
    #[error("map is not well defined: generator {source_gen} of order {order} is not sent into the relations (target row {target_row})")]
    NotWellDefined { source_gen: usize, order: u64, target_row: usize },
    #[error("composite of the two maps is nonzero")]
    CompositionNonzero,
    #[error("map sources and targets do not chain: {0}")]
    IncompatibleMaps(String),
    #[error("lim^1 is indeterminate on this truncation: {0}")]
    Indeterminate(String),
    #[error("tower transition {index} does not connect adjacent objects")]
    TowerMismatch { index: usize },
    #[error("declared stabilization at {declared} but transition {index} is not an isomorphism")]
    StabilizationViolated { declared: usize, index: usize },
    #[error("chain complex has d_{degree} o d_{} != 0", degree + 1)]
    NotAComplex { degree: usize },

    // groups
    #[error("multiplication table is not square or has entries out of range: {0}")]
    MalformedTable(String),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal: {g} * {n} * {g}^-1 leaves the subgroup")]
    NotNormal { g: usize, n: usize },
    #[error("map is not a homomorphism at ({a}, {b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("quotient map misses element {0}")]
    NotSurjective(usize),
    #[error("size {size} exceeds cap {cap}")]
    SizeOverflow { size: u128, cap: u64 },
    #[error("group order decreases along the tower at level {level}")]
    OrderDecreasing { level: usize },
    #[error("permutation input is invalid: {0}")]
    BadPermutation(String),

    // modules
    #[error("action is not a homomorphism at ({g}, {h})")]
    ActionNotHomomorphic { g: usize, h: usize },
    #[error("action of {g} is not invertible")]
    ActionNotInvertible { g: usize },
    #[error("module has an infinite cyclic summand")]
    ModuleNotFinite,
    #[error("generator images given for {given} generators, group has {expected}")]
    GeneratorCount { expected: usize, given: usize },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("map is not equivariant at group element {element} (level {level:?})")]
    NotEquivariant { level: Option<usize>, element: usize },
    #[error("map is not a chain map in degree {degree} (level {level})")]
    NotChainMap { level: usize, degree: usize },
    #[error("tower depths differ: {groups} group levels, {other} levels")]
    DepthMismatch { groups: usize, other: usize },

    // towers and spectral sequences
    #[error("size overflow at tower level {level}: {size} exceeds cap {cap}")]
    LevelOverflow { level: usize, size: u128, cap: u64 },
    #[error("E2 mismatch at (p={p}, q={q}): bicomplex route {bicomplex}, continuous-homology route {profinite}")]
    E2Mismatch { p: usize, q: usize, bicomplex: String, profinite: String },
    #[error("collapse violated in degree {degree}: orbit homology {orbit}, continuous homology {continuous}")]
    CollapseViolation { degree: usize, orbit: String, continuous: String },
    #[error("bicomplex axiom fails at ({p}, {q}): {what}")]
    BicomplexAxiom { p: usize, q: usize, what: &'static str },
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Errors raised by the geometric layers (Minkowski algebra, simplices, volumes, constants).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),
    #[error("point is not on the hyperboloid: <w,w> = {norm}, w_0 = {time}")]
    NotOnHyperboloid { norm: f64, time: f64 },
    #[error("point is not on the light cone: <w,w> = {norm}, w_0 = {time}")]
    NotOnLightCone { norm: f64, time: f64 },
    #[error("vector is not unit spacelike: <q,q> = {0}")]
    NotUnitSpacelike(f64),
    #[error("point lies on the positive side of the hyperplane: <w,q> = {0}")]
    WrongSide(f64),
    #[error("Klein point has norm {norm}, outside the admissible range")]
    OutsideBall { norm: f64 },
    #[error("matrix does not preserve the Minkowski form (residual {0})")]
    NotAnIsometry(f64),
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("degenerate simplex")]
    Degenerate,
    #[error("numerically singular system (pivot ratio {0:e})")]
    NumericallySingular(f64),
    #[error("index {index} out of range for a simplex with {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),
}

/// Errors raised by the combinatorial layer (triangulations, chains, covers, lattices).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("malformed triangulation: {0}")]
    Malformed(String),
    #[error("slot (simplex {simplex}, facet {facet}) is paired more than once")]
    SlotReused { simplex: usize, facet: usize },
    #[error("slot (simplex {simplex}, facet {facet}) is paired with itself")]
    SelfPairedSlot { simplex: usize, facet: usize },
    #[error("slot (simplex {simplex}, facet {facet}) is out of range")]
    SlotOutOfRange { simplex: usize, facet: usize },
    #[error("pairing {pairing}: vertex map is not a bijection onto facet {facet} of simplex {simplex}")]
    BadVertexMap { pairing: usize, simplex: usize, facet: usize },
    #[error("triangulation is not orientable (violating gluing at simplex {simplex}, facet {facet})")]
    NotOrientable { simplex: usize, facet: usize },
    #[error("triangulation has unpaired facets")]
    NotClosed,
    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("non-manifold link structure: {0}")]
    NonManifoldLink(String),
    #[error("invalid cover specification: {0}")]
    BadCoverSpec(String),
    #[error("nontrivial holonomy around codimension-2 face {face:?} of simplex {simplex} (cycle {cycle:?}): branched, not a covering")]
    BranchedCover {
        simplex: usize,
        face: Vec<usize>,
        cycle: Vec<(usize, usize)>,
    },
    #[error("lattice basis has zero determinant")]
    ZeroDeterminant,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

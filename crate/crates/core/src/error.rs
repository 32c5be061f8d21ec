use alloc::string::String;

/// Errors raised by the geometric engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not in the domain")]
    NotInDomain,
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("operation needs a planar catalog domain (disk, half-plane or sector)")]
    NotPlanarCatalog,
    #[error("domain is not C-proper: pseudo-distance only")]
    NotCProper,
    #[error("midpoint not certified: residual {residual:e} exceeds tolerance {tol:e}")]
    MidpointNotCertified { residual: f64, tol: f64 },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("too few valid samples: {found} (need {needed})")]
    TooFewSamples { found: usize, needed: usize },
    #[error("no interior samples found in the window")]
    NoInteriorSamples,
    #[error("order not resolved: fitted slope {slope}")]
    OrderNotResolved { slope: f64 },
    #[error("gradient of the defining function vanishes at the base point")]
    GradientVanishes,
    #[error("base point is not on the boundary (r = {value:e})")]
    NotOnBoundary { value: f64 },
    #[error("argmax for n = {n} sits at the search radius: enlarge search radius")]
    EnlargeSearchRadius { n: u32 },
    #[error("argmax for n = {n} sits at the innermost grid radius: the boundary has finite type below n")]
    ArgmaxAtOrigin { n: u32 },
    #[error("f(0, z_n) = 0 for n = {n}: the boundary contains an affine disk, use the lemma32 sequence")]
    ZeroScale { n: u32 },
    #[error("target distance {needed} is not reachable in the second factor: choose closer x, y")]
    ChooseCloserPoints { needed: f64 },
    #[error("empty window intersection")]
    EmptyWindow,
    #[error("test pair {pair} is not contained in the domain for n = {n}")]
    PairOutside { n: u64, pair: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid context (a={a}, b={b}, c={c}): {reason}")]
    InvalidContext {
        a: u32,
        b: u32,
        c: u32,
        reason: &'static str,
    },
    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("invalid blow-up context (n={n}, r={r}): {reason}")]
    InvalidBlowup {
        n: usize,
        r: usize,
        reason: &'static str,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degenerate context: ac - a - c = 0")]
    DegenerateContext,
    #[error("(K, K) = 0, the orthogonal projection to K-perp is undefined")]
    IsotropicCanonical,
    #[error("operation requires a = 2, got a = {0}")]
    NotSingleFactor(u32),
    #[error("root of norm {0}, expected -2")]
    NotARoot(String),
    #[error("T_{{{a},{b},{c}}} is not of finite type")]
    InfiniteType { a: u32, b: u32, c: u32 },
    #[error("weight is not dominant: {0}")]
    NotDominant(String),
    #[error("{what} exceeded cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a minimal divisor: {0}")]
    NotMinimal(String),
    #[error("point parameters must be pairwise distinct (a_{i} = a_{j})")]
    CollidingParams { i: usize, j: usize },
    #[error("expected h0 = 1, got {0}")]
    NotUnique(usize),
    #[error("zero polynomial has no multiplicity or initial form")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous in the pair (x{index}, y{index})")]
    NotHomogeneous { index: usize },
    #[error("polynomial is not bihomogeneous in x and y")]
    NotBihomogeneous,
    #[error("polynomial is not invariant under the Nagata action")]
    NotInvariant,
    #[error("index set must have odd cardinality, got {0}")]
    EvenIndexSet(usize),
    #[error("variable layout mismatch")]
    VariableMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by hitting a configured resource cap.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    /// Stable snake-case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidContext { .. } => "invalid_context",
            Error::ContextMismatch(..) => "context_mismatch",
            Error::InvalidBlowup { .. } => "invalid_blowup",
            Error::Shape(_) => "shape",
            Error::DegenerateContext => "degenerate_context",
            Error::IsotropicCanonical => "isotropic_canonical",
            Error::NotSingleFactor(_) => "not_single_factor",
            Error::NotARoot(_) => "not_a_root",
            Error::InfiniteType { .. } => "infinite_type",
            Error::NotDominant(_) => "not_dominant",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::Precondition(_) => "precondition",
            Error::NotMinimal(_) => "not_minimal",
            Error::CollidingParams { .. } => "colliding_params",
            Error::NotUnique(_) => "not_unique",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::NotHomogeneous { .. } => "not_homogeneous",
            Error::NotBihomogeneous => "not_bihomogeneous",
            Error::NotInvariant => "not_invariant",
            Error::EvenIndexSet(_) => "even_index_set",
            Error::VariableMismatch => "variable_mismatch",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A groupoid table violates one of the category/inverse axioms.
    #[error("groupoid axiom violated ({axiom}): {witness}")]
    GroupoidAxiom { axiom: &'static str, witness: String },

    /// A partial action violates one of its defining conditions.
    #[error("partial action axiom violated ({axiom}): {witness}")]
    ActionAxiom { axiom: &'static str, witness: String },

    /// An algebraic partial action (idempotent presentation) is malformed.
    #[error("algebraic partial action violated ({axiom}): {witness}")]
    AlgebraicAxiom { axiom: &'static str, witness: String },

    #[error("ultragraph invalid: {0}")]
    Ultragraph(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("action not global: X_{morphism} is a proper subset of X_{unit}")]
    NotGlobal { morphism: String, unit: String },

    #[error("subset is not invariant: {0}")]
    NotInvariant(String),

    #[error("not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("subset not contained in the point set")]
    NotASubset,

    #[error("dimension {dim} exceeds the enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("unsupported field modulus {0} (supported: 2, 3, 5, 7)")]
    UnsupportedField(u32),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("elements belong to different ring contexts")]
    ContextMismatch,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("loops have different sources: {0}")]
    SourceMismatch(String),

    #[error("bounds infeasible: {0}")]
    InfeasibleBounds(String),

    #[error("limit exceeded: {0}")]
    TooLarge(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn groupoid(axiom: &'static str, witness: impl Into<String>) -> Self {
        Error::GroupoidAxiom {
            axiom,
            witness: witness.into(),
        }
    }

    pub(crate) fn action(axiom: &'static str, witness: impl Into<String>) -> Self {
        Error::ActionAxiom {
            axiom,
            witness: witness.into(),
        }
    }

    pub(crate) fn algebraic(axiom: &'static str, witness: impl Into<String>) -> Self {
        Error::AlgebraicAxiom {
            axiom,
            witness: witness.into(),
        }
    }
}

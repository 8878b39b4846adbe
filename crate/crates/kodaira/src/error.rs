use thiserror::Error;

/// Unified error type for all domain operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A matrix fails a structural precondition (shape, symmetry, ...).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// A discriminant-group input is not an intersection matrix of a fiber.
    #[error("non-fiber intersection matrix: {0}")]
    NonFiberMatrix(String),

    /// Dual of an infinite group is not representable.
    #[error("dual of a group with free rank {0} is infinite and not representable")]
    InfiniteDual(usize),

    /// An element does not belong to the group an operation expects.
    #[error("group element mismatch: {0}")]
    ElementMismatch(String),

    /// Enumeration budget exceeded.
    #[error("enumeration budget exceeded: max_components = {0} > {1}")]
    BudgetExceeded(usize, usize),

    /// A configuration does not match any entry of the Kodaira list.
    #[error("unclassifiable configuration: {0}")]
    Unclassifiable(String),

    /// A curve type has no reducible intersection matrix.
    #[error("no reducible matrix for integral type {0}")]
    NoReducibleMatrix(String),

    /// Operation applied to a fiber type outside its domain.
    #[error("wrong kind of fiber type: {0}")]
    WrongKind(String),

    /// A fiber type fails its structural invariants.
    #[error("invalid fiber type: {0}")]
    InvalidType(String),

    /// Parse error for the canonical string grammars.
    #[error("parse error: {0}")]
    Parse(String),

    /// A group action has a fixed point where freeness is required.
    #[error("not a multiple-fiber model: power {power} of the action has fixed points with trivial translation")]
    NotFree { power: u64 },

    /// A curve automorphism is outside the classified catalog of actions.
    #[error("unclassified action: {0}")]
    UnclassifiedAction(String),

    /// An automorphism is incompatible with the curve model it is applied to.
    #[error("action/model mismatch: {0}")]
    ActionMismatch(String),

    /// Linear-part pair impossible for a Néron-model pullback.
    #[error("impossible pullback pair ({0}, {1}): kernel of the pullback is unipotent")]
    ImpossiblePullback(String, String),

    /// Base-change degree not covered by a stated reduction pattern.
    #[error("reduction degree not covered: {0}")]
    ReductionNotCovered(String),

    /// Inadmissible Albanese stabilizer for a curve shape.
    #[error("inadmissible stabilizer: {0}")]
    InadmissibleStabilizer(String),

    /// Recipe or catalog lookup failure.
    #[error("unknown identifier: {0}")]
    UnknownId(String),
}

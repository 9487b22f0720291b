use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by the module that raises them first, but several are
/// shared (e.g. [`Error::NotAFace`] is raised by fan, cobordism and factor
/// operations alike). [`Error::InternalInvariant`] always indicates a bug in
/// this crate, never bad input.
#[derive(Debug, Error)]
pub enum Error {
    /// The zero vector has no primitive form and spans nothing.
    #[error("zero vector is not allowed here")]
    ZeroVector,

    /// An operation requiring linearly independent vectors got a dependent set.
    #[error("vectors are linearly dependent")]
    DependentInput,

    /// An enumeration would exceed the configured size cap.
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    /// A cone whose generators are linearly dependent.
    #[error("cone is not simplicial: {0}")]
    NonSimplicialCone(String),

    /// A ray of a cobordism fan projects to zero.
    #[error("cobordism fan has a vertical ray: {0}")]
    VerticalRay(String),

    /// A cone of a cobordism fan contains the vertical direction or its negative.
    #[error("cone is not pi-strictly convex: {0}")]
    NotPiStrictlyConvex(String),

    /// Two cones of a fan do not intersect in a common face.
    #[error("fan is not face-to-face: {0}")]
    NotFaceToFace(String),

    /// The given cone is not a face of the fan.
    #[error("cone is not a face of the fan")]
    NotAFace,

    /// A subdivision point lies outside the support of the fan.
    #[error("point lies outside the support of the fan")]
    OutsideSupport,

    /// A π-dependent cone was required.
    #[error("cone is pi-independent")]
    PiIndependent,

    /// A circuit (minimally π-dependent cone) was required.
    #[error("cone is not a circuit")]
    NotACircuit,

    /// The signed subdivision step needs a circuit of dimension at least 3.
    #[error("circuit has dimension 2 or less")]
    DimensionTooSmall,

    /// π-desingularization was asked for a fan that is already π-nonsingular.
    #[error("fan is already pi-nonsingular")]
    AlreadyNonsingular,

    /// The iteration cap was exceeded before reaching a π-nonsingular fan.
    #[error("iteration cap of {0} exceeded")]
    IterationCapExceeded(usize),

    /// Projected boundary faces do not assemble into a fan.
    #[error("projected boundary is not a fan: {0}")]
    ProjectionNotAFan(String),

    /// The circuit precedence relation has a cycle, so no elementary order exists.
    #[error("circuits are not filtrable: {0}")]
    NotFiltrable(String),

    /// An elementary step was attempted on a circuit that is not minimal.
    #[error("circuit is not minimal in the precedence order")]
    NotMinimal,

    /// Factorization extraction requires a π-nonsingular cobordism fan.
    #[error("fan is not pi-nonsingular")]
    NotPiNonsingular,

    /// Blowup cobordism construction requires a smooth center.
    #[error("center is not a smooth cone of the fan")]
    NotSmoothCenter,

    /// A weight vector violates the conventions of the weighted action construction.
    #[error("bad weight vector: {0}")]
    BadWeights(String),

    /// An order certificate does not strictly increase along the precedence relation.
    #[error("invalid order certificate: {0}")]
    BadCertificate(String),

    /// The one-parameter subgroup lies inside the chart cone or its negative.
    #[error("weight vector lies inside the cone or its negative")]
    AInsideCone,

    /// Monomial ideals from different charts cannot be multiplied.
    #[error("ideals live on different charts")]
    ChartMismatch,

    /// The zero ideal has no Newton subdivision.
    #[error("zero ideal")]
    ZeroIdeal,

    /// Malformed input (schema violations, bad indices, unmet preconditions).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A consistency check that should be unreachable failed; this is a bug.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error.
    ///
    /// `2` = invalid input, `3` = non-filtrable circuit order,
    /// `4` = internal invariant / cap violations (bugs).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotFiltrable(_) => 3,
            Error::InternalInvariant(_) | Error::IterationCapExceeded(_) => 4,
            _ => 2,
        }
    }
}

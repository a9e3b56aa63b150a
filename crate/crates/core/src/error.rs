use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variant names double as the machine-readable error names emitted by the
/// command-line reports, see [`Error::name`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("empty input")]
    EmptyInput,
    #[error("invalid tolerance policy: {0}")]
    InvalidPolicy(&'static str),
    #[error("label classes are not well separated (gap {gap:e} < required {required:e}); input looks numerically non-generic")]
    AmbiguousLabels { gap: f64, required: f64 },
    #[error("diagonal Gram labels fall into {classes} classes; input is not a single isometric orbit")]
    HeterogeneousNorms { classes: usize },
    #[error("points {0} and {1} coincide within tolerance")]
    DuplicatePoints(usize, usize),
    #[error("orbit pairing is not generic: {0}")]
    NonGenericPair(&'static str),
    #[error("orbits {0} and {1} share a norm; resample base points with distinct norms")]
    IndistinctNorms(usize, usize),
    #[error("orbit sizes differ: {0} vs {1}")]
    OrbitSizeMismatch(usize, usize),
    #[error("a single real orbit cannot pin down the acting group; supply at least 2 orbits or allow insufficient data")]
    InsufficientOrbits,
    #[error("recovered permutations are not closed under composition")]
    NotAGroup,
    #[error("Cayley reconstruction needs a complex Gram graph")]
    RealFieldUnsupported,
    #[error("orbit is not generic: {0}")]
    NonGenericOrbit(&'static str),
    #[error("character computation failed to separate classes after {attempts} attempts")]
    NumericalDegeneracy { attempts: usize },
    #[error("matrix traces differ inside conjugacy class {class}")]
    InconsistentTraces { class: usize },
    #[error("multiplicity {value} is not an integer")]
    NonIntegralMultiplicity { value: f64 },
    #[error("real regular representation check failed: sum {found} != group order {expected}")]
    RegularDecompositionMismatch { expected: usize, found: usize },
    #[error("the trivial group has no nontrivial representation")]
    TrivialGroup,
    #[error("source and target Gram matrices differ by {defect:e}")]
    NotIsometric { defect: f64 },
    #[error("fitted map misses tolerance: residual {residual:e}, isometry defect {isometry_defect:e}")]
    ResidualTooLarge { residual: f64, isometry_defect: f64 },
    #[error("matrix set is not closed under products (defect {defect:e})")]
    ClosureFailure { defect: f64 },
    #[error("generated group exceeds {limit} elements")]
    NotFinite { limit: usize },
    #[error("no generic sample found after {attempts} attempts")]
    GenericityFailure { attempts: usize },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// Stable identifier used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::FieldMismatch => "FieldMismatch",
            Error::EmptyInput => "EmptyInput",
            Error::InvalidPolicy(_) => "InvalidPolicy",
            Error::AmbiguousLabels { .. } => "AmbiguousLabels",
            Error::HeterogeneousNorms { .. } => "HeterogeneousNorms",
            Error::DuplicatePoints(..) => "DuplicatePoints",
            Error::NonGenericPair(_) => "NonGenericPair",
            Error::IndistinctNorms(..) => "IndistinctNorms",
            Error::OrbitSizeMismatch(..) => "OrbitSizeMismatch",
            Error::InsufficientOrbits => "InsufficientOrbits",
            Error::NotAGroup => "NotAGroup",
            Error::RealFieldUnsupported => "RealFieldUnsupported",
            Error::NonGenericOrbit(_) => "NonGenericOrbit",
            Error::NumericalDegeneracy { .. } => "NumericalDegeneracy",
            Error::InconsistentTraces { .. } => "InconsistentTraces",
            Error::NonIntegralMultiplicity { .. } => "NonIntegralMultiplicity",
            Error::RegularDecompositionMismatch { .. } => "RegularDecompositionMismatch",
            Error::TrivialGroup => "TrivialGroup",
            Error::NotIsometric { .. } => "NotIsometric",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::ClosureFailure { .. } => "ClosureFailure",
            Error::NotFinite { .. } => "NotFinite",
            Error::GenericityFailure { .. } => "GenericityFailure",
            Error::InvalidSpec(_) => "InvalidSpec",
        }
    }

    /// True for errors caused by malformed input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::FieldMismatch
                | Error::EmptyInput
                | Error::InvalidPolicy(_)
                | Error::OrbitSizeMismatch(..)
                | Error::InvalidSpec(_)
        )
    }
}

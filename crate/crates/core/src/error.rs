use alloc::string::String;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by a series that vanishes to its truncation order")]
    DivisionByZeroSeries,
    #[error("series exponents {0} and {1} do not differ by an integer")]
    IncompatibleExponents(String, String),
    #[error("composition undefined: {0}")]
    CompositionDomain(String),
    #[error("series is not reversible: linear coefficient vanishes")]
    NotReversible,
    #[error("elementary function outside its domain: {0}")]
    ElementaryDomain(String),
    #[error("lower hypergeometric parameter {0} is a non-positive integer")]
    PoleInParameters(String),
    #[error("unsupported substitution: {0}")]
    UnsupportedSubstitution(String),
    #[error("operator has order {found}, expected {expected}")]
    WrongOrder { expected: usize, found: usize },
    #[error("gauge factor is not the exponential of a rational integral")]
    NonRationalGauge,
    #[error("point {0} is an irregular singular point")]
    IrregularSingular(String),
    #[error("indicial polynomial has non-rational roots: {0}")]
    IrrationalRoots(String),
    #[error("indicial roots differ by a nonzero integer: {0}")]
    ResonantIntegerGap(String),
    #[error("basis lacks a holomorphic and single-log pair")]
    NoLogStructure,
    #[error("Yukawa coupling is not a rational function times a power: {0}")]
    NonClosedForm(String),
    #[error("unsupported operator order {0}")]
    UnsupportedOrder(usize),
    #[error("constant term {found} of the coupling differs from kappa = {kappa}")]
    NonzeroConstantMismatch { kappa: String, found: String },
    #[error("instanton series diverges: |q| >= 1")]
    DivergentTail,
    #[error("potential vanishes identically (kappa = 0 and no instantons)")]
    DegeneratePotential,
    #[error("path passes too close to a singular point (clearance {0})")]
    PathTooCloseToSingularity(String),
    #[error("error budget exceeds target precision: {0}")]
    PrecisionExhausted(String),
    #[error("no orbifold point: exponents {0} are resonant")]
    NoOrbifoldPoint(String),
    #[error("polar dual is not a lattice polytope: vertex {0}")]
    NotReflexive(String),
    #[error("rays do not match the polytope facets: {0}")]
    RaysMismatch(String),
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;

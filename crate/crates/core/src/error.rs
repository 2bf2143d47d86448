use thiserror::Error;

/// Failures raised by constructors and checked operations.
///
/// Residuals are carried as `f64` whatever the working scalar, so that the
/// error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("size limit exceeded: {what} = {value} > {limit}")]
    SizeLimit { what: &'static str, value: usize, limit: usize },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("element index {index} out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("not a homomorphism: rho({g1})rho({g2}) differs from rho({g1}*{g2}) by {residual:.3e}")]
    NotHomomorphism { g1: usize, g2: usize, residual: f64 },

    #[error("not unitary: rho({element}) deviates from unitarity by {residual:.3e}")]
    NotUnitary { element: usize, residual: f64 },

    #[error("representation '{label}' is not irreducible: <chi, chi> = {norm:.6}")]
    NotIrreducible { label: String, norm: f64 },

    #[error("character inner product {value:.6} is not close to an integer")]
    NonIntegralMultiplicity { value: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not an intertwiner: intertwining residual {residual:.3e}")]
    NotIntertwiner { residual: f64 },

    #[error("ill-conditioned basis: Gram-Schmidt residual {residual:.3e} is inside the rank-decision gap")]
    IllConditionedBasis { residual: f64 },

    #[error("dimension mismatch: basis has {found} elements, characters predict {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("incomplete irrep set: constituents account for dimension {found}, induced space has {expected}")]
    IncompleteIrrepSet { expected: usize, found: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("operator is not in the commutant: commutation residual {residual:.3e}")]
    NotInCommutant { residual: f64 },

    #[error("vector is not a unit vector: norm {norm:.6}")]
    NotUnitVector { norm: f64 },

    #[error("function is not in the Hecke algebra: membership residual {residual:.3e}")]
    NotInHeckeAlgebra { residual: f64 },

    #[error("normalizing sum {value:.3e} is degenerate")]
    DivisionDegenerate { value: f64 },

    #[error("theta must be one-dimensional, got degree {degree}")]
    ThetaNotOneDimensional { degree: usize },

    #[error("Gelfand-Tsetlin condition violated at level {level}: '{upper}' restricts to '{lower}' with multiplicity {multiplicity}")]
    GtViolation { level: usize, upper: String, lower: String, multiplicity: usize },

    #[error("expected a multiplicity-one step, found {found}")]
    MultiplicityNotOne { found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

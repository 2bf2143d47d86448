//! Harmonic analysis of induced representations of finite groups.
//!
//! Everything is generic over the scalar `T: Real` (`f32` or `f64`); the
//! aliases below fix `T = f64`, which is what the verifiers are tuned for.

// `!(r < tol)` is deliberate: a NaN residual must fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commutant;
pub mod corpus;
pub mod error;
pub mod frobenius;
pub mod group;
pub mod gt;
pub mod hecke;
pub mod intertwiner;
pub mod linalg;
pub mod rep;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use group::{FiniteGroup, PermutationGroup, Subgroup};
pub use report::{Check, Report};
pub use scalar::Real;

/// Verification tolerance for `f64` work.
pub const TAU: f64 = 1e-9;

pub type Matrix = linalg::CMatrix<f64>;
pub type Rep = rep::UnitaryRep<f64>;
pub type GroupAlgebra = rep::GroupAlgebraElement<f64>;
pub type ClassFn = rep::ClassFunction<f64>;
pub type Induced = frobenius::InducedRep<f64>;
pub type Decomposition = frobenius::IsotypicDecomposition<f64>;
pub type Blocks = commutant::FourierBlocks<f64>;
pub type Psi = hecke::PsiIdempotent<f64>;
pub type Hecke = hecke::HeckeAlgebra<f64>;
pub type Chain = gt::SubgroupChain<f64>;
pub type Bratteli = gt::BratteliDiagram<f64>;
pub type Path = gt::GtPath<f64>;

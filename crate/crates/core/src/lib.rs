//! Exact relative Mori theory for Q-factorial toric varieties.
//!
//! Given a simplicial fan and a toric morphism, this crate finds the
//! contracted invariant curves, the extremal rays of the relative Mori cone
//! and their extremal primitive relations, builds the Fano, divisorial and
//! small contractions and flips as fan surgeries, and decides relative
//! nef, free and ample questions.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`).
//!
//! ```
//! use toric_mori::{fixtures, mori::MoriAnalysis};
//!
//! let f1 = fixtures::f1_to_point();
//! let analysis = MoriAnalysis::new(&f1).unwrap();
//! assert_eq!(analysis.extremal.rays.len(), 2);
//! ```

pub mod contract;
pub mod fan;
pub mod fixtures;
pub mod io;
pub mod lattice;
mod lp;
pub mod mori;
pub mod positivity;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("not simplicial")]
    NotSimplicial,
    #[error("cone is not strongly convex")]
    NotStronglyConvex,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("integer does not fit in 64 bits")]
    Overflow,
    #[error("walls require pure full-dimensional fan")]
    NotPure,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("morphism incompatible: {0}")]
    MorphismIncompatible(String),
    #[error("no relation at boundary wall")]
    BoundaryWall,
    #[error("ray index {index} out of range ({count} rays)")]
    RayOutOfRange { index: usize, count: usize },
    #[error("extremal ray index {index} out of range ({count} extremal rays)")]
    ExtremalRayOutOfRange { index: usize, count: usize },
    #[error("relative Mori cone is not strongly convex")]
    MoriConeNotPointed,
    #[error("non-canonical extremal relation: {0}")]
    NonCanonicalRelation(String),
    #[error("extremal structure violated: {0}")]
    ExtremalStructure(String),
    #[error("not a Fano contraction")]
    NotFano,
    #[error("not a birational contraction")]
    NotBirational,
    #[error("not a small contraction")]
    NotSmall,
    #[error("quotient is not a fan: {0}")]
    QuotientNotFan(String),
    #[error("contraction target is not a fan: {0}")]
    SurgeryFailed(String),
    #[error("dimension formula violated: {0}")]
    DimensionFormula(String),
    #[error("C_R pairing requires smooth X")]
    NotSmooth,
    #[error("Batyrev normalization violated: coefficient {coefficient} on ray {ray}")]
    NormalizationViolated { ray: usize, coefficient: BigInt },
    #[error("criterion requires f-ample L")]
    NotRelativelyAmple,
    #[error("divisor must be integral")]
    NotIntegral,
    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    DivisorLength { expected: usize, found: usize },
    #[error("the two divisors must be distinct")]
    SameDivisor,
    #[error("cartier data requires full-dimensional simplicial cones")]
    NotFullDimensional,
    #[error("parse error: {0}")]
    Parse(String),
}

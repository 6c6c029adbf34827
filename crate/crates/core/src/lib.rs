//! Numerical toolkit for SL₂(ℂ) representation varieties of finitely presented
//! groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`presentation`]: words, Fox derivatives, abelianization, group balls;
//! - [`linalg2`]: SL₂(ℂ), 𝔰𝔩₂, adjoint action, exponential, Cartan projection;
//! - [`repvar`]: points of the representation variety and the Weeks data;
//! - [`cohomology`]: Z¹/B¹/H¹ at a representation, slices, Kodaira–Spencer classes;
//! - [`deformation`]: truncated jets and order-by-order extension of deformations;
//! - [`admissibility`]: Cartan-drift scans and admissibility verdicts;
//! - [`report`]: canonical JSON output.

pub mod admissibility;
pub mod cohomology;
pub mod deformation;
pub mod error;
pub mod linalg2;
pub mod numeric;
pub mod presentation;
pub mod report;
pub mod repvar;

pub use error::{Error, Result};

/// Numerical tolerances shared across modules.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// `|det − 1|` accepted for SL₂ elements.
    pub det: f64,
    /// Relator residual below which a representation is on the variety.
    pub rep: f64,
    /// Relative cocycle defect accepted for cocycles.
    pub coc: f64,
    /// Jet coefficient size treated as zero.
    pub jet: f64,
    /// Relative singular-value cut for numerical rank.
    pub rank: f64,
    /// Relative entrywise distance identifying matrices in ball enumeration.
    pub dedup: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { det: 1e-9, rep: 1e-9, coc: 1e-8, jet: 1e-8, rank: 1e-8, dedup: 1e-6 }
    }
}

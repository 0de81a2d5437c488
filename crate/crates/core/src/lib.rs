//! Asymptotic expansions of period integrals for one-parameter degenerations
//! of projective hypersurfaces, computed through GKZ hypergeometric systems.
//!
//! The crate is organized around the pipeline
//!
//! 1. [`lattice`] — exact combinatorics of the exponent matrix: kernel
//!    lattice, Gale duals, normalized volume, character index sets;
//! 2. [`fan`] — regular subdivisions from weight vectors, triangulation and
//!    skeleton tests, recognition of the Fermat and Dwork-perturbation
//!    triangulations;
//! 3. [`series`] — Gamma-series solutions: exponents, weight-bounded
//!    truncation, GKZ operators;
//! 4. [`constant`] — the symbolic ring of period constants (Gamma and
//!    polygamma values, roots of unity, formal logs) with numeric
//!    certification through [`numeric`];
//! 5. [`sst`] — ε-perturbations and SST limits producing log-bearing series
//!    at resonant parameters;
//! 6. [`fermat`] / [`dwork`] — closed-form Fermat periods, the key period
//!    expansion, Mellin–Barnes continuation and the Dwork connection formula;
//! 7. [`limit`] — pullback along a degeneration arc, Puiseux-log expansion
//!    and the limiting-period table.

pub mod constant;
pub mod cyclotomic;
pub mod dwork;
pub mod eps;
pub mod exact;
pub mod fan;
pub mod fermat;
pub mod lattice;
pub mod limit;
pub mod numeric;
pub mod par;
pub mod problem;
pub mod series;
pub mod sst;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("weight vector lies on the skeleton: {0}")]
    SkeletonHit(String),
    #[error("unsupported triangulation: {0}")]
    UnsupportedTriangulation(String),
    #[error("SST limit does not exist: {0}")]
    LimitNotFound(String),
    #[error("pole encountered: {0}")]
    Pole(String),
    #[error("enumeration region is unbounded: {0}")]
    Unbounded(String),
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("numeric evaluation failed: {0}")]
    Numeric(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

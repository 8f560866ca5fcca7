//! Construction and numerical verification of magnetic-potential
//! counterexamples to Strichartz estimates.
//!
//! The library builds the block-antisymmetric potential `A(x) = |x|^{-α} M x`,
//! the twisted-oscillator eigenpairs behind the quasi-mode ansatz, the
//! truncated quasi-modes themselves, and evaluates their mixed space-time
//! norms by quadrature. R-sweeps with log-log exponent fits confirm that the
//! Strichartz ratio grows with the predicted power of the truncation radius.
//!
//! Modules mirror the pipeline:
//! * [`potential`] — matrices, the vector potential and its identities,
//! * [`landau`] — the twisted harmonic oscillator and its ground state,
//! * [`quasimode`] — scaled quasi-modes, cutoffs, forcing terms,
//! * [`mixednorm`] — spatial and mixed-norm quadrature,
//! * [`scaling`] — exponent formulas, sweeps, fits and verdicts,
//! * [`config`] / [`report`] — CLI plumbing.

pub mod config;
pub mod dual;
pub mod landau;
pub mod mixednorm;
pub mod potential;
pub mod quad;
pub mod quasimode;
pub mod report;
pub mod scaling;

use thiserror::Error;

/// Errors shared across the verification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("potential is singular at the origin")]
    SingularOrigin,
    #[error("point outside the validity region: {0}")]
    OutsideSupport(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("eigensolver did not converge: {0}")]
    EigenNoConvergence(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),
    #[error("admissibility violation: {0}")]
    NotAdmissible(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

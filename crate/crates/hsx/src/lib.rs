//! Solver for α-dissipative solutions of the Hunter–Saxton equation.
//!
//! The method projects the initial data `(u, F, G)` onto a piecewise-linear
//! class on a uniform two-cell grid (preserving the total energy and the
//! relation `dμ_ac = u_x² dx`), maps it to Lagrangian coordinates, and then
//! evolves *exactly* in time along generalized characteristics. The only
//! approximation error is the projection step.
//!
//! Modules:
//! - [`pwl`]: piecewise-linear functions and monotone CDFs with atoms,
//!   plus exact L¹/L²/L∞ norms of differences.
//! - [`eulerian`]: the Eulerian state `(u, F, G)`, its validation, total
//!   energy, and the stability density in Eulerian variables.
//! - [`projection`]: the two-cell energy-preserving projection operator and
//!   its extension to states with `μ ≠ ν`.
//! - [`lagrangian`]: the maps between Eulerian and Lagrangian coordinates,
//!   the wave-breaking times, the closed-form time evolution, the stability
//!   density `g`, and the Lagrangian metric.
//! - [`reference`]: closed-form exact solutions (multipeakon, cusp, cosine)
//!   used as oracles, plus the error probes.
//! - [`harness`]: experiment driver producing error tables, convergence
//!   orders, CSV snapshots and a gnuplot script.

pub mod cli;
pub mod eulerian;
pub mod harness;
pub mod lagrangian;
pub mod projection;
pub mod pwl;
pub mod reference;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("state validation failed: {0}")]
    Validation(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("root finding failed: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed initial-data file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

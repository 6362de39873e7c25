//! # cqcap
//!
//! Numerics for generalized relative entropies and for capacity bounds of
//! classical-quantum channels.
//!
//! The crate is organized around a small dense complex-Hermitian kernel and
//! builds up to channel-level quantities:
//!
//! - [`hermitian`]: Hermitian matrices, spectral decompositions (cyclic Jacobi),
//!   fractional powers on the support, spectral projections, operator-order tests.
//! - [`divergences`]: the ψ-function `log₂ Tr ρᵗσ^{1-t}` and the scalar distances
//!   derived from it — Rényi relative entropies, relative entropy, Chernoff and
//!   Hoeffding distances (two independent algorithms), the Legendre pair φ/φ̂,
//!   max-relative entropy, and the order-∞ Rényi limit.
//! - [`channel`]: finite-alphabet classical-quantum channels, weighted input
//!   ensembles, the joint/product block states, product extensions, and the
//!   classical depolarizing family with its closed forms.
//! - [`capacities`]: suprema over input distributions — Holevo, Hoeffding,
//!   Chernoff, and max-relative-entropy capacities.
//! - [`discrimination`]: divergence radii (min-trace dominating operator),
//!   multiple-state discrimination (maximum-likelihood measurement, optimal
//!   success probability), the Holevo–Helström binary test, and the
//!   Audenaert trace inequality.
//! - [`coding`]: codes, square-root-measurement decoders, the random-coding
//!   error bound, one-shot/n-shot/exponential capacity bounds, and a
//!   brute-force one-shot capacity oracle for commuting channels.
//! - [`rng`]: a counter-based deterministic generator so every Monte Carlo
//!   result is reproducible from `(seed, index)`.
//!
//! All logarithms are base 2 unless stated otherwise; divergences that are
//! infinite are represented as `f64::INFINITY`, never as large finite floats.

#![forbid(unsafe_code)]

use thiserror::Error;

pub use num_complex::Complex64;

pub mod capacities;
pub mod channel;
pub mod coding;
pub mod discrimination;
pub mod divergences;
pub mod hermitian;
mod numeric;
pub mod rng;
pub mod sample;

/// Errors surfaced by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix data has length {got}, expected {expected} for a square matrix")]
    BadShape { expected: usize, got: usize },

    #[error("eigensolver did not converge: off-diagonal residual {residual:.3e} after {sweeps} sweeps")]
    EigenNonConvergence { residual: f64, sweeps: usize },

    #[error("trace is {0}, expected 1 (renormalization must be requested explicitly)")]
    TraceNotOne(f64),

    #[error("not positive semidefinite: min eigenvalue {0:.3e}")]
    NotPsd(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("size mismatch: {0} items vs {1}")]
    SizeMismatch(usize, usize),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("materialization guard exceeded: needs {needed}, guard is {guard}")]
    GuardExceeded { needed: u64, guard: u64 },

    #[error("states do not commute: max commutator entry {0:.3e}")]
    NonCommuting(f64),

    #[error("unknown input label: {0}")]
    UnknownLabel(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

//! Exact covering diagnostics for finite metric measure spaces.
//!
//! The crate builds finite metric measure spaces (integer grids, nets,
//! chordal polygons, explicit distance matrices), computes their regularity
//! constants (local comparability, microdoubling, microblossoming, relative
//! increments) with exact rational arithmetic and witnesses, runs the greedy
//! ball-selection algorithms for sparse, bounded and unrestricted radius
//! families, and verifies every covering and weak-type inequality those
//! selections are guaranteed to satisfy.
//!
//! Entry points:
//!
//! * [`space`] builds spaces and evaluates balls, blossoms and critical radii.
//! * [`constants`] computes regularity constants over optional radius windows.
//! * [`covering`] runs the selection algorithms and verifies their bounds.
//! * [`maximal`] computes maximal functions and weak-type profiles.
//! * [`cli`] backs the `covering-lab` binary and the report file formats.
//!
//! The `examples/` directory contains one runnable walk-through per major
//! capability; `cargo run --example three_point_delta` is a good start.

pub mod cli;
pub mod constants;
pub mod covering;
pub mod maximal;
pub mod rational;
pub mod set;
pub mod space;

pub use rational::{CmpMode, Q};
pub use set::PointSet;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid space specification: {0}")]
    InvalidSpec(String),

    #[error("distance matrix is not symmetric at ({i}, {j}): {a} vs {b}")]
    NotSymmetric {
        i: usize,
        j: usize,
        a: String,
        b: String,
    },

    #[error("distance matrix has nonzero diagonal at ({i}, {i}): {value}")]
    NonzeroDiagonal { i: usize, value: String },

    #[error("negative distance at ({i}, {j}): {value}")]
    NegativeDistance { i: usize, j: usize, value: String },

    #[error("negative weight at point {i}: {value}")]
    NegativeWeight { i: usize, value: String },

    #[error("distinct points {i} and {j} are at distance 0")]
    ZeroDistance { i: usize, j: usize },

    #[error(
        "triangle inequality violated by triple ({i}, {j}, {k}): \
         d({i},{j}) = {dij} > {dik} + {dkj} = d({i},{k}) + d({k},{j})"
    )]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        dij: String,
        dik: String,
        dkj: String,
    },

    #[error("point index {index} out of range for a space with {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0}")]
    Domain(String),

    #[error("lacunary radii set is empty for the requested range")]
    EmptyRadiiSet,

    #[error("ball {index} has zero measure")]
    ZeroMeasureBall { index: usize },

    #[error("invalid ball family: {0}")]
    InvalidFamily(String),

    #[error("sample function has zero L1 norm")]
    ZeroNorm,

    #[error("space budget exceeded: {points} points > budget {budget}")]
    BudgetExceeded { points: u64, budget: u64 },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("verification failed: {inequality} with lhs = {lhs}, rhs = {rhs}")]
    VerificationFailed {
        inequality: String,
        lhs: String,
        rhs: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Configures the global rayon pool from `COVERING_LAB_THREADS`.
///
/// A missing or unparsable value leaves the default pool untouched. Calling
/// this more than once is harmless.
pub fn configure_threads_from_env() {
    if let Ok(v) = std::env::var("COVERING_LAB_THREADS") {
        if let Ok(threads) = v.trim().parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

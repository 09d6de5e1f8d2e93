//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by geometry, special-function, mode, and assembly routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Evaluation requested within the exclusion margin of a coordinate
    /// singularity (r near 0 or pi, z near +-pi/2).
    #[error("coordinate ({r}, {z}) is within {margin} of a singular boundary")]
    Domain { r: f64, z: f64, margin: f64 },

    /// Non-terminating hypergeometric series requested outside its disk of
    /// convergence.
    #[error(
        "hypergeometric series does not converge at |x| = {abs_x} (non-terminating parameters)"
    )]
    Convergence { abs_x: f64 },

    /// The series hits a zero of the Pochhammer factor of the third parameter
    /// before it terminates.
    #[error("hypergeometric parameter gamma = {gamma} produces a pole at term {pole_term} before termination")]
    Pole { gamma: f64, pole_term: usize },

    /// Energy would be zero or imaginary; the mode does not propagate.
    #[error("degenerate energy: epsilon^2 = {epsilon_sq} is not positive for this mode")]
    DegenerateEnergy { epsilon_sq: f64 },

    /// sigma_of called with epsilon below the mass threshold.
    #[error("epsilon = {epsilon} is below the bound-state threshold M = {mass}")]
    BelowThreshold { epsilon: f64, mass: f64 },

    /// Mode data that should be quantized failed the integer check.
    #[error("internal consistency: {context} (value {value})")]
    InternalConsistency { context: &'static str, value: f64 },

    /// The requested assembler does not apply to the mode.
    #[error("assembly mismatch: {0}")]
    Assembly(String),

    /// Ladder inversion could not produce a usable solution.
    #[error("ladder inversion failed: {0}")]
    Inversion(String),

    /// Tridiagonal eigensolver failure.
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exp_series needs a vanishing constant term, got {0}")]
    NonzeroConstantTerm(Complex64),

    #[error("log_series needs constant term 1, got {0}")]
    ConstantTermNotOne(Complex64),

    #[error("q must lie in (0, 1), got {0}")]
    InvalidQ(f64),

    #[error("alpha must lie in [0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inadmissible parameters: {0} does not hold")]
    Inadmissible(&'static str),

    #[error("(c;q)_n vanishes at n = {0}")]
    PochhammerPole(usize),

    #[error(
        "no convergence within {terms} terms (parameters too close to the convergence boundary)"
    )]
    NoConvergence { terms: usize },

    #[error("function vanishes at z = {0}")]
    VanishesAt(Complex64),

    #[error("product factor {index} vanishes at z = {z}")]
    VanishingFactor { z: Complex64, index: usize },

    #[error("|h({z})| = {modulus} exceeds 1")]
    OutsideDisk { z: Complex64, modulus: f64 },

    #[error("value at the origin is {found}, expected {expected}")]
    CenterMismatch {
        found: Complex64,
        expected: Complex64,
    },

    #[error("function is not normalized: {0}")]
    NotNormalized(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("radicand {0} is negative")]
    NegativeRadicand(f64),
}

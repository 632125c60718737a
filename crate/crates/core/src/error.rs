//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("log-gamma pole: {0} is a non-positive integer")]
    GammaPole(num_complex::Complex64),

    #[error("Bessel series did not reach tolerance within {max_terms} terms (nu = {nu}, z = {z})")]
    BesselNonConvergence { nu: f64, z: f64, max_terms: usize },

    #[error("invalid mode spec: {0}")]
    InvalidModeSpec(String),

    #[error("packet too close to the horizon: 1/A = {horizon_distance} < {required} (= ratio * width)")]
    TooCloseToHorizon { horizon_distance: f64, required: f64 },

    #[error("grid too coarse: {points_per_wavelength} points per central wavelength (minimum 16)")]
    GridTooCoarse { points_per_wavelength: u32 },

    #[error("mode is not sampled on a uniform grid")]
    NonUniformGrid,

    #[error("negative-frequency content {fraction} exceeds 10% of the mode norm")]
    ExcessNegativeFrequency { fraction: f64 },

    #[error("acceleration {0} outside the supported range [{1}, {2}]")]
    AccelerationOutOfRange(f64, f64, f64),

    #[error("beta/alpha ratio {0} too large for the simplified channel (limit {1})")]
    BetaTooLarge(f64, f64),

    #[error("alpha curve is not strictly decreasing in (0, 1]: {0}")]
    InvalidAlphaCurve(String),

    #[error("covariance matrix is not symmetric (max asymmetry {0})")]
    AsymmetricCovariance(f64),

    #[error("state is not in the standard two-mode form required by the fast path")]
    NotStandardForm,

    #[error("resource has nonzero first moments (|mean| = {0}); displace it first")]
    NonZeroMeanResource(f64),

    #[error("input covariance is not a physical single-mode state (det = {0})")]
    UnphysicalInput(f64),

    #[error("Gamma matrix is singular or indefinite (det = {0})")]
    SingularGamma(f64),

    #[error("degenerate resource: |epsilon| = {0} leaves the compensation angle undefined")]
    DegenerateResource(f64),

    #[error("no equal-entanglement symmetric reference: {0}")]
    NoReferenceSolution(String),

    #[error("Monte-Carlo run needs at least {min} samples (got {got})")]
    TooFewSamples { min: u64, got: u64 },

    #[error("covariance is not positive definite; cannot sample")]
    NotPositiveDefinite,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

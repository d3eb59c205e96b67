//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by all gravipack modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate time interval: t_end = {t_end} does not exceed t_start = {t_start}")]
    DegenerateInterval { t_start: f64, t_end: f64 },

    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("divergent Gaussian integral: Re(A) = {re_a} > 0")]
    DivergentIntegral { re_a: f64 },

    #[error("degenerate Gaussian integral: A = 0")]
    DegenerateGaussian,

    #[error("caustic: van Vleck factor vanishes between t' = {t_start} and t'' = {t_end}")]
    Caustic { t_start: f64, t_end: f64 },

    #[error("average velocity u0 = {u0} inconsistent with the packet's k0/mu = {expected}")]
    InconsistentVelocity { u0: f64, expected: f64 },

    #[error("degenerate comparison: both density profiles have width {width}")]
    EqualWidths { width: f64 },

    #[error("invalid comparison: profile centers {first} and {second} differ")]
    MismatchedCenters { first: f64, second: f64 },

    #[error("grid point count {n} is not a power of two")]
    GridNotPowerOfTwo { n: usize },

    #[error("grid bounds [{x_min}, {x_max}) are empty")]
    EmptyGrid { x_min: f64, x_max: f64 },

    #[error("wavefunction grid does not match the configuration grid")]
    GridMismatch,

    #[error("wavefunction is not normalized: integral of |psi|^2 is {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("boundary leak after step {step}: |psi| = {amplitude:e} at the grid edge")]
    BoundaryLeak { step: usize, amplitude: f64 },

    #[error("empty scan: `{name}` needs at least one parameter value")]
    EmptyScan { name: &'static str },

    #[error("scan parameters for `{name}` must be strictly {order}")]
    NotMonotone {
        name: &'static str,
        order: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Physical constants in SI units (CODATA 2018) and the particle masses
//! used by the built-in density comparisons.

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Mass of 1 MeV/c² in kilograms.
pub const MEV_C2_TO_KG: f64 = 1.782_661_92e-30;

/// Standard acceleration of gravity (m/s²).
pub const STANDARD_GRAVITY: f64 = 9.806_65;

/// Neutral pion mass (MeV/c²).
pub const PI_ZERO_MASS_MEV: f64 = 134.98;

/// Charged pion mass (MeV/c²).
pub const PI_CHARGED_MASS_MEV: f64 = 139.57;

/// Neutral kaon mass (MeV/c²).
pub const K_ZERO_MASS_MEV: f64 = 497.67;

/// One ångström in meters.
pub const ANGSTROM: f64 = 1e-10;

//! Quantitative experiments on the mass dependence of quantum free fall:
//! classical-limit scans, particle-pair density comparisons, and the
//! propagator-modulus divergence check.

use crate::constants::{HBAR, K_ZERO_MASS_MEV, MEV_C2_TO_KG, PI_CHARGED_MASS_MEV, PI_ZERO_MASS_MEV};
use crate::error::{Error, Result};
use crate::lagrangian::GravityParams;
use crate::numeric::{integrate_panels, linspace};
use crate::propagator::gravity_propagator;
use crate::wavepacket::{
    classical_density, crossover_delta, density_profile, DensityProfile, GaussianPacket,
};

/// Unit tag of a particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassUnit {
    MevPerC2,
    Kilogram,
}

/// A named particle with its rest mass.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSpec {
    pub name: String,
    pub mass: f64,
    pub unit: MassUnit,
}

impl ParticleSpec {
    pub fn new(name: impl Into<String>, mass: f64, unit: MassUnit) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::NonPositive {
                name: "mass",
                value: mass,
            });
        }
        Ok(Self {
            name: name.into(),
            mass,
            unit,
        })
    }

    pub fn pi_zero() -> Self {
        Self::new("pi0", PI_ZERO_MASS_MEV, MassUnit::MevPerC2).unwrap()
    }

    pub fn pi_charged() -> Self {
        Self::new("pi+-", PI_CHARGED_MASS_MEV, MassUnit::MevPerC2).unwrap()
    }

    pub fn k_zero() -> Self {
        Self::new("K0", K_ZERO_MASS_MEV, MassUnit::MevPerC2).unwrap()
    }

    pub fn mass_kg(&self) -> f64 {
        match self.unit {
            MassUnit::MevPerC2 => self.mass * MEV_C2_TO_KG,
            MassUnit::Kilogram => self.mass,
        }
    }

    /// μ = m/ħ for the given ħ (pass 1 to reinterpret a Kilogram-tagged
    /// mass as a natural-unit μ).
    pub fn mu(&self, hbar: f64) -> f64 {
        self.mass_kg() / hbar
    }
}

/// Result of a one-parameter scan. `parameters` is strictly increasing;
/// what `values` and `deviations` hold depends on the scan:
///
/// * ħ-limit scan: widths Σ(μ) and sup|ρ_μ − ρ_cl|, both expected to fall.
/// * σ-limit scan: window masses and their defects 1 − mass; the window
///   mass grows as σ shrinks, so `values` falls along increasing σ.
/// * divergence check: |K|(μ) and the defect of the √(μ ratio) growth law
///   between consecutive points.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub parameters: Vec<f64>,
    pub values: Vec<f64>,
    pub deviations: Vec<f64>,
    pub values_decreasing: bool,
    pub deviations_decreasing: bool,
}

impl ScanResult {
    fn from_series(parameters: Vec<f64>, values: Vec<f64>, deviations: Vec<f64>) -> Self {
        let values_decreasing = strictly_decreasing(&values);
        let deviations_decreasing = strictly_decreasing(&deviations);
        Self {
            parameters,
            values,
            deviations,
            values_decreasing,
            deviations_decreasing,
        }
    }
}

fn strictly_decreasing(series: &[f64]) -> bool {
    series.windows(2).all(|w| w[1] < w[0])
}

fn strictly_increasing(series: &[f64]) -> bool {
    series.windows(2).all(|w| w[1] > w[0])
}

/// ħ → 0 scan at fixed packet and field: for each μ, the width Σ(μ) and
/// the sup deviation of ρ_μ from the mass-independent limit over
/// x̄'' ± 10σ. Both sequences fall monotonically and Σ → σ.
pub fn hbar_limit_scan(
    packet: &GaussianPacket,
    dt: f64,
    g: f64,
    mu_values: &[f64],
) -> Result<ScanResult> {
    if mu_values.is_empty() {
        return Err(Error::EmptyScan {
            name: "hbar_limit_scan",
        });
    }
    if !strictly_increasing(mu_values) {
        return Err(Error::NotMonotone {
            name: "hbar_limit_scan",
            order: "increasing",
        });
    }
    let mut widths = Vec::with_capacity(mu_values.len());
    let mut deviations = Vec::with_capacity(mu_values.len());
    for &mu in mu_values {
        let gp = GravityParams::new(g, mu)?;
        let u0 = packet.average_velocity(mu);
        let profile = density_profile(packet, dt, &gp, u0)?;
        widths.push(profile.width);
        let window = linspace(
            profile.center - 10.0 * packet.sigma,
            profile.center + 10.0 * packet.sigma,
            1001,
        );
        let sup = window
            .into_iter()
            .map(|x| (profile.density_at(x) - classical_density(x, packet, dt, g, u0)).abs())
            .fold(0.0, f64::max);
        deviations.push(sup);
    }
    Ok(ScanResult::from_series(
        mu_values.to_vec(),
        widths,
        deviations,
    ))
}

/// σ → 0 scan of the classical density: the probability inside the fixed
/// window x̄'' ± ε, with ε set by the largest σ scanned, tends to 1 — the
/// delta-sequence behavior of a perfectly localized classical particle.
///
/// Input widths come ordered toward the limit (strictly decreasing); the
/// result stores them ascending with window masses in `values` and the
/// defects 1 − mass in `deviations`.
pub fn sigma_limit_scan(
    x_prime: f64,
    u0: f64,
    dt: f64,
    g: f64,
    sigma_values: &[f64],
) -> Result<ScanResult> {
    if sigma_values.is_empty() {
        return Err(Error::EmptyScan {
            name: "sigma_limit_scan",
        });
    }
    if sigma_values.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::NonPositive {
            name: "sigma",
            value: *sigma_values
                .iter()
                .find(|&&s| !(s > 0.0))
                .unwrap_or(&f64::NAN),
        });
    }
    if !strictly_decreasing(sigma_values) {
        return Err(Error::NotMonotone {
            name: "sigma_limit_scan",
            order: "decreasing",
        });
    }
    let epsilon = sigma_values[0];
    let mut ascending: Vec<f64> = sigma_values.to_vec();
    ascending.reverse();
    let mut masses = Vec::with_capacity(ascending.len());
    let mut defects = Vec::with_capacity(ascending.len());
    for &sigma in &ascending {
        let packet = GaussianPacket::new(x_prime, sigma, 0.0)?;
        let center = x_prime + u0 * dt - 0.5 * g * dt * dt;
        let mass = integrate_panels(
            |x| classical_density(x, &packet, dt, g, u0),
            center - epsilon,
            center + epsilon,
            16,
        );
        masses.push(mass);
        defects.push(1.0 - mass);
    }
    Ok(ScanResult::from_series(ascending, masses, defects))
}

/// Side-by-side falling densities of two particles released identically.
#[derive(Debug, Clone, PartialEq)]
pub struct WepReport {
    pub heavy: ParticleSpec,
    pub light: ParticleSpec,
    pub mu_heavy: f64,
    pub mu_light: f64,
    pub profile_heavy: DensityProfile,
    pub profile_light: DensityProfile,
    /// Crossing half-distance Δ: inside x̄'' ± Δ the heavy particle is the
    /// more probable, outside the light one is.
    pub delta: f64,
    pub center: f64,
    /// Worst |ρ_h − ρ_l| at the two crossing points, relative to the peak.
    pub crossing_residual: f64,
    /// Strict ordering verified on the tabulated grid.
    pub ordering_holds: bool,
    pub positions: Vec<f64>,
    pub density_heavy: Vec<f64>,
    pub density_light: Vec<f64>,
    /// The resolved inputs, one `key = value` per line.
    pub provenance: String,
}

impl WepReport {
    pub fn peak_heavy(&self) -> f64 {
        self.profile_heavy.peak()
    }

    pub fn peak_light(&self) -> f64 {
        self.profile_light.peak()
    }
}

/// Compare the falling densities of two distinct-mass particles prepared
/// with the same σ, x', u₀ and field, tabulated on x̄'' ± 5 Σ_light.
#[allow(clippy::too_many_arguments)]
pub fn wep_violation_report(
    first: &ParticleSpec,
    second: &ParticleSpec,
    sigma: f64,
    x_prime: f64,
    u0: f64,
    dt: f64,
    g: f64,
    hbar: f64,
) -> Result<WepReport> {
    if first.mass_kg() == second.mass_kg() {
        return Err(Error::EqualWidths {
            width: first.mass_kg(),
        });
    }
    let (heavy, light) = if first.mass_kg() > second.mass_kg() {
        (first.clone(), second.clone())
    } else {
        (second.clone(), first.clone())
    };
    let mu_heavy = heavy.mu(hbar);
    let mu_light = light.mu(hbar);
    let packet_heavy = GaussianPacket::from_velocity(x_prime, sigma, u0, mu_heavy)?;
    let packet_light = GaussianPacket::from_velocity(x_prime, sigma, u0, mu_light)?;
    let profile_heavy =
        density_profile(&packet_heavy, dt, &GravityParams::new(g, mu_heavy)?, u0)?;
    let profile_light =
        density_profile(&packet_light, dt, &GravityParams::new(g, mu_light)?, u0)?;
    let delta = crossover_delta(&profile_heavy, &profile_light)?;
    let center = profile_heavy.center;

    let positions = linspace(
        center - 5.0 * profile_light.width,
        center + 5.0 * profile_light.width,
        1001,
    );
    let density_heavy: Vec<f64> = positions
        .iter()
        .map(|&x| profile_heavy.density_at(x))
        .collect();
    let density_light: Vec<f64> = positions
        .iter()
        .map(|&x| profile_light.density_at(x))
        .collect();

    let peak = profile_heavy.peak();
    let crossing_residual = [center + delta, center - delta]
        .iter()
        .map(|&x| (profile_heavy.density_at(x) - profile_light.density_at(x)).abs() / peak)
        .fold(0.0, f64::max);

    // Heavier means narrower means taller; the light curve wins strictly
    // outside ±Δ, the heavy one strictly inside (a small band around the
    // crossing itself is left out of the strict check).
    let mut ordering_holds =
        profile_heavy.width < profile_light.width && profile_heavy.peak() > profile_light.peak();
    for (j, &x) in positions.iter().enumerate() {
        let r = (x - center).abs() / delta;
        if r > 1.0 + 1e-9 {
            ordering_holds &= density_light[j] > density_heavy[j];
        } else if r < 1.0 - 1e-9 {
            ordering_holds &= density_heavy[j] > density_light[j];
        }
    }

    let provenance = format!(
        "heavy = {} ({} {:?})\nlight = {} ({} {:?})\nsigma = {sigma:e}\nxprime = {x_prime:e}\n\
         u0 = {u0:e}\ndt = {dt:e}\ng = {g:e}\nhbar = {hbar:e}",
        heavy.name, heavy.mass, heavy.unit, light.name, light.mass, light.unit
    );

    Ok(WepReport {
        heavy,
        light,
        mu_heavy,
        mu_light,
        profile_heavy,
        profile_light,
        delta,
        center,
        crossing_residual,
        ordering_holds,
        positions,
        density_heavy,
        density_light,
        provenance,
    })
}

/// |K| = √(μ/(2π Δt)) over a μ scan: strictly increasing and unbounded,
/// with |K| growing by √(μ ratio) between consecutive points (√2 per
/// doubling). `deviations[i]` holds the defect of that growth law.
pub fn propagator_divergence_check(dt: f64, mu_values: &[f64]) -> Result<ScanResult> {
    if mu_values.is_empty() {
        return Err(Error::EmptyScan {
            name: "propagator_divergence_check",
        });
    }
    if !strictly_increasing(mu_values) {
        return Err(Error::NotMonotone {
            name: "propagator_divergence_check",
            order: "increasing",
        });
    }
    let mut moduli = Vec::with_capacity(mu_values.len());
    for &mu in mu_values {
        let k = gravity_propagator(0.0, 0.0, dt, &GravityParams::new(0.0, mu)?)?;
        moduli.push(k.norm());
    }
    let mut deviations = vec![0.0];
    for j in 1..moduli.len() {
        let expected = (mu_values[j] / mu_values[j - 1]).sqrt();
        deviations.push((moduli[j] / moduli[j - 1] - expected).abs());
    }
    Ok(ScanResult::from_series(
        mu_values.to_vec(),
        moduli,
        deviations,
    ))
}

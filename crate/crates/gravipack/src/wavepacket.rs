//! Exact evolution of a Gaussian packet in a uniform field and the derived
//! density observables.
//!
//! The initial state is the minimum-uncertainty packet
//!
//! ```text
//! ψ(y, t') = exp( −(y − x')²/(2σ²) + i k₀ y ) / (π^{1/4} √σ)
//! ```
//!
//! Propagating it with the uniform-field kernel keeps it a complex
//! Gaussian, represented here by (prefactor, A, B, C) with
//! ψ(x) = prefactor · exp(A x² + B x + C). The density stays the real
//! Gaussian ρ = exp(−(x − x̄'')²/Σ²)/(√π Σ) with
//!
//! ```text
//! Σ² = Δt²/(μ²σ²) + σ²         (field-independent broadening)
//! x̄'' = x' + u₀ Δt − ½ g Δt²   (classical landing point, u₀ = k₀/μ)
//! ```
//!
//! so mass enters only through μ = m/ħ: packets of different mass fall to
//! the same center but spread differently.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lagrangian::GravityParams;
use crate::propagator::complex_gaussian_integral;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Initial Gaussian packet: center x', width σ, mean wavenumber k₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub center: f64,
    pub sigma: f64,
    pub k0: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, sigma: f64, k0: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::NonPositive {
                name: "sigma",
                value: sigma,
            });
        }
        Ok(Self { center, sigma, k0 })
    }

    /// Packet specified by its mean velocity u₀ instead of k₀ = μ u₀.
    pub fn from_velocity(center: f64, sigma: f64, u0: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::NonPositive { name: "mu", value: mu });
        }
        Self::new(center, sigma, mu * u0)
    }

    /// Mean velocity u₀ = k₀/μ for a particle of mass ratio μ.
    pub fn average_velocity(&self, mu: f64) -> f64 {
        self.k0 / mu
    }

    /// Initial amplitude at position y.
    pub fn amplitude(&self, y: f64) -> Complex64 {
        let dy = y - self.center;
        let norm = std::f64::consts::PI.powf(0.25) * self.sigma.sqrt();
        Complex64::new(-dy * dy / (2.0 * self.sigma * self.sigma), self.k0 * y).exp() / norm
    }

    fn check_velocity(&self, u0: f64, mu: f64) -> Result<()> {
        let expected = self.k0 / mu;
        let scale = expected.abs().max(u0.abs()).max(1.0);
        if (u0 - expected).abs() > 1e-12 * scale {
            return Err(Error::InconsistentVelocity { u0, expected });
        }
        Ok(())
    }
}

/// Evolved wavefunction in closed form: ψ(x) = prefactor · e^{A x² + B x + C}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGaussianState {
    pub prefactor: Complex64,
    /// Quadratic exponent coefficient A; Re(A) < 0 keeps the state
    /// normalizable.
    pub quad: Complex64,
    /// Linear exponent coefficient B.
    pub linear: Complex64,
    /// Constant exponent term C.
    pub constant: Complex64,
    pub time: f64,
}

impl ComplexGaussianState {
    /// Amplitude at position x.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        self.prefactor * (self.quad * (x * x) + self.linear * x + self.constant).exp()
    }

    /// |ψ(x)|², computed from the real parts of the exponent.
    pub fn density(&self, x: f64) -> f64 {
        self.prefactor.norm_sqr()
            * (2.0 * (self.quad.re * x * x + self.linear.re * x + self.constant.re)).exp()
    }

    /// ∫ |ψ|² dx in closed form from the state parameters.
    pub fn norm(&self) -> f64 {
        let a = 2.0 * self.quad.re;
        let b = 2.0 * self.linear.re;
        let c = 2.0 * self.constant.re;
        self.prefactor.norm_sqr() * (std::f64::consts::PI / -a).sqrt() * (c - b * b / (4.0 * a)).exp()
    }

    /// Center and width of |ψ|².
    pub fn density_profile(&self) -> DensityProfile {
        let width = (-0.5 / self.quad.re).sqrt();
        DensityProfile {
            center: -self.linear.re / (2.0 * self.quad.re),
            width,
        }
    }
}

/// Center x̄'' and width Σ of an evolved density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityProfile {
    pub center: f64,
    pub width: f64,
}

impl DensityProfile {
    /// ρ(x) = exp(−(x − x̄'')²/Σ²) / (√π Σ).
    pub fn density_at(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.width;
        (-u * u).exp() / (SQRT_PI * self.width)
    }

    /// Peak value 1/(√π Σ), reached at the center.
    pub fn peak(&self) -> f64 {
        1.0 / (SQRT_PI * self.width)
    }
}

/// Evolve the packet for Δt under the uniform field: the kernel integral
/// ∫ dy K(x'', Δt; y) ψ₀(y) is a complex Gaussian in y, evaluated by
/// [`complex_gaussian_integral`], and its x''-dependence is collected back
/// into closed Gaussian form.
pub fn evolve_packet(
    packet: &GaussianPacket,
    dt: f64,
    gp: &GravityParams,
) -> Result<ComplexGaussianState> {
    if !(dt > 0.0) {
        return Err(Error::DegenerateInterval {
            t_start: 0.0,
            t_end: dt,
        });
    }
    let i = Complex64::i();
    let sigma_sq = packet.sigma * packet.sigma;

    // y-exponent of K(x'', Δt; y, 0) ψ₀(y): A_y y² + (β₀ + β₁ x'') y, plus
    // the y-free part c₀ + c₁ x'' + c₂ x''².
    let a_y = Complex64::new(-0.5 / sigma_sq, 0.5 * gp.mu / dt);
    let beta0 = Complex64::new(packet.center / sigma_sq, packet.k0 - 0.5 * gp.mu * gp.g * dt);
    let beta1 = Complex64::new(0.0, -gp.mu / dt);
    let c0 = Complex64::new(
        -packet.center * packet.center / (2.0 * sigma_sq),
        -gp.mu * gp.g * gp.g * dt.powi(3) / 24.0,
    );
    let c1 = Complex64::new(0.0, -0.5 * gp.mu * gp.g * dt);
    let c2 = Complex64::new(0.0, 0.5 * gp.mu / dt);

    // ∫ dy e^{A_y y² + B(x'') y} = √(π/(−A_y)) e^{−B(x'')²/(4 A_y)}; the
    // square-root factor (and its branch) comes from the shared integral.
    let root = complex_gaussian_integral(a_y, Complex64::new(0.0, 0.0))?;

    let kernel_norm = (Complex64::new(gp.mu, 0.0)
        / Complex64::new(0.0, 2.0 * std::f64::consts::PI * dt))
    .sqrt();
    let packet_norm = std::f64::consts::PI.powf(0.25) * packet.sigma.sqrt();

    Ok(ComplexGaussianState {
        prefactor: kernel_norm / packet_norm * root,
        quad: c2 - beta1 * beta1 / (4.0 * a_y),
        linear: c1 - beta0 * beta1 / (2.0 * a_y),
        constant: c0 - beta0 * beta0 / (4.0 * a_y),
        time: dt,
    })
}

/// Center and width of the evolved density, directly from the closed
/// formulas. Σ never touches g; the field enters only the center.
pub fn density_profile(
    packet: &GaussianPacket,
    dt: f64,
    gp: &GravityParams,
    u0: f64,
) -> Result<DensityProfile> {
    if dt < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "dt must be nonnegative, got {dt}"
        )));
    }
    packet.check_velocity(u0, gp.mu)?;
    let width = if dt == 0.0 {
        packet.sigma
    } else {
        let spread = dt / (gp.mu * packet.sigma);
        (spread * spread + packet.sigma * packet.sigma).sqrt()
    };
    Ok(DensityProfile {
        center: packet.center + u0 * dt - 0.5 * gp.g * dt * dt,
        width,
    })
}

/// Probability density ρ(x) of the evolved packet.
pub fn probability_density(
    x: f64,
    packet: &GaussianPacket,
    dt: f64,
    gp: &GravityParams,
    u0: f64,
) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::DegenerateInterval {
            t_start: 0.0,
            t_end: dt,
        });
    }
    Ok(density_profile(packet, dt, gp, u0)?.density_at(x))
}

/// Half-distance Δ from the common center to the two points where the
/// densities of two particles coincide:
///
/// ```text
/// Δ = Σ₁Σ₂/√(Σ₂² − Σ₁²) · √(ln(Σ₂/Σ₁))
/// ```
///
/// Inside ±Δ the narrower (heavier) profile dominates; outside, the wider
/// (lighter) one does.
pub fn crossover_delta(first: &DensityProfile, second: &DensityProfile) -> Result<f64> {
    let center_scale = first.center.abs().max(second.center.abs()).max(1.0);
    if (first.center - second.center).abs() > 1e-12 * center_scale {
        return Err(Error::MismatchedCenters {
            first: first.center,
            second: second.center,
        });
    }
    if first.width == second.width {
        return Err(Error::EqualWidths { width: first.width });
    }
    let (narrow, wide) = if first.width < second.width {
        (first.width, second.width)
    } else {
        (second.width, first.width)
    };
    let spread = (wide * wide - narrow * narrow).sqrt();
    Ok(narrow * wide / spread * (wide / narrow).ln().sqrt())
}

/// Mass-independent limiting density: the initial Gaussian of width σ
/// recentered on the classical landing point. Note there is no μ anywhere
/// in the signature or the computation.
pub fn classical_density(x: f64, packet: &GaussianPacket, dt: f64, g: f64, u0: f64) -> f64 {
    let center = packet.center + u0 * dt - 0.5 * g * dt * dt;
    let u = (x - center) / packet.sigma;
    (-u * u).exp() / (SQRT_PI * packet.sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{linspace, trapezoid};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn natural(g: f64, mu: f64) -> GravityParams {
        GravityParams::new(g, mu).unwrap()
    }

    #[test]
    fn initial_packet_is_normalized() {
        let packet = GaussianPacket::new(0.3, 0.8, 2.0).unwrap();
        let xs = linspace(-10.0, 10.0, 4001);
        let h = xs[1] - xs[0];
        let density: Vec<f64> = xs.iter().map(|&x| packet.amplitude(x).norm_sqr()).collect();
        assert_relative_eq!(trapezoid(&density, h), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn short_time_evolution_stays_put() {
        let packet = GaussianPacket::new(0.5, 1.0, 0.0).unwrap();
        let gp = natural(0.0, 2.0);
        let dt = 1e-6 * gp.mu * packet.sigma * packet.sigma;
        let profile = density_profile(&packet, dt, &gp, 0.0).unwrap();
        assert_eq!(profile.center, 0.5);
        assert!(profile.width / packet.sigma - 1.0 < 1e-9);
    }

    #[test]
    fn free_drift_moves_center_by_u0_dt() {
        let mu = 2.0;
        let packet = GaussianPacket::new(0.0, 1.0, 3.0).unwrap();
        let gp = natural(0.0, mu);
        let u0 = packet.average_velocity(mu);
        let state = evolve_packet(&packet, 1.5, &gp).unwrap();
        assert_relative_eq!(
            state.density_profile().center,
            u0 * 1.5,
            max_relative = 1e-12
        );
    }

    #[test]
    fn falling_center_matches_classical_landing_point() {
        let mu = 1.5;
        let packet = GaussianPacket::new(0.2, 0.7, 1.2).unwrap();
        let gp = natural(9.8, mu);
        let u0 = packet.average_velocity(mu);
        let dt = 0.8;
        let state = evolve_packet(&packet, dt, &gp).unwrap();
        let expected = 0.2 + u0 * dt - 0.5 * 9.8 * dt * dt;
        assert_relative_eq!(state.density_profile().center, expected, max_relative = 1e-10);
    }

    #[test]
    fn evolved_state_matches_pointwise_kernel_integral() {
        // The closed-form state against the literal per-point route:
        // prefactors × ∫ dy e^{A y² + B(x'') y} for each x'' separately.
        let packet = GaussianPacket::new(-0.3, 0.9, 1.7).unwrap();
        let gp = natural(3.0, 1.4);
        let dt = 0.9;
        let state = evolve_packet(&packet, dt, &gp).unwrap();

        let i = Complex64::i();
        let sigma_sq = packet.sigma * packet.sigma;
        let a_y = Complex64::new(-0.5 / sigma_sq, 0.5 * gp.mu / dt);
        let kernel_norm = (Complex64::new(gp.mu, 0.0)
            / Complex64::new(0.0, 2.0 * std::f64::consts::PI * dt))
        .sqrt();
        let packet_norm = std::f64::consts::PI.powf(0.25) * packet.sigma.sqrt();
        for &x in &[-2.0, -0.5, 0.0, 0.8, 2.5] {
            let b_y = Complex64::new(
                packet.center / sigma_sq,
                packet.k0 - 0.5 * gp.mu * gp.g * dt - gp.mu * x / dt,
            );
            let y_free = Complex64::new(-packet.center * packet.center / (2.0 * sigma_sq), 0.0)
                + i * 0.5
                    * gp.mu
                    * (x * x / dt - gp.g * dt * x - gp.g * gp.g * dt.powi(3) / 12.0);
            let direct = kernel_norm / packet_norm
                * y_free.exp()
                * complex_gaussian_integral(a_y, b_y).unwrap();
            let via_state = state.evaluate(x);
            assert!((via_state - direct).norm() / direct.norm() < 1e-12);
        }
    }

    #[test]
    fn state_density_equals_closed_form_density() {
        let mu = 2.3;
        let packet = GaussianPacket::new(0.4, 0.6, -1.1).unwrap();
        let gp = natural(2.5, mu);
        let dt = 1.2;
        let u0 = packet.average_velocity(mu);
        let state = evolve_packet(&packet, dt, &gp).unwrap();
        let profile = density_profile(&packet, dt, &gp, u0).unwrap();
        for &x in linspace(
            profile.center - 6.0 * profile.width,
            profile.center + 6.0 * profile.width,
            101,
        )
        .iter()
        {
            let direct = probability_density(x, &packet, dt, &gp, u0).unwrap();
            assert_relative_eq!(state.density(x), direct, max_relative = 1e-12);
        }
    }

    #[test]
    fn evolved_state_is_normalized_analytically() {
        let packet = GaussianPacket::new(1.0, 0.5, 2.0).unwrap();
        let gp = natural(4.0, 0.8);
        let state = evolve_packet(&packet, 2.0, &gp).unwrap();
        assert!(state.quad.re < 0.0);
        assert_relative_eq!(state.norm(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn density_normalizes_over_wide_window() {
        let mu = 1.1;
        let packet = GaussianPacket::new(0.0, 1.3, 0.7).unwrap();
        let gp = natural(1.0, mu);
        let u0 = packet.average_velocity(mu);
        let profile = density_profile(&packet, 2.0, &gp, u0).unwrap();
        let xs = linspace(
            profile.center - 10.0 * profile.width,
            profile.center + 10.0 * profile.width,
            2001,
        );
        let h = xs[1] - xs[0];
        let rho: Vec<f64> = xs
            .iter()
            .map(|&x| probability_density(x, &packet, 2.0, &gp, u0).unwrap())
            .collect();
        assert_relative_eq!(trapezoid(&rho, h), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn peak_value_at_center() {
        let mu = 1.0;
        let packet = GaussianPacket::new(0.0, 1.0, 0.0).unwrap();
        let gp = natural(0.0, mu);
        let profile = density_profile(&packet, 1.0, &gp, 0.0).unwrap();
        let rho = probability_density(profile.center, &packet, 1.0, &gp, 0.0).unwrap();
        assert_relative_eq!(rho, profile.peak(), max_relative = 1e-15);
        assert_relative_eq!(rho, 1.0 / (SQRT_PI * 2f64.sqrt()), max_relative = 1e-15);
    }

    #[test]
    fn width_is_field_independent_bit_for_bit() {
        let mu = 3.0;
        let packet = GaussianPacket::new(0.0, 0.4, 6.0).unwrap();
        let u0 = packet.average_velocity(mu);
        for dt in [0.0, 0.3, 2.7] {
            let no_field = density_profile(&packet, dt, &natural(0.0, mu), u0).unwrap();
            let field = density_profile(&packet, dt, &natural(9.8, mu), u0).unwrap();
            assert_eq!(no_field.width.to_bits(), field.width.to_bits());
        }
    }

    #[test]
    fn width_at_zero_time_is_sigma_exactly() {
        let packet = GaussianPacket::new(0.0, 0.37, 0.0).unwrap();
        let profile = density_profile(&packet, 0.0, &natural(5.0, 2.0), 0.0).unwrap();
        assert_eq!(profile.width.to_bits(), 0.37f64.to_bits());
        assert_eq!(profile.center, 0.0);
    }

    #[test]
    fn si_scale_pion_width_reaches_meter_scale() {
        use crate::constants::{HBAR, MEV_C2_TO_KG, PI_ZERO_MASS_MEV};
        let mu = PI_ZERO_MASS_MEV * MEV_C2_TO_KG / HBAR;
        let sigma = 1e-8;
        let packet = GaussianPacket::new(0.0, sigma, 0.0).unwrap();
        // Δt chosen so Δt/(μσ) = 1 m.
        let dt = mu * sigma;
        let profile = density_profile(&packet, dt, &GravityParams::new(0.0, mu).unwrap(), 0.0)
            .unwrap();
        assert_relative_eq!(profile.width, (1.0 + 1e-16f64).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn velocity_consistency_is_enforced() {
        let packet = GaussianPacket::new(0.0, 1.0, 2.0).unwrap();
        let gp = natural(0.0, 2.0);
        assert!(probability_density(0.0, &packet, 1.0, &gp, 1.0).is_ok());
        assert!(matches!(
            probability_density(0.0, &packet, 1.0, &gp, 1.5),
            Err(Error::InconsistentVelocity { .. })
        ));
    }

    #[test]
    fn crossover_delta_known_value() {
        // Σ₁ = 1, Σ₂ = 2: Δ = (2/√3)√(ln 2), frozen from direct evaluation.
        let p1 = DensityProfile { center: 0.0, width: 1.0 };
        let p2 = DensityProfile { center: 0.0, width: 2.0 };
        let delta = crossover_delta(&p1, &p2).unwrap();
        assert_relative_eq!(delta, 0.9613406625180987, max_relative = 1e-12);
        // Defining equality at both crossing points.
        for x in [delta, -delta] {
            assert_relative_eq!(p1.density_at(x), p2.density_at(x), max_relative = 1e-10);
        }
    }

    #[test]
    fn crossover_delta_near_equal_widths_limit() {
        // Σ₂/Σ₁ → 1⁺ tends to Σ/√2.
        let limit = 1.0 / 2f64.sqrt();
        let mut gaps = Vec::new();
        for eps in [1e-2, 1e-3, 1e-4, 1e-5] {
            let p1 = DensityProfile { center: 0.0, width: 1.0 };
            let p2 = DensityProfile {
                center: 0.0,
                width: 1.0 + eps,
            };
            gaps.push((crossover_delta(&p1, &p2).unwrap() - limit).abs());
        }
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(*gaps.last().unwrap() < 1e-5);
    }

    #[test]
    fn crossover_rejects_degenerate_inputs() {
        let p = DensityProfile { center: 0.0, width: 1.0 };
        assert!(matches!(
            crossover_delta(&p, &p),
            Err(Error::EqualWidths { .. })
        ));
        let shifted = DensityProfile { center: 1.0, width: 2.0 };
        assert!(matches!(
            crossover_delta(&p, &shifted),
            Err(Error::MismatchedCenters { .. })
        ));
    }

    #[test]
    fn classical_density_basics() {
        let packet = GaussianPacket::new(0.0, 0.5, 0.0).unwrap();
        let center = 0.0 + 1.0 * 2.0 - 0.5 * 3.0 * 4.0;
        assert_relative_eq!(
            classical_density(center, &packet, 2.0, 3.0, 1.0),
            1.0 / (SQRT_PI * 0.5),
            max_relative = 1e-15
        );
        let xs = linspace(center - 8.0, center + 8.0, 3001);
        let h = xs[1] - xs[0];
        let rho: Vec<f64> = xs
            .iter()
            .map(|&x| classical_density(x, &packet, 2.0, 3.0, 1.0))
            .collect();
        assert_relative_eq!(trapezoid(&rho, h), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn classical_density_is_the_large_mu_limit() {
        let sigma = 1.0;
        let dt = 1.0;
        let mu = 1e9 * dt / (sigma * sigma);
        let packet = GaussianPacket::from_velocity(0.0, sigma, 0.5, mu).unwrap();
        let gp = natural(2.0, mu);
        let profile = density_profile(&packet, dt, &gp, 0.5).unwrap();
        let sup = linspace(profile.center - 10.0, profile.center + 10.0, 2001)
            .into_iter()
            .map(|x| {
                (probability_density(x, &packet, dt, &gp, 0.5).unwrap()
                    - classical_density(x, &packet, dt, gp.g, 0.5))
                .abs()
            })
            .fold(0.0, f64::max);
        assert!(sup < 1e-6);
    }

    #[test]
    fn width_monotone_in_time_and_inverse_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let sigma = rng.gen_range(0.2..2.0);
            let packet = GaussianPacket::new(0.0, sigma, 0.0).unwrap();
            let mut previous = 0.0;
            for step in 1..6 {
                let dt = step as f64 * 0.4;
                let w = density_profile(&packet, dt, &natural(0.0, 1.0), 0.0)
                    .unwrap()
                    .width;
                assert!(w > previous);
                previous = w;
            }
            let mut previous = f64::INFINITY;
            for step in 0..6 {
                let mu = 0.5 * 2f64.powi(step);
                let w = density_profile(&packet, 1.0, &natural(0.0, mu), 0.0)
                    .unwrap()
                    .width;
                assert!(w < previous);
                previous = w;
            }
        }
    }

    proptest! {
        #[test]
        fn translation_covariance(
            shift in -20.0f64..20.0,
            x in -5.0f64..5.0,
            sigma in 0.2f64..2.0,
            k0 in -5.0f64..5.0,
            dt in 0.1f64..5.0,
        ) {
            let mu = 1.7;
            let gp = natural(3.0, mu);
            let base = GaussianPacket::new(0.0, sigma, k0).unwrap();
            let moved = GaussianPacket::new(shift, sigma, k0).unwrap();
            let u0 = base.average_velocity(mu);
            let a = probability_density(x, &base, dt, &gp, u0).unwrap();
            let b = probability_density(x + shift, &moved, dt, &gp, u0).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }

        #[test]
        fn crossover_defining_property(
            narrow in 0.2f64..2.0,
            expand in 1.01f64..5.0,
            center in -10.0f64..10.0,
        ) {
            let p1 = DensityProfile { center, width: narrow };
            let p2 = DensityProfile { center, width: narrow * expand };
            let delta = crossover_delta(&p1, &p2).unwrap();
            let lhs = p1.density_at(center + delta);
            let rhs = p2.density_at(center + delta);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
            // Heavier (narrower) dominates inside, lighter outside.
            prop_assert!(p1.density_at(center + 0.5 * delta) > p2.density_at(center + 0.5 * delta));
            prop_assert!(p1.density_at(center + 2.0 * delta) < p2.density_at(center + 2.0 * delta));
        }
    }
}

//! Accelerated-frame machinery: the coordinate shift x̃ = x − ξ(t) together
//! with the phase redefinition
//!
//! ```text
//! ψ̃(x̃, t) = exp{ −iμ ( x̃ ξ̇(t) + ½ ∫_t̄^t |ξ̇|² dτ ) } ψ(x̃ + ξ(t), t)
//! ```
//!
//! A state that evolves freely in the unshifted frame evolves, after this
//! transform, exactly as if it felt the uniform field ξ̈(t) — which is what
//! makes the transform a numerical equivalence test between free and
//! falling evolution.
//!
//! The grid shift is realized by relabeling the grid coordinates, never by
//! interpolation, so |ψ̃(x̃)| = |ψ(x̃ + ξ)| holds exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{poly_antiderivative, poly_derivative, poly_eval, poly_mul, trapezoid};
use crate::wavepacket::{ComplexGaussianState, GaussianPacket};

/// Uniform spatial grid of a power-of-two number of points, periodic
/// convention: x_j = x_min + j·h with h = (x_max − x_min)/n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_max > x_min) {
            return Err(Error::EmptyGrid { x_min, x_max });
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::GridNotPowerOfTwo { n });
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Grid translated by `shift`, same spacing and count.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            x_min: self.x_min + shift,
            x_max: self.x_max + shift,
            n: self.n,
        }
    }

    /// Angular wavenumber of Fourier mode j in the usual FFT layout.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let length = self.x_max - self.x_min;
        let m = if j <= self.n / 2 {
            j as f64
        } else {
            j as f64 - self.n as f64
        };
        2.0 * std::f64::consts::PI * m / length
    }
}

/// Complex amplitudes sampled on a [`Grid`] at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub time: f64,
}

impl SampledWavefunction {
    pub fn new(grid: Grid, values: Vec<Complex64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, values, time })
    }

    /// Sample the initial Gaussian packet.
    pub fn from_packet(grid: Grid, packet: &GaussianPacket, time: f64) -> Self {
        let values = grid.points().map(|x| packet.amplitude(x)).collect();
        Self { grid, values, time }
    }

    /// Sample a closed-form evolved state.
    pub fn from_state(grid: Grid, state: &ComplexGaussianState) -> Self {
        let values = grid.points().map(|x| state.evaluate(x)).collect();
        Self {
            grid,
            values,
            time: state.time,
        }
    }

    /// ∫ |ψ|² dx by the trapezoid rule.
    pub fn norm_sq(&self) -> f64 {
        let density: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        trapezoid(&density, self.grid.spacing())
    }

    /// |ψ|² at grid point j.
    pub fn density(&self, j: usize) -> f64 {
        self.values[j].norm_sqr()
    }

    /// Largest |ψ| on the two edge points.
    pub fn boundary_amplitude(&self) -> f64 {
        self.values[0]
            .norm()
            .max(self.values[self.values.len() - 1].norm())
    }

    fn check_normalized(&self) -> Result<()> {
        let norm_sq = self.norm_sq();
        if (norm_sq - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(())
    }
}

/// Trajectory ξ(t) of the moving frame, with exact derivative and exact
/// kinetic phase integral ∫ |ξ̇|² dτ.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameTrajectory {
    /// ξ(t) = ½ a t².
    ConstantAcceleration { accel: f64, t_bar: f64 },
    /// ξ(t) given by ascending polynomial coefficients.
    Polynomial { coeffs: Vec<f64>, t_bar: f64 },
}

impl FrameTrajectory {
    pub fn constant_acceleration(accel: f64) -> Self {
        FrameTrajectory::ConstantAcceleration { accel, t_bar: 0.0 }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        FrameTrajectory::Polynomial { coeffs, t_bar: 0.0 }
    }

    /// Same trajectory with the phase reference instant t̄ moved. Any choice
    /// changes ψ̃ by one global phase only.
    pub fn with_t_bar(self, t_bar: f64) -> Self {
        match self {
            FrameTrajectory::ConstantAcceleration { accel, .. } => {
                FrameTrajectory::ConstantAcceleration { accel, t_bar }
            }
            FrameTrajectory::Polynomial { coeffs, .. } => {
                FrameTrajectory::Polynomial { coeffs, t_bar }
            }
        }
    }

    pub fn t_bar(&self) -> f64 {
        match self {
            FrameTrajectory::ConstantAcceleration { t_bar, .. } => *t_bar,
            FrameTrajectory::Polynomial { t_bar, .. } => *t_bar,
        }
    }

    pub fn xi(&self, t: f64) -> f64 {
        match self {
            FrameTrajectory::ConstantAcceleration { accel, .. } => 0.5 * accel * t * t,
            FrameTrajectory::Polynomial { coeffs, .. } => poly_eval(coeffs, t),
        }
    }

    pub fn xi_dot(&self, t: f64) -> f64 {
        match self {
            FrameTrajectory::ConstantAcceleration { accel, .. } => accel * t,
            FrameTrajectory::Polynomial { coeffs, .. } => poly_eval(&poly_derivative(coeffs), t),
        }
    }

    /// ∫_{t1}^{t2} |ξ̇(τ)|² dτ, in closed form.
    pub fn kinetic_phase_integral(&self, t1: f64, t2: f64) -> f64 {
        match self {
            FrameTrajectory::ConstantAcceleration { accel, .. } => {
                accel * accel * (t2.powi(3) - t1.powi(3)) / 3.0
            }
            FrameTrajectory::Polynomial { coeffs, .. } => {
                let xi_dot = poly_derivative(coeffs);
                let anti = poly_antiderivative(&poly_mul(&xi_dot, &xi_dot));
                poly_eval(&anti, t2) - poly_eval(&anti, t1)
            }
        }
    }

    /// Largest relative deviation between ξ̇ and a central difference of ξ,
    /// probed at 20 points of [t_lo, t_hi].
    pub fn max_derivative_deviation(&self, t_lo: f64, t_hi: f64) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..20 {
            let t = t_lo + (t_hi - t_lo) * (k as f64 + 0.5) / 20.0;
            let h = 1e-6 * t.abs().max(1.0);
            let fd = (self.xi(t + h) - self.xi(t - h)) / (2.0 * h);
            let exact = self.xi_dot(t);
            let scale = exact.abs().max(1.0);
            worst = worst.max((fd - exact).abs() / scale);
        }
        worst
    }
}

fn transform(
    psi: &SampledWavefunction,
    frame: &FrameTrajectory,
    mu: f64,
    inverse: bool,
) -> Result<SampledWavefunction> {
    if !(mu > 0.0) {
        return Err(Error::NonPositive { name: "mu", value: mu });
    }
    let t = psi.time;
    let xi = frame.xi(t);
    let xi_dot = frame.xi_dot(t);
    let kinetic = frame.kinetic_phase_integral(frame.t_bar(), t);
    let (sign, shift) = if inverse { (1.0, xi) } else { (-1.0, -xi) };
    let grid = psi.grid.shifted(shift);
    // In both directions the phase is a function of the accelerated-frame
    // coordinate x̃: the output grid going out, the input grid coming back.
    let phase_grid = if inverse { psi.grid } else { grid };
    let values = psi
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let x_tilde = phase_grid.point(j);
            let theta = mu * (x_tilde * xi_dot + 0.5 * kinetic);
            Complex64::from_polar(1.0, sign * theta) * v
        })
        .collect();
    Ok(SampledWavefunction {
        grid,
        values,
        time: t,
    })
}

/// Map ψ into the accelerated frame: relabel the grid by −ξ(t) and apply
/// the velocity-dependent phase. Pointwise |ψ̃(x̃)| = |ψ(x̃ + ξ(t))|.
pub fn to_accelerated_frame(
    psi: &SampledWavefunction,
    frame: &FrameTrajectory,
    mu: f64,
) -> Result<SampledWavefunction> {
    psi.check_normalized()?;
    transform(psi, frame, mu, false)
}

/// Exact inverse of [`to_accelerated_frame`].
pub fn from_accelerated_frame(
    psi_tilde: &SampledWavefunction,
    frame: &FrameTrajectory,
    mu: f64,
) -> Result<SampledWavefunction> {
    psi_tilde.check_normalized()?;
    transform(psi_tilde, frame, mu, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::GravityParams;
    use crate::wavepacket::evolve_packet;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn test_state(k0: f64) -> SampledWavefunction {
        let grid = Grid::new(-20.0, 20.0, 1024).unwrap();
        let packet = GaussianPacket::new(0.5, 1.0, k0).unwrap();
        SampledWavefunction::from_packet(grid, &packet, 0.7)
    }

    #[test]
    fn zero_trajectory_is_identity() {
        let psi = test_state(1.0);
        let frame = FrameTrajectory::polynomial(vec![]);
        let out = to_accelerated_frame(&psi, &frame, 2.0).unwrap();
        assert_eq!(out.grid, psi.grid);
        for (a, b) in out.values.iter().zip(psi.values.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn transform_preserves_norm() {
        let psi = test_state(-2.0);
        let frame = FrameTrajectory::constant_acceleration(3.0);
        let out = to_accelerated_frame(&psi, &frame, 1.5).unwrap();
        assert_relative_eq!(out.norm_sq(), psi.norm_sq(), max_relative = 1e-12);
        let back = from_accelerated_frame(&out, &frame, 1.5).unwrap();
        assert_relative_eq!(back.norm_sq(), psi.norm_sq(), max_relative = 1e-12);
    }

    #[test]
    fn round_trip_is_identity() {
        let psi = test_state(2.5);
        let frame = FrameTrajectory::polynomial(vec![0.1, -0.4, 0.8, 0.05]).with_t_bar(0.2);
        let out = from_accelerated_frame(
            &to_accelerated_frame(&psi, &frame, 2.2).unwrap(),
            &frame,
            2.2,
        )
        .unwrap();
        assert_eq!(out.grid, psi.grid);
        for (a, b) in out.values.iter().zip(psi.values.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn densities_are_translated_samples() {
        let psi = test_state(0.0);
        let frame = FrameTrajectory::constant_acceleration(9.8);
        let out = to_accelerated_frame(&psi, &frame, 1.0).unwrap();
        let shift = frame.xi(psi.time);
        // Same index, coordinate relabeled by −ξ(t): the density values are
        // untouched while the grid moved.
        assert_relative_eq!(out.grid.point(0), psi.grid.point(0) - shift, epsilon = 1e-15);
        for j in 0..psi.grid.len() {
            assert_relative_eq!(out.density(j), psi.density(j), max_relative = 1e-12);
        }
    }

    #[test]
    fn t_bar_only_shifts_a_global_phase() {
        let psi = test_state(1.2);
        let frame_a = FrameTrajectory::constant_acceleration(4.0);
        let frame_b = frame_a.clone().with_t_bar(0.35);
        let out_a = to_accelerated_frame(&psi, &frame_a, 1.0).unwrap();
        let out_b = to_accelerated_frame(&psi, &frame_b, 1.0).unwrap();
        for j in 0..psi.grid.len() {
            assert!((out_a.density(j) - out_b.density(j)).abs() < 1e-14);
        }
        // The phase offset between the two choices is one constant.
        let mut reference = None;
        for (a, b) in out_a.values.iter().zip(out_b.values.iter()) {
            if a.norm() > 1e-8 {
                let ratio = b / a;
                let r = *reference.get_or_insert(ratio);
                assert!((ratio - r).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn free_evolution_transforms_into_falling_evolution() {
        // Closed-form check of the equivalence: evolve freely, transform
        // with ξ = ½gt², compare against the closed-form falling state on
        // the shifted grid, including phases up to one constant.
        let g = 3.0;
        let mu = 1.4;
        let dt = 1.1;
        let packet = GaussianPacket::new(0.2, 0.9, 1.3).unwrap();
        let grid = Grid::new(-24.0, 24.0, 2048).unwrap();

        let free = evolve_packet(&packet, dt, &GravityParams::new(0.0, mu).unwrap()).unwrap();
        let falling = evolve_packet(&packet, dt, &GravityParams::new(g, mu).unwrap()).unwrap();

        let sampled_free = SampledWavefunction::from_state(grid, &free);
        let frame = FrameTrajectory::constant_acceleration(g);
        let tilde = to_accelerated_frame(&sampled_free, &frame, mu).unwrap();

        let mut worst = 0.0f64;
        let mut phase_offset = None;
        for (j, x_tilde) in tilde.grid.points().enumerate() {
            let expected = falling.evaluate(x_tilde);
            worst = worst.max((tilde.density(j) - expected.norm_sqr()).abs());
            if expected.norm() > 1e-6 {
                let ratio = tilde.values[j] / expected;
                let r = *phase_offset.get_or_insert(ratio);
                assert!((ratio - r).norm() < 1e-8);
            }
        }
        assert!(worst < 1e-10, "density sup deviation {worst}");
    }

    #[test]
    fn trajectory_derivatives_are_consistent() {
        let frames = [
            FrameTrajectory::constant_acceleration(9.8),
            FrameTrajectory::polynomial(vec![1.0, -2.0, 0.5, 0.25, -0.03]),
        ];
        for frame in &frames {
            assert!(frame.max_derivative_deviation(-2.0, 3.0) < 1e-6);
            assert_eq!(frame.kinetic_phase_integral(1.3, 1.3), 0.0);
        }
        // Constant acceleration against the polynomial representation of
        // the same trajectory.
        let a = FrameTrajectory::constant_acceleration(4.0);
        let b = FrameTrajectory::polynomial(vec![0.0, 0.0, 2.0]);
        assert_relative_eq!(
            a.kinetic_phase_integral(0.3, 1.7),
            b.kinetic_phase_integral(0.3, 1.7),
            max_relative = 1e-13
        );
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let grid = Grid::new(-10.0, 10.0, 512).unwrap();
        let values = vec![Complex64::new(1.0, 0.0); 512];
        let psi = SampledWavefunction::new(grid, values, 0.0).unwrap();
        let frame = FrameTrajectory::constant_acceleration(1.0);
        assert!(matches!(
            to_accelerated_frame(&psi, &frame, 1.0),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 1.0, 500).is_err());
        assert!(Grid::new(1.0, 1.0, 512).is_err());
        let g = Grid::new(-4.0, 4.0, 16).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.point(8), 0.0);
        assert_eq!(g.wavenumber(8).abs(), std::f64::consts::PI / 0.5);
        assert_eq!(g.wavenumber(15), -g.wavenumber(1));
    }

    proptest! {
        #[test]
        fn norm_preserved_for_random_polynomial_frames(
            c1 in -2.0f64..2.0,
            c2 in -2.0f64..2.0,
            c3 in -0.5f64..0.5,
            mu in 0.5f64..5.0,
        ) {
            let psi = test_state(0.8);
            let frame = FrameTrajectory::polynomial(vec![0.0, c1, c2, c3]);
            let out = to_accelerated_frame(&psi, &frame, mu).unwrap();
            prop_assert!((out.norm_sq() - psi.norm_sq()).abs() < 1e-12);
        }
    }
}

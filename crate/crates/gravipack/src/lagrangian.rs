//! Quadratic Lagrangians, classical trajectories in a uniform field, the
//! classical action, and the van Vleck prefactor function f(ξ,η).
//!
//! The Lagrangian handled here is
//!
//! ```text
//! L(x, ẋ, t) = ½ m ẋ² + b(t) x ẋ + d(t) ẋ − ½ c(t) x² − e(t) x − f(t)
//! ```
//!
//! with the linear potential `V = m g x` as the special case
//! b = c = d = f = 0, e = m g. The sign convention is that g > 0 pulls
//! toward −x.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::{
    integrate_adaptive, integrate_panels, poly_add, poly_derivative, poly_eval, poly_trim,
};

/// A time-dependent Lagrangian coefficient: either a dense polynomial in t
/// (exact derivatives, exact constant detection) or an opaque evaluator.
#[derive(Clone)]
pub enum Coefficient {
    /// Ascending coefficients `c[0] + c[1] t + ...`; degree 8 covers every
    /// built-in use.
    Polynomial(Vec<f64>),
    /// Black-box evaluator; derivatives fall back to central differences.
    Evaluator(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::Polynomial(Vec::new())
    }

    pub fn constant(value: f64) -> Self {
        Coefficient::Polynomial(vec![value])
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Coefficient::Polynomial(coeffs)
    }

    pub fn evaluator(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Coefficient::Evaluator(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Coefficient::Polynomial(c) => poly_eval(c, t),
            Coefficient::Evaluator(f) => f(t),
        }
    }

    /// Time derivative. Exact for polynomials; fourth-order central
    /// difference for evaluators.
    pub fn derivative_at(&self, t: f64) -> f64 {
        match self {
            Coefficient::Polynomial(c) => poly_eval(&poly_derivative(c), t),
            Coefficient::Evaluator(f) => {
                let h = 1e-5 * t.abs().max(1.0);
                (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h)
            }
        }
    }

    /// The exact constant value, if this coefficient is a polynomial of
    /// degree zero. Evaluators never qualify: constancy cannot be proven
    /// from samples.
    fn as_constant(&self) -> Option<f64> {
        match self {
            Coefficient::Polynomial(c) => {
                let trimmed = poly_trim(c.clone());
                match trimmed.len() {
                    0 => Some(0.0),
                    1 => Some(trimmed[0]),
                    _ => None,
                }
            }
            Coefficient::Evaluator(_) => None,
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Coefficient::Evaluator(_) => f.write_str("Evaluator(..)"),
        }
    }
}

/// Coefficient set (m, b, c, d, e, f) of the quadratic Lagrangian above.
#[derive(Debug, Clone)]
pub struct QuadraticLagrangian {
    pub mass: f64,
    pub b: Coefficient,
    pub c: Coefficient,
    pub d: Coefficient,
    pub e: Coefficient,
    pub f: Coefficient,
}

impl QuadraticLagrangian {
    pub fn new(
        mass: f64,
        b: Coefficient,
        c: Coefficient,
        d: Coefficient,
        e: Coefficient,
        f: Coefficient,
    ) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::NonPositive {
                name: "mass",
                value: mass,
            });
        }
        Ok(Self { mass, b, c, d, e, f })
    }

    /// Free particle: every coefficient zero.
    pub fn free(mass: f64) -> Result<Self> {
        Self::new(
            mass,
            Coefficient::zero(),
            Coefficient::zero(),
            Coefficient::zero(),
            Coefficient::zero(),
            Coefficient::zero(),
        )
    }

    /// Uniform field with potential `m g x`: e = m g, everything else zero.
    pub fn linear_potential(mass: f64, g: f64) -> Result<Self> {
        let mut l = Self::free(mass)?;
        l.e = Coefficient::constant(mass * g);
        Ok(l)
    }

    /// Harmonic oscillator: c = m ω².
    pub fn harmonic(mass: f64, omega: f64) -> Result<Self> {
        let mut l = Self::free(mass)?;
        l.c = Coefficient::constant(mass * omega * omega);
        Ok(l)
    }

    /// L(x, ẋ, t).
    pub fn evaluate(&self, x: f64, x_dot: f64, t: f64) -> f64 {
        0.5 * self.mass * x_dot * x_dot + self.b.eval(t) * x * x_dot + self.d.eval(t) * x_dot
            - 0.5 * self.c.eval(t) * x * x
            - self.e.eval(t) * x
            - self.f.eval(t)
    }

    /// The restoring coefficient w(t) = (ḃ(t) + c(t)) / m of the van Vleck
    /// equation f'' + w f = 0.
    fn restoring(&self, t: f64) -> f64 {
        (self.b.derivative_at(t) + self.c.eval(t)) / self.mass
    }

    /// Exact constant w, when provable (both b and c polynomial).
    fn constant_restoring(&self) -> Option<f64> {
        match (&self.b, &self.c) {
            (Coefficient::Polynomial(b), Coefficient::Polynomial(c)) => {
                let sum = poly_trim(poly_add(&poly_derivative(b), c));
                match sum.len() {
                    0 => Some(0.0),
                    1 => Some(sum[0] / self.mass),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// True when this is exactly the linear-potential family
    /// (b = c = d = f = 0, e constant).
    pub fn is_linear_potential(&self) -> bool {
        self.constant_restoring() == Some(0.0)
            && self.b.as_constant() == Some(0.0)
            && self.d.as_constant() == Some(0.0)
            && self.f.as_constant() == Some(0.0)
            && self.e.as_constant().is_some()
    }
}

/// Uniform-field parameters: field strength g and the mass ratio μ = m/ħ
/// through which mass enters every quantum expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityParams {
    pub g: f64,
    pub mu: f64,
}

impl GravityParams {
    pub fn new(g: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::NonPositive {
                name: "mu",
                value: mu,
            });
        }
        Ok(Self { g, mu })
    }

    /// SI parameters for a particle of the given mass in MeV/c².
    pub fn si_from_mev(g: f64, mass_mev: f64) -> Result<Self> {
        Self::new(
            g,
            mass_mev * crate::constants::MEV_C2_TO_KG / crate::constants::HBAR,
        )
    }
}

/// The classical path x̄(t) = x' + v₀(t − t') − ½ g (t − t')² between two
/// fixed endpoints in a uniform field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPath {
    pub x_start: f64,
    pub x_end: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub v0: f64,
    pub gravity: f64,
}

impl ClassicalPath {
    /// Position at time t.
    pub fn evaluate(&self, t: f64) -> f64 {
        let dt = t - self.t_start;
        self.x_start + self.v0 * dt - 0.5 * self.gravity * dt * dt
    }

    /// Velocity at time t.
    pub fn velocity(&self, t: f64) -> f64 {
        self.v0 - self.gravity * (t - self.t_start)
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Classical trajectory through (x', t') and (x'', t'') in a uniform field,
/// with initial velocity v₀ = (x'' − x')/(t'' − t') + (g/2)(t'' − t').
pub fn classical_trajectory(
    x_start: f64,
    x_end: f64,
    t_start: f64,
    t_end: f64,
    g: f64,
) -> Result<ClassicalPath> {
    if !(t_end > t_start) {
        return Err(Error::DegenerateInterval { t_start, t_end });
    }
    let dt = t_end - t_start;
    let v0 = (x_end - x_start) / dt + 0.5 * g * dt;
    Ok(ClassicalPath {
        x_start,
        x_end,
        t_start,
        t_end,
        v0,
        gravity: g,
    })
}

/// Closed-form action of the classical path in a uniform field:
///
/// ```text
/// S = (m/2)(t''−t') [ ((x''−x')/(t''−t'))² − g(x''+x') − (1/12) g² (t''−t')² ]
/// ```
pub fn classical_action(path: &ClassicalPath, mass: f64, g: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::NonPositive {
            name: "mass",
            value: mass,
        });
    }
    if (path.gravity - g).abs() > 1e-12 * g.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "path was built for g = {} but the action was requested for g = {}",
            path.gravity, g
        )));
    }
    let dt = path.duration();
    let slope = (path.x_end - path.x_start) / dt;
    Ok(0.5
        * mass
        * dt
        * (slope * slope - g * (path.x_end + path.x_start) - g * g * dt * dt / 12.0))
}

/// Action of an arbitrary quadratic Lagrangian along a given path, by
/// Gauss–Legendre quadrature. Exact (to round-off) for polynomial
/// coefficients; panel-refined otherwise.
pub fn action_along_path(lagrangian: &QuadraticLagrangian, path: &ClassicalPath) -> f64 {
    let integrand =
        |t: f64| lagrangian.evaluate(path.evaluate(t), path.velocity(t), t);
    let polynomial_coeffs = matches!(
        (&lagrangian.b, &lagrangian.c, &lagrangian.d, &lagrangian.e, &lagrangian.f),
        (
            Coefficient::Polynomial(_),
            Coefficient::Polynomial(_),
            Coefficient::Polynomial(_),
            Coefficient::Polynomial(_),
            Coefficient::Polynomial(_)
        )
    );
    if polynomial_coeffs {
        // Integrand is a polynomial in t; 8 panels of the 20-point rule are
        // exact far beyond degree 8 coefficients.
        integrate_panels(integrand, path.t_start, path.t_end, 8)
    } else {
        integrate_adaptive(integrand, path.t_start, path.t_end, 1e-13)
    }
}

/// Solution of f''(ξ) + w(ξ) f = 0 with f(η) = 0, f'(η) = 1, where
/// w = (ḃ + c)/m. Takes the closed sin/sinh/linear form when w is provably
/// constant, otherwise a fixed-step RK4 integration with step halving until
/// two refinements agree to 1e-10 relative.
///
/// The raw value is returned even at a caustic (f = 0 away from ξ = η);
/// caustic rejection is the propagator's job.
pub fn solve_van_vleck_f(lagrangian: &QuadraticLagrangian, eta: f64, xi: f64) -> f64 {
    van_vleck_with_crossing(lagrangian, eta, xi).0
}

/// As [`solve_van_vleck_f`], also reporting whether f vanished strictly
/// between η and ξ.
pub(crate) fn van_vleck_with_crossing(
    lagrangian: &QuadraticLagrangian,
    eta: f64,
    xi: f64,
) -> (f64, bool) {
    if xi == eta {
        return (0.0, false);
    }
    let span = xi - eta;
    if let Some(w0) = lagrangian.constant_restoring() {
        if w0 == 0.0 {
            return (span, false);
        }
        if w0 > 0.0 {
            let omega = w0.sqrt();
            let crossed = omega * span.abs() > std::f64::consts::PI;
            return ((omega * span).sin() / omega, crossed);
        }
        let kappa = (-w0).sqrt();
        return ((kappa * span).sinh() / kappa, false);
    }
    van_vleck_rk4(lagrangian, eta, xi)
}

fn van_vleck_rk4(lagrangian: &QuadraticLagrangian, eta: f64, xi: f64) -> (f64, bool) {
    let mut steps = 32usize;
    let mut previous = rk4_run(lagrangian, eta, xi, steps);
    loop {
        steps *= 2;
        let current = rk4_run(lagrangian, eta, xi, steps);
        let close = (current.0 - previous.0).abs() <= 1e-10 * current.0.abs().max(1e-300);
        if close || steps >= (1 << 22) {
            return current;
        }
        previous = current;
    }
}

fn rk4_run(lagrangian: &QuadraticLagrangian, eta: f64, xi: f64, steps: usize) -> (f64, bool) {
    let h = (xi - eta) / steps as f64;
    let mut f = 0.0f64;
    let mut fp = 1.0f64;
    let mut crossed = false;
    let mut t = eta;
    for step in 0..steps {
        let (k1f, k1p) = (fp, -lagrangian.restoring(t) * f);
        let (k2f, k2p) = (
            fp + 0.5 * h * k1p,
            -lagrangian.restoring(t + 0.5 * h) * (f + 0.5 * h * k1f),
        );
        let (k3f, k3p) = (
            fp + 0.5 * h * k2p,
            -lagrangian.restoring(t + 0.5 * h) * (f + 0.5 * h * k2f),
        );
        let (k4f, k4p) = (
            fp + h * k3p,
            -lagrangian.restoring(t + h) * (f + h * k3f),
        );
        let next_f = f + h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        // Sign changes after the first step mark a zero strictly inside.
        if step > 0 && (next_f == 0.0 || next_f.signum() != f.signum()) {
            crossed = true;
        }
        fp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        f = next_f;
        t = eta + (step + 1) as f64 * h;
    }
    (f, crossed)
}

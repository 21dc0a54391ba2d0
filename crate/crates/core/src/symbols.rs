//! Riesz-Feller space operators and their Fourier symbols.
//!
//! The operator of order γ and skewness θ acts in Fourier space as
//! multiplication by −ψ(k), with ψ(k) = |k|^γ exp(i·sign(k)·θπ/2).

use crate::error::{Error, Result};
use crate::quad;
use crate::special::gamma;
use num_complex::Complex64;
use std::f64::consts::PI;

/// One term μ·D^γ_θ of the space operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceOperatorTerm {
    pub mu: f64,
    pub gamma_order: f64,
    pub theta: f64,
}

impl SpaceOperatorTerm {
    pub fn new(mu: f64, gamma_order: f64, theta: f64) -> Result<Self> {
        let t = SpaceOperatorTerm {
            mu,
            gamma_order,
            theta,
        };
        validate(&t)?;
        Ok(t)
    }
}

/// Checks μ > 0, 0 < γ ≤ 2 and |θ| ≤ min(γ, 2 − γ).
pub fn validate(term: &SpaceOperatorTerm) -> Result<()> {
    if !(term.mu > 0.0 && term.mu.is_finite()) {
        return Err(Error::invalid(format!("mu must be > 0, got {}", term.mu)));
    }
    check_order(term.gamma_order, term.theta)
}

fn check_order(g: f64, theta: f64) -> Result<()> {
    if !(g > 0.0 && g <= 2.0) {
        return Err(Error::invalid(format!(
            "gamma_order must lie in (0, 2], got {g}"
        )));
    }
    let bound = g.min(2.0 - g);
    if !(theta.abs() <= bound) {
        return Err(Error::invalid(format!(
            "|theta| = {} exceeds min(gamma, 2 - gamma) = {bound}",
            theta.abs()
        )));
    }
    Ok(())
}

/// Nonempty ordered sum of Riesz-Feller terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceOperator {
    terms: Vec<SpaceOperatorTerm>,
}

impl SpaceOperator {
    pub fn new(terms: Vec<SpaceOperatorTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("space operator needs at least one term"));
        }
        for t in &terms {
            validate(t)?;
        }
        Ok(SpaceOperator { terms })
    }

    pub fn single(mu: f64, gamma_order: f64, theta: f64) -> Result<Self> {
        Self::new(vec![SpaceOperatorTerm::new(mu, gamma_order, theta)?])
    }

    pub fn terms(&self) -> &[SpaceOperatorTerm] {
        &self.terms
    }

    /// True when every term is symmetric (θ = 0).
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|t| t.theta == 0.0)
    }
}

/// ψ(k) = |k|^γ exp(i·sign(k)·θπ/2); exactly 0 at k = 0 and exactly real for θ = 0.
pub fn psi(gamma_order: f64, theta: f64, k: f64) -> Result<Complex64> {
    check_order(gamma_order, theta)?;
    Ok(psi_unchecked(gamma_order, theta, k))
}

pub(crate) fn psi_unchecked(g: f64, theta: f64, k: f64) -> Complex64 {
    if k == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let m = k.abs().powf(g);
    if theta == 0.0 {
        return Complex64::new(m, 0.0);
    }
    Complex64::from_polar(m, k.signum() * theta * PI / 2.0)
}

/// b(k) = Σ μ_j ψ_j(k).
pub fn effective_b(op: &SpaceOperator, k: f64) -> Complex64 {
    op.terms
        .iter()
        .map(|t| t.mu * psi_unchecked(t.gamma_order, t.theta, k))
        .sum()
}

/// Real samples on the uniform grid x_i = x_start + i·h, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSamples {
    pub x_start: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl UniformSamples {
    pub fn new(x_start: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || values.len() < 6 {
            return Err(Error::invalid("samples need h > 0 and at least 6 points"));
        }
        Ok(UniformSamples { x_start, h, values })
    }

    /// Samples `f` at `n` points spanning [a, b].
    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(b > a) || n < 6 {
            return Err(Error::invalid("sampling needs b > a and n ≥ 6"));
        }
        let h = (b - a) / (n - 1) as f64;
        Self::new(a, h, (0..n).map(|i| f(a + i as f64 * h)).collect())
    }

    fn x_end(&self) -> f64 {
        self.x_start + (self.values.len() - 1) as f64 * self.h
    }

    fn sample(&self, i: isize) -> f64 {
        if i < 0 {
            0.0
        } else {
            self.values.get(i as usize).copied().unwrap_or(0.0)
        }
    }

    /// Six-point Lagrange interpolation; zero beyond the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.x_start) / self.h;
        let last = (self.values.len() - 1) as f64;
        if !(s >= 0.0 && s <= last) {
            return 0.0;
        }
        let i = (s.floor() as isize).clamp(0, self.values.len() as isize - 2);
        let u = s - i as f64;
        let mut acc = 0.0;
        for j in -2..=3isize {
            let mut w = 1.0;
            for m in -2..=3isize {
                if m != j {
                    w *= (u - m as f64) / (j - m) as f64;
                }
            }
            acc += w * self.sample(i + j);
        }
        acc
    }

    /// f, f′, f″, f‴, f⁗ at x by fourth-order central differences of the interpolant.
    fn derivatives(&self, x: f64) -> [f64; 5] {
        let h = self.h;
        let f = |j: i32| self.eval(x + j as f64 * h);
        let (m3, m2, m1, z, p1, p2, p3) = (f(-3), f(-2), f(-1), f(0), f(1), f(2), f(3));
        [
            z,
            (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h),
            (-p2 + 16.0 * p1 - 30.0 * z + 16.0 * m1 - m2) / (12.0 * h * h),
            (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * h.powi(3)),
            (-p3 + 12.0 * p2 - 39.0 * p1 + 56.0 * z - 39.0 * m1 + 12.0 * m2 - m3)
                / (6.0 * h.powi(4)),
        ]
    }
}

/// Applies D^γ_θ to sampled `f` at `x0` through its real-space representation
///
/// Γ(1+γ)/π · ∫₀^∞ [sin((γ+θ)π/2)·Δ₊(ξ) + sin((γ−θ)π/2)·Δ₋(ξ)] ξ^{−1−γ} dξ,
///
/// Δ±(ξ) = f(x0 ± ξ) − f(x0) ∓ c·ξ·f′(x0), with c = 1 for γ ≥ 1 and 0 otherwise.
/// [0, δ] is integrated from a Taylor expansion, the rest by adaptive quadrature,
/// and the region beyond the samples analytically.
pub fn riesz_feller_apply(
    f: &UniformSamples,
    gamma_order: f64,
    theta: f64,
    x0: f64,
) -> Result<f64> {
    check_order(gamma_order, theta)?;
    let g = gamma_order;
    if g >= 2.0 {
        return Err(Error::invalid(
            "riesz_feller_apply requires gamma_order < 2",
        ));
    }
    if g == 1.0 && theta != 0.0 {
        return Err(Error::invalid(
            "riesz_feller_apply has no skewed representation at gamma_order = 1",
        ));
    }
    if f.values.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let sa = ((g + theta) * PI / 2.0).sin();
    let sb = ((g - theta) * PI / 2.0).sin();
    let c = if g >= 1.0 { 1.0 } else { 0.0 };
    let [f0, f1, f2, f3, f4] = f.derivatives(x0);

    let delta = (4.0 * f.h).max(1e-3);
    let (sp, sm) = (sa + sb, sa - sb);
    let pw = |m: f64| delta.powf(m - g) / (m - g);
    let mut near = sp * f2 / 2.0 * pw(2.0) + sm * f3 / 6.0 * pw(3.0) + sp * f4 / 24.0 * pw(4.0);
    if c == 0.0 {
        near += sm * f1 * pw(1.0);
    }

    let reach = (x0 - f.x_start).abs().max((f.x_end() - x0).abs()) + f.h;
    let mid = if reach > delta {
        let integrand = |xi: f64| -> Result<Complex64> {
            let dp = f.eval(x0 + xi) - f0 - c * xi * f1;
            let dm = f.eval(x0 - xi) - f0 + c * xi * f1;
            Ok(Complex64::new((sa * dp + sb * dm) * xi.powf(-1.0 - g), 0.0))
        };
        // break at grid-scale pieces so the piecewise interpolant is resolved
        let pieces = ((reach - delta) / (8.0 * f.h)).ceil().max(1.0) as usize;
        let w = (reach - delta) / pieces as f64;
        let mut total = 0.0;
        for i in 0..pieces {
            let a = delta + i as f64 * w;
            let r = quad::integrate(integrand, a, a + w, 1e-12, 1e-10, 200)
                .map_err(|e| Error::QuadratureFailure(format!("riesz_feller_apply: {e}")))?;
            total += r.value.re;
        }
        total
    } else {
        0.0
    };

    // beyond the samples f(x0 ± ξ) = 0
    let l = reach.max(delta);
    let mut far = -f0 * sp * l.powf(-g) / g;
    // at γ = 1 only θ = 0 is accepted, so sm = 0 and the compensators cancel
    if c == 1.0 && sm != 0.0 {
        far -= sm * f1 * l.powf(1.0 - g) / (g - 1.0);
    }

    Ok(gamma(1.0 + g) / PI * (near + mid + far))
}

//! Fox H-functions by Mellin-Barnes integration along a vertical line.
//!
//! H(z) = (1/2πi) ∫ Θ(ξ) z^{−ξ} dξ with
//! Θ(ξ) = Π_{j≤m} Γ(b_j + B_j ξ) Π_{j≤n} Γ(1 − a_j − A_j ξ)
//!      / Π_{j>m} Γ(1 − b_j − B_j ξ) Π_{j>n} Γ(a_j + A_j ξ).
//!
//! Only families whose Θ decays exponentially along the line are accepted,
//! which covers the fundamental-solution kernels built here.

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::special::ln_gamma_complex;
use crate::transforms::QuadratureConfig;
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_HEIGHT: f64 = 5000.0;
const DECAY_FLOOR: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq)]
pub struct HParams {
    pub m: usize,
    pub n: usize,
    /// (a_j, A_j), length p.
    pub upper: Vec<(f64, f64)>,
    /// (b_j, B_j), length q.
    pub lower: Vec<(f64, f64)>,
}

impl HParams {
    pub fn new(m: usize, n: usize, upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        let h = HParams { m, n, upper, lower };
        h.validate()?;
        Ok(h)
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n > self.p() || self.m < 1 || self.m > self.q() {
            return Err(Error::invalid(format!(
                "need 0 ≤ n ≤ p and 1 ≤ m ≤ q, got m={}, n={}, p={}, q={}",
                self.m,
                self.n,
                self.p(),
                self.q()
            )));
        }
        for &(c, w) in self.upper.iter().chain(&self.lower) {
            if !c.is_finite() || !(w > 0.0 && w.is_finite()) {
                return Err(Error::invalid(format!("bad H-function pair ({c}, {w})")));
            }
        }
        Ok(())
    }

    /// Exponential decay rate a* of |Θ(c + iy)| ~ e^{−π a* |y| / 2}.
    pub fn decay_rate(&self) -> f64 {
        let (m, n) = (self.m, self.n);
        let up: f64 = self.upper[..n].iter().map(|x| x.1).sum::<f64>()
            - self.upper[n..].iter().map(|x| x.1).sum::<f64>();
        let lo: f64 = self.lower[..m].iter().map(|x| x.1).sum::<f64>()
            - self.lower[m..].iter().map(|x| x.1).sum::<f64>();
        up + lo
    }

    /// Open interval of abscissas separating the two pole families.
    pub fn separating_interval(&self) -> (f64, f64) {
        let left = self.lower[..self.m]
            .iter()
            .map(|&(b, bb)| -b / bb)
            .fold(f64::NEG_INFINITY, f64::max);
        let right = self.upper[..self.n]
            .iter()
            .map(|&(a, aa)| (1.0 - a) / aa)
            .fold(f64::INFINITY, f64::min);
        (left, right)
    }

    fn ln_theta(&self, xi: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &(b, bb)) in self.lower.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_complex(b + bb * xi);
            } else {
                acc -= ln_gamma_complex(1.0 - b - bb * xi);
            }
        }
        for (j, &(a, aa)) in self.upper.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_complex(1.0 - a - aa * xi);
            } else {
                acc -= ln_gamma_complex(a + aa * xi);
            }
        }
        acc
    }
}

/// Value with contour diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HEvaluation {
    pub value: f64,
    /// Imaginary part of the full-line integral; zero up to rounding.
    pub imag_residue: f64,
    /// |fine − coarse| between panel widths w and 2w, floored at rounding level.
    pub residual: f64,
    pub abscissa: f64,
    pub height: f64,
    pub nodes: usize,
}

fn choose_abscissa(p: &HParams) -> Result<f64> {
    let (lo, hi) = p.separating_interval();
    if !(lo < hi) {
        return Err(Error::ContourFailure(format!(
            "pole families overlap: left poles reach {lo}, right poles start at {hi}"
        )));
    }
    let c = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 0.5,
        (false, true) => hi - 0.5,
        (false, false) => 0.0,
    };
    if point_is_regular(p, c) {
        return Ok(c);
    }
    // The midpoint may hit a pole of a denominator-free factor; scan.
    let (a, b) = (
        if lo.is_finite() { lo } else { c - 1.0 },
        if hi.is_finite() { hi } else { c + 1.0 },
    );
    (1..=16)
        .map(|i| a + (b - a) * i as f64 / 17.0)
        .find(|&c| point_is_regular(p, c))
        .ok_or_else(|| {
            Error::ContourFailure("no regular abscissa in the separating interval".into())
        })
}

fn point_is_regular(p: &HParams, c: f64) -> bool {
    let v = p.ln_theta(Complex64::new(c, 0.0));
    v.re.is_finite() && v.im.is_finite()
}

/// H^{m,n}_{p,q}(z) for z > 0.
pub fn h_eval(p: &HParams, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    h_eval_detailed(p, z, cfg).map(|r| r.value)
}

pub fn h_eval_detailed(p: &HParams, z: f64, cfg: &QuadratureConfig) -> Result<HEvaluation> {
    p.validate()?;
    cfg.validate()?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::invalid(format!(
            "H-function argument must be > 0, got {z}"
        )));
    }
    let rate = p.decay_rate();
    if !(rate > 1e-3) {
        return Err(Error::ContourFailure(format!(
            "integrand does not decay along the contour (a* = {rate})"
        )));
    }
    let c = choose_abscissa(p)?;
    let ln_z = z.ln();
    let f = |y: f64| -> Complex64 {
        let xi = Complex64::new(c, y);
        (p.ln_theta(xi) - xi * ln_z).exp()
    };

    // Height: first window beyond which the integrand has dropped for good.
    let peak = f(0.0).norm().max(f(0.5).norm()).max(f(-0.5).norm());
    if !peak.is_finite() {
        return Err(Error::ContourFailure(
            "integrand not finite on the contour".into(),
        ));
    }
    let width = 16.0 / cfg.nodes_per_unit as f64;
    let mut height = 2.0 * width;
    let mut running_max = peak;
    loop {
        let window = (0..8)
            .map(|i| height - 2.0 * width * i as f64 / 8.0)
            .flat_map(|y| [f(y).norm(), f(-y).norm()])
            .fold(0.0, f64::max);
        if !window.is_finite() {
            return Err(Error::ContourFailure(
                "integrand overflow on the contour".into(),
            ));
        }
        running_max = running_max.max(window);
        if window <= DECAY_FLOOR * running_max {
            break;
        }
        height += 2.0 * width;
        if height > MAX_HEIGHT {
            return Err(Error::ContourFailure(format!(
                "integrand still at {window:e} at height {MAX_HEIGHT}"
            )));
        }
    }

    let (nodes, weights) = gauss_legendre(16);
    let panels = (height / width).round() as usize;
    let panel = |lo: f64, hi: f64| -> (Complex64, f64) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut s = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        for (u, w) in nodes.iter().zip(&weights) {
            let v = f(mid + half * u);
            s += w * v;
            a += w * v.norm();
        }
        (s * half, a * half)
    };
    let mut fine = Complex64::new(0.0, 0.0);
    let mut coarse = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for side in [1.0, -1.0] {
        for i in 0..panels {
            let lo = side * width * i as f64;
            let hi = side * width * (i + 1) as f64;
            let (v, a) = panel(lo, hi);
            fine += side * v;
            mag += a;
            if i % 2 == 0 {
                let (v, _) = panel(lo, side * width * (i + 2) as f64);
                coarse += side * v;
            }
        }
    }
    // dξ = i dy, so (1/2πi)∫ … dξ = (1/2π)∫ … dy
    let scale = 1.0 / (2.0 * PI);
    let value = fine * scale;
    let residual = ((fine - coarse).norm() * scale).max(1e-15 * mag * scale);
    Ok(HEvaluation {
        value: value.re,
        imag_residue: value.im,
        residual,
        abscissa: c,
        height,
        nodes: 48 * panels,
    })
}

fn check_fundamental(alpha: f64, gamma_order: f64, theta: f64, t: f64, mu: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )));
    }
    crate::symbols::SpaceOperatorTerm::new(mu, gamma_order, theta)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t must be > 0, got {t}")));
    }
    Ok(())
}

/// Skewness exponent ρ for the half-line sign(x).
pub fn rho(gamma_order: f64, theta: f64, x: f64) -> f64 {
    let th = if x > 0.0 { theta } else { -theta };
    (gamma_order - th) / (2.0 * gamma_order)
}

/// H^{2,1}_{3,3} parameters of the fundamental solution.
pub fn fundamental_params(alpha: f64, gamma_order: f64, rho: f64) -> Result<HParams> {
    let g = gamma_order;
    HParams::new(
        2,
        1,
        vec![(1.0, 1.0 / g), (alpha, alpha / g), (1.0, rho)],
        vec![(1.0, 1.0 / g), (1.0, 1.0), (1.0, rho)],
    )
}

/// H^{1,1}_{2,2} parameters of the α = 1 fundamental solution.
pub fn classical_params(gamma_order: f64, rho: f64) -> Result<HParams> {
    HParams::new(
        1,
        1,
        vec![(1.0, 1.0 / gamma_order), (1.0, rho)],
        vec![(1.0, 1.0), (1.0, rho)],
    )
}

/// Fundamental solution t^{α−1}/(γ|x|)·H^{2,1}_{3,3}[|x|/(μt^α)^{1/γ}] of the
/// single-term problem, equal to t^{α−1} F⁻¹[E_{α,α}(−μψ(k)t^α)](x).
pub fn green_h_form(
    x: f64,
    t: f64,
    alpha: f64,
    gamma_order: f64,
    theta: f64,
    mu: f64,
) -> Result<f64> {
    green_h_form_with(
        x,
        t,
        alpha,
        gamma_order,
        theta,
        mu,
        &QuadratureConfig::default(),
    )
}

pub fn green_h_form_with(
    x: f64,
    t: f64,
    alpha: f64,
    gamma_order: f64,
    theta: f64,
    mu: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_fundamental(alpha, gamma_order, theta, t, mu)?;
    if x == 0.0 || !x.is_finite() {
        return Err(Error::invalid(format!(
            "x must be finite and nonzero, got {x}"
        )));
    }
    let r = rho(gamma_order, theta, x);
    if r == 0.0 {
        // one-sided law: 1/(Γ(−ρξ)Γ(1+ρξ)) vanishes identically
        return Ok(0.0);
    }
    let z = x.abs() / (mu * t.powf(alpha)).powf(1.0 / gamma_order);
    let h = if alpha == 1.0 {
        h_eval(&classical_params(gamma_order, r)?, z, cfg)?
    } else {
        h_eval(&fundamental_params(alpha, gamma_order, r)?, z, cfg)?
    };
    Ok(t.powf(alpha - 1.0) / (gamma_order * x.abs()) * h)
}

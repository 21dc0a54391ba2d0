//! Fourier and Laplace inversions.
//!
//! Fourier convention: f(x) = (1/2π) ∫ f*(k) e^{−ikx} dk.
//!
//! [`fourier_inverse`] splits each half-line into adaptive panels. On every
//! panel the spectrum is sampled at 16 Gauss-Legendre nodes, expanded in
//! Legendre polynomials and integrated against e^{−ikx} exactly through
//! ∫₋₁¹ Pₙ(u) e^{−iωu} du = 2(−i)ⁿ jₙ(ω). Panel sizes therefore follow the
//! smoothness of the spectrum, not the oscillation, and grow geometrically
//! with |k| where the spectrum varies on the scale of k itself.

use crate::error::{Error, Result};
use crate::mlf::{prabhakar, EvalResult, MLParams, Route};
use crate::quad::gauss_legendre;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

const ORDER: usize = 16;
const MAX_NODES: usize = 1 << 20;
/// Far panels span at most this fraction of their left end.
const GROWTH: f64 = 0.25;
const MIN_WIDTH: f64 = 1e-14;

/// Quadrature settings shared by the Fourier and Laplace inversions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Initial truncation |k| ≤ k_max, doubled until the tail is below `tail_tol`.
    pub k_max: f64,
    /// Initial panel density: panels of width 16 / nodes_per_unit near the origin.
    pub nodes_per_unit: usize,
    pub tail_tol: f64,
    pub talbot_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            k_max: 8.0,
            nodes_per_unit: 16,
            tail_tol: 1e-11,
            talbot_nodes: 32,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_max > 0.0 && self.k_max.is_finite()) {
            return Err(Error::invalid(format!(
                "k_max must be > 0, got {}",
                self.k_max
            )));
        }
        if self.nodes_per_unit < 8 {
            return Err(Error::invalid(format!(
                "nodes_per_unit must be ≥ 8, got {}",
                self.nodes_per_unit
            )));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::invalid(format!(
                "tail_tol must be > 0, got {}",
                self.tail_tol
            )));
        }
        if self.talbot_nodes < 16 {
            return Err(Error::invalid(format!(
                "talbot_nodes must be ≥ 16, got {}",
                self.talbot_nodes
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Fourier inversion

struct Rule {
    nodes: Vec<f64>,
    /// (2n+1)·w_j·P_n(u_j), indexed [n][j]
    legendre: Vec<[f64; ORDER]>,
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let (nodes, weights) = gauss_legendre(ORDER);
        let mut legendre = vec![[0.0; ORDER]; ORDER];
        for (j, (&u, &w)) in nodes.iter().zip(&weights).enumerate() {
            let (mut p0, mut p1) = (1.0, u);
            for (n, row) in legendre.iter_mut().enumerate() {
                let pn = if n == 0 { p0 } else { p1 };
                row[j] = (2 * n + 1) as f64 * w * pn;
                if n >= 1 {
                    let p2 = ((2 * n + 1) as f64 * u * p1 - n as f64 * p0) / (n + 1) as f64;
                    p0 = p1;
                    p1 = p2;
                }
            }
        }
        Rule { nodes, legendre }
    })
}

/// Spherical Bessel functions j₀…j₁₅ at ω ≥ 0.
fn spherical_bessel(w: f64) -> [f64; ORDER] {
    let mut j = [0.0; ORDER];
    if w < 1.0 {
        // jₙ(ω) = ωⁿ/(2n+1)!! Σ_m (−ω²/2)^m / (m! (2n+3)(2n+5)…(2n+2m+1))
        let mut lead = 1.0;
        for (n, out) in j.iter_mut().enumerate() {
            if n > 0 {
                lead *= w / (2 * n + 1) as f64;
            }
            let mut term = 1.0;
            let mut sum = 1.0;
            for m in 1..40 {
                term *= -0.5 * w * w / (m as f64 * (2 * n + 2 * m + 1) as f64);
                sum += term;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            *out = lead * sum;
        }
    } else if w >= ORDER as f64 {
        let (s, c) = w.sin_cos();
        j[0] = s / w;
        j[1] = s / (w * w) - c / w;
        for n in 1..ORDER - 1 {
            j[n + 1] = (2 * n + 1) as f64 / w * j[n] - j[n - 1];
        }
    } else {
        // Miller backward recurrence, normalized on the larger of j₀, j₁
        let start = ORDER + 30;
        let (mut up, mut cur) = (0.0, 1e-30);
        let mut vals = [0.0; ORDER];
        for n in (1..=start).rev() {
            let down = (2 * n + 1) as f64 / w * cur - up;
            if n - 1 < ORDER {
                vals[n - 1] = down;
            }
            up = cur;
            cur = down;
            if cur.abs() > 1e200 {
                up *= 1e-200;
                cur *= 1e-200;
                for v in vals.iter_mut() {
                    *v *= 1e-200;
                }
            }
        }
        let (s, c) = w.sin_cos();
        let j0 = s / w;
        let j1 = s / (w * w) - c / w;
        let scale = if j0.abs() >= j1.abs() {
            j0 / vals[0]
        } else {
            j1 / vals[1]
        };
        for (out, v) in j.iter_mut().zip(vals) {
            *out = v * scale;
        }
    }
    j
}

/// One accepted panel: center, half-width and the Legendre data Ŝₙ = (2n+1)Σ w_j Pₙ(u_j) S_j.
#[derive(Clone, Copy)]
struct Panel {
    center: f64,
    half: f64,
    coef: [Complex64; ORDER],
}

impl Panel {
    /// ∫ S(k) e^{−ikx} dk over the panel.
    fn integrate(&self, x: f64) -> Complex64 {
        let w = self.half * x;
        let jn = spherical_bessel(w.abs());
        // (−i)ⁿ jₙ(ω) with jₙ(−ω) = (−1)ⁿ jₙ(ω)
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, (&c, &b)) in self.coef.iter().zip(&jn).enumerate() {
            let b = if w < 0.0 && n % 2 == 1 { -b } else { b };
            let v = match n % 4 {
                0 => Complex64::new(b, 0.0),
                1 => Complex64::new(0.0, -b),
                2 => Complex64::new(-b, 0.0),
                _ => Complex64::new(0.0, b),
            };
            acc += c * v;
        }
        Complex64::from_polar(self.half, -self.center * x) * acc
    }
}

fn sample_panels<F>(spectrum: &F, spans: &[(f64, f64)]) -> Result<Vec<(Panel, f64, f64)>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let r = rule();
    spans
        .par_iter()
        .map(|&(a, b)| {
            let center = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let mut s = [Complex64::new(0.0, 0.0); ORDER];
            for (v, &u) in s.iter_mut().zip(&r.nodes) {
                *v = spectrum(center + half * u)?;
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::QuadratureFailure(format!(
                        "spectrum not finite at k = {}",
                        center + half * u
                    )));
                }
            }
            let mut coef = [Complex64::new(0.0, 0.0); ORDER];
            for (c, row) in coef.iter_mut().zip(&r.legendre) {
                *c = row.iter().zip(&s).map(|(&l, &v)| v * l).sum();
            }
            let tail = 0.5 * (coef[ORDER - 2].norm() + coef[ORDER - 1].norm());
            let peak = s.iter().map(|v| v.norm()).fold(0.0, f64::max);
            Ok((Panel { center, half, coef }, tail, peak))
        })
        .collect()
}

/// Result of [`fourier_inverse_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct FourierInversion {
    pub values: Vec<Complex64>,
    /// Final truncation: the k-integral runs over [−k_max, k_max].
    pub k_max: f64,
    pub nodes: usize,
    /// Largest |spectrum| sampled on the outermost panels.
    pub tail_estimate: f64,
}

/// (1/2π) ∫ spectrum(k) e^{−ikx} dk at every x in `x_grid`.
pub fn fourier_inverse<F>(
    spectrum: F,
    x_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    Ok(fourier_inverse_detailed(spectrum, x_grid, cfg)?.values)
}

pub fn fourier_inverse_detailed<F>(
    spectrum: F,
    x_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<FourierInversion>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    cfg.validate()?;
    if x_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("x_grid must be finite"));
    }
    let base = ORDER as f64 / cfg.nodes_per_unit as f64;

    // Scale for the panel acceptance test.
    let probe = sample_panels(&spectrum, &[(-base, 0.0), (0.0, base)])?;
    let scale = probe
        .iter()
        .map(|p| p.2)
        .fold(0.0, f64::max)
        .max(cfg.tail_tol);
    let accept = 1e-15 * scale;

    let mut accepted: Vec<Panel> = Vec::new();
    let mut nodes = 0usize;
    let mut k_done = 0.0;
    let mut k_max = cfg.k_max;
    let mut tail_estimate;
    loop {
        // spans covering ±[k_done, k_max]
        let mut spans = Vec::new();
        let mut a = k_done;
        while a < k_max {
            let w = base.max(GROWTH * a).min(k_max - a);
            spans.push((a, a + w));
            a += w;
        }
        let mirrored: Vec<(f64, f64)> = spans.iter().map(|&(a, b)| (-b, -a)).collect();
        spans.extend(mirrored);

        let mut outer_peak: f64 = 0.0;
        while !spans.is_empty() {
            nodes += spans.len() * ORDER;
            if nodes > MAX_NODES {
                return Err(Error::TailTooFat {
                    k_max,
                    magnitude: outer_peak,
                    tail_tol: cfg.tail_tol,
                });
            }
            let sampled = sample_panels(&spectrum, &spans)?;
            let mut next = Vec::new();
            for (&(a, b), (panel, tail, peak)) in spans.iter().zip(sampled) {
                if a.abs().max(b.abs()) >= k_max * (1.0 - 1e-12) {
                    outer_peak = outer_peak.max(peak);
                }
                if panel.half * tail <= accept || b - a <= MIN_WIDTH {
                    accepted.push(panel);
                } else {
                    let m = 0.5 * (a + b);
                    next.push((a, m));
                    next.push((m, b));
                }
            }
            spans = next;
        }
        tail_estimate = outer_peak;
        if outer_peak <= cfg.tail_tol {
            break;
        }
        k_done = k_max;
        k_max *= 2.0;
    }

    // Accepted panels in ascending k make the summation order fixed.
    accepted.sort_by(|p, q| p.center.total_cmp(&q.center));
    let values = x_grid
        .par_iter()
        .map(|&x| accepted.iter().map(|p| p.integrate(x)).sum::<Complex64>() / (2.0 * PI))
        .collect();
    Ok(FourierInversion {
        values,
        k_max,
        nodes,
        tail_estimate,
    })
}

// ---------------------------------------------------------------------------
// Closed-form Laplace inversions

/// L⁻¹[s^{σ−1}/(s^β + b)](t) = t^{β−σ} E_{β,β−σ+1}(−b t^β).
pub fn lt_kernel_one(
    sigma: f64,
    beta_order: f64,
    b: Complex64,
    t: f64,
    tol: f64,
) -> Result<Complex64> {
    if !(beta_order > 0.0) {
        return Err(Error::invalid(format!(
            "beta_order must be > 0, got {beta_order}"
        )));
    }
    if !(beta_order - sigma > -1.0) {
        return Err(Error::invalid(format!(
            "need beta_order - sigma > -1, got {}",
            beta_order - sigma
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t must be > 0, got {t}")));
    }
    let p = MLParams::two(beta_order, beta_order - sigma + 1.0)?;
    let e = prabhakar(&p, -b * t.powf(beta_order), tol)?;
    Ok(t.powf(beta_order - sigma) * e.value)
}

const DIVERGENCE_STREAK: usize = 10;
const DIVERGENCE_FROM: usize = 20;

/// L⁻¹[s^{ρ−1}/(s^α + a s^β + b)](t)
/// = t^{α−ρ} Σ_r (−a)^r t^{(α−β)r} E^{r+1}_{α, α+(α−β)r−ρ+1}(−b t^α).
///
/// Summation stops after the first term below tol·max(1, |sum|); `est_error`
/// is the magnitude of the next (neglected) term, `terms_used` the count of r.
#[allow(clippy::too_many_arguments)]
pub fn lt_kernel_two(
    rho: f64,
    alpha: f64,
    beta: f64,
    a: f64,
    b: Complex64,
    t: f64,
    tol: f64,
    r_max: usize,
) -> Result<EvalResult> {
    if !(alpha > beta) {
        return Err(Error::invalid(format!(
            "need alpha > beta, got {alpha} <= {beta}"
        )));
    }
    if !(beta > 0.0) {
        return Err(Error::invalid(format!("beta must be > 0, got {beta}")));
    }
    if !(alpha - rho > -1.0) {
        return Err(Error::invalid(format!(
            "need alpha - rho > -1, got {}",
            alpha - rho
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t must be > 0, got {t}")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol must be > 0"));
    }
    let z = -b * t.powf(alpha);
    let d = alpha - beta;
    let lead = t.powf(alpha - rho);
    let q = -a * t.powf(d);
    let inner_tol = tol;
    let term = |r: usize| -> Result<Complex64> {
        let p = MLParams::new(alpha, alpha + d * r as f64 - rho + 1.0, (r + 1) as f64)?;
        let e = prabhakar(&p, z, inner_tol)?;
        Ok(lead * q.powi(r as i32) * e.value)
    };

    let mut sum = term(0)?;
    if a == 0.0 {
        return Ok(EvalResult {
            value: sum,
            terms_used: 1,
            est_error: 0.0,
            route: Route::Series,
        });
    }
    let mut prev = sum.norm();
    let mut streak = 0;
    let mut r = 1;
    loop {
        if r > r_max {
            return Err(Error::no_conv(
                "two-term Laplace kernel",
                format!("term budget r_max = {r_max} exhausted"),
            ));
        }
        let tr = term(r)?;
        let m = tr.norm();
        sum += tr;
        if m <= tol * sum.norm().max(1.0) {
            let est = term(r + 1).map(|v| v.norm()).unwrap_or(m);
            return Ok(EvalResult {
                value: sum,
                terms_used: r + 1,
                est_error: est,
                route: Route::Series,
            });
        }
        if r > DIVERGENCE_FROM && m > prev {
            streak += 1;
            if streak >= DIVERGENCE_STREAK {
                return Err(Error::SeriesDiverged {
                    streak,
                    last_index: r,
                });
            }
        } else {
            streak = 0;
        }
        prev = m;
        r += 1;
    }
}

// ---------------------------------------------------------------------------
// Talbot oracle

/// Fixed Talbot inversion f(t) = (1/2πi) ∫ F(s) e^{st} ds along
/// s(θ) = r θ (cot θ + i), −π < θ < π, r = 2M/(5t), M = talbot_nodes.
///
/// Complex-valued F is allowed: both halves of the contour are summed.
pub fn talbot_inverse<F>(f: F, t: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    cfg.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t must be > 0, got {t}")));
    }
    let m = cfg.talbot_nodes;
    let mf = m as f64;
    let r = 2.0 * mf / (5.0 * t);
    let mut acc = (r * t).exp() * f(Complex64::new(r, 0.0));
    for k in 1..m {
        let th = k as f64 * PI / mf;
        let cot = th.cos() / th.sin();
        let sigma = th + (th * cot - 1.0) * cot;
        for sign in [1.0, -1.0] {
            let s = Complex64::new(r * th * cot, sign * r * th);
            let w = Complex64::new(1.0, sign * sigma);
            acc += (s * t).exp() * f(s) * w;
        }
    }
    let v = acc * (r / (2.0 * mf));
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::OracleFailure(format!(
            "Talbot sum overflowed at t = {t}"
        )));
    }
    Ok(v)
}

/// Radius of the largest disk about the origin inside the Talbot contour for (t, M).
pub fn talbot_safe_radius(t: f64, cfg: &QuadratureConfig) -> f64 {
    // |s(θ)| = rθ/sin θ ≥ r on the contour
    2.0 * cfg.talbot_nodes as f64 / (5.0 * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn bessel_matches_closed_forms() {
        for &w in &[
            0.01,
            0.5,
            0.999,
            1.0,
            3.0,
            std::f64::consts::PI,
            7.5,
            15.9,
            16.0,
            40.0,
            1e4,
        ] {
            let j = spherical_bessel(w);
            let (s, c) = (f64::sin(w), f64::cos(w));
            let j2 = (3.0 / (w * w) - 1.0) * s / w - 3.0 * c / (w * w);
            assert!((j[0] - s / w).abs() < 1e-15, "{w}");
            assert!(
                (j[2] - j2).abs() < 1e-12 * (1.0 + 1.0 / w),
                "{w}: {} vs {j2}",
                j[2]
            );
        }
    }

    #[test]
    fn bessel_regimes_join_smoothly() {
        for &(a, b) in &[(1.0 - 1e-13, 1.0 + 1e-13), (16.0 - 1e-13, 16.0 + 1e-13)] {
            let (x, y) = (spherical_bessel(a), spherical_bessel(b));
            for n in 0..ORDER {
                assert!((x[n] - y[n]).abs() <= 1e-13, "{a} n={n} {} {}", x[n], y[n]);
            }
        }
    }

    #[test]
    fn panel_integral_matches_dense_quadrature() {
        let f = |k: f64| Ok(Complex64::new((0.3 * k).cos(), k.sin() * 0.2));
        let spans = [(2.0, 5.0)];
        let (p, _, _) = sample_panels(&f, &spans).unwrap().pop().unwrap();
        for &x in &[0.0, 0.1, -2.0, 7.3, 200.0] {
            let got = p.integrate(x);
            let want = crate::quad::integrate(
                |k| Ok(f(k).unwrap() * Complex64::from_polar(1.0, -k * x)),
                2.0,
                5.0,
                1e-15,
                1e-14,
                4000,
            )
            .unwrap()
            .value;
            assert!((got - want).norm() < 1e-13, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn fourier_examples() {
        let xs = [0.0, 1.0];
        let g = fourier_inverse(|k| Ok(Complex64::new((-k * k).exp(), 0.0)), &xs, &cfg()).unwrap();
        assert!((g[0].re - 0.5 / PI.sqrt()).abs() < 1e-13);
        let c =
            fourier_inverse(|k| Ok(Complex64::new((-k.abs()).exp(), 0.0)), &xs, &cfg()).unwrap();
        assert!((c[1].re - 0.5 / PI).abs() < 1e-12);
        assert!((c[0].re - 1.0 / PI).abs() < 1e-12);
        let z = fourier_inverse(|_| Ok(Complex64::new(0.0, 0.0)), &xs, &cfg()).unwrap();
        assert!(z.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn fourier_shift_follows_convention() {
        // f*(k) = e^{ikc} e^{−k²/2} is the unit Gaussian centered at c
        let c = 1.5;
        let xs = [0.0, 1.5, 3.0];
        let v = fourier_inverse(
            |k| Ok(Complex64::from_polar((-k * k / 2.0).exp(), k * c)),
            &xs,
            &cfg(),
        )
        .unwrap();
        for (x, v) in xs.iter().zip(&v) {
            let e = (-(x - c) * (x - c) / 2.0).exp() / (2.0 * PI).sqrt();
            assert!((v - e).norm() < 1e-13, "{x}: {v} vs {e}");
        }
    }

    #[test]
    fn heavy_tail_is_followed_out() {
        // |k|^{-2.4}-type tail: (1+k²)^{-1.2}
        let r = fourier_inverse_detailed(
            |k| Ok(Complex64::new((1.0 + k * k).powf(-1.2), 0.0)),
            &[0.5],
            &cfg(),
        )
        .unwrap();
        assert!(r.k_max > 1e4, "{}", r.k_max);
        assert!(r.nodes < 20_000, "{}", r.nodes);
    }

    #[test]
    fn non_decaying_spectrum_is_rejected() {
        let e = fourier_inverse(|_| Ok(Complex64::new(1.0, 0.0)), &[0.0], &cfg()).unwrap_err();
        assert!(matches!(e, Error::TailTooFat { .. }), "{e:?}");
    }

    #[test]
    fn kernel_one_examples() {
        let c = Complex64::new;
        let v = lt_kernel_one(1.0, 1.0, c(0.7, 0.0), 2.0, 1e-14).unwrap();
        assert!((v.re - (-1.4f64).exp()).abs() < 1e-14);
        let v = lt_kernel_one(1.0, 1.0, c(0.0, 0.0), 5.0, 1e-14).unwrap();
        assert_eq!(v.re, 1.0);
        assert!(lt_kernel_one(2.5, 1.0, c(1.0, 0.0), 1.0, 1e-12).is_err());
        assert!(lt_kernel_one(1.0, 1.0, c(1.0, 0.0), 0.0, 1e-12).is_err());
    }

    #[test]
    fn kernel_two_reduces_at_a_zero() {
        let b = Complex64::new(1.3, 0.2);
        let one = lt_kernel_one(1.0, 1.7, b, 0.8, 1e-14).unwrap();
        let two = lt_kernel_two(1.0, 1.7, 1.1, 0.0, b, 0.8, 1e-14, 100).unwrap();
        assert_eq!(one, two.value);
        assert!(lt_kernel_two(1.0, 1.2, 1.2, 0.5, b, 1.0, 1e-12, 100)
            .unwrap_err()
            .is_invalid_params());
    }

    #[test]
    fn kernel_two_reports_divergence() {
        let e = lt_kernel_two(
            1.0,
            1.5,
            1.2,
            50.0,
            Complex64::new(0.0, 0.0),
            30.0,
            1e-12,
            400,
        )
        .unwrap_err();
        assert!(matches!(e, Error::SeriesDiverged { .. }), "{e:?}");
    }

    #[test]
    fn talbot_examples() {
        let v = talbot_inverse(|s| 1.0 / s, 3.0, &cfg()).unwrap();
        assert!((v.re - 1.0).abs() < 1e-10 && v.im.abs() < 1e-10);
        let v = talbot_inverse(|s| 1.0 / (s + 1.0), 1.0, &cfg()).unwrap();
        assert!((v.re - (-1f64).exp()).abs() < 1e-10);
        // complex-valued transform: 1/(s + i) ↔ e^{−it}
        let v = talbot_inverse(|s| 1.0 / (s + Complex64::i()), 2.0, &cfg()).unwrap();
        assert!((v - Complex64::from_polar(1.0, -2.0)).norm() < 1e-10);
    }

    #[test]
    fn talbot_cross_checks_kernel_one() {
        let v = talbot_inverse(|s| 1.0 / (s.powf(0.8) + 1.0), 1.0, &cfg()).unwrap();
        let k = lt_kernel_one(1.0, 0.8, Complex64::new(1.0, 0.0), 1.0, 1e-14).unwrap();
        assert!((v - k).norm() < 1e-8, "{v} vs {k}");
    }

    #[test]
    fn kernel_two_examples() {
        let c = cfg();
        let v = lt_kernel_two(
            1.0,
            1.0,
            0.5,
            1.0,
            Complex64::new(1.0, 0.0),
            1.0,
            1e-13,
            500,
        )
        .unwrap();
        let o = talbot_inverse(|s| 1.0 / (s + s.sqrt() + 1.0), 1.0, &c).unwrap();
        assert!(
            (v.value - o).norm() <= 1e-6 * (1.0 + o.norm()),
            "{} vs {o}",
            v.value
        );
        let v = lt_kernel_two(
            1.0,
            1.6,
            1.2,
            0.5,
            Complex64::new(0.0, 0.0),
            1.0,
            1e-13,
            500,
        )
        .unwrap();
        let o = talbot_inverse(|s| 1.0 / (s.powf(1.6) + 0.5 * s.powf(1.2)), 1.0, &c).unwrap();
        assert!(
            (v.value - o).norm() <= 1e-6 * (1.0 + o.norm()),
            "{} vs {o}",
            v.value
        );
    }
}

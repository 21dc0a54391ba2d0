//! Two-parameter Mittag-Leffler and three-parameter Prabhakar functions.
//!
//! E^γ_{α,β}(z) = Σ (γ)_n zⁿ / (n! Γ(αn + β)), with E_{α,β} = E^1_{α,β}.
//!
//! Three evaluation routes are tried in order:
//!
//! 1. the Taylor series, for |z| below `5(1 + α)`, accepted only when both
//!    the truncation bound and the accumulated rounding (cancellation) stay
//!    below the tolerance;
//! 2. the algebraic large-|z| expansion, when every exponential contribution
//!    from the singular points of the Laplace transform is negligible;
//! 3. inversion of the Laplace transform s^{−β}(1 − z s^{−α})^{−γ} along an
//!    optimally parameterized parabolic contour, adding residues at the poles
//!    that the chosen contour leaves on its right (integer γ only).
//!
//! `tol` is relative when |value| > 1 and absolute otherwise.

use crate::error::{Error, Result};
use crate::special::{ln_gamma_signed, rgamma};
use num_complex::Complex64;
use std::f64::consts::PI;

const SERIES_BUDGET: usize = 4000;
const MIN_TOL: f64 = 1e-15;
const CONTOUR_MAX_NODES: usize = 4000;

/// Index bundle (α, β, γ) of E^γ_{α,β}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_index: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64, gamma_index: f64) -> Result<Self> {
        let p = MLParams {
            alpha,
            beta,
            gamma_index,
        };
        p.validate()?;
        Ok(p)
    }

    /// Two-parameter Mittag-Leffler indices (γ = 1).
    pub fn two(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::invalid(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if !self.beta.is_finite() {
            return Err(Error::invalid("beta must be finite"));
        }
        if !(self.gamma_index > 0.0) || !self.gamma_index.is_finite() {
            return Err(Error::invalid(format!(
                "gamma_index must be > 0, got {}",
                self.gamma_index
            )));
        }
        Ok(())
    }

    fn integer_gamma(&self) -> bool {
        self.gamma_index == self.gamma_index.round()
    }
}

/// Which route produced an [`EvalResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Origin,
    Series,
    Asymptotic,
    Contour,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Series terms, or contour nodes (including residue circles).
    pub terms_used: usize,
    pub est_error: f64,
    pub route: Route,
}

fn scaled_tol(tol: f64, value: Complex64) -> f64 {
    tol * value.norm().max(1.0)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("tol must be > 0, got {tol}")))
    }
}

/// E_{α,β}(z).
pub fn mittag_leffler(p: &MLParams, z: Complex64, tol: f64) -> Result<EvalResult> {
    if p.gamma_index != 1.0 {
        return Err(Error::invalid("mittag_leffler requires gamma_index = 1"));
    }
    prabhakar(p, z, tol)
}

/// E^γ_{α,β}(z).
pub fn prabhakar(p: &MLParams, z: Complex64, tol: f64) -> Result<EvalResult> {
    p.validate()?;
    check_tol(tol)?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::invalid("argument must be finite"));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult {
            value: Complex64::new(rgamma(p.beta), 0.0),
            terms_used: 1,
            est_error: 0.0,
            route: Route::Origin,
        });
    }
    let tol = tol.max(MIN_TOL);
    let r = z.norm();

    if p.alpha == p.alpha.round() && p.beta > 0.0 && r.powf(1.0 / p.alpha) <= DD_RADIUS {
        if let Some(res) = series_dd(p, z) {
            if res.est_error <= scaled_tol(tol, res.value).min(tol * res.value.norm()) {
                return Ok(res);
            }
        }
    }
    let mut fallback: Option<EvalResult> = None;
    if r <= 5.0 * (1.0 + p.alpha) {
        if let Ok(res) = series_auto(p, z) {
            if res.est_error <= scaled_tol(tol, res.value) {
                return Ok(res);
            }
            fallback = Some(res);
        }
    }
    if let Some(res) = asymptotic(p, z, tol) {
        return Ok(res);
    }
    // Neither route meets tol: keep whichever has the smaller error estimate.
    match (contour(p, z), fallback) {
        (Ok(c), Some(s)) if s.est_error < c.est_error => Ok(s),
        (Ok(c), _) => Ok(c),
        (Err(_), Some(s)) if s.est_error.is_finite() => Ok(s),
        (Err(e), _) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Taylor series

struct SeriesTerms {
    p: MLParams,
    ln_r: f64,
    arg: f64,
    ln_coef: f64,
    n: usize,
}

impl SeriesTerms {
    fn new(p: &MLParams, z: Complex64) -> Self {
        SeriesTerms {
            p: *p,
            ln_r: z.norm().ln(),
            arg: z.arg(),
            ln_coef: 0.0,
            n: 0,
        }
    }

    /// Next term (γ)_n zⁿ / (n! Γ(αn+β)), advancing n.
    fn next_term(&mut self) -> Complex64 {
        let n = self.n as f64;
        if self.n > 0 {
            // (γ)_n / n! = Π (γ + j − 1)/j, accumulated in log space
            self.ln_coef += ((self.p.gamma_index + n - 1.0) / n).ln();
        }
        self.n += 1;
        let g_arg = self.p.alpha * n + self.p.beta;
        if crate::special::is_gamma_pole(g_arg) {
            return Complex64::new(0.0, 0.0);
        }
        let (lg, sign) = ln_gamma_signed(g_arg);
        let mag = (self.ln_coef + n * self.ln_r - lg).exp();
        Complex64::from_polar(sign * mag, n * self.arg)
    }
}

/// Partial sum of the first `budget` series terms with a tail bound.
///
/// `est_error` bounds the neglected tail geometrically from the ratio of the
/// first two neglected terms (infinite if that ratio is ≥ 1) plus the
/// accumulated rounding error of the summation.
pub fn prabhakar_series(p: &MLParams, z: Complex64, budget: usize) -> Result<EvalResult> {
    p.validate()?;
    if budget == 0 {
        return Err(Error::invalid("budget must be ≥ 1"));
    }
    let mut terms = SeriesTerms::new(p, z);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for _ in 0..budget {
        let t = terms.next_term();
        sum += t;
        abs_sum += t.norm();
    }
    let t0 = terms.next_term().norm();
    let t1 = terms.next_term().norm();
    let tail = tail_bound(t0, t1);
    Ok(EvalResult {
        value: sum,
        terms_used: budget,
        est_error: tail + 4.0 * f64::EPSILON * abs_sum,
        route: Route::Series,
    })
}

fn tail_bound(first: f64, second: f64) -> f64 {
    if first == 0.0 {
        // a Γ pole zeroed the term; fall back to the next one
        return if second == 0.0 { 0.0 } else { 2.0 * second };
    }
    let q = second / first;
    if q < 1.0 {
        first / (1.0 - q)
    } else {
        f64::INFINITY
    }
}

fn series_auto(p: &MLParams, z: Complex64) -> Result<EvalResult> {
    let mut terms = SeriesTerms::new(p, z);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in 0..SERIES_BUDGET {
        let t = terms.next_term();
        let m = t.norm();
        sum += t;
        abs_sum += m;
        if n >= 3 && m < prev && m <= 1e-17 * sum.norm().max(1.0) {
            let t0 = terms.next_term().norm();
            let t1 = terms.next_term().norm();
            return Ok(EvalResult {
                value: sum,
                terms_used: n + 1,
                est_error: tail_bound(t0, t1) + 4.0 * f64::EPSILON * abs_sum,
                route: Route::Series,
            });
        }
        if m != 0.0 {
            prev = m;
        }
    }
    Err(Error::no_conv(
        "Mittag-Leffler series",
        format!(
            "no convergence within {SERIES_BUDGET} terms at |z| = {}",
            z.norm()
        ),
    ))
}

// ---------------------------------------------------------------------------
// Integer α: the term ratio is rational, so the series can be summed exactly
// enough in double-double arithmetic to survive the cancellation at negative z.

const DD_RADIUS: f64 = 40.0;

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn quick(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        Dd::quick(s.hi, s.lo + self.lo + o.lo)
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + self.hi * o.lo + self.lo * o.hi;
        Dd::quick(p, e)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(q1)).neg());
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from(q2)).neg());
        let q3 = r.hi / o.hi;
        Dd::quick(q1, q2).add(Dd::from(q3))
    }
}

fn series_dd(p: &MLParams, z: Complex64) -> Option<EvalResult> {
    let k = p.alpha as usize;
    let (zr, zi) = (Dd::from(z.re), Dd::from(z.im));
    // s_n = Γ(β)(γ)_n zⁿ / (n! Γ(αn+β)); s_0 = 1
    let (mut tr, mut ti) = (Dd::from(1.0), Dd::ZERO);
    let (mut sr, mut si) = (tr, ti);
    let mut abs_sum = 1.0;
    let mut prev = f64::INFINITY;
    let mut mags = [0.0; 2];
    let mut n = 0usize;
    let mut tail_seen = 0;
    while n < SERIES_BUDGET {
        n += 1;
        let nf = n as f64;
        let mut ratio = Dd::two_sum(p.gamma_index, nf - 1.0).div(Dd::from(nf));
        let base = (p.alpha as usize) * (n - 1);
        for j in 0..k {
            ratio = ratio.div(Dd::two_sum(p.beta, (base + j) as f64));
        }
        let nr = tr.mul(zr).add(ti.mul(zi).neg()).mul(ratio);
        let ni = tr.mul(zi).add(ti.mul(zr)).mul(ratio);
        tr = nr;
        ti = ni;
        let m = tr.hi.hypot(ti.hi);
        if tail_seen < 2 && n > 3 && m < prev && m <= 1e-34 * sr.hi.hypot(si.hi).max(1e-300) {
            mags[tail_seen] = m;
            tail_seen += 1;
            if tail_seen == 2 {
                break;
            }
            continue;
        }
        tail_seen = 0;
        sr = sr.add(tr);
        si = si.add(ti);
        abs_sum += m;
        prev = m;
    }
    if tail_seen < 2 {
        return None;
    }
    let g = rgamma(p.beta);
    let value = Complex64::new(sr.hi, si.hi) * g;
    let rounding = 16.0 * (n as f64) * 2f64.powi(-104) * abs_sum * g.abs();
    let est = tail_bound(mags[0], mags[1]) * g.abs() + rounding + 2.0 * f64::EPSILON * value.norm();
    Some(EvalResult {
        value,
        terms_used: n,
        est_error: est,
        route: Route::Series,
    })
}

// ---------------------------------------------------------------------------
// Singular points of s^{−β}(1 − z s^{−α})^{−γ}: roots of s^α = z on the principal sheet.

fn singular_points(alpha: f64, z: Complex64) -> Vec<Complex64> {
    let theta = z.arg();
    let kmin = (-alpha / 2.0 - theta / (2.0 * PI)).ceil() as i64;
    let kmax = (alpha / 2.0 - theta / (2.0 * PI)).floor() as i64;
    let rho = z.norm().powf(1.0 / alpha);
    (kmin..=kmax)
        .map(|k| Complex64::from_polar(rho, (theta + 2.0 * PI * k as f64) / alpha))
        .collect()
}

// ---------------------------------------------------------------------------
// Algebraic asymptotic expansion
//
// E^γ_{α,β}(z) ~ Σ_k (−1)^k (γ)_k / k! · (−z)^{−γ−k} / Γ(β − α(γ+k)),
// valid when the exponential contributions e^{s*} are negligible.

fn asymptotic(p: &MLParams, z: Complex64, tol: f64) -> Option<EvalResult> {
    let r = z.norm();
    if r < 10.0 {
        return None;
    }
    let g = p.gamma_index;
    let mz = -z;
    let ln_mz = mz.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut ln_coef = 0.0; // ln((γ)_k / k!)
    let mut prev = f64::INFINITY;
    let first_neglected;
    let mut k = 0usize;
    let mut small_streak = 0;
    loop {
        let kf = k as f64;
        if k > 0 {
            ln_coef += ((g + kf - 1.0) / kf).ln();
        }
        let ga = p.beta - p.alpha * (g + kf);
        let term = if crate::special::is_gamma_pole(ga) {
            Complex64::new(0.0, 0.0)
        } else {
            let (lg, sign) = ln_gamma_signed(ga);
            let parity = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            let w = (-(g + kf)) * ln_mz;
            parity * sign * (Complex64::new(ln_coef - lg, 0.0) + w).exp()
        };
        let m = term.norm();
        if m > prev && m != 0.0 {
            // expansion started to diverge before reaching the tolerance
            first_neglected = m;
            break;
        }
        sum += term;
        if m != 0.0 {
            prev = m;
            if m <= 1e-3 * tol * sum.norm().max(f64::MIN_POSITIVE) {
                small_streak += 1;
                if small_streak >= 2 {
                    first_neglected = m;
                    break;
                }
            } else {
                small_streak = 0;
            }
        }
        k += 1;
        if k > 400 {
            return None;
        }
    }
    // exponential contributions from the singular points
    let scale = sum.norm();
    let mut expo = 0.0;
    for s in singular_points(p.alpha, z) {
        let ln_bound = s.re + (p.alpha * g + p.beta.abs() + 1.0) * s.norm().max(1.0).ln();
        expo += ln_bound.exp();
    }
    let est = first_neglected + expo;
    if scale == 0.0 || est > 0.1 * tol * scale {
        return None;
    }
    Some(EvalResult {
        value: if z.im == 0.0 {
            Complex64::new(sum.re, 0.0)
        } else {
            sum
        },
        terms_used: k + 1,
        est_error: est,
        route: Route::Asymptotic,
    })
}

// ---------------------------------------------------------------------------
// Optimal parabolic contour (Garrappa-type parameter selection)

struct ContourParams {
    mu: f64,
    h: f64,
    n: usize,
}

fn log_machine_eps() -> f64 {
    f64::EPSILON.ln()
}

/// Parameters for a contour lying between two consecutive singular levels.
fn params_bounded(
    phi_j: f64,
    phi_j1: f64,
    p_j: f64,
    q_j: f64,
    log_epsilon: f64,
) -> Option<ContourParams> {
    let log_eps = log_machine_eps();
    let fac = 1.01;
    let f_max = (log_epsilon - log_eps).exp();
    let sq_j = phi_j.sqrt();
    let threshold = 2.0 * (log_epsilon - log_eps).sqrt();
    let sq_j1 = phi_j1.sqrt().min(threshold - sq_j);
    let small = 1e-14;
    let (sqb_j, sqb_j1, f_bar) = if p_j < small && q_j < small {
        (sq_j, sq_j1, 1.0)
    } else if p_j < small {
        let f_min = if sq_j > 0.0 {
            fac * (sq_j / (sq_j1 - sq_j)).powf(q_j)
        } else {
            fac
        };
        if f_min >= f_max {
            return None;
        }
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fq = f_bar.powf(-1.0 / q_j);
        (sq_j, (2.0 * sq_j1 - fq * sq_j) / (2.0 + fq), f_bar)
    } else if q_j < small {
        let f_min = fac * (sq_j1 / (sq_j1 - sq_j)).powf(p_j);
        if f_min >= f_max {
            return None;
        }
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fp = f_bar.powf(-1.0 / p_j);
        ((2.0 * sq_j + fp * sq_j1) / (2.0 - fp), sq_j1, f_bar)
    } else {
        let f_min = fac * (sq_j + sq_j1) / (sq_j1 - sq_j).powf(p_j.max(q_j));
        if f_min >= f_max {
            return None;
        }
        let f_min = f_min.max(1.5);
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fp = f_bar.powf(-1.0 / p_j);
        let fq = f_bar.powf(-1.0 / q_j);
        let w = -phi_j1 / log_epsilon;
        let den = 2.0 + w - (1.0 + w) * fp + fq;
        (
            ((2.0 + w + fq) * sq_j + fp * sq_j1) / den,
            (-(1.0 + w) * fq * sq_j + (2.0 + w - (1.0 + w) * fp) * sq_j1) / den,
            f_bar,
        )
    };
    let log_epsilon = log_epsilon - f_bar.ln();
    let w = -sqb_j1 * sqb_j1 / log_epsilon;
    let mu = (((1.0 + w) * sqb_j + sqb_j1) / (2.0 + w)).powi(2);
    let h = -2.0 * PI / log_epsilon * (sqb_j1 - sqb_j) / ((1.0 + w) * sqb_j + sqb_j1);
    let n = ((1.0 - log_epsilon / mu).sqrt() / h).ceil();
    if !(mu > 0.0) || !(h > 0.0) || !n.is_finite() {
        return None;
    }
    Some(ContourParams {
        mu,
        h,
        n: n as usize,
    })
}

/// Parameters for a contour lying to the right of every singular point.
fn params_unbounded(phi_j: f64, p_j: f64, log_epsilon: f64) -> Option<ContourParams> {
    let sq_phi = phi_j.sqrt();
    let mut phibar = if phi_j > 0.0 { phi_j * 1.01 } else { 0.01 };
    let mut sq_phibar = phibar.sqrt();
    let (f_min, f_max, f_tar) = (1.0f64, 10.0f64, 5.0f64);
    let (mut n, mut a_par, mut sq_mu);
    let mut iterations = 0;
    loop {
        let log_eps_phi = log_epsilon / phibar;
        n = (phibar / PI * (1.0 - 1.5 * log_eps_phi + (1.0 - 2.0 * log_eps_phi).sqrt())).ceil();
        a_par = PI * n / phibar;
        sq_mu = sq_phibar * (4.0 - a_par).abs() / (7.0 - (1.0 + 12.0 * a_par).sqrt()).abs();
        let fbar = ((sq_phibar - sq_phi) / sq_mu).powf(-p_j);
        if p_j < 1e-14 || (f_min < fbar && fbar < f_max) {
            break;
        }
        sq_phibar = f_tar.powf(-1.0 / p_j) * sq_mu + sq_phi;
        phibar = sq_phibar * sq_phibar;
        iterations += 1;
        if iterations > 200 {
            return None;
        }
    }
    let mut mu = sq_mu * sq_mu;
    let mut h = (-3.0 * a_par - 2.0 + 2.0 * (1.0 + 12.0 * a_par).sqrt()) / (4.0 - a_par) / n;
    let log_eps = log_machine_eps();
    let threshold = log_epsilon - log_eps;
    if mu > threshold {
        let q = if p_j.abs() < 1e-14 {
            0.0
        } else {
            f_tar.powf(-1.0 / p_j) * mu.sqrt()
        };
        let phibar = (q + phi_j.sqrt()).powi(2);
        if phibar < threshold {
            let w = (log_eps / (log_eps - log_epsilon)).sqrt();
            let u = (-phibar / log_eps).sqrt();
            mu = threshold;
            n = (w * log_epsilon / 2.0 / PI / (u * w - 1.0)).ceil();
            h = (log_eps / (log_eps - log_epsilon)).sqrt() / n;
        } else {
            return None;
        }
    }
    if !(mu > 0.0) || !(h > 0.0) || !n.is_finite() || n < 1.0 {
        return None;
    }
    Some(ContourParams {
        mu,
        h,
        n: n as usize,
    })
}

/// s^{−β}(1 − z s^{−α})^{−γ}, the Laplace transform of t^{β−1}E^γ_{α,β}(z t^α) at t = 1.
fn laplace_kernel(p: &MLParams, z: Complex64, s: Complex64) -> Complex64 {
    let ln_s = s.ln();
    let inner = 1.0 - z * (-p.alpha * ln_s).exp();
    (-p.beta * ln_s - p.gamma_index * inner.ln()).exp()
}

/// Residue by trapezoid quadrature on a circle; the error term is the rounding
/// floor eps·mean|integrand|, which dominates for high-order poles.
fn residue_by_circle(
    p: &MLParams,
    z: Complex64,
    pole: Complex64,
    others: &[Complex64],
) -> (Complex64, usize, f64) {
    // distance to the branch cut (−∞, 0] of s^{−β}
    let mut dist = if pole.re >= 0.0 {
        pole.norm()
    } else {
        pole.im.abs()
    };
    for o in others {
        let d = (pole - o).norm();
        if d > 0.0 {
            dist = dist.min(d);
        }
    }
    // e^s varies by e^{±r} on the circle; r ≈ order balances that against r^{−order}
    let radius = (0.8 * dist).min(p.gamma_index.max(1.0));
    let nodes = 192;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for j in 0..nodes {
        let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
        let s = pole + radius * e;
        let term = s.exp() * laplace_kernel(p, z, s) * radius * e;
        acc += term;
        mag += term.norm();
    }
    let scale = nodes as f64;
    (acc / scale, nodes, 8.0 * f64::EPSILON * mag / scale)
}

// The node count targets machine level, not the caller's tol: the achieved
// error scales with the kernel magnitude. Relaxed only when forced.
fn contour(p: &MLParams, z: Complex64) -> Result<EvalResult> {
    let mut log_epsilon = MIN_TOL.ln();
    let alpha = p.alpha;
    let g = p.gamma_index;

    let mut sing: Vec<(Complex64, f64)> = singular_points(alpha, z)
        .into_iter()
        .map(|s| (s, 0.5 * (s.re + s.norm())))
        .filter(|(_, phi)| *phi > 1e-15)
        .collect();
    sing.sort_by(|a, b| a.1.total_cmp(&b.1));
    let poles: Vec<Complex64> = sing.iter().map(|x| x.0).collect();

    let mut phi = vec![0.0];
    phi.extend(sing.iter().map(|x| x.1));
    let j1 = phi.len();
    let mut pw = vec![(-2.0 * (alpha * g - p.beta + 1.0)).max(0.0)];
    pw.extend(std::iter::repeat_n(g, j1 - 1));
    let mut qw: Vec<f64> = std::iter::repeat_n(g, j1 - 1).collect();
    qw.push(f64::INFINITY);
    phi.push(f64::INFINITY);

    // Residues are only available for poles (integer γ); otherwise the contour
    // must leave every singularity on its left.
    let residues_ok = p.integer_gamma();

    let (params, region) = loop {
        let bound = log_epsilon - log_machine_eps();
        let mut best: Option<(ContourParams, usize)> = None;
        for j in 0..j1 {
            if !(phi[j] < bound && phi[j] < phi[j + 1]) {
                continue;
            }
            if !residues_ok && j + 1 < j1 {
                continue;
            }
            let cand = if j + 1 < j1 {
                params_bounded(phi[j], phi[j + 1], pw[j], qw[j], log_epsilon)
            } else {
                params_unbounded(phi[j], pw[j], log_epsilon)
            };
            if let Some(c) = cand {
                let better = match &best {
                    None => true,
                    Some((b, _)) => c.n < b.n,
                };
                if better {
                    best = Some((c, j));
                }
            }
        }
        match best {
            Some((c, j)) if c.n <= CONTOUR_MAX_NODES => break (c, j),
            _ => {
                log_epsilon += 10f64.ln();
                if log_epsilon > (1e-3f64).ln() {
                    return Err(Error::no_conv(
                        "Mittag-Leffler contour",
                        format!(
                            "no admissible contour for alpha={}, beta={}, gamma={}, z={}",
                            alpha, p.beta, g, z
                        ),
                    ));
                }
            }
        }
    };

    let ContourParams { mu, h, n } = params;
    let mut integral = Complex64::new(0.0, 0.0);
    let n = n as i64;
    for k in -n..=n {
        let u = h * k as f64;
        let s = mu * Complex64::new(1.0, u).powi(2);
        let ds = Complex64::new(-2.0 * mu * u, 2.0 * mu);
        integral += s.exp() * laplace_kernel(p, z, s) * ds;
    }
    integral *= h / (2.0 * PI) * Complex64::new(0.0, -1.0);

    let mut residues = Complex64::new(0.0, 0.0);
    let mut extra_nodes = 0;
    let mut residue_err = 0.0;
    for &s in &poles[region..] {
        if g == 1.0 {
            residues += ((1.0 - p.beta) * s.ln() + s).exp() / alpha;
        } else {
            let (r, used, err) = residue_by_circle(p, z, s, &poles);
            residues += r;
            extra_nodes += used;
            residue_err += err;
        }
    }
    let mut value = integral + residues;
    if z.im == 0.0 {
        value.im = 0.0;
    }
    let est = log_epsilon.exp() * value.norm().max(1.0) + residue_err;
    Ok(EvalResult {
        value,
        terms_used: (2 * n + 1) as usize + extra_nodes,
        est_error: est,
        route: Route::Contour,
    })
}

/// Forces the contour route; used by tests and benchmarks to compare routes.
pub fn prabhakar_contour(p: &MLParams, z: Complex64, tol: f64) -> Result<EvalResult> {
    p.validate()?;
    check_tol(tol)?;
    contour(p, z)
}

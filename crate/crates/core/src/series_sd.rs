//! Srivastava-Daoust double hypergeometric series
//!
//! S(x, y) = Σ_{m,n} [Π Γ(a_j + θ_j m + φ_j n) Π Γ(b_j + ψ_j m) Π Γ(b′_j + ψ′_j n)]
//!         / [Π Γ(c_j + δ_j m + ε_j n) Π Γ(d_j + η_j m) Π Γ(d′_j + η′_j n)] · xᵐ yⁿ / (m! n!).
//!
//! The two-term time-operator kernel is
//! L⁻¹[s^{ρ−1}/(s^α + a s^β + b)](t) = t^{α−ρ} S[−a t^{α−β}, −b t^α] with the
//! block of [`SeriesParams::two_term_kernel`].

use crate::error::{Error, Result};
use crate::mlf::{EvalResult, Route};
use crate::special::{is_gamma_pole, ln_gamma_signed};
use num_complex::Complex64;

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Parameter block of the series; every coefficient must be > 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeriesParams {
    /// (a_j, θ_j, φ_j)
    pub upper: Vec<(f64, f64, f64)>,
    /// (c_j, δ_j, ε_j)
    pub lower: Vec<(f64, f64, f64)>,
    /// (b_j, ψ_j)
    pub upper_x: Vec<(f64, f64)>,
    /// (b′_j, ψ′_j)
    pub upper_y: Vec<(f64, f64)>,
    /// (d_j, η_j)
    pub lower_x: Vec<(f64, f64)>,
    /// (d′_j, η′_j)
    pub lower_y: Vec<(f64, f64)>,
}

impl SeriesParams {
    /// Block with upper [1:1;1] and lower [c:δ;ε].
    pub fn one_upper(c: f64, delta: f64, eps: f64) -> Self {
        SeriesParams {
            upper: vec![(1.0, 1.0, 1.0)],
            lower: vec![(c, delta, eps)],
            ..Default::default()
        }
    }

    /// Block for the two-term kernel of order (α, β) and numerator exponent ρ: [α−ρ+1 : α−β ; α].
    pub fn two_term_kernel(alpha: f64, beta: f64, rho: f64) -> Self {
        Self::one_upper(alpha - rho + 1.0, alpha - beta, alpha)
    }

    /// Same block with the x and y roles exchanged.
    pub fn swapped(&self) -> Self {
        SeriesParams {
            upper: self.upper.iter().map(|&(a, t, p)| (a, p, t)).collect(),
            lower: self.lower.iter().map(|&(c, d, e)| (c, e, d)).collect(),
            upper_x: self.upper_y.clone(),
            upper_y: self.upper_x.clone(),
            lower_x: self.lower_y.clone(),
            lower_y: self.lower_x.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let triples = self.upper.iter().chain(&self.lower);
        let pairs = self
            .upper_x
            .iter()
            .chain(&self.upper_y)
            .chain(&self.lower_x)
            .chain(&self.lower_y);
        let ok = triples
            .clone()
            .all(|&(v, a, b)| v.is_finite() && a > 0.0 && b > 0.0)
            && pairs.clone().all(|&(v, a)| v.is_finite() && a > 0.0);
        if !ok {
            return Err(Error::invalid(
                "series coefficients must be > 0 and values finite",
            ));
        }
        Ok(())
    }
}

/// (Δ, Δ′, Δ > 0 ∧ Δ′ > 0).
pub fn convergence_margins(p: &SeriesParams) -> (f64, f64, bool) {
    let sum = |it: &mut dyn Iterator<Item = f64>| it.sum::<f64>();
    let delta =
        1.0 + sum(&mut p.lower.iter().map(|t| t.1)) + sum(&mut p.lower_x.iter().map(|t| t.1))
            - sum(&mut p.upper.iter().map(|t| t.1))
            - sum(&mut p.upper_x.iter().map(|t| t.1));
    let delta_p =
        1.0 + sum(&mut p.lower.iter().map(|t| t.2)) + sum(&mut p.lower_y.iter().map(|t| t.1))
            - sum(&mut p.upper.iter().map(|t| t.2))
            - sum(&mut p.upper_y.iter().map(|t| t.1));
    (delta, delta_p, delta > 0.0 && delta_p > 0.0)
}

/// ln|Γ(v)| and sign, or None at a pole.
fn lg(v: f64) -> Option<(f64, f64)> {
    if is_gamma_pole(v) {
        None
    } else {
        Some(ln_gamma_signed(v))
    }
}

struct Term {
    value: Complex64,
    magnitude: f64,
}

struct TermBuilder<'a> {
    p: &'a SeriesParams,
    ln_x: Option<Complex64>,
    ln_y: Option<Complex64>,
}

impl TermBuilder<'_> {
    fn term(&self, m: usize, n: usize) -> Result<Term> {
        let zero = Term {
            value: Complex64::new(0.0, 0.0),
            magnitude: 0.0,
        };
        let (mf, nf) = (m as f64, n as f64);
        let mut ln = Complex64::new(0.0, 0.0);
        match (m, self.ln_x) {
            (0, _) => {}
            (_, None) => return Ok(zero),
            (_, Some(l)) => ln += mf * l,
        }
        match (n, self.ln_y) {
            (0, _) => {}
            (_, None) => return Ok(zero),
            (_, Some(l)) => ln += nf * l,
        }
        let mut sign = 1.0;
        let mut acc = -crate::special::ln_factorial(m) - crate::special::ln_factorial(n);
        let numer = self
            .p
            .upper
            .iter()
            .map(|&(a, t, f)| a + t * mf + f * nf)
            .chain(self.p.upper_x.iter().map(|&(b, s)| b + s * mf))
            .chain(self.p.upper_y.iter().map(|&(b, s)| b + s * nf));
        for v in numer {
            let (l, s) = lg(v)
                .ok_or_else(|| Error::invalid(format!("upper Gamma argument {v} hits a pole")))?;
            acc += l;
            sign *= s;
        }
        let denom = self
            .p
            .lower
            .iter()
            .map(|&(c, d, e)| c + d * mf + e * nf)
            .chain(self.p.lower_x.iter().map(|&(d, h)| d + h * mf))
            .chain(self.p.lower_y.iter().map(|&(d, h)| d + h * nf));
        for v in denom {
            match lg(v) {
                None => return Ok(zero),
                Some((l, s)) => {
                    acc -= l;
                    sign *= s;
                }
            }
        }
        ln += acc;
        let magnitude = ln.re.exp();
        Ok(Term {
            value: Complex64::from_polar(sign * magnitude, ln.im),
            magnitude,
        })
    }
}

fn ln_arg(z: Complex64) -> Option<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        None
    } else {
        Some(z.ln())
    }
}

/// Rectangular-frontier summation of the series.
///
/// Frontier M holds the terms with max(m, n) = M, added in increasing
/// magnitude. Summation stops once two consecutive frontiers fall below
/// tol·max(1, |S|); `est_error` is the largest term of the first neglected
/// frontier. NonConvergence is reported when the budget runs out or when the
/// accumulated rounding, eps·Σ|term|, exceeds tol·max(1, |S|).
pub fn sd_eval(
    p: &SeriesParams,
    x: Complex64,
    y: Complex64,
    tol: f64,
    budget: usize,
) -> Result<EvalResult> {
    p.validate()?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tol must be > 0"));
    }
    if budget == 0 {
        return Err(Error::invalid("budget must be ≥ 1"));
    }
    let tb = TermBuilder {
        p,
        ln_x: ln_arg(x),
        ln_y: ln_arg(y),
    };
    let frontier = |mm: usize| -> Result<Vec<Term>> {
        let mut terms = Vec::with_capacity(2 * mm + 1);
        for n in 0..=mm {
            terms.push(tb.term(mm, n)?);
        }
        for m in 0..mm {
            terms.push(tb.term(m, mm)?);
        }
        terms.sort_by(|a, b| a.magnitude.total_cmp(&b.magnitude));
        Ok(terms)
    };

    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut used = 0usize;
    let mut quiet = 0;
    let mut prev_max = f64::INFINITY;
    let mut mm = 0usize;
    loop {
        if used + 2 * mm + 1 > budget {
            return Err(Error::no_conv(
                "Srivastava-Daoust series",
                format!("frontier terms still above tol after {used} terms"),
            ));
        }
        let terms = frontier(mm)?;
        used += terms.len();
        let fmax = terms.last().map_or(0.0, |t| t.magnitude);
        if !fmax.is_finite() {
            return Err(Error::no_conv("Srivastava-Daoust series", "term overflow"));
        }
        for t in &terms {
            sum += t.value;
            abs_sum += t.magnitude;
        }
        let scale = tol * sum.norm().max(1.0);
        if mm >= 2 && fmax <= scale && fmax <= prev_max {
            quiet += 1;
        } else {
            quiet = 0;
        }
        prev_max = fmax;
        mm += 1;
        if quiet >= 2 {
            let next = frontier(mm)?;
            let est = next.last().map_or(0.0, |t| t.magnitude);
            let rounding = 4.0 * f64::EPSILON * abs_sum;
            if rounding > scale {
                return Err(Error::no_conv(
                    "Srivastava-Daoust series",
                    format!("cancellation: rounding {rounding:e} exceeds tolerance {scale:e}"),
                ));
            }
            return Ok(EvalResult {
                value: sum,
                terms_used: used,
                est_error: est + rounding,
                route: Route::Series,
            });
        }
    }
}

/// Σ_{m,n} (1)_{m+n}/(m! n!) · xᵐ yⁿ / (a)_{αm+βn} by anti-diagonals, with
/// (a)_ν = Γ(a+ν)/Γ(a) in log space.
pub fn direct_double_sum(
    a: f64,
    alpha: f64,
    beta: f64,
    x: Complex64,
    y: Complex64,
    tol: f64,
) -> Result<Complex64> {
    if !(a > 0.0 && alpha > 0.0 && beta > 0.0) {
        return Err(Error::invalid("a, alpha, beta must be > 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol must be > 0"));
    }
    let lga = libm::lgamma(a);
    let (lx, ly) = (ln_arg(x), ln_arg(y));
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for d in 0..20_000usize {
        let mut diag = Complex64::new(0.0, 0.0);
        let mut dmax: f64 = 0.0;
        // C(d, m) built incrementally in log space
        let mut ln_binom = 0.0;
        for m in 0..=d {
            if m > 0 {
                ln_binom += ((d - m + 1) as f64).ln() - (m as f64).ln();
            }
            let n = d - m;
            let mut ln = Complex64::new(
                ln_binom + lga - libm::lgamma(a + alpha * m as f64 + beta * n as f64),
                0.0,
            );
            if m > 0 {
                match lx {
                    Some(l) => ln += m as f64 * l,
                    None => continue,
                }
            }
            if n > 0 {
                match ly {
                    Some(l) => ln += n as f64 * l,
                    None => continue,
                }
            }
            let v = ln.exp();
            dmax = dmax.max(v.norm());
            diag += v;
        }
        sum += diag;
        if d >= 2 && dmax <= 0.01 * tol * sum.norm().max(1.0) {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::no_conv(
        "direct double sum",
        "anti-diagonal terms did not decay",
    ))
}

//! Finite-difference oracle for symmetric problems (all θ_j = 0).
//!
//! With Riemann-Liouville data the solution is singular at t = 0, so the
//! scheme works on the regular part. Writing F₀ for the free response
//!   F₀ = (f₁ + a f₂) t^{α−1}/Γ(α) + (g₁ + a g₂) t^{α−2}/Γ(α−1),
//! the remainder M = N − F₀ vanishes at t = 0 and solves the Volterra equation
//!   M + a I^{α−β} M − I^α A M = I^α A F₀ − a I^{2α−β}[R₀] + I^α φ,
//! where A is the space operator and I^ν[R₀] the analytic fractional integrals
//! of the data powers. Fractional integrals are discretized by Grünwald-Letnikov
//! weights of negative order, A by fractional centered differences on a
//! truncated domain (zero outside). The single-term problem is a = 0.

use crate::error::{Error, Result};
use crate::quad::integrate_real;
use crate::solvers::{
    solve_t1, solve_t2, DataKind, DataRole, Diagnostics, KernelPath, ProblemSpec, SolutionField,
    SolverConfig, SourceDescriptor,
};
use crate::special::rgamma;
use nalgebra::{DMatrix, DVector};

/// Comparisons against the analytic route start here: for α < 1 the field is
/// unbounded as t → 0.
pub const T_MIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub nt: usize,
    pub t_final: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(Error::invalid(format!(
                "need x_min < x_max, got {} and {}",
                self.x_min, self.x_max
            )));
        }
        if self.nx < 16 || self.nt < 16 {
            return Err(Error::invalid(format!(
                "need nx, nt ≥ 16, got {} and {}",
                self.nx, self.nt
            )));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::invalid(format!(
                "t_final must be > 0, got {}",
                self.t_final
            )));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.nt as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        crate::solvers::linspace(self.x_min, self.x_max, self.nx)
    }

    /// Halved spacings on the same domain: the old nodes are every other new node.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            nx: 2 * self.nx - 1,
            nt: 2 * self.nt,
            ..*self
        }
    }
}

/// Coefficients of (1 − z)^order: w₀ = 1, w_j = w_{j−1}(1 − (order + 1)/j).
///
/// Positive orders give Grünwald-Letnikov derivative weights, negative orders
/// the matching fractional-integral weights.
pub fn gl_weights(order: f64, count: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(count);
    let mut prev = 1.0;
    for j in 0..count {
        if j > 0 {
            prev *= 1.0 - (order + 1.0) / j as f64;
        }
        w.push(prev);
    }
    w
}

/// Fractional centered difference row for −(−Δ)^{γ/2}, entries k = −bandwidth..=bandwidth.
///
/// Its symbol is −|2 sin(kh/2)/h|^γ, which tends to −|k|^γ as h → 0.
pub fn riesz_fd_row(gamma_order: f64, h: f64, bandwidth: usize) -> Result<Vec<f64>> {
    if !(gamma_order > 0.0 && gamma_order <= 2.0) {
        return Err(Error::invalid(format!(
            "gamma_order must lie in (0, 2], got {gamma_order}"
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("h must be > 0, got {h}")));
    }
    let g = centered_coefficients(gamma_order, bandwidth);
    let scale = -h.powf(-gamma_order);
    let mut row = vec![0.0; 2 * bandwidth + 1];
    for (k, gk) in g.iter().enumerate() {
        row[bandwidth + k] = scale * gk;
        row[bandwidth - k] = scale * gk;
    }
    Ok(row)
}

/// g_k = (−1)^k Γ(γ+1) / (Γ(γ/2 − k + 1) Γ(γ/2 + k + 1)), k = 0..=bandwidth.
fn centered_coefficients(gamma_order: f64, bandwidth: usize) -> Vec<f64> {
    let half = 0.5 * gamma_order;
    let mut g = Vec::with_capacity(bandwidth + 1);
    let mut cur =
        crate::special::gamma(gamma_order + 1.0) * rgamma(half + 1.0) * rgamma(half + 1.0);
    for k in 0..=bandwidth {
        g.push(cur);
        cur *= (k as f64 - half) / (half + k as f64 + 1.0);
    }
    g
}

fn operator_matrix(spec: &ProblemSpec, grid: &GridSpec) -> Result<DMatrix<f64>> {
    let nx = grid.nx;
    let h = grid.h();
    let mut band = vec![0.0; nx];
    for term in spec.space_op.terms() {
        let g = centered_coefficients(term.gamma_order, nx - 1);
        let scale = -term.mu * h.powf(-term.gamma_order);
        for (b, gk) in band.iter_mut().zip(&g) {
            *b += scale * gk;
        }
    }
    Ok(DMatrix::from_fn(nx, nx, |i, j| band[i.abs_diff(j)]))
}

fn sample(kind: &DataKind, xs: &[f64], dirac_width: f64) -> Result<DVector<f64>> {
    let gauss = |c: f64, w: f64, x: f64| {
        let u = (x - c) / w;
        (-0.5 * u * u).exp() / (w * (2.0 * std::f64::consts::PI).sqrt())
    };
    let v: Vec<f64> = match kind {
        DataKind::Zero => vec![0.0; xs.len()],
        DataKind::Dirac => xs.iter().map(|&x| gauss(0.0, dirac_width, x)).collect(),
        DataKind::Gaussian { center, width } => {
            xs.iter().map(|&x| gauss(*center, *width, x)).collect()
        }
        DataKind::Tabulated { x, values } => xs
            .iter()
            .map(|&p| {
                if p < x[0] || p > x[x.len() - 1] {
                    return 0.0;
                }
                let i = x.partition_point(|&s| s <= p).clamp(1, x.len() - 1);
                let w = (p - x[i - 1]) / (x[i] - x[i - 1]);
                values[i - 1] * (1.0 - w) + values[i] * w
            })
            .collect(),
    };
    Ok(DVector::from_vec(v))
}

/// (1/Γ(ν)) ∫₀ᵗ (t − s)^{ν−1} p(s) ds via s = t − t·u^{1/ν}.
fn fractional_integral(p: &dyn Fn(f64) -> f64, nu: f64, t: f64) -> Result<f64> {
    let inv = 1.0 / nu;
    let (v, _) = integrate_real(|u| Ok(p(t - t * u.powf(inv))), 0.0, 1.0, 1e-14, 1e-12, 500)?;
    Ok(v * t.powf(nu) * inv * rgamma(nu))
}

/// Regular-part field on one grid, without refinement.
pub fn fd_march(spec: &ProblemSpec, grid: &GridSpec, dirac_width: f64) -> Result<Vec<f64>> {
    grid.validate()?;
    if !spec.space_op.is_symmetric() {
        return Err(Error::invalid(
            "finite-difference oracle supports theta = 0 only",
        ));
    }
    if !(dirac_width > 0.0) {
        return Err(Error::invalid("dirac mollification width must be > 0"));
    }
    let op = spec.time_op;
    let alpha = op.alpha;
    let (beta, a) = match (op.beta, op.a) {
        (Some(b), Some(a)) => (b, a),
        _ => (alpha, 0.0),
    };
    let xs = grid.nodes();
    let data = |role: DataRole| -> Result<DVector<f64>> {
        match spec.data.iter().find(|d| d.role == role) {
            Some(d) => sample(&d.kind, &xs, dirac_width),
            None => Ok(DVector::zeros(xs.len())),
        }
    };
    let (f0, g0) = if op.is_two_term() {
        (
            data(DataRole::F1)? + a * data(DataRole::F2)?,
            data(DataRole::G1)? + a * data(DataRole::G2)?,
        )
    } else {
        (data(DataRole::F)?, data(DataRole::G)?)
    };
    let has_g = g0.iter().any(|v| *v != 0.0);
    let source = match &spec.source {
        SourceDescriptor::Zero => None,
        SourceDescriptor::Separable { space, time } => {
            Some((sample(space, &xs, dirac_width)?, time.clone()))
        }
        SourceDescriptor::Tabulated { .. } => {
            return Err(Error::invalid(
                "finite-difference oracle supports separable sources only",
            ))
        }
    };

    let am = operator_matrix(spec, grid)?;
    let af = &am * &f0;
    let ag = &am * &g0;
    let tau = grid.tau();
    let nt = grid.nt;
    let d = alpha - beta;
    let c_mem = a * tau.powf(d);
    let c_op = tau.powf(alpha);
    let w_d = gl_weights(-d, nt + 1);
    let w_a = gl_weights(-alpha, nt + 1);

    let system = DMatrix::identity(grid.nx, grid.nx) * (1.0 + c_mem) - &am * c_op;
    let lu = system.lu();
    if !lu.is_invertible() {
        return Err(Error::StabilityFailure(
            "implicit step matrix is singular".into(),
        ));
    }

    let mut history: Vec<DVector<f64>> = Vec::with_capacity(nt + 1);
    history.push(DVector::zeros(grid.nx));
    for n in 1..=nt {
        let t = tau * n as f64;
        // I^α A F₀ − a I^{2α−β} R₀ + I^α φ
        let mut rhs = &af * (t.powf(2.0 * alpha - 1.0) * rgamma(2.0 * alpha));
        if has_g {
            rhs += &ag * (t.powf(2.0 * alpha - 2.0) * rgamma(2.0 * alpha - 1.0));
        }
        if a != 0.0 {
            let e = 2.0 * alpha - beta;
            rhs -= &f0 * (a * t.powf(e - 1.0) * rgamma(e));
            if has_g {
                rhs -= &g0 * (a * t.powf(e - 2.0) * rgamma(e - 1.0));
            }
        }
        if let Some((s, p)) = &source {
            let pt = |u: f64| p.eval(u);
            rhs += s * fractional_integral(&pt, alpha, t)?;
        }
        let mut mem_d = DVector::zeros(grid.nx);
        let mut mem_a = DVector::zeros(grid.nx);
        for j in 1..=n {
            let m = &history[n - j];
            if c_mem != 0.0 {
                mem_d.axpy(w_d[j], m, 1.0);
            }
            mem_a.axpy(w_a[j], m, 1.0);
        }
        rhs -= mem_d * c_mem;
        rhs += &am * mem_a * c_op;
        let m = lu
            .solve(&rhs)
            .ok_or_else(|| Error::StabilityFailure("implicit solve failed".into()))?;
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::StabilityFailure(format!(
                "non-finite values at step {n}"
            )));
        }
        history.push(m);
    }

    let t = grid.t_final;
    let mut n_final = history.pop().expect("nt ≥ 16");
    n_final += &f0 * (t.powf(alpha - 1.0) * rgamma(alpha));
    if has_g {
        n_final += &g0 * (t.powf(alpha - 2.0) * rgamma(alpha - 1.0));
    }
    Ok(n_final.iter().copied().collect())
}

/// Default Dirac mollification width for a grid: three coarse spacings.
pub fn default_dirac_width(grid: &GridSpec) -> f64 {
    3.0 * grid.h()
}

/// FD field at t_final on the grid nodes, from the refined run, with the
/// sup-norm difference to the coarse run as discretization error estimate.
pub fn solve_fd(spec: &ProblemSpec, grid: &GridSpec) -> Result<SolutionField> {
    grid.validate()?;
    if grid.t_final < T_MIN {
        return Err(Error::invalid(format!(
            "oracle comparisons need t_final ≥ {T_MIN}, got {}",
            grid.t_final
        )));
    }
    let width = default_dirac_width(grid);
    let coarse = fd_march(spec, grid, width)?;
    let fine_grid = grid.refined();
    let fine: Vec<f64> = fd_march(spec, &fine_grid, width)?
        .into_iter()
        .step_by(2)
        .collect();
    let estimate = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (c - f).abs())
        .fold(0.0, f64::max);
    let scale = fine.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if !estimate.is_finite() || estimate > scale.max(1.0) {
        return Err(Error::StabilityFailure(format!(
            "refinement estimate {estimate:e} exceeds the solution scale {scale:e}"
        )));
    }
    let uses_dirac = spec.data.iter().any(|d| d.kind == DataKind::Dirac);
    let mollification_error = uses_dirac.then(|| {
        // (w²/2)·max|N''| from the refined field
        let h = grid.h();
        let curv = fine
            .windows(3)
            .map(|w| ((w[0] - 2.0 * w[1] + w[2]) / (h * h)).abs())
            .fold(0.0, f64::max);
        0.5 * width * width * curv
    });
    Ok(SolutionField {
        x_grid: grid.nodes(),
        t: grid.t_final,
        values: fine,
        diagnostics: Diagnostics {
            discretization_error: Some(estimate),
            mollification_width: uses_dirac.then_some(width),
            mollification_error,
            ..Diagnostics::default()
        },
    })
}

/// Pointwise analytic-versus-FD comparison on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub x: Vec<f64>,
    pub analytic: Vec<f64>,
    pub fd: Vec<f64>,
    pub max_abs_err: f64,
    /// Refinement-based FD error estimate (sup norm).
    pub fd_estimate: f64,
    pub dirac_width: f64,
}

/// Same problem with every Dirac datum (and Dirac source profile) replaced by the Gaussian the FD run uses.
pub fn mollified(spec: &ProblemSpec, width: f64) -> ProblemSpec {
    let mut out = spec.clone();
    for d in &mut out.data {
        if d.kind == DataKind::Dirac {
            d.kind = DataKind::Gaussian { center: 0.0, width };
        }
    }
    if let SourceDescriptor::Separable { space, .. } = &mut out.source {
        if *space == DataKind::Dirac {
            *space = DataKind::Gaussian { center: 0.0, width };
        }
    }
    out
}

/// Runs [`solve_fd`] and the analytic solver on the mollified problem.
pub fn compare_analytic(
    spec: &ProblemSpec,
    grid: &GridSpec,
    cfg: &SolverConfig,
) -> Result<Comparison> {
    let fd = solve_fd(spec, grid)?;
    let width = default_dirac_width(grid);
    let smooth = mollified(spec, width);
    let analytic = if spec.time_op.is_two_term() {
        solve_t2(
            &smooth,
            &fd.x_grid,
            grid.t_final,
            cfg,
            KernelPath::PrabhakarSeries,
        )?
    } else {
        solve_t1(&smooth, &fd.x_grid, grid.t_final, cfg)?
    };
    let max_abs_err = analytic
        .values
        .iter()
        .zip(&fd.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Comparison {
        x: fd.x_grid,
        analytic: analytic.values,
        fd: fd.values,
        max_abs_err,
        fd_estimate: fd.diagnostics.discretization_error.unwrap_or(f64::INFINITY),
        dirac_width: width,
    })
}

//! Full solutions of the one- and two-term time-fractional problems.
//!
//! Each solution is assembled per wavenumber in Fourier space from the data
//! spectra, the Mittag-Leffler or two-term Laplace kernels and the source
//! convolution, then inverted with [`fourier_inverse_detailed`].

use crate::error::{Error, Result};
use crate::mlf::{mittag_leffler, MLParams};
use crate::quad::integrate;
use crate::series_sd::{sd_eval, SeriesParams, DEFAULT_BUDGET};
use crate::special::rgamma;
use crate::symbols::{effective_b, SpaceOperator};
use crate::transforms::{fourier_inverse_detailed, lt_kernel_two, QuadratureConfig};
use num_complex::Complex64;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

/// Left-hand side D^α N (+ a D^β N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeOperator {
    pub alpha: f64,
    pub beta: Option<f64>,
    pub a: Option<f64>,
}

impl TimeOperator {
    pub fn single(alpha: f64) -> Result<Self> {
        let op = TimeOperator {
            alpha,
            beta: None,
            a: None,
        };
        op.validate()?;
        Ok(op)
    }

    pub fn two_term(alpha: f64, beta: f64, a: f64) -> Result<Self> {
        let op = TimeOperator {
            alpha,
            beta: Some(beta),
            a: Some(a),
        };
        op.validate()?;
        Ok(op)
    }

    pub fn is_two_term(&self) -> bool {
        self.beta.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        match (self.beta, self.a) {
            (None, None) => {
                if !(self.alpha > 0.0 && self.alpha <= 2.0) {
                    return Err(Error::invalid(format!(
                        "alpha must lie in (0, 2], got {}",
                        self.alpha
                    )));
                }
            }
            (Some(beta), Some(a)) => {
                if !(1.0 < beta && beta < self.alpha && self.alpha <= 2.0) {
                    return Err(Error::invalid(format!(
                        "two-term operator needs 1 < beta < alpha <= 2, got alpha={}, beta={beta}",
                        self.alpha
                    )));
                }
                if !a.is_finite() {
                    return Err(Error::invalid("coefficient a must be finite"));
                }
            }
            _ => return Err(Error::invalid("beta and a must be given together")),
        }
        Ok(())
    }
}

/// Which initial condition a descriptor feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DataRole {
    F,
    G,
    F1,
    G1,
    F2,
    G2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataKind {
    Dirac,
    Gaussian {
        center: f64,
        width: f64,
    },
    Zero,
    /// Samples on a strictly increasing grid; transformed by the trapezoid rule.
    Tabulated {
        x: Vec<f64>,
        values: Vec<f64>,
    },
}

impl DataKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            DataKind::Gaussian { center, width } => {
                if !(*width > 0.0 && width.is_finite() && center.is_finite()) {
                    return Err(Error::invalid(format!(
                        "gaussian needs width > 0, got {width}"
                    )));
                }
            }
            DataKind::Tabulated { x, values } => {
                if x.len() < 2 || x.len() != values.len() {
                    return Err(Error::invalid(
                        "tabulated data needs ≥ 2 samples and matching lengths",
                    ));
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid("tabulated grid must be strictly increasing"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("tabulated values must be finite"));
                }
            }
            DataKind::Dirac | DataKind::Zero => {}
        }
        Ok(())
    }

    /// Total mass ∫ f dx.
    pub fn mass(&self) -> f64 {
        match self {
            DataKind::Dirac | DataKind::Gaussian { .. } => 1.0,
            DataKind::Zero => 0.0,
            DataKind::Tabulated { .. } => spectrum_of_kind(self, 0.0).re,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataDescriptor {
    pub kind: DataKind,
    pub role: DataRole,
}

impl DataDescriptor {
    pub fn new(kind: DataKind, role: DataRole) -> Self {
        DataDescriptor { kind, role }
    }
}

/// f*(k) = ∫ f(x) e^{ikx} dx.
pub fn spectrum_of(d: &DataDescriptor, k: f64) -> Result<Complex64> {
    d.kind.validate()?;
    Ok(spectrum_of_kind(&d.kind, k))
}

fn spectrum_of_kind(kind: &DataKind, k: f64) -> Complex64 {
    match kind {
        DataKind::Dirac => Complex64::new(1.0, 0.0),
        DataKind::Zero => Complex64::new(0.0, 0.0),
        DataKind::Gaussian { center, width } => {
            Complex64::from_polar((-0.5 * width * width * k * k).exp(), k * center)
        }
        DataKind::Tabulated { x, values } => {
            let n = x.len();
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let left = if i > 0 { x[i] - x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] - x[i] } else { 0.0 };
                acc += 0.5 * (left + right) * values[i] * Complex64::from_polar(1.0, k * x[i]);
            }
            acc
        }
    }
}

/// |f*(π/h)| / max(|f*(0)|, tiny) for tabulated data: the trapezoid spectrum
/// is periodic beyond the Nyquist wavenumber, so a large ratio signals aliasing.
pub fn aliasing_estimate(kind: &DataKind) -> Option<f64> {
    match kind {
        DataKind::Tabulated { x, .. } => {
            let h = x.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            let nyq = spectrum_of_kind(kind, std::f64::consts::PI / h).norm();
            Some(nyq / spectrum_of_kind(kind, 0.0).norm().max(f64::MIN_POSITIVE))
        }
        _ => None,
    }
}

/// Time factor of a separable source.
#[derive(Clone)]
pub enum TimeProfile {
    Constant(f64),
    /// e^{−rate·τ}
    Exponential {
        rate: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl TimeProfile {
    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            TimeProfile::Constant(c) => *c,
            TimeProfile::Exponential { rate } => (-rate * tau).exp(),
            TimeProfile::Custom(f) => f(tau),
        }
    }
}

impl fmt::Debug for TimeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeProfile::Constant(c) => write!(f, "Constant({c})"),
            TimeProfile::Exponential { rate } => write!(f, "Exponential {{ rate: {rate} }}"),
            TimeProfile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub enum SourceDescriptor {
    #[default]
    Zero,
    Separable {
        space: DataKind,
        time: TimeProfile,
    },
    /// values[i][j] = φ(x_j, times[i]); linear in time between samples.
    Tabulated {
        x: Vec<f64>,
        times: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

impl SourceDescriptor {
    pub fn is_zero(&self) -> bool {
        matches!(self, SourceDescriptor::Zero)
    }

    pub fn validate(&self, t_max: f64) -> Result<()> {
        match self {
            SourceDescriptor::Zero => Ok(()),
            SourceDescriptor::Separable { space, time } => {
                space.validate()?;
                for i in 0..=64 {
                    let v = time.eval(t_max * i as f64 / 64.0);
                    if !v.is_finite() {
                        return Err(Error::invalid(
                            "source time factor must be bounded on [0, t]",
                        ));
                    }
                }
                Ok(())
            }
            SourceDescriptor::Tabulated { x, times, values } => {
                if times.len() < 2 || times.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid(
                        "source times must be strictly increasing, ≥ 2 samples",
                    ));
                }
                if values.len() != times.len() {
                    return Err(Error::invalid("one source row per time sample required"));
                }
                if times[0] > 0.0 || *times.last().expect("non-empty") < t_max {
                    return Err(Error::invalid("source times must cover [0, t]"));
                }
                for row in values {
                    DataKind::Tabulated {
                        x: x.clone(),
                        values: row.clone(),
                    }
                    .validate()?;
                }
                Ok(())
            }
        }
    }

    /// φ*(k, τ).
    pub fn spectrum(&self, k: f64, tau: f64) -> Complex64 {
        match self {
            SourceDescriptor::Zero => Complex64::new(0.0, 0.0),
            SourceDescriptor::Separable { space, time } => {
                spectrum_of_kind(space, k) * time.eval(tau)
            }
            SourceDescriptor::Tabulated { x, times, values } => {
                let i = times
                    .partition_point(|&s| s <= tau)
                    .clamp(1, times.len() - 1);
                let w = ((tau - times[i - 1]) / (times[i] - times[i - 1])).clamp(0.0, 1.0);
                let row = |j: usize| {
                    spectrum_of_kind(
                        &DataKind::Tabulated {
                            x: x.clone(),
                            values: values[j].clone(),
                        },
                        k,
                    )
                };
                row(i - 1) * (1.0 - w) + row(i) * w
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub time_op: TimeOperator,
    pub space_op: SpaceOperator,
    pub data: Vec<DataDescriptor>,
    pub source: SourceDescriptor,
}

impl ProblemSpec {
    pub fn new(
        time_op: TimeOperator,
        space_op: SpaceOperator,
        data: Vec<DataDescriptor>,
        source: SourceDescriptor,
    ) -> Result<Self> {
        let spec = ProblemSpec {
            time_op,
            space_op,
            data,
            source,
        };
        spec.validate_structure()?;
        Ok(spec)
    }

    /// Single-term problem with f = Dirac (and g = 0 when α > 1).
    pub fn fundamental(alpha: f64, space_op: SpaceOperator) -> Result<Self> {
        let mut data = vec![DataDescriptor::new(DataKind::Dirac, DataRole::F)];
        if alpha > 1.0 {
            data.push(DataDescriptor::new(DataKind::Zero, DataRole::G));
        }
        ProblemSpec::new(
            TimeOperator::single(alpha)?,
            space_op,
            data,
            SourceDescriptor::Zero,
        )
    }

    fn validate_structure(&self) -> Result<()> {
        self.time_op.validate()?;
        for t in self.space_op.terms() {
            crate::symbols::validate(t)?;
        }
        let allowed: &[DataRole] = if self.time_op.is_two_term() {
            &[DataRole::F1, DataRole::G1, DataRole::F2, DataRole::G2]
        } else {
            &[DataRole::F, DataRole::G]
        };
        for (i, d) in self.data.iter().enumerate() {
            d.kind.validate()?;
            if !allowed.contains(&d.role) {
                return Err(Error::invalid(format!(
                    "data role {:?} does not belong to this time operator",
                    d.role
                )));
            }
            if self.data[..i].iter().any(|e| e.role == d.role) {
                return Err(Error::invalid(format!(
                    "data role {:?} given twice",
                    d.role
                )));
            }
        }
        if self.time_op.is_two_term() {
            if self.data_for(DataRole::F1).is_none() {
                return Err(Error::invalid("two-term problem needs f1 data"));
            }
        } else {
            if self.data_for(DataRole::F).is_none() {
                return Err(Error::invalid("problem needs f data"));
            }
            let has_g = self.data_for(DataRole::G).is_some();
            if self.time_op.alpha > 1.0 && !has_g {
                return Err(Error::invalid("alpha > 1 needs g data (use zero for none)"));
            }
            if self.time_op.alpha <= 1.0 && has_g {
                return Err(Error::invalid("alpha <= 1 admits no g data"));
            }
        }
        Ok(())
    }

    fn data_for(&self, role: DataRole) -> Option<&DataKind> {
        self.data.iter().find(|d| d.role == role).map(|d| &d.kind)
    }

    fn spectrum_for(&self, role: DataRole, k: f64) -> Complex64 {
        self.data_for(role)
            .map(|kind| spectrum_of_kind(kind, k))
            .unwrap_or_default()
    }

    fn mass_for(&self, role: DataRole) -> f64 {
        self.data_for(role).map(DataKind::mass).unwrap_or(0.0)
    }

    /// ∫ N(x, t) dx, the k = 0 mode of the spectrum.
    pub fn total_mass(&self, t: f64, cfg: &SolverConfig) -> Result<f64> {
        let op = self.time_op;
        let alpha = op.alpha;
        let (f_mass, g_mass) = match (op.beta, op.a) {
            (Some(_), Some(a)) => (
                self.mass_for(DataRole::F1) + a * self.mass_for(DataRole::F2),
                self.mass_for(DataRole::G1) + a * self.mass_for(DataRole::G2),
            ),
            _ => (self.mass_for(DataRole::F), self.mass_for(DataRole::G)),
        };
        let kernel = |rho: f64, tau: f64| -> Result<f64> {
            match (op.beta, op.a) {
                (Some(beta), Some(a)) => Ok(lt_kernel_two(
                    rho,
                    alpha,
                    beta,
                    a,
                    Complex64::new(0.0, 0.0),
                    tau,
                    cfg.tol,
                    cfg.r_max,
                )?
                .value
                .re),
                _ => Ok(tau.powf(alpha - rho) * rgamma(alpha - rho + 1.0)),
            }
        };
        let mut m = f_mass * kernel(1.0, t)?;
        if g_mass != 0.0 {
            m += g_mass * kernel(2.0, t)?;
        }
        if !self.source.is_zero() {
            let s = source_convolution(
                |k, tau| Ok(self.source.spectrum(k, tau)),
                0.0,
                |xi| Ok(Complex64::new(kernel(1.0, xi)? * xi.powf(1.0 - alpha), 0.0)),
                t,
                alpha,
                cfg,
            )?;
            m += s.re;
        }
        Ok(m)
    }
}

/// Numerical settings for the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub quad: QuadratureConfig,
    /// Tolerance for kernel evaluations.
    pub tol: f64,
    /// Term budget of the two-term kernel series.
    pub r_max: usize,
    /// Tolerance of the double-series path.
    pub sd_tol: f64,
    /// Bound on the imaginary part of the inverted field.
    pub imag_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            quad: QuadratureConfig::default(),
            tol: 1e-14,
            r_max: 400,
            sd_tol: 1e-12,
            imag_tol: 1e-8,
        }
    }
}

/// Kernel route of the two-term solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPath {
    PrabhakarSeries,
    SdSeries,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    /// Largest number of r-terms used by a two-term kernel.
    pub max_series_terms: usize,
    /// Wavenumbers where the double series could not reach sd_tol and the
    /// Prabhakar route was used instead.
    pub sd_fallbacks: usize,
    pub k_max: f64,
    pub nodes: usize,
    pub tail_estimate: f64,
    pub max_imag_residue: f64,
    /// Largest aliasing ratio among tabulated data, if any.
    pub aliasing: Option<f64>,
    /// FD only: discretization error estimate from one refinement (sup norm).
    pub discretization_error: Option<f64>,
    /// FD only: width of the Gaussian replacing Dirac data.
    pub mollification_width: Option<f64>,
    /// FD only: estimated effect of that mollification (sup norm).
    pub mollification_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub x_grid: Vec<f64>,
    pub t: f64,
    pub values: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// ∫₀ᵗ φ*(k, t−ξ) ξ^{α−1} K(ξ) dξ, with ξ = t·u^{1/α} absorbing the weight:
/// the integral becomes (t^α/α) ∫₀¹ φ*(k, t − t u^{1/α}) K(t u^{1/α}) du.
///
/// `kernel` is the regular factor K; the weight ξ^{α−1} is applied by the rule.
pub fn source_convolution<P, K>(
    phi_spectrum: P,
    k: f64,
    kernel: K,
    t: f64,
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<Complex64>
where
    P: Fn(f64, f64) -> Result<Complex64>,
    K: Fn(f64) -> Result<Complex64>,
{
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t must be > 0, got {t}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be > 0, got {alpha}")));
    }
    let inv = 1.0 / alpha;
    let r = integrate(
        |u| {
            let xi = t * u.powf(inv);
            let phi = phi_spectrum(k, t - xi)?;
            if phi == Complex64::new(0.0, 0.0) {
                return Ok(phi);
            }
            Ok(phi * kernel(xi)?)
        },
        0.0,
        1.0,
        1e-13,
        cfg.tol.max(1e-12),
        2000,
    )?;
    Ok(r.value * t.powf(alpha) * inv)
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("t must be > 0, got {t}")))
    }
}

fn check_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.is_empty() || x_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("x grid must be non-empty and finite"));
    }
    Ok(())
}

fn finish<F>(
    spec: &ProblemSpec,
    spectrum: F,
    x_grid: &[f64],
    t: f64,
    cfg: &SolverConfig,
) -> Result<SolutionField>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let inv = fourier_inverse_detailed(spectrum, x_grid, &cfg.quad)?;
    let max_imag = inv.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let scale = inv
        .values
        .iter()
        .map(|v| v.re.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    if max_imag > cfg.imag_tol * scale {
        return Err(Error::QuadratureFailure(format!(
            "imaginary residue {max_imag:e} above {:e}",
            cfg.imag_tol * scale
        )));
    }
    let aliasing = spec
        .data
        .iter()
        .filter_map(|d| aliasing_estimate(&d.kind))
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        });
    Ok(SolutionField {
        x_grid: x_grid.to_vec(),
        t,
        values: inv.values.iter().map(|v| v.re).collect(),
        diagnostics: Diagnostics {
            k_max: inv.k_max,
            nodes: inv.nodes,
            tail_estimate: inv.tail_estimate,
            max_imag_residue: max_imag,
            aliasing,
            ..Diagnostics::default()
        },
    })
}

/// Single-term problem D^α N = Σ μ_j D^{γ_j}_{θ_j} N + φ.
pub fn solve_t1(
    spec: &ProblemSpec,
    x_grid: &[f64],
    t: f64,
    cfg: &SolverConfig,
) -> Result<SolutionField> {
    spec.validate_structure()?;
    if spec.time_op.is_two_term() {
        return Err(Error::invalid("solve_t1 needs a single-term time operator"));
    }
    check_t(t)?;
    check_grid(x_grid)?;
    cfg.quad.validate()?;
    spec.source.validate(t)?;
    let alpha = spec.time_op.alpha;
    let p_f = MLParams::two(alpha, alpha)?;
    let p_g = MLParams::two(alpha, alpha - 1.0)?;
    let ta = t.powf(alpha);
    let has_g = spec
        .data_for(DataRole::G)
        .is_some_and(|g| *g != DataKind::Zero);

    let spectrum = |k: f64| -> Result<Complex64> {
        let b = effective_b(&spec.space_op, k);
        let fk = spec.spectrum_for(DataRole::F, k);
        let mut s = Complex64::new(0.0, 0.0);
        if fk != Complex64::new(0.0, 0.0) {
            s += t.powf(alpha - 1.0) * fk * mittag_leffler(&p_f, -b * ta, cfg.tol)?.value;
        }
        if has_g {
            let gk = spec.spectrum_for(DataRole::G, k);
            s += t.powf(alpha - 2.0) * gk * mittag_leffler(&p_g, -b * ta, cfg.tol)?.value;
        }
        if !spec.source.is_zero() {
            s += source_convolution(
                |k, tau| Ok(spec.source.spectrum(k, tau)),
                k,
                |xi| Ok(mittag_leffler(&p_f, -b * xi.powf(alpha), cfg.tol)?.value),
                t,
                alpha,
                cfg,
            )?;
        }
        Ok(s)
    };
    finish(spec, spectrum, x_grid, t, cfg)
}

/// Two-term problem D^α N + a D^β N = Σ μ_j D^{γ_j}_{θ_j} N + φ.
pub fn solve_t2(
    spec: &ProblemSpec,
    x_grid: &[f64],
    t: f64,
    cfg: &SolverConfig,
    path: KernelPath,
) -> Result<SolutionField> {
    spec.validate_structure()?;
    let (beta, a) = match (spec.time_op.beta, spec.time_op.a) {
        (Some(b), Some(a)) => (b, a),
        _ => return Err(Error::invalid("solve_t2 needs a two-term time operator")),
    };
    check_t(t)?;
    check_grid(x_grid)?;
    cfg.quad.validate()?;
    spec.source.validate(t)?;
    let alpha = spec.time_op.alpha;
    let max_terms = AtomicUsize::new(0);
    let fallbacks = AtomicUsize::new(0);

    let kernel = |rho: f64, b: Complex64, tau: f64| -> Result<Complex64> {
        let x = Complex64::new(-a * tau.powf(alpha - beta), 0.0);
        let y = -b * tau.powf(alpha);
        if path == KernelPath::SdSeries && !sd_hopeless(x, y, alpha, beta, cfg.sd_tol) {
            let p = SeriesParams::two_term_kernel(alpha, beta, rho);
            match sd_eval(&p, x, y, cfg.sd_tol, DEFAULT_BUDGET) {
                Ok(r) => return Ok(tau.powf(alpha - rho) * r.value),
                Err(Error::NonConvergence { .. }) => {
                    fallbacks.fetch_add(1, Ordering::Relaxed);
                }
                Err(e) => return Err(e),
            }
        }
        if path == KernelPath::SdSeries && sd_hopeless(x, y, alpha, beta, cfg.sd_tol) {
            fallbacks.fetch_add(1, Ordering::Relaxed);
        }
        let r = lt_kernel_two(rho, alpha, beta, a, b, tau, cfg.tol, cfg.r_max)?;
        max_terms.fetch_max(r.terms_used, Ordering::Relaxed);
        Ok(r.value)
    };
    let has_g = [DataRole::G1, DataRole::G2]
        .iter()
        .any(|r| spec.data_for(*r).is_some_and(|g| *g != DataKind::Zero));

    let spectrum = |k: f64| -> Result<Complex64> {
        let b = effective_b(&spec.space_op, k);
        let fk = spec.spectrum_for(DataRole::F1, k) + a * spec.spectrum_for(DataRole::F2, k);
        let mut s = Complex64::new(0.0, 0.0);
        if fk != Complex64::new(0.0, 0.0) {
            s += fk * kernel(1.0, b, t)?;
        }
        if has_g {
            let gk = spec.spectrum_for(DataRole::G1, k) + a * spec.spectrum_for(DataRole::G2, k);
            s += gk * kernel(2.0, b, t)?;
        }
        if !spec.source.is_zero() {
            s += source_convolution(
                |k, tau| Ok(spec.source.spectrum(k, tau)),
                k,
                |xi| Ok(kernel(1.0, b, xi)? * xi.powf(1.0 - alpha)),
                t,
                alpha,
                cfg,
            )?;
        }
        Ok(s)
    };
    let mut field = finish(spec, spectrum, x_grid, t, cfg)?;
    field.diagnostics.max_series_terms = max_terms.into_inner();
    field.diagnostics.sd_fallbacks = fallbacks.into_inner();
    Ok(field)
}

/// The largest kernel-series term grows like exp(|x|^{1/(α−β)} + |y|^{1/α});
/// past e³ times the rounding budget tol/(4 eps) the sum cannot meet tol.
fn sd_hopeless(x: Complex64, y: Complex64, alpha: f64, beta: f64, tol: f64) -> bool {
    let ln_peak = x.norm().powf(1.0 / (alpha - beta)) + y.norm().powf(1.0 / alpha);
    ln_peak > (tol / (4.0 * f64::EPSILON)).ln() + 3.0
}

/// Uniform grid lo, lo + h, …, hi with n points.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + h * i as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn heat(x: f64, t: f64, mu: f64) -> f64 {
        (-x * x / (4.0 * mu * t)).exp() / (4.0 * PI * mu * t).sqrt()
    }

    #[test]
    fn spectra_of_data() {
        let d = DataDescriptor::new(DataKind::Dirac, DataRole::F);
        assert_eq!(spectrum_of(&d, 3.7).unwrap(), Complex64::new(1.0, 0.0));
        let g = DataDescriptor::new(
            DataKind::Gaussian {
                center: 0.0,
                width: 0.3,
            },
            DataRole::F,
        );
        assert_eq!(spectrum_of(&g, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        let g = DataDescriptor::new(
            DataKind::Gaussian {
                center: 1.0,
                width: 1.0,
            },
            DataRole::F,
        );
        let v = spectrum_of(&g, PI).unwrap();
        let expect = Complex64::from_polar((-PI * PI / 2.0).exp(), PI);
        assert!((v - expect).norm() < 1e-16);
        let bad = DataDescriptor::new(
            DataKind::Gaussian {
                center: 0.0,
                width: 0.0,
            },
            DataRole::F,
        );
        assert!(spectrum_of(&bad, 1.0).unwrap_err().is_invalid_params());
    }

    #[test]
    fn tabulated_spectrum_matches_gaussian() {
        let x = linspace(-12.0, 12.0, 2401);
        let values: Vec<f64> = x
            .iter()
            .map(|x| (-x * x / 2.0).exp() / (2.0 * PI).sqrt())
            .collect();
        let kind = DataKind::Tabulated { x, values };
        for k in [0.0, 0.7, 2.0] {
            let v = spectrum_of_kind(&kind, k);
            assert!((v.re - (-k * k / 2.0f64).exp()).abs() < 1e-12);
        }
        assert!(aliasing_estimate(&kind).unwrap() < 1e-12);
    }

    #[test]
    fn source_convolution_examples() {
        let cfg = SolverConfig::default();
        let zero = source_convolution(
            |_, _| Ok(Complex64::default()),
            0.3,
            |_| Ok(Complex64::new(1.0, 0.0)),
            1.0,
            1.0,
            &cfg,
        );
        assert_eq!(zero.unwrap(), Complex64::default());
        let one = Complex64::new(1.0, 0.0);
        let v = source_convolution(|_, _| Ok(one), 0.0, |_| Ok(one), 2.5, 1.0, &cfg).unwrap();
        assert_relative_eq!(v.re, 2.5, max_relative = 1e-13);
        // α = 1, b = 2, φ* = e^{−τ}
        let p = MLParams::two(1.0, 1.0).unwrap();
        let v = source_convolution(
            |_, tau| Ok(Complex64::new((-tau).exp(), 0.0)),
            0.0,
            |xi| Ok(mittag_leffler(&p, Complex64::new(-2.0 * xi, 0.0), 1e-14)?.value),
            1.0,
            1.0,
            &cfg,
        )
        .unwrap();
        let expect = (-1.0f64).exp() - (-2.0f64).exp();
        assert_relative_eq!(v.re, expect, max_relative = 1e-12);
        assert!((v.re - 0.232_544_2).abs() < 1e-7);
    }

    #[test]
    fn weighted_rule_handles_small_alpha() {
        // ∫₀ᵗ ξ^{α−1} dξ = t^α/α exactly, for α near 0
        let cfg = SolverConfig::default();
        let one = Complex64::new(1.0, 0.0);
        for alpha in [0.05, 0.3, 1.7] {
            let v = source_convolution(|_, _| Ok(one), 0.0, |_| Ok(one), 1.3, alpha, &cfg).unwrap();
            assert_relative_eq!(v.re, 1.3f64.powf(alpha) / alpha, max_relative = 1e-13);
        }
    }

    #[test]
    fn heat_kernel_limit() {
        let spec =
            ProblemSpec::fundamental(1.0, SpaceOperator::single(1.0, 2.0, 0.0).unwrap()).unwrap();
        let xs = linspace(-5.0, 5.0, 41);
        let f = solve_t1(&spec, &xs, 1.0, &SolverConfig::default()).unwrap();
        for (x, v) in xs.iter().zip(&f.values) {
            assert!((v - heat(*x, 1.0, 1.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn regime_rules_for_g_data() {
        let op = SpaceOperator::single(1.0, 2.0, 0.0).unwrap();
        let f = DataDescriptor::new(DataKind::Dirac, DataRole::F);
        let g = DataDescriptor::new(DataKind::Zero, DataRole::G);
        let t1 = TimeOperator::single(0.8).unwrap();
        assert!(ProblemSpec::new(
            t1,
            op.clone(),
            vec![f.clone(), g.clone()],
            SourceDescriptor::Zero
        )
        .is_err());
        let t1 = TimeOperator::single(1.5).unwrap();
        assert!(ProblemSpec::new(t1, op.clone(), vec![f.clone()], SourceDescriptor::Zero).is_err());
        assert!(
            ProblemSpec::new(t1, op.clone(), vec![f.clone(), g], SourceDescriptor::Zero).is_ok()
        );
        let f1 = DataDescriptor::new(DataKind::Dirac, DataRole::F1);
        assert!(ProblemSpec::new(t1, op.clone(), vec![f1], SourceDescriptor::Zero).is_err());
        assert!(TimeOperator::two_term(1.5, 1.5, 0.1).is_err());
        assert!(TimeOperator::two_term(1.5, 1.7, 0.1).is_err());
        assert!(TimeOperator::single(2.5).is_err());
    }

    #[test]
    fn source_with_g_data_and_mass() {
        // α = 1.5 with Gaussian f and g and a decaying source; the k = 0 mode
        // of the field must equal the analytic mass.
        let op = SpaceOperator::single(0.7, 2.0, 0.0).unwrap();
        let data = vec![
            DataDescriptor::new(
                DataKind::Gaussian {
                    center: 0.5,
                    width: 0.4,
                },
                DataRole::F,
            ),
            DataDescriptor::new(
                DataKind::Gaussian {
                    center: -0.5,
                    width: 0.6,
                },
                DataRole::G,
            ),
        ];
        let source = SourceDescriptor::Separable {
            space: DataKind::Gaussian {
                center: 0.0,
                width: 0.5,
            },
            time: TimeProfile::Exponential { rate: 1.0 },
        };
        let spec = ProblemSpec::new(TimeOperator::single(1.5).unwrap(), op, data, source).unwrap();
        let cfg = SolverConfig::default();
        let t = 1.2;
        let mass = spec.total_mass(t, &cfg).unwrap();
        // t^{1/2}/Γ(3/2) + t^{−1/2}/Γ(1/2) + ∫₀ᵗ e^{−(t−ξ)} ξ^{1/2}/Γ(3/2) dξ
        let g32 = crate::special::gamma(1.5);
        let direct = crate::quad::integrate_real(
            |xi| Ok((-(t - xi)).exp() * xi.sqrt() / g32),
            0.0,
            t,
            1e-15,
            1e-14,
            200,
        )
        .unwrap()
        .0;
        let expect = t.sqrt() / g32 + 1.0 / (t.sqrt() * PI.sqrt()) + direct;
        assert_relative_eq!(mass, expect, max_relative = 1e-11);
        let xs = linspace(-30.0, 30.0, 1201);
        let field = solve_t1(&spec, &xs, t, &cfg).unwrap();
        let h = xs[1] - xs[0];
        let integral: f64 = field.values.iter().sum::<f64>() * h;
        assert_relative_eq!(integral, mass, max_relative = 1e-8);
    }

    #[test]
    fn two_term_reduces_at_zero_coupling() {
        let op = SpaceOperator::single(1.0, 1.6, 0.0).unwrap();
        let t1 = ProblemSpec::fundamental(1.7, op.clone()).unwrap();
        let t2 = ProblemSpec::new(
            TimeOperator::two_term(1.7, 1.3, 0.0).unwrap(),
            op,
            vec![DataDescriptor::new(DataKind::Dirac, DataRole::F1)],
            SourceDescriptor::Zero,
        )
        .unwrap();
        let xs = linspace(-3.0, 3.0, 13);
        let cfg = SolverConfig::default();
        let a = solve_t1(&t1, &xs, 0.8, &cfg).unwrap();
        let b = solve_t2(&t2, &xs, 0.8, &cfg, KernelPath::PrabhakarSeries).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}

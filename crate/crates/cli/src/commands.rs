use crate::params::Params;
use fracsol::hfun::green_h_form_with;
use fracsol::oracle_fd::{compare_analytic, GridSpec};
use fracsol::series_sd::{direct_double_sum, sd_eval, SeriesParams, DEFAULT_BUDGET};
use fracsol::solvers::{
    solve_t1, solve_t2, DataDescriptor, DataKind, DataRole, Diagnostics, KernelPath, ProblemSpec,
    SolutionField, SolverConfig, TimeOperator,
};
use fracsol::special::rgamma;
use fracsol::symbols::effective_b;
use fracsol::transforms::{fourier_inverse, QuadratureConfig};
use fracsol::{mittag_leffler, prabhakar, Complex64, Error, MLParams, Result};

/// CSV table plus `#` diagnostic lines.
#[derive(Debug, Default)]
pub struct Output {
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    notes: Vec<String>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Output {
    fn new(header: &[&'static str]) -> Self {
        Output {
            header: header.to_vec(),
            ..Output::default()
        }
    }

    fn row(&mut self, r: Vec<f64>) {
        debug_assert_eq!(r.len(), self.header.len());
        self.rows.push(r);
    }

    fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.notes.push(format!("# {key}={value}"));
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| num(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for n in &self.notes {
            s.push_str(n);
            s.push('\n');
        }
        s
    }
}

/// Parameter keys accepted by each command.
pub const COMMANDS: &[(&str, &str, &[&str])] = &[
    (
        "ml",
        "Mittag-Leffler function E_{α,β}(z)",
        &["alpha", "beta", "z", "tol"],
    ),
    (
        "prabhakar",
        "Prabhakar function E^γ_{α,β}(z)",
        &["alpha", "beta", "gamma", "z", "tol"],
    ),
    (
        "symbol",
        "operator symbol b(k) = Σ μ ψ(k)",
        &["terms", "kgrid"],
    ),
    (
        "green",
        "fundamental solution through its H-function form",
        &[
            "alpha",
            "gamma",
            "theta",
            "mu",
            "t",
            "xgrid",
            "nodes-per-unit",
        ],
    ),
    (
        "solve1",
        "single-term problem by Fourier inversion",
        &[
            "alpha", "terms", "data", "g", "source", "t", "xgrid", "tail-tol",
        ],
    ),
    (
        "solve2",
        "two-term problem by Fourier inversion",
        &[
            "alpha", "beta", "a", "terms", "f1", "g1", "f2", "g2", "source", "t", "xgrid", "path",
            "tail-tol",
        ],
    ),
    (
        "hcheck",
        "H-function form against the Fourier route",
        &["alpha", "gamma", "theta", "mu", "t", "xgrid"],
    ),
    (
        "oracle-compare",
        "analytic solution against the finite-difference oracle",
        &[
            "alpha", "beta", "a", "terms", "t", "nx", "nt", "xmin", "xmax",
        ],
    ),
    (
        "sd-eval",
        "one-upper double series against its direct sum",
        &["c", "delta", "eps", "x", "y", "tol", "budget"],
    ),
];

pub fn run(command: &str, p: &Params) -> Result<Output> {
    match command {
        "ml" => ml(p),
        "prabhakar" => prab(p),
        "symbol" => symbol(p),
        "green" => green(p),
        "solve1" => solve1(p),
        "solve2" => solve2(p),
        "hcheck" => hcheck(p),
        "oracle-compare" => oracle_compare(p),
        "sd-eval" => sd(p),
        other => Err(Error::InvalidParams(format!("unknown command {other}"))),
    }
}

fn ml(p: &Params) -> Result<Output> {
    let (alpha, beta) = (p.f64("alpha")?, p.f64("beta")?);
    let z = p.complex("z")?;
    let r = mittag_leffler(&MLParams::two(alpha, beta)?, z, p.f64_or("tol", 1e-14)?)?;
    let mut out = Output::new(&[
        "alpha",
        "beta",
        "z_re",
        "z_im",
        "value_re",
        "value_im",
        "est_error",
    ]);
    out.row(vec![
        alpha,
        beta,
        z.re,
        z.im,
        r.value.re,
        r.value.im,
        r.est_error,
    ]);
    out.note("route", format!("{:?}", r.route));
    out.note("terms_used", r.terms_used);
    Ok(out)
}

fn prab(p: &Params) -> Result<Output> {
    let (alpha, beta, gamma) = (p.f64("alpha")?, p.f64("beta")?, p.f64("gamma")?);
    let z = p.complex("z")?;
    let r = prabhakar(
        &MLParams::new(alpha, beta, gamma)?,
        z,
        p.f64_or("tol", 1e-14)?,
    )?;
    let mut out = Output::new(&[
        "alpha",
        "beta",
        "gamma",
        "z_re",
        "z_im",
        "value_re",
        "value_im",
        "est_error",
    ]);
    out.row(vec![
        alpha,
        beta,
        gamma,
        z.re,
        z.im,
        r.value.re,
        r.value.im,
        r.est_error,
    ]);
    out.note("route", format!("{:?}", r.route));
    out.note("terms_used", r.terms_used);
    Ok(out)
}

fn symbol(p: &Params) -> Result<Output> {
    let op = p.terms("terms")?;
    let mut out = Output::new(&["k", "b_re", "b_im"]);
    for k in p.grid("kgrid")? {
        let b = effective_b(&op, k);
        out.row(vec![k, b.re, b.im]);
    }
    Ok(out)
}

fn quad_cfg(p: &Params) -> Result<QuadratureConfig> {
    let d = QuadratureConfig::default();
    let cfg = QuadratureConfig {
        tail_tol: p.f64_or("tail-tol", d.tail_tol)?,
        nodes_per_unit: p.usize_or("nodes-per-unit", d.nodes_per_unit)?,
        ..d
    };
    cfg.validate()?;
    Ok(cfg)
}

fn kernel_params(p: &Params) -> Result<(f64, f64, f64, f64, f64)> {
    Ok((
        p.f64("alpha")?,
        p.f64("gamma")?,
        p.f64_or("theta", 0.0)?,
        p.f64_or("mu", 1.0)?,
        p.f64("t")?,
    ))
}

fn green(p: &Params) -> Result<Output> {
    let (alpha, gamma, theta, mu, t) = kernel_params(p)?;
    let cfg = quad_cfg(p)?;
    let mut out = Output::new(&["x", "value"]);
    let mut skipped = 0;
    for x in p.grid("xgrid")? {
        if x == 0.0 {
            skipped += 1;
            continue;
        }
        out.row(vec![
            x,
            green_h_form_with(x, t, alpha, gamma, theta, mu, &cfg)?,
        ]);
    }
    if skipped > 0 {
        out.note("skipped_x_zero", skipped);
    }
    Ok(out)
}

fn fourier_green(
    xs: &[f64],
    alpha: f64,
    gamma: f64,
    theta: f64,
    mu: f64,
    t: f64,
) -> Result<Vec<f64>> {
    let ml = MLParams::two(alpha, alpha)?;
    let ta = t.powf(alpha);
    let v = fourier_inverse(
        |k| {
            let b = mu * fracsol::symbols::psi(gamma, theta, k)?;
            Ok(mittag_leffler(&ml, -b * ta, 1e-14)?.value)
        },
        xs,
        &QuadratureConfig::default(),
    )?;
    Ok(v.iter().map(|v| t.powf(alpha - 1.0) * v.re).collect())
}

fn hcheck(p: &Params) -> Result<Output> {
    let (alpha, gamma, theta, mu, t) = kernel_params(p)?;
    let xs: Vec<f64> = p.grid("xgrid")?.into_iter().filter(|x| *x != 0.0).collect();
    let f = fourier_green(&xs, alpha, gamma, theta, mu, t)?;
    let mut out = Output::new(&["x", "h_form", "fourier", "rel_err"]);
    let mut worst: f64 = 0.0;
    for (x, fv) in xs.iter().zip(&f) {
        let h = green_h_form_with(*x, t, alpha, gamma, theta, mu, &QuadratureConfig::default())?;
        let rel = (h - fv).abs() / fv.abs().max(f64::MIN_POSITIVE);
        if fv.abs() > 1e-8 {
            worst = worst.max(rel);
        }
        out.row(vec![*x, h, *fv, rel]);
    }
    out.note("max_rel_err", num(worst));
    Ok(out)
}

fn solver_cfg(p: &Params) -> Result<SolverConfig> {
    Ok(SolverConfig {
        quad: quad_cfg(p)?,
        ..SolverConfig::default()
    })
}

fn field_output(field: &SolutionField) -> Output {
    let mut out = Output::new(&["x", "value"]);
    for (x, v) in field.x_grid.iter().zip(&field.values) {
        out.row(vec![*x, *v]);
    }
    diagnostics(&mut out, &field.diagnostics);
    out
}

fn diagnostics(out: &mut Output, d: &Diagnostics) {
    out.note("k_max", num(d.k_max));
    out.note("nodes", d.nodes);
    out.note("tail_estimate", num(d.tail_estimate));
    out.note("max_imag_residue", num(d.max_imag_residue));
    if d.max_series_terms > 0 {
        out.note("max_series_terms", d.max_series_terms);
    }
    if d.sd_fallbacks > 0 {
        out.note("sd_fallbacks", d.sd_fallbacks);
    }
    if let Some(a) = d.aliasing {
        out.note("aliasing", num(a));
    }
}

fn solve1(p: &Params) -> Result<Output> {
    let alpha = p.f64("alpha")?;
    let mut data = vec![DataDescriptor::new(p.data("data", "dirac")?, DataRole::F)];
    if alpha > 1.0 || p.has("g") {
        data.push(DataDescriptor::new(p.data("g", "zero")?, DataRole::G));
    }
    let spec = ProblemSpec::new(
        TimeOperator::single(alpha)?,
        p.terms("terms")?,
        data,
        p.source("source")?,
    )?;
    let field = solve_t1(&spec, &p.grid("xgrid")?, p.f64("t")?, &solver_cfg(p)?)?;
    Ok(field_output(&field))
}

fn solve2(p: &Params) -> Result<Output> {
    let op = TimeOperator::two_term(p.f64("alpha")?, p.f64("beta")?, p.f64("a")?)?;
    let mut data = vec![DataDescriptor::new(p.data("f1", "dirac")?, DataRole::F1)];
    for (key, role) in [
        ("g1", DataRole::G1),
        ("f2", DataRole::F2),
        ("g2", DataRole::G2),
    ] {
        let kind = p.data(key, "zero")?;
        if kind != DataKind::Zero {
            data.push(DataDescriptor::new(kind, role));
        }
    }
    let path = match p.str_or("path", "prabhakar") {
        "prabhakar" => KernelPath::PrabhakarSeries,
        "sd" => KernelPath::SdSeries,
        other => {
            return Err(Error::InvalidParams(format!(
                "--path: expected prabhakar or sd, got {other:?}"
            )))
        }
    };
    let spec = ProblemSpec::new(op, p.terms("terms")?, data, p.source("source")?)?;
    let field = solve_t2(&spec, &p.grid("xgrid")?, p.f64("t")?, &solver_cfg(p)?, path)?;
    Ok(field_output(&field))
}

fn oracle_compare(p: &Params) -> Result<Output> {
    let alpha = p.f64("alpha")?;
    let space = p.terms("terms")?;
    let spec = if p.has("beta") || p.has("a") {
        let op = TimeOperator::two_term(alpha, p.f64("beta")?, p.f64("a")?)?;
        ProblemSpec::new(
            op,
            space,
            vec![DataDescriptor::new(DataKind::Dirac, DataRole::F1)],
            Default::default(),
        )?
    } else {
        ProblemSpec::fundamental(alpha, space)?
    };
    let grid = GridSpec {
        x_min: p.f64_or("xmin", -40.0)?,
        x_max: p.f64_or("xmax", 40.0)?,
        nx: p.usize_or("nx", 257)?,
        nt: p.usize_or("nt", 512)?,
        t_final: p.f64("t")?,
    };
    let c = compare_analytic(&spec, &grid, &SolverConfig::default())?;
    let mut out = Output::new(&["x", "analytic", "fd", "abs_err"]);
    for i in 0..c.x.len() {
        out.row(vec![
            c.x[i],
            c.analytic[i],
            c.fd[i],
            (c.analytic[i] - c.fd[i]).abs(),
        ]);
    }
    out.note("dirac_width", num(c.dirac_width));
    out.note("fd_error_estimate", num(c.fd_estimate));
    out.note("max_abs_err", num(c.max_abs_err));
    Ok(out)
}

fn sd(p: &Params) -> Result<Output> {
    let (c, delta, eps) = (p.f64("c")?, p.f64("delta")?, p.f64("eps")?);
    let (x, y) = (p.complex("x")?, p.complex("y")?);
    let tol = p.f64_or("tol", 1e-12)?;
    let r = sd_eval(
        &SeriesParams::one_upper(c, delta, eps),
        x,
        y,
        tol,
        p.usize_or("budget", DEFAULT_BUDGET)?,
    )?;
    let direct: Complex64 = direct_double_sum(c, delta, eps, x, y, tol)? * rgamma(c);
    let mut out = Output::new(&[
        "value_re",
        "value_im",
        "est_error",
        "terms",
        "direct_re",
        "direct_im",
    ]);
    out.row(vec![
        r.value.re,
        r.value.im,
        r.est_error,
        r.terms_used as f64,
        direct.re,
        direct.im,
    ]);
    Ok(out)
}

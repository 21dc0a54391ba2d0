use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fracsol::hfun::{fundamental_params, h_eval, rho};
use fracsol::oracle_fd::{default_dirac_width, fd_march, GridSpec};
use fracsol::series_sd::{sd_eval, SeriesParams, DEFAULT_BUDGET};
use fracsol::solvers::{
    solve_t2, DataDescriptor, DataKind, DataRole, KernelPath, ProblemSpec, SolverConfig,
    TimeOperator,
};
use fracsol::symbols::SpaceOperator;
use fracsol::transforms::{fourier_inverse, lt_kernel_two, QuadratureConfig};
use fracsol::{mittag_leffler, prabhakar, Complex64, MLParams};

fn mittag_leffler_routes(c: &mut Criterion) {
    let p = MLParams::two(0.8, 1.2).unwrap();
    for (name, z) in [
        ("series", Complex64::new(-1.5, 0.3)),
        ("asymptotic", Complex64::new(-40.0, 0.0)),
        ("contour", Complex64::new(-6.0, 2.0)),
    ] {
        c.bench_function(&format!("mittag_leffler/{name}"), |b| {
            b.iter(|| mittag_leffler(&p, black_box(z), 1e-14).unwrap())
        });
    }
    let q = MLParams::new(1.1, 1.3, 3.0).unwrap();
    c.bench_function("prabhakar/gamma3", |b| {
        b.iter(|| prabhakar(&q, black_box(Complex64::new(-4.0, 0.5)), 1e-14).unwrap())
    });
}

fn transforms(c: &mut Criterion) {
    let ml = MLParams::two(0.9, 0.9).unwrap();
    let xs: Vec<f64> = (0..101).map(|i| -5.0 + 0.1 * i as f64).collect();
    let cfg = QuadratureConfig::default();
    c.bench_function("fourier_inverse/green_101", |b| {
        b.iter(|| {
            fourier_inverse(
                |k| Ok(mittag_leffler(&ml, Complex64::new(-k.abs().powf(1.5), 0.0), 1e-14)?.value),
                black_box(&xs),
                &cfg,
            )
            .unwrap()
        })
    });
    c.bench_function("lt_kernel_two", |b| {
        b.iter(|| {
            lt_kernel_two(
                1.0,
                1.8,
                1.2,
                0.5,
                black_box(Complex64::new(2.0, 0.0)),
                1.0,
                1e-14,
                400,
            )
            .unwrap()
        })
    });
}

fn special_functions(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let hp = fundamental_params(0.9, 1.5, rho(1.5, 0.0, 1.0)).unwrap();
    c.bench_function("h_eval/green", |b| {
        b.iter(|| h_eval(&hp, black_box(0.7), &cfg).unwrap())
    });
    let sp = SeriesParams::two_term_kernel(1.8, 1.2, 1.0);
    c.bench_function("sd_eval/two_term_kernel", |b| {
        b.iter(|| {
            sd_eval(
                &sp,
                black_box(Complex64::new(-0.5, 0.0)),
                Complex64::new(-2.0, 0.0),
                1e-12,
                DEFAULT_BUDGET,
            )
            .unwrap()
        })
    });
}

fn solvers(c: &mut Criterion) {
    let spec = ProblemSpec::new(
        TimeOperator::two_term(1.8, 1.2, 0.5).unwrap(),
        SpaceOperator::single(1.0, 2.0, 0.0).unwrap(),
        vec![DataDescriptor::new(
            DataKind::Gaussian {
                center: 0.0,
                width: 0.5,
            },
            DataRole::F1,
        )],
        Default::default(),
    )
    .unwrap();
    let xs: Vec<f64> = (0..41).map(|i| -4.0 + 0.2 * i as f64).collect();
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("solvers");
    g.sample_size(10);
    g.bench_function("solve_t2/sd_41", |b| {
        b.iter(|| solve_t2(&spec, black_box(&xs), 1.0, &cfg, KernelPath::SdSeries).unwrap())
    });
    let grid = GridSpec {
        x_min: -10.0,
        x_max: 10.0,
        nx: 129,
        nt: 64,
        t_final: 1.0,
    };
    g.bench_function("fd_march/129x64", |b| {
        b.iter(|| fd_march(&spec, black_box(&grid), default_dirac_width(&grid)).unwrap())
    });
    g.finish();
}

criterion_group!(
    benches,
    mittag_leffler_routes,
    transforms,
    special_functions,
    solvers
);
criterion_main!(benches);

use fracsol::solvers::{
    linspace, solve_t1, solve_t2, DataDescriptor, DataKind, DataRole, KernelPath, ProblemSpec,
    SolverConfig, SourceDescriptor, TimeOperator, TimeProfile,
};
use fracsol::special::rgamma;
use fracsol::symbols::SpaceOperator;
use proptest::prelude::*;

fn gaussian(center: f64, width: f64) -> DataKind {
    DataKind::Gaussian { center, width }
}

fn single_term(
    alpha: f64,
    space: SpaceOperator,
    f: DataKind,
    g: DataKind,
    source: SourceDescriptor,
) -> ProblemSpec {
    let mut data = vec![DataDescriptor::new(f, DataRole::F)];
    if alpha > 1.0 {
        data.push(DataDescriptor::new(g, DataRole::G));
    }
    ProblemSpec::new(TimeOperator::single(alpha).unwrap(), space, data, source).unwrap()
}

/// ∫₀ᵗ ξ^{α−1} e^{−r(t−ξ)} dξ = e^{−rt} Σ_n rⁿ t^{α+n} / (n! (α+n)).
fn exp_source_weight(alpha: f64, rate: f64, t: f64) -> f64 {
    let (mut term, mut sum) = (t.powf(alpha), 0.0);
    for n in 0..200 {
        sum += term / (alpha + n as f64);
        term *= rate * t / (n as f64 + 1.0);
    }
    (-rate * t).exp() * sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn symmetric_problems_give_even_real_fields(
        alpha in 0.3f64..2.0, g in 0.6f64..2.0, mu in 0.2f64..2.0, w in 0.2f64..1.5, t in 0.2f64..3.0,
    ) {
        let spec = single_term(
            alpha,
            SpaceOperator::single(mu, g, 0.0).unwrap(),
            gaussian(0.0, w),
            gaussian(0.0, 2.0 * w),
            SourceDescriptor::Zero,
        );
        let xs = linspace(-4.0, 4.0, 41);
        let f = solve_t1(&spec, &xs, t, &SolverConfig::default()).unwrap();
        let scale = f.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..xs.len() {
            prop_assert!((f.values[i] - f.values[xs.len() - 1 - i]).abs() <= 1e-12 * scale.max(1.0));
        }
        prop_assert!(f.diagnostics.max_imag_residue <= SolverConfig::default().imag_tol);
    }

    #[test]
    fn integrated_field_obeys_mass_law(
        alpha in 0.5f64..1.9, mu in 0.3f64..1.5, c in -1.0f64..1.0, w in 0.3f64..1.0,
        rate in 0.0f64..2.0, t in 0.5f64..1.5,
    ) {
        // γ = 2 keeps the field light-tailed, so a finite window holds all the mass
        let spec = single_term(
            alpha,
            SpaceOperator::single(mu, 2.0, 0.0).unwrap(),
            gaussian(c, w),
            gaussian(-c, w),
            SourceDescriptor::Separable { space: gaussian(0.5, 0.4), time: TimeProfile::Exponential { rate } },
        );
        let xs = linspace(-30.0, 30.0, 1201);
        let f = solve_t1(&spec, &xs, t, &SolverConfig::default()).unwrap();
        let h = xs[1] - xs[0];
        let integral: f64 = h * (f.values.iter().sum::<f64>() - 0.5 * (f.values[0] + f.values[xs.len() - 1]));
        let mut expect = t.powf(alpha - 1.0) * rgamma(alpha) + rgamma(alpha) * exp_source_weight(alpha, rate, t);
        if alpha > 1.0 {
            expect += t.powf(alpha - 2.0) * rgamma(alpha - 1.0);
        }
        prop_assert!((integral - expect).abs() <= 1e-5, "{integral} vs {expect}");
        let analytic = spec.total_mass(t, &SolverConfig::default()).unwrap();
        prop_assert!((analytic - expect).abs() <= 1e-8, "{analytic} vs {expect}");
    }

    #[test]
    fn two_term_problem_is_continuous_as_a_vanishes(
        beta in 1.05f64..1.6, gap in 0.1f64..0.4, g in 1.0f64..2.0, t in 0.3f64..2.0,
    ) {
        let alpha = beta + gap;
        let space = SpaceOperator::single(1.0, g, 0.0).unwrap();
        let make = |a: f64| ProblemSpec::new(
            TimeOperator::two_term(alpha, beta, a).unwrap(),
            space.clone(),
            vec![
                DataDescriptor::new(gaussian(0.0, 0.5), DataRole::F1),
                DataDescriptor::new(gaussian(0.3, 0.7), DataRole::F2),
                DataDescriptor::new(gaussian(0.0, 0.6), DataRole::G1),
            ],
            SourceDescriptor::Zero,
        ).unwrap();
        let xs = linspace(-3.0, 3.0, 25);
        let cfg = SolverConfig::default();
        let u = solve_t2(&make(0.0), &xs, t, &cfg, KernelPath::PrabhakarSeries).unwrap();
        let v = solve_t2(&make(1e-8), &xs, t, &cfg, KernelPath::PrabhakarSeries).unwrap();
        let gap = u.values.iter().zip(&v.values).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(gap > 0.0 && gap <= 1e-7, "{gap:e}");
    }
}

use fracsol::series_sd::{direct_double_sum, sd_eval, SeriesParams, DEFAULT_BUDGET};
use fracsol::special::gamma;
use fracsol::transforms::lt_kernel_two;
use fracsol::{Complex64, Error};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

fn disk(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r, -std::f64::consts::PI..std::f64::consts::PI)
        .prop_map(|(m, a)| Complex64::from_polar(m, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn one_upper_series_matches_direct_sum(a in 0.2f64..3.0, al in 0.5f64..2.0, be in 0.5f64..2.0, x in disk(2.0), y in disk(2.0)) {
        // heavy cancellation is reported rather than returned
        let s = match sd_eval(&SeriesParams::one_upper(a, al, be), x, y, 1e-12, DEFAULT_BUDGET) {
            Err(Error::NonConvergence { .. }) => return Err(TestCaseError::reject("cancellation")),
            r => r.unwrap(),
        };
        let d = direct_double_sum(a, al, be, x, y, 1e-14).unwrap();
        let lhs = gamma(a) * s.value;
        prop_assert!((lhs - d).norm() <= 1e-10 * d.norm().max(1.0), "{lhs} vs {d}");
    }

    #[test]
    fn swap_symmetry(a in 0.2f64..3.0, e in 0.5f64..2.0, x in disk(2.0), y in disk(2.0)) {
        // symmetric block: δ = ε
        let p = SeriesParams::one_upper(a, e, e);
        let u = sd_eval(&p, x, y, 1e-9, DEFAULT_BUDGET).unwrap();
        let v = sd_eval(&p.swapped(), y, x, 1e-9, DEFAULT_BUDGET).unwrap();
        let gap = (u.value - v.value).norm();
        prop_assert!(gap <= u.est_error + v.est_error + 1e-13 * u.value.norm().max(1.0), "{gap:e}");
    }

    #[test]
    fn kernel_identity(beta in 1.0f64..1.8, gap in 0.1f64..1.0, rho in prop::sample::select(vec![1.0, 2.0]),
                       a in -1.0f64..1.0, b in 0.0f64..3.0, t in 0.2f64..1.5) {
        let alpha = (beta + gap).min(2.0);
        prop_assume!(alpha > beta);
        let p = SeriesParams::two_term_kernel(alpha, beta, rho);
        let x = Complex64::new(-a * t.powf(alpha - beta), 0.0);
        let y = Complex64::new(-b * t.powf(alpha), 0.0);
        let s = sd_eval(&p, x, y, 1e-9, DEFAULT_BUDGET).unwrap().value * t.powf(alpha - rho);
        let k = lt_kernel_two(rho, alpha, beta, a, Complex64::new(b, 0.0), t, 1e-14, 2000).unwrap().value;
        prop_assert!((s - k).norm() <= 1e-8 * k.norm().max(1.0), "{s} vs {k}");
    }
}

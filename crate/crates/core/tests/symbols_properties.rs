use fracsol::symbols::{effective_b, psi, SpaceOperator, SpaceOperatorTerm};
use proptest::prelude::*;

fn term() -> impl Strategy<Value = SpaceOperatorTerm> {
    (0.01f64..5.0, 0.05f64..=2.0, -1.0f64..=1.0).prop_map(|(mu, g, s)| {
        let theta = s * g.min(2.0 - g);
        SpaceOperatorTerm::new(mu, g, theta).unwrap()
    })
}

proptest! {
    #[test]
    fn conjugate_symmetry(t in term(), k in -50.0f64..50.0) {
        let a = psi(t.gamma_order, t.theta, -k).unwrap();
        let b = psi(t.gamma_order, t.theta, k).unwrap().conj();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn nonnegative_dissipation(terms in prop::collection::vec(term(), 1..5), k in -50.0f64..50.0) {
        let op = SpaceOperator::new(terms).unwrap();
        let b = effective_b(&op, k);
        if k == 0.0 {
            prop_assert_eq!(b.re, 0.0);
        } else {
            prop_assert!(b.re >= 0.0);
            // |θ| < min(γ, 2−γ) strictly keeps cos(θπ/2) > 0
            if op.terms().iter().any(|t| t.theta.abs() < t.gamma_order.min(2.0 - t.gamma_order)) {
                prop_assert!(b.re > 0.0);
            }
        }
    }

    #[test]
    fn symmetric_symbol_is_real_power(g in 0.05f64..=2.0, k in -50.0f64..50.0) {
        let v = psi(g, 0.0, k).unwrap();
        prop_assert_eq!(v.im, 0.0);
        prop_assert_eq!(v.re, if k == 0.0 { 0.0 } else { k.abs().powf(g) });
    }

    #[test]
    fn invalid_skewness_rejected(g in 0.05f64..1.95, excess in 1e-6f64..0.5) {
        let theta = g.min(2.0 - g) + excess;
        prop_assert!(SpaceOperatorTerm::new(1.0, g, theta).unwrap_err().is_invalid_params());
        prop_assert!(psi(g, -theta, 1.0).is_err());
    }
}

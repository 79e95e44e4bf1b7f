use num_complex::Complex64;
use proptest::prelude::*;

use lemlab_core::Polynomial;

type C = Complex64;

fn point(lim: f64) -> impl Strategy<Value = C> {
    (-lim..lim, -lim..lim).prop_map(|(re, im)| C::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn preimages_count_to_degree(roots in prop::collection::vec(point(2.0), 1..=6), w in point(3.0)) {
        let p = Polynomial::from_roots(&roots);
        let pre = p.preimages(w).unwrap();
        prop_assert_eq!(pre.total, p.degree());
        prop_assert_eq!(pre.iter().map(|(_, m)| m).sum::<usize>(), p.degree());
        for (z, _) in pre.iter() {
            prop_assert!((p.eval(*z) - w).norm() <= 1e-10, "residual at {}", z);
        }
    }

    #[test]
    fn centred_power_has_one_critical_point(n in 2usize..=8, b in point(2.0), c in point(2.0)) {
        let p = Polynomial::centered_power(n, b, c);
        let crit = p.derivative().roots().unwrap();
        prop_assert_eq!(crit.points.len(), 1);
        prop_assert_eq!(crit.points[0].1, n - 1);
        prop_assert!((crit.points[0].0 - b).norm() < 1e-6);
        prop_assert!((p.unique_critical_point().unwrap() - b).norm() < 1e-6);
    }

    #[test]
    fn escape_radius_escapes(roots in prop::collection::vec(point(2.0), 1..=6), big_r in 0.5f64..50.0) {
        let p = Polynomial::from_roots(&roots);
        let rho = p.escape_radius(big_r).unwrap();
        for k in 0..1024 {
            let z = C::from_polar(rho, std::f64::consts::TAU * k as f64 / 1024.0);
            prop_assert!(p.eval(z).norm() > big_r);
        }
    }

    #[test]
    fn derivative_is_consistent_with_eval(
        coeffs in prop::collection::vec(point(2.0), 2..=8),
        z in point(1.5),
    ) {
        let p = Polynomial::new(coeffs);
        let h = C::new(1e-5, 0.0);
        let dp = p.derivative();
        let d2 = dp.derivative();
        let bound = d2.magnitude_bound(z).max(1.0) * 2.0;
        let lhs = (p.eval(z + h) - p.eval(z) - h * dp.eval(z)).norm();
        prop_assert!(lhs <= bound * h.norm_sqr() + 1e-12, "{} > {}", lhs, bound * h.norm_sqr());
        let (v, d) = p.eval_with_derivative(z);
        prop_assert!((v - p.eval(z)).norm() <= 1e-12 * (1.0 + v.norm()));
        prop_assert!((d - dp.eval(z)).norm() <= 1e-12 * (1.0 + d.norm()));
    }
}

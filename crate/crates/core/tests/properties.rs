//! Property-based invariants over randomized inputs.

use num_complex::Complex64;
use proptest::prelude::*;
use psl2z::group::{self, GroupElement, IwasawaCoords};
use psl2z::kloosterman::kloosterman_sum;
use psl2z::specfun::sigma;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn iwasawa_roundtrip_is_projective_identity(
        a in -4.0f64..4.0, b in -4.0f64..4.0, c in -4.0f64..4.0, d in -4.0f64..4.0
    ) {
        prop_assume!(a * d - b * c > 0.05);
        let g = GroupElement::new(a, b, c, d).unwrap();
        let back = group::compose(&group::iwasawa_decompose(&g)).unwrap();
        prop_assert!(g.proj_dist(&back) < 1e-11);
        let bruhat = group::bruhat_compose(&group::bruhat_decompose(&g)).unwrap();
        prop_assert!(g.proj_dist(&bruhat) < 1e-10 * (1.0 + g.a.abs() + g.b.abs()));
    }

    #[test]
    fn left_action_is_a_group_action(
        a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0,
        x in -2.0f64..2.0, y in 0.2f64..3.0, th in 0.0f64..3.1
    ) {
        prop_assume!(a * d - b * c > 0.05);
        let g = GroupElement::new(a, b, c, d).unwrap();
        let co = IwasawaCoords::new(x, y, th).unwrap();
        let via_action = group::left_action(&g, &co);
        let via_product = group::iwasawa_decompose(&g.mul(&group::compose(&co).unwrap()));
        prop_assert!((via_action.x - via_product.x).abs() < 1e-9);
        prop_assert!((via_action.y - via_product.y).abs() < 1e-9);
        let dt = (via_action.theta - via_product.theta).abs();
        prop_assert!(dt.min((dt - std::f64::consts::PI).abs()) < 1e-9);
    }

    #[test]
    fn kloosterman_symmetry_and_realness(m in 1i64..30, n in 1i64..30, ell in 1i64..120) {
        let s_mn = kloosterman_sum(m, n, ell).unwrap();
        let s_nm = kloosterman_sum(n, m, ell).unwrap();
        prop_assert!((s_mn - s_nm).abs() < 1e-9);
        // periodicity in m mod ell
        let s_shift = kloosterman_sum(m + ell, n, ell).unwrap();
        prop_assert!((s_mn - s_shift).abs() < 1e-9);
    }

    #[test]
    fn divisor_sum_multiplicative_on_coprime(m in 1i64..400, n in 1i64..400, t in -2.0f64..2.0) {
        fn gcd(mut a: i64, mut b: i64) -> i64 {
            while b != 0 { let t = a % b; a = b; b = t; }
            a
        }
        prop_assume!(gcd(m, n) == 1);
        let z = Complex64::new(0.0, t);
        let lhs = sigma(z, m * n).unwrap();
        let rhs = sigma(z, m).unwrap() * sigma(z, n).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }
}

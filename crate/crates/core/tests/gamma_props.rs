use calderon_core::gamma::{gamma, gamma_profile};
use calderon_core::{parse_symbol, Symbol};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_scale_identity(p in -0.8f64..2.5, q in -2.0f64..2.0, k in 0usize..6, lx in -4.0f64..4.0) {
        let p = Complex64::new(p, q);
        let s = Symbol::vpow(p).unwrap();
        let xi = 10f64.powf(lx);
        let at = |x: f64| {
            let scale = (p * (2.0 * x).ln()).exp();
            gamma(&s, k, x, 1e-14 / scale.norm()).unwrap() * scale
        };
        let (a, b) = (at(xi), at(1.0));
        prop_assert!((a - b).norm() <= 1e-8 * b.norm(), "{a} vs {b}");
    }

    #[test]
    fn linear_in_the_symbol(c in -3.0f64..3.0, d in -3.0f64..3.0, k in 0usize..5, lx in -3.0f64..3.0) {
        let xi = 10f64.powf(lx);
        let a = Symbol::sininvpow(1.0, 0.5).unwrap();
        let b = Symbol::OscExp;
        let sum = parse_symbol(&format!("{c}*sininvpow(alpha=1,beta=0.5)+{d}*oscexp()")).unwrap();
        let whole = gamma(&sum, k, xi, 1e-13).unwrap();
        let parts = c * gamma(&a, k, xi, 1e-13).unwrap() + d * gamma(&b, k, xi, 1e-13).unwrap();
        prop_assert!((whole - parts).norm() <= 1e-9 * (1.0 + parts.norm()), "{whole} vs {parts}");
    }

    #[test]
    fn constant_bounded_by_its_modulus(re in -5.0f64..5.0, im in -5.0f64..5.0, k in 0usize..8) {
        let c = Complex64::new(re, im);
        let p = gamma_profile(&Symbol::constant(c), k, 1e-2, 1e2, 21, 1e-12).unwrap();
        prop_assert!(p.sup_estimate <= c.norm() + 1e-9);
        for z in &p.values {
            prop_assert!((z - c).norm() <= 1e-10 * (1.0 + c.norm()));
        }
    }
}

#[test]
fn profiles_are_deterministic() {
    let s = parse_symbol("sininvpow(alpha=1,beta=0.5)").unwrap();
    let a = gamma_profile(&s, 2, 1e-3, 1e3, 41, 1e-12).unwrap();
    let b = gamma_profile(&s, 2, 1e-3, 1e3, 41, 1e-12).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

use calderon_core::harness::{isometry_suite, r_apply, r_star_apply, toeplitz_apply, Grid2D, HalfLineSignal};
use calderon_core::laguerre::ell_eval;
use calderon_core::quadrature::gauss::GaussLegendre;
use calderon_core::Symbol;
use num_complex::Complex64;

fn small_grid() -> Grid2D {
    Grid2D::new(40.0, 1.0 / 16.0, 1e-3, 50.0, 200).unwrap()
}

#[test]
fn analysis_is_linear() {
    let g = small_grid();
    let (f, h) = (HalfLineSignal::random(3), HalfLineSignal::random(4));
    let c = Complex64::new(0.7, -1.3);
    let combo = HalfLineSignal::new(f.xi.clone(), f.values.iter().zip(&h.values).map(|(a, b)| a + c * b).collect()).unwrap();
    for k in [0, 3] {
        let lhs = r_star_apply(k, &combo, &g).unwrap();
        let (rf, rh) = (r_star_apply(k, &f, &g).unwrap(), r_star_apply(k, &h, &g).unwrap());
        let mut rhs = rf.clone();
        for ((re, im), (hr, hi)) in rhs.re.iter_mut().zip(rhs.im.iter_mut()).zip(rh.re.iter().zip(&rh.im)) {
            let z = Complex64::new(*re, *im) + c * Complex64::new(*hr, *hi);
            *re = z.re;
            *im = z.im;
        }
        let err = lhs.sub(&rhs).norm(&g).unwrap();
        assert!(err <= 1e-12 * lhs.norm(&g).unwrap(), "k={k}: {err}");
    }
}

#[test]
fn isometry_holds_for_other_seeds() {
    let g = Grid2D::standard();
    let signals: Vec<HalfLineSignal> = (100..103).map(HalfLineSignal::random).collect();
    let checks = isometry_suite(&[0, 2, 5], &signals, &g).unwrap();
    assert!(!checks.is_empty());
    for c in &checks {
        assert!(c.passed, "{} k={} value {}", c.name, c.k, c.value);
    }
}

#[test]
fn constant_symbol_scales_the_signal() {
    let g = small_grid();
    let f = HalfLineSignal::standard();
    let out = toeplitz_apply(&Symbol::constant(2.0), 1, &f, &g).unwrap();
    let samples = r_star_apply(1, &f, &g).unwrap();
    let back = r_apply(1, &samples, &g, &f.xi).unwrap();
    for ((a, b), x) in out.values.iter().zip(&back.values).zip(&f.xi) {
        if (0.6..=3.8).contains(x) {
            assert!((a - 2.0 * b).norm() <= 1e-10 * f.max_abs(), "xi={x}");
        }
    }
}

#[test]
fn wavelets_are_admissible_per_level() {
    // ∫ |ψ̂_k(ξ)|² dξ/ξ with ψ̂_k(ξ) = √(2ξ) ℓ_k(2ξ) on ξ > 0
    let gl = GaussLegendre::new(20);
    for k in 0..=5 {
        let total = gl.composite(|xi| 2.0 * ell_eval(k, 2.0 * xi).unwrap().powi(2), 0.0, 100.0, 400);
        assert!((total - 1.0).abs() < 1e-12, "k={k}: {total}");
    }
}

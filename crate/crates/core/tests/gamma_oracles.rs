use calderon_core::gamma::{gamma, gamma_closed_form, gamma_profile, log_grid, sininvpow_transcribed, ClosedForm, EndpointLimit};
use calderon_core::{parse_symbol, Symbol};
use num_complex::Complex64;

/// K_{j+1/2}(z) for complex z with Re z > 0, from the terminating series.
fn bessel_k_half(j: u32, z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 0..=j {
        let c = (1..=j + r).map(|x| x as f64).product::<f64>()
            / ((1..=r).map(|x| x as f64).product::<f64>() * (1..=j - r).map(|x| x as f64).product::<f64>());
        sum += c / (2.0 * z).powu(r);
    }
    (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp() * sum
}

/// γ_{a,1}(ξ) for a(t) = t^{-1/2} sin(1/t), from
/// ∫ t^{ν-1} e^{-bt - c/t} dt = 2 (c/b)^{ν/2} K_ν(2√(bc)) with c = -i.
fn sininvpow_level_one(xi: f64) -> f64 {
    let b = Complex64::from(2.0 * xi);
    let c = Complex64::new(0.0, -1.0);
    // ℓ_1(v)² = e^{-v} (1 - 2v + v²), v = 2ξt
    let coeffs = [1.0, -2.0, 1.0];
    let mut total = Complex64::new(0.0, 0.0);
    for (j, &cj) in coeffs.iter().enumerate() {
        let nu = j as f64 + 0.5;
        let integral = 2.0 * ((c.ln() - b.ln()) * (nu / 2.0)).exp() * bessel_k_half(j as u32, 2.0 * (b * c).sqrt());
        total += cj * (2.0 * xi).powi(j as i32) * integral;
    }
    2.0 * xi * total.im
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn bessel_oracle_frozen_values() {
    for (xi, want) in [(0.01, 0.03457442586737611), (1.0, 0.288_873_947_062_398_5), (100.0, -4.311793587384e-6)] {
        let got = sininvpow_level_one(xi);
        assert!((got - want).abs() < 1e-11 * want.abs().max(1e-3), "xi={xi}: {got} vs {want}");
    }
}

#[test]
fn sininvpow_numerics_match_bessel_oracle() {
    let s = Symbol::sininvpow(1.0, 0.5).unwrap();
    for &xi in &[1e-3, 0.01, 0.3, 1.0, 7.0, 100.0] {
        let num = gamma(&s, 1, xi, 1e-12).unwrap();
        let want = sininvpow_level_one(xi);
        assert!(num.im.abs() < 1e-12 && (num.re - want).abs() < 1e-10, "xi={xi}: {num} vs {want}");
    }
}

#[test]
fn reference_form_misses_the_jacobian() {
    for &xi in &[0.01, 1.0, 100.0] {
        let oracle = sininvpow_level_one(xi);
        assert!((2.0 * xi * sininvpow_transcribed(xi) - oracle).abs() < 1e-12 * oracle.abs().max(1e-6));
        assert!((sininvpow_transcribed(xi) - oracle).abs() > 1e-3 * oracle.abs());
    }
}

#[test]
fn oscexp_agrees_with_closed_form() {
    let grid = log_grid(1e-4, 1e4, 200);
    for k in 0..=6 {
        for &xi in &grid {
            let num = gamma(&Symbol::OscExp, k, xi, 1e-13).unwrap();
            let exact = gamma_closed_form(ClosedForm::OscExp, k, xi).unwrap();
            assert!(rel(num, exact) < 1e-8, "k={k} xi={xi}: {num} vs {exact}");
        }
    }
}

#[test]
fn powers_agree_with_closed_form() {
    let grid = log_grid(1e-4, 1e4, 40);
    for p in [Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(-0.5, 0.0), Complex64::new(0.3, 1.5)] {
        let s = Symbol::vpow(p).unwrap();
        for k in [0, 1, 4] {
            for &xi in &grid {
                let num = gamma(&s, k, xi, 1e-14 * gamma_closed_form(ClosedForm::VPow(p), k, xi).unwrap().norm()).unwrap();
                let exact = gamma_closed_form(ClosedForm::VPow(p), k, xi).unwrap();
                assert!(rel(num, exact) < 1e-8, "p={p} k={k} xi={xi}: {num} vs {exact}");
            }
        }
    }
}

#[test]
fn power_scale_identity() {
    let s = Symbol::vpow(0.7).unwrap();
    for k in [0, 2] {
        let base = gamma(&s, k, 1.0, 1e-13).unwrap() * 2f64.powf(0.7);
        for &xi in &[1e-3, 0.1, 10.0, 1e3] {
            let scaled = gamma(&s, k, xi, 1e-13 * (2.0 * xi).powf(-0.7)).unwrap() * (2.0 * xi).powf(0.7);
            assert!(rel(scaled, base) < 1e-8, "k={k} xi={xi}");
        }
    }
}

#[test]
fn vi_agrees_and_has_no_limits() {
    for k in 0..=6 {
        let p = gamma_profile(&Symbol::Vi, k, 1e-4, 1e4, 200, 1e-12).unwrap();
        for (xi, z) in p.xi_grid.iter().zip(&p.values) {
            let exact = gamma_closed_form(ClosedForm::Vi, k, *xi).unwrap();
            assert!(rel(*z, exact) < 1e-8, "k={k} xi={xi}");
        }
        assert_eq!(p.limit_at_zero, EndpointLimit::Oscillatory, "k={k}");
        assert_eq!(p.limit_at_infinity, EndpointLimit::Oscillatory, "k={k}");
    }
}

#[test]
fn sup_bounded_by_ess_sup() {
    for (text, m) in [("oscexp()", 1.0), ("trunc(cutoff=1,sininvpow(alpha=1,beta=0.5))", 1.0), ("3*const(1)", 3.0), ("head(cutoff=2,vi())", 1.0)] {
        let s = parse_symbol(text).unwrap();
        for k in [0, 1, 2] {
            let p = gamma_profile(&s, k, 1e-3, 1e3, 61, 1e-12).unwrap();
            assert!(p.sup_estimate <= m + 1e-9, "{text} k={k}: {}", p.sup_estimate);
            assert!(p.values.iter().all(|z| z.norm() <= p.sup_estimate));
        }
    }
}

#[test]
fn sininvpow_profile_limits_vanish() {
    let s = Symbol::sininvpow(1.0, 0.5).unwrap();
    let p = gamma_profile(&s, 1, 1e-4, 1e4, 201, 1e-12).unwrap();
    assert!(p.limit_at_zero.value().unwrap().norm() < 5e-3, "{:?}", p.limit_at_zero);
    assert!(p.limit_at_infinity.value().unwrap().norm() < 5e-3, "{:?}", p.limit_at_infinity);
}

#[test]
fn power_profile_diverges() {
    let p = gamma_profile(&Symbol::vpow(1.0).unwrap(), 0, 1e-4, 1e4, 201, 1e-12).unwrap();
    assert_eq!(p.limit_at_zero, EndpointLimit::Divergent);
    assert!(p.limit_at_infinity.value().unwrap().norm() < 1e-3);
}

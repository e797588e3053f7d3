use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use foxsec::special::{digamma, digamma_real, log_gamma, log_gamma_abs};
use foxsec::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `ln Gamma(z)` from the Weierstrass product truncated at `terms` factors
/// with an Euler-Maclaurin tail correction, summed in the order it converges.
fn weierstrass_log_gamma(z: Complex64, terms: usize) -> Complex64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut acc = -EULER * z - z.ln();
    for k in 1..=terms {
        let r = z / k as f64;
        acc += r - (1.0 + r).ln();
    }
    // tail sum_{k>N} (z/k - ln(1+z/k)) ~ z^2/(2N) - z^3/(6N^2) ...
    let n = terms as f64;
    acc + z * z / (2.0 * n) - z * z * z / (6.0 * n * n) - z * z / (4.0 * n * n)
}

#[test]
fn known_values() {
    assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
    assert!((log_gamma(c(0.5, 0.0)).unwrap().re - 0.572_364_942_924_700_1).abs() < 1e-13);
    assert!((digamma(c(1.0, 0.0)).unwrap().re + 0.577_215_664_901_532_9).abs() < 1e-12);
    assert!((digamma_real(2.0).unwrap() - 0.422_784_335_098_467_1).abs() < 1e-12);
    assert!((digamma_real(0.5).unwrap() + 1.963_510_026_021_423_5).abs() < 1e-12);
}

#[test]
fn one_plus_i_against_product() {
    let z = c(1.0, 1.0);
    let oracle = weierstrass_log_gamma(z, 10_000);
    let v = log_gamma(z).unwrap();
    assert!((v - oracle).norm() < 1e-9, "{v} vs {oracle}");
    // reference digits of ln Gamma(1+i)
    assert!((v.re + 0.650_923_199_301_856_8).abs() < 1e-13);
    assert!((v.im + 0.301_640_320_467_533_2).abs() < 1e-13);
}

#[test]
fn gamma_matches_factorials() {
    let mut f = 1.0f64;
    for n in 1..=20 {
        f *= n as f64;
        let g = log_gamma_abs(n as f64 + 1.0).unwrap();
        assert!((g - f.ln()).abs() < 1e-12 * f.ln().max(1.0), "n={n}");
    }
}

#[test]
fn poles_are_errors() {
    for k in 0..5 {
        assert!(matches!(log_gamma(c(-(k as f64), 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(digamma(c(-(k as f64), 0.0)), Err(Error::Pole { .. })));
    }
    assert!(log_gamma(c(f64::NAN, 0.0)).is_err());
}

#[test]
fn far_up_the_contour_stays_finite() {
    for im in [1e2, 1e3, 1e4] {
        let v = log_gamma(c(0.3, im)).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
        // |Gamma(x+iy)| ~ sqrt(2 pi) |y|^(x-1/2) e^(-pi |y| / 2)
        let stirling = 0.5 * (2.0 * PI).ln() + (0.3 - 0.5) * im.ln() - PI * im / 2.0;
        assert!((v.re - stirling).abs() < 1e-2, "im={im}");
    }
}

proptest! {
    #[test]
    fn reflection(re in -8.0f64..8.0, im in 0.05f64..8.0) {
        let z = c(re, im);
        let d = log_gamma(z).unwrap() + log_gamma(1.0 - z).unwrap() - (PI / (PI * z).sin()).ln();
        let wrapped = d.im - 2.0 * PI * (d.im / (2.0 * PI)).round();
        prop_assert!(d.re.abs() < 1e-10 && wrapped.abs() < 1e-10);
    }

    #[test]
    fn recurrence(r in 0.1f64..30.0, phi in -3.0f64..3.0) {
        let z = Complex64::from_polar(r, phi);
        let g1 = log_gamma(z + 1.0).unwrap().exp();
        let g0 = log_gamma(z).unwrap().exp();
        prop_assert!((g1 - z * g0).norm() / g1.norm() < 1e-11);
        let p = digamma(z + 1.0).unwrap() - digamma(z).unwrap() - 1.0 / z;
        prop_assert!(p.norm() < 1e-10);
    }

    #[test]
    fn conjugate(re in -8.0f64..8.0, im in 0.05f64..50.0) {
        let z = c(re, im);
        prop_assert!((log_gamma(z.conj()).unwrap() - log_gamma(z).unwrap().conj()).norm() < 1e-13);
    }
}

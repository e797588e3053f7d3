use std::f64::consts::LN_2;

use foxsec::fading::{db_to_linear, FadingModel};
use foxsec::quadrature::integrate_log_scale;
use foxsec::secrecy::{
    asc_asymptotic, asc_exact, pnz_asymptotic, pnz_exact, sop_asymptotic, sop_exact, sop_exact_two_fold,
    sop_lower_bound, WiretapConfig,
};
use foxsec::table2::table2_metrics;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exp_pair(b: f64, e: f64, rate: f64) -> WiretapConfig {
    WiretapConfig::new(FadingModel::exponential_snr(b), FadingModel::exponential_snr(e), rate)
}

fn random_model(rng: &mut ChaCha8Rng, lo_db: f64, hi_db: f64) -> FadingModel {
    let snr = db_to_linear(rng.random_range(lo_db..hi_db));
    match rng.random_range(0..3) {
        0 => FadingModel::alpha_mu(rng.random_range(0.8..3.0), rng.random_range(0.6..3.0), snr),
        1 => FadingModel::fisher_f(rng.random_range(0.8..4.0), rng.random_range(2.5..6.0), snr),
        _ => FadingModel::egk(
            rng.random_range(0.8..3.0),
            rng.random_range(0.8..3.0),
            rng.random_range(0.7..1.5),
            rng.random_range(0.7..1.5),
            snr,
        ),
    }
}

/// `(1/ln 2) int F_E(x) (1 - F_B(x)) / (1 + x) dx` from the model cdfs.
fn asc_oracle(c: &WiretapConfig) -> f64 {
    integrate_log_scale(
        |x| Ok(c.eve.cdf(x)?.value * c.main.ccdf(x)?.value / (1.0 + x)),
        -27.6,
        20.7,
        1e-12,
        1e-10,
    )
    .unwrap()
    .value
        / LN_2
}

#[test]
fn exponential_closed_forms() {
    let c = exp_pair(2.0, 1.0, 1.0);
    assert!((pnz_exact(&c).unwrap().value - 2.0 / 3.0).abs() < 1e-9);
    let rs = 2.0;
    let want = 1.0 - 2.0 / (2.0 + rs) * (-(rs - 1.0) / 2.0f64).exp();
    assert!((sop_exact(&c).unwrap().value - want).abs() < 1e-8);
    assert!((sop_exact(&c).unwrap().value - 0.696_735).abs() < 1e-6);
    assert!((sop_lower_bound(&c).unwrap().value - 0.5).abs() < 1e-9);
    assert!((sop_exact_two_fold(&c).unwrap().value - want).abs() < 1e-6);
}

#[test]
fn identical_links_are_a_coin_flip() {
    for m in [
        FadingModel::alpha_mu(2.0, 1.5, 3.0),
        FadingModel::fisher_f(2.0, 3.0, 3.0),
        FadingModel::egk(1.5, 2.0, 1.2, 0.8, 3.0),
    ] {
        let c = WiretapConfig::new(m, m, 0.0);
        assert!((pnz_exact(&c).unwrap().value - 0.5).abs() < 1e-8, "{m:?}");
        assert!(asc_exact(&c).unwrap().value > 0.0);
    }
}

#[test]
fn pnz_and_sop_at_zero_rate_complement() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let b = random_model(&mut rng, -5.0, 20.0);
        let e = random_model(&mut rng, -5.0, 10.0);
        let c = WiretapConfig::new(b, e, 0.0);
        let p = pnz_exact(&c).unwrap().value;
        let s = sop_exact(&c).unwrap().value;
        assert!((p + s - 1.0).abs() < 1e-7, "{c:?}: {p} + {s}");
    }
}

#[test]
fn lower_bound_is_below_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let b = random_model(&mut rng, 0.0, 20.0);
        let e = random_model(&mut rng, -5.0, 10.0);
        let c = WiretapConfig::new(b, e, rng.random_range(0.05..2.0));
        let lb = sop_lower_bound(&c).unwrap().value;
        let ex = sop_exact(&c).unwrap().value;
        assert!(lb <= ex + 1e-9, "{c:?}: {lb} > {ex}");
    }
}

#[test]
fn asc_against_cdf_quadrature() {
    let cases = [
        exp_pair(2.0, 1.0, 0.0),
        WiretapConfig::new(FadingModel::alpha_mu(2.5, 1.5, 10.0), FadingModel::alpha_mu(1.8, 2.0, 1.0), 0.0),
        WiretapConfig::new(FadingModel::fisher_f(2.0, 3.0, 10.0), FadingModel::fisher_f(2.0, 3.0, 1.0), 0.0),
        WiretapConfig::new(
            FadingModel::egk(1.5, 2.0, 1.2, 0.8, 10.0),
            FadingModel::egk(2.0, 1.5, 0.9, 1.1, 1.0),
            0.0,
        ),
    ];
    for c in cases {
        let a = asc_exact(&c).unwrap().value;
        let o = asc_oracle(&c);
        assert!((a - o).abs() < 1e-6 * o.max(1.0), "{c:?}: {a} vs {o}");
    }
}

#[test]
fn asc_with_a_silent_eavesdropper_is_the_capacity() {
    let m = FadingModel::alpha_mu(2.0, 2.0, 10.0);
    let c = WiretapConfig::new(m, FadingModel::alpha_mu(2.0, 2.0, 1e-6), 0.0);
    let cap = integrate_log_scale(|x| Ok(m.ccdf(x)?.value / (1.0 + x)), -27.6, 20.7, 1e-12, 1e-10)
        .unwrap()
        .value
        / LN_2;
    let a = asc_exact(&c).unwrap().value;
    assert!((a - cap).abs() < 1e-4 * cap, "{a} vs {cap}");
}

#[test]
fn asc_swap_identity() {
    // E[(X - Y)^+] - E[(Y - X)^+] = E[X] - E[Y] in the log domain
    let a = FadingModel::fisher_f(2.0, 3.0, 5.0);
    let b = FadingModel::alpha_mu(2.0, 1.5, 2.0);
    let ab = asc_exact(&WiretapConfig::new(a, b, 0.0)).unwrap().value;
    let ba = asc_exact(&WiretapConfig::new(b, a, 0.0)).unwrap().value;
    let cap = |m: FadingModel| {
        integrate_log_scale(|x| Ok(m.ccdf(x)?.value / (1.0 + x)), -27.6, 20.7, 1e-12, 1e-10)
            .unwrap()
            .value
            / LN_2
    };
    assert!((ab - ba - (cap(a) - cap(b))).abs() < 1e-6);
}

#[test]
fn asymptotics_converge() {
    let e = FadingModel::alpha_mu(2.0, 2.0, 1.0);
    let hi = WiretapConfig::new(FadingModel::alpha_mu(2.0, 2.0, db_to_linear(40.0)), e, 0.5);
    let (a, _) = sop_asymptotic(&hi).unwrap();
    let x = sop_exact(&hi).unwrap().value;
    assert!((a.value / x - 1.0).abs() < 0.02, "{} vs {x}", a.value);
    let lo = WiretapConfig::new(FadingModel::alpha_mu(2.0, 2.0, db_to_linear(-25.0)), e, 0.0);
    let (p, _) = pnz_asymptotic(&lo).unwrap();
    let x = pnz_exact(&lo).unwrap().value;
    assert!((p.value / x - 1.0).abs() < 0.02, "{} vs {x}", p.value);
    let a = asc_asymptotic(&hi).unwrap().value;
    let x = asc_exact(&hi).unwrap().value;
    assert!((a - x).abs() < 0.02 * x, "{a} vs {x}");
}

#[test]
fn table2_agrees_with_the_generic_route() {
    let cases = [
        WiretapConfig::new(FadingModel::alpha_mu(2.5, 1.5, 10.0), FadingModel::alpha_mu(1.8, 2.0, 1.0), 0.5),
        WiretapConfig::new(FadingModel::fisher_f(2.0, 3.0, 10.0), FadingModel::fisher_f(2.5, 4.0, 1.0), 0.5),
        WiretapConfig::new(
            FadingModel::egk(1.5, 2.0, 1.2, 0.8, 10.0),
            FadingModel::egk(2.0, 1.5, 0.9, 1.1, 1.0),
            1.0,
        ),
    ];
    for c in cases {
        let t = table2_metrics(&c).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        assert!(rel(t.sop.value, sop_exact(&c).unwrap().value) < 1e-5, "{c:?}");
        assert!(rel(t.pnz.value, pnz_exact(&c).unwrap().value) < 1e-5, "{c:?}");
        assert!(rel(t.asc.value, asc_exact(&c).unwrap().value) < 1e-5, "{c:?}");
    }
    let mixed = WiretapConfig::new(FadingModel::alpha_mu(2.0, 2.0, 10.0), FadingModel::fisher_f(2.0, 4.0, 1.0), 0.1);
    assert!(table2_metrics(&mixed).is_err());
}

#[test]
fn invalid_configs() {
    assert!(sop_exact(&exp_pair(2.0, 1.0, -1.0)).is_err());
    let bad = WiretapConfig::new(FadingModel::fisher_f(2.0, -3.0, 1.0), FadingModel::exponential_snr(1.0), 0.1);
    assert!(pnz_exact(&bad).is_err());
}

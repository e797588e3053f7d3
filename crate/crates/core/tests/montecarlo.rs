use foxsec::config::Scenario;
use foxsec::fading::FadingModel;
use foxsec::montecarlo::{mc_asc, mc_asc_decomposition, mc_pnz, mc_sop, mc_sop_lower_bound, CHUNK};
use foxsec::secrecy::{asc_exact, pnz_exact, sop_exact, WiretapConfig};

fn exp_pair(rate: f64) -> WiretapConfig {
    WiretapConfig::new(FadingModel::exponential_snr(2.0), FadingModel::exponential_snr(1.0), rate)
}

#[test]
fn identical_links_give_one_half() {
    let m = FadingModel::egk(1.5, 2.0, 1.2, 0.8, 3.0);
    let e = mc_pnz(WiretapConfig::new(m, m, 0.0), 1_000_000, 3).unwrap();
    assert!(e.z_score_probability(0.5).abs() < 3.0, "{}", e.value);
}

#[test]
fn exponential_pair_within_three_sigma() {
    let c = exp_pair(1.0);
    let want = 1.0 - 0.5 * (-0.5f64).exp();
    let e = mc_sop(&c, 1_000_000, 42).unwrap();
    assert!(e.z_score_probability(want).abs() < 3.0, "{} vs {want}", e.value);
    let e = mc_sop_lower_bound(&c, 1_000_000, 43).unwrap();
    assert!(e.z_score_probability(0.5).abs() < 3.0);
    let e = mc_pnz(exp_pair(0.0), 1_000_000, 44).unwrap();
    assert!(e.z_score_probability(2.0 / 3.0).abs() < 3.0);
}

#[test]
fn analytic_routes_agree_on_fisher_f() {
    let c = WiretapConfig::new(FadingModel::fisher_f(2.0, 3.0, 10.0), FadingModel::fisher_f(2.0, 3.0, 1.0), 0.5);
    let e = mc_sop(&c, 1_000_000, 5).unwrap();
    assert!(e.z_score_probability(sop_exact(&c).unwrap().value).abs() < 3.0);
    let e = mc_pnz(&c, 1_000_000, 6).unwrap();
    assert!(e.z_score_probability(pnz_exact(&c).unwrap().value).abs() < 3.0);
    let e = mc_asc_decomposition(&c, 1_000_000, 7).unwrap();
    assert!(e.z_score(asc_exact(&c).unwrap().value).abs() < 3.0);
}

#[test]
fn std_err_scales_as_inverse_root_n() {
    let a = mc_sop(exp_pair(1.0), 40_000, 9).unwrap();
    let b = mc_sop(exp_pair(1.0), 640_000, 9).unwrap();
    let ratio = a.std_err / b.std_err;
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
}

#[test]
fn silent_eavesdropper_asc() {
    let m = FadingModel::alpha_mu(2.0, 2.0, 10.0);
    let c = WiretapConfig::new(m, FadingModel::alpha_mu(2.0, 2.0, 1e-6), 0.0);
    let e = mc_asc(&c, 200_000, 11).unwrap();
    assert!(e.z_score(asc_exact(&c).unwrap().value).abs() < 3.0);
}

#[test]
fn partial_chunks_and_determinism() {
    let n = 2 * CHUNK + 123;
    let s: Scenario = exp_pair(1.0).into();
    let a = mc_sop(s.clone(), n, 77).unwrap();
    assert_eq!(a, mc_sop(s.clone(), n, 77).unwrap());
    assert_eq!(a.n_samples, n);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    assert_eq!(a, one.install(|| mc_sop(s.clone(), n, 77).unwrap()));
}

#[test]
fn kappa_scale_is_ignored() {
    let s: Scenario = exp_pair(1.0).into();
    let a = mc_sop(s.clone(), 50_000, 1).unwrap();
    let b = mc_sop(s.with_kappa_scale(1.1), 50_000, 1).unwrap();
    assert_eq!(a, b);
}

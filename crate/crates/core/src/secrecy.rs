//! Secrecy metrics of the single-eavesdropper wiretap channel.
//!
//! Every metric is written as a Mellin-Barnes integral of gamma products built
//! from the two H-densities and integrated by [`crate::mellin`]:
//!
//! * `Pr(X > Y)` for H-distributed X, Y is a single contour integral, which
//!   gives the PNZ and the SOP lower bound.
//! * The exact SOP is `F_B(W) + D` with a two-fold integral `D` for the
//!   increment `F_B(R_s y + W) - F_B(W)`. Both parts are positive, so small
//!   outage probabilities keep their relative accuracy. The complementary
//!   "1 - bivariate H" form is also available.
//! * The ASC is `(I1 + I2 - I3) / ln 2` with `ln(1+x)` represented by its
//!   H-function kernel.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::FadingModel;
use crate::foxh::{
    integrate_default, log_kernel_params, push_gamma, push_theta, Affine, HDensity, HValue,
    BIVARIATE_TOL, UNIVARIATE_TOL,
};
use crate::mellin::MellinBarnes;
use crate::quadrature::integrate;
use crate::special::digamma_real;

pub const PROBABILITY_SLACK: f64 = 1e-6;
/// `l1 / |value|` above which a contour integral is considered too
/// cancellation-prone to trust.
const CONDITION_LIMIT: f64 = 1e7;

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WiretapConfig {
    pub main: FadingModel,
    pub eve: FadingModel,
    /// Target secrecy rate in bits/s/Hz.
    pub target_rate: f64,
    /// Multiplies both normalizing constants. Only for exercising the
    /// validation path with a deliberately wrong model.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub kappa_scale: f64,
}

impl WiretapConfig {
    pub fn new(main: FadingModel, eve: FadingModel, target_rate: f64) -> Self {
        WiretapConfig {
            main,
            eve,
            target_rate,
            kappa_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.main.validate()?;
        self.eve.validate()?;
        if !(self.target_rate >= 0.0 && self.target_rate.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "target_rate must be >= 0, got {}",
                self.target_rate
            )));
        }
        Ok(())
    }

    /// `R_s = 2^R_t`.
    pub fn rate_factor(&self) -> f64 {
        self.target_rate.exp2()
    }

    /// `W = R_s - 1`.
    pub fn offset(&self) -> f64 {
        self.target_rate.exp2() - 1.0
    }

    pub fn with_rate(&self, target_rate: f64) -> Self {
        WiretapConfig { target_rate, ..*self }
    }

    pub fn main_density(&self) -> HDensity {
        scaled_kappa(self.main.to_h_density(), self.kappa_scale)
    }

    pub fn eve_density(&self) -> HDensity {
        scaled_kappa(self.eve.to_h_density(), self.kappa_scale)
    }
}

pub(crate) fn scaled_kappa(mut d: HDensity, k: f64) -> HDensity {
    d.kappa *= k;
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    LowerBound,
    Asymptotic,
    Table2,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::LowerBound => "lower_bound",
            Method::Asymptotic => "asymptotic",
            Method::Table2 => "table2",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "lower_bound" => Ok(Method::LowerBound),
            "asymptotic" => Ok(Method::Asymptotic),
            "table2" => Ok(Method::Table2),
            "monte_carlo" => Ok(Method::MonteCarlo),
            _ => Err(Error::InvalidParams(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub value: f64,
    pub method: Method,
    pub err_estimate: f64,
}

impl MetricResult {
    pub fn new(value: f64, method: Method, err_estimate: f64) -> Self {
        MetricResult {
            value,
            method,
            err_estimate,
        }
    }

    fn from_h(h: HValue, method: Method) -> Self {
        MetricResult::new(h.value, method, h.error)
    }

    /// Rejects probabilities outside `[-1e-6, 1 + 1e-6]` instead of clamping.
    pub fn checked_probability(self) -> Result<Self> {
        if self.value.is_finite() && self.value >= -PROBABILITY_SLACK && self.value <= 1.0 + PROBABILITY_SLACK {
            Ok(self)
        } else {
            Err(Error::ProbabilityRange {
                value: self.value,
                method: self.method.to_string(),
            })
        }
    }
}

/// Location and provenance of the pole behind an asymptotic expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticExpansion {
    /// Pole position `tau`.
    pub tau: f64,
    /// Index of the gamma factor that carries the pole.
    pub g: usize,
    /// Pole order (1 for simple poles).
    pub order: u32,
}

/// Density of `X / r` when `X` has density `d`.
pub(crate) fn divided_by(d: &HDensity, r: f64) -> HDensity {
    HDensity {
        kappa: d.kappa * r,
        lambda: d.lambda * r,
        params: d.params.clone(),
    }
}

/// Integrand of `Pr(X > Y) = E[F_Y(X)]`:
/// `(kx ky / lx ly) int G(-w) Theta_Y(1+w) Theta_X(1-w) / G(1-w) (ly/lx)^-w dw`.
fn exceed_mb(x: &HDensity, y: &HDensity) -> (MellinBarnes, f64) {
    let mut mb = MellinBarnes::new(1, vec![(y.lambda / x.lambda).ln()]);
    let w = Affine::var(1, 0);
    push_gamma(&mut mb, &w.neg(), true);
    push_theta(&mut mb, &y.params, &w.shifted(1.0));
    push_theta(&mut mb, &x.params, &w.neg().shifted(1.0));
    push_gamma(&mut mb, &w.neg().shifted(1.0), false);
    (mb, x.kappa * y.kappa / (x.lambda * y.lambda))
}

/// `Pr(X > Y)` for independent H-distributed X and Y.
pub fn prob_exceeds(x: &HDensity, y: &HDensity) -> Result<HValue> {
    let (mb, k) = exceed_mb(x, y);
    Ok(integrate_default(&mb, UNIVARIATE_TOL)?.scaled(k))
}

pub fn pnz_exact(cfg: &WiretapConfig) -> Result<MetricResult> {
    cfg.validate()?;
    let h = prob_exceeds(&cfg.main_density(), &cfg.eve_density())?;
    MetricResult::from_h(h, Method::Exact).checked_probability()
}

/// `Pr(gamma_B < R_s gamma_E)`, exact at `R_t = 0`.
pub fn sop_lower_bound(cfg: &WiretapConfig) -> Result<MetricResult> {
    cfg.validate()?;
    let b = divided_by(&cfg.main_density(), cfg.rate_factor());
    let h = prob_exceeds(&cfg.eve_density(), &b)?;
    MetricResult::from_h(h, Method::LowerBound).checked_probability()
}

/// Exact SOP `Pr(gamma_B <= R_s gamma_E + W)` as `F_B(W) + D`, with the
/// increment `D` integrated against `f_E` in `ln y`. Both terms are positive,
/// so tiny outage probabilities keep full relative accuracy.
pub fn sop_exact(cfg: &WiretapConfig) -> Result<MetricResult> {
    cfg.validate()?;
    let w = cfg.offset();
    if w == 0.0 {
        let p = pnz_exact(cfg)?;
        return MetricResult::new(1.0 - p.value, Method::Exact, p.err_estimate).checked_probability();
    }
    let b = cfg.main_density();
    let e = cfg.eve_density();
    let base = b.cdf(w)?;
    let inc = sop_increment_quadrature(&b, &e, cfg.rate_factor(), w, base.value)?;
    MetricResult::new(base.value + inc.value, Method::Exact, base.error + inc.error).checked_probability()
}

/// Same quantity with `D` as a two-fold contour integral. Loses conditioning
/// once `F_B(W)` is far below the outage probability (high main-link SNR).
pub fn sop_exact_two_fold(cfg: &WiretapConfig) -> Result<MetricResult> {
    cfg.validate()?;
    let w = cfg.offset();
    if w == 0.0 {
        return sop_exact(cfg);
    }
    let b = cfg.main_density();
    let e = cfg.eve_density();
    let base = b.cdf(w)?;
    let d = sop_increment(&b, &e, cfg.rate_factor(), w)?;
    if d.l1 > CONDITION_LIMIT * d.value.abs() {
        return Err(Error::Numerical(format!(
            "two-fold SOP increment ill-conditioned (l1 {:e}, value {:e})",
            d.l1, d.value
        )));
    }
    MetricResult::new(base.value + d.value, Method::Exact, base.error + d.error).checked_probability()
}

/// `D = E[F_B(R_s Y + W)] - F_B(W)` as the two-fold integral
///
/// ```text
/// (kB kE W / lE) int int Theta_B(x) / G(x) G(x+u-1) G(1-u) Theta_E(1+u) G(u) / G(1+u)
///                         (lB W)^-x (lE W / R_s)^-u
/// ```
fn sop_increment(b: &HDensity, e: &HDensity, rs: f64, w: f64) -> Result<HValue> {
    let mut mb = MellinBarnes::new(2, vec![(b.lambda * w).ln(), (e.lambda * w / rs).ln()]);
    let x = Affine::var(2, 0);
    let u = Affine::var(2, 1);
    push_theta(&mut mb, &b.params, &x);
    push_gamma(&mut mb, &x, false);
    push_gamma(&mut mb, &x.add(&u).shifted(-1.0), true);
    push_gamma(&mut mb, &u.neg().shifted(1.0), true);
    push_theta(&mut mb, &e.params, &u.shifted(1.0));
    push_gamma(&mut mb, &u, true);
    push_gamma(&mut mb, &u.shifted(1.0), false);
    let k = b.kappa * e.kappa * w / e.lambda;
    Ok(integrate_default(&mb, BIVARIATE_TOL)?.scaled(k))
}

/// Expectation `E[g(Y)]` for an H-distributed `Y` by quadrature in `ln y`.
pub(crate) fn expect<F: FnMut(f64) -> Result<f64>>(
    d: &HDensity,
    mut g: F,
    abs_tol: f64,
) -> Result<HValue> {
    let mut h = |t: f64| -> Result<f64> {
        let y = t.exp();
        let p = d.pdf(y)?.value;
        if p == 0.0 {
            Ok(0.0)
        } else {
            Ok(p * g(y)? * y)
        }
    };
    // Walk outward from the scale point until the integrand is negligible.
    let centre = -d.lambda.ln();
    let mut peak = h(centre)?.abs();
    let mut edges = [centre, centre];
    for (k, dir) in [-1.0, 1.0].into_iter().enumerate() {
        let mut quiet = 0;
        let mut t = centre;
        while quiet < 3 && (t - centre).abs() < 60.0 {
            t += 0.5 * dir;
            let v = h(t)?.abs();
            peak = peak.max(v);
            if v <= 1e-18 * peak {
                quiet += 1;
            } else {
                quiet = 0;
            }
        }
        edges[k] = t;
    }
    let r = integrate(h, edges[0], edges[1], abs_tol, 1e-9)?;
    Ok(HValue {
        value: r.value,
        error: r.error,
        l1: r.value.abs(),
    })
}

/// Quadrature of `F_B(R_s y + W) - F_B(W)` against `f_E`.
fn sop_increment_quadrature(b: &HDensity, e: &HDensity, rs: f64, w: f64, base: f64) -> Result<HValue> {
    expect(
        e,
        |y| Ok((b.cdf(rs * y + w)?.value - base).max(0.0)),
        1e-12 * base,
    )
}

/// Complementary two-fold form
///
/// ```text
/// 1 - (kB kE / lB lE) int int Theta_B(1+x) / G(1+x) Theta_E(1-u) G(u) G(x-u)
///                            (lB W)^-x (R_s / (lE W))^-u
/// ```
///
/// which loses relative accuracy when the outage probability is small.
pub fn sop_exact_complementary(cfg: &WiretapConfig) -> Result<MetricResult> {
    cfg.validate()?;
    let w = cfg.offset();
    if w == 0.0 {
        return sop_exact(cfg);
    }
    let b = cfg.main_density();
    let e = cfg.eve_density();
    let mut mb = MellinBarnes::new(2, vec![(b.lambda * w).ln(), (cfg.rate_factor() / (e.lambda * w)).ln()]);
    let x = Affine::var(2, 0);
    let u = Affine::var(2, 1);
    push_theta(&mut mb, &b.params, &x.shifted(1.0));
    push_gamma(&mut mb, &x.shifted(1.0), false);
    push_theta(&mut mb, &e.params, &u.neg().shifted(1.0));
    push_gamma(&mut mb, &u, true);
    push_gamma(&mut mb, &x.add(&u.neg()), true);
    let k = b.kappa * e.kappa / (b.lambda * e.lambda);
    let h = integrate_default(&mb, BIVARIATE_TOL)?.scaled(k);
    MetricResult::new(1.0 - h.value, Method::Exact, h.error).checked_probability()
}

/// `E[Y^nu ln(1+Y)]` through `(k / l^(1+nu)) int M_ln(x) Theta(1+nu-x) (1/l)^-x dx`.
pub fn log_moment(d: &HDensity, nu: f64) -> Result<HValue> {
    let mut mb = MellinBarnes::new(1, vec![-d.lambda.ln()]);
    let x = Affine::var(1, 0);
    push_theta(&mut mb, &log_kernel_params(), &x);
    push_theta(&mut mb, &d.params, &x.neg().shifted(1.0 + nu));
    let k = d.kappa / d.lambda.powf(1.0 + nu);
    Ok(integrate_default(&mb, UNIVARIATE_TOL)?.scaled(k))
}

/// `E[ln(1+X) F_Y(X)]`:
///
/// ```text
/// (kX kY / lX lY) int int M_ln(x) Theta_X(1-u-x) G(-u) Theta_Y(1+u) / G(1-u)
///                        (1/lX)^-x (lY/lX)^-u
/// ```
fn log_cdf_term(x_d: &HDensity, y_d: &HDensity) -> Result<HValue> {
    let mut mb = MellinBarnes::new(2, vec![-x_d.lambda.ln(), (y_d.lambda / x_d.lambda).ln()]);
    let x = Affine::var(2, 0);
    let u = Affine::var(2, 1);
    push_theta(&mut mb, &log_kernel_params(), &x);
    push_theta(&mut mb, &x_d.params, &u.add(&x).neg().shifted(1.0));
    push_gamma(&mut mb, &u.neg(), true);
    push_theta(&mut mb, &y_d.params, &u.shifted(1.0));
    push_gamma(&mut mb, &u.neg().shifted(1.0), false);
    let k = x_d.kappa * y_d.kappa / (x_d.lambda * y_d.lambda);
    Ok(integrate_default(&mb, BIVARIATE_TOL)?.scaled(k))
}

/// The three natural-log terms of the ASC decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscTerms {
    pub i1: HValue,
    pub i2: HValue,
    pub i3: HValue,
}

impl AscTerms {
    pub fn bits(&self) -> f64 {
        (self.i1.value + self.i2.value - self.i3.value) / LN_2
    }

    pub fn error_bits(&self) -> f64 {
        (self.i1.error + self.i2.error + self.i3.error) / LN_2
    }
}

pub fn asc_terms(cfg: &WiretapConfig) -> Result<AscTerms> {
    cfg.validate()?;
    let b = cfg.main_density();
    let e = cfg.eve_density();
    Ok(AscTerms {
        i1: log_cdf_term(&b, &e)?,
        i2: log_cdf_term(&e, &b)?,
        i3: log_moment(&e, 0.0)?,
    })
}

/// Average secrecy capacity in bits/s/Hz.
pub fn asc_exact(cfg: &WiretapConfig) -> Result<MetricResult> {
    let t = asc_terms(cfg)?;
    let v = t.bits();
    if v < -1e-6 {
        return Err(Error::NegativeAsc(v));
    }
    Ok(MetricResult::new(v, Method::Exact, t.error_bits()))
}

fn cdf_mb(d: &HDensity) -> MellinBarnes {
    // F(x) = (k/l) int Theta(1+s) G(-s)/G(1-s) (l x)^-s ds, Re s < 0; here at l x = l
    let mut mb = MellinBarnes::new(1, vec![d.lambda.ln()]);
    let s = Affine::var(1, 0);
    push_theta(&mut mb, &d.params, &s.shifted(1.0));
    push_gamma(&mut mb, &s.neg(), true);
    push_gamma(&mut mb, &s.neg().shifted(1.0), false);
    mb
}

/// Leading small-argument term `F(x) ~ c x^(-tau)` of an H-distribution CDF.
pub fn cdf_leading_term(d: &HDensity) -> Result<(f64, AsymptoticExpansion)> {
    let mb = cdf_mb(d);
    let c = mb.choose_contour()?;
    let r = mb.leading_left_residue(c[0])?;
    Ok((
        d.kappa / d.lambda * r.value,
        AsymptoticExpansion {
            tau: r.pole,
            g: r.factor,
            order: 1,
        },
    ))
}

fn require_moment(d: &HDensity, nu: f64, what: &str) -> Result<()> {
    let right = d.params.shift(1.0).right_edge().unwrap_or(f64::INFINITY);
    if nu < right {
        Ok(())
    } else {
        Err(Error::Numerical(format!(
            "{what}: moment of order {nu} does not exist (tail index {right})"
        )))
    }
}

/// High-SNR exact-SOP asymptote `c_B E[(R_s gamma_E + W)^(-tau)]` from the
/// dominant left pole of the main-channel CDF.
pub fn sop_asymptotic(cfg: &WiretapConfig) -> Result<(MetricResult, AsymptoticExpansion)> {
    cfg.validate()?;
    let b = cfg.main_density();
    let e = cfg.eve_density();
    let (cb, exp) = cdf_leading_term(&b)?;
    let nu = -exp.tau;
    require_moment(&e, nu, "sop_asymptotic")?;
    let (rs, w) = (cfg.rate_factor(), cfg.offset());
    let m = expect(&e, |y| Ok((rs * y + w).powf(nu)), 1e-300)?;
    let v = cb * m.value;
    Ok((MetricResult::new(v, Method::Asymptotic, (cb * m.error).abs()), exp))
}

/// Residue expansion of the SOP lower bound for large `gamma_B`: leading left
/// pole of `Pr(gamma_B / R_s < gamma_E)` as an integral in `R_s lB / lE`.
pub fn sop_lower_bound_asymptotic(cfg: &WiretapConfig) -> Result<(MetricResult, AsymptoticExpansion)> {
    cfg.validate()?;
    let b = divided_by(&cfg.main_density(), cfg.rate_factor());
    let e = cfg.eve_density();
    leading_exceed_term(&e, &b)
}

/// Low-SNR PNZ asymptote (`gamma_B << gamma_E`).
pub fn pnz_asymptotic(cfg: &WiretapConfig) -> Result<(MetricResult, AsymptoticExpansion)> {
    cfg.validate()?;
    leading_exceed_term(&cfg.main_density(), &cfg.eve_density())
}

fn leading_exceed_term(x: &HDensity, y: &HDensity) -> Result<(MetricResult, AsymptoticExpansion)> {
    let (mb, k) = exceed_mb(x, y);
    let c = mb.choose_contour()?;
    let r = mb.leading_left_residue(c[0])?;
    Ok((
        MetricResult::new(k * r.value, Method::Asymptotic, 0.0),
        AsymptoticExpansion {
            tau: r.pole,
            g: r.factor,
            order: 1,
        },
    ))
}

/// `Theta'(1) / Theta(1)` as a digamma sum.
pub fn log_theta_derivative_at_one(d: &HDensity) -> Result<f64> {
    let p = &d.params;
    let mut acc = 0.0;
    for (l, &(b, be)) in p.lower.iter().enumerate() {
        if l < p.m {
            acc += be * digamma_real(b + be)?;
        } else {
            acc += be * digamma_real(1.0 - b - be)?;
        }
    }
    for (i, &(a, al)) in p.upper.iter().enumerate() {
        if i < p.n {
            acc -= al * digamma_real(1.0 - a - al)?;
        } else {
            acc -= al * digamma_real(a + al)?;
        }
    }
    Ok(acc)
}

/// High-SNR limit of `I1`: the double pole at the origin gives
/// `E[ln gamma_B] = -ln lB + Theta_B'(1)/Theta_B(1)`.
pub fn i1_asymptotic(cfg: &WiretapConfig) -> Result<f64> {
    let b = cfg.main_density();
    Ok(cfg.kappa_scale * (-b.lambda.ln() + log_theta_derivative_at_one(&b)?))
}

/// High-SNR ASC: asymptotic I1 and I2, exact I3.
pub fn asc_asymptotic(cfg: &WiretapConfig) -> Result<MetricResult> {
    cfg.validate()?;
    let b = cfg.main_density();
    let e = cfg.eve_density();
    let i1 = i1_asymptotic(cfg)?;
    let (cb, exp) = cdf_leading_term(&b)?;
    let nu = -exp.tau;
    require_moment(&e, nu, "asc_asymptotic")?;
    let i2 = log_moment(&e, nu)?;
    let i3 = log_moment(&e, 0.0)?;
    let v = (i1 + cb * i2.value - i3.value) / LN_2;
    Ok(MetricResult::new(v, Method::Asymptotic, (cb * i2.error + i3.error) / LN_2))
}

pub use crate::table2::{table2_metrics, Table2Metrics};

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_pair(rate: f64) -> WiretapConfig {
        WiretapConfig::new(
            FadingModel::exponential_snr(2.0),
            FadingModel::exponential_snr(1.0),
            rate,
        )
    }

    #[test]
    fn exponential_closed_forms() {
        let p = pnz_exact(&exp_pair(1.0)).unwrap();
        assert!((p.value - 2.0 / 3.0).abs() < 1e-9, "{p:?}");
        let s = sop_exact(&exp_pair(1.0)).unwrap();
        let exact = 1.0 - 0.5 * (-0.5f64).exp();
        assert!((s.value - exact).abs() < 1e-7, "{s:?} vs {exact}");
        let l = sop_lower_bound(&exp_pair(1.0)).unwrap();
        assert!((l.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn two_fold_form_agrees() {
        let s = sop_exact_two_fold(&exp_pair(1.0)).unwrap();
        let exact = 1.0 - 0.5 * (-0.5f64).exp();
        assert!((s.value - exact).abs() < 1e-7, "{s:?}");
    }

    #[test]
    fn complementary_form_agrees() {
        let s = sop_exact_complementary(&exp_pair(1.0)).unwrap();
        let exact = 1.0 - 0.5 * (-0.5f64).exp();
        assert!((s.value - exact).abs() < 1e-6, "{s:?}");
    }

    #[test]
    fn identical_models_are_symmetric() {
        let m = FadingModel::fisher_f(2.0, 3.0, 4.0);
        let cfg = WiretapConfig::new(m, m, 0.0);
        assert!((pnz_exact(&cfg).unwrap().value - 0.5).abs() < 1e-9);
        assert!((sop_exact(&cfg).unwrap().value - 0.5).abs() < 1e-9);
        let t = asc_terms(&cfg).unwrap();
        assert!((t.i1.value - t.i2.value).abs() < 1e-6 * t.i1.value);
    }

    #[test]
    fn probability_check_rejects() {
        assert!(MetricResult::new(1.1, Method::Exact, 0.0).checked_probability().is_err());
        assert!(MetricResult::new(-1e-7, Method::Exact, 0.0).checked_probability().is_ok());
    }

    #[test]
    fn pnz_asymptote_exponential() {
        // gamma_B / gamma_E = 0.01: asymptote = ratio
        let cfg = WiretapConfig::new(
            FadingModel::exponential_snr(0.01),
            FadingModel::exponential_snr(1.0),
            0.0,
        );
        let (a, e) = pnz_asymptotic(&cfg).unwrap();
        assert!((a.value - 0.01).abs() < 1e-12, "{a:?} {e:?}");
    }

    #[test]
    fn method_round_trip() {
        for m in ["exact", "lower_bound", "asymptotic", "table2", "monte_carlo"] {
            assert_eq!(m.parse::<Method>().unwrap().as_str(), m);
        }
    }
}

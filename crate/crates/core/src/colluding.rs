//! Secrecy metrics against `L` cooperating eavesdroppers that combine their
//! observations by MRC (SNR sum) or SC (SNR max).
//!
//! All expressions are `L`-fold Mellin-Barnes integrals with one variable per
//! eavesdropper (the SC bound adds one for the main link and drops one
//! eavesdropper per term), so `L` is capped at [`L_MAX`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::FadingModel;
use crate::foxh::{
    integrate_default, push_gamma, push_theta, Affine, HDensity, HValue, BIVARIATE_TOL, L_MAX,
    MULTIVARIATE_TOL, UNIVARIATE_TOL,
};
use crate::mellin::MellinBarnes;
use crate::secrecy::{divided_by, scaled_kappa, Method, MetricResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Mrc,
    Sc,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Mrc => "mrc",
            Scheme::Sc => "sc",
        })
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollusionConfig {
    pub main: FadingModel,
    pub eves: Vec<FadingModel>,
    pub scheme: Scheme,
    pub target_rate: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub kappa_scale: f64,
}

impl CollusionConfig {
    pub fn new(main: FadingModel, eves: Vec<FadingModel>, scheme: Scheme, target_rate: f64) -> Self {
        CollusionConfig {
            main,
            eves,
            scheme,
            target_rate,
            kappa_scale: 1.0,
        }
    }

    /// `l` eavesdroppers with the same fading model.
    pub fn homogeneous(main: FadingModel, eve: FadingModel, l: usize, scheme: Scheme, target_rate: f64) -> Self {
        Self::new(main, vec![eve; l], scheme, target_rate)
    }

    pub fn num_eves(&self) -> usize {
        self.eves.len()
    }

    /// Validity of the models and rate. Any `L >= 1` is accepted here; the
    /// analytic evaluators additionally need `L <= L_MAX`.
    pub fn validate(&self) -> Result<()> {
        self.main.validate()?;
        if self.eves.is_empty() {
            return Err(Error::InvalidParams("eves must hold at least one model".into()));
        }
        for e in &self.eves {
            e.validate()?;
        }
        if !(self.target_rate >= 0.0 && self.target_rate.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "target_rate must be >= 0, got {}",
                self.target_rate
            )));
        }
        Ok(())
    }

    fn validate_analytic(&self) -> Result<()> {
        self.validate()?;
        if self.eves.len() > L_MAX {
            return Err(Error::Dimension {
                got: self.eves.len(),
                max: L_MAX,
            });
        }
        Ok(())
    }

    pub fn rate_factor(&self) -> f64 {
        self.target_rate.exp2()
    }

    pub fn offset(&self) -> f64 {
        self.target_rate.exp2() - 1.0
    }

    pub fn main_density(&self) -> HDensity {
        scaled_kappa(self.main.to_h_density(), self.kappa_scale)
    }

    pub fn eve_densities(&self) -> Vec<HDensity> {
        self.eves
            .iter()
            .map(|e| scaled_kappa(e.to_h_density(), self.kappa_scale))
            .collect()
    }

    /// `eta_C = prod_r kappa_r / lambda_r`.
    pub fn eta(&self) -> f64 {
        self.eve_densities().iter().map(|d| d.kappa / d.lambda).product()
    }
}

fn tolerance(dim: usize) -> f64 {
    match dim {
        1 => UNIVARIATE_TOL,
        2 => BIVARIATE_TOL,
        _ => MULTIVARIATE_TOL,
    }
}

/// Pushes `Theta_r(1 + t_r) G(-t_r)` for every eavesdropper, plus
/// `1 / G(1 - t_r)` when `per_branch_cdf` (SC).
fn push_branches(mb: &mut MellinBarnes, eves: &[HDensity], vars: &[usize], per_branch_cdf: bool) {
    let d = mb.dim;
    for (e, &k) in eves.iter().zip(vars) {
        let t = Affine::var(d, k);
        push_theta(mb, &e.params, &t.shifted(1.0));
        push_gamma(mb, &t.neg(), true);
        if per_branch_cdf {
            push_gamma(mb, &t.neg().shifted(1.0), false);
        }
    }
}

fn sum_of(dim: usize, vars: &[usize]) -> Affine {
    let mut s = Affine {
        constant: 0.0,
        weights: vec![0.0; dim],
    };
    for &k in vars {
        s.weights[k] = 1.0;
    }
    s
}

/// MRC density and CDF of `gamma_C = sum_r gamma_r`:
///
/// ```text
/// F_C(x) = eta int prod_r [Theta_r(1+t_r) G(-t_r) (lambda_r x)^-t_r] / G(1 - T) dt
/// f_C(x) = eta / x int prod_r [...] / G(-T) dt
/// ```
fn mrc_pdf_cdf(eves: &[HDensity], x: f64) -> Result<(HValue, HValue)> {
    let l = eves.len();
    let vars: Vec<usize> = (0..l).collect();
    let logs: Vec<f64> = eves.iter().map(|e| (e.lambda * x).ln()).collect();
    let eta: f64 = eves.iter().map(|d| d.kappa / d.lambda).product();
    let total = sum_of(l, &vars);
    let mut cdf = MellinBarnes::new(l, logs.clone());
    push_branches(&mut cdf, eves, &vars, false);
    push_gamma(&mut cdf, &total.neg().shifted(1.0), false);
    let mut pdf = MellinBarnes::new(l, logs);
    push_branches(&mut pdf, eves, &vars, false);
    push_gamma(&mut pdf, &total.neg(), false);
    let tol = tolerance(l);
    Ok((
        integrate_default(&pdf, tol)?.scaled(eta / x),
        integrate_default(&cdf, tol)?.scaled(eta),
    ))
}

/// SC density and CDF from the per-eavesdropper marginals.
fn sc_pdf_cdf(eves: &[HDensity], x: f64) -> Result<(HValue, HValue)> {
    let mut pdfs = Vec::with_capacity(eves.len());
    let mut cdfs = Vec::with_capacity(eves.len());
    for e in eves {
        pdfs.push(e.pdf(x)?);
        cdfs.push(e.cdf(x)?);
    }
    let cdf: f64 = cdfs.iter().map(|c| c.value).product();
    let mut pdf = 0.0;
    for r in 0..eves.len() {
        let others: f64 = (0..eves.len()).filter(|&l| l != r).map(|l| cdfs[l].value).product();
        pdf += pdfs[r].value * others;
    }
    let err = |vals: &[HValue]| vals.iter().map(|v| v.error).sum::<f64>();
    Ok((
        HValue {
            value: pdf,
            error: err(&pdfs) + err(&cdfs),
            l1: pdf.abs(),
        },
        HValue {
            value: cdf,
            error: err(&cdfs),
            l1: cdf.abs(),
        },
    ))
}

/// `(f_C(x), F_C(x))` of the combined eavesdropper SNR.
pub fn colluder_pdf_cdf(cfg: &CollusionConfig, x: f64) -> Result<(HValue, HValue)> {
    cfg.validate_analytic()?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParams(format!("gamma must be > 0, got {x}")));
    }
    let eves = cfg.eve_densities();
    match cfg.scheme {
        Scheme::Mrc => mrc_pdf_cdf(&eves, x),
        Scheme::Sc => sc_pdf_cdf(&eves, x),
    }
}

/// `Pr(gamma_B > gamma_C) = E_B[F_C(gamma_B)]`:
///
/// ```text
/// (eta kB / lB) int Theta_B(1 - T) [1/G(1 - T)]_MRC prod_r Theta_r(1+t_r) G(-t_r)
///               [1/G(1 - t_r)]_SC (lambda_r / lB)^-t_r dt
/// ```
fn exceed_combined(b: &HDensity, eves: &[HDensity], scheme: Scheme) -> Result<HValue> {
    let l = eves.len();
    let vars: Vec<usize> = (0..l).collect();
    let mut mb = MellinBarnes::new(l, eves.iter().map(|e| (e.lambda / b.lambda).ln()).collect());
    push_branches(&mut mb, eves, &vars, scheme == Scheme::Sc);
    let total = sum_of(l, &vars);
    push_theta(&mut mb, &b.params, &total.neg().shifted(1.0));
    if scheme == Scheme::Mrc {
        push_gamma(&mut mb, &total.neg().shifted(1.0), false);
    }
    let eta: f64 = eves.iter().map(|d| d.kappa / d.lambda).product();
    Ok(integrate_default(&mb, tolerance(l))?.scaled(eta * b.kappa / b.lambda))
}

fn require(cfg: &CollusionConfig, scheme: Scheme) -> Result<()> {
    cfg.validate_analytic()?;
    if cfg.scheme != scheme {
        return Err(Error::InvalidParams(format!(
            "{scheme} evaluator called with a {} configuration",
            cfg.scheme
        )));
    }
    Ok(())
}

/// Exact PNZ against MRC colluders.
pub fn pnz_mrc(cfg: &CollusionConfig) -> Result<MetricResult> {
    require(cfg, Scheme::Mrc)?;
    let h = exceed_combined(&cfg.main_density(), &cfg.eve_densities(), Scheme::Mrc)?;
    MetricResult::new(h.value, Method::Exact, h.error).checked_probability()
}

/// Exact PNZ against SC colluders.
pub fn pnz_sc(cfg: &CollusionConfig) -> Result<MetricResult> {
    require(cfg, Scheme::Sc)?;
    let h = exceed_combined(&cfg.main_density(), &cfg.eve_densities(), Scheme::Sc)?;
    MetricResult::new(h.value, Method::Exact, h.error).checked_probability()
}

/// `Pr(gamma_B < R_s gamma_C)` for MRC: one minus the PNZ kernel with the
/// main link divided by `R_s`, i.e. arguments `lambda_r / (lambda_B R_s)`.
pub fn sop_lower_bound_mrc(cfg: &CollusionConfig) -> Result<MetricResult> {
    require(cfg, Scheme::Mrc)?;
    let b = divided_by(&cfg.main_density(), cfg.rate_factor());
    let h = exceed_combined(&b, &cfg.eve_densities(), Scheme::Mrc)?;
    MetricResult::new(1.0 - h.value, Method::LowerBound, h.error).checked_probability()
}

/// `Pr(gamma_B < R_s max_r gamma_r)` for SC as a sum over the eavesdropper
/// `tau` attaining the maximum:
///
/// ```text
/// sum_tau (eta kB / lB) int Theta_B(1+x) G(-x)/G(1-x) (lB R_s / l_tau)^-x
///     prod_{l != tau} Theta_l(1+t_l) G(-t_l)/G(1-t_l) (l_l / l_tau)^-t_l
///     Theta_tau(1 - x - sum t_l)
/// ```
pub fn sop_lower_bound_sc(cfg: &CollusionConfig) -> Result<MetricResult> {
    require(cfg, Scheme::Sc)?;
    let b = cfg.main_density();
    let eves = cfg.eve_densities();
    let rs = cfg.rate_factor();
    let l = eves.len();
    let eta = cfg.eta();
    let mut value = 0.0;
    let mut error = 0.0;
    for tau in 0..l {
        let lt = eves[tau].lambda;
        let others: Vec<HDensity> = (0..l).filter(|&k| k != tau).map(|k| eves[k].clone()).collect();
        let mut logs = vec![(b.lambda * rs / lt).ln()];
        logs.extend(others.iter().map(|e| (e.lambda / lt).ln()));
        let mut mb = MellinBarnes::new(l, logs);
        let x = Affine::var(l, 0);
        push_theta(&mut mb, &b.params, &x.shifted(1.0));
        push_gamma(&mut mb, &x.neg(), true);
        push_gamma(&mut mb, &x.neg().shifted(1.0), false);
        let vars: Vec<usize> = (1..l).collect();
        push_branches(&mut mb, &others, &vars, true);
        let all: Vec<usize> = (0..l).collect();
        push_theta(&mut mb, &eves[tau].params, &sum_of(l, &all).neg().shifted(1.0));
        let h = integrate_default(&mb, tolerance(l))?;
        value += h.value;
        error += h.error;
    }
    let k = eta * b.kappa / b.lambda;
    MetricResult::new(k * value, Method::LowerBound, k * error).checked_probability()
}

/// Scheme-dispatched exact PNZ.
pub fn pnz_colluding(cfg: &CollusionConfig) -> Result<MetricResult> {
    match cfg.scheme {
        Scheme::Mrc => pnz_mrc(cfg),
        Scheme::Sc => pnz_sc(cfg),
    }
}

/// Scheme-dispatched SOP lower bound.
pub fn sop_lower_bound_colluding(cfg: &CollusionConfig) -> Result<MetricResult> {
    match cfg.scheme {
        Scheme::Mrc => sop_lower_bound_mrc(cfg),
        Scheme::Sc => sop_lower_bound_sc(cfg),
    }
}

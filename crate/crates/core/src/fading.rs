//! Fading models whose SNR density is an H-function.
//!
//! Parameterizations follow the usual catalog (alpha-mu, Fisher-Snedecor F,
//! extended generalized-K) in the SNR domain. Everything here is linear
//! SNR; decibels only appear in the JSON representation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foxh::{HDensity, HParams, HValue};
use crate::special::log_gamma_abs;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub enum FadingModel {
    AlphaMu { alpha: f64, mu: f64, mean_snr: f64 },
    FisherF { m: f64, m_s: f64, mean_snr: f64 },
    Egk { m: f64, m_s: f64, xi: f64, xi_s: f64, mean_snr: f64 },
}

/// A single linear-SNR realization.
pub type SnrSample = f64;

#[derive(Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
enum ModelJson {
    AlphaMu { alpha: f64, mu: f64, mean_snr_db: f64 },
    FisherF { m: f64, m_s: f64, mean_snr_db: f64 },
    Egk { m: f64, m_s: f64, xi: f64, xi_s: f64, mean_snr_db: f64 },
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl TryFrom<ModelJson> for FadingModel {
    type Error = Error;

    fn try_from(j: ModelJson) -> Result<Self> {
        let model = match j {
            ModelJson::AlphaMu { alpha, mu, mean_snr_db } => FadingModel::AlphaMu {
                alpha,
                mu,
                mean_snr: db_to_linear(mean_snr_db),
            },
            ModelJson::FisherF { m, m_s, mean_snr_db } => FadingModel::FisherF {
                m,
                m_s,
                mean_snr: db_to_linear(mean_snr_db),
            },
            ModelJson::Egk { m, m_s, xi, xi_s, mean_snr_db } => FadingModel::Egk {
                m,
                m_s,
                xi,
                xi_s,
                mean_snr: db_to_linear(mean_snr_db),
            },
        };
        model.validate()?;
        Ok(model)
    }
}

impl From<FadingModel> for ModelJson {
    fn from(f: FadingModel) -> Self {
        match f {
            FadingModel::AlphaMu { alpha, mu, mean_snr } => ModelJson::AlphaMu {
                alpha,
                mu,
                mean_snr_db: linear_to_db(mean_snr),
            },
            FadingModel::FisherF { m, m_s, mean_snr } => ModelJson::FisherF {
                m,
                m_s,
                mean_snr_db: linear_to_db(mean_snr),
            },
            FadingModel::Egk { m, m_s, xi, xi_s, mean_snr } => ModelJson::Egk {
                m,
                m_s,
                xi,
                xi_s,
                mean_snr_db: linear_to_db(mean_snr),
            },
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")))
    }
}

fn beta(shape: f64, power: f64) -> f64 {
    (log_gamma_abs(shape + 1.0 / power).unwrap() - log_gamma_abs(shape).unwrap()).exp()
}

impl FadingModel {
    pub fn alpha_mu(alpha: f64, mu: f64, mean_snr: f64) -> Self {
        FadingModel::AlphaMu { alpha, mu, mean_snr }
    }

    pub fn fisher_f(m: f64, m_s: f64, mean_snr: f64) -> Self {
        FadingModel::FisherF { m, m_s, mean_snr }
    }

    pub fn egk(m: f64, m_s: f64, xi: f64, xi_s: f64, mean_snr: f64) -> Self {
        FadingModel::Egk { m, m_s, xi, xi_s, mean_snr }
    }

    /// Rayleigh as labelled in the alpha-mu figure convention: alpha=2, mu=1.
    pub fn rayleigh_snr_convention(mean_snr: f64) -> Self {
        Self::alpha_mu(2.0, 1.0, mean_snr)
    }

    /// Exponentially distributed SNR (alpha=1, mu=1), the classic closed-form case.
    pub fn exponential_snr(mean_snr: f64) -> Self {
        Self::alpha_mu(1.0, 1.0, mean_snr)
    }

    pub fn nakagami(m: f64, mean_snr: f64) -> Self {
        Self::alpha_mu(2.0, m, mean_snr)
    }

    pub fn weibull(alpha: f64, mean_snr: f64) -> Self {
        Self::alpha_mu(alpha, 1.0, mean_snr)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingModel::AlphaMu { alpha, mu, mean_snr } => {
                positive("alpha", alpha)?;
                positive("mu", mu)?;
                positive("mean_snr", mean_snr)
            }
            FadingModel::FisherF { m, m_s, mean_snr } => {
                positive("m", m)?;
                positive("m_s", m_s)?;
                positive("mean_snr", mean_snr)
            }
            FadingModel::Egk { m, m_s, xi, xi_s, mean_snr } => {
                positive("m", m)?;
                positive("m_s", m_s)?;
                positive("xi", xi)?;
                positive("xi_s", xi_s)?;
                positive("mean_snr", mean_snr)
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            FadingModel::AlphaMu { .. } => "alpha_mu",
            FadingModel::FisherF { .. } => "fisher_f",
            FadingModel::Egk { .. } => "egk",
        }
    }

    pub fn mean_snr(&self) -> f64 {
        match *self {
            FadingModel::AlphaMu { mean_snr, .. }
            | FadingModel::FisherF { mean_snr, .. }
            | FadingModel::Egk { mean_snr, .. } => mean_snr,
        }
    }

    pub fn with_mean_snr(&self, snr: f64) -> Self {
        let mut out = *self;
        match &mut out {
            FadingModel::AlphaMu { mean_snr, .. }
            | FadingModel::FisherF { mean_snr, .. }
            | FadingModel::Egk { mean_snr, .. } => *mean_snr = snr,
        }
        out
    }

    /// First moment implied by the H-density. For Fisher-F the catalog scale
    /// `lambda = m / (m_s mean_snr)` gives `mean_snr * m_s / (m_s - 1)`, and no
    /// mean at all when `m_s <= 1`.
    pub fn mean(&self) -> Option<f64> {
        match *self {
            FadingModel::FisherF { m_s, mean_snr, .. } => {
                (m_s > 1.0).then(|| mean_snr * m_s / (m_s - 1.0))
            }
            _ => Some(self.mean_snr()),
        }
    }

    pub fn to_h_density(&self) -> HDensity {
        match *self {
            FadingModel::AlphaMu { alpha, mu, mean_snr } => {
                let b = beta(mu, alpha);
                let g_mu = log_gamma_abs(mu).unwrap().exp();
                HDensity {
                    kappa: b / (g_mu * mean_snr),
                    lambda: b / mean_snr,
                    params: HParams {
                        m: 1,
                        n: 0,
                        p: 0,
                        q: 1,
                        upper: vec![],
                        lower: vec![(mu - 1.0 / alpha, 1.0 / alpha)],
                    },
                }
            }
            FadingModel::FisherF { m, m_s, mean_snr } => {
                let lambda = m / (m_s * mean_snr);
                let norm = (log_gamma_abs(m).unwrap() + log_gamma_abs(m_s).unwrap()).exp();
                HDensity {
                    kappa: lambda / norm,
                    lambda,
                    params: HParams {
                        m: 1,
                        n: 1,
                        p: 1,
                        q: 1,
                        upper: vec![(-m_s, 1.0)],
                        lower: vec![(m - 1.0, 1.0)],
                    },
                }
            }
            FadingModel::Egk { m, m_s, xi, xi_s, mean_snr } => {
                let bb = beta(m, xi) * beta(m_s, xi_s);
                let norm = (log_gamma_abs(m).unwrap() + log_gamma_abs(m_s).unwrap()).exp();
                HDensity {
                    kappa: bb / (norm * mean_snr),
                    lambda: bb / mean_snr,
                    params: HParams {
                        m: 2,
                        n: 0,
                        p: 0,
                        q: 2,
                        upper: vec![],
                        lower: vec![(m - 1.0 / xi, 1.0 / xi), (m_s - 1.0 / xi_s, 1.0 / xi_s)],
                    },
                }
            }
        }
    }

    pub fn pdf(&self, gamma: f64) -> Result<HValue> {
        self.to_h_density().pdf(gamma)
    }

    pub fn cdf(&self, gamma: f64) -> Result<HValue> {
        self.to_h_density().cdf(gamma)
    }

    pub fn ccdf(&self, gamma: f64) -> Result<HValue> {
        self.to_h_density().ccdf(gamma)
    }

    pub fn sampler(&self) -> Sampler {
        let lambda = self.to_h_density().lambda;
        let g = |shape: f64| Gamma::new(shape, 1.0).expect("validated shape");
        match *self {
            FadingModel::AlphaMu { alpha, mu, .. } => Sampler {
                lambda,
                first: (g(mu), 1.0 / alpha),
                second: None,
            },
            FadingModel::FisherF { m, m_s, .. } => Sampler {
                lambda,
                first: (g(m), 1.0),
                second: Some((g(m_s), -1.0)),
            },
            FadingModel::Egk { m, m_s, xi, xi_s, .. } => Sampler {
                lambda,
                first: (g(m), 1.0 / xi),
                second: Some((g(m_s), 1.0 / xi_s)),
            },
        }
    }

    /// `count` SNR draws from a generator seeded with `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<SnrSample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = self.sampler();
        (0..count).map(|_| s.draw(&mut rng)).collect()
    }
}

/// Exact sampler: `gamma = G1^p1 * G2^p2 / lambda` with unit-scale gamma
/// variates. The Mellin transform of the draw matches the model's kernel.
#[derive(Debug, Clone)]
pub struct Sampler {
    lambda: f64,
    first: (Gamma<f64>, f64),
    second: Option<(Gamma<f64>, f64)>,
}

impl Sampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut x = self.first.0.sample(rng).powf(self.first.1);
        if let Some((d, p)) = &self.second {
            x *= d.sample(rng).powf(*p);
        }
        x / self.lambda
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foxh::theta_real;

    #[test]
    fn exponential_density() {
        let d = FadingModel::exponential_snr(1.0).to_h_density();
        assert!((d.kappa - 1.0).abs() < 1e-14 && (d.lambda - 1.0).abs() < 1e-14);
        assert_eq!(d.params.lower, vec![(0.0, 1.0)]);
        let p = FadingModel::exponential_snr(1.0).pdf(1.0).unwrap();
        assert!((p.value - (-1f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn alpha_mu_two_one() {
        let d = FadingModel::rayleigh_snr_convention(1.0).to_h_density();
        let b = std::f64::consts::PI.sqrt() / 2.0;
        assert!((d.kappa - b).abs() < 1e-14 && (d.lambda - b).abs() < 1e-14);
        assert!((d.kappa - 0.886_227).abs() < 1e-6);
        assert_eq!(d.params.lower, vec![(0.5, 0.5)]);
    }

    #[test]
    fn fisher_f_density() {
        let d = FadingModel::fisher_f(2.0, 3.0, 1.0).to_h_density();
        assert!((d.lambda - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.kappa - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(d.params.upper, vec![(-3.0, 1.0)]);
        assert_eq!(d.params.lower, vec![(1.0, 1.0)]);
    }

    #[test]
    fn every_family_is_normalized() {
        for m in [
            FadingModel::alpha_mu(2.5, 1.7, 3.0),
            FadingModel::fisher_f(2.0, 3.0, 0.5),
            FadingModel::egk(2.0, 4.0, 1.3, 0.8, 2.0),
        ] {
            let d = m.to_h_density();
            let total = d.kappa / d.lambda * theta_real(&d.params, 1.0).unwrap();
            assert!((total - 1.0).abs() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn invalid_shape_named() {
        let err = FadingModel::fisher_f(2.0, 0.0, 1.0).validate().unwrap_err();
        assert!(err.to_string().contains("m_s must be > 0"));
    }

    #[test]
    fn json_uses_decibels() {
        let m = FadingModel::nakagami(2.0, 10.0);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"model\":\"alpha_mu\"") && s.contains("\"mean_snr_db\":10"));
        let back: FadingModel = serde_json::from_str(&s).unwrap();
        assert!((back.mean_snr() - 10.0).abs() < 1e-12);
        let bad = r#"{"model":"fisher_f","m":2,"m_s":-1,"mean_snr_db":0}"#;
        assert!(serde_json::from_str::<FadingModel>(bad).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = FadingModel::egk(2.0, 4.0, 1.0, 1.0, 1.0);
        assert_eq!(m.sample(7, 100), m.sample(7, 100));
        assert_ne!(m.sample(7, 100), m.sample(8, 100));
    }

    #[test]
    fn cdf_plus_ccdf() {
        let m = FadingModel::fisher_f(2.0, 3.0, 1.0);
        let c = m.cdf(1.0).unwrap().value;
        let cc = m.ccdf(1.0).unwrap().value;
        assert!((c + cc - 1.0).abs() < 1e-9);
    }
}

//! JSON scenarios and sweep specifications.
//!
//! A scenario with an `eve` key is a single-eavesdropper link; one with an
//! `eves` array (plus `scheme`) is a colluding set. SNRs are in dB here and
//! linear everywhere else.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::colluding::CollusionConfig;
use crate::error::{Error, Result};
use crate::fading::{db_to_linear, FadingModel};
use crate::secrecy::{Method, WiretapConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scenario {
    Single(WiretapConfig),
    Colluding(CollusionConfig),
}

impl From<&WiretapConfig> for Scenario {
    fn from(c: &WiretapConfig) -> Self {
        Scenario::Single(*c)
    }
}

impl From<WiretapConfig> for Scenario {
    fn from(c: WiretapConfig) -> Self {
        Scenario::Single(c)
    }
}

impl From<&CollusionConfig> for Scenario {
    fn from(c: &CollusionConfig) -> Self {
        Scenario::Colluding(c.clone())
    }
}

impl From<CollusionConfig> for Scenario {
    fn from(c: CollusionConfig) -> Self {
        Scenario::Colluding(c)
    }
}

fn json_err(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    Error::InvalidParams(msg.strip_prefix("invalid parameters: ").unwrap_or(&msg).to_string())
}

impl Scenario {
    /// Parses either shape, dispatching on the `eves` key so that field
    /// errors name the offending field.
    pub fn from_json_value(v: Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidParams("config must be a JSON object".into()))?;
        let s = if obj.contains_key("eves") {
            Scenario::Colluding(serde_json::from_value(v).map_err(json_err)?)
        } else {
            Scenario::Single(serde_json::from_value(v).map_err(json_err)?)
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_value(serde_json::from_str(text).map_err(json_err)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::Single(c) => c.validate(),
            Scenario::Colluding(c) => c.validate(),
        }
    }

    pub fn main(&self) -> &FadingModel {
        match self {
            Scenario::Single(c) => &c.main,
            Scenario::Colluding(c) => &c.main,
        }
    }

    pub fn target_rate(&self) -> f64 {
        match self {
            Scenario::Single(c) => c.target_rate,
            Scenario::Colluding(c) => c.target_rate,
        }
    }

    pub fn kappa_scale(&self) -> f64 {
        match self {
            Scenario::Single(c) => c.kappa_scale,
            Scenario::Colluding(c) => c.kappa_scale,
        }
    }

    pub fn with_kappa_scale(mut self, k: f64) -> Self {
        match &mut self {
            Scenario::Single(c) => c.kappa_scale = k,
            Scenario::Colluding(c) => c.kappa_scale = k,
        }
        self
    }

    pub fn with_main_snr_db(mut self, db: f64) -> Self {
        let snr = db_to_linear(db);
        match &mut self {
            Scenario::Single(c) => c.main = c.main.with_mean_snr(snr),
            Scenario::Colluding(c) => c.main = c.main.with_mean_snr(snr),
        }
        self
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        match &mut self {
            Scenario::Single(c) => c.target_rate = rate,
            Scenario::Colluding(c) => c.target_rate = rate,
        }
        self
    }

    /// Replaces the eavesdropper set by `l` copies of the first eavesdropper.
    pub fn with_num_eves(self, l: usize) -> Result<Self> {
        match self {
            Scenario::Colluding(mut c) => {
                let e = c.eves[0];
                c.eves = vec![e; l];
                Ok(Scenario::Colluding(c))
            }
            Scenario::Single(_) => Err(Error::InvalidParams(
                "axis l needs a colluding config (eves, scheme)".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Sop,
    Pnz,
    Asc,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Sop => "sop",
            Metric::Pnz => "pnz",
            Metric::Asc => "asc",
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sop" => Ok(Metric::Sop),
            "pnz" => Ok(Metric::Pnz),
            "asc" => Ok(Metric::Asc),
            _ => Err(Error::InvalidParams(format!("unknown metric {s:?} (sop, pnz, asc)"))),
        }
    }
}

/// Whether `method` is defined for `metric` in this scenario kind. Colluding
/// sets have an exact PNZ and an SOP lower bound; everything else there is
/// Monte-Carlo only.
pub fn check_method(s: &Scenario, metric: Metric, method: Method) -> Result<()> {
    use Method::*;
    let ok = match (s, metric, method) {
        (_, _, MonteCarlo) => true,
        (Scenario::Single(_), Metric::Sop, _) => true,
        (Scenario::Single(_), _, LowerBound) => false,
        (Scenario::Single(_), _, _) => true,
        (Scenario::Colluding(_), Metric::Pnz, Exact) => true,
        (Scenario::Colluding(_), Metric::Sop, LowerBound) => true,
        (Scenario::Colluding(_), _, _) => false,
    };
    if ok {
        Ok(())
    } else {
        let kind = match s {
            Scenario::Single(_) => "single-eavesdropper",
            Scenario::Colluding(_) => "colluding",
        };
        Err(Error::UnsupportedModel(format!(
            "method {method} is not available for {metric} in a {kind} config"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Main-link mean SNR in dB.
    MeanSnrDb,
    /// Target secrecy rate in bits/s/Hz.
    Rate,
    /// Number of colluding eavesdroppers.
    L,
}

fn default_samples() -> usize {
    1_000_000
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub base: Value,
    pub metrics: Vec<Metric>,
    pub methods: Vec<Method>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

/// A validated sweep: base scenario plus the grid.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub spec: SweepSpec,
    pub base: Scenario,
    pub grid: Vec<f64>,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Sweep> {
        let spec: SweepSpec = serde_json::from_str(text).map_err(json_err)?;
        spec.build()
    }

    pub fn build(self) -> Result<Sweep> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParams(format!("step must be > 0, got {}", self.step)));
        }
        if !(self.start < self.stop) {
            return Err(Error::InvalidParams(format!(
                "start must be < stop, got {} and {}",
                self.start, self.stop
            )));
        }
        if self.metrics.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParams("metrics and methods must be non-empty".into()));
        }
        let base = Scenario::from_json_value(self.base.clone())?;
        for &m in &self.metrics {
            for &k in &self.methods {
                check_method(&base, m, k)?;
            }
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        let grid: Vec<f64> = (0..n).map(|i| self.start + i as f64 * self.step).collect();
        match self.axis {
            Axis::L => {
                base.clone().with_num_eves(1)?;
                if grid.iter().any(|&x| x < 1.0 || x.fract() != 0.0) {
                    return Err(Error::InvalidParams("axis l needs integer values >= 1".into()));
                }
            }
            Axis::Rate if self.start < 0.0 => {
                return Err(Error::InvalidParams(format!("rate must be >= 0, got {}", self.start)));
            }
            _ => {}
        }
        Ok(Sweep { spec: self, base, grid })
    }
}

impl Sweep {
    pub fn scenario_at(&self, x: f64) -> Result<Scenario> {
        match self.spec.axis {
            Axis::MeanSnrDb => Ok(self.base.clone().with_main_snr_db(x)),
            Axis::Rate => Ok(self.base.clone().with_rate(x)),
            Axis::L => self.base.clone().with_num_eves(x as usize),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXP: &str = r#"{
        "main": {"model": "alpha_mu", "alpha": 1, "mu": 1, "mean_snr_db": 3.0103},
        "eve": {"model": "alpha_mu", "alpha": 1, "mu": 1, "mean_snr_db": 0},
        "target_rate": 1
    }"#;

    #[test]
    fn single_round_trip() {
        let s = Scenario::from_json(EXP).unwrap();
        let Scenario::Single(c) = &s else { panic!() };
        assert!((c.main.mean_snr() - 2.0).abs() < 1e-4);
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn colluding_shape() {
        let s = Scenario::from_json(
            r#"{"main": {"model": "alpha_mu", "alpha": 1, "mu": 1, "mean_snr_db": 10},
                "eves": [{"model": "fisher_f", "m": 2, "m_s": 3, "mean_snr_db": 0}],
                "scheme": "sc", "target_rate": 0.1}"#,
        )
        .unwrap();
        assert!(matches!(s, Scenario::Colluding(_)));
        assert!(check_method(&s, Metric::Asc, Method::Exact).is_err());
        assert!(check_method(&s, Metric::Sop, Method::LowerBound).is_ok());
    }

    #[test]
    fn bad_shape_names_field() {
        let e = Scenario::from_json(&EXP.replace("\"mu\": 1, \"mean_snr_db\": 0", "\"mu\": -1, \"mean_snr_db\": 0"))
            .unwrap_err()
            .to_string();
        assert!(e.contains("mu must be > 0"), "{e}");
    }

    #[test]
    fn grid_inclusive() {
        let text = format!(
            r#"{{"axis": "mean_snr_db", "start": 0, "stop": 30, "step": 2, "base": {EXP},
                "metrics": ["sop"], "methods": ["exact", "lower_bound"]}}"#
        );
        let s = SweepSpec::from_json(&text).unwrap();
        assert_eq!(s.grid.len(), 16);
        assert_eq!(*s.grid.last().unwrap(), 30.0);
    }
}

//! Closed-form rows for same-family links: SOP, PNZ and ASC as explicit
//! univariate or bivariate H-functions with literal parameter lists.
//!
//! These are an independent route to the values of [`crate::secrecy`]: the
//! gamma products are written out per family instead of being assembled from
//! the density kernels.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::fading::FadingModel;
use crate::foxh::{eval_h, eval_h_multi, log_kernel_params, CoupledPair, HParams, MultivariateHParams};
use crate::secrecy::{Method, MetricResult, WiretapConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2Metrics {
    pub sop: MetricResult,
    pub pnz: MetricResult,
    pub asc: MetricResult,
}

fn pair(coeff: f64, w: f64) -> CoupledPair {
    CoupledPair {
        coeff,
        weights: vec![w, w],
    }
}

/// Blocks of one family: `(E-block of the SOP, B-block of the SOP)`.
fn sop_blocks(e: &FadingModel, b: &FadingModel) -> Result<(HParams, HParams)> {
    match (*e, *b) {
        (
            FadingModel::AlphaMu { alpha: ae, mu: me, .. },
            FadingModel::AlphaMu { alpha: ab, mu: mb, .. },
        ) => Ok((
            HParams::new(1, 1, vec![(1.0 - me + 1.0 / ae, 1.0 / ae)], vec![(1.0, 1.0)])?,
            HParams::new(0, 1, vec![(1.0 - mb, 1.0 / ab)], vec![(0.0, 1.0)])?,
        )),
        (
            FadingModel::FisherF { m: me, m_s: se, .. },
            FadingModel::FisherF { m: mb, m_s: sb, .. },
        ) => Ok((
            HParams::new(2, 1, vec![(2.0 - me, 1.0)], vec![(1.0, 1.0), (1.0 + se, 1.0)])?,
            HParams::new(1, 1, vec![(1.0 - mb, 1.0)], vec![(sb, 1.0), (0.0, 1.0)])?,
        )),
        (
            FadingModel::Egk { m: me, m_s: se, xi: xe, xi_s: xse, .. },
            FadingModel::Egk { m: mb, m_s: sb, xi: xb, xi_s: xsb, .. },
        ) => Ok((
            HParams::new(
                1,
                2,
                vec![(1.0 - me + 1.0 / xe, 1.0 / xe), (1.0 - se + 1.0 / xse, 1.0 / xse)],
                vec![(1.0, 1.0)],
            )?,
            HParams::new(
                0,
                2,
                vec![(1.0 - mb, 1.0 / xb), (1.0 - sb, 1.0 / xsb)],
                vec![(0.0, 1.0)],
            )?,
        )),
        _ => Err(mixed(e, b)),
    }
}

/// `Pr(X > Y)` kernel evaluated at `lambda_Y / lambda_X`.
fn pnz_params(x: &FadingModel, y: &FadingModel) -> Result<HParams> {
    match (*x, *y) {
        (
            FadingModel::AlphaMu { alpha: ax, mu: mx, .. },
            FadingModel::AlphaMu { alpha: ay, mu: my, .. },
        ) => HParams::new(
            1,
            2,
            vec![(1.0 - mx, 1.0 / ax), (1.0, 1.0)],
            vec![(my, 1.0 / ay), (0.0, 1.0)],
        ),
        (
            FadingModel::FisherF { m: mx, m_s: sx, .. },
            FadingModel::FisherF { m: my, m_s: sy, .. },
        ) => HParams::new(
            2,
            3,
            vec![(1.0, 1.0), (1.0 - sy, 1.0), (1.0 - mx, 1.0)],
            vec![(my, 1.0), (sx, 1.0), (0.0, 1.0)],
        ),
        (
            FadingModel::Egk { m: mx, m_s: sx, xi: xx, xi_s: xsx, .. },
            FadingModel::Egk { m: my, m_s: sy, xi: xy, xi_s: xsy, .. },
        ) => HParams::new(
            2,
            3,
            vec![(1.0, 1.0), (1.0 - mx, 1.0 / xx), (1.0 - sx, 1.0 / xsx)],
            vec![(my, 1.0 / xy), (sy, 1.0 / xsy), (0.0, 1.0)],
        ),
        _ => Err(mixed(x, y)),
    }
}

/// Outer block and Y-kernel of the ASC term `E[ln(1+X) F_Y(X)]`.
fn asc_blocks(x: &FadingModel, y: &FadingModel) -> Result<(usize, usize, Vec<CoupledPair>, Vec<CoupledPair>, HParams)> {
    match (*x, *y) {
        (
            FadingModel::AlphaMu { alpha: ax, mu: mx, .. },
            FadingModel::AlphaMu { alpha: ay, mu: my, .. },
        ) => Ok((
            0,
            1,
            vec![pair(1.0 - mx, 1.0 / ax)],
            vec![],
            HParams::new(1, 1, vec![(1.0, 1.0)], vec![(my, 1.0 / ay), (0.0, 1.0)])?,
        )),
        (
            FadingModel::FisherF { m: mx, m_s: sx, .. },
            FadingModel::FisherF { m: my, m_s: sy, .. },
        ) => Ok((
            1,
            1,
            vec![pair(1.0 - mx, 1.0)],
            vec![pair(sx, 1.0)],
            HParams::new(1, 2, vec![(1.0, 1.0), (1.0 - sy, 1.0)], vec![(my, 1.0), (0.0, 1.0)])?,
        )),
        (
            FadingModel::Egk { m: mx, m_s: sx, xi: xx, xi_s: xsx, .. },
            FadingModel::Egk { m: my, m_s: sy, xi: xy, xi_s: xsy, .. },
        ) => Ok((
            0,
            2,
            vec![pair(1.0 - mx, 1.0 / xx), pair(1.0 - sx, 1.0 / xsx)],
            vec![],
            HParams::new(
                2,
                1,
                vec![(1.0, 1.0)],
                vec![(my, 1.0 / xy), (sy, 1.0 / xsy), (0.0, 1.0)],
            )?,
        )),
        _ => Err(mixed(x, y)),
    }
}

/// `E[ln(1+X)]` kernel at `1 / lambda_X`.
fn log_mean_params(x: &FadingModel) -> Result<HParams> {
    let one = (1.0, 1.0);
    match *x {
        FadingModel::AlphaMu { alpha, mu, .. } => {
            HParams::new(1, 3, vec![one, one, (1.0 - mu, 1.0 / alpha)], vec![one, (0.0, 1.0)])
        }
        FadingModel::FisherF { m, m_s, .. } => HParams::new(
            2,
            3,
            vec![one, one, (1.0 - m, 1.0)],
            vec![one, (m_s, 1.0), (0.0, 1.0)],
        ),
        FadingModel::Egk { m, m_s, xi, xi_s, .. } => HParams::new(
            1,
            4,
            vec![one, one, (1.0 - m, 1.0 / xi), (1.0 - m_s, 1.0 / xi_s)],
            vec![one, (0.0, 1.0)],
        ),
    }
}

fn mixed(a: &FadingModel, b: &FadingModel) -> Error {
    Error::UnsupportedModel(format!(
        "closed-form rows need one family for both links, got {} and {}",
        a.family(),
        b.family()
    ))
}

fn asc_cross(cfg_x: &FadingModel, cfg_y: &FadingModel, kx: (f64, f64), ky: (f64, f64)) -> Result<(f64, f64)> {
    let (m, n, upper, lower, inner) = asc_blocks(cfg_x, cfg_y)?;
    let h = MultivariateHParams {
        m,
        n,
        upper,
        lower,
        inner: vec![log_kernel_params(), inner],
    };
    let (kap_x, lam_x) = kx;
    let (kap_y, lam_y) = ky;
    let v = eval_h_multi(&h, &[1.0 / lam_x, lam_y / lam_x])?;
    let k = kap_x * kap_y / (lam_x * lam_y);
    Ok((k * v.value, k * v.error))
}

/// SOP, PNZ and ASC from the closed-form rows. Both links must belong to the
/// same family.
pub fn table2_metrics(cfg: &WiretapConfig) -> Result<Table2Metrics> {
    cfg.validate()?;
    if cfg.main.family() != cfg.eve.family() {
        return Err(mixed(&cfg.main, &cfg.eve));
    }
    let bd = cfg.main_density();
    let ed = cfg.eve_density();
    let kk = bd.kappa * ed.kappa;

    let p = eval_h(&pnz_params(&cfg.main, &cfg.eve)?, ed.lambda / bd.lambda)?;
    let k = kk / (bd.lambda * ed.lambda);
    let pnz = MetricResult::new(k * p.value, Method::Table2, k * p.error).checked_probability()?;

    let (rs, w) = (cfg.rate_factor(), cfg.offset());
    let sop = if w == 0.0 {
        MetricResult::new(1.0 - pnz.value, Method::Table2, pnz.err_estimate)
    } else {
        let (eb, bb) = sop_blocks(&cfg.eve, &cfg.main)?;
        let h = MultivariateHParams {
            m: 0,
            n: 1,
            upper: vec![pair(2.0, 1.0)],
            lower: vec![],
            inner: vec![eb, bb],
        };
        let v = eval_h_multi(&h, &[rs / (ed.lambda * w), 1.0 / (bd.lambda * w)])?;
        let k = kk * w / (bd.lambda * rs);
        MetricResult::new(1.0 - k * v.value, Method::Table2, k * v.error)
    }
    .checked_probability()?;

    let (i1, e1) = asc_cross(&cfg.main, &cfg.eve, (bd.kappa, bd.lambda), (ed.kappa, ed.lambda))?;
    let (i2, e2) = asc_cross(&cfg.eve, &cfg.main, (ed.kappa, ed.lambda), (bd.kappa, bd.lambda))?;
    let i3 = eval_h(&log_mean_params(&cfg.eve)?, 1.0 / ed.lambda)?;
    let k3 = ed.kappa / ed.lambda;
    let asc = MetricResult::new(
        (i1 + i2 - k3 * i3.value) / LN_2,
        Method::Table2,
        (e1 + e2 + k3 * i3.error) / LN_2,
    );
    Ok(Table2Metrics { sop, pnz, asc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::secrecy::{asc_exact, pnz_exact, sop_exact};

    fn check(cfg: WiretapConfig) {
        let t = table2_metrics(&cfg).unwrap();
        let p = pnz_exact(&cfg).unwrap().value;
        let s = sop_exact(&cfg).unwrap().value;
        let a = asc_exact(&cfg).unwrap().value;
        assert!((t.pnz.value - p).abs() < 1e-8, "pnz {} vs {p}", t.pnz.value);
        assert!((t.sop.value - s).abs() < 1e-6, "sop {} vs {s}", t.sop.value);
        assert!((t.asc.value - a).abs() < 1e-6 * a.abs().max(1.0), "asc {} vs {a}", t.asc.value);
    }

    #[test]
    fn alpha_mu_rows() {
        check(WiretapConfig::new(
            FadingModel::alpha_mu(2.5, 1.5, 8.0),
            FadingModel::alpha_mu(1.8, 2.0, 2.0),
            1.0,
        ));
    }

    #[test]
    fn fisher_rows() {
        check(WiretapConfig::new(
            FadingModel::fisher_f(2.0, 5.0, 8.0),
            FadingModel::fisher_f(1.5, 3.0, 2.0),
            1.0,
        ));
    }

    #[test]
    fn egk_rows() {
        check(WiretapConfig::new(
            FadingModel::egk(1.5, 2.0, 1.2, 0.8, 8.0),
            FadingModel::egk(2.0, 1.5, 0.9, 1.1, 2.0),
            1.0,
        ));
    }

    #[test]
    fn mixed_families_rejected() {
        let cfg = WiretapConfig::new(FadingModel::alpha_mu(2.0, 1.0, 2.0), FadingModel::fisher_f(2.0, 3.0, 1.0), 1.0);
        assert!(matches!(table2_metrics(&cfg), Err(Error::UnsupportedModel(_))));
    }
}

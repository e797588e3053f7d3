//! Fox's H-function: parameters, Mellin kernel and numerical evaluation.
//!
//! Convention throughout:
//!
//! ```text
//! H[z] = (1 / 2 pi i) int_L Theta(s) z^(-s) ds
//! Theta(s) = prod_{l<=m} G(b_l + B_l s) prod_{i<=n} G(1 - a_i - A_i s)
//!          / (prod_{l>m} G(1 - b_l - B_l s) prod_{i>n} G(a_i + A_i s))
//! ```
//!
//! Multivariate functions use the same sign convention, with an outer block
//! of gamma factors whose arguments couple all integration variables.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mellin::{MellinBarnes, QuadratureOptions};
use crate::special::log_gamma;

pub const UNIVARIATE_TOL: f64 = 1e-9;
pub const BIVARIATE_TOL: f64 = 1e-7;
pub const MULTIVARIATE_TOL: f64 = 1e-6;
pub const L_MAX: usize = 4;
const DEFAULT_MAX_POINTS: usize = 40_000_000;

/// Orders and parameter pairs of a univariate H-function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HParams {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// `(a_i, A_i)`, length p.
    pub upper: Vec<(f64, f64)>,
    /// `(b_l, B_l)`, length q.
    pub lower: Vec<(f64, f64)>,
}

/// `kappa * H[lambda * x]` with `kappa` normalizing the density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HDensity {
    pub kappa: f64,
    pub lambda: f64,
    #[serde(flatten)]
    pub params: HParams,
}

/// A vertical integration line and its quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub half_height: f64,
    pub max_points: usize,
    pub rel_tol: f64,
}

/// Real-valued result of an H-function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HValue {
    pub value: f64,
    /// Refinement difference plus the discarded imaginary residual.
    pub error: f64,
    /// Integral of the absolute integrand, for conditioning diagnostics.
    pub l1: f64,
}

impl HParams {
    pub fn new(m: usize, n: usize, upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        let h = HParams {
            m,
            n,
            p: upper.len(),
            q: lower.len(),
            upper,
            lower,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        if self.upper.len() != self.p || self.lower.len() != self.q {
            return Err(Error::InvalidParams(format!(
                "p={} q={} but {} upper and {} lower pairs given",
                self.p,
                self.q,
                self.upper.len(),
                self.lower.len()
            )));
        }
        if self.m > self.q || self.n > self.p {
            return Err(Error::InvalidParams(format!(
                "orders need m<=q and n<=p, got m={} n={} p={} q={}",
                self.m, self.n, self.p, self.q
            )));
        }
        for (x, w) in self.upper.iter().chain(&self.lower) {
            if !x.is_finite() || !w.is_finite() || *w <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "pair ({x}, {w}) needs finite entries and a positive coefficient"
                )));
            }
        }
        Ok(())
    }

    /// Kernel with argument shifted by `k`: `Theta'(s) = Theta(s + k)`.
    pub fn shift(&self, k: f64) -> HParams {
        HParams {
            upper: self.upper.iter().map(|&(a, al)| (a + k * al, al)).collect(),
            lower: self.lower.iter().map(|&(b, be)| (b + k * be, be)).collect(),
            ..self.clone()
        }
    }

    /// Kernel with reflected argument: `Theta'(s) = Theta(-s)`.
    pub fn reflect(&self) -> HParams {
        HParams {
            m: self.n,
            n: self.m,
            p: self.q,
            q: self.p,
            upper: self.lower.iter().map(|&(b, be)| (1.0 - b, be)).collect(),
            lower: self.upper.iter().map(|&(a, al)| (1.0 - a, al)).collect(),
        }
    }

    /// Right end of the left pole family, `max_{l<=m} -b_l/B_l`.
    pub fn left_edge(&self) -> Option<f64> {
        self.lower[..self.m]
            .iter()
            .map(|&(b, be)| -b / be)
            .max_by(f64::total_cmp)
    }

    /// Left end of the right pole family, `min_{i<=n} (1-a_i)/A_i`.
    pub fn right_edge(&self) -> Option<f64> {
        self.upper[..self.n]
            .iter()
            .map(|&(a, al)| (1.0 - a) / al)
            .min_by(f64::total_cmp)
    }

    /// Open interval of admissible abscissae.
    pub fn gap(&self) -> Result<(f64, f64)> {
        let lo = self.left_edge().unwrap_or(f64::NEG_INFINITY);
        let hi = self.right_edge().unwrap_or(f64::INFINITY);
        if lo < hi {
            Ok((lo, hi))
        } else {
            Err(Error::NoContour(format!(
                "left poles reach {lo} but right poles start at {hi}"
            )))
        }
    }

    pub fn log_theta(&self, s: Complex64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, &(b, be)) in self.lower.iter().enumerate() {
            if l < self.m {
                acc += log_gamma(s * be + b)?;
            } else {
                acc -= log_gamma(one - b - s * be)?;
            }
        }
        for (i, &(a, al)) in self.upper.iter().enumerate() {
            if i < self.n {
                acc += log_gamma(one - a - s * al)?;
            } else {
                acc -= log_gamma(s * al + a)?;
            }
        }
        Ok(acc)
    }
}

/// `Theta(s)` of the kernel, accumulated in log space.
pub fn mellin_theta(params: &HParams, s: Complex64) -> Result<Complex64> {
    Ok(params.log_theta(s)?.exp())
}

/// Real `Theta(x)`.
pub fn theta_real(params: &HParams, x: f64) -> Result<f64> {
    Ok(mellin_theta(params, Complex64::new(x, 0.0))?.re)
}

impl HDensity {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.kappa > 0.0 && self.kappa.is_finite() && self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "kappa={} and lambda={} must be positive",
                self.kappa, self.lambda
            )));
        }
        Ok(())
    }

    /// `int_0^inf x^(s-1) f(x) dx = kappa lambda^(-s) Theta(s)`.
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        Ok((self.params.log_theta(s)? - s * self.lambda.ln()).exp() * self.kappa)
    }

    /// Real moment `E[X^nu]`.
    pub fn moment(&self, nu: f64) -> Result<f64> {
        Ok(self.mellin(Complex64::new(1.0 + nu, 0.0))?.re)
    }

    pub fn pdf(&self, x: f64) -> Result<HValue> {
        check_positive(x)?;
        let c = choose_contour(&self.params, self.lambda * x)?;
        let h = eval_h_univariate(&self.params, self.lambda * x, &c)?;
        Ok(h.scaled(self.kappa))
    }

    /// CDF through `-(kappa/lambda) (1/2 pi i) int Theta(1+s)/s (lambda x)^(-s) ds`, Re s < 0.
    pub fn cdf(&self, x: f64) -> Result<HValue> {
        check_positive(x)?;
        let mut mb = MellinBarnes::new(1, vec![(self.lambda * x).ln()]);
        let t = Affine::var(1, 0);
        push_theta(&mut mb, &self.params, &t.shifted(1.0));
        push_gamma(&mut mb, &t.neg(), true);
        push_gamma(&mut mb, &t.neg().shifted(1.0), false);
        let v = integrate_default(&mb, UNIVARIATE_TOL)?;
        Ok(v.scaled(self.kappa / self.lambda))
    }

    /// CCDF through `(kappa/lambda) (1/2 pi i) int Theta(1+s)/s (lambda x)^(-s) ds`, Re s > 0.
    pub fn ccdf(&self, x: f64) -> Result<HValue> {
        check_positive(x)?;
        let mut mb = MellinBarnes::new(1, vec![(self.lambda * x).ln()]);
        let t = Affine::var(1, 0);
        push_theta(&mut mb, &self.params, &t.shifted(1.0));
        push_gamma(&mut mb, &t, true);
        push_gamma(&mut mb, &t.shifted(1.0), false);
        let v = integrate_default(&mb, UNIVARIATE_TOL)?;
        Ok(v.scaled(self.kappa / self.lambda))
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("argument {x} must be positive and finite")))
    }
}

impl HValue {
    pub fn scaled(self, k: f64) -> HValue {
        HValue {
            value: self.value * k,
            error: self.error * k.abs(),
            l1: self.l1 * k.abs(),
        }
    }
}

/// Affine form `constant + weights . t` in the integration variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub constant: f64,
    pub weights: Vec<f64>,
}

impl Affine {
    pub fn var(dim: usize, k: usize) -> Affine {
        let mut weights = vec![0.0; dim];
        weights[k] = 1.0;
        Affine {
            constant: 0.0,
            weights,
        }
    }

    pub fn sum(dim: usize) -> Affine {
        Affine {
            constant: 0.0,
            weights: vec![1.0; dim],
        }
    }

    pub fn shifted(&self, c: f64) -> Affine {
        Affine {
            constant: self.constant + c,
            weights: self.weights.clone(),
        }
    }

    pub fn neg(&self) -> Affine {
        self.scale(-1.0)
    }

    pub fn scale(&self, k: f64) -> Affine {
        Affine {
            constant: self.constant * k,
            weights: self.weights.iter().map(|w| w * k).collect(),
        }
    }

    pub fn add(&self, other: &Affine) -> Affine {
        Affine {
            constant: self.constant + other.constant,
            weights: self.weights.iter().zip(&other.weights).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Appends `Gamma(form)` to the numerator or denominator.
pub fn push_gamma(mb: &mut MellinBarnes, form: &Affine, numerator: bool) {
    mb.push(form.constant, form.weights.clone(), numerator);
}

/// Appends the factors of `Theta(form)`.
pub fn push_theta(mb: &mut MellinBarnes, params: &HParams, form: &Affine) {
    for (l, &(b, be)) in params.lower.iter().enumerate() {
        let g = form.scale(be).shifted(b);
        if l < params.m {
            push_gamma(mb, &g, true);
        } else {
            push_gamma(mb, &g.neg().shifted(1.0), false);
        }
    }
    for (i, &(a, al)) in params.upper.iter().enumerate() {
        let g = form.scale(al).shifted(a);
        if i < params.n {
            push_gamma(mb, &g.neg().shifted(1.0), true);
        } else {
            push_gamma(mb, &g, false);
        }
    }
}

/// Integrates on the automatically chosen contour.
pub(crate) fn integrate_default(mb: &MellinBarnes, rel_tol: f64) -> Result<HValue> {
    mb.check_convergent()?;
    let c = mb.choose_contour()?;
    let v = mb.integrate(&c, None, QuadratureOptions::with_tol(rel_tol))?;
    Ok(to_hvalue(v))
}

fn to_hvalue(v: crate::mellin::MbValue) -> HValue {
    HValue {
        value: v.value.re,
        error: v.error + v.value.im.abs(),
        l1: v.l1,
    }
}

fn univariate_mb(params: &HParams, z: f64) -> MellinBarnes {
    let mut mb = MellinBarnes::new(1, vec![z.ln()]);
    push_theta(&mut mb, params, &Affine::var(1, 0));
    mb
}

/// Picks an abscissa inside the separating gap, moved toward the real
/// saddle of `Theta(s) z^(-s)`, and a truncation height for `UNIVARIATE_TOL`.
pub fn choose_contour(params: &HParams, z_magnitude: f64) -> Result<ContourSpec> {
    params.validate()?;
    check_positive(z_magnitude)?;
    let (lo, hi) = params.gap()?;
    let start = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    };
    let mb = univariate_mb(params, z_magnitude);
    mb.check_convergent()?;
    let c = mb.refine_to_saddle(&[start])[0];
    let c = nudge_off_poles(params, c, lo, hi);
    let heights = mb.truncation_heights(&[c], UNIVARIATE_TOL);
    Ok(ContourSpec {
        abscissa: c,
        half_height: heights[0],
        max_points: DEFAULT_MAX_POINTS,
        rel_tol: UNIVARIATE_TOL,
    })
}

/// Moves an abscissa that sits within 1e-9 of a gap edge by 10% of the gap
/// toward its midpoint.
fn nudge_off_poles(_params: &HParams, c: f64, lo: f64, hi: f64) -> f64 {
    let width = if lo.is_finite() && hi.is_finite() { hi - lo } else { 2.0 };
    if lo.is_finite() && (c - lo).abs() < 1e-9 {
        c + 0.1 * width
    } else if hi.is_finite() && (c - hi).abs() < 1e-9 {
        c - 0.1 * width
    } else {
        c
    }
}

/// `(1/2 pi i) int Theta(s) z^(-s) ds` along the given contour.
pub fn eval_h_univariate(params: &HParams, z: f64, contour: &ContourSpec) -> Result<HValue> {
    params.validate()?;
    check_positive(z)?;
    let (lo, hi) = params.gap()?;
    let c = nudge_off_poles(params, contour.abscissa, lo, hi);
    if !(c > lo && c < hi) {
        return Err(Error::NoContour(format!(
            "abscissa {c} lies outside the gap ({lo}, {hi})"
        )));
    }
    let mb = univariate_mb(params, z);
    let opts = QuadratureOptions {
        rel_tol: contour.rel_tol,
        max_nodes: contour.max_points,
    };
    let v = mb.integrate(&[c], Some(&[contour.half_height]), opts)?;
    Ok(to_hvalue(v))
}

/// Univariate H with automatic contour.
pub fn eval_h(params: &HParams, z: f64) -> Result<HValue> {
    let c = choose_contour(params, z)?;
    eval_h_univariate(params, z, &c)
}

/// Gamma factor of the outer block: coefficient and one weight per variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledPair {
    pub coeff: f64,
    pub weights: Vec<f64>,
}

/// Multivariate H-function
///
/// ```text
/// (1/2 pi i)^L int Theta_0(t) prod_r Theta_r(t_r) z_r^(-t_r) dt
/// ```
///
/// where the outer kernel `Theta_0` has numerator factors
/// `G(b + B.t)` for the first `m` lower pairs and `G(1 - a - A.t)` for the
/// first `n` upper pairs, and denominator factors `G(1 - b - B.t)` and
/// `G(a + A.t)` for the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultivariateHParams {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<CoupledPair>,
    pub lower: Vec<CoupledPair>,
    pub inner: Vec<HParams>,
}

pub type BivariateHParams = MultivariateHParams;

impl MultivariateHParams {
    pub fn dim(&self) -> usize {
        self.inner.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::InvalidParams("multivariate H needs at least one variable".into()));
        }
        if self.m > self.lower.len() || self.n > self.upper.len() {
            return Err(Error::InvalidParams("outer orders exceed block sizes".into()));
        }
        for pair in self.upper.iter().chain(&self.lower) {
            if pair.weights.len() != d {
                return Err(Error::InvalidParams(format!(
                    "outer pair has {} weights for {d} variables",
                    pair.weights.len()
                )));
            }
            if pair.weights.iter().any(|w| !(*w > 0.0)) || !pair.coeff.is_finite() {
                return Err(Error::InvalidParams(
                    "outer coefficients multiplying integration variables must be positive".into(),
                ));
            }
        }
        for h in &self.inner {
            h.validate()?;
        }
        Ok(())
    }

    fn to_mb(&self, z: &[f64]) -> MellinBarnes {
        let d = self.dim();
        let mut mb = MellinBarnes::new(d, z.iter().map(|x| x.ln()).collect());
        for (l, pair) in self.lower.iter().enumerate() {
            let g = Affine {
                constant: pair.coeff,
                weights: pair.weights.clone(),
            };
            if l < self.m {
                push_gamma(&mut mb, &g, true);
            } else {
                push_gamma(&mut mb, &g.neg().shifted(1.0), false);
            }
        }
        for (i, pair) in self.upper.iter().enumerate() {
            let g = Affine {
                constant: pair.coeff,
                weights: pair.weights.clone(),
            };
            if i < self.n {
                push_gamma(&mut mb, &g.neg().shifted(1.0), true);
            } else {
                push_gamma(&mut mb, &g, false);
            }
        }
        for (r, h) in self.inner.iter().enumerate() {
            push_theta(&mut mb, h, &Affine::var(d, r));
        }
        mb
    }

    /// Contours from the joint feasible region, refined toward the saddle.
    pub fn default_contours(&self, z: &[f64], rel_tol: f64) -> Result<Vec<ContourSpec>> {
        self.check_args(z)?;
        let mb = self.to_mb(z);
        mb.check_convergent()?;
        let c = mb.choose_contour()?;
        let heights = mb.truncation_heights(&c, rel_tol);
        Ok(c.iter()
            .zip(heights)
            .map(|(&abscissa, half_height)| ContourSpec {
                abscissa,
                half_height,
                max_points: DEFAULT_MAX_POINTS,
                rel_tol,
            })
            .collect())
    }

    fn check_args(&self, z: &[f64]) -> Result<()> {
        self.validate()?;
        let d = self.dim();
        if d > L_MAX {
            return Err(Error::Dimension { got: d, max: L_MAX });
        }
        if z.len() != d {
            return Err(Error::InvalidParams(format!("{} arguments for {d} variables", z.len())));
        }
        for &x in z {
            check_positive(x)?;
        }
        Ok(())
    }
}

/// L-fold H-function on the given contours (one per variable).
pub fn eval_h_multivariate(
    params: &MultivariateHParams,
    z: &[f64],
    contours: &[ContourSpec],
) -> Result<HValue> {
    params.check_args(z)?;
    if contours.len() != params.dim() {
        return Err(Error::InvalidParams(format!(
            "{} contours for {} variables",
            contours.len(),
            params.dim()
        )));
    }
    let mb = params.to_mb(z);
    let c: Vec<f64> = contours.iter().map(|k| k.abscissa).collect();
    let h: Vec<f64> = contours.iter().map(|k| k.half_height).collect();
    let opts = QuadratureOptions {
        rel_tol: contours.iter().map(|k| k.rel_tol).fold(f64::INFINITY, f64::min),
        max_nodes: contours.iter().map(|k| k.max_points).min().unwrap_or(DEFAULT_MAX_POINTS),
    };
    Ok(to_hvalue(mb.integrate(&c, Some(&h), opts)?))
}

/// Two-variable case of [`eval_h_multivariate`].
pub fn eval_h_bivariate(
    params: &BivariateHParams,
    x: f64,
    y: f64,
    contours: &[ContourSpec; 2],
) -> Result<HValue> {
    if params.dim() != 2 {
        return Err(Error::InvalidParams(format!(
            "bivariate evaluation of a {}-variable function",
            params.dim()
        )));
    }
    eval_h_multivariate(params, &[x, y], contours)
}

/// Multivariate H with automatically chosen contours.
pub fn eval_h_multi(params: &MultivariateHParams, z: &[f64]) -> Result<HValue> {
    let tol = match params.dim() {
        1 => UNIVARIATE_TOL,
        2 => BIVARIATE_TOL,
        _ => MULTIVARIATE_TOL,
    };
    let c = params.default_contours(z, tol)?;
    eval_h_multivariate(params, z, &c)
}

/// `ln(1 + x) = H^{1,2}_{2,2}[x | (1,1),(1,1); (1,1),(0,1)]`.
pub fn log_kernel_params() -> HParams {
    HParams {
        m: 1,
        n: 2,
        p: 2,
        q: 2,
        upper: vec![(1.0, 1.0), (1.0, 1.0)],
        lower: vec![(1.0, 1.0), (0.0, 1.0)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_kernel() -> HParams {
        HParams::new(1, 0, vec![], vec![(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn theta_examples() {
        let t = theta_real(&exp_kernel(), 2.0).unwrap();
        assert!((t - 1.0).abs() < 1e-14);
        let t = theta_real(&exp_kernel(), 3.0).unwrap();
        assert!((t - 2.0).abs() < 1e-13);
    }

    #[test]
    fn shift_and_reflect_match_theta() {
        let h = HParams::new(1, 1, vec![(-3.0, 1.0), (0.4, 0.7)], vec![(1.0, 1.0), (0.2, 0.5)]).unwrap();
        let s = Complex64::new(0.3, 0.8);
        let a = h.shift(0.6).log_theta(s).unwrap().exp();
        let b = h.log_theta(s + 0.6).unwrap().exp();
        assert!((a - b).norm() < 1e-12 * b.norm());
        let a = h.reflect().log_theta(s).unwrap().exp();
        let b = h.log_theta(-s).unwrap().exp();
        assert!((a - b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn exponential_reduction() {
        let v = eval_h(&exp_kernel(), 1.0).unwrap();
        assert!((v.value - (-1f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn beta_reduction() {
        // H^{1,1}_{1,1}[1 | (-1,1); (0,1)] = Gamma(2) 2^-2
        let h = HParams::new(1, 1, vec![(-1.0, 1.0)], vec![(0.0, 1.0)]).unwrap();
        let v = eval_h(&h, 1.0).unwrap();
        assert!((v.value - 0.25).abs() < 1e-10, "{v:?}");
    }

    #[test]
    fn alpha_mu_kernel_closed_form() {
        let h = HParams::new(1, 0, vec![], vec![(0.5, 0.5)]).unwrap();
        let v = eval_h(&h, 0.7).unwrap();
        let exact = 2.0 * 0.7 * (-0.49f64).exp();
        assert!((v.value - exact).abs() < 1e-9 * exact);
        assert!((exact - 0.857_677).abs() < 1e-6);
    }

    #[test]
    fn log_kernel_values() {
        let v = eval_h(&log_kernel_params(), 1.0).unwrap();
        assert!((v.value - 2f64.ln()).abs() < 1e-9);
        let v = eval_h(&log_kernel_params(), std::f64::consts::E - 1.0).unwrap();
        assert!((v.value - 1.0).abs() < 1e-9);
        let x = 1e-4;
        let v = eval_h(&log_kernel_params(), x).unwrap();
        assert!((v.value / x - 1.0).abs() < 1e-4);
    }

    #[test]
    fn fisher_gap() {
        let h = HParams::new(1, 1, vec![(-3.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        let (lo, hi) = h.gap().unwrap();
        assert_eq!((lo, hi), (-1.0, 4.0));
        let c = choose_contour(&h, 0.5).unwrap();
        assert!(c.abscissa > lo && c.abscissa < hi);
    }

    #[test]
    fn interleaved_poles_rejected() {
        // left poles up to 2, right poles from 1
        let h = HParams::new(1, 1, vec![(0.0, 1.0)], vec![(-2.0, 1.0)]).unwrap();
        assert!(matches!(choose_contour(&h, 1.0), Err(Error::NoContour(_))));
    }

    #[test]
    fn invalid_orders_rejected() {
        assert!(HParams::new(2, 0, vec![], vec![(0.0, 1.0)]).is_err());
        assert!(HParams::new(1, 0, vec![], vec![(0.0, -1.0)]).is_err());
    }

    #[test]
    fn separable_bivariate() {
        let h = MultivariateHParams {
            m: 0,
            n: 0,
            upper: vec![],
            lower: vec![],
            inner: vec![exp_kernel(), exp_kernel()],
        };
        let c = h.default_contours(&[1.0, 2.0], BIVARIATE_TOL).unwrap();
        let v = eval_h_bivariate(&h, 1.0, 2.0, &[c[0], c[1]]).unwrap();
        assert!((v.value - (-3f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn dimension_limit() {
        let h = MultivariateHParams {
            m: 0,
            n: 0,
            upper: vec![],
            lower: vec![],
            inner: vec![exp_kernel(); 5],
        };
        let err = eval_h_multi(&h, &[1.0; 5]).unwrap_err();
        assert!(err.to_string().contains("exceeds L_max=4"));
    }

    #[test]
    fn hparams_json_field_names() {
        let d = HDensity {
            kappa: 1.0,
            lambda: 2.0,
            params: exp_kernel(),
        };
        let s = serde_json::to_string(&d).unwrap();
        for key in ["\"m\"", "\"n\"", "\"p\"", "\"q\"", "\"upper\"", "\"lower\"", "\"kappa\"", "\"lambda\""] {
            assert!(s.contains(key), "{s}");
        }
        let back: HDensity = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}

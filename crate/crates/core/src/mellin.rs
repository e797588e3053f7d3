//! Generic Mellin-Barnes integrals over products of vertical lines.
//!
//! An integrand is a product of gamma factors `Gamma(offset + w . s)^(+-1)`
//! times `prod_k z_k^(-s_k)`. Every H-function in this crate (univariate,
//! bivariate, multivariate) lowers to this form before integration, so the
//! contour selection and the quadrature live in one place.
//!
//! Quadrature is the trapezoid rule on the truncated lines `s_k = c_k + i t_k`,
//! which converges geometrically for these analytic, exponentially decaying
//! integrands. The step is halved on every dimension at once until two
//! successive levels agree to `rel_tol`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special::{log_gamma, log_gamma_abs};

/// `Gamma(offset + sum_k weights[k] * s_k)` in the numerator or denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactor {
    pub offset: f64,
    pub weights: Vec<f64>,
    pub numerator: bool,
}

impl GammaFactor {
    fn arg_real(&self, c: &[f64]) -> f64 {
        self.offset + self.weights.iter().zip(c).map(|(w, x)| w * x).sum::<f64>()
    }

    fn arg(&self, s: &[Complex64]) -> Complex64 {
        let mut z = Complex64::new(self.offset, 0.0);
        for (w, x) in self.weights.iter().zip(s) {
            if *w != 0.0 {
                z += x * *w;
            }
        }
        z
    }

    fn is_constant(&self) -> bool {
        self.weights.iter().all(|w| *w == 0.0)
    }
}

/// `(1 / 2 pi i)^d  int ... int  prod Gamma(..)^(+-1)  prod z_k^(-s_k)  ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinBarnes {
    pub dim: usize,
    pub factors: Vec<GammaFactor>,
    /// `ln z_k` for each integration variable.
    pub log_args: Vec<f64>,
}

/// Quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    /// Upper bound on the number of grid nodes of the finest level.
    pub max_nodes: usize,
}

impl QuadratureOptions {
    pub fn with_tol(rel_tol: f64) -> Self {
        QuadratureOptions {
            rel_tol,
            max_nodes: 40_000_000,
        }
    }
}

/// Outcome of one Mellin-Barnes quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbValue {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub error: f64,
    /// Integral of |integrand| along the contour; `value / l1` measures conditioning.
    pub l1: f64,
    pub nodes: usize,
}

const FEAS_BOX: f64 = 60.0;
const TAIL_DROP: f64 = 4.0; // extra decades below rel_tol for truncation

impl MellinBarnes {
    pub fn new(dim: usize, log_args: Vec<f64>) -> Self {
        MellinBarnes {
            dim,
            factors: Vec::new(),
            log_args,
        }
    }

    pub fn push(&mut self, offset: f64, weights: Vec<f64>, numerator: bool) {
        debug_assert_eq!(weights.len(), self.dim);
        self.factors.push(GammaFactor {
            offset,
            weights,
            numerator,
        });
    }

    /// Exponential decay rate of |integrand| along each axis, in units of pi/2.
    pub fn decay_rates(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|k| {
                self.factors
                    .iter()
                    .map(|f| {
                        let w = f.weights[k].abs();
                        if f.numerator {
                            w
                        } else {
                            -w
                        }
                    })
                    .sum()
            })
            .collect()
    }

    /// Rejects integrands that do not decay exponentially along every axis.
    pub fn check_convergent(&self) -> Result<()> {
        for (k, rate) in self.decay_rates().iter().enumerate() {
            if *rate <= 1e-12 {
                return Err(Error::Divergent(format!(
                    "net gamma weight {rate} along variable {k} is not positive"
                )));
            }
        }
        Ok(())
    }

    pub fn log_integrand(&self, s: &[Complex64]) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for f in &self.factors {
            let lg = log_gamma(f.arg(s))?;
            if f.numerator {
                acc += lg;
            } else {
                acc -= lg;
            }
        }
        for (x, lz) in s.iter().zip(&self.log_args) {
            acc -= x * *lz;
        }
        Ok(acc)
    }

    /// Smooth surrogate of `ln |integrand|` on the real point `c`, used to place
    /// the contour near the saddle. Denominator gammas with non-positive
    /// argument use the envelope `Gamma(1-x)/pi` so their zeros do not attract.
    fn real_log_magnitude(&self, c: &[f64]) -> f64 {
        let mut acc = 0.0;
        for f in &self.factors {
            let x = f.arg_real(c);
            if f.numerator {
                if x <= 0.0 {
                    return f64::INFINITY;
                }
                match log_gamma_abs(x) {
                    Ok(v) => acc += v,
                    Err(_) => return f64::INFINITY,
                }
            } else if x > 0.5 {
                acc -= log_gamma_abs(x).unwrap_or(0.0);
            } else {
                acc += log_gamma_abs(1.0 - x).unwrap_or(0.0) - PI.ln();
            }
        }
        for (x, lz) in c.iter().zip(&self.log_args) {
            acc -= x * lz;
        }
        acc
    }

    /// Linear constraints `offset + w . c > 0` from numerator factors.
    fn constraints(&self) -> Vec<(&[f64], f64)> {
        self.factors
            .iter()
            .filter(|f| f.numerator && !f.is_constant())
            .map(|f| (f.weights.as_slice(), f.offset))
            .collect()
    }

    /// True when every numerator gamma argument is positive at `c`.
    pub fn is_valid_contour(&self, c: &[f64]) -> bool {
        c.len() == self.dim
            && self
                .constraints()
                .iter()
                .all(|(w, b)| b + w.iter().zip(c).map(|(x, y)| x * y).sum::<f64>() > 0.0)
    }

    /// Point of the feasible region that maximizes the smallest numerator
    /// gamma argument (inside a large box), by vertex enumeration.
    pub fn central_point(&self) -> Result<Vec<f64>> {
        let d = self.dim;
        let mut rows: Vec<(Vec<f64>, f64)> = self
            .constraints()
            .into_iter()
            .map(|(w, b)| (w.to_vec(), b))
            .collect();
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            rows.push((e.clone(), FEAS_BOX));
            e[k] = -1.0;
            rows.push((e, FEAS_BOX));
        }
        let n = rows.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut idx: Vec<usize> = (0..=d).collect();
        loop {
            // Solve  w_i . c - t = -b_i  for the chosen d+1 rows.
            let mut a = vec![vec![0.0; d + 2]; d + 1];
            for (r, &i) in idx.iter().enumerate() {
                a[r][..d].copy_from_slice(&rows[i].0);
                a[r][d] = -1.0;
                a[r][d + 1] = -rows[i].1;
            }
            if let Some(sol) = solve_dense(a) {
                let (c, t) = (&sol[..d], sol[d]);
                let feasible = rows.iter().all(|(w, b)| {
                    b + w.iter().zip(c).map(|(x, y)| x * y).sum::<f64>() >= t - 1e-9
                });
                if feasible && best.as_ref().is_none_or(|(bt, _)| t > *bt + 1e-12) {
                    best = Some((t, c.to_vec()));
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        match best {
            Some((t, c)) if t > 1e-9 => Ok(c),
            _ => Err(Error::NoContour(
                "numerator gamma families cannot be separated by vertical lines".into(),
            )),
        }
    }

    /// Interval of coordinate `k` (others fixed) on which all numerator
    /// arguments stay positive.
    fn coordinate_interval(&self, c: &[f64], k: usize) -> (f64, f64) {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (w, b) in self.constraints() {
            if w[k] == 0.0 {
                continue;
            }
            let rest: f64 = b + w
                .iter()
                .zip(c)
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, (x, y))| x * y)
                .sum::<f64>();
            let bound = -rest / w[k];
            if w[k] > 0.0 {
                lo = lo.max(bound);
            } else {
                hi = hi.min(bound);
            }
        }
        (lo, hi)
    }

    /// Moves `start` toward the real saddle of the integrand by cyclic
    /// coordinate minimization of the real-point magnitude.
    pub fn refine_to_saddle(&self, start: &[f64]) -> Vec<f64> {
        let mut c = start.to_vec();
        for _sweep in 0..6 {
            let before = c.clone();
            for k in 0..self.dim {
                let (lo, hi) = self.coordinate_interval(&c, k);
                let mut probe = c.clone();
                let mut phi = |x: f64| {
                    probe[k] = x;
                    self.real_log_magnitude(&probe)
                };
                c[k] = minimize_on_interval(&mut phi, c[k], lo, hi);
            }
            let moved: f64 = c.iter().zip(&before).map(|(a, b)| (a - b).abs()).sum();
            if moved < 1e-6 {
                break;
            }
        }
        c
    }

    /// Default contour: feasible central point refined toward the saddle.
    pub fn choose_contour(&self) -> Result<Vec<f64>> {
        let centre = self.central_point()?;
        let saddle = self.refine_to_saddle(&centre);
        Ok(self.back_off_poles(&saddle, &centre))
    }

    /// Walks from the saddle toward the central point while the real-point
    /// magnitude grows by at most one decade. The saddle often hugs a pole,
    /// which makes the trapezoid rule converge slowly; the walk trades a
    /// bounded amount of cancellation for a wider analytic strip.
    fn back_off_poles(&self, saddle: &[f64], centre: &[f64]) -> Vec<f64> {
        let at = |th: f64| -> Vec<f64> {
            saddle.iter().zip(centre).map(|(s, c)| s + th * (c - s)).collect()
        };
        let budget = self.real_log_magnitude(saddle) + std::f64::consts::LN_10;
        if !budget.is_finite() {
            return saddle.to_vec();
        }
        if self.real_log_magnitude(centre) <= budget {
            return centre.to_vec();
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if self.real_log_magnitude(&at(mid)) <= budget {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(lo)
    }

    fn probe_magnitude(&self, c: &[f64], dir: &[f64], t: f64) -> f64 {
        let s: Vec<Complex64> = c
            .iter()
            .zip(dir)
            .map(|(x, d)| Complex64::new(*x, d * t))
            .collect();
        self.log_integrand(&s).map(|v| v.re).unwrap_or(f64::NEG_INFINITY)
    }

    /// Per-dimension truncation heights from probes along axes and diagonals.
    pub fn truncation_heights(&self, c: &[f64], rel_tol: f64) -> Vec<f64> {
        let d = self.dim;
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            dirs.push(e);
        }
        for i in 0..d {
            for j in (i + 1)..d {
                for sign in [1.0, -1.0] {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    e[j] = sign;
                    dirs.push(e);
                }
            }
        }
        let peak = self.probe_magnitude(c, &vec![0.0; d], 0.0);
        let drop = rel_tol.ln() - TAIL_DROP * std::f64::consts::LN_10;
        let mut heights = vec![2.0f64; d];
        for dir in &dirs {
            let mut peak_dir = peak;
            let mut t = 0.5;
            let mut last_above = 0.0;
            while t < 1.0e5 {
                let m = self.probe_magnitude(c, dir, t).max(self.probe_magnitude(c, dir, -t));
                if m > peak_dir {
                    peak_dir = m;
                }
                if m - peak_dir > drop {
                    last_above = t;
                } else if t > 2.0 * last_above + 4.0 {
                    break;
                }
                t *= 1.25;
            }
            let reach = 1.25 * last_above + 2.0;
            for k in 0..d {
                if dir[k] != 0.0 {
                    heights[k] = heights[k].max(reach);
                }
            }
        }
        heights
    }

    /// Trapezoid quadrature on the contour `c` with adaptive step and
    /// truncation. Heights may be supplied; otherwise they are probed.
    pub fn integrate(
        &self,
        c: &[f64],
        heights: Option<&[f64]>,
        opts: QuadratureOptions,
    ) -> Result<MbValue> {
        if c.len() != self.dim {
            return Err(Error::InvalidParams(format!(
                "contour has {} abscissae for a {}-fold integral",
                c.len(),
                self.dim
            )));
        }
        self.check_convergent()?;
        if !self.is_valid_contour(c) {
            return Err(Error::NoContour(format!(
                "abscissae {c:?} do not separate the pole families"
            )));
        }
        let mut heights: Vec<f64> = match heights {
            Some(h) => h.to_vec(),
            None => self.truncation_heights(c, opts.rel_tol),
        };
        if self.dim == 1 {
            // whole contour below the smallest double: nothing to integrate
            let h = heights[0];
            let top = (0..=64)
                .map(|j| self.probe_magnitude(c, &[1.0], h * (j as f64 / 32.0 - 1.0)))
                .fold(f64::NEG_INFINITY, f64::max);
            if top + (2.0 * h).ln() < -760.0 {
                return Ok(MbValue {
                    value: Complex64::new(0.0, 0.0),
                    error: 0.0,
                    l1: 0.0,
                    nodes: 65,
                });
            }
        }
        let mut attempts = 0;
        loop {
            let out = self.integrate_fixed_heights(c, &heights, opts)?;
            // Tail check: the outermost tenth of the window must be negligible.
            let tail = self.outer_band_mass(c, &heights, out.nodes)?;
            if tail <= 0.1 * opts.rel_tol * out.value.norm().max(1e-300) + 1e2 * f64::EPSILON * out.l1
                || attempts >= 3
            {
                return Ok(out);
            }
            attempts += 1;
            for h in heights.iter_mut() {
                *h *= 1.6;
            }
        }
    }

    fn integrate_fixed_heights(
        &self,
        c: &[f64],
        heights: &[f64],
        opts: QuadratureOptions,
    ) -> Result<MbValue> {
        let d = self.dim;
        // One initial step for every dimension (at most 0.5 and at most the
        // smallest height/8) so coupled factors can be tabulated by index.
        let h0 = heights.iter().fold(0.5f64, |m, h| m.min(h / 8.0));
        let mut steps = vec![h0; d];
        let mut halves: Vec<i64> = heights.iter().map(|h| (h / h0).ceil() as i64).collect();
        let mut prev: Option<(Complex64, f64)> = None;
        let mut level = 0;
        let shared_key = self.shared_coupling();
        loop {
            let nodes: usize = halves
                .iter()
                .map(|n| (2 * n + 1) as usize)
                .fold(1usize, |a, b| a.saturating_mul(b));
            let cost = match &shared_key {
                Some(r) => convolution_cost(r.as_deref(), &halves),
                None => nodes,
            };
            if cost > opts.max_nodes {
                let (estimate, error) = match prev {
                    Some((v, e)) => (v.re, e),
                    None => (f64::NAN, f64::INFINITY),
                };
                return Err(Error::Convergence {
                    rel_tol: opts.rel_tol,
                    estimate,
                    error,
                });
            }
            let (sum, abs_sum) = self.grid_sum(c, &steps, &halves)?;
            let scale: f64 = steps.iter().product::<f64>() / (2.0 * PI).powi(d as i32);
            let value = sum * scale;
            let l1 = abs_sum * scale;
            if let Some((pv, _)) = prev {
                let diff = (value - pv).norm();
                let floor = 1e2 * f64::EPSILON * l1;
                // Geometric convergence: e(h/2) ~ e(h)^2 / A with A of the
                // order of l1 (observed A of 2-5 l1 on pole-limited strips).
                // The coarse level must already be within 1% of l1.
                let predicted = if diff <= 1e-2 * l1 { diff * diff / l1 } else { diff };
                let target = opts.rel_tol * value.norm() + floor;
                if level >= 1 && (diff <= target || predicted <= 0.1 * target) {
                    return Ok(MbValue {
                        value,
                        error: predicted.min(diff).max(floor),
                        l1,
                        nodes,
                    });
                }
                prev = Some((value, diff));
            } else {
                prev = Some((value, f64::INFINITY));
            }
            level += 1;
            for k in 0..d {
                steps[k] *= 0.5;
                halves[k] *= 2;
            }
        }
    }

    /// `Some(None)` when every factor depends on one variable, `Some(Some(r))`
    /// when all coupled factors depend on the grid through the same key
    /// `sum_k r_k j_k`, `None` otherwise.
    fn shared_coupling(&self) -> Option<Option<Vec<i64>>> {
        let mut key: Option<Vec<i64>> = None;
        for f in &self.factors {
            if f.weights.iter().filter(|w| **w != 0.0).count() < 2 {
                continue;
            }
            let (_, r) = integer_ratios(&f.weights)?;
            match &key {
                None => key = Some(r),
                Some(k) if *k == r => {}
                Some(_) => return None,
            }
        }
        Some(key)
    }

    fn grid_sum(&self, c: &[f64], steps: &[f64], halves: &[i64]) -> Result<(Complex64, f64)> {
        let d = self.dim;
        let t = GridTables::build(self, c, steps[0], halves)?;
        if t.direct.is_empty() && (t.coupled.is_empty() || t.coupled.iter().all(|cf| cf.ratios == t.coupled[0].ratios)) {
            return t.convolved_sum(halves);
        }
        let outer: Vec<i64> = (-halves[0]..=halves[0]).collect();
        let partials: Vec<Result<(Complex64, f64)>> = outer
            .par_iter()
            .map(|&i0| {
                let mut idx = vec![0i64; d];
                idx[0] = i0;
                for k in 1..d {
                    idx[k] = -halves[k];
                }
                let mut s = vec![Complex64::new(0.0, 0.0); d];
                let mut acc = Complex64::new(0.0, 0.0);
                let mut acc_abs = 0.0;
                loop {
                    let mut lv = t.constant;
                    for k in 0..d {
                        lv += t.axis[k][(idx[k] + halves[k]) as usize];
                    }
                    for cf in &t.coupled {
                        let key: i64 = cf.ratios.iter().zip(&idx).map(|(r, i)| r * i).sum();
                        lv += cf.table[(key + cf.reach) as usize];
                    }
                    if !t.direct.is_empty() {
                        for k in 0..d {
                            s[k] = Complex64::new(c[k], idx[k] as f64 * steps[k]);
                        }
                        for f in &t.direct {
                            let lg = log_gamma(f.arg(&s))?;
                            if f.numerator {
                                lv += lg;
                            } else {
                                lv -= lg;
                            }
                        }
                    }
                    let v = lv.exp();
                    if v.re.is_finite() && v.im.is_finite() {
                        acc += v;
                        acc_abs += v.norm();
                    } else {
                        return Err(Error::Numerical(format!("non-finite integrand at index {idx:?}")));
                    }
                    // odometer over dims 1..d
                    let mut k = d;
                    loop {
                        if k == 1 {
                            return Ok((acc, acc_abs));
                        }
                        k -= 1;
                        if idx[k] < halves[k] {
                            idx[k] += 1;
                            break;
                        }
                        idx[k] = -halves[k];
                    }
                    if d == 1 {
                        return Ok((acc, acc_abs));
                    }
                }
            })
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        let mut total_abs = 0.0;
        for p in partials {
            let (a, b) = p?;
            total += a;
            total_abs += b;
        }
        Ok((total, total_abs))
    }

    /// Crude mass estimate of the outermost tenth of the window.
    fn outer_band_mass(&self, c: &[f64], heights: &[f64], _nodes: usize) -> Result<f64> {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for k in 0..d {
            let band_lo = 0.9 * heights[k];
            let n = 8;
            let h = (heights[k] - band_lo) / n as f64;
            let mut mass = 0.0;
            for j in 0..=n {
                let t = band_lo + j as f64 * h;
                for sign in [1.0, -1.0] {
                    let mut s: Vec<Complex64> = c.iter().map(|x| Complex64::new(*x, 0.0)).collect();
                    s[k].im = sign * t;
                    mass += self.log_integrand(&s)?.re.exp() * h;
                }
            }
            // scale by the width of the remaining dims at their peak
            worst = worst.max(mass / (2.0 * PI).powi(d as i32));
        }
        Ok(worst)
    }
}

/// Log-integrand pieces on a uniform grid `s_k = c_k + i h j_k`.
///
/// Factors of one variable go into per-axis tables. A factor coupling several
/// variables whose weights are integer multiples of a common weight depends
/// on the grid only through `sum_k r_k j_k`, so it is tabulated on that key.
/// Anything else is evaluated pointwise.
struct GridTables<'a> {
    constant: Complex64,
    axis: Vec<Vec<Complex64>>,
    coupled: Vec<CoupledTable>,
    direct: Vec<&'a GammaFactor>,
}

struct CoupledTable {
    ratios: Vec<i64>,
    reach: i64,
    table: Vec<Complex64>,
}

fn signed_log_gamma(z: Complex64, numerator: bool) -> Result<Complex64> {
    let lg = log_gamma(z)?;
    Ok(if numerator { lg } else { -lg })
}

fn integer_ratios(weights: &[f64]) -> Option<(f64, Vec<i64>)> {
    let magnitude = weights
        .iter()
        .filter(|w| **w != 0.0)
        .fold(f64::INFINITY, |m, w| m.min(w.abs()));
    // sign fixed by the first used variable so w and -w share a key
    let first = weights.iter().find(|w| **w != 0.0)?;
    let base = magnitude.copysign(*first);
    let mut out = Vec::with_capacity(weights.len());
    for w in weights {
        let r = w / base;
        if (r - r.round()).abs() > 1e-12 * r.abs().max(1.0) || r.abs() > 16.0 {
            return None;
        }
        out.push(r.round() as i64);
    }
    Some((base, out))
}

/// Work of the convolution path: one pass per dimension over the key range
/// accumulated so far.
fn convolution_cost(ratios: Option<&[i64]>, halves: &[i64]) -> usize {
    let mut reach = 0i64;
    let mut cost = 0usize;
    for (k, n) in halves.iter().enumerate() {
        let r = ratios.map_or(0, |r| r[k]);
        cost = cost.saturating_add(((2 * reach + 1) * (2 * n + 1)) as usize);
        reach += r.abs() * n;
    }
    cost
}

impl<'a> GridTables<'a> {
    fn build(mb: &'a MellinBarnes, c: &[f64], h: f64, halves: &[i64]) -> Result<Self> {
        let d = mb.dim;
        let mut constant = Complex64::new(0.0, 0.0);
        let mut axis: Vec<Vec<Complex64>> = (0..d)
            .map(|k| {
                (-halves[k]..=halves[k])
                    .map(|j| -Complex64::new(c[k], j as f64 * h) * mb.log_args[k])
                    .collect()
            })
            .collect();
        let mut coupled = Vec::new();
        let mut direct = Vec::new();
        for f in &mb.factors {
            let used: Vec<usize> = (0..d).filter(|&k| f.weights[k] != 0.0).collect();
            let re = f.arg_real(c);
            match used.len() {
                0 => constant += signed_log_gamma(Complex64::new(re, 0.0), f.numerator)?,
                1 => {
                    let k = used[0];
                    let w = f.weights[k];
                    let vals: Result<Vec<Complex64>> = (-halves[k]..=halves[k])
                        .into_par_iter()
                        .map(|j| signed_log_gamma(Complex64::new(re, w * j as f64 * h), f.numerator))
                        .collect();
                    for (a, v) in axis[k].iter_mut().zip(vals?) {
                        *a += v;
                    }
                }
                _ => match integer_ratios(&f.weights) {
                    Some((base, ratios)) => {
                        let reach: i64 = ratios.iter().zip(halves).map(|(r, n)| r.abs() * n).sum();
                        let table: Result<Vec<Complex64>> = (-reach..=reach)
                            .into_par_iter()
                            .map(|j| signed_log_gamma(Complex64::new(re, base * j as f64 * h), f.numerator))
                            .collect();
                        coupled.push(CoupledTable {
                            ratios,
                            reach,
                            table: table?,
                        });
                    }
                    None => direct.push(f),
                },
            }
        }
        Ok(GridTables {
            constant,
            axis,
            coupled,
            direct,
        })
    }

    /// Grid sum when all coupled factors share one key: convolve the per-axis
    /// weights into a distribution over the key, then pair it with the
    /// coupled table. `l1` follows from the same recursion on magnitudes.
    fn convolved_sum(&self, halves: &[i64]) -> Result<(Complex64, f64)> {
        let d = self.axis.len();
        let ratios: Vec<i64> = match self.coupled.first() {
            Some(cf) => cf.ratios.clone(),
            None => vec![0; d],
        };
        let mut shift = self.constant.re;
        let mut dist = vec![Complex64::new(1.0, 0.0)];
        let mut dist_abs = vec![1.0f64];
        let mut reach = 0i64;
        for k in 0..d {
            let m = self.axis[k].iter().fold(f64::NEG_INFINITY, |a, v| a.max(v.re));
            shift += m;
            let w: Vec<Complex64> = self.axis[k].iter().map(|v| (v - m).exp()).collect();
            let r = ratios[k];
            let n = halves[k];
            let next_reach = reach + r.abs() * n;
            let mut nd = vec![Complex64::new(0.0, 0.0); (2 * next_reach + 1) as usize];
            let mut na = vec![0.0f64; nd.len()];
            for (i, (dv, da)) in dist.iter().zip(&dist_abs).enumerate() {
                if *da == 0.0 {
                    continue;
                }
                let key = i as i64 - reach;
                for (j, wv) in w.iter().enumerate() {
                    let target = (key + r * (j as i64 - n) + next_reach) as usize;
                    nd[target] += dv * wv;
                    na[target] += da * wv.norm();
                }
            }
            dist = nd;
            dist_abs = na;
            reach = next_reach;
        }
        let coupled_at = |key: i64| -> Complex64 {
            let mut acc = Complex64::new(0.0, self.constant.im);
            for cf in &self.coupled {
                acc += cf.table[(key + cf.reach) as usize];
            }
            acc
        };
        // second shift keeps exp() in range when the coupled table is large
        let top = (0..dist.len())
            .filter(|&i| dist_abs[i] > 0.0)
            .map(|i| coupled_at(i as i64 - reach).re)
            .fold(f64::NEG_INFINITY, f64::max);
        let top = if top.is_finite() { top } else { 0.0 };
        let mut acc = Complex64::new(0.0, 0.0);
        let mut acc_abs = 0.0;
        for i in 0..dist.len() {
            if dist_abs[i] == 0.0 {
                continue;
            }
            let g = (coupled_at(i as i64 - reach) - top).exp();
            acc += dist[i] * g;
            acc_abs += dist_abs[i] * g.norm();
        }
        let scale = (shift + top).exp();
        let (v, a) = (acc * scale, acc_abs * scale);
        if v.re.is_finite() && v.im.is_finite() && a.is_finite() {
            Ok((v, a))
        } else {
            Err(Error::Numerical("non-finite integrand sum".into()))
        }
    }
}

/// Residue of a one-dimensional integrand at a simple pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residue {
    pub pole: f64,
    /// Index of the numerator factor carrying the pole.
    pub factor: usize,
    /// Residue including the `z^(-pole)` factor.
    pub value: f64,
}

impl MellinBarnes {
    /// Residue at the rightmost pole to the left of the abscissa `c`, i.e. the
    /// leading term of the expansion for small `z`. Poles cancelled by a
    /// denominator gamma are skipped; coincident poles are reported as
    /// [`Error::MultiplePole`].
    pub fn leading_left_residue(&self, c: f64) -> Result<Residue> {
        if self.dim != 1 {
            return Err(Error::InvalidParams("residues need a one-dimensional integrand".into()));
        }
        let mut poles: Vec<(f64, usize, u32)> = Vec::new();
        for (k, f) in self.factors.iter().enumerate() {
            let w = f.weights[0];
            if !f.numerator || w == 0.0 {
                continue;
            }
            // poles where offset + w s = -j
            let j0 = if w > 0.0 {
                (-f.offset - w * c).ceil().max(0.0)
            } else {
                0.0
            };
            for j in 0..4u32 {
                let jj = j0 + j as f64;
                let s = (-jj - f.offset) / w;
                if s < c {
                    poles.push((s, k, jj as u32));
                }
            }
        }
        poles.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut i = 0;
        while i < poles.len() {
            let (p, k, j) = poles[i];
            if let Some(&(q, k2, _)) = poles.get(i + 1) {
                if (p - q).abs() < 1e-9 && k2 != k {
                    return Err(Error::MultiplePole { first: p, second: q });
                }
            }
            let f = &self.factors[k];
            let w = f.weights[0];
            let mut log_sum = Complex64::new(0.0, 0.0);
            let mut cancelled = false;
            for (m, g) in self.factors.iter().enumerate() {
                if m == k {
                    continue;
                }
                let x = g.offset + g.weights[0] * p;
                let near_pole = x <= 0.0 && (x - x.round()).abs() < 1e-9;
                if near_pole {
                    if g.numerator {
                        return Err(Error::MultiplePole { first: p, second: p });
                    }
                    cancelled = true;
                    break;
                }
                let lg = log_gamma(Complex64::new(x, 0.0))?;
                if g.numerator {
                    log_sum += lg;
                } else {
                    log_sum -= lg;
                }
            }
            if cancelled {
                i += 1;
                continue;
            }
            log_sum -= Complex64::new(p * self.log_args[0], 0.0);
            let fact: f64 = (1..=j).map(f64::from).product();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            // Gamma(offset + w s) ~ (-1)^j / (j! w (s - p)) near the pole
            let value = log_sum.exp().re * sign / (fact * w);
            return Ok(Residue { pole: p, factor: k, value });
        }
        Err(Error::Numerical("no uncancelled pole left of the contour".into()))
    }
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for k in col..=n {
                        a[r][k] -= f * a[col][k];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    if k > n {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in (i + 1)..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimizes a unimodal-ish `phi` on the open interval `(lo, hi)` starting at
/// `x0`: bracket by doubling steps, then golden-section search.
pub(crate) fn minimize_on_interval<F: FnMut(f64) -> f64>(
    phi: &mut F,
    x0: f64,
    lo: f64,
    hi: f64,
) -> f64 {
    // keep a margin from finite ends
    let width = hi - lo;
    let (lo, hi) = if width.is_finite() {
        (lo + 0.02 * width.min(5.0), hi - 0.02 * width.min(5.0))
    } else {
        (
            if lo.is_finite() { lo + 0.02 } else { lo },
            if hi.is_finite() { hi - 0.02 } else { hi },
        )
    };
    if !(lo < hi) {
        return x0;
    }
    let x0 = x0.clamp(lo, hi);
    let f0 = phi(x0);
    // pick descent direction
    let step0 = 0.25;
    let mut dir = 1.0;
    let right = (x0 + step0).min(hi);
    let left = (x0 - step0).max(lo);
    let fr = phi(right);
    let fl = phi(left);
    if fl < fr {
        dir = -1.0;
    }
    if f0 <= fr.min(fl) {
        return golden(phi, left, right);
    }
    let mut a = x0;
    let mut b = x0 + dir * step0;
    let mut fb = if dir > 0.0 { fr } else { fl };
    let mut step = step0;
    loop {
        step *= 2.0;
        let next = (b + dir * step).clamp(lo, hi);
        let fnext = phi(next);
        if fnext >= fb || next == b {
            let (p, q) = if dir > 0.0 { (a, next) } else { (next, a) };
            return golden(phi, p, q);
        }
        a = b;
        b = next;
        fb = fnext;
        if step > 1e7 {
            return b;
        }
    }
}

fn golden<F: FnMut(f64) -> f64>(phi: &mut F, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = phi(x1);
    let mut f2 = phi(x2);
    for _ in 0..80 {
        if (b - a).abs() < 1e-5 * (1.0 + a.abs()) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = phi(x2);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_kernel(z: f64) -> MellinBarnes {
        let mut mb = MellinBarnes::new(1, vec![z.ln()]);
        mb.push(0.0, vec![1.0], true);
        mb
    }

    #[test]
    fn exponential_reduction() {
        for z in [0.01, 0.5, 1.0, 3.0, 40.0] {
            let mb = exp_kernel(z);
            let c = mb.choose_contour().unwrap();
            let v = mb.integrate(&c, None, QuadratureOptions::with_tol(1e-10)).unwrap();
            let exact = (-z).exp();
            assert!((v.value.re - exact).abs() <= 1e-9 * exact, "z={z} {v:?}");
            assert!(v.value.im.abs() <= 1e-8 * exact);
        }
    }

    #[test]
    fn separable_double_integral() {
        let mut mb = MellinBarnes::new(2, vec![1f64.ln(), 2f64.ln()]);
        mb.push(0.0, vec![1.0, 0.0], true);
        mb.push(0.0, vec![0.0, 1.0], true);
        let c = mb.choose_contour().unwrap();
        let v = mb.integrate(&c, None, QuadratureOptions::with_tol(1e-8)).unwrap();
        let exact = (-3f64).exp();
        assert!((v.value.re - exact).abs() < 1e-8 * exact, "{v:?}");
    }

    #[test]
    fn interleaved_families_have_no_contour() {
        // Gamma(s) Gamma(-1 - s): need s > 0 and s < -1
        let mut mb = MellinBarnes::new(1, vec![0.0]);
        mb.push(0.0, vec![1.0], true);
        mb.push(-1.0, vec![-1.0], true);
        assert!(matches!(mb.central_point(), Err(Error::NoContour(_))));
    }

    #[test]
    fn divergent_integrand_rejected() {
        // Gamma(s)/Gamma(s): no decay
        let mut mb = MellinBarnes::new(1, vec![0.0]);
        mb.push(0.0, vec![1.0], true);
        mb.push(0.0, vec![1.0], false);
        assert!(matches!(
            mb.integrate(&[1.0], None, QuadratureOptions::with_tol(1e-8)),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn residue_of_exponential_kernel() {
        // Gamma(s) z^-s: leading left pole s=0 with residue 1
        let mb = exp_kernel(0.3);
        let r = mb.leading_left_residue(0.5).unwrap();
        assert_eq!(r.pole, 0.0);
        assert!((r.value - 1.0).abs() < 1e-14);
        // Gamma(s)Gamma(s): double pole
        let mut mb = MellinBarnes::new(1, vec![0.0]);
        mb.push(0.0, vec![1.0], true);
        mb.push(0.0, vec![1.0], true);
        assert!(matches!(mb.leading_left_residue(0.5), Err(Error::MultiplePole { .. })));
    }

    #[test]
    fn combination_enumeration_counts() {
        let mut idx = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut idx, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
    }
}

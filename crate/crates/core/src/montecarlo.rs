//! Seeded Monte-Carlo estimators of SOP, PNZ and ASC.
//!
//! Samples are drawn in fixed-size chunks. Chunk `i` owns a ChaCha8 stream
//! seeded with [`chunk_seed`]`(seed, i)`, and chunk results are merged in
//! index order, so an estimate depends only on `(seed, n)` and never on the
//! number of worker threads.

use std::f64::consts::LN_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colluding::Scheme;
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::fading::Sampler;

pub const CHUNK: usize = 1 << 15;
pub const MIN_SAMPLES: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    /// Sample standard deviation over `sqrt(n)`.
    pub std_err: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// `(analytic - value) / std_err`; infinite when the estimate has no spread
    /// but disagrees.
    pub fn z_score(&self, analytic: f64) -> f64 {
        let d = analytic - self.value;
        if self.std_err > 0.0 {
            d / self.std_err
        } else if d.abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY.copysign(d)
        }
    }
}

impl McEstimate {
    /// One-sample proportion test of `p0` for an indicator estimate: the
    /// spread is the binomial `sqrt(p0 (1 - p0) / n)` under the hypothesis,
    /// which stays meaningful when no event was observed.
    pub fn z_score_probability(&self, p0: f64) -> f64 {
        let p = p0.clamp(0.0, 1.0);
        let sd = (p * (1.0 - p) / self.n_samples as f64).sqrt();
        let d = p0 - self.value;
        if sd > 0.0 {
            d / sd
        } else if d.abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY.copysign(d)
        }
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of chunk `index`: `mix(seed + (index + 1) * golden)` with the 64-bit
/// golden-ratio increment.
pub fn chunk_seed(seed: u64, index: u64) -> u64 {
    mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

struct Draws {
    main: Sampler,
    eves: Vec<Sampler>,
    scheme: Scheme,
    rate_factor: f64,
    offset: f64,
}

impl Draws {
    fn new(s: &Scenario) -> Result<Self> {
        Ok(match s {
            Scenario::Single(c) => {
                c.validate()?;
                Draws {
                    main: c.main.sampler(),
                    eves: vec![c.eve.sampler()],
                    scheme: Scheme::Mrc,
                    rate_factor: c.rate_factor(),
                    offset: c.offset(),
                }
            }
            Scenario::Colluding(c) => {
                c.validate()?;
                Draws {
                    main: c.main.sampler(),
                    eves: c.eves.iter().map(|e| e.sampler()).collect(),
                    scheme: c.scheme,
                    rate_factor: c.rate_factor(),
                    offset: c.offset(),
                }
            }
        })
    }

    /// `(gamma_B, gamma_C)` with `gamma_C` the sum (MRC) or max (SC).
    fn draw(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let b = self.main.draw(rng);
        let mut c = 0.0f64;
        for e in &self.eves {
            let x = e.draw(rng);
            c = match self.scheme {
                Scheme::Mrc => c + x,
                Scheme::Sc => c.max(x),
            };
        }
        (b, c)
    }
}

/// Mean and standard error of `f(gamma_B, gamma_C)` over `n` draws.
fn estimate<F>(s: &Scenario, n: usize, seed: u64, min: usize, f: F) -> Result<McEstimate>
where
    F: Fn(&Draws, f64, f64) -> f64 + Sync,
{
    if n < min {
        return Err(Error::InvalidParams(format!("need at least {min} samples, got {n}")));
    }
    let draws = Draws::new(s)?;
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = CHUNK.min(n - i * CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, i as u64));
            let mut sum = 0.0;
            let mut sq = 0.0;
            for _ in 0..len {
                let (b, c) = draws.draw(&mut rng);
                let v = f(&draws, b, c);
                sum += v;
                sq += v * v;
            }
            (sum, sq)
        })
        .collect();
    let (mut sum, mut sq) = (0.0, 0.0);
    for (a, b) in parts {
        sum += a;
        sq += b;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    Ok(McEstimate {
        value: mean,
        std_err: (var / nf).sqrt(),
        n_samples: n,
        seed,
    })
}

/// Frequency of `gamma_B <= R_s gamma_C + W`.
pub fn mc_sop<S: Into<Scenario>>(s: S, n: usize, seed: u64) -> Result<McEstimate> {
    estimate(&s.into(), n, seed, MIN_SAMPLES, |d, b, c| {
        f64::from(b <= d.rate_factor * c + d.offset)
    })
}

/// Frequency of `gamma_B < R_s gamma_C`, the event behind the SOP lower bound.
pub fn mc_sop_lower_bound<S: Into<Scenario>>(s: S, n: usize, seed: u64) -> Result<McEstimate> {
    estimate(&s.into(), n, seed, MIN_SAMPLES, |d, b, c| f64::from(b < d.rate_factor * c))
}

/// Frequency of `gamma_B > gamma_C`.
pub fn mc_pnz<S: Into<Scenario>>(s: S, n: usize, seed: u64) -> Result<McEstimate> {
    estimate(&s.into(), n, seed, MIN_SAMPLES, |_, b, c| f64::from(b > c))
}

/// Mean of `max(log2((1 + gamma_B) / (1 + gamma_C)), 0)`.
pub fn mc_asc_positive_part<S: Into<Scenario>>(s: S, n: usize, seed: u64) -> Result<McEstimate> {
    estimate(&s.into(), n, seed, 10 * MIN_SAMPLES, |_, b, c| {
        ((1.0 + b).ln() - (1.0 + c).ln()).max(0.0) / LN_2
    })
}

/// Mean of the three-term integrand
/// `ln(1+gB) 1{gC < gB} + ln(1+gC) 1{gB < gC} - ln(1+gC)` over ln 2,
/// the sampled counterpart of `(I1 + I2 - I3) / ln 2`.
pub fn mc_asc_decomposition<S: Into<Scenario>>(s: S, n: usize, seed: u64) -> Result<McEstimate> {
    estimate(&s.into(), n, seed, 10 * MIN_SAMPLES, |_, b, c| {
        let lb = (1.0 + b).ln();
        let lc = (1.0 + c).ln();
        let i1 = if c < b { lb } else { 0.0 };
        let i2 = if b < c { lc } else { 0.0 };
        (i1 + i2 - lc) / LN_2
    })
}

/// Alias of [`mc_asc_positive_part`].
pub fn mc_asc<S: Into<Scenario>>(s: S, n: usize, seed: u64) -> Result<McEstimate> {
    mc_asc_positive_part(s, n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::FadingModel;
    use crate::secrecy::WiretapConfig;

    fn exp_pair(rate: f64) -> WiretapConfig {
        WiretapConfig::new(FadingModel::exponential_snr(2.0), FadingModel::exponential_snr(1.0), rate)
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = mc_sop(&exp_pair(1.0), 50_000, 7).unwrap();
        let b = mc_sop(&exp_pair(1.0), 50_000, 7).unwrap();
        let c = mc_sop(&exp_pair(1.0), 50_000, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| mc_pnz(&exp_pair(0.0), 200_000, 3).unwrap());
        let b = mc_pnz(&exp_pair(0.0), 200_000, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pnz_and_sop_complement_pathwise() {
        let p = mc_pnz(&exp_pair(0.0), 100_000, 11).unwrap();
        let s = mc_sop(&exp_pair(0.0), 100_000, 11).unwrap();
        assert_eq!(p.value + s.value, 1.0);
    }

    #[test]
    fn too_few_samples() {
        assert!(mc_sop(&exp_pair(1.0), 10, 1).is_err());
        assert!(mc_asc(&exp_pair(1.0), 5_000, 1).is_err());
    }

    #[test]
    fn decomposition_matches_positive_part() {
        let a = mc_asc_positive_part(&exp_pair(0.0), 100_000, 5).unwrap();
        let b = mc_asc_decomposition(&exp_pair(0.0), 100_000, 5).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
    }

    #[test]
    fn proportion_z_with_no_events() {
        let e = McEstimate { value: 0.0, std_err: 0.0, n_samples: 1_000_000, seed: 1 };
        assert!(e.z_score(1e-7).is_infinite());
        assert!(e.z_score_probability(1e-7).abs() < 0.5);
        assert!(e.z_score_probability(1e-4).abs() > 3.0);
    }

    #[test]
    fn chunk_seeds_differ() {
        assert_ne!(chunk_seed(1, 0), chunk_seed(1, 1));
        assert_ne!(chunk_seed(1, 0), chunk_seed(2, 0));
    }
}

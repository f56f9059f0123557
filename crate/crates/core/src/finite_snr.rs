//! Finite-SNR rates: expected logarithms of exponential variables (by
//! Monte Carlo and in closed form), the Jensen-gap bracket, and the TDM and
//! two-symbol-training rate pipelines.
//!
//! Monte-Carlo work is split by [`ChunkPolicy`]; chunks run in parallel and
//! their statistics are merged in chunk order, so results are bitwise
//! reproducible for a fixed `(seed, samples, chunk size)`.

use std::f64::consts::{LN_2, LOG2_E};

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::channel::{ChannelConfig, ChunkPolicy, LinkDraw, LinkSampler, MmseModel};
use crate::error::{Error, Result};
use crate::polytope::Region2D;
use crate::schemes::{postfm_region, TermBounds};
use crate::special::{exp_e1_scaled, EULER_GAMMA};

pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const MIN_SAMPLES: usize = 1_000;

/// `E[log2(a + Σ bᵢ·μᵢ·ξᵢ)]` with independent unit-mean exponentials `ξᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedLogSpec {
    pub offset: f64,
    /// `(b, μ)` pairs.
    pub components: Vec<(f64, f64)>,
}

impl ExpectedLogSpec {
    pub fn new(offset: f64, components: Vec<(f64, f64)>) -> Result<Self> {
        let spec = ExpectedLogSpec { offset, components };
        spec.validate()?;
        Ok(spec)
    }

    pub fn single(offset: f64, b: f64, mean: f64) -> Result<Self> {
        Self::new(offset, vec![(b, mean)])
    }

    fn validate(&self) -> Result<()> {
        if !(self.offset.is_finite() && self.offset >= 0.0) {
            return Err(Error::invalid("offset", format!("need a >= 0, got {}", self.offset)));
        }
        for &(b, m) in &self.components {
            if !(b.is_finite() && m.is_finite() && b >= 0.0 && m >= 0.0) {
                return Err(Error::invalid(
                    "components",
                    format!("need finite b, mean >= 0, got ({b}, {m})"),
                ));
            }
        }
        if self.offset == 0.0 && self.components.iter().all(|&(b, m)| b * m == 0.0) {
            return Err(Error::invalid("components", "log of zero: a = 0 and every b·μ = 0"));
        }
        Ok(())
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Running mean and centred second moment, mergeable across chunks.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2.0 {
            return 0.0;
        }
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

/// Runs `chunk_fn` on every chunk in parallel and merges in chunk order.
fn run_chunks<const K: usize, F>(chunks: usize, chunk_fn: F) -> [Moments; K]
where
    F: Fn(usize) -> [Moments; K] + Sync + Send,
{
    let parts: Vec<[Moments; K]> = (0..chunks).into_par_iter().map(chunk_fn).collect();
    parts.into_iter().fold([Moments::default(); K], |acc, p| {
        let mut out = acc;
        for k in 0..K {
            out[k] = acc[k].merge(p[k]);
        }
        out
    })
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::invalid(
            "samples",
            format!("need at least {MIN_SAMPLES}, got {samples}"),
        ));
    }
    Ok(())
}

pub fn expected_log_mc(spec: &ExpectedLogSpec, samples: usize, seed: u64) -> Result<McEstimate> {
    expected_log_mc_with(spec, samples, seed, ChunkPolicy::default())
}

pub fn expected_log_mc_with(
    spec: &ExpectedLogSpec,
    samples: usize,
    seed: u64,
    policy: ChunkPolicy,
) -> Result<McEstimate> {
    spec.validate()?;
    check_samples(samples)?;
    let weights: Vec<f64> = spec.components.iter().map(|&(b, m)| b * m).collect();
    let [m] = run_chunks(policy.num_chunks(samples), |k| {
        let mut rng = policy.rng(seed, k);
        let mut acc = Moments::default();
        for _ in policy.range(samples, k) {
            let x = weights.iter().fold(spec.offset, |s, &w| {
                let xi: f64 = rng.sample(Exp1);
                s + w * xi
            });
            acc.push(x.log2());
        }
        [acc]
    });
    Ok(McEstimate {
        value: m.mean,
        stderr: m.stderr(),
        samples,
        seed,
    })
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
    }
    Ok(())
}

/// Exact `E[log2(a + b·ξ)]` for `ξ` exponential with the given mean.
pub fn expected_log_closed(a: f64, b: f64, mean: f64) -> Result<f64> {
    check_nonneg("a", a)?;
    check_nonneg("b", b)?;
    check_nonneg("mean", mean)?;
    let bm = b * mean;
    if bm == 0.0 {
        if a == 0.0 {
            return Err(Error::invalid("a", "log of zero: a = 0 and b·mean = 0"));
        }
        return Ok(a.log2());
    }
    if a == 0.0 {
        return Ok(bm.log2() - EULER_GAMMA * LOG2_E);
    }
    let x = a / bm;
    Ok((a.ln() + exp_e1_scaled(x)?) / LN_2)
}

/// Jensen-gap bracket `(hi − γ·log2 e, hi)` with `hi = log2(a + b·mean)`.
pub fn fact1_bracket(a: f64, b: f64, mean: f64) -> Result<(f64, f64)> {
    check_nonneg("a", a)?;
    check_nonneg("b", b)?;
    check_nonneg("mean", mean)?;
    if b * mean <= 0.0 {
        return Err(Error::invalid("b", "need b·mean > 0"));
    }
    let hi = (a + b * mean).log2();
    Ok((hi - EULER_GAMMA * LOG2_E, hi))
}

/// Draws of the four channel estimates `|ĝij|²`.
fn estimate_sampler(
    mmse: &MmseModel,
    samples: usize,
    seed: u64,
    policy: ChunkPolicy,
) -> Result<LinkSampler> {
    LinkSampler::with_variances(mmse.est_var_direct, mmse.est_var_cross, seed, samples, policy)
}

pub fn rate_tdm(config: &ChannelConfig, samples: usize, seed: u64) -> Result<McEstimate> {
    rate_tdm_with(config, samples, seed, ChunkPolicy::default())
}

/// Per-user rate when each pair is active half the time and spends one
/// pilot per block.
pub fn rate_tdm_with(
    config: &ChannelConfig,
    samples: usize,
    seed: u64,
    policy: ChunkPolicy,
) -> Result<McEstimate> {
    check_samples(samples)?;
    let m = config.mmse();
    let factor = 0.5 * (1.0 - 1.0 / f64::from(config.coherence));
    let sampler = estimate_sampler(&m, samples, seed, policy)?;
    let [acc] = run_chunks(sampler.num_chunks(), |k| {
        let mut acc = Moments::default();
        for d in sampler.chunk(k) {
            acc.push((1.0 + d.g11_sq / m.noise_tdm).log2());
        }
        [acc]
    });
    Ok(McEstimate {
        value: factor * acc.mean,
        stderr: factor * acc.stderr(),
        samples,
        seed,
    })
}

/// The four symmetric-rate candidates of the training scheme, per sample:
/// individual, two sum-rate forms, and the `2R1 + R2` form divided by 3.
fn training_candidates(d: &LinkDraw, n: f64, lam: f64) -> [f64; 4] {
    let lg = |x: f64| x.log2();
    let r_p = lg(n + lam * d.g21_sq);
    let a = lg(n + d.g11_sq + lam * d.g21_sq);
    let both_private = lg(n + lam * d.g11_sq + lam * d.g21_sq);
    let s1 = lg(n + d.g22_sq + d.g12_sq) + both_private;
    let cross_common = lg(n + lam * d.g11_sq + d.g21_sq);
    let s2 = 2.0 * cross_common;
    let tr = lg(n + d.g11_sq + d.g21_sq) + both_private + cross_common;
    [
        a - r_p,
        (s1 - 2.0 * r_p) / 2.0,
        (s2 - 2.0 * r_p) / 2.0,
        (tr - 3.0 * r_p) / 3.0,
    ]
}

pub fn rate_training_rs(config: &ChannelConfig, samples: usize, seed: u64) -> Result<McEstimate> {
    rate_training_rs_with(config, samples, seed, ChunkPolicy::default())
}

/// Symmetric rate of rate splitting after two pilot symbols per block, with
/// MMSE estimates and the estimation error counted as noise. All expectations
/// share one set of draws; the reported standard error is that of the
/// binding candidate.
pub fn rate_training_rs_with(
    config: &ChannelConfig,
    samples: usize,
    seed: u64,
    policy: ChunkPolicy,
) -> Result<McEstimate> {
    check_samples(samples)?;
    let factor = 1.0 - 2.0 / f64::from(config.coherence);
    if factor == 0.0 {
        return Ok(McEstimate {
            value: 0.0,
            stderr: 0.0,
            samples,
            seed,
        });
    }
    let m = config.mmse();
    let sampler = estimate_sampler(&m, samples, seed, policy)?;
    let accs = run_chunks(sampler.num_chunks(), |k| {
        let mut acc = [Moments::default(); 4];
        for d in sampler.chunk(k) {
            let c = training_candidates(&d, m.noise_rs, m.lambda_p);
            for (a, v) in acc.iter_mut().zip(c) {
                a.push(v);
            }
        }
        acc
    });
    let binding = accs
        .iter()
        .min_by(|x, y| x.mean.total_cmp(&y.mean))
        .copied()
        .unwrap_or_default();
    Ok(McEstimate {
        value: factor * binding.mean,
        stderr: factor * binding.stderr(),
        samples,
        seed,
    })
}

/// Rate-splitting region at finite SNR in bits per symbol, from the
/// closed-form term bounds. Negative bounds are raised to zero, which keeps
/// them valid lower bounds on mutual information.
pub fn finite_snr_region_rs(config: &ChannelConfig, feedback: bool) -> Result<Region2D> {
    let raw = TermBounds::from_channel(config.snr, config.inr, config.coherence)?;
    let mut bounds = TermBounds::new();
    for (t, v) in raw.iter() {
        bounds.set(t, v.max(0.0));
    }
    postfm_region(&bounds, feedback, config.coherence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::config_from_db;

    #[test]
    fn closed_form_values() {
        let v = expected_log_closed(0.0, 1.0, 1.0).unwrap();
        assert!((v + 0.832_746).abs() < 1e-5);
        let v = expected_log_closed(1.0, 1.0, 1.0).unwrap();
        assert!((v - 0.860_3).abs() < 1e-4);
        let v = expected_log_closed(1.0, 1e-12, 1.0).unwrap();
        assert!(v.abs() < 1e-10);
        assert_eq!(expected_log_closed(4.0, 0.0, 1.0).unwrap(), 2.0);
        assert!(expected_log_closed(-1.0, 1.0, 1.0).is_err());
        assert!(expected_log_closed(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn bracket() {
        let (lo, hi) = fact1_bracket(1.0, 1.0, 1.0).unwrap();
        assert_eq!(hi, 1.0);
        assert!((lo - 0.167_254).abs() < 1e-5);
        let (lo, _) = fact1_bracket(0.0, 2.0, 3.0).unwrap();
        assert!((expected_log_closed(0.0, 2.0, 3.0).unwrap() - lo).abs() < 1e-14);
        assert!(fact1_bracket(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn mc_degenerate_and_rejections() {
        let spec = ExpectedLogSpec::single(1.0, 0.0, 1.0).unwrap();
        let e = expected_log_mc(&spec, 1000, 1).unwrap();
        assert_eq!((e.value, e.stderr), (0.0, 0.0));
        assert!(expected_log_mc(&spec, 999, 1).is_err());
        assert!(ExpectedLogSpec::single(0.0, 0.0, 1.0).is_err());
        assert!(ExpectedLogSpec::single(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn mc_matches_closed_form() {
        let spec = ExpectedLogSpec::single(1.0, 1.0, 1.0).unwrap();
        let e = expected_log_mc(&spec, 200_000, 7).unwrap();
        let c = expected_log_closed(1.0, 1.0, 1.0).unwrap();
        assert!((e.value - c).abs() <= 3.0 * e.stderr, "{e:?} vs {c}");
    }

    #[test]
    fn mc_chunking_is_part_of_the_contract() {
        let spec = ExpectedLogSpec::new(0.5, vec![(1.0, 2.0), (0.3, 1.0)]).unwrap();
        let a = expected_log_mc_with(&spec, 5000, 3, ChunkPolicy::new(1000).unwrap()).unwrap();
        let b = expected_log_mc_with(&spec, 5000, 3, ChunkPolicy::new(1000).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64 * 0.5).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (l, r) = xs.split_at(33);
        let (mut a, mut b) = (Moments::default(), Moments::default());
        l.iter().for_each(|&x| a.push(x));
        r.iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert!((m.mean - whole.mean).abs() < 1e-12);
        assert!((m.m2 - whole.m2).abs() < 1e-9);
    }

    #[test]
    fn training_is_zero_at_coherence_two() {
        let c = config_from_db(16.0, 1.0, 2, 0.1).unwrap();
        let r = rate_training_rs(&c, 1000, 1).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn rates_vanish_at_low_snr() {
        let c = ChannelConfig::from_linear(1e-9, 1e-9, 5).unwrap();
        assert!(rate_tdm(&c, 1000, 1).unwrap().value < 1e-12);
    }

    #[test]
    fn tdm_16db_near_half_bit() {
        let c = config_from_db(16.0, 1.0, 5, 0.1).unwrap();
        let r = rate_tdm(&c, 100_000, 1).unwrap();
        assert!((r.value - 0.4948).abs() < 0.01, "{r:?}");
    }
}

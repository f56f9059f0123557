//! Channel parameterization, interference regimes, the two-symbol MMSE
//! training model and seeded fading-link sampling.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

/// Symmetric channel statistics of the two-user interference channel.
///
/// `snr` and `inr` are the effective link variances `E|g11|²` and `E|g21|²`
/// (linear), i.e. transmit power times `link_gain` is already absorbed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub snr: f64,
    pub inr: f64,
    pub alpha: f64,
    pub coherence: u32,
    pub link_gain: f64,
}

fn check_coherence(coherence: u32) -> Result<()> {
    if coherence < 2 {
        return Err(Error::invalid("coherence", format!("need T >= 2, got {coherence}")));
    }
    Ok(())
}

fn check_power(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::invalid(name, format!("must be finite and positive, got {v}")));
    }
    Ok(())
}

impl ChannelConfig {
    /// Builds a configuration from linear link variances. The interference
    /// level is `ln(inr) / ln(snr)`; equal variances give `alpha = 1` for any
    /// `snr`, including `snr <= 1`.
    pub fn from_linear(snr: f64, inr: f64, coherence: u32) -> Result<Self> {
        check_coherence(coherence)?;
        check_power("snr", snr)?;
        check_power("inr", inr)?;
        let alpha = if snr == inr {
            1.0
        } else if snr > 1.0 {
            inr.ln() / snr.ln()
        } else {
            return Err(Error::invalid(
                "snr",
                "interference level is undefined for snr <= 1 unless inr == snr",
            ));
        };
        Ok(ChannelConfig {
            snr,
            inr,
            alpha,
            coherence,
            link_gain: 1.0,
        })
    }

    /// Builds a configuration with `inr = snr^alpha`.
    pub fn from_snr_alpha(snr: f64, alpha: f64, coherence: u32) -> Result<Self> {
        check_coherence(coherence)?;
        check_power("snr", snr)?;
        check_alpha(alpha)?;
        let inr = if alpha == 1.0 {
            snr
        } else if alpha == 0.0 {
            1.0
        } else if snr > 1.0 {
            snr.powf(alpha)
        } else {
            return Err(Error::invalid(
                "snr",
                format!("snr must exceed 1 when alpha = {alpha} (got {snr})"),
            ));
        };
        check_power("inr", inr)?;
        Ok(ChannelConfig {
            snr,
            inr,
            alpha,
            coherence,
            link_gain: 1.0,
        })
    }

    /// Transmit SNR in dB scaled by `link_gain`, the convention of the
    /// finite-SNR rate table (all links with average strength 0.1).
    pub fn from_db(snr_db: f64, alpha: f64, coherence: u32, link_gain: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::invalid("snr_db", "must be finite"));
        }
        check_power("link_gain", link_gain)?;
        let snr = link_gain * 10f64.powf(snr_db / 10.0);
        let mut cfg = Self::from_snr_alpha(snr, alpha, coherence)?;
        cfg.link_gain = link_gain;
        Ok(cfg)
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.alpha)
    }

    pub fn mmse(&self) -> MmseModel {
        MmseModel::new(self)
    }
}

/// Same as [`ChannelConfig::from_db`].
pub fn config_from_db(
    snr_db: f64,
    alpha: f64,
    coherence: u32,
    link_gain: f64,
) -> Result<ChannelConfig> {
    ChannelConfig::from_db(snr_db, alpha, coherence, link_gain)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::invalid("alpha", format!("must be finite and >= 0, got {alpha}")));
    }
    Ok(())
}

/// Interference regime. Both boundary points belong to `Moderate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// `alpha < 1/2`
    Weak,
    /// `1/2 <= alpha <= 1`
    Moderate,
    /// `alpha > 1`
    Strong,
}

impl Regime {
    pub(crate) fn of(alpha: f64) -> Regime {
        if alpha < 0.5 {
            Regime::Weak
        } else if alpha <= 1.0 {
            Regime::Moderate
        } else {
            Regime::Strong
        }
    }
}

pub fn regime_of(alpha: f64) -> Result<Regime> {
    check_alpha(alpha)?;
    Ok(Regime::of(alpha))
}

/// Channel estimates after one pilot per link (two pilot symbols for the
/// interference channel) and the resulting effective noise levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmseModel {
    /// `v / (1 + v)` for the direct link, `v = snr`.
    pub est_gain_direct: f64,
    /// `v / (1 + v)` for the cross link, `v = inr`.
    pub est_gain_cross: f64,
    /// `E|ĝ11|² = snr² / (1 + snr)`.
    pub est_var_direct: f64,
    /// `E|ĝ21|² = inr² / (1 + inr)`.
    pub est_var_cross: f64,
    /// Noise plus estimation error of both incoming links.
    pub noise_rs: f64,
    /// Noise plus estimation error of the direct link only.
    pub noise_tdm: f64,
    /// Private-message power fraction `min(1/inr, 1)`.
    pub lambda_p: f64,
}

impl MmseModel {
    pub fn new(config: &ChannelConfig) -> Self {
        let gain = |v: f64| v / (1.0 + v);
        let g_d = gain(config.snr);
        let g_c = gain(config.inr);
        MmseModel {
            est_gain_direct: g_d,
            est_gain_cross: g_c,
            est_var_direct: config.snr * g_d,
            est_var_cross: config.inr * g_c,
            noise_rs: g_d + g_c + 1.0,
            noise_tdm: g_d + 1.0,
            lambda_p: (1.0 / config.inr).min(1.0),
        }
    }

    /// Variance of the estimation error `g - ĝ` for a link of variance `v`.
    pub fn residual_var(v: f64) -> f64 {
        v / (1.0 + v)
    }

    pub fn lambda_c(&self) -> f64 {
        1.0 - self.lambda_p
    }
}

pub fn mmse_model(config: &ChannelConfig) -> MmseModel {
    MmseModel::new(config)
}

/// Squared magnitudes of the four fading links in one coherence block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkDraw {
    pub g11_sq: f64,
    pub g21_sq: f64,
    pub g22_sq: f64,
    pub g12_sq: f64,
}

/// Splits `n` samples into fixed-size chunks, each with its own ChaCha
/// stream. Results depend on `(seed, n, chunk_size)` only, never on how many
/// threads process the chunks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkPolicy {
    pub chunk_size: usize,
}

impl Default for ChunkPolicy {
    fn default() -> Self {
        ChunkPolicy { chunk_size: 1 << 16 }
    }
}

impl ChunkPolicy {
    pub fn new(chunk_size: usize) -> Result<Self> {
        if chunk_size == 0 {
            return Err(Error::invalid("chunk_size", "must be positive"));
        }
        Ok(ChunkPolicy { chunk_size })
    }

    pub fn num_chunks(&self, n: usize) -> usize {
        n.div_ceil(self.chunk_size)
    }

    pub fn range(&self, n: usize, chunk: usize) -> Range<usize> {
        let start = chunk * self.chunk_size;
        start.min(n)..((chunk + 1) * self.chunk_size).min(n)
    }

    /// Generator for one chunk: the seed selects the key, the chunk index the
    /// stream.
    pub fn rng(&self, seed: u64, chunk: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        rng
    }
}

/// Deterministic source of [`LinkDraw`]s for one configuration.
#[derive(Debug, Clone)]
pub struct LinkSampler {
    snr: f64,
    inr: f64,
    seed: u64,
    n: usize,
    policy: ChunkPolicy,
}

impl LinkSampler {
    /// Sampler for arbitrary direct/cross variances, e.g. those of channel
    /// estimates rather than of the channel itself.
    pub fn with_variances(
        direct: f64,
        cross: f64,
        seed: u64,
        n: usize,
        policy: ChunkPolicy,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "need at least one draw"));
        }
        check_power("snr", direct)?;
        check_power("inr", cross)?;
        Ok(LinkSampler {
            snr: direct,
            inr: cross,
            seed,
            n,
            policy,
        })
    }

    pub fn policy(&self) -> ChunkPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn num_chunks(&self) -> usize {
        self.policy.num_chunks(self.n)
    }

    /// Draws of one chunk; chunks can be produced independently and in any
    /// order.
    pub fn chunk(&self, k: usize) -> impl Iterator<Item = LinkDraw> + '_ {
        let mut rng = self.policy.rng(self.seed, k);
        let (snr, inr) = (self.snr, self.inr);
        self.policy.range(self.n, k).map(move |_| {
            let mut e = || -> f64 { rng.sample(Exp1) };
            LinkDraw {
                g11_sq: snr * e(),
                g21_sq: inr * e(),
                g22_sq: snr * e(),
                g12_sq: inr * e(),
            }
        })
    }

    /// All draws in chunk order.
    pub fn iter(&self) -> impl Iterator<Item = LinkDraw> + '_ {
        (0..self.num_chunks()).flat_map(move |k| self.chunk(k))
    }
}

pub fn sample_links(config: &ChannelConfig, seed: u64, n: usize) -> Result<LinkSampler> {
    sample_links_with(config, seed, n, ChunkPolicy::default())
}

pub fn sample_links_with(
    config: &ChannelConfig,
    seed: u64,
    n: usize,
    policy: ChunkPolicy,
) -> Result<LinkSampler> {
    LinkSampler::with_variances(config.snr, config.inr, seed, n, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rayon::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn from_db_with_link_gain() {
        let c = config_from_db(16.0, 1.0, 5, 0.1).unwrap();
        assert!(close(c.snr, 3.981_071_705_534_973, 1e-12));
        assert_eq!(c.snr, c.inr);
        assert_eq!(c.link_gain, 0.1);

        let c = config_from_db(0.0, 1.0, 2, 1.0).unwrap();
        assert_eq!((c.snr, c.inr), (1.0, 1.0));

        let c = config_from_db(20.0, 1.0, 5, 0.1).unwrap();
        assert!(close(c.snr, 10.0, 1e-12));
        assert_eq!(c.inr, c.snr);
    }

    #[test]
    fn from_db_rejects_bad_input() {
        assert!(config_from_db(16.0, 1.0, 1, 0.1).is_err());
        assert!(config_from_db(16.0, 1.0, 5, 0.0).is_err());
        assert!(config_from_db(16.0, 1.0, 5, -1.0).is_err());
        // effective snr = 0.1 <= 1 with alpha not in {0, 1}
        assert!(config_from_db(0.0, 0.5, 5, 0.1).is_err());
        assert!(config_from_db(0.0, 0.0, 5, 0.1).is_ok());
        assert!(config_from_db(0.0, 1.0, 5, 0.1).is_ok());
    }

    #[test]
    fn from_snr_alpha_power_law() {
        let c = ChannelConfig::from_snr_alpha(2f64.powi(40), 0.6, 5).unwrap();
        assert!(close(c.inr.log2(), 24.0, 1e-9));
        assert!(ChannelConfig::from_snr_alpha(0.0, 1.0, 5).is_err());
        assert!(ChannelConfig::from_snr_alpha(f64::INFINITY, 1.0, 5).is_err());
    }

    #[test]
    fn from_linear_alpha() {
        let c = ChannelConfig::from_linear(2f64.powi(10), 2f64.powi(5), 3).unwrap();
        assert!(close(c.alpha, 0.5, 1e-12));
        assert!(ChannelConfig::from_linear(0.5, 0.25, 3).is_err());
        assert_eq!(ChannelConfig::from_linear(0.5, 0.5, 3).unwrap().alpha, 1.0);
    }

    #[test]
    fn regimes() {
        assert_eq!(regime_of(0.3).unwrap(), Regime::Weak);
        assert_eq!(regime_of(0.5).unwrap(), Regime::Moderate);
        assert_eq!(regime_of(1.0).unwrap(), Regime::Moderate);
        assert_eq!(regime_of(1.5).unwrap(), Regime::Strong);
        assert!(regime_of(-0.1).is_err());
        assert!(regime_of(f64::NAN).is_err());
    }

    #[test]
    fn regime_is_monotone() {
        let grid: Vec<f64> = (0..=300).map(|i| i as f64 * 0.01).collect();
        for w in grid.windows(2) {
            assert!(regime_of(w[0]).unwrap() <= regime_of(w[1]).unwrap());
        }
    }

    #[test]
    fn mmse_at_16db() {
        let c = config_from_db(16.0, 1.0, 5, 0.1).unwrap();
        let m = mmse_model(&c);
        // direct evaluation: v = 3.9810717, v/(1+v) = 0.7992400
        assert!(close(m.noise_rs, 2.598_480, 1e-6));
        assert!(close(m.noise_tdm, 1.799_240, 1e-6));
        assert!(close(m.est_var_direct, 3.181_832, 1e-6));
        assert!(close(m.est_var_cross, 3.181_832, 1e-6));
        assert!(close(m.lambda_p, 0.251_189, 1e-6));
        assert!(close(m.lambda_c(), 1.0 - 0.25119, 1e-5));
    }

    #[test]
    fn mmse_limits() {
        let hi = mmse_model(&ChannelConfig::from_linear(1e15, 1e15, 5).unwrap());
        assert!(close(hi.noise_rs, 3.0, 1e-12));
        assert!(close(hi.noise_tdm, 2.0, 1e-12));
        let lo = mmse_model(&ChannelConfig::from_linear(1e-15, 1e-15, 5).unwrap());
        assert!(close(lo.noise_rs, 1.0, 1e-12));
        assert!(lo.est_gain_direct < 1e-14);
        assert_eq!(lo.lambda_p, 1.0);
    }

    #[test]
    fn mmse_invariants() {
        for &(snr, inr) in &[(0.3, 0.1), (1.0, 4.0), (3.98, 3.98), (1e3, 10.0), (1e8, 1e12)] {
            let cfg = ChannelConfig {
                snr,
                inr,
                alpha: f64::NAN,
                coherence: 4,
                link_gain: 1.0,
            };
            let m = mmse_model(&cfg);
            assert!((1.0..=2.0).contains(&m.noise_tdm));
            assert!((1.0..=3.0).contains(&m.noise_rs));
            assert!(close(m.noise_rs - m.noise_tdm, inr / (1.0 + inr), 1e-12));
            assert!(close(m.est_var_direct + MmseModel::residual_var(snr), snr, 1e-9 * snr));
            assert!(close(m.est_var_cross + MmseModel::residual_var(inr), inr, 1e-9 * inr));
            assert!(m.lambda_p > 0.0 && m.lambda_p <= 1.0);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = config_from_db(16.0, 1.0, 5, 0.1).unwrap();
        let a: Vec<_> = sample_links(&c, 7, 1000).unwrap().iter().collect();
        let b: Vec<_> = sample_links(&c, 7, 1000).unwrap().iter().collect();
        assert_eq!(a, b);
        let other: Vec<_> = sample_links(&c, 8, 1000).unwrap().iter().collect();
        assert_ne!(a, other);
    }

    #[test]
    fn parallel_chunks_match_serial() {
        let c = ChannelConfig::from_linear(10.0, 3.0, 5).unwrap();
        let s = sample_links_with(&c, 3, 10_000, ChunkPolicy::new(1000).unwrap()).unwrap();
        let serial: Vec<_> = s.iter().collect();
        let parallel: Vec<_> = (0..s.num_chunks())
            .into_par_iter()
            .flat_map_iter(|k| s.chunk(k).collect::<Vec<_>>())
            .collect();
        assert_eq!(serial, parallel);
        assert_eq!(serial.len(), 10_000);
    }

    #[test]
    fn sampling_rejects_bad_input() {
        let c = ChannelConfig::from_linear(10.0, 3.0, 5).unwrap();
        assert!(sample_links(&c, 0, 0).is_err());
        let zero = ChannelConfig { snr: 0.0, ..c };
        assert!(sample_links(&zero, 0, 10).is_err());
        assert!(ChunkPolicy::new(0).is_err());
    }

    #[test]
    fn sample_moments_within_three_sigma() {
        let c = ChannelConfig::from_linear(3.981_071_705_534_973, 2.0, 5).unwrap();
        let n = 1_000_000;
        let s = sample_links(&c, 42, n).unwrap();
        let mut sums = [0.0f64; 4];
        let mut sq = [0.0f64; 4];
        for d in s.iter() {
            for (i, v) in [d.g11_sq, d.g21_sq, d.g22_sq, d.g12_sq].into_iter().enumerate() {
                sums[i] += v;
                sq[i] += v * v;
            }
        }
        let means = [c.snr, c.inr, c.snr, c.inr];
        for i in 0..4 {
            let m = sums[i] / n as f64;
            // exponential: sd = mean, fourth central moment = 9 mean⁴
            let sigma = means[i] / (n as f64).sqrt();
            assert!(close(m, means[i], 3.0 * sigma), "mean {i}: {m} vs {}", means[i]);
            let var = sq[i] / n as f64 - m * m;
            let var_sigma = 8f64.sqrt() * means[i].powi(2) / (n as f64).sqrt();
            assert!(close(var, means[i].powi(2), 3.0 * var_sigma), "var {i}");
        }
    }
}

//! Self-check suite behind `ncic validate`.
//!
//! Each check reports the worst observed deviation and the tolerance it is
//! held to. The region constructor is a parameter so a deliberately
//! corrupted table can be checked for detection.

use std::fmt;

use crate::channel::{config_from_db, ChannelConfig};
use crate::error::Result;
use crate::finite_snr::{
    expected_log_closed, expected_log_mc, fact1_bracket, finite_snr_region_rs, rate_tdm,
    rate_training_rs, ExpectedLogSpec, DEFAULT_SAMPLES,
};
use crate::polytope::{hausdorff_distance, project, regions_equal, Region2D, DEFAULT_TOL};
use crate::schemes::{
    postfm_region, prefm_system, prelog_expected, prelog_numeric, SchemeId, TermBounds, TermId,
};
use crate::special::exp_integral_e1;

/// Region constructor under test.
pub type RegionFn = fn(SchemeId, f64, u32) -> Result<Region2D>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Everything except the million-sample Monte-Carlo runs.
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn within(name: &str, value: f64, tolerance: f64) -> Check {
        Check {
            name: name.to_string(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    /// A check whose value counts violations; passes when there are none.
    fn count(name: &str, violations: usize) -> Check {
        Check {
            name: name.to_string(),
            value: violations as f64,
            tolerance: 0.0,
            passed: violations == 0,
        }
    }

    fn failed(name: &str) -> Check {
        Check {
            name: name.to_string(),
            value: f64::NAN,
            tolerance: 0.0,
            passed: false,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} {:.6e} {:.1e}", self.name, self.value, self.tolerance)
    }
}

fn sym(region_fn: RegionFn, s: SchemeId, a: f64, t: u32) -> Result<f64> {
    Ok(region_fn(s, a, t)?.symmetric_max()?.value)
}

/// Evaluates `f`, turning an error into a failed check.
fn guard(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|_| Check::failed(name))
}

fn alpha_grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(move |k| lo + k as f64 * step)
}

fn spot_values(region_fn: RegionFn) -> Vec<Check> {
    let rs = guard("spot.rs_alpha1", || {
        let mut worst = 0.0f64;
        for t in 3..=8 {
            let want = 0.5 * (1.0 - 2.0 / f64::from(t));
            worst = worst.max((sym(region_fn, SchemeId::RsNoFb, 1.0, t)? - want).abs());
        }
        Ok(Check::within("spot.rs_alpha1", worst, 1e-12))
    });
    let tdm = guard("spot.tdm", || {
        let mut worst = 0.0f64;
        for t in 3..=8 {
            let want = 0.5 * (1.0 - 1.0 / f64::from(t));
            for a in [0.0, 0.3, 0.7, 1.0, 1.6] {
                worst = worst.max((sym(region_fn, SchemeId::Tdm, a, t)? - want).abs());
            }
        }
        Ok(Check::within("spot.tdm", worst, 1e-12))
    });
    vec![rs, tdm]
}

fn continuity(region_fn: RegionFn) -> Vec<Check> {
    const EPS: f64 = 1e-11;
    [SchemeId::RsNoFb, SchemeId::RsFb]
        .into_iter()
        .map(|s| {
            let name = format!("continuity.{s}");
            guard(&name, || {
                let mut worst = 0.0f64;
                for t in 2..=12 {
                    for b in [0.5, 1.0] {
                        let l = sym(region_fn, s, b - EPS, t)?;
                        let r = sym(region_fn, s, b + EPS, t)?;
                        let m = sym(region_fn, s, b, t)?;
                        worst = worst.max((l - r).abs()).max((l - m).abs()).max((m - r).abs());
                    }
                }
                Ok(Check::within(&name, worst, 1e-9))
            })
        })
        .collect()
}

fn dominance(region_fn: RegionFn) -> Vec<Check> {
    let s = |id, a, t| sym(region_fn, id, a, t);
    let tol = 1e-12;
    let weak = || alpha_grid(0.01, 0.49, 0.01);
    let interior = || alpha_grid(0.01, 0.99, 0.01);
    let mut out = Vec::new();

    out.push(guard("dominance.tin_weak", || {
        let mut bad = 0;
        for t in 2..=12 {
            for a in weak() {
                let tin = s(SchemeId::Tin, a, t)?;
                if tin < s(SchemeId::RsNoFb, a, t)? - tol || tin < s(SchemeId::TrainNoFb, a, t)? - tol {
                    bad += 1;
                }
            }
        }
        Ok(Check::count("dominance.tin_weak", bad))
    }));
    out.push(guard("dominance.tdm_low_coherence", || {
        let mut bad = 0;
        for a in alpha_grid(0.5, 1.5, 0.01) {
            if s(SchemeId::Tdm, a, 4)? < s(SchemeId::RsNoFb, a, 4)? - tol {
                bad += 1;
            }
        }
        Ok(Check::count("dominance.tdm_low_coherence", bad))
    }));
    out.push(guard("dominance.rs_over_tdm", || {
        let gap = s(SchemeId::RsNoFb, 2.0 / 3.0, 6)? - s(SchemeId::Tdm, 2.0 / 3.0, 6)?;
        Ok(Check::count("dominance.rs_over_tdm", usize::from(gap <= 0.0)))
    }));
    out.push(guard("dominance.fb_over_tin", || {
        let mut bad = 0;
        for t in 3..=12 {
            for a in interior() {
                if s(SchemeId::RsFb, a, t)? < s(SchemeId::Tin, a, t)? - tol {
                    bad += 1;
                }
            }
        }
        Ok(Check::count("dominance.fb_over_tin", bad))
    }));
    out.push(guard("dominance.tin_over_fb_t2", || {
        let mut bad = 0;
        for a in interior() {
            if s(SchemeId::Tin, a, 2)? < s(SchemeId::RsFb, a, 2)? - tol {
                bad += 1;
            }
        }
        Ok(Check::count("dominance.tin_over_fb_t2", bad))
    }));
    out.push(guard("dominance.feedback_helps", || {
        let mut bad = 0;
        for t in 2..=12 {
            for a in alpha_grid(0.0, 2.0, 0.01) {
                if s(SchemeId::RsFb, a, t)? < s(SchemeId::RsNoFb, a, t)? - tol {
                    bad += 1;
                }
            }
        }
        Ok(Check::count("dominance.feedback_helps", bad))
    }));
    out
}

/// Alpha, coherence and SNR exponent (base 2) points for the projection check.
pub fn fm_grid() -> Vec<(f64, u32, f64)> {
    let mut g = Vec::new();
    for a in [0.3, 0.6, 0.75, 1.2] {
        for t in [3, 5, 8] {
            for e in [20.0, 40.0] {
                g.push((a, t, e));
            }
        }
    }
    g
}

fn fm_oracle() -> Vec<Check> {
    [false, true]
        .into_iter()
        .map(|fb| {
            let name = if fb { "fm.feedback" } else { "fm.no_feedback" };
            guard(name, || {
                let mut worst = 0.0f64;
                let mut bad = 0;
                for (a, t, e) in fm_grid() {
                    let snr = 2f64.powf(e);
                    let b = TermBounds::from_channel(snr, snr.powf(a), t)?;
                    let post = postfm_region(&b, fb, t)?;
                    let proj = project(&prefm_system(&b, fb, t)?, ["R1", "R2"])?;
                    if !regions_equal(&post, &proj, DEFAULT_TOL) {
                        bad += 1;
                        worst = worst.max(hausdorff_distance(&post, &proj)?);
                    }
                }
                Ok(Check {
                    name: name.to_string(),
                    value: worst,
                    tolerance: DEFAULT_TOL,
                    passed: bad == 0,
                })
            })
        })
        .collect()
}

fn prelogs() -> Check {
    guard("prelog.slopes", || {
        let mut worst = 0.0f64;
        for term in TermId::ALL {
            for a in [0.2, 0.6, 0.75, 1.2] {
                for t in [3, 5, 8] {
                    let n = prelog_numeric(term, a, t, &[8.0, 10.0, 12.0])?;
                    worst = worst.max((n - prelog_expected(term, a, t)?).abs());
                }
            }
        }
        Ok(Check::within("prelog.slopes", worst, 0.02))
    })
}

/// `E1(x) = ∫₀^∞ exp(−x·eˢ) ds` (substituting `t = x·eˢ`), by composite
/// Simpson on `[0, ln(700/x)]` where the integrand falls below 1e-300.
fn e1_quadrature(x: f64) -> f64 {
    let upper = (700.0 / x).ln().max(1.0);
    let n = 40_000;
    let h = upper / n as f64;
    let f = |s: f64| (-x * s.exp()).exp();
    let mut sum = f(0.0) + f(upper);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(k as f64 * h);
    }
    sum * h / 3.0
}

fn special_functions() -> Vec<Check> {
    let e1 = guard("special.e1_quadrature", || {
        let mut worst = 0.0f64;
        for k in 0..=40 {
            let x = 1e-4 * (50.0f64 / 1e-4).powf(k as f64 / 40.0);
            let q = e1_quadrature(x);
            worst = worst.max(((exp_integral_e1(x)? - q) / q).abs());
        }
        Ok(Check::within("special.e1_quadrature", worst, 1e-10))
    });
    let bracket = guard("special.fact1_bracket", || {
        let mut bad = 0;
        for k in 0..200 {
            let a = if k % 10 == 0 { 0.0 } else { 0.01 * f64::from(k) };
            let b = 0.5 + 0.07 * f64::from(k % 13);
            let m = 10f64.powf(-2.0 + 0.03 * f64::from(k));
            let v = expected_log_closed(a, b, m)?;
            let (lo, hi) = fact1_bracket(a, b, m)?;
            if v < lo - 1e-12 || v > hi + 1e-12 {
                bad += 1;
            }
        }
        Ok(Check::count("special.fact1_bracket", bad))
    });
    vec![e1, bracket]
}

fn convergence() -> Vec<Check> {
    [(40.0, 0.05), (60.0, 0.02)]
        .into_iter()
        .flat_map(|(e, tol)| {
            [(false, SchemeId::RsNoFb), (true, SchemeId::RsFb)].map(move |(fb, id)| {
                let name = format!("convergence.{id}.snr_2^{e}");
                guard(&name, || {
                    let mut worst = 0.0f64;
                    for a in [0.3, 0.6, 0.75, 1.2] {
                        let snr = 2f64.powf(e);
                        let c = ChannelConfig::from_snr_alpha(snr, a, 5)?;
                        let r = finite_snr_region_rs(&c, fb)?.scaled(1.0 / e);
                        let g = crate::schemes::region(id, a, 5)?;
                        worst = worst.max(hausdorff_distance(&r, &g)?);
                    }
                    Ok(Check::within(&name, worst, tol))
                })
            })
        })
        .collect()
}

/// Published rate table at T = 5, α = 1 and link gain 0.1, for 16..=20 dB:
/// `(snr_db, tdm, training)`.
pub const RATE_TABLE: [(f64, f64, f64); 5] = [
    (16.0, 0.50, 0.47),
    (17.0, 0.57, 0.54),
    (18.0, 0.66, 0.61),
    (19.0, 0.75, 0.69),
    (20.0, 0.84, 0.77),
];

fn monte_carlo(seed: u64) -> Vec<Check> {
    let rates = guard("rates.table", || {
        let mut worst = 0.0f64;
        for (db, tdm, train) in RATE_TABLE {
            let c = config_from_db(db, 1.0, 5, 0.1)?;
            worst = worst.max((rate_tdm(&c, DEFAULT_SAMPLES, seed)?.value - tdm).abs());
            worst = worst.max((rate_training_rs(&c, DEFAULT_SAMPLES, seed)?.value - train).abs());
        }
        Ok(Check::within("rates.table", worst, 0.02))
    });
    let mc = guard("special.mc_vs_closed", || {
        let mut worst = 0.0f64;
        for (a, b, m) in [(1.0, 1.0, 1.0), (2.5985, 0.25119, 3.18176), (0.1, 2.0, 5.0)] {
            let spec = ExpectedLogSpec::single(a, b, m)?;
            let est = expected_log_mc(&spec, DEFAULT_SAMPLES, seed)?;
            let z = (est.value - expected_log_closed(a, b, m)?).abs() / est.stderr;
            worst = worst.max(z);
        }
        Ok(Check::within("special.mc_vs_closed", worst, 3.0))
    });
    vec![rates, mc]
}

pub fn run(level: Level, seed: u64) -> Vec<Check> {
    run_with(level, seed, crate::schemes::region)
}

pub fn run_with(level: Level, seed: u64, region_fn: RegionFn) -> Vec<Check> {
    let mut out = spot_values(region_fn);
    out.extend(continuity(region_fn));
    out.extend(dominance(region_fn));
    out.extend(fm_oracle());
    out.push(prelogs());
    out.extend(special_functions());
    out.extend(convergence());
    if level == Level::Full {
        out.extend(monte_carlo(seed));
    }
    out
}

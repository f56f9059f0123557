//! gDoF regions of the six transmission schemes, closed-form lower bounds on
//! the mutual-information terms of the rate-splitting region, their prelogs,
//! and the rate-splitting inequality systems before and after eliminating the
//! common/private split.
//!
//! Regions are per symbol. Term bounds are in bits per coherence block; the
//! systems built from them divide by `T`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::channel::check_alpha;
use crate::error::{Error, Result};
use crate::polytope::{IneqSystem, Region2D};
use crate::Regime;

/// Transmission schemes with a closed-form gDoF region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeId {
    /// Noncoherent rate splitting without feedback.
    RsNoFb,
    /// Noncoherent rate splitting with output feedback.
    RsFb,
    /// Treating interference as noise.
    Tin,
    /// Time division, each user active half the time.
    Tdm,
    /// Two pilot symbols per block, then coherent rate splitting.
    TrainNoFb,
    /// Training-based scheme with feedback.
    TrainFb,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::RsNoFb,
        SchemeId::RsFb,
        SchemeId::Tin,
        SchemeId::Tdm,
        SchemeId::TrainNoFb,
        SchemeId::TrainFb,
    ];

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::RsNoFb => "rs",
            SchemeId::RsFb => "rs-fb",
            SchemeId::Tin => "tin",
            SchemeId::Tdm => "tdm",
            SchemeId::TrainNoFb => "train",
            SchemeId::TrainFb => "train-fb",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                Error::invalid(
                    "scheme",
                    format!("unknown scheme `{s}` (expected rs, rs-fb, tin, tdm, train, train-fb)"),
                )
            })
    }
}

fn check_coherence(t: u32) -> Result<()> {
    if t < 2 {
        return Err(Error::invalid("coherence", format!("need T >= 2, got {t}")));
    }
    Ok(())
}

/// gDoF region of `scheme` at interference level `alpha` and coherence `t`.
/// Right-hand sides that would be negative are clamped to zero.
pub fn region(scheme: SchemeId, alpha: f64, t: u32) -> Result<Region2D> {
    check_alpha(alpha)?;
    check_coherence(t)?;
    let tf = f64::from(t);
    let a = alpha;
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    let ind = |rows: &mut Vec<_>, c: f64| {
        rows.push((1.0, 0.0, c));
        rows.push((0.0, 1.0, c));
    };
    match scheme {
        SchemeId::RsNoFb => match Regime::of(a) {
            Regime::Weak => {
                ind(&mut rows, (1.0 - 1.0 / tf) - a / tf);
                rows.push((1.0, 1.0, 2.0 * (1.0 - 1.0 / tf) - 2.0 * a));
            }
            Regime::Moderate => {
                rows.push((1.0, 1.0, (2.0 - 3.0 / tf) - a * (1.0 - 1.0 / tf)));
                rows.push((1.0, 1.0, 2.0 * (1.0 - 2.0 / tf) * a));
                let c = (2.0 - 3.0 / tf) - a / tf;
                rows.push((2.0, 1.0, c));
                rows.push((1.0, 2.0, c));
            }
            Regime::Strong => {
                ind(&mut rows, 1.0 - 2.0 / tf);
                rows.push((1.0, 1.0, (1.0 - 1.0 / tf) * a - 1.0 / tf));
            }
        },
        SchemeId::RsFb => match Regime::of(a) {
            Regime::Weak => {
                ind(&mut rows, (1.0 - 1.0 / tf) - 2.0 * a / tf);
                rows.push((1.0, 1.0, 2.0 * (1.0 - 1.0 / tf) - a * (1.0 + 1.0 / tf)));
            }
            Regime::Moderate => {
                ind(&mut rows, 1.0 - 2.0 / tf);
                rows.push((1.0, 1.0, (2.0 - 3.0 / tf) - a * (1.0 - 1.0 / tf)));
            }
            Regime::Strong => {
                rows.push((1.0, 1.0, (1.0 - 1.0 / tf) * a - 1.0 / tf));
            }
        },
        SchemeId::Tin => ind(&mut rows, (1.0 - 1.0 / tf) * (1.0 - a)),
        SchemeId::Tdm => ind(&mut rows, 0.5 * (1.0 - 1.0 / tf)),
        SchemeId::TrainNoFb => {
            let f = 1.0 - 2.0 / tf;
            let hi = a.max(1.0);
            let lo = (1.0 - a).max(0.0);
            let mid = (1.0 - a).max(a);
            ind(&mut rows, f);
            rows.push((1.0, 1.0, f * (hi + lo)));
            rows.push((1.0, 1.0, 2.0 * f * mid));
            rows.push((2.0, 1.0, f * (hi + mid + lo)));
            rows.push((1.0, 2.0, f * (hi + mid + lo)));
        }
        SchemeId::TrainFb => {
            let f = 1.0 - 2.0 / tf;
            let hi = a.max(1.0);
            ind(&mut rows, f * hi);
            rows.push((1.0, 1.0, f * (hi + (1.0 - a).max(0.0))));
        }
    }
    let mut r = Region2D::new(scheme.name());
    for (a, b, c) in rows {
        r.push(a, b, c.max(0.0))?;
    }
    Ok(r)
}

/// Symmetric gDoF: the largest `d` with `(d, d)` achievable.
pub fn sym_gdof(scheme: SchemeId, alpha: f64, t: u32) -> Result<f64> {
    Ok(region(scheme, alpha, t)?.symmetric_max()?.value)
}

/// Mutual-information terms of the rate-splitting region. `U` is the common
/// and `X` the full codeword of each user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermId {
    /// I(X1,U2;Y1|U1)
    X1U2Y1GivenU1,
    /// I(X2,U1;Y2|U2)
    X2U1Y2GivenU2,
    /// I(X1;Y1|U1,U2)
    X1Y1GivenU1U2,
    /// I(X2;Y2|U1,U2)
    X2Y2GivenU1U2,
    /// I(X2,U1;Y2)
    X2U1Y2,
    /// I(X1,U2;Y1)
    X1U2Y1,
    /// I(X1;Y1|U2)
    X1Y1GivenU2,
    /// I(X2;Y2|U1)
    X2Y2GivenU1,
    /// I(U2;Y1|X1)
    U2Y1GivenX1,
    /// I(U1;Y2|X2)
    U1Y2GivenX2,
}

impl TermId {
    pub const ALL: [TermId; 10] = [
        TermId::X1U2Y1GivenU1,
        TermId::X2U1Y2GivenU2,
        TermId::X1Y1GivenU1U2,
        TermId::X2Y2GivenU1U2,
        TermId::X2U1Y2,
        TermId::X1U2Y1,
        TermId::X1Y1GivenU2,
        TermId::X2Y2GivenU1,
        TermId::U2Y1GivenX1,
        TermId::U1Y2GivenX2,
    ];

    /// The same term with the users swapped.
    pub fn mirror(self) -> TermId {
        use TermId::*;
        match self {
            X1U2Y1GivenU1 => X2U1Y2GivenU2,
            X2U1Y2GivenU2 => X1U2Y1GivenU1,
            X1Y1GivenU1U2 => X2Y2GivenU1U2,
            X2Y2GivenU1U2 => X1Y1GivenU1U2,
            X2U1Y2 => X1U2Y1,
            X1U2Y1 => X2U1Y2,
            X1Y1GivenU2 => X2Y2GivenU1,
            X2Y2GivenU1 => X1Y1GivenU2,
            U2Y1GivenX1 => U1Y2GivenX2,
            U1Y2GivenX2 => U2Y1GivenX1,
        }
    }

    /// Compact identifier, e.g. `IX1U2_Y1_gU1`.
    pub fn name(self) -> &'static str {
        use TermId::*;
        match self {
            X1U2Y1GivenU1 => "IX1U2_Y1_gU1",
            X2U1Y2GivenU2 => "IX2U1_Y2_gU2",
            X1Y1GivenU1U2 => "IX1_Y1_gU1U2",
            X2Y2GivenU1U2 => "IX2_Y2_gU1U2",
            X2U1Y2 => "IX2U1_Y2",
            X1U2Y1 => "IX1U2_Y1",
            X1Y1GivenU2 => "IX1_Y1_gU2",
            X2Y2GivenU1 => "IX2_Y2_gU1",
            U2Y1GivenX1 => "IU2_Y1_gX1",
            U1Y2GivenX2 => "IU1_Y2_gX2",
        }
    }

    /// Information-theoretic notation, e.g. `I(X1,U2;Y1|U1)`.
    pub fn notation(self) -> &'static str {
        use TermId::*;
        match self {
            X1U2Y1GivenU1 => "I(X1,U2;Y1|U1)",
            X2U1Y2GivenU2 => "I(X2,U1;Y2|U2)",
            X1Y1GivenU1U2 => "I(X1;Y1|U1,U2)",
            X2Y2GivenU1U2 => "I(X2;Y2|U1,U2)",
            X2U1Y2 => "I(X2,U1;Y2)",
            X1U2Y1 => "I(X1,U2;Y1)",
            X1Y1GivenU2 => "I(X1;Y1|U2)",
            X2Y2GivenU1 => "I(X2;Y2|U1)",
            U2Y1GivenX1 => "I(U2;Y1|X1)",
            U1Y2GivenX2 => "I(U1;Y2|X2)",
        }
    }

    /// The user-1 representative of this term's mirror pair.
    fn canonical(self) -> TermId {
        use TermId::*;
        match self {
            X2U1Y2GivenU2 | X2Y2GivenU1U2 | X1U2Y1 | X2Y2GivenU1 | U1Y2GivenX2 => self.mirror(),
            _ => self,
        }
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TermId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TermId::ALL
            .into_iter()
            .find(|t| t.name() == s || t.notation() == s)
            .ok_or_else(|| Error::invalid("term", format!("unknown term `{s}`")))
    }
}

fn check_link(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::invalid(name, format!("must be finite and positive, got {v}")));
    }
    Ok(())
}

/// Closed-form lower bound on `term` in bits per block of `t` symbols.
pub fn term_bound(term: TermId, snr: f64, inr: f64, t: u32) -> Result<f64> {
    check_link("snr", snr)?;
    check_link("inr", inr)?;
    check_coherence(t)?;
    let tf = f64::from(t);
    let (s, i) = (snr, inr);
    let log_m = s.min(i).log2();
    use TermId::*;
    Ok(match term.canonical() {
        X1U2Y1GivenU1 => (tf - 1.0) * (s / i + i).log2() - log_m,
        X1Y1GivenU1U2 => (s / i + s.min(i)).log2() + (tf - 2.0) * (1.0 + s / i).log2() - log_m,
        X2U1Y2 => (tf - 1.0) * (s + i).log2() - log_m,
        X1Y1GivenU2 => (tf - 1.0) * s.log2() - log_m,
        U2Y1GivenX1 => (tf - 1.0) * i.log2() - log_m,
        _ => unreachable!("canonical() returns a user-1 term"),
    })
}

/// Prelog of [`term_bound`] as `snr → ∞` with `inr = snr^alpha`. At the
/// regime boundaries the neighbouring cells agree.
pub fn prelog_expected(term: TermId, alpha: f64, t: u32) -> Result<f64> {
    check_alpha(alpha)?;
    check_coherence(t)?;
    let tf = f64::from(t);
    let a = alpha;
    // columns: alpha <= 1/2, 1/2 < alpha <= 1, alpha > 1
    let col = if a <= 0.5 {
        0
    } else if a <= 1.0 {
        1
    } else {
        2
    };
    use TermId::*;
    let cells = match term.canonical() {
        X1U2Y1GivenU1 => [(tf - 1.0) * (1.0 - a) - a, (tf - 2.0) * a, (tf - 1.0) * a - 1.0],
        X1Y1GivenU1U2 => [(tf - 1.0) * (1.0 - a) - a, (tf - 2.0) * (1.0 - a), 0.0],
        X2U1Y2 => [(tf - 1.0) - a, (tf - 1.0) - a, (tf - 1.0) * a - 1.0],
        X1Y1GivenU2 => [(tf - 1.0) - a, (tf - 1.0) - a, tf - 2.0],
        U2Y1GivenX1 => [(tf - 2.0) * a, (tf - 2.0) * a, (tf - 1.0) * a - 1.0],
        _ => unreachable!("canonical() returns a user-1 term"),
    };
    Ok(cells[col])
}

/// Least-squares slope of `term_bound(term, 10^e, 10^(alpha·e), t)` against
/// `log2(snr) = e·log2(10)` over the given exponents.
pub fn prelog_numeric(term: TermId, alpha: f64, t: u32, exponents: &[f64]) -> Result<f64> {
    check_alpha(alpha)?;
    if exponents.len() < 2 {
        return Err(Error::invalid("exponents", "need at least two exponents"));
    }
    if exponents.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("exponents", "must be strictly increasing"));
    }
    let mut pts = Vec::with_capacity(exponents.len());
    for &e in exponents {
        let snr = 10f64.powf(e);
        let inr = 10f64.powf(alpha * e);
        pts.push((e * 10f64.log2(), term_bound(term, snr, inr, t)?));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Values of the mutual-information terms, in bits per block.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TermBounds {
    values: BTreeMap<TermId, f64>,
}

impl TermBounds {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every term set to the same value.
    pub fn uniform(v: f64) -> Self {
        TermBounds {
            values: TermId::ALL.into_iter().map(|t| (t, v)).collect(),
        }
    }

    /// All ten closed-form bounds for one channel.
    pub fn from_channel(snr: f64, inr: f64, t: u32) -> Result<Self> {
        let mut values = BTreeMap::new();
        for term in TermId::ALL {
            values.insert(term, term_bound(term, snr, inr, t)?);
        }
        Ok(TermBounds { values })
    }

    pub fn set(&mut self, term: TermId, bits: f64) -> &mut Self {
        self.values.insert(term, bits);
        self
    }

    pub fn get(&self, term: TermId) -> Result<f64> {
        self.values
            .get(&term)
            .copied()
            .ok_or(Error::MissingTerm(term.name()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }
}

/// Variables of the rate-splitting systems, in column order.
pub const SPLIT_VARS: [&str; 6] = ["Rc1", "Rp1", "Rc2", "Rp2", "R1", "R2"];

/// Rate-splitting constraints on common and private rates, per symbol, with
/// `R1 = Rc1 + Rp1`, `R2 = Rc2 + Rp2` and nonnegative split rates.
pub fn prefm_system(bounds: &TermBounds, feedback: bool, t: u32) -> Result<IneqSystem> {
    check_coherence(t)?;
    let tf = f64::from(t);
    let g = |term: TermId| bounds.get(term).map(|v| v / tf);
    use TermId::*;
    let mut s = IneqSystem::new(&SPLIT_VARS)?;
    if feedback {
        s.push(&[("Rc2", 1.0)], g(U2Y1GivenX1)?)?;
        s.push(&[("Rp1", 1.0)], g(X1Y1GivenU1U2)?)?;
        s.push(&[("Rc1", 1.0), ("Rc2", 1.0), ("Rp1", 1.0)], g(X1U2Y1)?)?;
        s.push(&[("Rc1", 1.0)], g(U1Y2GivenX2)?)?;
        s.push(&[("Rp2", 1.0)], g(X2Y2GivenU1U2)?)?;
        s.push(&[("Rc1", 1.0), ("Rc2", 1.0), ("Rp2", 1.0)], g(X2U1Y2)?)?;
    } else {
        s.push(&[("Rc1", 1.0), ("Rc2", 1.0), ("Rp1", 1.0)], g(X1U2Y1)?)?;
        s.push(&[("Rc1", 1.0), ("Rp1", 1.0)], g(X1Y1GivenU2)?)?;
        s.push(&[("Rp1", 1.0)], g(X1Y1GivenU1U2)?)?;
        s.push(&[("Rc2", 1.0), ("Rp1", 1.0)], g(X1U2Y1GivenU1)?)?;
        s.push(&[("Rc2", 1.0), ("Rc1", 1.0), ("Rp2", 1.0)], g(X2U1Y2)?)?;
        s.push(&[("Rc2", 1.0), ("Rp2", 1.0)], g(X2Y2GivenU1)?)?;
        s.push(&[("Rp2", 1.0)], g(X2Y2GivenU1U2)?)?;
        s.push(&[("Rc1", 1.0), ("Rp2", 1.0)], g(X2U1Y2GivenU2)?)?;
    }
    s.push_eq(&[("R1", 1.0), ("Rc1", -1.0), ("Rp1", -1.0)], 0.0)?;
    s.push_eq(&[("R2", 1.0), ("Rc2", -1.0), ("Rp2", -1.0)], 0.0)?;
    for v in ["Rc1", "Rp1", "Rc2", "Rp2"] {
        s.set_nonneg(v)?;
    }
    Ok(s)
}

/// Rate region in `(R1, R2)` after eliminating the split, per symbol.
pub fn postfm_region(bounds: &TermBounds, feedback: bool, t: u32) -> Result<Region2D> {
    check_coherence(t)?;
    let tf = f64::from(t);
    let g = |term: TermId| bounds.get(term).map(|v| v / tf);
    use TermId::*;
    let label = if feedback { "rs-fb rates" } else { "rs rates" };
    let mut r = Region2D::new(label);
    if feedback {
        r.push(1.0, 0.0, g(X1U2Y1)?)?;
        r.push(1.0, 0.0, g(U1Y2GivenX2)? + g(X1Y1GivenU1U2)?)?;
        r.push(0.0, 1.0, g(X2U1Y2)?)?;
        r.push(0.0, 1.0, g(U2Y1GivenX1)? + g(X2Y2GivenU1U2)?)?;
        r.push(1.0, 1.0, g(X1Y1GivenU1U2)? + g(X2U1Y2)?)?;
        r.push(1.0, 1.0, g(X2Y2GivenU1U2)? + g(X1U2Y1)?)?;
    } else {
        r.push(1.0, 0.0, g(X1Y1GivenU2)?)?;
        r.push(0.0, 1.0, g(X2Y2GivenU1)?)?;
        r.push(1.0, 1.0, g(X2U1Y2)? + g(X1Y1GivenU1U2)?)?;
        r.push(1.0, 1.0, g(X1U2Y1)? + g(X2Y2GivenU1U2)?)?;
        r.push(1.0, 1.0, g(X1U2Y1GivenU1)? + g(X2U1Y2GivenU2)?)?;
        r.push(2.0, 1.0, g(X1U2Y1)? + g(X1Y1GivenU1U2)? + g(X2U1Y2GivenU2)?)?;
        r.push(1.0, 2.0, g(X2U1Y2)? + g(X2Y2GivenU1U2)? + g(X1U2Y1GivenU1)?)?;
    }
    Ok(r)
}

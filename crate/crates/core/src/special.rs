//! Exponential integral `E1(x) = ∫ₓ^∞ e^(−t)/t dt` for `x > 0`.
//!
//! Power series on `(0, 1]`, modified Lentz continued fraction above.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 500;

fn check(x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid("x", format!("E1 needs finite x > 0, got {x}")));
    }
    Ok(())
}

fn series(x: f64) -> f64 {
    // E1(x) = −γ − ln x − Σ_{k≥1} (−x)^k / (k·k!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= -x / kf;
        let add = term / kf;
        sum += add;
        if add.abs() < EPS * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// `e^x · E1(x)` by continued fraction, for `x > 1`.
fn continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= 1.0 {
        series(x)
    } else {
        continued_fraction(x) * (-x).exp()
    })
}

/// `e^x · E1(x)`, finite for all `x > 0` (tends to `1/x` as `x → ∞`).
pub fn exp_e1_scaled(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= 1.0 {
        x.exp() * series(x)
    } else {
        continued_fraction(x)
    })
}

//! Test-side oracles, written independently of the library code paths.

#![allow(dead_code)]

use std::f64::consts::LN_2;

/// Adaptive Simpson on `[a, b]` to absolute tolerance `eps`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    rec(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), eps, 50)
}

/// `E1(x) = ∫₀^∞ exp(−x·eˢ) ds`, integrated up to where the integrand
/// underflows.
pub fn e1_oracle(x: f64) -> f64 {
    let upper = (745.0 / x).ln().max(1.0);
    // scale the absolute tolerance to the size of the answer
    let rough = adaptive_simpson(&|s| (-x * s.exp()).exp(), 0.0, upper, 1e-6);
    adaptive_simpson(&|s| (-x * s.exp()).exp(), 0.0, upper, rough * 1e-14)
}

/// `E[log2(a + bμ·ξ)]` with `ξ ~ Exp(1)`, by direct integration of
/// `log2(a + bμ·u)·e^(−u)` after the substitution `u = −ln v`.
pub fn expected_log_oracle(a: f64, bm: f64) -> f64 {
    // split at u = 1 to resolve the log singularity at a = 0
    let g = |u: f64| (a + bm * u).ln() * (-u).exp();
    let near = adaptive_simpson(&|w: f64| 2.0 * w * g(w * w), 1e-300, 1.0, 1e-15);
    let far = adaptive_simpson(&|u| g(u), 1.0, 60.0, 1e-15);
    (near + far) / LN_2
}

pub const GAMMA: f64 = 0.577_215_664_901_532_9;

/// Symmetric gDoF from hand-simplified per-regime expressions.
pub mod sym {
    fn tf(t: u32) -> f64 {
        f64::from(t)
    }

    pub fn rs(a: f64, t: u32) -> f64 {
        let t = tf(t);
        let v = if a < 0.5 {
            ((1.0 - 1.0 / t) - a / t).min((1.0 - 1.0 / t) - a)
        } else if a <= 1.0 {
            ((2.0 - 3.0 / t - a * (1.0 - 1.0 / t)) / 2.0)
                .min((1.0 - 2.0 / t) * a)
                .min((2.0 - 3.0 / t - a / t) / 3.0)
        } else {
            (1.0 - 2.0 / t).min(((1.0 - 1.0 / t) * a - 1.0 / t) / 2.0)
        };
        v.max(0.0)
    }

    pub fn rs_fb(a: f64, t: u32) -> f64 {
        let t = tf(t);
        let v = if a < 0.5 {
            ((1.0 - 1.0 / t) - 2.0 * a / t).min((1.0 - 1.0 / t) - a * (1.0 + 1.0 / t) / 2.0)
        } else if a <= 1.0 {
            (1.0 - 2.0 / t).min((2.0 - 3.0 / t - a * (1.0 - 1.0 / t)) / 2.0)
        } else {
            ((1.0 - 1.0 / t) * a - 1.0 / t) / 2.0
        };
        v.max(0.0)
    }

    pub fn tin(a: f64, t: u32) -> f64 {
        ((1.0 - 1.0 / tf(t)) * (1.0 - a)).max(0.0)
    }

    pub fn tdm(t: u32) -> f64 {
        0.5 * (1.0 - 1.0 / tf(t))
    }

    pub fn train(a: f64, t: u32) -> f64 {
        let f = 1.0 - 2.0 / tf(t);
        let (hi, lo, mid) = (a.max(1.0), (1.0 - a).max(0.0), (1.0 - a).max(a));
        f * 1f64
            .min((hi + lo) / 2.0)
            .min(mid)
            .min((hi + mid + lo) / 3.0)
    }

    pub fn train_fb(a: f64, t: u32) -> f64 {
        let f = 1.0 - 2.0 / tf(t);
        let hi = a.max(1.0);
        f * hi.min((hi + (1.0 - a).max(0.0)) / 2.0)
    }
}

/// Half-plane `a·x + b·y ≤ c`.
pub type Hp = (f64, f64, f64);

/// Whether the half-planes (plus `x, y ≥ 0` when `quadrant`) have a common
/// point, by checking every pairwise boundary intersection.
pub fn feasible_2d(rows: &[Hp], quadrant: bool, tol: f64) -> bool {
    let mut all: Vec<Hp> = rows.to_vec();
    if quadrant {
        all.push((-1.0, 0.0, 0.0));
        all.push((0.0, -1.0, 0.0));
    }
    let ok = |x: f64, y: f64| all.iter().all(|&(a, b, c)| a * x + b * y <= c + tol * (1.0 + c.abs()));
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let (a1, b1, c1) = all[i];
            let (a2, b2, c2) = all[j];
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-14 {
                continue;
            }
            let x = (c1 * b2 - b1 * c2) / det;
            let y = (a1 * c2 - c1 * a2) / det;
            if ok(x, y) {
                return true;
            }
        }
    }
    false
}

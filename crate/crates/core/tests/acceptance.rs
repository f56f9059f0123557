//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Expected values come from the published tables (quoted
//! below) or from the oracles in `common`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use noncoherent_ic::channel::config_from_db;
use noncoherent_ic::finite_snr::{
    expected_log_closed, expected_log_mc, fact1_bracket, finite_snr_region_rs, rate_tdm,
    rate_training_rs, ExpectedLogSpec,
};
use noncoherent_ic::polytope::{hausdorff_distance, project, regions_equal, DEFAULT_TOL};
use noncoherent_ic::schemes::{
    postfm_region, prefm_system, prelog_numeric, region, sym_gdof, TermBounds, TermId,
};
use noncoherent_ic::special::exp_integral_e1;
use noncoherent_ic::{ChannelConfig, SchemeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{e1_oracle, sym, GAMMA};

const SEED: u64 = 1;
const SAMPLES: usize = 1_000_000;

struct Outcome {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome { id, passed, detail }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

fn s(id: SchemeId, a: f64, t: u32) -> f64 {
    sym_gdof(id, a, t).unwrap()
}

// Published rates at T = 5, α = 1, link strength 0.1: (dB, training, TDM).
const RATES: [(f64, f64, f64); 5] = [
    (16.0, 0.47, 0.50),
    (17.0, 0.54, 0.57),
    (18.0, 0.61, 0.66),
    (19.0, 0.69, 0.75),
    (20.0, 0.77, 0.84),
];

fn rate_table() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cells = Vec::new();
    for (db, train, tdm) in RATES {
        let c = config_from_db(db, 1.0, 5, 0.1).unwrap();
        let r_tdm = rate_tdm(&c, SAMPLES, SEED).unwrap().value;
        let r_train = rate_training_rs(&c, SAMPLES, SEED).unwrap().value;
        worst = worst.max((r_tdm - tdm).abs()).max((r_train - train).abs());
        cells.push(format!("{db}dB {r_train:.3}/{r_tdm:.3}"));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        "1",
        worst <= 0.02 && secs <= 60.0,
        format!("rate table max |diff| {worst:.4} (tol 0.02), {secs:.1}s; {}", cells.join(", ")),
    )
}

fn spot_values() -> Outcome {
    let mut worst = 0.0f64;
    for t in 3..=8 {
        let tf = f64::from(t);
        worst = worst.max((s(SchemeId::RsNoFb, 1.0, t) - 0.5 * (1.0 - 2.0 / tf)).abs());
        for a in [0.0, 0.25, 0.5, 1.0, 1.7] {
            worst = worst.max((s(SchemeId::Tdm, a, t) - 0.5 * (1.0 - 1.0 / tf)).abs());
        }
    }
    outcome("2", worst <= 1e-12, format!("closed-form spot values max |diff| {worst:.2e} (tol 1e-12)"))
}

fn continuity() -> Outcome {
    const EPS: f64 = 1e-11;
    let mut worst = 0.0f64;
    for id in [SchemeId::RsNoFb, SchemeId::RsFb] {
        for t in 2..=12 {
            for b in [0.5, 1.0] {
                let (l, r) = (s(id, b - EPS, t), s(id, b + EPS, t));
                worst = worst.max((l - r).abs());
            }
        }
    }
    outcome("3", worst <= 1e-9, format!("regime continuity max jump {worst:.2e} (tol 1e-9)"))
}

fn dominance() -> Vec<Outcome> {
    let tol = 1e-12;
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for t in 2..=12 {
        for a in grid(0.01, 0.49, 0.01) {
            let tin = s(SchemeId::Tin, a, t);
            if tin < s(SchemeId::RsNoFb, a, t) - tol || tin < s(SchemeId::TrainNoFb, a, t) - tol {
                bad.push((a, t));
            }
        }
    }
    out.push(outcome("4a", bad.is_empty(), format!("TIN >= rs, train for alpha < 1/2: {} violations", bad.len())));

    let bad: Vec<f64> = grid(0.5, 1.5, 0.01)
        .into_iter()
        .filter(|&a| s(SchemeId::Tdm, a, 4) < s(SchemeId::RsNoFb, a, 4) - tol)
        .collect();
    let detail = match (bad.first(), bad.last()) {
        (Some(lo), Some(hi)) => format!(
            "TDM >= rs at T=4, alpha in [0.5, 1.5]: {} violations for alpha in [{lo:.2}, {hi:.2}] (rs {:.4} > tdm {:.4} at 1.5)",
            bad.len(),
            s(SchemeId::RsNoFb, 1.5, 4),
            s(SchemeId::Tdm, 1.5, 4)
        ),
        _ => "TDM >= rs at T=4, alpha in [0.5, 1.5]: 0 violations".to_string(),
    };
    out.push(outcome("4b", bad.is_empty(), detail));

    let (rs, tdm) = (s(SchemeId::RsNoFb, 2.0 / 3.0, 6), s(SchemeId::Tdm, 2.0 / 3.0, 6));
    out.push(outcome(
        "4c",
        rs > tdm && (rs - 4.0 / 9.0).abs() < 1e-12 && (tdm - 5.0 / 12.0).abs() < 1e-12,
        format!("rs {rs:.6} > tdm {tdm:.6} at alpha=2/3, T=6"),
    ));

    let mut n = 0;
    for t in 3..=12 {
        for a in grid(0.01, 0.99, 0.01) {
            n += usize::from(s(SchemeId::RsFb, a, t) < s(SchemeId::Tin, a, t) - tol);
        }
    }
    out.push(outcome("4d", n == 0, format!("rs-fb >= TIN for T >= 3: {n} violations")));

    let n = grid(0.01, 0.99, 0.01)
        .into_iter()
        .filter(|&a| s(SchemeId::Tin, a, 2) < s(SchemeId::RsFb, a, 2) - tol)
        .count();
    out.push(outcome("4e", n == 0, format!("TIN >= rs-fb at T=2, alpha in (0,1): {n} violations")));

    let mut n = 0;
    for t in 2..=12 {
        for a in grid(0.0, 2.0, 0.01) {
            n += usize::from(s(SchemeId::RsFb, a, t) < s(SchemeId::RsNoFb, a, t) - tol);
        }
    }
    out.push(outcome("4f", n == 0, format!("rs-fb >= rs everywhere: {n} violations")));
    out
}

fn fm_oracle() -> Vec<Outcome> {
    [(false, "5-nofb"), (true, "5-fb")]
        .into_iter()
        .map(|(fb, id)| {
            let mut mismatches = Vec::new();
            let mut worst = 0.0f64;
            let mut total = 0;
            for a in [0.3, 0.6, 0.75, 1.2] {
                for t in [3, 5, 8] {
                    for e in [20.0, 40.0] {
                        total += 1;
                        let snr = 2f64.powf(e);
                        let b = TermBounds::from_channel(snr, snr.powf(a), t).unwrap();
                        let post = postfm_region(&b, fb, t).unwrap();
                        let proj = project(&prefm_system(&b, fb, t).unwrap(), ["R1", "R2"]).unwrap();
                        if !regions_equal(&post, &proj, DEFAULT_TOL) {
                            worst = worst.max(hausdorff_distance(&post, &proj).unwrap());
                            mismatches.push(format!("({a},{t},2^{e})"));
                        }
                    }
                }
            }
            let detail = format!(
                "projection == post-elimination region at {}/{total} points{}",
                total - mismatches.len(),
                if mismatches.is_empty() {
                    String::new()
                } else {
                    format!("; mismatched at {} (max Hausdorff {worst:.3} bits)", mismatches.join(" "))
                }
            );
            outcome(id, mismatches.is_empty(), detail)
        })
        .collect()
}

/// Prelog tables transcribed independently: `[alpha < 1/2, 1/2 < alpha < 1, alpha > 1]`.
fn table_prelog(term: TermId, a: f64, t: f64) -> f64 {
    let col = if a < 0.5 {
        0
    } else if a < 1.0 {
        1
    } else {
        2
    };
    let name = term.name();
    let user1 = match name {
        "IX2U1_Y2_gU2" => "IX1U2_Y1_gU1",
        "IX2_Y2_gU1U2" => "IX1_Y1_gU1U2",
        "IX1U2_Y1" => "IX2U1_Y2",
        "IX2_Y2_gU1" => "IX1_Y1_gU2",
        "IU1_Y2_gX2" => "IU2_Y1_gX1",
        n => n,
    };
    let row = match user1 {
        "IX1U2_Y1_gU1" => [(t - 1.0) * (1.0 - a) - a, (t - 2.0) * a, (t - 1.0) * a - 1.0],
        "IX1_Y1_gU1U2" => [(t - 1.0) * (1.0 - a) - a, (t - 2.0) * (1.0 - a), 0.0],
        "IX2U1_Y2" => [(t - 1.0) - a, (t - 1.0) - a, (t - 1.0) * a - 1.0],
        "IX1_Y1_gU2" => [(t - 1.0) - a, (t - 1.0) - a, t - 2.0],
        "IU2_Y1_gX1" => [(t - 2.0) * a, (t - 2.0) * a, (t - 1.0) * a - 1.0],
        other => panic!("no table row for {other}"),
    };
    row[col]
}

fn prelogs() -> Outcome {
    let mut worst = (0.0f64, String::new());
    for term in TermId::ALL {
        for a in [0.2, 0.3, 0.6, 0.75, 1.2, 1.5] {
            for t in [3u32, 5, 8] {
                let n = prelog_numeric(term, a, t, &[8.0, 10.0, 12.0]).unwrap();
                let d = (n - table_prelog(term, a, f64::from(t))).abs();
                if d > worst.0 {
                    worst = (d, format!("{} alpha={a} T={t}", term.name()));
                }
            }
        }
    }
    outcome(
        "6",
        worst.0 <= 0.02,
        format!("prelog slopes max |diff| {:.4} at {} (tol 0.02)", worst.0, worst.1),
    )
}

fn fact1_and_e1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut outside = 0;
    for _ in 0..200 {
        let a = if rng.gen_bool(0.1) { 0.0 } else { 10f64.powf(rng.gen_range(-3.0..3.0)) };
        let b = 10f64.powf(rng.gen_range(-2.0..2.0));
        let m = 10f64.powf(rng.gen_range(-2.0..2.0));
        let v = expected_log_closed(a, b, m).unwrap();
        let (lo, hi) = fact1_bracket(a, b, m).unwrap();
        outside += usize::from(v < lo - 1e-12 || v > hi + 1e-12);
    }

    let mut worst_z = 0.0f64;
    for (a, b, m) in [(1.0, 1.0, 1.0), (2.5985, 0.25119, 3.18176), (0.0, 1.0, 2.0)] {
        let est = expected_log_mc(&ExpectedLogSpec::single(a, b, m).unwrap(), SAMPLES, SEED).unwrap();
        worst_z = worst_z.max((est.value - expected_log_closed(a, b, m).unwrap()).abs() / est.stderr);
    }

    let mut worst_rel = 0.0f64;
    for k in 0..=60 {
        let x = 1e-4 * (50.0f64 / 1e-4).powf(f64::from(k) / 60.0);
        let q = e1_oracle(x);
        worst_rel = worst_rel.max(((exp_integral_e1(x).unwrap() - q) / q).abs());
    }

    let a0 = expected_log_closed(0.0, 1.0, 1.0).unwrap();
    let exact_a0 = -GAMMA / std::f64::consts::LN_2;

    outcome(
        "7",
        outside == 0 && worst_z <= 3.0 && worst_rel <= 1e-10 && (a0 - exact_a0).abs() < 1e-14,
        format!(
            "bracket violations {outside}/200, MC vs closed max {worst_z:.2} sigma (tol 3), E1 max rel err {worst_rel:.1e} (tol 1e-10)"
        ),
    )
}

fn convergence() -> Outcome {
    let mut worst40 = 0.0f64;
    let mut worst60 = 0.0f64;
    for (fb, id) in [(false, SchemeId::RsNoFb), (true, SchemeId::RsFb)] {
        for a in [0.3, 0.6, 0.75, 1.2] {
            let g = region(id, a, 5).unwrap();
            for (e, worst) in [(40.0, &mut worst40), (60.0, &mut worst60)] {
                let c = ChannelConfig::from_snr_alpha(2f64.powf(e), a, 5).unwrap();
                let r = finite_snr_region_rs(&c, fb).unwrap().scaled(1.0 / e);
                *worst = worst.max(hausdorff_distance(&r, &g).unwrap());
            }
        }
    }
    outcome(
        "8",
        worst40 <= 0.05 && worst60 <= 0.02,
        format!("normalized region deviation {worst40:.2e} at 2^40 (tol 0.05), {worst60:.2e} at 2^60 (tol 0.02)"),
    )
}

fn oracle_agreement() -> Outcome {
    // not a numbered criterion: library symmetric gDoF against hand formulas
    let mut worst = 0.0f64;
    for t in 2..=12 {
        for a in grid(0.0, 2.0, 0.01) {
            let pairs = [
                (s(SchemeId::RsNoFb, a, t), sym::rs(a, t)),
                (s(SchemeId::RsFb, a, t), sym::rs_fb(a, t)),
                (s(SchemeId::Tin, a, t), sym::tin(a, t)),
                (s(SchemeId::Tdm, a, t), sym::tdm(t)),
                (s(SchemeId::TrainNoFb, a, t), sym::train(a, t)),
                (s(SchemeId::TrainFb, a, t), sym::train_fb(a, t)),
            ];
            for (lib, oracle) in pairs {
                worst = worst.max((lib - oracle).abs());
            }
        }
    }
    outcome("oracle", worst <= 1e-12, format!("symmetric gDoF vs hand formulas max |diff| {worst:.2e}"))
}

fn main() -> ExitCode {
    let mut all = vec![rate_table(), spot_values(), continuity()];
    all.extend(dominance());
    all.extend(fm_oracle());
    all.push(prelogs());
    all.push(fact1_and_e1());
    all.push(convergence());
    all.push(oracle_agreement());

    let mut failed = 0;
    for o in &all {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {}", o.id, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", all.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

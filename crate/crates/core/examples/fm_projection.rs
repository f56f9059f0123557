//! Projects the rate-splitting system onto (R1, R2) by Fourier-Motzkin
//! elimination and compares the result with the closed-form seven-row
//! (six with feedback) region built from the same term bounds.
//!
//! With feedback the two coincide. Without feedback they differ in the
//! moderate regime: the projection carries extra sum-type rows.

use noncoherent_ic::polytope::{hausdorff_distance, project};
use noncoherent_ic::schemes::{postfm_region, prefm_system};
use noncoherent_ic::{Result, TermBounds};

fn main() -> Result<()> {
    let t = 5;
    let snr = 2f64.powi(20);
    for alpha in [0.3, 0.6, 0.75, 1.2] {
        let bounds = TermBounds::from_channel(snr, snr.powf(alpha), t)?;
        for feedback in [false, true] {
            let sys = prefm_system(&bounds, feedback, t)?;
            let proj = project(&sys, ["R1", "R2"])?;
            let closed = postfm_region(&bounds, feedback, t)?;
            let d = hausdorff_distance(&proj, &closed)?;
            println!(
                "alpha {alpha:<4} feedback {feedback:<5} rows {}/{} hausdorff {d:.4} bits",
                proj.rows.len(),
                closed.rows.len()
            );
            if d > 1e-6 {
                for h in &proj.rows {
                    if !closed.rows.iter().any(|g| (g.a - h.a).abs() < 1e-9 && (g.b - h.b).abs() < 1e-9 && (g.c - h.c).abs() < 1e-6) {
                        println!("    extra row {:+.3} R1 {:+.3} R2 <= {:.3}", h.a, h.b, h.c);
                    }
                }
            }
        }
    }
    Ok(())
}

//! Prints the gDoF region of every scheme at one operating point: the
//! inequalities, the corner points and the best symmetric value.

use noncoherent_ic::schemes::region;
use noncoherent_ic::{Result, SchemeId};

fn main() -> Result<()> {
    let (alpha, t) = (0.75, 6);
    for scheme in SchemeId::ALL {
        let r = region(scheme, alpha, t)?;
        println!("{scheme} (alpha = {alpha}, T = {t})");
        for h in &r.rows {
            println!("  {:+.4} d1 {:+.4} d2 <= {:.4}", h.a, h.b, h.c);
        }
        let corners: Vec<String> = r.vertices()?.iter().map(|(x, y)| format!("({x:.4}, {y:.4})")).collect();
        println!("  vertices: {}", corners.join(" "));
        println!("  symmetric gDoF: {:.6}\n", r.symmetric_max()?.value);
    }
    Ok(())
}

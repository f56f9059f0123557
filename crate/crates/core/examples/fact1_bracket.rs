//! E[log2(a + b·|h|²)] for Rayleigh h: Monte Carlo, exact value and the
//! simple log-bracket around it.

use noncoherent_ic::finite_snr::{expected_log_closed, expected_log_mc, fact1_bracket};
use noncoherent_ic::special::exp_integral_e1;
use noncoherent_ic::{ExpectedLogSpec, Result};

fn main() -> Result<()> {
    println!("E1(0.5657) = {:.8}", exp_integral_e1(0.5657)?);
    for (a, b, m) in [(1.0, 1.0, 1.0), (1.0, 100.0, 1.0), (0.0, 1.0, 4.0), (3.0, 2.0, 0.5)] {
        let mc = expected_log_mc(&ExpectedLogSpec::single(a, b, m)?, 200_000, 7)?;
        let exact = expected_log_closed(a, b, m)?;
        let (lo, hi) = fact1_bracket(a, b, m)?;
        println!("a={a} b={b} mean={m}: {lo:.4} <= {exact:.4} <= {hi:.4}   mc {:.4} ± {:.4}", mc.value, mc.stderr);
    }
    Ok(())
}

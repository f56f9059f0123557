//! Numeric prelog of every term bound next to its closed-form value.

use noncoherent_ic::schemes::{prelog_expected, prelog_numeric};
use noncoherent_ic::{Result, TermId};

fn main() -> Result<()> {
    let t = 5;
    let exps = [8.0, 10.0, 12.0];
    for alpha in [0.3, 0.75, 1.5] {
        println!("alpha = {alpha}");
        for term in TermId::ALL {
            let num = prelog_numeric(term, alpha, t, &exps)?;
            let exp = prelog_expected(term, alpha, t)?;
            println!("  {:<18} numeric {num:.4}  expected {exp:.4}", term.notation());
        }
    }
    Ok(())
}

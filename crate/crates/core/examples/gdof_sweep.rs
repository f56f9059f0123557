//! Symmetric gDoF of all six schemes across alpha, written as CSV.
//!
//! ```text
//! cargo run --example gdof_sweep -- 8 > sweep.csv
//! ```

use std::io;

use noncoherent_ic::cli::sweep_table;
use noncoherent_ic::SchemeId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(5);
    let table = sweep_table(&SchemeId::ALL, t, 0.0, 2.0, 41)?;
    table.write_csv(io::stdout().lock())?;
    Ok(())
}

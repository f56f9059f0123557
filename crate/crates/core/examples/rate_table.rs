//! Finite-SNR rates of TDM and training-based rate splitting at T = 5,
//! alpha = 1 and link gain 0.1.
//! One million fading draws per point; takes a second or two in release.

use noncoherent_ic::finite_snr::{rate_tdm, rate_training_rs, DEFAULT_SAMPLES};
use noncoherent_ic::{ChannelConfig, Result};

fn main() -> Result<()> {
    let seed = 1;
    println!("snr_dB      tdm (±se)            train (±se)");
    for db in 16..=20 {
        let c = ChannelConfig::from_db(f64::from(db), 1.0, 5, 0.1)?;
        let a = rate_tdm(&c, DEFAULT_SAMPLES, seed)?;
        let b = rate_training_rs(&c, DEFAULT_SAMPLES, seed)?;
        println!("{db:>6}  {:.4} (±{:.1e})   {:.4} (±{:.1e})", a.value, a.stderr, b.value, b.stderr);
    }
    Ok(())
}

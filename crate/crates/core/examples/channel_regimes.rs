//! Classifies a few channels by interference level and prints the
//! pilot-based channel estimation quality at each one.

use noncoherent_ic::{ChannelConfig, Result};

fn main() -> Result<()> {
    println!("{:>6} {:>6} {:>9} {:>10} {:>10} {:>8}", "snr_dB", "alpha", "regime", "noise_rs", "noise_tdm", "lambda");
    for (db, alpha) in [(20.0, 0.3), (20.0, 0.5), (20.0, 0.75), (20.0, 1.0), (20.0, 1.4), (40.0, 0.75)] {
        let c = ChannelConfig::from_db(db, alpha, 5, 1.0)?;
        let m = c.mmse();
        println!(
            "{db:>6.1} {alpha:>6.2} {:>9} {:>10.4} {:>10.4} {:>8.5}",
            format!("{:?}", c.regime()),
            m.noise_rs,
            m.noise_tdm,
            m.lambda_p
        );
    }
    Ok(())
}

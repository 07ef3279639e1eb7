// A short BER sweep over SNR for every detector and CPU strategy, printed
// as CSV.

use cfidd::{Simulator, SystemConfig};

pub fn run_example() -> cfidd::Result<()> {
    let config = SystemConfig { snr_grid_db: vec![0.0, 15.0, 30.0], trials: 4, ..Default::default() };
    let table = Simulator::new(config)?.sweep()?;
    print!("{}", table.to_csv_string());
    Ok(())
}

#[allow(dead_code)]
fn main() -> cfidd::Result<()> {
    run_example()
}

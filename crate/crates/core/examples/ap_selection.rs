// Compares the full-network and scalable AP selection on one deployment.

use cfidd::sysmodel::{large_scale_fading, drop_geometry};
use cfidd::rng::{substream, Stream};
use cfidd::{select_aps, SelectionMode, SystemConfig};

pub fn run_example() -> cfidd::Result<()> {
    let config = SystemConfig::default();
    let positions = drop_geometry(&config, &mut substream(3, Stream::Geometry, 0));
    let beta = large_scale_fading(&positions, &mut substream(3, Stream::Shadowing, 0));

    for (mode, threshold) in [(SelectionMode::Full, -40.0), (SelectionMode::Scalable, -40.0), (SelectionMode::Scalable, -6.0)] {
        let sel = select_aps(&beta, threshold, mode)?;
        println!("{mode} with threshold {threshold} dB (rows = UEs, columns = APs):");
        for line in sel.dump().lines() {
            println!("  {line}");
        }
        let masters: Vec<usize> = (0..sel.ues()).map(|k| sel.master(k)).collect();
        println!("  master APs: {masters:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cfidd::Result<()> {
    run_example()
}

// Per-symbol flop counts of the local detectors for a few network sizes.

use cfidd::detect::flop_count;
use cfidd::DetectorKind;

pub fn run_example() -> cfidd::Result<()> {
    println!("{:>3} {:>3} {:>3} {:>10} {:>10} {:>10}", "K", "N", "L", "rmf", "mmse", "mmse-pic");
    for (k, n, l) in [(4, 4, 4), (8, 4, 4), (4, 8, 4), (4, 4, 16), (16, 8, 32)] {
        let counts: Vec<u64> = DetectorKind::ALL.iter().map(|&d| flop_count(d, k, n, l, 2)).collect();
        println!("{k:>3} {n:>3} {l:>3} {:>10} {:>10} {:>10}", counts[0], counts[1], counts[2]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cfidd::Result<()> {
    run_example()
}

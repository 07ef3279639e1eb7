//! Per-detector multiplication counts.

use super::DetectorKind;

/// Number of multiplications for one local detector over the whole network.
pub fn flop_count(kind: DetectorKind, ues: u64, antennas: u64, aps: u64, bits_per_symbol: u32) -> u64 {
    let (k, n, l, mc) = (ues, antennas, aps, bits_per_symbol as u64);
    let q = 1u64 << bits_per_symbol;
    match kind {
        DetectorKind::Rmf => 2 * k * k * l + 4 * k * n * l + 4 * k * l * mc * q + 4 * k * l * q,
        DetectorKind::Mmse => {
            2 * n * n * l * k + 2 * k * k * n * l + 8 * k * n * l + 4 * k * l * q + 2 * mc * k * l * q + k * l
        }
        DetectorKind::MmsePic => {
            4 * n * n * l * k + 3 * k * k * n * l + 8 * k * n * l + 9 * k * l * q + 4 * mc * k * l * q + k * l
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_operating_point() {
        assert_eq!(flop_count(DetectorKind::Rmf, 4, 4, 4, 2), 1152);
        assert_eq!(flop_count(DetectorKind::Mmse, 4, 4, 4, 2), 2064);
        assert_eq!(flop_count(DetectorKind::MmsePic, 4, 4, 4, 2), 3408);
    }
}

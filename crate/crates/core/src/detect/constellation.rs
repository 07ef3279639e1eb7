use num_complex::Complex64;

/// A labelled symbol alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Complex64>,
    /// `labels[i][b]` is bit `b` of point `i`.
    labels: Vec<Vec<u8>>,
    bits_per_symbol: usize,
    es: f64,
}

impl Constellation {
    /// Gray-labelled QPSK, `{(±1 ± j)/√2}`. The first bit selects the sign
    /// of the real part and the second the sign of the imaginary part; bit 0
    /// maps to the positive level.
    pub fn qpsk() -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let mut points = Vec::with_capacity(4);
        let mut labels = Vec::with_capacity(4);
        for b1 in 0..2u8 {
            for b2 in 0..2u8 {
                points.push(Complex64::new(a * level(b1), a * level(b2)));
                labels.push(vec![b1, b2]);
            }
        }
        Self { points, labels, bits_per_symbol: 2, es: 1.0 }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn labels(&self) -> &[Vec<u8>] {
        &self.labels
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Average symbol energy.
    pub fn es(&self) -> f64 {
        self.es
    }

    /// Point carrying `bits` (length `bits_per_symbol`).
    pub fn map(&self, bits: &[u8]) -> Complex64 {
        let idx = self
            .labels
            .iter()
            .position(|l| l.iter().zip(bits).all(|(a, b)| *a == (*b & 1)))
            .expect("label exists");
        self.points[idx]
    }

    /// Maps a bit stream to symbols, `bits_per_symbol` bits at a time.
    pub fn modulate(&self, bits: &[u8]) -> Vec<Complex64> {
        bits.chunks(self.bits_per_symbol).map(|b| self.map(b)).collect()
    }
}

/// Antipodal level of a bit: 0 → +1, 1 → −1.
#[inline]
pub fn level(bit: u8) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpsk_is_zero_mean_unit_energy() {
        let c = Constellation::qpsk();
        let mean: Complex64 = c.points().iter().sum::<Complex64>() / 4.0;
        let energy = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / 4.0;
        assert!(mean.norm() < 1e-15);
        assert!((energy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn qpsk_is_gray_labelled() {
        let c = Constellation::qpsk();
        let d_min = 2.0f64.sqrt();
        for i in 0..4 {
            for j in 0..4 {
                let dist = (c.points()[i] - c.points()[j]).norm();
                if (dist - d_min).abs() < 1e-12 {
                    let diff = c.labels()[i].iter().zip(&c.labels()[j]).filter(|(a, b)| a != b).count();
                    assert_eq!(diff, 1);
                }
            }
        }
    }

    #[test]
    fn zero_bits_map_to_first_quadrant() {
        let c = Constellation::qpsk();
        let p = c.map(&[0, 0]);
        assert!(p.re > 0.0 && p.im > 0.0);
        let p = c.map(&[1, 0]);
        assert!(p.re < 0.0 && p.im > 0.0);
    }
}

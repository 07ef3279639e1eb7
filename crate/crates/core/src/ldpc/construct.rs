//! Progressive-edge-growth construction of column-regular parity-check
//! matrices.

use rand::seq::IndexedRandom;

use super::ParityCheck;
use crate::error::{Error, Result};
use crate::rng::{substream, SimRng, Stream};

/// Target variable-node degree.
pub const COLUMN_DEGREE: usize = 3;

/// Attempts made with successive internal seeds before giving up on a
/// full-rank matrix.
const MAX_ATTEMPTS: u64 = 64;

/// Builds an `m × n` parity-check matrix with column degree 3 (or `m` when
/// smaller) by greedy girth maximization.
///
/// Deterministic for a fixed `seed`. Construction is retried with derived
/// seeds until `H` has full row rank.
pub fn build_parity_check(n: usize, m: usize, seed: u64) -> Result<ParityCheck> {
    if m == 0 || n <= m {
        return Err(Error::InvalidArgument(format!("need C_leng > M > 0, got C_leng = {n}, M = {m}")));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = substream(seed, Stream::Code, attempt);
        let cols = peg_columns(n, m, COLUMN_DEGREE.min(m), &mut rng);
        let pc = ParityCheck::from_columns(m, cols)?;
        if pc.is_full_rank() {
            return Ok(pc);
        }
    }
    Err(Error::Construction(format!(
        "no full-rank {m}×{n} matrix after {MAX_ATTEMPTS} attempts"
    )))
}

fn peg_columns(n: usize, m: usize, degree: usize, rng: &mut SimRng) -> Vec<Vec<usize>> {
    let mut cols: Vec<Vec<usize>> = vec![Vec::with_capacity(degree); n];
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut reached = vec![false; m];

    for v in 0..n {
        for _ in 0..degree {
            let candidates = if cols[v].is_empty() {
                (0..m).collect::<Vec<_>>()
            } else {
                farthest_checks(v, &cols, &rows, &mut reached)
            };
            let min_deg = candidates.iter().map(|&c| rows[c].len()).min().expect("candidate exists");
            let lightest: Vec<usize> =
                candidates.into_iter().filter(|&c| rows[c].len() == min_deg).collect();
            let c = *lightest.choose(rng).expect("non-empty");
            cols[v].push(c);
            rows[c].push(v);
        }
    }
    cols
}

/// Checks not reachable from `v`, or, if the whole graph is reachable, those
/// reached last by the breadth-first expansion.
fn farthest_checks(
    v: usize,
    cols: &[Vec<usize>],
    rows: &[Vec<usize>],
    reached: &mut [bool],
) -> Vec<usize> {
    reached.iter_mut().for_each(|r| *r = false);
    let mut level: Vec<usize> = cols[v].clone();
    for &c in &level {
        reached[c] = true;
    }
    let mut count = level.len();
    loop {
        let mut next = Vec::new();
        for &c in &level {
            for &u in &rows[c] {
                for &c2 in &cols[u] {
                    if !reached[c2] {
                        reached[c2] = true;
                        next.push(c2);
                    }
                }
            }
        }
        if next.is_empty() {
            return (0..reached.len()).filter(|&c| !reached[c]).collect();
        }
        count += next.len();
        if count == reached.len() {
            return next;
        }
        level = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_code_has_degree_three_and_full_rank() {
        let pc = build_parity_check(8, 4, 1).unwrap();
        assert!(pc.columns().iter().all(|c| c.len() == 3));
        assert_eq!(pc.rank(), 4);
        assert_eq!(pc.k(), 4);
    }

    #[test]
    fn construction_is_deterministic() {
        assert_eq!(build_parity_check(64, 32, 5).unwrap(), build_parity_check(64, 32, 5).unwrap());
        assert_ne!(build_parity_check(64, 32, 5).unwrap(), build_parity_check(64, 32, 6).unwrap());
    }

    #[test]
    fn default_code_has_girth_at_least_six() {
        let pc = build_parity_check(256, 128, 1).unwrap();
        assert!(pc.is_full_rank());
        assert!(pc.columns().iter().all(|c| c.len() == 3));
        let g = pc.girth().unwrap();
        assert!(g >= 6, "girth {g}");
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(build_parity_check(4, 4, 0).is_err());
        assert!(build_parity_check(4, 0, 0).is_err());
    }
}

//! GF(2) elimination and systematic encoding.

#[derive(Debug, Clone)]
pub(crate) struct SystematicEncoder {
    n: usize,
    rank: usize,
    info_positions: Vec<usize>,
    /// `(parity position, message indices XORed into it)`.
    parity_eqs: Vec<(usize, Vec<usize>)>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn get(row: &[u64], c: usize) -> bool {
    (row[c / 64] >> (c % 64)) & 1 == 1
}

impl SystematicEncoder {
    /// Reduces `H` (given row-wise as variable lists) to reduced row echelon
    /// form, pivoting from the last column backwards so parity bits gather at
    /// the tail of the codeword whenever possible.
    pub(crate) fn new(n: usize, rows: &[Vec<usize>]) -> Self {
        let w = words(n);
        let mut mat: Vec<Vec<u64>> = rows
            .iter()
            .map(|vars| {
                let mut r = vec![0u64; w];
                for &v in vars {
                    r[v / 64] ^= 1 << (v % 64);
                }
                r
            })
            .collect();

        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut next_row = 0;
        for c in (0..n).rev() {
            if next_row == mat.len() {
                break;
            }
            let Some(p) = (next_row..mat.len()).find(|&r| get(&mat[r], c)) else {
                continue;
            };
            mat.swap(next_row, p);
            let pivot = mat[next_row].clone();
            for (r, row) in mat.iter_mut().enumerate() {
                if r != next_row && get(row, c) {
                    row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push((next_row, c));
            next_row += 1;
        }

        let mut is_pivot = vec![false; n];
        for &(_, c) in &pivots {
            is_pivot[c] = true;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let parity_eqs = pivots
            .iter()
            .map(|&(r, c)| {
                let deps = info_positions
                    .iter()
                    .enumerate()
                    .filter(|&(_, &pos)| get(&mat[r], pos))
                    .map(|(i, _)| i)
                    .collect();
                (c, deps)
            })
            .collect();
        Self { n, rank: pivots.len(), info_positions, parity_eqs }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub(crate) fn encode(&self, msg: &[u8]) -> Vec<u8> {
        let mut word = vec![0u8; self.n];
        for (&pos, &b) in self.info_positions.iter().zip(msg) {
            word[pos] = b & 1;
        }
        for (pos, deps) in &self.parity_eqs {
            word[*pos] = deps.iter().fold(0u8, |acc, &i| acc ^ (msg[i] & 1));
        }
        word
    }
}

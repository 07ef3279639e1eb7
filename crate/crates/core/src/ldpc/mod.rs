//! Rate-1/2 LDPC codes: construction, systematic encoding and box-plus
//! sum-product decoding.
//!
//! LLR sign convention throughout the crate: a positive LLR favours coded
//! bit 0, which is mapped to modulation level +1.

mod alist;
mod construct;
mod decode;
mod gf2;

pub use construct::build_parity_check;
pub use decode::{boxplus, decode_boxplus, BoxPlusDecoder, DecodeOutput, DecodeResult};

use crate::error::{Error, Result};

/// Magnitude limit applied to every LLR that crosses a module boundary.
pub const LLR_CLAMP: f64 = 40.0;

/// Clamps to `±LLR_CLAMP`; NaN carries no information and becomes 0.
#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-LLR_CLAMP, LLR_CLAMP)
    }
}

/// Where an LLR frame was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameSource {
    Ap(usize),
    Cpu,
}

/// One codeword's worth of LLRs for a single UE.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame {
    values: Vec<f64>,
    mu_abs: f64,
    pub ue: usize,
    pub source: FrameSource,
}

impl LlrFrame {
    /// Clamps `values` and caches their mean absolute value.
    pub fn new(mut values: Vec<f64>, ue: usize, source: FrameSource) -> Self {
        values.iter_mut().for_each(|v| *v = clamp_llr(*v));
        let mu_abs = mean_abs(&values);
        Self { values, mu_abs, ue, source }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mean of `|values|`.
    pub fn mu_abs(&self) -> f64 {
        self.mu_abs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Hard decisions: negative LLR → bit 1.
    pub fn hard_bits(&self) -> Vec<u8> {
        self.values.iter().map(|&v| u8::from(v < 0.0)).collect()
    }
}

pub(crate) fn mean_abs(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().map(|v| v.abs()).sum::<f64>() / values.len() as f64
    }
}

/// A binary parity-check matrix stored as a Tanner graph, with a systematic
/// encoder derived from it.
#[derive(Debug, Clone)]
pub struct ParityCheck {
    n: usize,
    m: usize,
    cols: Vec<Vec<usize>>,
    rows: Vec<Vec<usize>>,
    // Flattened edge layout, edges ordered by check node.
    row_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edge: Vec<usize>,
    encoder: gf2::SystematicEncoder,
}

impl PartialEq for ParityCheck {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.cols == other.cols
    }
}

impl ParityCheck {
    /// Builds a code from the check indices of every column.
    pub fn from_columns(m: usize, cols: Vec<Vec<usize>>) -> Result<Self> {
        let n = cols.len();
        let mut rows = vec![Vec::new(); m];
        for (v, checks) in cols.iter().enumerate() {
            for &c in checks {
                if c >= m {
                    return Err(Error::InvalidArgument(format!("check index {c} out of range for M = {m}")));
                }
                rows[c].push(v);
            }
        }
        let mut cols = cols;
        for c in cols.iter_mut() {
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument("repeated edge in parity-check column".into()));
            }
        }

        let mut row_ptr = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::new();
        row_ptr.push(0);
        for r in &rows {
            edge_var.extend_from_slice(r);
            row_ptr.push(edge_var.len());
        }
        let mut per_var: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v].push(e);
        }
        let mut var_ptr = Vec::with_capacity(n + 1);
        let mut var_edge = Vec::with_capacity(edge_var.len());
        var_ptr.push(0);
        for es in &per_var {
            var_edge.extend_from_slice(es);
            var_ptr.push(var_edge.len());
        }

        let encoder = gf2::SystematicEncoder::new(n, &rows);
        Ok(Self { n, m, cols, rows, row_ptr, edge_var, var_ptr, var_edge, encoder })
    }

    /// Codeword length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parity checks (rows of `H`).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Message length, `n − rank(H)`.
    pub fn k(&self) -> usize {
        self.n - self.encoder.rank()
    }

    pub fn rank(&self) -> usize {
        self.encoder.rank()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.m
    }

    /// Check nodes attached to every variable node.
    pub fn columns(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Variable nodes attached to every check node.
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Dense `m × n` matrix of 0/1 entries.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut h = vec![vec![0u8; self.n]; self.m];
        for (r, vars) in self.rows.iter().enumerate() {
            for &v in vars {
                h[r][v] = 1;
            }
        }
        h
    }

    /// Codeword positions that carry the message bits, in message order.
    pub fn info_positions(&self) -> &[usize] {
        self.encoder.info_positions()
    }

    /// Systematic encoding of `msg` (length `k()`).
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k() {
            return Err(Error::InvalidArgument(format!(
                "message has {} bits, code expects {}",
                msg.len(),
                self.k()
            )));
        }
        Ok(self.encoder.encode(msg))
    }

    /// Extracts the message bits from a codeword (or hard decisions).
    pub fn extract_message(&self, word: &[u8]) -> Vec<u8> {
        self.info_positions().iter().map(|&p| word[p]).collect()
    }

    /// Generator matrix rows (`k × n`), one encoded unit message per row.
    pub fn generator_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.k())
            .map(|i| {
                let mut msg = vec![0u8; self.k()];
                msg[i] = 1;
                self.encoder.encode(&msg)
            })
            .collect()
    }

    /// `true` iff `H · wordᵀ = 0` over GF(2).
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n
            && self.rows.iter().all(|vars| vars.iter().fold(0u8, |acc, &v| acc ^ (word[v] & 1)) == 0)
    }

    /// Length of the shortest cycle in the Tanner graph, `None` if acyclic.
    pub fn girth(&self) -> Option<usize> {
        // Nodes 0..n are variables, n..n+m are checks.
        let total = self.n + self.m;
        let neighbours = |u: usize| -> &[usize] {
            if u < self.n {
                &self.cols[u]
            } else {
                &self.rows[u - self.n]
            }
        };
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[start] = 0;
            parent[start] = usize::MAX;
            queue.clear();
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] >= b {
                        break;
                    }
                }
                for &w0 in neighbours(u) {
                    let w = if u < self.n { w0 + self.n } else { w0 };
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Serializes `H` in the alist format.
    pub fn to_alist(&self) -> String {
        alist::write(self)
    }

    /// Parses an alist description of `H`.
    pub fn from_alist(text: &str) -> Result<Self> {
        alist::read(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming_like() -> ParityCheck {
        // [7,4] Hamming code.
        let h = [[1, 1, 0, 1, 1, 0, 0], [1, 0, 1, 1, 0, 1, 0], [0, 1, 1, 1, 0, 0, 1]];
        let cols = (0..7).map(|v| (0..3).filter(|&r| h[r][v] == 1).collect()).collect();
        ParityCheck::from_columns(3, cols).unwrap()
    }

    #[test]
    fn frame_clamps_and_caches_mean() {
        let f = LlrFrame::new(vec![50.0, -1.0, f64::NAN, -100.0], 0, FrameSource::Cpu);
        assert_eq!(f.values(), &[40.0, -1.0, 0.0, -40.0]);
        assert_eq!(f.mu_abs(), 81.0 / 4.0);
        assert_eq!(f.hard_bits(), vec![0, 1, 0, 1]);
    }

    #[test]
    fn hamming_girth_and_rank() {
        let pc = hamming_like();
        assert_eq!(pc.rank(), 3);
        assert_eq!(pc.k(), 4);
        assert_eq!(pc.girth(), Some(4));
    }

    #[test]
    fn generator_is_orthogonal_to_h() {
        let pc = hamming_like();
        for row in pc.generator_matrix() {
            assert!(pc.is_codeword(&row));
        }
    }

    #[test]
    fn wrong_message_length_is_rejected() {
        assert!(hamming_like().encode(&[1, 0]).is_err());
    }

    #[test]
    fn tree_has_no_girth() {
        let pc = ParityCheck::from_columns(1, vec![vec![0], vec![0]]).unwrap();
        assert_eq!(pc.girth(), None);
    }
}

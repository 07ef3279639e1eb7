//! Flooding box-plus sum-product decoder.

use super::{clamp_llr, FrameSource, LlrFrame, ParityCheck, LLR_CLAMP};

/// Exact pairwise check-node operator
/// `a ⊞ b = sgn(a) sgn(b) min(|a|,|b|) + ln(1+e^{−|a+b|}) − ln(1+e^{−|a−b|})`.
#[inline]
pub fn boxplus(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Raw decoder output over plain slices.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutput {
    /// Posterior minus intrinsic input, clamped.
    pub extrinsic: Vec<f64>,
    /// Posterior LLRs, clamped.
    pub posterior: Vec<f64>,
    pub hard_bits: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// Reusable decoder state for one code. Owns its message buffers, so one
/// instance per worker.
#[derive(Debug, Clone)]
pub struct BoxPlusDecoder<'a> {
    pc: &'a ParityCheck,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    fwd: Vec<f64>,
    bwd: Vec<f64>,
    early_exit: bool,
}

impl<'a> BoxPlusDecoder<'a> {
    pub fn new(pc: &'a ParityCheck) -> Self {
        let e = pc.num_edges();
        let max_row = pc.rows().iter().map(Vec::len).max().unwrap_or(0);
        Self {
            pc,
            v2c: vec![0.0; e],
            c2v: vec![0.0; e],
            fwd: vec![0.0; max_row],
            bwd: vec![0.0; max_row],
            early_exit: true,
        }
    }

    /// Always runs `max_iter` iterations instead of stopping at the first
    /// zero syndrome.
    pub fn without_early_exit(mut self) -> Self {
        self.early_exit = false;
        self
    }

    /// Runs at least one and at most `max_iter` flooding iterations, stopping
    /// as soon as the hard decisions satisfy every check unless early exit
    /// is disabled.
    ///
    /// The intrinsic input is `llr_in + prior` when a prior is given.
    pub fn decode(&mut self, llr_in: &[f64], max_iter: usize, prior: Option<&[f64]>) -> DecodeOutput {
        let pc = self.pc;
        let n = pc.n();
        assert_eq!(llr_in.len(), n, "LLR length does not match code length");
        let intrinsic: Vec<f64> = match prior {
            Some(p) => llr_in.iter().zip(p).map(|(a, b)| clamp_llr(a + b)).collect(),
            None => llr_in.iter().map(|&a| clamp_llr(a)).collect(),
        };

        for v in 0..n {
            for &e in &pc.var_edge[pc.var_ptr[v]..pc.var_ptr[v + 1]] {
                self.v2c[e] = intrinsic[v];
            }
        }

        let mut posterior = intrinsic.clone();
        let mut hard_bits = vec![0u8; n];
        let mut converged = false;
        let mut iterations = 0;
        while iterations < max_iter.max(1) {
            iterations += 1;
            self.check_update();
            for v in 0..n {
                let edges = &pc.var_edge[pc.var_ptr[v]..pc.var_ptr[v + 1]];
                let total = intrinsic[v] + edges.iter().map(|&e| self.c2v[e]).sum::<f64>();
                for &e in edges {
                    self.v2c[e] = clamp_llr(total - self.c2v[e]);
                }
                posterior[v] = total;
                hard_bits[v] = u8::from(total < 0.0);
            }
            converged = pc.is_codeword(&hard_bits);
            if converged && self.early_exit {
                break;
            }
        }

        let extrinsic = posterior.iter().zip(&intrinsic).map(|(p, i)| clamp_llr(p - i)).collect();
        posterior.iter_mut().for_each(|p| *p = clamp_llr(*p));
        DecodeOutput { extrinsic, posterior, hard_bits, converged, iterations }
    }

    fn check_update(&mut self) {
        let pc = self.pc;
        for r in 0..pc.m() {
            let (start, end) = (pc.row_ptr[r], pc.row_ptr[r + 1]);
            let d = end - start;
            match d {
                0 => {}
                1 => self.c2v[start] = LLR_CLAMP,
                _ => {
                    let x = &self.v2c[start..end];
                    self.fwd[0] = x[0];
                    for i in 1..d {
                        self.fwd[i] = boxplus(self.fwd[i - 1], x[i]);
                    }
                    self.bwd[d - 1] = x[d - 1];
                    for i in (0..d - 1).rev() {
                        self.bwd[i] = boxplus(x[i], self.bwd[i + 1]);
                    }
                    let out = &mut self.c2v[start..end];
                    out[0] = self.bwd[1];
                    out[d - 1] = self.fwd[d - 2];
                    for i in 1..d - 1 {
                        out[i] = boxplus(self.fwd[i - 1], self.bwd[i + 1]);
                    }
                    out.iter_mut().for_each(|o| *o = clamp_llr(*o));
                }
            }
        }
    }
}

/// Frame-level decoding result.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Extrinsic LLRs for feedback to the detector.
    pub llr_ext: LlrFrame,
    pub hard_bits: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// Decodes one LLR frame. The extrinsic frame keeps the UE and source of
/// `llr_in`.
pub fn decode_boxplus(
    pc: &ParityCheck,
    llr_in: &LlrFrame,
    max_iter: usize,
    prior: Option<&LlrFrame>,
) -> DecodeResult {
    let out = BoxPlusDecoder::new(pc).decode(llr_in.values(), max_iter, prior.map(LlrFrame::values));
    DecodeResult {
        llr_ext: LlrFrame::new(out.extrinsic, llr_in.ue, llr_in.source),
        hard_bits: out.hard_bits,
        converged: out.converged,
        iterations: out.iterations,
    }
}

impl LlrFrame {
    /// Ideal LLRs of magnitude `amplitude` for a known codeword.
    pub fn from_bits(bits: &[u8], amplitude: f64, ue: usize, source: FrameSource) -> Self {
        let values = bits.iter().map(|&b| if b == 0 { amplitude } else { -amplitude }).collect();
        Self::new(values, ue, source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldpc::build_parity_check;

    #[test]
    fn boxplus_identities() {
        for a in [-7.5, -0.3, 0.0, 1.2, 12.0] {
            assert!((boxplus(a, f64::INFINITY) - a).abs() < 1e-12);
            assert_eq!(boxplus(a, 0.0), 0.0);
            assert_eq!(boxplus(a, 2.5), boxplus(2.5, a));
        }
    }

    #[test]
    fn boxplus_matches_tanh_rule() {
        for (a, b) in [(1.0, 2.0), (-3.0, 0.5), (6.0, -6.0), (0.1, 0.2)] {
            let reference = 2.0 * ((a / 2.0f64).tanh() * (b / 2.0f64).tanh()).atanh();
            assert!((boxplus(a, b) - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn saturated_codeword_converges_immediately() {
        let pc = build_parity_check(64, 32, 3).unwrap();
        let msg: Vec<u8> = (0..pc.k()).map(|i| (i % 3 == 0) as u8).collect();
        let word = pc.encode(&msg).unwrap();
        let frame = LlrFrame::from_bits(&word, 40.0, 0, FrameSource::Ap(0));
        let res = decode_boxplus(&pc, &frame, 10, None);
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.hard_bits, word);
    }

    #[test]
    fn all_zero_input_is_a_fixed_point() {
        let pc = build_parity_check(32, 16, 2).unwrap();
        let frame = LlrFrame::new(vec![0.0; 32], 0, FrameSource::Cpu);
        for iters in [1, 5] {
            let res = decode_boxplus(&pc, &frame, iters, None);
            assert!(res.llr_ext.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn prior_is_added_to_the_input() {
        let pc = build_parity_check(32, 16, 2).unwrap();
        let word = pc.encode(&vec![1; pc.k()]).unwrap();
        let half = LlrFrame::from_bits(&word, 1.5, 0, FrameSource::Cpu);
        let full = LlrFrame::from_bits(&word, 3.0, 0, FrameSource::Cpu);
        let a = decode_boxplus(&pc, &half, 3, Some(&half));
        let b = decode_boxplus(&pc, &full, 3, None);
        assert_eq!(a.hard_bits, b.hard_bits);
        for (x, y) in a.llr_ext.values().iter().zip(b.llr_ext.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

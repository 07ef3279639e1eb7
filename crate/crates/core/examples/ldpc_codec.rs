// Builds the rate-1/2 code, encodes a random message, corrupts it with
// AWGN and decodes it with the box-plus decoder.

use cfidd::ldpc::{build_parity_check, decode_boxplus, FrameSource, LlrFrame};
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

pub fn run_example() -> cfidd::Result<()> {
    let pc = build_parity_check(256, 128, 1)?;
    println!(
        "H: {} x {}, {} edges, rank {}, girth {:?}",
        pc.m(),
        pc.n(),
        pc.num_edges(),
        pc.rank(),
        pc.girth()
    );

    let mut rng = cfidd::rng::SimRng::seed_from_u64(5);
    let msg: Vec<u8> = (0..pc.k()).map(|_| rng.random_range(0..2u8)).collect();
    let word = pc.encode(&msg)?;
    assert!(pc.is_codeword(&word));

    // BPSK over AWGN at Eb/N0 = 2 dB.
    let rate = pc.k() as f64 / pc.n() as f64;
    let noise_var = 1.0 / (2.0 * rate * 10f64.powf(0.2));
    let noise = Normal::new(0.0, noise_var.sqrt()).expect("positive variance");
    let llrs: Vec<f64> = word
        .iter()
        .map(|&b| {
            let x = if b == 0 { 1.0 } else { -1.0 };
            2.0 * (x + noise.sample(&mut rng)) / noise_var
        })
        .collect();
    let channel_errors = llrs.iter().zip(&word).filter(|(l, &b)| (**l < 0.0) != (b == 1)).count();

    let frame = LlrFrame::new(llrs, 0, FrameSource::Cpu);
    let out = decode_boxplus(&pc, &frame, 10, None);
    let decoded = pc.extract_message(&out.hard_bits);
    let residual = decoded.iter().zip(&msg).filter(|(a, b)| a != b).count();
    println!(
        "{channel_errors} raw bit errors, {residual} after decoding ({} iterations, converged: {})",
        out.iterations, out.converged
    );

    let alist = pc.to_alist();
    let back = cfidd::ParityCheck::from_alist(&alist)?;
    println!("alist round trip preserves H: {}", back.to_dense() == pc.to_dense());
    Ok(())
}

#[allow(dead_code)]
fn main() -> cfidd::Result<()> {
    run_example()
}

// Shows how the CPU strategies treat LLR frames of different reliability
// forwarded by several APs for the same UE.

use cfidd::ldpc::{build_parity_check, decode_boxplus, FrameSource, LlrFrame};
use cfidd::refine::{censor_index, combine_llrs, combining_stats, refine_standard, LlrBundle};
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

pub fn run_example() -> cfidd::Result<()> {
    let pc = build_parity_check(256, 128, 1)?;
    let mut rng = cfidd::rng::SimRng::seed_from_u64(9);
    let msg: Vec<u8> = (0..pc.k()).map(|_| rng.random_range(0..2u8)).collect();
    let word = pc.encode(&msg)?;

    // Each AP sees the codeword through a Gaussian LLR channel of its own quality.
    let frames: Vec<LlrFrame> = [0.6, 1.0, 1.6]
        .iter()
        .enumerate()
        .map(|(l, &m)| {
            let noise = Normal::new(0.0, (2.0f64 * m).sqrt()).expect("positive variance");
            let values = word
                .iter()
                .map(|&b| (if b == 0 { m } else { -m }) + noise.sample(&mut rng))
                .collect();
            LlrFrame::new(values, 0, FrameSource::Ap(l))
        })
        .collect();
    let bundle = LlrBundle::new(frames)?;

    let errors = |bits: &[u8]| pc.extract_message(bits).iter().zip(&msg).filter(|(a, b)| a != b).count();

    for (l, bits) in refine_standard(&bundle, &pc, 10).iter().enumerate() {
        println!("standard, AP {l}: mean |LLR| {:.2}, {} errors", bundle.frames()[l].mu_abs(), errors(bits));
    }
    let idx = censor_index(&bundle);
    let censored = decode_boxplus(&pc, &bundle.frames()[idx], 10, None);
    println!("censoring keeps AP {idx}: {} errors", errors(&censored.hard_bits));

    let combined = decode_boxplus(&pc, &combine_llrs(&bundle), 10, None);
    let stats = combining_stats(&bundle);
    println!(
        "combining: mean |LLR| {:.2} (inputs {:?}), {} errors",
        stats.mu_abs_combined,
        stats.mu_abs_frames.iter().map(|m| format!("{m:.2}")).collect::<Vec<_>>(),
        errors(&combined.hard_bits)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> cfidd::Result<()> {
    run_example()
}

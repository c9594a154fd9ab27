//! Counter-based random number plumbing shared by the sampling streams.
//!
//! Every stream in this crate is addressed as `(seed, block counter)`. A
//! block is realized as an independent ChaCha stream, so draw `n` of a
//! stream can be reproduced without replaying draws `0..n`. This is what
//! makes batched estimates independent of evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Derives an independent sub-stream seed from a root seed and a tag.
///
/// SplitMix64 finalizer; distinct tags give statistically independent seeds.
pub(crate) fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one block of a counter-addressed stream.
pub(crate) fn block_rng(seed: u64, counter: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(counter);
    rng
}

/// One standard-normal draw via Box-Muller.
///
/// Consumes two uniform draws per call; the cosine branch only, so the
/// draw count per call is fixed and streams stay aligned.
pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u1: f64 = rng.gen::<f64>();
        let u2: f64 = rng.gen::<f64>();
        if u1 > 0.0 {
            return (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        }
    }
}

/// Fills a slice with standard normals, using both Box-Muller outputs of
/// each uniform pair. This is the sampling hot path.
pub(crate) fn fill_standard_normal(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let mut chunks = out.chunks_exact_mut(2);
    for pair in &mut chunks {
        let (z0, z1) = normal_pair(rng);
        pair[0] = z0;
        pair[1] = z1;
    }
    if let [last] = chunks.into_remainder() {
        *last = normal_pair(rng).0;
    }
}

fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let u1: f64 = rng.gen::<f64>();
        let u2: f64 = rng.gen::<f64>();
        if u1 > 0.0 {
            let radius = (-2.0 * u1.ln()).sqrt();
            let (sin, cos) = (std::f64::consts::TAU * u2).sin_cos();
            return (radius * cos, radius * sin);
        }
    }
}

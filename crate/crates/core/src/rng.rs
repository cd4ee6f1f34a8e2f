//! Small draws on top of [`rand_core::RngCore`].

use rand_core::RngCore;

/// Uniform f64 in [0, 1) with 53 bits of precision.
#[inline]
pub fn uniform_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in [0, n) via the multiply-shift reduction.
#[inline]
pub fn uniform_u32<R: RngCore + ?Sized>(rng: &mut R, n: u32) -> u32 {
    debug_assert!(n > 0);
    ((rng.next_u64() as u128 * n as u128) >> 64) as u32
}

/// Mixes a list of parts into one 64-bit stream id (splitmix64 chain).
/// Used to derive independent generator streams per (iteration, block,
/// slice, thread) without storing generator state across iterations.
pub fn mix_stream(parts: &[u64]) -> u64 {
    let mut h = 0x9E37_79B9_7F4A_7C15u64;
    for &p in parts {
        let mut z = h ^ p.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

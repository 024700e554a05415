//! Counter-based random draws.
//!
//! Every draw is a pure function of `(seed, stream, counter)`, so work split
//! across threads in any order reproduces the sequential result bit for bit.
//! The mixing does not depend on the `rand` crate's internal algorithms.

/// Mix a seed with a stream id and a counter into a single 64-bit key.
#[inline]
pub fn key(seed: u64, stream: u64, counter: u64) -> u64 {
    let a = splitmix64(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    splitmix64(a ^ counter.wrapping_mul(0xBF58_476D_1CE4_E5B9))
}

#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A uniform draw in `[0, 1)` for sub-draw `lane` of the given key.
#[inline]
pub fn uniform(key: u64, lane: u64) -> f64 {
    unit_f64(splitmix64(key ^ lane.wrapping_mul(0xD6E8_FEB8_6659_FD93)))
}

/// Standard normal draw via Box-Muller on two keyed uniforms.
#[inline]
pub fn standard_normal(key: u64, lane: u64) -> f64 {
    // shift u1 into (0, 1] so the log is finite
    let u1 = 1.0 - uniform(key, 2 * lane);
    let u2 = uniform(key, 2 * lane + 1);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

//! Seeded random sampling on spheres and the reduction of "random line vs
//! nearest cube vertex" to half-normal statistics.
//!
//! Randomness comes from ChaCha8 keyed by a 64-bit seed, with the cipher's
//! 64-bit stream counter serving as the substream index: identical
//! `(seed, stream_id)` pairs replay identical sequences on every platform,
//! and distinct stream ids are independent. Normal variates are produced by
//! inverse-CDF transform through [`crate::specfun::std_normal_quantile`], so
//! a sequence is pinned down entirely by the uniform bits.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::specfun::std_normal_quantile_raw;

/// Identifier of a deterministic substream: `(seed, stream_id)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Uniform draw in the open interval (0, 1): the top 53 bits of a u64,
/// offset by half an ulp so 0 and 1 are unreachable.
#[inline]
pub(crate) fn uniform_open01(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

#[inline]
pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    std_normal_quantile_raw(uniform_open01(rng))
}

/// `n` i.i.d. standard normal draws from the given substream.
pub fn sample_std_normal_vec(n: u32, stream: RandomStream) -> Vec<f64> {
    let mut rng = stream.rng();
    (0..n).map(|_| standard_normal(&mut rng)).collect()
}

/// A uniform point on the unit sphere `S^{n-1}`: a normalized standard
/// normal vector. Redraws in the (probability-zero) event that the norm
/// underflows.
pub fn sample_unit_sphere(n: u32, stream: RandomStream) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::domain(format!(
            "sphere sampling requires n >= 2, got {n}"
        )));
    }
    let mut rng = stream.rng();
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
        if norm > 0.0 && norm.is_finite() {
            for x in &mut v {
                *x /= norm;
            }
            return Ok(v);
        }
    }
}

/// `n` i.i.d. half-normal draws (|Z| for standard normal Z).
pub fn sample_half_normal_vec(n: u32, stream: RandomStream) -> Vec<f64> {
    let mut rng = stream.rng();
    let mut v = vec![0.0; n as usize];
    fill_half_normal(&mut v, &mut rng);
    v
}

#[inline]
pub(crate) fn fill_half_normal(buf: &mut [f64], rng: &mut ChaCha8Rng) {
    for x in buf.iter_mut() {
        *x = standard_normal(rng).abs();
    }
}

/// The cube vertex nearest to the line through `y`: the coordinate-wise
/// sign pattern (Prop-style nearest-vertex reduction). A zero coordinate is
/// a probability-zero tie, broken to +1.
pub fn nearest_vertex(y: &[f64]) -> Vec<i8> {
    y.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect()
}

/// The statistics of one sampled line against the vertex `(1, ..., 1)`:
/// coordinate sum `s`, squared norm `t`, squared line-to-vertex distance
/// `d_sq = n - s^2/t`, and squared cosine `cos_sq = s^2/(n t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineStats {
    pub n: u32,
    pub s: f64,
    pub t: f64,
    pub d_sq: f64,
    pub cos_sq: f64,
}

/// Compute [`LineStats`] for a vector of nonnegative coordinates (at least
/// one strictly positive, as half-normal draws are almost surely).
///
/// `s^2/t` is formed with a single division and both derived fields come
/// from it, which keeps the identity `d_sq = n (1 - cos_sq)` tight.
pub fn line_stats(x: &[f64]) -> Result<LineStats> {
    if x.is_empty() {
        return Err(Error::domain("line_stats requires a nonempty vector"));
    }
    let mut s = 0.0;
    let mut t = 0.0;
    for &v in x {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::domain(format!(
                "line_stats requires finite nonnegative coordinates, got {v}"
            )));
        }
        s += v;
        t += v * v;
    }
    if t == 0.0 {
        return Err(Error::domain(
            "line_stats rejects the all-zero vector (no line direction)",
        ));
    }
    let n = x.len() as u32;
    let nf = n as f64;
    let ratio = s * s / t;
    Ok(LineStats {
        n,
        s,
        t,
        d_sq: (nf - ratio).max(0.0),
        cos_sq: (ratio / nf).min(1.0),
    })
}

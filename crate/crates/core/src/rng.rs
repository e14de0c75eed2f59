//! Counter-based seeded random streams.
//!
//! Every stream is addressed by `(seed, stream)`; the `k`-th uniform of a
//! stream is a pure function of `(seed, stream, k)`. Ensembles derive one
//! stream per trace or trial so results never depend on generation order.

use crate::scalar::Real;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform deviates on the open interval (0, 1).
#[derive(Debug, Clone)]
pub struct UniformStream {
    key: u64,
    counter: u64,
}

impl UniformStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed ^ mix64(stream.wrapping_add(GOLDEN)));
        Self { key, counter: 0 }
    }

    /// Number of uniforms drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        let word = mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        self.counter += 1;
        word
    }

    /// Uniform in (0, 1); never returns 0 so `ln` is always finite.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Standard normal deviates by the Box-Muller transform.
///
/// Both deviates of each pair are used, cosine branch first.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    uniforms: UniformStream,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            uniforms: UniformStream::new(seed, stream),
            spare: None,
        }
    }

    pub fn next_standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniforms.next_open01();
        let u2 = self.uniforms.next_open01();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Deviate from N(0, variance).
    pub fn next_normal<T: Real>(&mut self, variance: T) -> T {
        T::lit(self.next_standard()) * variance.sqrt()
    }
}

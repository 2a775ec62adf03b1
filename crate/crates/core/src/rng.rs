//! Counter-based random numbers.
//!
//! Every draw is a pure function of `(seed, counter)`, so any slice of a
//! stream can be regenerated independently and results never depend on how
//! work is split between threads.
//!
//! The generator is SplitMix64 evaluated at an arbitrary position:
//!
//! ```text
//! key      = mix64(seed ^ 0x6A09E667F3BCC909)
//! state(i) = key + (i + 1) * 0x9E3779B97F4A7C15      (mod 2^64)
//! out(i)   = mix64(state(i))
//! mix64(z) = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!            z ^= z >> 27; z *= 0x94D049BB133111EB;
//!            z ^ (z >> 31)
//! ```
//!
//! Uniform doubles take the top 53 bits: `(out >> 11) * 2^-53`. Standard
//! normals use Box–Muller on the uniform pair `(2j, 2j + 1)`:
//! `sqrt(-2 ln(1 - u0)) * (cos, sin)(2π u1)`.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self {
            key: mix64(seed ^ 0x6A09_E667_F3BC_C909),
        }
    }

    /// Independent stream derived from this one, e.g. one per purpose.
    pub fn substream(&self, tag: u64) -> Self {
        Self {
            key: mix64(self.key ^ mix64(tag.wrapping_add(GAMMA))),
        }
    }

    #[inline]
    pub fn u64_at(&self, counter: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(counter.wrapping_add(1).wrapping_mul(GAMMA)),
        )
    }

    /// Uniform in [0, 1).
    #[inline]
    pub fn uniform_at(&self, counter: u64) -> f64 {
        (self.u64_at(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Pair of independent standard normals from counters `2j`, `2j + 1`.
    #[inline]
    pub fn normal_pair_at(&self, j: u64) -> (f64, f64) {
        let u0 = self.uniform_at(2 * j);
        let u1 = self.uniform_at(2 * j + 1);
        let r = (-2.0 * (1.0 - u0).ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u1).sin_cos();
        (r * c, r * s)
    }

    /// Standard normal vector of length `dim` for sample `index`.
    pub fn normal_vector(&self, index: u64, dim: usize) -> Vec<f64> {
        let pairs = dim.div_ceil(2) as u64;
        let mut out = Vec::with_capacity(dim);
        for m in 0..pairs {
            let (a, b) = self.normal_pair_at(index * pairs + m);
            out.push(a);
            if out.len() < dim {
                out.push(b);
            }
        }
        out
    }

    /// Uniform direction on the unit sphere in `dim` dimensions.
    pub fn unit_vector(&self, index: u64, dim: usize) -> Vec<f64> {
        // Redraw on the (practically impossible) zero vector by shifting the index space.
        let mut attempt = 0u64;
        loop {
            let v = self.substream(attempt).normal_vector(index, dim);
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-300 {
                return v.into_iter().map(|x| x / n).collect();
            }
            attempt += 1;
        }
    }
}

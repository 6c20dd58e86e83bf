use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BitVec;

/// Seeded, splittable random stream.
///
/// Backed by ChaCha8 keyed by `seed` with the 64-bit ChaCha stream id set to
/// `stream`. Identical `(seed, stream)` pairs yield identical sequences.
/// Children are derived by [`RandomSource::split`], which depends only on the
/// parent's identity and the label, never on how much the parent consumed.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Independent child stream for `label`. Same parent identity and label
    /// always give the same child.
    pub fn split(&self, label: u64) -> RandomSource {
        let child = mix64(mix64(self.seed ^ mix64(self.stream)) ^ label.wrapping_mul(0xD6E8_FEB8_6659_FD93));
        RandomSource::new(self.seed, child)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    #[inline]
    pub fn bit(&mut self) -> bool {
        self.rng.next_u32() & 1 == 1
    }

    /// Uniform `k`-bit vector.
    pub fn rand_bits(&mut self, k: usize) -> BitVec {
        let mut v = BitVec::zeros(k);
        let mut i = 0;
        while i < k {
            let w = self.next_u64();
            let take = (k - i).min(64);
            for b in 0..take {
                if (w >> b) & 1 == 1 {
                    v.set(i + b, true);
                }
            }
            i += take;
        }
        v
    }

    /// Uniform integer in `[0, m)` without modulo bias. Panics if `m == 0`.
    #[inline]
    pub fn rand_below(&mut self, m: u64) -> u64 {
        assert!(m >= 1, "rand_below requires m >= 1");
        self.rng.random_range(0..m)
    }

    pub fn rand_below_u128(&mut self, m: u128) -> u128 {
        assert!(m >= 1, "rand_below requires m >= 1");
        self.rng.random_range(0..m)
    }

    /// Uniform `f64` in `[0, 1)`.
    pub fn unit_f64(&mut self) -> f64 {
        self.rng.random()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_one_is_zero() {
        let mut src = RandomSource::new(3, 0);
        assert!((0..100).all(|_| src.rand_below(1) == 0));
    }

    #[test]
    fn same_identity_same_sequence() {
        let mut a = RandomSource::new(42, 7);
        let mut b = RandomSource::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = RandomSource::new(42, 8);
        let mut a = RandomSource::new(42, 7);
        assert_ne!(
            (0..8).map(|_| a.next_u64()).collect::<Vec<_>>(),
            (0..8).map(|_| c.next_u64()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn split_ignores_parent_consumption() {
        let parent = RandomSource::new(9, 1);
        let mut used = parent.clone();
        for _ in 0..17 {
            used.next_u64();
        }
        assert_eq!(parent.split(5).stream(), used.split(5).stream());
        assert_ne!(parent.split(5).stream(), parent.split(6).stream());
    }

    #[test]
    fn below_six_within_five_sigma() {
        let mut src = RandomSource::new(11, 0);
        let mut counts = [0u64; 6];
        for _ in 0..60_000 {
            counts[src.rand_below(6) as usize] += 1;
        }
        // binomial(60000, 1/6): sigma = sqrt(60000 * 1/6 * 5/6)
        let sigma = (60_000.0f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() <= 5.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn chi_square_small_moduli() {
        // Upper 1e-6 tail of chi-square with df = 2, 4, 6.
        let critical = [(3u64, 27.631), (5, 33.377), (7, 38.258)];
        for (m, crit) in critical {
            let mut src = RandomSource::new(1000 + m, 0);
            let mut counts = vec![0u64; m as usize];
            let draws = 100_000u64;
            for _ in 0..draws {
                counts[src.rand_below(m) as usize] += 1;
            }
            let expect = draws as f64 / m as f64;
            let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
            assert!(chi2 < crit, "m={m} chi2={chi2}");
        }
    }

    #[test]
    fn rand_bits_has_requested_length() {
        let mut src = RandomSource::new(0, 0);
        for k in [0, 1, 63, 64, 65, 200] {
            assert_eq!(src.rand_bits(k).len(), k);
        }
    }
}

//! Counter-based generator: output `i` of stream `s` under seed `k` is a
//! fixed function of `(k, s, i)`, so replications can be scheduled on any
//! number of workers without changing a single draw.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const STREAM_SALT: u64 = 0xd1b5_4a32_d192_ed03;

/// SplitMix64 finaliser.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed ^ mix64(stream.wrapping_mul(STREAM_SALT).wrapping_add(GOLDEN)));
        CounterRng { key, counter: 0 }
    }

    /// The `index`-th output of a stream, without stepping through it.
    pub fn at(seed: u64, stream: u64, index: u64) -> u64 {
        let mut rng = CounterRng::new(seed, stream);
        rng.counter = index;
        rng.next_u64()
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Bernoulli(p) via a 53-bit integer comparison.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bernoulli {
    cutoff: u64,
}

impl Bernoulli {
    pub fn new(p: f64) -> Self {
        let scale = (1u64 << 53) as f64;
        Bernoulli {
            cutoff: (p.clamp(0.0, 1.0) * scale).ceil() as u64,
        }
    }

    #[inline]
    pub fn sample(self, rng: &mut CounterRng) -> bool {
        (rng.next_u64() >> 11) < self.cutoff
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_access_matches_sequence() {
        let mut rng = CounterRng::new(42, 7);
        for i in 0..100 {
            assert_eq!(rng.next_u64(), CounterRng::at(42, 7, i));
        }
    }

    #[test]
    fn streams_differ() {
        let a: Vec<u64> = (0..8).map(|i| CounterRng::at(1, 0, i)).collect();
        let b: Vec<u64> = (0..8).map(|i| CounterRng::at(1, 1, i)).collect();
        let c: Vec<u64> = (0..8).map(|i| CounterRng::at(2, 0, i)).collect();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_mean() {
        let mut rng = CounterRng::new(9, 3);
        let n = 200_000;
        let mean = (0..n).map(|_| rng.next_f64()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 4.0 * (1.0 / 12.0 / n as f64).sqrt());
    }

    #[test]
    fn bernoulli_extremes() {
        let mut rng = CounterRng::new(0, 0);
        assert!((0..1000).all(|_| Bernoulli::new(1.0).sample(&mut rng)));
        assert!((0..1000).all(|_| !Bernoulli::new(0.0).sample(&mut rng)));
    }
}

//! Deterministic pseudo-random rational points, used as a cross-check oracle
//! for the wall-based completeness criterion and for support-preservation
//! tests.

use num_bigint::BigInt;
use num_rational::BigRational;

/// xorshift64*; fixed seeds keep every run byte-identical.
#[derive(Clone, Debug)]
pub struct Xorshift {
    state: u64,
}

impl Xorshift {
    pub fn new(seed: u64) -> Self {
        Xorshift { state: seed.max(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn next_range(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}

/// `count` rational points in [-999, 999]^dim with denominators up to 32.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let mut rng = Xorshift::new(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let num = rng.next_range(-999, 999);
                    let den = rng.next_range(1, 32);
                    BigRational::new(BigInt::from(num), BigInt::from(den))
                })
                .collect()
        })
        .collect()
}

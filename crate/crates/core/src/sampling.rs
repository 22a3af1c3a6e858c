//! Bias-free sampling from rational distributions.
//!
//! A distribution `p_i = n_i / L` over a common denominator `L` is sampled by
//! drawing `u` uniform in `[0, L)` and returning the first `i` whose
//! cumulative numerator exceeds `u`. Uniform integers come from raw 64-bit
//! generator words by rejection, never by a bare modulo.

use crate::rational::{self, Rational};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::RngCore;

/// Name recorded in empirical tables for the generator used by
/// [`new_rng`].
pub const GENERATOR_NAME: &str = "chacha20";

pub type SimRng = rand_chacha::ChaCha20Rng;

/// Generator for chunk `stream` of a run seeded with `seed`.
pub fn new_rng(seed: u64, stream: u64) -> SimRng {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform integer in `[0, bound)`. `bound` must be positive.
pub fn uniform_below_u64(rng: &mut impl RngCore, bound: u64) -> u64 {
    assert!(bound > 0, "empty range");
    if bound.is_power_of_two() {
        return rng.next_u64() & (bound - 1);
    }
    // Accept only the largest multiple of `bound` that fits in 2^64.
    let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
    loop {
        let r = rng.next_u64();
        if r <= zone {
            return r % bound;
        }
    }
}

/// Uniform integer in `[0, bound)` for arbitrary-precision bounds, by
/// rejection on the smallest covering power of two.
pub fn uniform_below_big(rng: &mut impl RngCore, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let words = bits.div_ceil(64) as usize;
    let top_bits = bits - 64 * (words as u64 - 1);
    loop {
        let mut digits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        if top_bits < 64 {
            digits[words - 1] &= (1u64 << top_bits) - 1;
        }
        let candidate = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        if &candidate < bound {
            return candidate;
        }
    }
}

#[derive(Debug, Clone)]
enum Cumulative {
    /// Point mass; no randomness is consumed.
    Certain(usize),
    Small {
        denom: u64,
        upper: Vec<u64>,
    },
    Big {
        denom: BigUint,
        upper: Vec<BigUint>,
    },
}

/// Precomputed inverse-CDF sampler for one rational distribution.
#[derive(Debug, Clone)]
pub struct ExactSampler {
    cumulative: Cumulative,
}

impl ExactSampler {
    /// `probs` must be nonnegative and sum to one.
    pub fn new(probs: &[Rational]) -> Self {
        assert!(!probs.is_empty(), "empty distribution");
        debug_assert_eq!(probs.iter().sum::<Rational>(), rational::one());
        if let Some(i) = probs.iter().position(|p| p.is_one()) {
            return Self {
                cumulative: Cumulative::Certain(i),
            };
        }
        let denom = rational::common_denominator(probs);
        let mut running = BigInt::zero();
        let upper: Vec<BigInt> = probs
            .iter()
            .map(|p| {
                running += (p * &denom).to_integer();
                running.clone()
            })
            .collect();
        let to_big = |v: &BigInt| v.to_biguint().expect("nonnegative");
        let cumulative = match denom.to_u64() {
            Some(d) => Cumulative::Small {
                denom: d,
                upper: upper
                    .iter()
                    .map(|u| u.to_u64().expect("bounded by denom"))
                    .collect(),
            },
            None => Cumulative::Big {
                denom: to_big(&denom),
                upper: upper.iter().map(to_big).collect(),
            },
        };
        Self { cumulative }
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> usize {
        match &self.cumulative {
            Cumulative::Certain(i) => *i,
            Cumulative::Small { denom, upper } => {
                let u = uniform_below_u64(rng, *denom);
                upper.iter().position(|&c| u < c).expect("u below total")
            }
            Cumulative::Big { denom, upper } => {
                let u = uniform_below_big(rng, denom);
                upper.iter().position(|c| &u < c).expect("u below total")
            }
        }
    }
}

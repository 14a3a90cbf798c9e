//! Bernoulli numbers and polynomials over exact rationals, plus their
//! reductions mod p.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, rat, rational_pow, Rational, Residue, Ring};

/// Exact B_0..B_m, with the B_1 = -1/2 convention.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliCache {
    values: Vec<Rational>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            values: vec![Rational::one()],
        }
    }

    pub fn with_bound(m: usize) -> Self {
        let mut cache = Self::new();
        cache.extend_to(m);
        cache
    }

    /// Largest index held.
    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    /// Grows the cache so that it holds B_0..B_m. Never shrinks.
    pub fn extend_to(&mut self, m: usize) {
        for n in self.values.len()..=m {
            let b = if n > 1 && n % 2 == 1 {
                Rational::zero()
            } else {
                // sum_{j<=n} C(n+1, j) B_j = 0
                let acc = self
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| !b.is_zero())
                    .fold(Rational::zero(), |acc, (j, b)| {
                        acc + b * Rational::from_integer(binomial(n as u64 + 1, j as u64))
                    });
                -acc / rat(n as i64 + 1)
            };
            self.values.push(b);
        }
    }

    pub fn get(&self, k: usize) -> Option<&Rational> {
        self.values.get(k)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

static SHARED: RwLock<BernoulliCache> = RwLock::new(BernoulliCache {
    values: Vec::new(),
});

fn with_shared<R>(m: usize, f: impl FnOnce(&BernoulliCache) -> R) -> R {
    {
        let guard = SHARED.read().expect("bernoulli cache poisoned");
        if !guard.values.is_empty() && guard.bound() >= m {
            return f(&guard);
        }
    }
    let mut guard = SHARED.write().expect("bernoulli cache poisoned");
    if guard.values.is_empty() {
        *guard = BernoulliCache::new();
    }
    guard.extend_to(m);
    f(&guard)
}

/// A cache holding exactly B_0..B_m.
pub fn bernoulli_numbers(m: usize) -> BernoulliCache {
    with_shared(m, |c| BernoulliCache {
        values: c.values[..=m].to_vec(),
    })
}

/// B_k from the process-wide cache.
pub fn bernoulli(k: usize) -> Rational {
    with_shared(k, |c| c.values[k].clone())
}

/// B_m(x) = sum_k C(m, k) B_k x^(m-k).
pub fn bernoulli_poly_eval(m: usize, x: &Rational) -> Rational {
    with_shared(m, |c| {
        // Horner in x over the coefficients C(m, k) B_k, highest power first.
        c.values[..=m]
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (k, b)| {
                acc * x + b * Rational::from_integer(binomial(m as u64, k as u64))
            })
    })
}

/// B_m(x) mod p. Requires m <= p - 2 so that no B_k involved has p in its
/// denominator.
pub fn bernoulli_value_mod(m: usize, x: &Rational, p: u64) -> Result<Residue> {
    let ring = Ring::new(p, 1)?;
    if m as u64 + 2 > p {
        return Err(Error::IndexTooLarge { m, p });
    }
    ring.reduce(x)?;
    ring.reduce(&bernoulli_poly_eval(m, x))
}

/// B_m(x) - B_m(y) mod p for m <= p - 1. The B_m term cancels in the
/// difference, so only B_0..B_{m-1} need p-free denominators.
pub fn bernoulli_difference_mod(m: usize, x: &Rational, y: &Rational, p: u64) -> Result<Residue> {
    let ring = Ring::new(p, 1)?;
    if m as u64 + 1 > p {
        return Err(Error::IndexTooLarge { m, p });
    }
    ring.reduce(x)?;
    ring.reduce(y)?;
    ring.reduce(&(bernoulli_poly_eval(m, x) - bernoulli_poly_eval(m, y)))
}

/// Checks reflection B_m(1-x) = (-1)^m B_m(x) and multiplication
/// B_m(ax) = a^(m-1) sum_{k<a} B_m(x + k/a) exactly.
pub fn check_bernoulli_identities(m: usize, a: u64, x: &Rational) -> bool {
    let bx = bernoulli_poly_eval(m, x);
    let one = Rational::one();
    let reflected = bernoulli_poly_eval(m, &(&one - x));
    let sign = if m % 2 == 0 { one.clone() } else { -one.clone() };
    let reflection = reflected == sign * &bx;

    if a == 0 {
        return false;
    }
    let a_rat = Rational::from_integer(BigInt::from(a));
    let lhs = bernoulli_poly_eval(m, &(&a_rat * x));
    let sum = (0..a).fold(Rational::zero(), |acc, k| {
        acc + bernoulli_poly_eval(m, &(x + Rational::new(BigInt::from(k), BigInt::from(a))))
    });
    let scale = rational_pow(&a_rat, m as i64 - 1);
    reflection && lhs == scale * sum
}

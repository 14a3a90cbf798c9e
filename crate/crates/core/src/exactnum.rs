//! Exact rationals and the residue rings Z/p^e.
//!
//! Rationals are `num_rational::BigRational`, which is normalized after every
//! operation (lowest terms, positive denominator). Residues carry their ring
//! `(p, e)` so that values from different rings cannot be mixed silently.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Largest supported exponent e in Z/p^e.
pub const MAX_EXPONENT: u32 = 3;

/// Shorthand for the integer `n` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den` as a rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Binomial coefficient C(n, k) for non-negative `n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient x(x-1)...(x-k+1)/k! for any integer `x`.
pub fn binomial_signed(x: i64, k: u64) -> BigInt {
    if x >= 0 {
        return binomial(x as u64, k);
    }
    // C(x, k) = (-1)^k C(k - x - 1, k) for x < 0.
    let b = binomial((k as i64 - x - 1) as u64, k);
    if k % 2 == 0 {
        b
    } else {
        -b
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, correct for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in the inclusive range `lo..=hi`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Inverse of `a` modulo `m`, if it exists.
fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// The ring Z/p^e. Construction validates primality of `p` and the exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    p: u64,
    e: u32,
    modulus: u64,
}

impl Ring {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !(1..=MAX_EXPONENT).contains(&e) {
            return Err(Error::ExponentOutOfRange(e));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let modulus = p
            .checked_pow(e)
            .ok_or(Error::ModulusOverflow { p, e })?;
        Ok(Ring { p, e, modulus })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn zero(&self) -> Residue {
        Residue { value: 0, ring: *self }
    }

    pub fn one(&self) -> Residue {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> Residue {
        Residue {
            value: n % self.modulus,
            ring: *self,
        }
    }

    pub fn from_i64(&self, n: i64) -> Residue {
        Residue {
            value: (n as i128).rem_euclid(self.modulus as i128) as u64,
            ring: *self,
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Residue {
        let m = BigInt::from(self.modulus);
        let v = n.mod_floor(&m);
        Residue {
            value: v.to_u64().expect("reduced value fits in u64"),
            ring: *self,
        }
    }

    /// Builds a residue from a canonical value, rejecting out-of-range input.
    pub fn residue(&self, value: u64) -> Result<Residue> {
        if value >= self.modulus {
            return Err(Error::InvalidArgument(format!(
                "{value} is not a canonical residue mod {}",
                self.modulus
            )));
        }
        Ok(Residue { value, ring: *self })
    }

    /// numerator(q) * denominator(q)^{-1} mod p^e.
    pub fn reduce(&self, q: &Rational) -> Result<Residue> {
        let den = self.from_bigint(q.denom());
        if den.value % self.p == 0 {
            return Err(Error::DenominatorDivisibleByP { p: self.p });
        }
        let num = self.from_bigint(q.numer());
        Ok(num * den.inverse()?)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "Z/{}", self.p)
        } else {
            write!(f, "Z/{}^{}", self.p, self.e)
        }
    }
}

/// An element of Z/p^e, stored as its canonical representative in [0, p^e).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    ring: Ring,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn prime(&self) -> u64 {
        self.ring.p
    }

    pub fn exponent(&self) -> u32 {
        self.ring.e
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.ring.p != 0
    }

    pub fn inverse(&self) -> Result<Residue> {
        inverse_mod(self.value, self.ring.modulus)
            .map(|value| Residue {
                value,
                ring: self.ring,
            })
            .ok_or(Error::NotAUnit {
                value: self.value,
                modulus: self.ring.modulus,
            })
    }

    pub fn pow(&self, exp: u64) -> Residue {
        Residue {
            value: pow_mod(self.value, exp, self.ring.modulus),
            ring: self.ring,
        }
    }

    /// Image under the projection Z/p^e -> Z/p^f for f <= e.
    pub fn project(&self, e: u32) -> Result<Residue> {
        if e == 0 || e > self.ring.e {
            return Err(Error::ExponentOutOfRange(e));
        }
        let ring = Ring::new(self.ring.p, e)?;
        Ok(ring.from_u64(self.value))
    }

    fn same_ring(&self, other: &Residue) -> Result<Ring> {
        if self.ring == other.ring {
            Ok(self.ring)
        } else {
            Err(Error::RingMismatch {
                left: self.ring.modulus,
                right: other.ring.modulus,
            })
        }
    }

    pub fn checked_add(&self, other: &Residue) -> Result<Residue> {
        let ring = self.same_ring(other)?;
        let m = ring.modulus as u128;
        Ok(Residue {
            value: ((self.value as u128 + other.value as u128) % m) as u64,
            ring,
        })
    }

    pub fn checked_sub(&self, other: &Residue) -> Result<Residue> {
        self.checked_add(&-*other)
    }

    pub fn checked_mul(&self, other: &Residue) -> Result<Residue> {
        let ring = self.same_ring(other)?;
        Ok(Residue {
            value: mul_mod(self.value, other.value, ring.modulus),
            ring,
        })
    }

    /// The representative as an unsigned big integer.
    pub fn to_biguint(&self) -> BigUint {
        BigUint::from(self.value)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.ring.modulus)
    }
}

// Operator forms panic on a ring mismatch; use the `checked_*` methods where
// the operands are not known to share a ring.
impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.checked_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.checked_sub(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.checked_mul(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        let value = if self.value == 0 {
            0
        } else {
            self.ring.modulus - self.value
        };
        Residue {
            value,
            ring: self.ring,
        }
    }
}

/// Reduces `q` into Z/p^e.
pub fn mod_reduce(q: &Rational, p: u64, e: u32) -> Result<Residue> {
    Ring::new(p, e)?.reduce(q)
}

/// Multiplicative inverse of a unit.
pub fn mod_inverse(x: &Residue) -> Result<Residue> {
    x.inverse()
}

/// Exact power of a rational to a signed exponent. Panics on 0^negative.
pub fn rational_pow(base: &Rational, exp: i64) -> Rational {
    let mag = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        mag.recip()
    } else {
        mag
    }
}

/// `{x}`: the fractional part in [0, 1).
pub fn fractional_part(x: &Rational) -> Rational {
    x - x.floor()
}

/// `|n|` as a u64 when the rational is an integer that fits.
pub fn as_u64(q: &Rational) -> Option<u64> {
    if q.is_integer() && !q.is_negative() {
        q.to_integer().to_u64()
    } else {
        None
    }
}

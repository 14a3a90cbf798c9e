//! Sequences, the binomial transform, eigenspace classification and the
//! second-order recurrence family with generating function a1 z/(1 - z - c z^2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bernoulli::bernoulli_numbers;
use crate::error::{Error, Result};
use crate::exactnum::{binomial, rat, rational_pow, Rational};

/// Default horizon for eigenspace checks.
pub const DEFAULT_HORIZON: usize = 48;

/// Anything that can produce exact terms a_k.
pub trait Sequence: Send + Sync {
    fn term(&self, k: i64) -> Result<Rational>;

    /// Human-readable identifier, stable across runs.
    fn label(&self) -> String;

    /// Terms a_lo..=a_hi.
    fn terms(&self, lo: i64, hi: i64) -> Result<Vec<Rational>> {
        (lo..=hi).map(|k| self.term(k)).collect()
    }

    /// Terms a_0..=a_n.
    fn prefix(&self, n: usize) -> Result<Vec<Rational>> {
        self.terms(0, n as i64)
    }
}

/// The named sequences accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    /// 0, 1, 1, 1, ...
    Step,
    Fibonacci,
    Lucas,
    /// 2^(-n)
    HalfPower,
    /// (-1)^n B_n
    SignedBernoulli,
    /// (n+1) C_n 4^(-n), which equals C(2n, n) 4^(-n)
    WeightedCatalan,
    /// (-1)^(n-1) (n|3)
    Legendre3Signed,
    /// 2^n - (-1)^n
    Power2Alt,
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::Step,
        Builtin::Fibonacci,
        Builtin::Lucas,
        Builtin::HalfPower,
        Builtin::SignedBernoulli,
        Builtin::WeightedCatalan,
        Builtin::Legendre3Signed,
        Builtin::Power2Alt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Step => "step",
            Builtin::Fibonacci => "fibonacci",
            Builtin::Lucas => "lucas",
            Builtin::HalfPower => "half_power",
            Builtin::SignedBernoulli => "signed_bernoulli",
            Builtin::WeightedCatalan => "weighted_catalan",
            Builtin::Legendre3Signed => "legendre3_signed",
            Builtin::Power2Alt => "power2_alt",
        }
    }

    /// The eigenspace each builtin belongs to.
    pub fn expected_class(&self) -> Eigen {
        match self {
            Builtin::HalfPower
            | Builtin::Lucas
            | Builtin::SignedBernoulli
            | Builtin::WeightedCatalan => Eigen::Plus,
            Builtin::Step
            | Builtin::Fibonacci
            | Builtin::Legendre3Signed
            | Builtin::Power2Alt => Eigen::Minus,
        }
    }

    fn term_nonneg(&self, n: u64) -> Rational {
        let int = |v: BigInt| Rational::from_integer(v);
        match self {
            Builtin::Step => rat(i64::from(n > 0)),
            Builtin::Fibonacci => int(lucas_pair(n).0),
            Builtin::Lucas => int(lucas_pair(n).1),
            Builtin::HalfPower => Rational::new(BigInt::one(), BigInt::one() << n),
            Builtin::SignedBernoulli => {
                let b = bernoulli_numbers(n as usize).values()[n as usize].clone();
                if n % 2 == 0 {
                    b
                } else {
                    -b
                }
            }
            Builtin::WeightedCatalan => {
                Rational::new(binomial(2 * n, n), BigInt::one() << (2 * n))
            }
            Builtin::Legendre3Signed => {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                rat(sign * legendre3(n as i64))
            }
            Builtin::Power2Alt => {
                let alt = if n % 2 == 0 { 1 } else { -1 };
                int((BigInt::one() << n) - alt)
            }
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .iter()
            .copied()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnknownSequence(s.to_string()))
    }
}

/// (F_n, L_n) by iteration.
fn lucas_pair(n: u64) -> (BigInt, BigInt) {
    let (mut f0, mut f1) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let f2 = &f0 + &f1;
        f0 = std::mem::replace(&mut f1, f2);
    }
    // L_n = F_{n-1} + F_{n+1} = 2 F_{n+1} - F_n
    let l = (&f1 << 1) - &f0;
    (f0, l)
}

/// Legendre symbol (k|3): 0, 1, -1 for k = 0, 1, 2 mod 3.
pub fn legendre3(k: i64) -> i64 {
    match k.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// A builtin sequence or a member of the second-order family.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    Builtin(Builtin),
    /// a_0 = 0, a_1 = a1, a_{k+1} = a_k + c a_{k-1}.
    SecondOrder { c: i64, a1: Rational },
}

impl SequenceSpec {
    pub fn second_order(c: i64) -> Self {
        SequenceSpec::SecondOrder { c, a1: rat(1) }
    }
}

impl From<Builtin> for SequenceSpec {
    fn from(b: Builtin) -> Self {
        SequenceSpec::Builtin(b)
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Builtin(b) => f.write_str(b.name()),
            SequenceSpec::SecondOrder { c, a1 } => write!(f, "second_order:{c}:{a1}"),
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    /// Builtin names, or `second_order:C` / `second_order:C:A1` with integer C
    /// and rational A1 (e.g. `3/2`).
    fn from_str(s: &str) -> Result<Self> {
        let Some(rest) = s.strip_prefix("second_order:") else {
            return s.parse::<Builtin>().map(SequenceSpec::Builtin);
        };
        let bad = || Error::UnknownSequence(s.to_string());
        let mut parts = rest.split(':');
        let c = parts
            .next()
            .and_then(|c| c.parse::<i64>().ok())
            .ok_or_else(bad)?;
        let a1 = match parts.next() {
            Some(a1) => a1.parse::<Rational>().map_err(|_| bad())?,
            None => rat(1),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(SequenceSpec::SecondOrder { c, a1 })
    }
}

impl Sequence for SequenceSpec {
    fn term(&self, k: i64) -> Result<Rational> {
        match self {
            SequenceSpec::Builtin(b) => {
                if k < 0 {
                    return Err(Error::NegativeIndex {
                        name: b.name().to_string(),
                        index: k,
                    });
                }
                Ok(b.term_nonneg(k as u64))
            }
            SequenceSpec::SecondOrder { c, a1 } => {
                Ok(second_order_terms(*c, a1, k, k)?.remove(0))
            }
        }
    }

    fn label(&self) -> String {
        self.to_string()
    }

    fn terms(&self, lo: i64, hi: i64) -> Result<Vec<Rational>> {
        match self {
            SequenceSpec::SecondOrder { c, a1 } => second_order_terms(*c, a1, lo, hi),
            SequenceSpec::Builtin(Builtin::SignedBernoulli) if lo >= 0 && hi >= lo => {
                let cache = bernoulli_numbers(hi as usize);
                Ok(cache.values()[lo as usize..=hi as usize]
                    .iter()
                    .enumerate()
                    .map(|(i, b)| if (lo as usize + i) % 2 == 0 { b.clone() } else { -b })
                    .collect())
            }
            _ => (lo..=hi).map(|k| self.term(k)).collect(),
        }
    }
}

/// Terms a_{k_min}..=a_{k_max} of the recurrence a_0 = 0, a_1 = a1,
/// a_{k+1} = a_k + c a_{k-1}, with a_{-k} = -a_k (-c)^(-k) for negative indices.
pub fn second_order_terms(c: i64, a1: &Rational, k_min: i64, k_max: i64) -> Result<Vec<Rational>> {
    if k_min > k_max {
        return Err(Error::InvalidArgument(format!(
            "empty index range {k_min}..={k_max}"
        )));
    }
    if k_min < 0 && c == 0 {
        return Err(Error::ZeroCNegativeIndex);
    }
    let top = k_max.max(k_min.unsigned_abs() as i64).max(1) as usize;
    let c_rat = rat(c);
    let mut forward = Vec::with_capacity(top + 1);
    forward.push(Rational::zero());
    forward.push(a1.clone());
    for k in 1..top {
        let next = &forward[k] + &c_rat * &forward[k - 1];
        forward.push(next);
    }
    let neg_c = rat(-c);
    Ok((k_min..=k_max)
        .map(|k| {
            if k >= 0 {
                forward[k as usize].clone()
            } else {
                let j = k.unsigned_abs() as usize;
                -&forward[j] * rational_pow(&neg_c, -(j as i64))
            }
        })
        .collect())
}

/// (T a)_n = sum_k C(n, k) (-1)^k a_k, computed as (-1)^n times the n-th
/// forward difference at 0 so it works over any exact scalar.
pub fn binomial_transform_prefix<T: crate::scalar::Scalar>(a: &[T]) -> Vec<T> {
    let mut row: Vec<T> = a.to_vec();
    let mut out = Vec::with_capacity(a.len());
    for n in 0..a.len() {
        let head = row[0].clone();
        out.push(if n % 2 == 0 { head } else { -head });
        for i in 0..row.len() - 1 {
            row[i] = row[i + 1].clone() - row[i].clone();
        }
        row.pop();
    }
    out
}

/// Eigenvalue of the binomial transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Eigen {
    Plus,
    Minus,
    Neither,
}

impl fmt::Display for Eigen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Eigen::Plus => "plus",
            Eigen::Minus => "minus",
            Eigen::Neither => "neither",
        })
    }
}

/// Result of an eigenspace check up to `horizon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenClass {
    pub class: Eigen,
    pub horizon: usize,
}

/// Classifies an exact prefix a_0..a_N. The zero prefix lies in both
/// eigenspaces and is reported as `Plus`.
pub fn classify_prefix(a: &[Rational]) -> EigenClass {
    let t = binomial_transform_prefix(a);
    let class = if t == a {
        Eigen::Plus
    } else if t.iter().zip(a).all(|(x, y)| *x == -y) {
        Eigen::Minus
    } else {
        Eigen::Neither
    };
    EigenClass {
        class,
        horizon: a.len().saturating_sub(1),
    }
}

pub fn classify_eigenspace(a: &dyn Sequence, horizon: usize) -> Result<EigenClass> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    Ok(classify_prefix(&a.prefix(horizon)?))
}

/// Whether T(a)_n = sign * a_n for 0 <= n <= horizon.
pub fn in_eigenspace(a: &dyn Sequence, sign: Eigen, horizon: usize) -> Result<bool> {
    let prefix = a.prefix(horizon)?;
    let t = binomial_transform_prefix(&prefix);
    Ok(match sign {
        Eigen::Plus => t == prefix,
        Eigen::Minus => t.iter().zip(&prefix).all(|(x, y)| *x == -y),
        Eigen::Neither => false,
    })
}

/// The map a_n -> n a_{n-1}, on the prefix 0..=horizon.
pub fn shift_weight_map(a: &dyn Sequence, horizon: usize) -> Result<Vec<Rational>> {
    let prev = a.prefix(horizon.saturating_sub(1))?;
    let mut out = vec![Rational::zero()];
    out.extend(
        prev.into_iter()
            .enumerate()
            .take(horizon)
            .map(|(i, v)| v * rat(i as i64 + 1)),
    );
    Ok(out)
}

/// x + y sqrt(d) in Q[t]/(t^2 - d).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExt {
    pub x: Rational,
    pub y: Rational,
    pub d: i64,
}

impl QuadExt {
    pub fn new(x: Rational, y: Rational, d: i64) -> Self {
        QuadExt { x, y, d }
    }

    pub fn from_rational(x: Rational, d: i64) -> Self {
        QuadExt::new(x, Rational::zero(), d)
    }

    /// x^2 - d y^2
    pub fn norm(&self) -> Rational {
        &self.x * &self.x - rat(self.d) * &self.y * &self.y
    }

    pub fn conj(&self) -> Self {
        QuadExt::new(self.x.clone(), -&self.y, self.d)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(QuadExt::new(c.x / &n, c.y / n, self.d))
    }

    /// Signed power; `None` when a negative power of a zero divisor is asked for.
    pub fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut acc = QuadExt::from_rational(Rational::one(), self.d);
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            sq = sq.clone() * sq;
            e >>= 1;
        }
        Some(acc)
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        debug_assert_eq!(self.d, o.d);
        QuadExt::new(self.x + o.x, self.y + o.y, self.d)
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        debug_assert_eq!(self.d, o.d);
        QuadExt::new(self.x - o.x, self.y - o.y, self.d)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.x, -self.y, self.d)
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        debug_assert_eq!(self.d, o.d);
        let d = rat(self.d);
        QuadExt::new(
            &self.x * &o.x + d * &self.y * &o.y,
            &self.x * &o.y + &self.y * &o.x,
            self.d,
        )
    }
}

/// Closed form of the second-order family: with delta = 1 + 4c and
/// w± = (1 ± sqrt(delta))/2, sqrt(delta) a_k = a1 (w+^k - w-^k).
///
/// The minus sign is the one consistent with a_1 = a1; a plus sign would give
/// a_1 = 1/sqrt(delta).
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormData {
    pub c: i64,
    pub delta: i64,
}

impl ClosedFormData {
    pub fn new(c: i64) -> Self {
        ClosedFormData { c, delta: 1 + 4 * c }
    }

    pub fn w_plus(&self) -> QuadExt {
        QuadExt::new(Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into()), self.delta)
    }

    pub fn w_minus(&self) -> QuadExt {
        self.w_plus().conj()
    }

    /// w+ + w- = 1 and w+ w- = -c, exactly.
    pub fn check_relations(&self) -> bool {
        let one = QuadExt::from_rational(Rational::one(), self.delta);
        let minus_c = QuadExt::from_rational(rat(-self.c), self.delta);
        self.w_plus() + self.w_minus() == one && self.w_plus() * self.w_minus() == minus_c
    }

    /// w+^k - w-^k, i.e. sqrt(delta) a_k for a1 = 1.
    pub fn sqrt_delta_term(&self, k: i64) -> Result<QuadExt> {
        let wp = self.w_plus().pow(k).ok_or(Error::ZeroCNegativeIndex)?;
        let wm = self.w_minus().pow(k).ok_or(Error::ZeroCNegativeIndex)?;
        Ok(wp - wm)
    }

    /// a_k recovered from the closed form: w+^k - w-^k = y sqrt(delta) has
    /// zero rational part, so a_k = y a1.
    pub fn term(&self, k: i64, a1: &Rational) -> Result<Rational> {
        let s = self.sqrt_delta_term(k)?;
        debug_assert!(s.x.is_zero());
        Ok(s.y * a1)
    }
}

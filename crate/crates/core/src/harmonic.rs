//! Multiple harmonic sums H_r^(j), the weighted sums S_j and the restricted
//! power sums over residue classes mod 6.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::bernoulli::bernoulli_difference_mod;
use crate::exactnum::{fractional_part, Rational, Residue, Ring};
use crate::scalar::Scalar;
use crate::seqalg::Sequence;

/// H_r^(j) for 0 <= r <= p-1 and 0 <= j <= j_max, with H_r^(0) = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicTable<T> {
    p: u64,
    j_max: usize,
    rows: Vec<Vec<T>>,
}

fn unit_inverse<T: Scalar>(one: &T, k: u64) -> Result<T> {
    one.from_i64_like(k as i64)
        .try_inv()
        .ok_or_else(|| Error::InvalidArgument(format!("{k} is not invertible in the scalar ring")))
}

impl<T: Scalar> HarmonicTable<T> {
    /// Fills the table by H_r^(j) = H_{r-1}^(j) + H_{r-1}^(j-1) / r. The
    /// scalar `one` fixes the ring for residue tables.
    pub fn build(p: u64, j_max: usize, one: T) -> Result<Self> {
        if p < 2 || j_max as u64 > p - 1 {
            return Err(Error::InvalidArgument(format!(
                "harmonic table needs 0 <= j_max <= p - 1 (p = {p}, j_max = {j_max})"
            )));
        }
        let zero = one.zero_like();
        let mut first = vec![zero; j_max + 1];
        first[0] = one.clone();
        let mut rows = Vec::with_capacity(p as usize);
        rows.push(first);
        for r in 1..p {
            let inv = unit_inverse(&one, r)?;
            let prev = &rows[r as usize - 1];
            let mut row = Vec::with_capacity(j_max + 1);
            row.push(one.clone());
            for j in 1..=j_max {
                row.push(prev[j].clone() + prev[j - 1].clone() * inv.clone());
            }
            rows.push(row);
        }
        Ok(HarmonicTable { p, j_max, rows })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn max_order(&self) -> usize {
        self.j_max
    }

    /// H_r^(j); `None` outside the table.
    pub fn get(&self, r: u64, j: usize) -> Option<&T> {
        self.rows.get(r as usize).and_then(|row| row.get(j))
    }
}

impl HarmonicTable<Rational> {
    pub fn exact(p: u64, j_max: usize) -> Result<Self> {
        HarmonicTable::build(p, j_max, Rational::one())
    }
}

/// Tail sums E_k^(j) = sum over k < i_1 < ... < i_j < p of 1/(i_1 ... i_j),
/// indexed [k][j] for 0 <= k <= p-1.
pub fn tail_sums<T: Scalar>(p: u64, j_max: usize, one: T) -> Result<Vec<Vec<T>>> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("p = {p} is too small")));
    }
    let zero = one.zero_like();
    let mut rows = vec![vec![zero; j_max + 1]; p as usize];
    rows[p as usize - 1][0] = one.clone();
    for k in (0..p - 1).rev() {
        let inv = unit_inverse(&one, k + 1)?;
        let mut row = Vec::with_capacity(j_max + 1);
        row.push(one.clone());
        for j in 1..=j_max {
            let next = &rows[k as usize + 1];
            row.push(next[j].clone() + next[j - 1].clone() * inv.clone());
        }
        rows[k as usize] = row;
    }
    Ok(rows)
}

type TableKey = (u64, usize, u32);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<HarmonicTable<Residue>>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<HarmonicTable<Residue>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Residue table over Z/p^e, cached per (p, j_max, e).
pub fn harmonic_table(p: u64, j_max: usize, e: u32) -> Result<Arc<HarmonicTable<Residue>>> {
    let key = (p, j_max, e);
    if let Some(t) = table_cache().lock().expect("harmonic cache poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    // Built outside the lock; a racing builder produces an identical table.
    let ring = Ring::new(p, e)?;
    let table = Arc::new(HarmonicTable::build(p, j_max, ring.one())?);
    let mut cache = table_cache().lock().expect("harmonic cache poisoned");
    Ok(Arc::clone(cache.entry(key).or_insert(table)))
}

/// S_j = sum_{k=1}^{p-1} H_{k-1}^(j-1) a_{p-k} / k in Z/p^e, which equals the
/// depth-j nested sum of a_{p-k_j} / (k_1 ... k_j).
pub fn weighted_sum_s(a: &dyn Sequence, j: usize, p: u64, e: u32) -> Result<Residue> {
    let ring = Ring::new(p, e)?;
    if j == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    if j as u64 >= p {
        return Ok(ring.zero());
    }
    let table = harmonic_table(p, j - 1, e)?;
    let terms = a.terms(1, p as i64 - 1)?;
    let mut acc = ring.zero();
    for k in 1..p {
        let h = *table.get(k - 1, j - 1).expect("index inside table");
        if h.is_zero() {
            continue;
        }
        let a_val = ring.reduce(&terms[(p - k) as usize - 1])?;
        acc = acc + h * a_val * ring.from_u64(k).inverse()?;
    }
    Ok(acc)
}

/// Bounds under which literal enumeration is permitted.
pub const BRUTE_FORCE_MAX_PRIME: u64 = 31;
pub const BRUTE_FORCE_MAX_DEPTH: usize = 5;

/// Sums `f(k_1, ..., k_n)` over every 0 < k_1 < ... < k_n < p.
pub fn enumerate_nested<F>(p: u64, n: usize, mut f: F) -> Result<Rational>
where
    F: FnMut(&[u64]) -> Result<Rational>,
{
    if n == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    if n as u64 >= p {
        return Ok(Rational::zero());
    }
    if p > BRUTE_FORCE_MAX_PRIME || n > BRUTE_FORCE_MAX_DEPTH {
        return Err(Error::SizeGuard { p, n });
    }
    let mut acc = Rational::zero();
    for tuple in (1..p).combinations(n) {
        acc += f(&tuple)?;
    }
    Ok(acc)
}

/// 1 / (k_1 ... k_n) for the given indices.
pub fn reciprocal_product(ks: &[u64]) -> Rational {
    let prod = ks.iter().fold(BigInt::one(), |acc, &k| acc * BigInt::from(k));
    Rational::new(BigInt::one(), prod)
}

/// Literal sum over 0 < k_1 < ... < k_n < p of a_{p-k_n} / (k_1 ... k_n).
pub fn nested_sum_bruteforce(a: &dyn Sequence, n: usize, p: u64) -> Result<Rational> {
    enumerate_nested(p, n, |ks| {
        let last = *ks.last().expect("non-empty tuple");
        Ok(a.term((p - last) as i64)? * reciprocal_product(ks))
    })
}

/// sum over 1 <= k <= p-1, k = r (mod 6), of k^(-n), mod p.
pub fn restricted_power_sum(p: u64, n: u32, r: u64) -> Result<Residue> {
    let bound = (n as u64 + 1).max(3);
    if p <= bound {
        return Err(Error::PrimeTooSmall { p, bound });
    }
    if r > 5 {
        return Err(Error::InvalidArgument(format!("residue class {r} is not in 0..=5")));
    }
    let ring = Ring::new(p, 1)?;
    (1..p).filter(|k| k % 6 == r).try_fold(ring.zero(), |acc, k| {
        Ok(acc + ring.from_u64(k).inverse()?.pow(n as u64))
    })
}

/// The Bernoulli-polynomial form of the restricted sum:
/// (1/(n 6^n)) (B_{p-n}({r/6}) - B_{p-n}({(r-p)/6})) mod p.
pub fn restricted_power_sum_bernoulli(p: u64, n: u32, r: u64) -> Result<Residue> {
    let bound = (n as u64 + 1).max(3);
    if p <= bound {
        return Err(Error::PrimeTooSmall { p, bound });
    }
    if r > 5 {
        return Err(Error::InvalidArgument(format!("residue class {r} is not in 0..=5")));
    }
    let ring = Ring::new(p, 1)?;
    let six = BigInt::from(6);
    let x = fractional_part(&Rational::new(BigInt::from(r), six.clone()));
    let y = fractional_part(&Rational::new(BigInt::from(r as i64 - p as i64), six.clone()));
    let scale = Rational::new(BigInt::one(), BigInt::from(n) * num_traits::pow(six, n as usize));
    let diff = bernoulli_difference_mod((p - n as u64) as usize, &x, &y, p)?;
    Ok(ring.reduce(&scale)? * diff)
}

/// sum_{k=1}^{p-1} k^(-n) mod p.
pub fn power_sum(p: u64, n: u32) -> Result<Residue> {
    let ring = Ring::new(p, 1)?;
    (1..p).try_fold(ring.zero(), |acc, k| Ok(acc + ring.from_u64(k).inverse()?.pow(n as u64)))
}

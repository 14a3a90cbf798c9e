//! One verifier per congruence. Each computes its two sides along separate
//! routes and returns both residues in a [`CongruenceReport`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bernoulli::{bernoulli_poly_eval, bernoulli_value_mod};
use crate::error::{Error, Result};
use crate::exactnum::{binomial_signed, rat, ratio, Rational, Residue, Ring};
use crate::harmonic::{harmonic_table, tail_sums, weighted_sum_s};
use crate::seqalg::{in_eigenspace, legendre3, Eigen, Sequence, SequenceSpec, DEFAULT_HORIZON};

/// Which result a report checks. The wire ids are the command-line names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// The exact binomial identity satisfied by every -1 eigenvector.
    MinusIdentity,
    /// Depth-n nested sum against p(n+1)/2 times the depth-(n+1) sum, mod p^3.
    DepthReduction,
    /// S_{2i-1} = 0 (mod p) and S_{2i-1} = i p S_{2i} (mod p^3).
    SParity,
    /// The four mod-p vanishing statements.
    Vanishing,
    /// G_n(x) = (-1)^(n-1) g_n(1-x) over Z/p.
    PolynomialReflection,
    /// Reduction of the nested sum for second-order recurrences.
    RecurrenceReduction,
    /// The Legendre-symbol sum expressed through B_m(1/3).
    LegendreBernoulli,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::MinusIdentity,
        TheoremId::DepthReduction,
        TheoremId::SParity,
        TheoremId::Vanishing,
        TheoremId::PolynomialReflection,
        TheoremId::RecurrenceReduction,
        TheoremId::LegendreBernoulli,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            TheoremId::MinusIdentity => "lemma-2.1",
            TheoremId::DepthReduction => "thm-1.1",
            TheoremId::SParity => "s-parity",
            TheoremId::Vanishing => "cor-1.2",
            TheoremId::PolynomialReflection => "lemma-3.1",
            TheoremId::RecurrenceReduction => "thm-3.2",
            TheoremId::LegendreBernoulli => "thm-3.3",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem `{s}`")))
    }
}

/// Which of the four vanishing sums to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// sum a_{p-k_n} / (k_1 ... k_n), a in the -1 eigenspace
    MinusHead,
    /// sum a_{k_1} / (k_1 ... k_n), a in the -1 eigenspace
    MinusTail,
    /// sum a_{p-k_n-1} / (k_1 ... k_{n-1}), a in the +1 eigenspace
    PlusHead,
    /// sum a_{k_1-1} / (k_2 ... k_n), a in the +1 eigenspace
    PlusTail,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::MinusHead,
        Variant::MinusTail,
        Variant::PlusHead,
        Variant::PlusTail,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Variant::MinusHead => "minus_head",
            Variant::MinusTail => "minus_tail",
            Variant::PlusHead => "plus_head",
            Variant::PlusTail => "plus_tail",
        }
    }

    pub fn eigenspace(&self) -> Eigen {
        match self {
            Variant::MinusHead | Variant::MinusTail => Eigen::Minus,
            Variant::PlusHead | Variant::PlusTail => Eigen::Plus,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .iter()
            .copied()
            .find(|v| v.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variant `{s}`")))
    }
}

/// One side of a checked statement.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Residue(Residue),
    /// An identity over Q.
    Exact(Rational),
    /// Coefficients c_0, c_1, ... of a polynomial over Z/p.
    Poly(Vec<Residue>),
}

impl Value {
    /// p^e for residues, p for polynomials, 0 for exact values.
    pub fn modulus(&self) -> u64 {
        match self {
            Value::Residue(r) => r.modulus(),
            Value::Poly(c) => c.first().map_or(0, Residue::modulus),
            Value::Exact(_) => 0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Residue(r) => write!(f, "{}", r.value()),
            Value::Exact(q) => write!(f, "{q}"),
            Value::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|r| r.value().to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Parameters of one check; absent ones are `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Params {
    pub n: Option<u64>,
    pub p: Option<u64>,
    pub e: Option<u32>,
    pub c: Option<i64>,
    pub m: Option<u64>,
    pub i: Option<u64>,
    pub variant: Option<Variant>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceReport {
    pub theorem: TheoremId,
    pub sequence: String,
    pub params: Params,
    pub lhs: Value,
    pub rhs: Value,
    pub pass: bool,
    /// First coefficient index where two polynomials differ.
    pub mismatch: Option<usize>,
}

impl CongruenceReport {
    /// Builds a report; `pass` is set to `lhs == rhs`.
    pub fn new(theorem: TheoremId, sequence: String, params: Params, lhs: Value, rhs: Value) -> Self {
        let pass = lhs == rhs;
        let mismatch = match (&lhs, &rhs) {
            (Value::Poly(a), Value::Poly(b)) => {
                a.iter().zip(b).position(|(x, y)| x != y).or_else(|| {
                    (a.len() != b.len()).then(|| a.len().min(b.len()))
                })
            }
            _ => None,
        };
        CongruenceReport {
            theorem,
            sequence,
            params,
            lhs,
            rhs,
            pass,
            mismatch,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.lhs.modulus()
    }
}

fn require_odd(n: usize) -> Result<()> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::EvenDepth(n));
    }
    Ok(())
}

fn require_prime_above(p: u64, bound: u64) -> Result<()> {
    if p <= bound {
        return Err(Error::PrimeTooSmall { p, bound });
    }
    Ring::new(p, 1).map(|_| ())
}

fn require_minus(a: &dyn Sequence, horizon: usize) -> Result<()> {
    if in_eigenspace(a, Eigen::Minus, horizon.max(DEFAULT_HORIZON))? {
        Ok(())
    } else {
        Err(Error::NotInvariantMinus(a.label()))
    }
}

/// sum_{k=0}^{n} [C((m-1)n+k-1, k) + (-1)^(n-k) C(mn, k)] a_{n-k} = 0 over Q.
pub fn verify_minus_identity(a: &dyn Sequence, m: u64, n: u64) -> Result<CongruenceReport> {
    require_minus(a, n as usize)?;
    let terms = a.prefix(n as usize)?;
    let (mi, ni) = (m as i64, n as i64);
    let mut acc = Rational::zero();
    for k in 0..=ni {
        let first = binomial_signed((mi - 1) * ni + k - 1, k as u64);
        let second = binomial_signed(mi * ni, k as u64);
        let coeff = if (ni - k) % 2 == 0 { first + second } else { first - second };
        acc += Rational::from_integer(coeff) * &terms[(ni - k) as usize];
    }
    let params = Params {
        n: Some(n),
        m: Some(m),
        ..Params::default()
    };
    Ok(CongruenceReport::new(
        TheoremId::MinusIdentity,
        a.label(),
        params,
        Value::Exact(acc),
        Value::Exact(Rational::zero()),
    ))
}

/// sum a_{p-k_n}/(k_1...k_n) = p(n+1)/2 sum a_{p-k_{n+1}}/(k_1...k_{n+1}) mod p^3,
/// for odd n, p > n+1 and a in the -1 eigenspace.
pub fn verify_depth_reduction(a: &dyn Sequence, n: usize, p: u64) -> Result<CongruenceReport> {
    require_odd(n)?;
    require_prime_above(p, n as u64 + 1)?;
    require_minus(a, n + 1)?;
    let ring = Ring::new(p, 3)?;
    let lhs = weighted_sum_s(a, n, p, 3)?;
    let deeper = weighted_sum_s(a, n + 1, p, 3)?;
    let rhs = ring.from_u64(p * (n as u64 + 1) / 2) * deeper;
    let params = Params {
        n: Some(n as u64),
        p: Some(p),
        e: Some(3),
        ..Params::default()
    };
    Ok(CongruenceReport::new(
        TheoremId::DepthReduction,
        a.label(),
        params,
        Value::Residue(lhs),
        Value::Residue(rhs),
    ))
}

/// S_{2i-1} against i p S_{2i} mod p^3; passes only when S_{2i-1} also
/// vanishes mod p (implied by the first, checked separately).
pub fn verify_s_parity(a: &dyn Sequence, i: u64, p: u64) -> Result<CongruenceReport> {
    if i == 0 {
        return Err(Error::InvalidArgument("index i must be >= 1".into()));
    }
    require_prime_above(p, 2 * i + 1)?;
    require_minus(a, 2 * i as usize)?;
    let ring = Ring::new(p, 3)?;
    let odd = weighted_sum_s(a, 2 * i as usize - 1, p, 3)?;
    let even = weighted_sum_s(a, 2 * i as usize, p, 3)?;
    let rhs = ring.from_u64(i * p) * even;
    let params = Params {
        i: Some(i),
        p: Some(p),
        e: Some(3),
        ..Params::default()
    };
    let mut report = CongruenceReport::new(
        TheoremId::SParity,
        a.label(),
        params,
        Value::Residue(odd),
        Value::Residue(rhs),
    );
    report.pass &= odd.project(1)?.is_zero();
    Ok(report)
}

/// The four mod-p vanishing sums for odd n and p > n+1.
pub fn verify_vanishing(
    a: &dyn Sequence,
    n: usize,
    p: u64,
    variant: Variant,
) -> Result<CongruenceReport> {
    require_odd(n)?;
    require_prime_above(p, n as u64 + 1)?;
    let space = variant.eigenspace();
    if !in_eigenspace(a, space, (n + 1).max(DEFAULT_HORIZON))? {
        return Err(Error::EigenspaceMismatch {
            sequence: a.label(),
            expected: if space == Eigen::Plus { "+1" } else { "-1" },
        });
    }
    let lhs = vanishing_sum(a, n, p, variant)?;
    let ring = Ring::new(p, 1)?;
    let params = Params {
        n: Some(n as u64),
        p: Some(p),
        e: Some(1),
        variant: Some(variant),
        ..Params::default()
    };
    Ok(CongruenceReport::new(
        TheoremId::Vanishing,
        a.label(),
        params,
        Value::Residue(lhs),
        Value::Residue(ring.zero()),
    ))
}

/// The selected variant's sum mod p, collapsed onto one free index.
fn vanishing_sum(a: &dyn Sequence, n: usize, p: u64, variant: Variant) -> Result<Residue> {
    let ring = Ring::new(p, 1)?;
    if variant == Variant::MinusHead {
        return weighted_sum_s(a, n, p, 1);
    }
    if n as u64 >= p {
        return Ok(ring.zero());
    }
    let terms = a.prefix(p as usize - 1)?;
    let term = |idx: u64| ring.reduce(&terms[idx as usize]);
    let mut acc = ring.zero();
    match variant {
        Variant::MinusHead => unreachable!(),
        Variant::MinusTail => {
            // k = k_1; the remaining indices form a tail sum over (k, p).
            let tails = tail_sums(p, n - 1, ring.one())?;
            for k in 1..p {
                acc = acc + term(k)? * ring.from_u64(k).inverse()? * tails[k as usize][n - 1];
            }
        }
        Variant::PlusHead => {
            // k = k_n; k_1...k_{n-1} below k give H_{k-1}^(n-1).
            let head = harmonic_table(p, n - 1, 1)?;
            for k in 1..p {
                let h = *head.get(k - 1, n - 1).expect("inside table");
                acc = acc + term(p - k - 1)? * h;
            }
        }
        Variant::PlusTail => {
            let tails = tail_sums(p, n - 1, ring.one())?;
            for k in 1..p {
                acc = acc + term(k - 1)? * tails[k as usize][n - 1];
            }
        }
    }
    Ok(acc)
}

/// Coefficients of G_n(x) = sum_{k=1}^{p-1} H_{k-1}^(n-1) x^k / k over Z/p.
pub fn harmonic_generating_poly(n: usize, p: u64) -> Result<Vec<Residue>> {
    let ring = Ring::new(p, 1)?;
    let table = harmonic_table(p, n - 1, 1)?;
    let mut coeffs = vec![ring.zero(); p as usize];
    for k in 1..p {
        coeffs[k as usize] = *table.get(k - 1, n - 1).expect("inside table") * ring.from_u64(k).inverse()?;
    }
    Ok(coeffs)
}

/// Coefficients of (-1)^(n-1) g_n(1-x), g_n(x) = sum_{k=1}^{p-1} x^k / k^n,
/// expanded by the binomial theorem over Z/p.
pub fn reflected_power_poly(n: usize, p: u64) -> Result<Vec<Residue>> {
    let ring = Ring::new(p, 1)?;
    let mut coeffs = vec![ring.zero(); p as usize];
    // Pascal row C(k, j) mod p, advanced once per k.
    let mut pascal = vec![ring.zero(); p as usize];
    pascal[0] = ring.one();
    for k in 1..p as usize {
        for j in (1..=k).rev() {
            pascal[j] = pascal[j] + pascal[j - 1];
        }
        let weight = ring.from_u64(k as u64).inverse()?.pow(n as u64);
        for (j, c) in pascal.iter().enumerate().take(k + 1) {
            let signed = if j % 2 == 0 { *c } else { -*c };
            coeffs[j] = coeffs[j] + signed * weight;
        }
    }
    if n % 2 == 0 {
        for c in coeffs.iter_mut() {
            *c = -*c;
        }
    }
    Ok(coeffs)
}

/// G_n(x) = (-1)^(n-1) g_n(1-x) coefficient-wise mod p, for p > n+1.
pub fn verify_polynomial_reflection(n: usize, p: u64) -> Result<CongruenceReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("order n must be >= 1".into()));
    }
    require_prime_above(p, n as u64 + 1)?;
    let lhs = harmonic_generating_poly(n, p)?;
    let rhs = reflected_power_poly(n, p)?;
    let params = Params {
        n: Some(n as u64),
        p: Some(p),
        e: Some(1),
        ..Params::default()
    };
    Ok(CongruenceReport::new(
        TheoremId::PolynomialReflection,
        "-".to_string(),
        params,
        Value::Poly(lhs),
        Value::Poly(rhs),
    ))
}

/// Nested sum for the recurrence with a_1 = 1 against
/// -p(n+1) sum_{k<=(p-1)/2} c^k a_{p-2k}/k^(n+1) mod p^2 (n odd) or
/// -2 sum_{k<=(p-1)/2} c^k a_{p-2k}/k^n mod p (n even).
pub fn verify_recurrence_reduction(c: i64, n: usize, p: u64) -> Result<CongruenceReport> {
    verify_recurrence_reduction_scaled(c, &rat(1), n, p)
}

/// As [`verify_recurrence_reduction`] with an arbitrary a_1.
pub fn verify_recurrence_reduction_scaled(
    c: i64,
    a1: &Rational,
    n: usize,
    p: u64,
) -> Result<CongruenceReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("depth n must be >= 1".into()));
    }
    require_prime_above(p, n as u64 + 1)?;
    let seq = SequenceSpec::SecondOrder { c, a1: a1.clone() };
    let odd = n % 2 == 1;
    let e = if odd { 2 } else { 1 };
    let ring = Ring::new(p, e)?;
    let lhs = weighted_sum_s(&seq, n, p, e)?;

    let terms = seq.prefix(p as usize)?;
    let power = if odd { n + 1 } else { n } as u64;
    let c_res = ring.from_i64(c);
    let mut sum = ring.zero();
    for k in 1..=(p - 1) / 2 {
        let a = ring.reduce(&terms[(p - 2 * k) as usize])?;
        sum = sum + c_res.pow(k) * a * ring.from_u64(k).inverse()?.pow(power);
    }
    let factor = if odd {
        ring.from_i64(-((p * (n as u64 + 1)) as i64))
    } else {
        ring.from_i64(-2)
    };
    let params = Params {
        n: Some(n as u64),
        p: Some(p),
        e: Some(e),
        c: Some(c),
        ..Params::default()
    };
    Ok(CongruenceReport::new(
        TheoremId::RecurrenceReduction,
        seq.label(),
        params,
        Value::Residue(lhs),
        Value::Residue(factor * sum),
    ))
}

/// a_k = (-1)^(p-k) (k|3), so that a_{p-k} = (-1)^k ((p-k)|3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Legendre3Twisted {
    pub p: u64,
}

impl Sequence for Legendre3Twisted {
    fn term(&self, k: i64) -> Result<Rational> {
        let sign = if (self.p as i64 - k).rem_euclid(2) == 0 { 1 } else { -1 };
        Ok(rat(sign * legendre3(k)))
    }

    fn label(&self) -> String {
        "legendre3_twisted".to_string()
    }
}

/// Right-hand side of the Legendre-symbol congruence as a residue mod p^2
/// (n odd) or mod p (n even).
pub fn legendre_bernoulli_rhs(n: usize, p: u64) -> Result<Residue> {
    let third = ratio(1, 3);
    let two_pow = BigInt::from(1) << (n + 1);
    let six_pow = |k: usize| num_traits::pow(BigInt::from(6), k);
    if n % 2 == 1 {
        let ring = Ring::new(p, 2)?;
        let coeff = -Rational::new(two_pow + 2, six_pow(n + 1));
        let value = coeff * rat(p as i64) * bernoulli_poly_eval(p as usize - n - 1, &third);
        ring.reduce(&value)
    } else {
        let ring = Ring::new(p, 1)?;
        let coeff = -Rational::new(two_pow + 4, BigInt::from(n) * six_pow(n));
        Ok(ring.reduce(&coeff)? * bernoulli_value_mod(p as usize - n, &third, p)?)
    }
}

/// sum ((p-k_n)|3) (-1)^(k_n) / (k_1...k_n) against the B_m(1/3) closed form,
/// for p > max(n+1, 3).
pub fn verify_legendre_bernoulli(n: usize, p: u64) -> Result<CongruenceReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("depth n must be >= 1".into()));
    }
    require_prime_above(p, (n as u64 + 1).max(3))?;
    let e = if n % 2 == 1 { 2 } else { 1 };
    let seq = Legendre3Twisted { p };
    let lhs = weighted_sum_s(&seq, n, p, e)?;
    let rhs = legendre_bernoulli_rhs(n, p)?;
    let params = Params {
        n: Some(n as u64),
        p: Some(p),
        e: Some(e),
        ..Params::default()
    };
    Ok(CongruenceReport::new(
        TheoremId::LegendreBernoulli,
        seq.label(),
        params,
        Value::Residue(lhs),
        Value::Residue(rhs),
    ))
}

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use invsum::bernoulli::{bernoulli_numbers, bernoulli_poly_eval, check_bernoulli_identities};
use invsum::centralfact::{central_factorial_t, coefficient_matrix, row_reduce};
use invsum::congruence::{
    verify_depth_reduction, verify_legendre_bernoulli, verify_minus_identity,
    verify_polynomial_reflection, verify_recurrence_reduction, verify_s_parity, verify_vanishing,
    Value, Variant,
};
use invsum::exactnum::{mod_reduce, primes_in, rat, ratio, Rational};
use invsum::harmonic::{
    nested_sum_bruteforce, restricted_power_sum, restricted_power_sum_bernoulli, weighted_sum_s,
};
use invsum::seqalg::classify_eigenspace;
use invsum::{Builtin, Eigen, Residue, SequenceSpec};

type Check = fn() -> Result<String, String>;

const PLUS: [Builtin; 4] = [
    Builtin::HalfPower,
    Builtin::Lucas,
    Builtin::SignedBernoulli,
    Builtin::WeightedCatalan,
];
const MINUS: [Builtin; 4] = [
    Builtin::Step,
    Builtin::Fibonacci,
    Builtin::Legendre3Signed,
    Builtin::Power2Alt,
];

fn seqs(list: &[Builtin]) -> Vec<SequenceSpec> {
    list.iter().map(|&b| SequenceSpec::from(b)).collect()
}

fn residue(v: &Value) -> Result<Residue, String> {
    match v {
        Value::Residue(r) => Ok(*r),
        other => Err(format!("expected a residue, got {other}")),
    }
}

/// Collects failures and reports how many cells were checked.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) -> Result<String, String> {
        if self.failures.is_empty() {
            return Ok(format!("{} cells", self.checked));
        }
        let shown: Vec<&str> = self.failures.iter().take(24).map(String::as_str).collect();
        Err(format!(
            "{} of {} cells failed: {}{}",
            self.failures.len(),
            self.checked,
            shown.join("; "),
            if self.failures.len() > shown.len() { "; ..." } else { "" }
        ))
    }
}

fn within(start: Instant, limit: Duration, summary: String) -> Result<String, String> {
    let elapsed = start.elapsed();
    if elapsed > limit {
        Err(format!("{summary}, but took {elapsed:.2?} (limit {limit:?})"))
    } else {
        Ok(summary)
    }
}

fn eigenspace_roster() -> Result<String, String> {
    let start = Instant::now();
    let mut t = Tally::default();
    for (list, want) in [(PLUS, Eigen::Plus), (MINUS, Eigen::Minus)] {
        for a in seqs(&list) {
            let got = classify_eigenspace(&a, 48).map_err(|e| e.to_string())?;
            t.check(got.class == want && got.horizon == 48, || format!("{a}: {}", got.class));
        }
    }
    within(start, Duration::from_secs(5), t.finish()?)
}

fn minus_identity() -> Result<String, String> {
    let mut list = seqs(&MINUS);
    list.extend((-3..=3).map(SequenceSpec::second_order));
    let mut t = Tally::default();
    for a in &list {
        for m in 0..=8 {
            for n in 0..=24 {
                let r = verify_minus_identity(a, m, n).map_err(|e| format!("{a} m={m} n={n}: {e}"))?;
                t.check(r.pass && r.lhs == Value::Exact(rat(0)), || format!("{a} m={m} n={n}: {}", r.lhs));
            }
        }
    }
    t.finish()
}

fn depth_reduction() -> Result<String, String> {
    let start = Instant::now();
    let mut t = Tally::default();
    for a in seqs(&MINUS) {
        for n in [1usize, 3, 5, 7] {
            for p in primes_in(n as u64 + 2, 199) {
                let r = verify_depth_reduction(&a, n, p).map_err(|e| format!("{a} n={n} p={p}: {e}"))?;
                let modulus_ok = r.modulus() == p.pow(3);
                t.check(r.pass && modulus_ok, || format!("{a} n={n} p={p}"));
            }
        }
    }
    within(start, Duration::from_secs(60), t.finish()?)
}

fn s_parity() -> Result<String, String> {
    let mut t = Tally::default();
    for a in seqs(&MINUS) {
        for i in 1..=4u64 {
            for p in primes_in(2 * i + 2, 199) {
                let r = verify_s_parity(&a, i, p).map_err(|e| format!("{a} i={i} p={p}: {e}"))?;
                let odd = residue(&r.lhs)?;
                let vanishes = odd.project(1).map_err(|e| e.to_string())?.is_zero();
                t.check(r.pass && r.lhs == r.rhs && vanishes, || format!("{a} i={i} p={p}"));
            }
        }
    }
    t.finish()
}

fn vanishing() -> Result<String, String> {
    let plus = seqs(&[Builtin::HalfPower, Builtin::WeightedCatalan, Builtin::SignedBernoulli]);
    let minus = seqs(&MINUS);
    let mut t = Tally::default();
    for v in Variant::ALL {
        let list = if v.eigenspace() == Eigen::Minus { &minus } else { &plus };
        for a in list {
            for n in [1usize, 3, 5] {
                for p in primes_in(n as u64 + 2, 101) {
                    let r = verify_vanishing(a, n, p, v).map_err(|e| format!("{a} {v} n={n} p={p}: {e}"))?;
                    let zero = residue(&r.lhs)?.is_zero();
                    t.check(r.pass && zero && r.modulus() == p, || format!("{a} {v} n={n} p={p}"));
                }
            }
        }
    }
    t.finish()
}

fn polynomial_reflection() -> Result<String, String> {
    let mut t = Tally::default();
    for n in 1..=6usize {
        for p in primes_in(n as u64 + 2, 101) {
            let r = verify_polynomial_reflection(n, p).map_err(|e| format!("n={n} p={p}: {e}"))?;
            t.check(r.pass, || format!("n={n} p={p} first mismatch at x^{:?}", r.mismatch));
        }
    }
    t.finish()
}

fn spot(c: i64, n: usize, p: u64, want: u64, modulus: u64) -> Result<(), String> {
    let r = verify_recurrence_reduction(c, n, p).map_err(|e| e.to_string())?;
    let (l, h) = (residue(&r.lhs)?, residue(&r.rhs)?);
    if l.value() == want && h.value() == want && l.modulus() == modulus {
        Ok(())
    } else {
        Err(format!("(c={c}, n={n}, p={p}) gave {l} / {h} mod {}", l.modulus()))
    }
}

fn recurrence_reduction() -> Result<String, String> {
    spot(1, 2, 7, 2, 7)?;
    spot(-1, 2, 5, 2, 5)?;
    let mut t = Tally::default();
    for c in -3i64..=3 {
        for n in 1..=6usize {
            for p in primes_in(n as u64 + 2, 101) {
                let r = verify_recurrence_reduction(c, n, p).map_err(|e| format!("c={c} n={n} p={p}: {e}"))?;
                let want = if n % 2 == 1 { p * p } else { p };
                t.check(r.pass && r.modulus() == want, || {
                    format!("c={c} n={n} p={p}: {} vs {} mod {}", r.lhs, r.rhs, r.modulus())
                });
            }
        }
    }
    t.finish()
}

fn legendre_bernoulli() -> Result<String, String> {
    for (n, p, want, modulus) in [(1usize, 5u64, 10u64, 25u64), (2, 5, 2, 5)] {
        let r = verify_legendre_bernoulli(n, p).map_err(|e| e.to_string())?;
        let (l, h) = (residue(&r.lhs)?, residue(&r.rhs)?);
        if l.value() != want || h.value() != want || l.modulus() != modulus {
            return Err(format!("(n={n}, p={p}) gave {l} / {h} mod {}", l.modulus()));
        }
    }
    let mut t = Tally::default();
    for n in 1..=6usize {
        for p in primes_in((n as u64 + 1).max(3) + 1, 199) {
            let r = verify_legendre_bernoulli(n, p).map_err(|e| format!("n={n} p={p}: {e}"))?;
            t.check(r.pass, || format!("n={n} p={p}: {} vs {}", r.lhs, r.rhs));
        }
    }
    t.finish()
}

fn matrices() -> Result<String, String> {
    let display: [[i64; 8]; 5] = [
        [1, -1, 1, -1, 1, -1, 1, -1],
        [3, -3, 9, -15, 33, -63, 129, -255],
        [5, -5, 35, -65, 275, -665, 2315, -6305],
        [7, -7, 91, -175, 1267, -3367, 18571, -58975],
        [9, -9, 189, -369, 4149, -11529, 94509, -325089],
    ];
    let reduced: [[i64; 8]; 5] = [
        [1, -1, 1, -1, 1, -1, 1, -1],
        [0, 0, 1, -2, 5, -10, 21, -42],
        [0, 0, 0, 0, 1, -3, 14, -42],
        [0, 0, 0, 0, 0, 0, 1, -4],
        [0, 0, 0, 0, 0, 0, 0, 0],
    ];
    let m = coefficient_matrix(5, 8).map_err(|e| e.to_string())?;
    let r = row_reduce(&m);
    let mut t = Tally::default();
    for i in 0..5 {
        for j in 0..8 {
            t.check(m.get(i, j) == &rat(display[i][j]), || format!("M[{i}][{j}] = {}", m.get(i, j)));
            t.check(r.get(i, j) == &rat(reduced[i][j]), || format!("R[{i}][{j}] = {}", r.get(i, j)));
        }
    }
    t.finish()
}

fn triangle() -> Result<String, String> {
    let mut t = Tally::default();
    for i in 1..=12u64 {
        for j in 1..i {
            let v = central_factorial_t(i, 2 * j as u32);
            t.check(v == rat(0), || format!("t({i},{}) = {v}", 2 * j));
        }
        let d = central_factorial_t(i, 2 * i as u32);
        t.check(d == rat(1), || format!("t({i},{}) = {d}", 2 * i));
    }
    let r = row_reduce(&coefficient_matrix(4, 16).map_err(|e| e.to_string())?);
    for i in 1..=4usize {
        for j in 1..=8usize {
            let v = central_factorial_t(i as u64, 2 * j as u32);
            let pair = (r.get(i - 1, 2 * j - 2), r.get(i - 1, 2 * j - 1));
            let want = (v.clone(), -rat(i as i64) * &v);
            t.check(pair == (&want.0, &want.1), || format!("row {i}, pair {j}: {pair:?}"));
        }
    }
    t.finish()
}

fn oracle_equivalence() -> Result<String, String> {
    let mut t = Tally::default();
    let mut both_defined = 0;
    for b in Builtin::ALL {
        let a = SequenceSpec::from(b);
        for p in primes_in(2, 13) {
            for n in 1..=4usize {
                let brute = nested_sum_bruteforce(&a, n, p);
                for e in 1..=3u32 {
                    let fast = weighted_sum_s(&a, n, p, e);
                    let slow = brute.as_ref().map_err(Clone::clone).and_then(|q| mod_reduce(q, p, e));
                    let agree = match (&slow, &fast) {
                        (Ok(x), Ok(y)) => {
                            both_defined += 1;
                            x == y
                        }
                        (Err(_), Err(_)) => true,
                        _ => false,
                    };
                    t.check(agree, || format!("{b} n={n} p={p} e={e}: {slow:?} vs {fast:?}"));
                }
            }
        }
    }
    t.finish().map(|s| format!("{s}, {both_defined} with both sides defined"))
}

fn bernoulli_suite() -> Result<String, String> {
    let cache = bernoulli_numbers(30);
    let mut t = Tally::default();
    t.check(cache.get(12) == Some(&ratio(-691, 2730)), || "B_12".into());
    t.check(cache.get(1) == Some(&ratio(-1, 2)), || "B_1".into());
    for m in (3..=29).step_by(2) {
        t.check(cache.get(m) == Some(&rat(0)), || format!("B_{m} != 0"));
    }
    for k in 1..=15u64 {
        let m = 2 * k;
        let want: num_bigint::BigInt = primes_in(2, m + 1)
            .into_iter()
            .filter(|q| m % (q - 1) == 0)
            .map(num_bigint::BigInt::from)
            .product();
        let b = cache.get(m as usize).expect("cached");
        t.check(b.denom() == &want, || format!("denominator of B_{m} is {}", b.denom()));
    }
    let xs = [rat(0), ratio(1, 6), ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(2, 3), ratio(5, 6)];
    for m in 0..=30 {
        for a in 1..=6 {
            for x in &xs {
                t.check(check_bernoulli_identities(m, a, x), || format!("identities m={m} a={a} x={x}"));
            }
        }
    }
    for m in (3..=29).step_by(2) {
        let third = bernoulli_poly_eval(m, &ratio(1, 3));
        let sixth = bernoulli_poly_eval(m, &ratio(1, 6));
        let scale = rat(1) + Rational::new(1.into(), num_bigint::BigInt::from(1) << (m - 1));
        t.check(bernoulli_poly_eval(m, &rat(0)) == rat(0), || format!("B_{m}(0)"));
        t.check(bernoulli_poly_eval(m, &ratio(1, 2)) == rat(0), || format!("B_{m}(1/2)"));
        t.check(bernoulli_poly_eval(m, &ratio(2, 3)) == -third.clone(), || format!("B_{m}(2/3)"));
        t.check(bernoulli_poly_eval(m, &ratio(5, 6)) == -sixth.clone(), || format!("B_{m}(5/6)"));
        t.check(sixth == scale * third, || format!("B_{m}(1/6)"));
    }
    t.finish()
}

fn restricted_sums() -> Result<String, String> {
    let mut t = Tally::default();
    for n in 1..=4u32 {
        for p in primes_in((n as u64 + 1).max(3) + 1, 101) {
            for r in 0..=5 {
                let direct = restricted_power_sum(p, n, r).map_err(|e| e.to_string())?;
                let closed = restricted_power_sum_bernoulli(p, n, r).map_err(|e| e.to_string())?;
                t.check(direct == closed, || format!("n={n} p={p} r={r}: {direct} vs {closed}"));
            }
        }
    }
    t.finish()
}

fn sweep_bytes(jobs: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_invsum"))
        .args([
            "sweep",
            "--theorem",
            "all",
            "--sequence",
            "step,fibonacci,half_power,second_order:2:3/2",
            "--n",
            "1..4",
            "--primes",
            "2..37",
            "--m",
            "0..3",
            "--format",
            "json",
            "--jobs",
            jobs,
        ])
        .output()
        .map_err(|e| e.to_string())?;
    match out.status.code() {
        Some(0 | 1) => Ok(out.stdout),
        code => Err(format!("exit {code:?}: {}", String::from_utf8_lossy(&out.stderr))),
    }
}

fn determinism() -> Result<String, String> {
    let one = sweep_bytes("1")?;
    let eight = sweep_bytes("8")?;
    let again = sweep_bytes("8")?;
    if one == eight && eight == again {
        Ok(format!("{} identical bytes", one.len()))
    } else {
        Err("sweep output differs between --jobs 1 and --jobs 8".into())
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 14] = [
        ("eigenspace roster", eigenspace_roster),
        ("minus-space identity", minus_identity),
        ("depth reduction mod p^3", depth_reduction),
        ("S-parity chain", s_parity),
        ("four vanishing sums", vanishing),
        ("polynomial reflection", polynomial_reflection),
        ("second-order recurrence reduction", recurrence_reduction),
        ("Legendre-symbol Bernoulli congruence", legendre_bernoulli),
        ("matrix reproduction", matrices),
        ("central factorial triangle", triangle),
        ("oracle equivalence", oracle_equivalence),
        ("Bernoulli suite", bernoulli_suite),
        ("restricted power sums", restricted_sums),
        ("sweep determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("[PASS] {:>2} {name} ({elapsed:.2?}): {detail}", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name} ({elapsed:.2?}): {detail}", idx + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use invsum::congruence::{
    verify_depth_reduction, verify_legendre_bernoulli, verify_minus_identity,
    verify_polynomial_reflection, verify_recurrence_reduction_scaled, verify_s_parity,
    verify_vanishing, CongruenceReport, TheoremId, Variant,
};
use invsum::exactnum::{primes_in, rat};
use invsum::{Error, SequenceSpec};

use crate::error::CliError;
use crate::report::Format;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub theorems: Vec<TheoremId>,
    pub sequences: Vec<SequenceSpec>,
    /// Inclusive depth range. s-parity reads it as the index i.
    pub n: (u64, u64),
    /// Inclusive bounds; the primes inside are enumerated.
    pub primes: (u64, u64),
    /// Recurrence parameters for thm-3.2 (with a_1 = 1).
    pub c: Vec<i64>,
    /// Inclusive range of m for lemma-2.1, which has no prime.
    pub m: (u64, u64),
    pub variants: Vec<Variant>,
    pub jobs: usize,
    pub format: Format,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            theorems: Vec::new(),
            sequences: Vec::new(),
            n: (1, 1),
            primes: (5, 31),
            c: (-3..=3).collect(),
            m: (0, 8),
            variants: Variant::ALL.to_vec(),
            jobs: 1,
            format: Format::Text,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::ConfigInvalid(msg));
        let (lo, hi) = self.primes;
        if lo < 2 || hi < 2 {
            return bad(format!("prime bounds must be >= 2 (got {lo}..{hi})"));
        }
        if primes_in(lo, hi).is_empty() {
            return bad(format!("no primes in {lo}..{hi}"));
        }
        if self.n.0 < 1 || self.n.0 > self.n.1 {
            return bad(format!("n range {}..{} is empty or starts below 1", self.n.0, self.n.1));
        }
        if self.m.0 > self.m.1 {
            return bad(format!("m range {}..{} is empty", self.m.0, self.m.1));
        }
        if self.theorems.is_empty() {
            return bad("no theorem selected".into());
        }
        if self.sequences.is_empty() {
            return bad("no sequence selected".into());
        }
        if self.theorems.contains(&TheoremId::Vanishing) && self.variants.is_empty() {
            return bad("no variant selected".into());
        }
        if self.jobs == 0 {
            return bad("--jobs must be at least 1".into());
        }
        Ok(())
    }
}

/// One (theorem, sequence, parameters) point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub theorem: TheoremId,
    pub sequence: SequenceSpec,
    pub n: u64,
    pub p: u64,
    pub m: u64,
    pub variant: Variant,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} n={} p={}", self.theorem, self.sequence, self.n, self.p)
    }
}

/// Runs the verifier behind one cell. thm-3.2 reads c and a_1 from a
/// second-order sequence; lemma-3.1 and thm-3.3 ignore the sequence.
pub fn run_cell(cell: &Cell) -> invsum::Result<CongruenceReport> {
    let (a, n, p) = (&cell.sequence, cell.n as usize, cell.p);
    match cell.theorem {
        TheoremId::MinusIdentity => verify_minus_identity(a, cell.m, cell.n),
        TheoremId::DepthReduction => verify_depth_reduction(a, n, p),
        TheoremId::SParity => verify_s_parity(a, cell.n, p),
        TheoremId::Vanishing => verify_vanishing(a, n, p, cell.variant),
        TheoremId::PolynomialReflection => verify_polynomial_reflection(n, p),
        TheoremId::RecurrenceReduction => match a {
            SequenceSpec::SecondOrder { c, a1 } => verify_recurrence_reduction_scaled(*c, a1, n, p),
            _ => Err(Error::InvalidArgument(format!("{a} is not a second-order sequence"))),
        },
        TheoremId::LegendreBernoulli => verify_legendre_bernoulli(n, p),
    }
}

/// The error kinds that mean "hypotheses not met" rather than a failure.
fn skip_reason(e: &Error) -> Option<&'static str> {
    Some(match e {
        Error::PrimeTooSmall { .. } => "prime_too_small",
        Error::EvenDepth(_) => "even_depth",
        Error::NotInvariantMinus(_) => "not_minus_invariant",
        Error::EigenspaceMismatch { .. } => "eigenspace_mismatch",
        Error::DenominatorDivisibleByP { .. } => "denominator_divisible_by_p",
        Error::IndexTooLarge { .. } => "bernoulli_index_too_large",
        _ => return None,
    })
}

fn plan(config: &SweepConfig) -> Vec<Cell> {
    let primes = primes_in(config.primes.0, config.primes.1);
    let ns: Vec<u64> = (config.n.0..=config.n.1).collect();
    let placeholder = SequenceSpec::from(invsum::Builtin::Step);
    let mut cells = Vec::new();
    let mut push = |theorem, sequence: &SequenceSpec, n, p, m, variant| {
        cells.push(Cell {
            theorem,
            sequence: sequence.clone(),
            n,
            p,
            m,
            variant,
        })
    };
    for &theorem in &config.theorems {
        let sequences: Vec<SequenceSpec> = match theorem {
            TheoremId::PolynomialReflection | TheoremId::LegendreBernoulli => vec![placeholder.clone()],
            TheoremId::RecurrenceReduction => {
                let mut seqs: Vec<SequenceSpec> = config
                    .c
                    .iter()
                    .map(|&c| SequenceSpec::SecondOrder { c, a1: rat(1) })
                    .collect();
                for s in &config.sequences {
                    if matches!(s, SequenceSpec::SecondOrder { .. }) && !seqs.contains(s) {
                        seqs.push(s.clone());
                    }
                }
                seqs
            }
            _ => config.sequences.clone(),
        };
        for seq in &sequences {
            for &n in &ns {
                match theorem {
                    TheoremId::MinusIdentity => {
                        for m in config.m.0..=config.m.1 {
                            push(theorem, seq, n, 0, m, Variant::MinusHead);
                        }
                    }
                    TheoremId::Vanishing => {
                        for &p in &primes {
                            for &v in &config.variants {
                                push(theorem, seq, n, p, 0, v);
                            }
                        }
                    }
                    _ => {
                        for &p in &primes {
                            push(theorem, seq, n, p, 0, Variant::MinusHead);
                        }
                    }
                }
            }
        }
    }
    cells
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutcome {
    /// Sorted by (theorem, sequence, n, p, ...).
    pub reports: Vec<CongruenceReport>,
    /// Cells outside a theorem's hypotheses, by reason.
    pub skipped: BTreeMap<String, usize>,
}

impl SweepOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome, CliError> {
    config.validate()?;
    let cells = plan(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    let results: Vec<invsum::Result<CongruenceReport>> =
        pool.install(|| cells.par_iter().map(run_cell).collect());

    let mut outcome = SweepOutcome::default();
    for (cell, result) in cells.iter().zip(results) {
        match result {
            Ok(report) => outcome.reports.push(report),
            Err(e) => match skip_reason(&e) {
                Some(reason) => *outcome.skipped.entry(reason.to_string()).or_default() += 1,
                None => {
                    return Err(CliError::Cell {
                        cell: cell.to_string(),
                        source: e,
                    })
                }
            },
        }
    }
    outcome.reports.sort_by(|a, b| {
        (a.theorem, &a.sequence, &a.params).cmp(&(b.theorem, &b.sequence, &b.params))
    });
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(theorem: TheoremId, n: (u64, u64), primes: (u64, u64)) -> SweepConfig {
        SweepConfig {
            theorems: vec![theorem],
            sequences: vec!["step".parse().unwrap()],
            n,
            primes,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn depth_reduction_for_step() {
        let out = run_sweep(&config(TheoremId::DepthReduction, (1, 1), (5, 7))).unwrap();
        assert_eq!(out.reports.len(), 2);
        assert!(out.all_pass());
        assert_eq!(out.reports[0].params.p, Some(5));
        assert_eq!(out.reports[1].params.p, Some(7));
    }

    #[test]
    fn legendre_bernoulli_residues() {
        let out = run_sweep(&config(TheoremId::LegendreBernoulli, (1, 2), (5, 5))).unwrap();
        let got: Vec<(String, u64)> = out
            .reports
            .iter()
            .map(|r| (r.lhs.to_string(), r.modulus()))
            .collect();
        assert_eq!(got, vec![("10".to_string(), 25), ("2".to_string(), 5)]);
    }

    #[test]
    fn invalid_configs() {
        for primes in [(7, 5), (1, 1), (24, 28)] {
            let err = run_sweep(&config(TheoremId::DepthReduction, (1, 1), primes)).unwrap_err();
            assert!(matches!(err, CliError::ConfigInvalid(_)), "{primes:?}");
        }
        let mut c = config(TheoremId::DepthReduction, (1, 1), (5, 7));
        c.theorems.clear();
        assert!(matches!(run_sweep(&c), Err(CliError::ConfigInvalid(_))));
        assert!(run_sweep(&config(TheoremId::DepthReduction, (0, 1), (5, 7))).is_err());
    }

    #[test]
    fn hypothesis_violations_are_counted() {
        let out = run_sweep(&config(TheoremId::Vanishing, (1, 2), (2, 5))).unwrap();
        // n = 2 is even; p = 2 is too small for n = 1; step is not in S+.
        assert_eq!(out.skipped["even_depth"], 3 * 4);
        assert_eq!(out.skipped["prime_too_small"], 4);
        assert_eq!(out.skipped["eigenspace_mismatch"], 2 * 2);
        assert_eq!(out.reports.len(), 2 * 2);
    }

    #[test]
    fn recurrence_uses_c_list() {
        let mut c = config(TheoremId::RecurrenceReduction, (2, 2), (5, 7));
        c.c = vec![1, -1];
        let out = run_sweep(&c).unwrap();
        assert_eq!(out.reports.len(), 4);
        assert!(out.reports.iter().all(|r| r.lhs == r.rhs));
        assert_eq!(out.reports[0].sequence, "second_order:-1:1");
    }

    #[test]
    fn parallelism_does_not_change_output() {
        let mut c = config(TheoremId::DepthReduction, (1, 3), (5, 43));
        c.sequences.push("fibonacci".parse().unwrap());
        let one = run_sweep(&c).unwrap();
        c.jobs = 6;
        assert_eq!(run_sweep(&c).unwrap(), one);
    }
}

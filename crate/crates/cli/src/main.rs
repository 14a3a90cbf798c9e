use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use invsum::centralfact::{coefficient_matrix, row_reduce};
use invsum::congruence::{TheoremId, Variant};
use invsum::seqalg::{binomial_transform_prefix, classify_eigenspace, DEFAULT_HORIZON};
use invsum::{Builtin, Sequence, SequenceSpec};
use invsum_cli::{emit_report, emit_summary, run_cell, run_sweep, Cell, CliError, Format, SweepConfig};

#[derive(Parser)]
#[command(name = "invsum", version, about = "Checks nested harmonic-sum congruences exactly over primes and prime powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a single cell.
    Verify(VerifyArgs),
    /// Check every admissible cell of a parameter grid.
    Sweep(SweepArgs),
    /// Report the eigenspace of each sequence.
    Classify(ClassifyArgs),
    /// Print a prefix of a sequence and of its binomial transform.
    Transform(TransformArgs),
    /// Print the coefficient matrix and its row-reduced form.
    Matrix(MatrixArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    theorem: TheoremId,
    #[arg(long, default_value = "step")]
    sequence: SequenceSpec,
    /// Depth n (the index i for s-parity).
    #[arg(long, default_value_t = 1)]
    n: u64,
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Recurrence parameter for thm-3.2; overrides the sequence's own c.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, default_value = "minus_head")]
    variant: Variant,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated ids, or `all`.
    #[arg(long, value_delimiter = ',', required = true)]
    theorem: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "step")]
    sequence: Vec<SequenceSpec>,
    /// LO..HI or a single value.
    #[arg(long, default_value = "1", value_parser = parse_range::<u64>)]
    n: (u64, u64),
    #[arg(long, default_value = "5..31", value_parser = parse_range::<u64>)]
    primes: (u64, u64),
    /// Values of c for thm-3.2, as LO..HI or a single value.
    #[arg(long, default_value = "-3..3", allow_hyphen_values = true, value_parser = parse_range::<i64>)]
    c: (i64, i64),
    /// Range of m for lemma-2.1.
    #[arg(long, default_value = "0..8", value_parser = parse_range::<u64>)]
    m: (u64, u64),
    #[arg(long, value_delimiter = ',', default_value = "minus_head,minus_tail,plus_head,plus_tail")]
    variant: Vec<Variant>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Defaults to every builtin.
    #[arg(long, value_delimiter = ',')]
    sequence: Vec<SequenceSpec>,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    horizon: usize,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, default_value = "step")]
    sequence: SequenceSpec,
    /// Number of terms.
    #[arg(long, default_value_t = 12)]
    horizon: usize,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long, default_value_t = 5)]
    rows: usize,
    #[arg(long, default_value_t = 8)]
    cols: usize,
}

/// `LO..HI`, `LO..=HI` or a single value; both bounds inclusive.
fn parse_range<T: FromStr + Copy>(s: &str) -> Result<(T, T), String> {
    let one = |t: &str| t.trim().parse::<T>().map_err(|_| format!("bad bound `{t}` in `{s}`"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((one(lo)?, one(hi.strip_prefix('=').unwrap_or(hi))?)),
        None => one(s).map(|v| (v, v)),
    }
}

fn parse_theorems(ids: &[String]) -> Result<Vec<TheoremId>, CliError> {
    if ids.iter().any(|t| t == "all") {
        return Ok(TheoremId::ALL.to_vec());
    }
    let mut out = Vec::new();
    for id in ids {
        let t: TheoremId = id.parse()?;
        if !out.contains(&t) {
            out.push(t);
        }
    }
    Ok(out)
}

fn write_out(bytes: &[u8]) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(bytes);
    let _ = out.flush();
}

fn verify(args: VerifyArgs) -> Result<bool, CliError> {
    let sequence = match (args.c, args.sequence) {
        (Some(c), SequenceSpec::SecondOrder { a1, .. }) => SequenceSpec::SecondOrder { c, a1 },
        (Some(c), _) => SequenceSpec::second_order(c),
        (None, s) if args.theorem == TheoremId::RecurrenceReduction
            && !matches!(s, SequenceSpec::SecondOrder { .. }) =>
        {
            SequenceSpec::second_order(1)
        }
        (None, s) => s,
    };
    let cell = Cell {
        theorem: args.theorem,
        sequence,
        n: args.n,
        p: args.p,
        m: args.m,
        variant: args.variant,
    };
    let report = run_cell(&cell)?;
    write_out(&emit_report(std::slice::from_ref(&report), args.format));
    Ok(report.pass)
}

fn sweep(args: SweepArgs) -> Result<bool, CliError> {
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let config = SweepConfig {
        theorems: parse_theorems(&args.theorem)?,
        sequences: args.sequence,
        n: args.n,
        primes: args.primes,
        c: (args.c.0..=args.c.1).collect(),
        m: args.m,
        variants: args.variant,
        jobs,
        format: args.format,
    };
    if config.c.is_empty() {
        return Err(CliError::ConfigInvalid(format!("c range {}..{} is empty", args.c.0, args.c.1)));
    }
    let outcome = run_sweep(&config)?;
    write_out(&emit_report(&outcome.reports, config.format));
    let summary = emit_summary(&outcome.reports, &outcome.skipped, config.format);
    if config.format == Format::Csv {
        eprint!("{}", String::from_utf8_lossy(&summary));
    } else {
        write_out(&summary);
    }
    Ok(outcome.all_pass())
}

fn classify(args: ClassifyArgs) -> Result<bool, CliError> {
    let sequences = if args.sequence.is_empty() {
        Builtin::ALL.iter().map(|&b| SequenceSpec::from(b)).collect()
    } else {
        args.sequence
    };
    let width = sequences.iter().map(|s| s.label().len()).max().unwrap_or(0);
    let mut out = String::new();
    for s in &sequences {
        let class = classify_eigenspace(s, args.horizon)?;
        out.push_str(&format!("{:<width$}  {}\n", s.label(), class.class));
    }
    write_out(out.as_bytes());
    Ok(true)
}

fn transform(args: TransformArgs) -> Result<bool, CliError> {
    if args.horizon == 0 {
        return Err(CliError::ConfigInvalid("--horizon must be at least 1".into()));
    }
    let a = args.sequence.prefix(args.horizon - 1)?;
    let t = binomial_transform_prefix(&a);
    let join = |v: &[invsum::Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    write_out(format!("a    = [{}]\nT(a) = [{}]\n", join(&a), join(&t)).as_bytes());
    Ok(true)
}

fn matrix(args: MatrixArgs) -> Result<bool, CliError> {
    let m = coefficient_matrix(args.rows, args.cols)?;
    let reduced = row_reduce(&m);
    write_out(format!("{m}\n{reduced}").as_bytes());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a),
        Command::Classify(a) => classify(a),
        Command::Transform(a) => transform(a),
        Command::Matrix(a) => matrix(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

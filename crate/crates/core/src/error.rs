use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is divisible by p = {p}; the residue is undefined")]
    DenominatorDivisibleByP { p: u64 },
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("cannot combine residues mod {left} and mod {right}")]
    RingMismatch { left: u64, right: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent {0} is outside 1..=3")]
    ExponentOutOfRange(u32),
    #[error("modulus {p}^{e} does not fit in 64 bits")]
    ModulusOverflow { p: u64, e: u32 },
    #[error("negative indices need c != 0")]
    ZeroCNegativeIndex,
    #[error("sequence {name} is undefined at negative index {index}")]
    NegativeIndex { name: String, index: i64 },
    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),
    #[error("brute-force enumeration refused: needs p <= 31 and n <= 5 (got p = {p}, n = {n})")]
    SizeGuard { p: u64, n: usize },
    #[error("Bernoulli index {m} is too large for p = {p} (needs m <= p - 2)")]
    IndexTooLarge { m: usize, p: u64 },
    #[error("sequence {0} is not in the -1 eigenspace")]
    NotInvariantMinus(String),
    #[error("sequence {sequence} is not in the {expected} eigenspace")]
    EigenspaceMismatch { sequence: String, expected: &'static str },
    #[error("depth {0} must be odd")]
    EvenDepth(usize),
    #[error("prime {p} is too small: need p > {bound}")]
    PrimeTooSmall { p: u64, bound: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact-arithmetic verification of congruences for multiple harmonic-type
//! sums weighted by sequences that are eigenvectors of the binomial
//! transform.
//!
//! The numeric core is generic over [`scalar::Scalar`], which covers exact
//! rationals (`Ratio<T>` for any signed integer `T`, in particular `BigInt`)
//! and residues in Z/p^e. The aliases below fix the concrete types used by
//! the verifiers.

pub mod bernoulli;
pub mod centralfact;
pub mod congruence;
pub mod error;
pub mod exactnum;
pub mod harmonic;
pub mod scalar;
pub mod seqalg;

pub use error::{Error, Result};
pub use exactnum::{mod_inverse, mod_reduce, Rational, Residue, Ring};
pub use scalar::Scalar;
pub use seqalg::{Builtin, Eigen, EigenClass, Sequence, SequenceSpec};

/// Multiple harmonic sums held as exact rationals.
pub type ExactHarmonicTable = harmonic::HarmonicTable<Rational>;
/// Multiple harmonic sums reduced into Z/p^e.
pub type ResidueHarmonicTable = harmonic::HarmonicTable<Residue>;
/// Exact rational matrix.
pub type RationalMatrix = centralfact::Matrix<Rational>;
/// Matrix over Z/p^e.
pub type ResidueMatrix = centralfact::Matrix<Residue>;
/// Rationals with machine-width parts, for small hand-sized inputs.
pub type SmallRational = num_rational::Ratio<i128>;

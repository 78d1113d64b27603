//! Win-lose bimatrix games in which every well-supported approximate Nash
//! equilibrium needs large supports, together with the exact machinery that
//! certifies them.
//!
//! The pipeline runs from residue sets in `Z_q` whose differences cover the
//! group while short sums avoid zero, through Cayley digraphs and digraph
//! powers, to bipartite win-lose games; each stage emits a certificate that
//! can be re-verified from its own contents.
//!
//! Equilibrium code is generic over [`scalar::ExactScalar`]; the aliases
//! below fix the concrete rational types used by the CLI and certificates.

pub mod bitset;
pub mod cli;
pub mod digraph;
pub mod error;
pub mod formats;
pub mod game;
pub mod residues;
pub mod scalar;
pub mod wsne;

pub use digraph::{certify_kl, Digraph, Girth, KlCertificate, KlFailure, KlVerdict};
pub use error::{Error, Result};
pub use game::{CharWitness, Side, WinLoseGame};
pub use residues::{search_haight_set, HaightCertificate, ResidueSet, SearchMode, SearchOutcome, SearchSpec};
pub use scalar::ExactScalar;

/// Arbitrary-precision rational; the default scalar.
pub type Rational = num_rational::BigRational;

/// Machine-word rational for hot loops on small games.
pub type Rational64 = num_rational::Ratio<i64>;

pub type MixedStrategy = wsne::MixedStrategy<Rational>;
pub type WsneVerdict = wsne::WsneVerdict<Rational>;
pub type ExhaustiveOutcome = wsne::ExhaustiveOutcome<Rational>;
pub type Construction = wsne::Construction<Rational>;

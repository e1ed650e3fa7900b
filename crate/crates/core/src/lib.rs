//! Dirichlet L-series with real and complex characters, two-dimensional
//! lattice sums, and a catalog of closed forms linking the two.
//!
//! - [`chars`]: exact characters mod k, parity, conductors, listing labels.
//! - [`specfun`]: Bernoulli polynomials, Hurwitz zeta, Gamma, theta series.
//! - [`lseries`]: (k,l) symbols, L(s,χ), exact special values.
//! - [`sums`]: Q, S, σ and T lattice sums with tail bounds, theta–Mellin route.
//! - [`catalog`]: identity catalog, expression evaluator, verification drivers.

mod arith;
pub mod catalog;
pub mod chars;
pub mod error;
pub mod lseries;
pub mod specfun;
pub mod sums;

pub use arith::{euler_phi, gcd};
pub use chars::{
    character_by_label, enumerate_characters, kronecker_symbol, unit_group, CharValue,
    CharacterGroupStructure, DirichletCharacter, Parity, RootOfUnity,
};
pub use error::{Error, Result};
pub use lseries::{kl_symbol, l_series, ExactSpecialValue, KLSymbol, SignedKLSymbol};
pub use num_complex::Complex64;
pub use sums::{SumKind, SumResult, SumSpec, TailBound};

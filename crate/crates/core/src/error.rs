use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at s = {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degree {0} exceeds the Bernoulli cache (max 64)")]
    DegreeOverflow(usize),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("quadratic form ({a},{b},{c}) is not positive definite")]
    IndefiniteForm { a: i64, b: i64, c: i64 },
    #[error("direct summation needs Re(s) > 1, got {0}")]
    NonConvergent(f64),
    #[error("shell radius cap {cap} reached with tail bound {bound:e} above target {target:e}")]
    Budget { cap: u64, bound: f64, target: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("residue {l} is not coprime to {k}")]
    NonCoprime { k: u64, l: u64 },
    #[error("parity mismatch: {0}")]
    Parity(String),
    #[error("character is not real or not primitive")]
    NotRealPrimitive,
    #[error("no character matches label {0}")]
    UnresolvedLabel(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("s = {0} collides with a pole of the functional equation")]
    PoleCollision(String),
}

pub type Result<T> = std::result::Result<T, Error>;

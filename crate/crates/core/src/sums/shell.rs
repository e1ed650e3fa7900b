//! Square-shell summation over Z² with a deterministic reduction tree.
//!
//! Shell ρ holds the 8ρ points with max(|m|,|n|) = ρ. Each shell is summed
//! on its own (possibly in parallel), and the per-shell partials are then
//! combined by pairwise summation in shell order, so the result does not
//! depend on how many workers ran.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// x^{-s} with cheap paths for the exponents that dominate the catalog.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Power {
    Int(i32),
    HalfOdd(i32),
    Real(f64),
    Complex(Complex64),
}

impl Power {
    pub fn new(s: Complex64) -> Self {
        if s.im != 0.0 {
            Power::Complex(s)
        } else if s.re == s.re.round() && s.re.abs() < 64.0 {
            Power::Int(s.re as i32)
        } else if (2.0 * s.re) == (2.0 * s.re).round() && s.re.abs() < 64.0 {
            Power::HalfOdd((s.re - 0.5) as i32)
        } else {
            Power::Real(s.re)
        }
    }

    /// Real part of the exponent.
    pub fn sigma(self) -> f64 {
        match self {
            Power::Int(k) => k as f64,
            Power::HalfOdd(k) => k as f64 + 0.5,
            Power::Real(s) => s,
            Power::Complex(s) => s.re,
        }
    }

    pub fn is_real(self) -> bool {
        !matches!(self, Power::Complex(_))
    }

    /// x^{-s} for real s.
    #[inline(always)]
    pub fn real(self, x: f64) -> f64 {
        match self {
            Power::Int(k) => x.powi(-k),
            Power::HalfOdd(k) => 1.0 / (x.powi(k) * x.sqrt()),
            Power::Real(s) => x.powf(-s),
            Power::Complex(_) => unreachable!("complex exponent on the real path"),
        }
    }

    #[inline(always)]
    pub fn complex(self, x: f64) -> Complex64 {
        match self {
            Power::Complex(s) => (-s * x.ln()).exp(),
            _ => Complex64::new(self.real(x), 0.0),
        }
    }
}

/// Pairwise (cascade) summation in index order.
pub(crate) fn pairwise(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

/// Visit the points of shell `rho`.
#[inline(always)]
pub(crate) fn for_each_in_shell(rho: i64, mut f: impl FnMut(i64, i64)) {
    if rho == 0 {
        f(0, 0);
        return;
    }
    for n in -rho..=rho {
        f(rho, n);
        f(-rho, n);
    }
    for m in (-rho + 1)..rho {
        f(m, rho);
        f(m, -rho);
    }
}

pub(crate) struct ShellOutcome {
    pub value: Complex64,
    pub bound: f64,
    pub radius: u64,
    pub terms: u64,
}

/// Sum shells until `tail(R) ≤ tol·|S_R|`. `decay` is the exponent with
/// tail(R) ~ R^{-decay}, used only to guess how far to go next.
pub(crate) fn sum_until<F, T>(
    shell: F,
    tail: T,
    decay: f64,
    tol: f64,
    cap: u64,
) -> Result<ShellOutcome>
where
    F: Fn(i64) -> (Complex64, u64) + Sync,
    T: Fn(u64) -> f64,
{
    let mut partials: Vec<Complex64> = Vec::new();
    let mut terms = 0u64;
    let mut radius = 0u64;
    let mut next = 16.min(cap);
    loop {
        let chunk: Vec<(Complex64, u64)> =
            ((radius as i64 + if partials.is_empty() { 0 } else { 1 })..=next as i64)
                .into_par_iter()
                .map(&shell)
                .collect();
        for (v, t) in chunk {
            partials.push(v);
            terms += t;
        }
        radius = next;
        let value = pairwise(&partials);
        let bound = tail(radius);
        let target = tol * value.norm();
        if bound <= target {
            return Ok(ShellOutcome {
                value,
                bound,
                radius,
                terms,
            });
        }
        if radius >= cap {
            return Err(Error::Budget { cap, bound, target });
        }
        let ratio = if target > 0.0 { bound / target } else { 1e6 };
        let guess = (radius as f64 * ratio.powf(1.0 / decay) * 1.02).ceil();
        next = (guess.min(cap as f64) as u64).max(radius + 8).min(cap);
    }
}

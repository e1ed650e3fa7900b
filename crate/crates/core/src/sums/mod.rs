//! Two-dimensional lattice sums.
//!
//! - Q(a,b,c;s) = Σ' (am² + bmn + cn²)^{-s}
//! - S(p,r,j;s) = Σ [(m+p/j)² + (n+r/j)²]^{-s}
//! - σ(p,r,j;s) = Σ' e^{2πi(mp+nr)/j} (m²+n²)^{-s}
//! - T(r;s)     = Σ_{m²≠r²n²} |m² − r²n²|^{-s}
//!
//! Q, S and σ are summed over square shells with a proven tail bound for
//! Re s > 1. T is evaluated exactly through (k,l) symbols; its direct sum is
//! available but only carries an empirical error.

mod mellin;
mod shell;
mod t;

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

pub use mellin::{q_theta_mellin, s_sum_via_theta, QuadratureSpec};
pub use t::{t_direct, t_via_kl};

use crate::error::{Error, Result};
use shell::{for_each_in_shell, sum_until, Power};

/// Largest shell radius a direct sum may reach before giving up.
pub const DEFAULT_RADIUS_CAP: u64 = 40_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SumKind {
    Q { a: i64, b: i64, c: i64 },
    S { p: i64, r: i64, j: i64 },
    Sigma { p: i64, r: i64, j: i64 },
    T { r: i64 },
}

impl SumKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SumKind::Q { a, b, c } => {
                if a <= 0 || b * b - 4 * a * c >= 0 {
                    return Err(Error::IndefiniteForm { a, b, c });
                }
            }
            SumKind::S { p, r, j } | SumKind::Sigma { p, r, j } => {
                if j < 2 || !(0..=j).contains(&p) || !(0..=j).contains(&r) {
                    return Err(Error::Domain(format!(
                        "need 0 ≤ p,r ≤ j and j ≥ 2, got ({p},{r},{j})"
                    )));
                }
            }
            SumKind::T { r } => {
                if r < 1 {
                    return Err(Error::Domain(format!("T needs r ≥ 1, got {r}")));
                }
            }
        }
        Ok(())
    }

    /// Whether evaluation needs direct lattice summation (Re s > 1 only).
    pub fn is_direct(&self) -> bool {
        !matches!(self, SumKind::T { .. })
    }
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SumKind::Q { a, b, c } => write!(f, "Q({a},{b},{c})"),
            SumKind::S { p, r, j } => write!(f, "S({p},{r},{j})"),
            SumKind::Sigma { p, r, j } => write!(f, "sigma({p},{r},{j})"),
            SumKind::T { r } => write!(f, "T({r})"),
        }
    }
}

/// One lattice sum at one point s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumSpec {
    pub kind: SumKind,
    pub s: Complex64,
}

impl SumSpec {
    pub fn evaluate(&self, tol: f64) -> Result<SumResult> {
        let s = self.s;
        match self.kind {
            SumKind::Q { a, b, c } => q_sum(a, b, c, s, tol),
            SumKind::S { p, r, j } => s_sum(p, r, j, s, tol),
            SumKind::Sigma { p, r, j } => sigma_sum(p, r, j, s, tol),
            SumKind::T { r } => {
                let start = Instant::now();
                let value = t_via_kl(r as u64, s)?;
                Ok(SumResult {
                    value,
                    error: 1e-13 * value.norm(),
                    terms: 0,
                    radius: 0,
                    elapsed_secs: start.elapsed().as_secs_f64(),
                })
            }
        }
    }
}

/// A summed value with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumResult {
    pub value: Complex64,
    pub error: f64,
    pub terms: u64,
    pub radius: u64,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

/// Proven bound on the omitted shells beyond `radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBound {
    pub radius: u64,
    pub bound: f64,
    pub method: TailMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TailMethod {
    /// X ≥ λ_min (m²+n²) on each shell.
    Eigenvalue,
    /// X ≥ (ρ − ½)² after centring the offsets.
    CentredOffset,
}

/// Smallest eigenvalue of [[a, b/2], [b/2, c]].
pub fn lambda_min(a: i64, b: i64, c: i64) -> f64 {
    let (a, b, c) = (a as f64, b as f64, c as f64);
    0.5 * (a + c - ((a - c) * (a - c) + b * b).sqrt())
}

/// Σ_{ρ>R} 8ρ (λρ²)^{-σ} ≤ 8 λ^{-σ} R^{2−2σ} / (2σ−2).
pub fn q_tail_bound(a: i64, b: i64, c: i64, sigma: f64, radius: u64) -> TailBound {
    let lam = lambda_min(a, b, c);
    let r = radius as f64;
    TailBound {
        radius,
        bound: 8.0 * lam.powf(-sigma) * r.powf(2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0),
        method: TailMethod::Eigenvalue,
    }
}

/// Tail of Σ_{ρ>R} 8ρ (ρ−½)^{-2σ}, the bound for S once scaled by j^{2s}.
pub fn s_tail_bound(sigma: f64, radius: u64) -> TailBound {
    let x = radius as f64 - 0.5;
    let bound = 8.0 * x.powf(2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0)
        + 4.0 * x.powf(1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0);
    TailBound {
        radius,
        bound,
        method: TailMethod::CentredOffset,
    }
}

fn check_direct(s: Complex64, tol: f64) -> Result<()> {
    if s.re <= 1.0 {
        return Err(Error::NonConvergent(s.re));
    }
    if !(tol >= 1e-12) {
        return Err(Error::Domain(format!("tolerance {tol:e} below 1e-12")));
    }
    Ok(())
}

fn finish(out: shell::ShellOutcome, scale: Complex64, start: Instant) -> SumResult {
    SumResult {
        value: out.value * scale,
        error: out.bound * scale.norm(),
        terms: out.terms,
        radius: out.radius,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Q(a,b,c;s) to relative tolerance `tol`.
pub fn q_sum(a: i64, b: i64, c: i64, s: Complex64, tol: f64) -> Result<SumResult> {
    q_sum_capped(a, b, c, s, tol, DEFAULT_RADIUS_CAP)
}

pub fn q_sum_capped(a: i64, b: i64, c: i64, s: Complex64, tol: f64, cap: u64) -> Result<SumResult> {
    SumKind::Q { a, b, c }.validate()?;
    check_direct(s, tol)?;
    let start = Instant::now();
    let pw = Power::new(s);
    let sigma = pw.sigma();
    let shell = |rho: i64| {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut re = 0.0;
        let mut count = 0u64;
        for_each_in_shell(rho, |m, n| {
            let x = a * m * m + b * m * n + c * n * n;
            if x == 0 {
                return;
            }
            count += 1;
            if pw.is_real() {
                re += pw.real(x as f64);
            } else {
                acc += pw.complex(x as f64);
            }
        });
        (acc + re, count)
    };
    let tail = |r: u64| q_tail_bound(a, b, c, sigma, r).bound;
    let out = sum_until(shell, tail, 2.0 * sigma - 2.0, tol, cap)?;
    Ok(finish(out, Complex64::new(1.0, 0.0), start))
}

/// Offset reduced into (−j/2, j/2].
fn centre(p: i64, j: i64) -> i64 {
    let p = p.rem_euclid(j);
    if 2 * p > j {
        p - j
    } else {
        p
    }
}

fn j_pow(j: i64, s: Complex64) -> Complex64 {
    if s.im == 0.0 {
        Complex64::new((j as f64).powf(2.0 * s.re), 0.0)
    } else {
        (2.0 * s * (j as f64).ln()).exp()
    }
}

/// S(p,r,j;s) to relative tolerance `tol`.
pub fn s_sum(p: i64, r: i64, j: i64, s: Complex64, tol: f64) -> Result<SumResult> {
    s_sum_capped(p, r, j, s, tol, DEFAULT_RADIUS_CAP)
}

pub fn s_sum_capped(p: i64, r: i64, j: i64, s: Complex64, tol: f64, cap: u64) -> Result<SumResult> {
    SumKind::S { p, r, j }.validate()?;
    check_direct(s, tol)?;
    let start = Instant::now();
    let pw = Power::new(s);
    let sigma = pw.sigma();
    let (pc, rc) = (centre(p, j), centre(r, j));
    let shell = |rho: i64| {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut re = 0.0;
        let mut count = 0u64;
        for_each_in_shell(rho, |m, n| {
            let u = j * m + pc;
            let v = j * n + rc;
            let x = u * u + v * v;
            if x == 0 {
                return;
            }
            count += 1;
            if pw.is_real() {
                re += pw.real(x as f64);
            } else {
                acc += pw.complex(x as f64);
            }
        });
        (acc + re, count)
    };
    let scale = j_pow(j, s);
    // the bound is stated for the scaled sum; the kernel sums the unscaled one
    let tail = |rr: u64| s_tail_bound(sigma, rr).bound / scale.norm();
    let out = sum_until(shell, tail, 2.0 * sigma - 2.0, tol, cap)?;
    Ok(finish(out, scale, start))
}

/// σ(p,r,j;s) to relative tolerance `tol`.
pub fn sigma_sum(p: i64, r: i64, j: i64, s: Complex64, tol: f64) -> Result<SumResult> {
    sigma_sum_capped(p, r, j, s, tol, DEFAULT_RADIUS_CAP)
}

pub fn sigma_sum_capped(
    p: i64,
    r: i64,
    j: i64,
    s: Complex64,
    tol: f64,
    cap: u64,
) -> Result<SumResult> {
    SumKind::Sigma { p, r, j }.validate()?;
    check_direct(s, tol)?;
    let start = Instant::now();
    let pw = Power::new(s);
    let sigma = pw.sigma();
    let (p, r) = (p.rem_euclid(j), r.rem_euclid(j));
    let phases: Vec<Complex64> = (0..j)
        .map(|t| crate::chars::RootOfUnity::new(j as u32, t).to_complex())
        .collect();
    let shell = |rho: i64| {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut count = 0u64;
        for_each_in_shell(rho, |m, n| {
            let x = m * m + n * n;
            if x == 0 {
                return;
            }
            count += 1;
            let ph = phases[(m * p + n * r).rem_euclid(j) as usize];
            acc += ph * pw.complex(x as f64);
        });
        (acc, count)
    };
    let tail = |rr: u64| q_tail_bound(1, 0, 1, sigma, rr).bound;
    let out = sum_until(shell, tail, 2.0 * sigma - 2.0, tol, cap)?;
    Ok(finish(out, Complex64::new(1.0, 0.0), start))
}

//! Theta–Mellin route: Σ X^{-s} = Γ(s)^{-1} ∫₀^∞ t^{s−1} Σ e^{−tX} dt.
//!
//! The integral is taken in u = ln t with adaptive Gauss–Legendre panels
//! (each panel accepted once it agrees with its two halves). Near t = 0 the
//! theta series are summed directly; the interval below the lower cutoff is
//! dropped using the bound θ(e^{−t}) ≤ 1 + √(π/t), so no modular
//! transformation is involved.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{gamma_fn, theta_residue_t};

const NODES: usize = 16;
const MIN_T: f64 = 1e-14;

fn gauss_legendre() -> &'static ([f64; NODES], [f64; NODES]) {
    static GL: OnceLock<([f64; NODES], [f64; NODES])> = OnceLock::new();
    GL.get_or_init(|| {
        let n = NODES;
        let mut x = [0.0; NODES];
        let mut w = [0.0; NODES];
        for i in 0..n {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

/// Accuracy knobs for the Mellin integral.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    /// Relative target for the integral.
    pub tol: f64,
    /// Maximum bisection depth per panel.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        // the theta route is checked against direct sums at 1e-9
        QuadratureSpec {
            tol: 1e-10,
            max_depth: 40,
        }
    }
}

fn panel<F: Fn(f64) -> Result<Complex64>>(f: &F, a: f64, b: f64) -> Result<Complex64> {
    let (x, w) = gauss_legendre();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..NODES {
        acc += w[i] * f(mid + half * x[i])?;
    }
    Ok(acc * half)
}

fn adapt<F: Fn(f64) -> Result<Complex64>>(
    f: &F,
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m)?;
    let right = panel(f, m, b)?;
    let halves = left + right;
    if (halves - whole).norm() <= tol {
        return Ok(halves);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "panel [{a:.3}, {b:.3}] did not settle (difference {:.2e})",
            (halves - whole).norm()
        )));
    }
    Ok(adapt(f, a, m, left, 0.5 * tol, depth - 1)? + adapt(f, m, b, right, 0.5 * tol, depth - 1)?)
}

/// ∫₀^∞ t^{s−1} F(t) dt given F(t) ≤ c_small(t₀)/t on (0,t₀] for t₀ ≤ 1, and F
/// decaying at ∞.
fn mellin<F: Fn(f64) -> Result<f64>, C: Fn(f64) -> f64>(
    big_f: F,
    s: Complex64,
    c_small: C,
    spec: QuadratureSpec,
) -> Result<Complex64> {
    let sigma = s.re;
    let g = |u: f64| -> Result<Complex64> {
        let t = u.exp();
        Ok((s * u).exp() * big_f(t)?)
    };
    // upper end: walk out until t^σ F(t) is negligible against the scale near t = 1
    let scale = big_f(1.0)?.max(f64::MIN_POSITIVE);
    let mut hi: f64 = 1.0;
    while hi.powf(sigma) * big_f(hi)? > 1e-18 * scale {
        hi *= 1.5;
        if hi > 1e6 {
            return Err(Error::Quadrature("integrand does not decay".into()));
        }
    }
    // crude magnitude estimate, one panel per unit of u, for the absolute target
    let lo_guess = -20.0f64;
    let mut est = Complex64::new(0.0, 0.0);
    let mut u = lo_guess;
    while u < hi.ln() {
        let b = (u + 1.0).min(hi.ln());
        est += panel(&g, u, b)?;
        u = b;
    }
    let tol_abs = spec.tol * est.norm();
    // lower end: C t0^{σ−1}/(σ−1) ≤ tol_abs/4; C shrinks with t0, so iterate
    let mut t0 = 1.0f64;
    for _ in 0..4 {
        t0 = (tol_abs * (sigma - 1.0) / (4.0 * c_small(t0)))
            .powf(1.0 / (sigma - 1.0))
            .min(1.0);
    }
    if t0 < MIN_T {
        return Err(Error::Quadrature(format!(
            "lower cutoff {t0:.1e} below {MIN_T:.0e}; Re s too close to 1"
        )));
    }
    let (ua, ub) = (t0.ln(), hi.ln());
    let n_panels = ((ub - ua).ceil() as usize).max(1);
    let width = (ub - ua) / n_panels as f64;
    let per_panel = 0.5 * tol_abs / n_panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n_panels {
        let a = ua + i as f64 * width;
        let b = a + width;
        let whole = panel(&g, a, b)?;
        total += adapt(&g, a, b, whole, per_panel, spec.max_depth)?;
    }
    Ok(total)
}

fn theta_tail(j: u32, p: u32, t: f64) -> Result<f64> {
    let v = theta_residue_t(j, p, t)?;
    Ok(if p == 0 { v - 1.0 } else { v })
}

/// θ(j,0) − 1 computed without cancellation: 2Σ_{m≥1} e^{−t(jm)²}.
fn theta_zero_tail(j: u32, t: f64) -> Result<f64> {
    // θ(j,0)(t) = θ₃(e^{−j²t}); its tail is 2Σ_{n≥1} e^{−j²t n²}
    let tt = t * (j as f64) * (j as f64);
    let mut sum = 0.0;
    let mut n = 1.0f64;
    loop {
        let term = (-tt * n * n).exp();
        sum += term;
        if term < 1e-17 * sum || term == 0.0 {
            break;
        }
        n += 1.0;
        if n > 64.0 {
            // many terms only when tt is small; no cancellation there
            return theta_tail(j, 0, t);
        }
    }
    Ok(2.0 * sum)
}

/// Q(1,0,λ;s) = Γ(s)^{-1} ∫₀^∞ t^{s−1}[θ₃(e^{−t})θ₃(e^{−λt}) − 1] dt.
pub fn q_theta_mellin(lambda: u32, s: Complex64, spec: QuadratureSpec) -> Result<Complex64> {
    if lambda < 1 {
        return Err(Error::Domain("λ must be a positive integer".into()));
    }
    if s.re <= 1.0 {
        return Err(Error::NonConvergent(s.re));
    }
    let lam = lambda as f64;
    let f = |t: f64| -> Result<f64> {
        let a = theta_zero_tail(1, t)?;
        let b = theta_zero_tail(1, lam * t)?;
        Ok(a * b + a + b)
    };
    // θ₃(e^{−t}) − 1 ≤ √(π/t), so F ≤ [π/√λ + √π(1 + 1/√λ)√t₀]/t below t₀
    let c_small = |t0: f64| PI / lam.sqrt() + PI.sqrt() * (1.0 + 1.0 / lam.sqrt()) * t0.sqrt();
    Ok(mellin(f, s, c_small, spec)? / gamma_fn(s)?)
}

/// S(p,r,j;s) = j^{2s} Γ(s)^{-1} ∫₀^∞ t^{s−1}[θ(j,p)θ(j,r) − δ] dt, where δ = 1
/// exactly when both offsets are multiples of j.
pub fn s_sum_via_theta(
    p: i64,
    r: i64,
    j: i64,
    s: Complex64,
    spec: QuadratureSpec,
) -> Result<Complex64> {
    super::SumKind::S { p, r, j }.validate()?;
    if s.re <= 1.0 {
        return Err(Error::NonConvergent(s.re));
    }
    let (ju, pu, ru) = (j as u32, p.rem_euclid(j) as u32, r.rem_euclid(j) as u32);
    let f = |t: f64| -> Result<f64> {
        if pu == 0 && ru == 0 {
            let a = theta_zero_tail(ju, t)?;
            Ok(a * a + 2.0 * a)
        } else {
            Ok(theta_residue_t(ju, pu, t)? * theta_residue_t(ju, ru, t)?)
        }
    };
    let jf = j as f64;
    // a unimodal sum is at most its peak plus its integral: θ(j,p) ≤ 1 + √π/(j√t),
    // and θ(j,0) − 1 ≤ √π/(j√t)
    let zero = pu == 0 && ru == 0;
    let c_small = move |t0: f64| {
        let w = PI.sqrt() / jf;
        if zero {
            w * w + 2.0 * w * t0.sqrt()
        } else {
            (t0.sqrt() + w).powi(2)
        }
    };
    let scale = (2.0 * s * jf.ln()).exp();
    Ok(scale * mellin(f, s, c_small, spec)? / gamma_fn(s)?)
}

//! Hurwitz zeta by Euler–Maclaurin summation.
//!
//! ζ(s,a) = Σ_{n<N} (n+a)^{-s} + x^{1-s}/(s-1) + x^{-s}/2
//!          + Σ_{k=1}^{M} B_{2k}/(2k)! · (s)_{2k-1} · x^{-s-2k+1},   x = N + a,
//! where (s)_m is the rising factorial. The remainder after M terms is bounded
//! by the next term times |s+2M+1|/(Re s+2M+1).

use num_complex::Complex64;

use super::bernoulli::{scaled_even, BERNOULLI_CAP};
use crate::error::{Error, Result};

const TARGET: f64 = 1e-14;
const MAX_S: f64 = 60.0;

/// A Hurwitz value with its Euler–Maclaurin remainder bound and an estimate
/// of the rounding error, which dominates once Re s < 0 and the explicit head
/// terms cancel.
#[derive(Clone, Copy, Debug)]
pub struct HurwitzEval {
    pub value: Complex64,
    pub bound: f64,
    pub rounding: f64,
    pub shift: usize,
}

fn check(s: Complex64, a: f64) -> Result<()> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!(
            "Hurwitz parameter a = {a} outside (0,1]"
        )));
    }
    if !(s.re.is_finite() && s.im.is_finite()) || s.norm() > MAX_S {
        return Err(Error::Domain(format!(
            "|s| must be at most {MAX_S}, got {s}"
        )));
    }
    Ok(())
}

// Shifts tried in turn; the smallest one whose remainder bound meets the
// target wins, which keeps the head short when its terms grow (Re s < 0).
const SHIFTS: [usize; 14] = [1, 2, 3, 4, 6, 8, 11, 16, 23, 32, 45, 64, 90, 128];

/// Euler–Maclaurin with an explicit shift `n`. At s = 1 the pole term
/// x^{1-s}/(s-1) is replaced by its finite part −ln x, which gives the
/// constant term of the Laurent expansion, −ψ(a).
pub fn hurwitz_zeta_em(s: Complex64, a: f64, n: usize) -> Result<HurwitzEval> {
    check(s, a)?;
    let at_pole = s == Complex64::new(1.0, 0.0);
    let real = s.im == 0.0;
    let mut head = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for m in 0..n {
        let y = m as f64 + a;
        let t = if real {
            Complex64::new(y.powf(-s.re), 0.0)
        } else {
            (-s * y.ln()).exp()
        };
        mass += t.norm();
        head += t;
    }
    let x = n as f64 + a;
    let lx = x.ln();
    let x_s = (-s * lx).exp();
    let mut tail = if at_pole {
        Complex64::new(-lx, 0.0)
    } else {
        x_s * x / (s - 1.0)
    };
    tail += x_s * 0.5;
    mass += tail.norm();

    // term_k = B_{2k}/(2k)! (s)_{2k-1} x^{-s-2k+1}
    let inv_x2 = 1.0 / (x * x);
    let mut poch = s; // (s)_{2k-1}
    let mut xpow = x_s / x; // x^{-s-2k+1}
    let mut bound = f64::INFINITY;
    let mut prev = f64::INFINITY;
    for k in 1..BERNOULLI_CAP / 2 {
        let term = poch * xpow * scaled_even(k);
        let size = term.norm();
        // asymptotic series: stop before the terms start growing
        if size > prev {
            break;
        }
        tail += term;
        mass += size;
        let next_poch = poch * (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        let next = (next_poch * xpow * inv_x2 * scaled_even(k + 1)).norm();
        let d = s.re + (2 * k + 1) as f64;
        bound = if d > 0.0 {
            next * (s + (2 * k + 1) as f64).norm() / d
        } else {
            next * 10.0
        };
        let value = (head + tail).norm();
        if bound <= f64::EPSILON * 0.25 * value || next == 0.0 {
            break;
        }
        prev = size;
        poch = next_poch;
        xpow *= inv_x2;
    }
    let value = head + tail;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite("hurwitz_zeta"));
    }
    // each term carries a relative error of about |s ln y| ulps from the power
    let rounding = 4.0 * f64::EPSILON * (1.0 + s.norm() * (x + 1.0).ln()) * mass;
    Ok(HurwitzEval {
        value,
        bound,
        rounding,
        shift: n,
    })
}

/// Euler–Maclaurin at the smallest shift whose remainder bound reaches the
/// target; if none does, the attempt with the smallest total error estimate.
pub fn hurwitz_zeta_adaptive(s: Complex64, a: f64) -> Result<HurwitzEval> {
    let mut best: Option<HurwitzEval> = None;
    for &n in &SHIFTS {
        let ev = hurwitz_zeta_em(s, a, n)?;
        let scale = ev.value.norm().max(f64::MIN_POSITIVE);
        if ev.bound <= TARGET * scale {
            if ev.rounding > 10.0 * TARGET * scale {
                log::warn!(
                    "hurwitz_zeta({s}, {a}): cancellation limits accuracy to ~{:.1e}",
                    ev.rounding / scale
                );
            }
            return Ok(ev);
        }
        if best.map_or(true, |b| ev.bound + ev.rounding < b.bound + b.rounding) {
            best = Some(ev);
        }
    }
    let ev = best.expect("at least one attempt");
    log::warn!(
        "hurwitz_zeta({s}, {a}): remainder bound {:.2e} above target (shift {})",
        ev.bound / ev.value.norm(),
        ev.shift
    );
    Ok(ev)
}

fn adaptive(s: Complex64, a: f64) -> Result<Complex64> {
    Ok(hurwitz_zeta_adaptive(s, a)?.value)
}

/// ζ(s,a) for a ∈ (0,1], analytically continued in s.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("1 (Hurwitz zeta)".into()));
    }
    adaptive(s, a)
}

/// ζ(s,a) away from s = 1; at s = 1 the constant Laurent term −ψ(a).
/// Character-weighted sums with Σχ = 0 are regular at s = 1, and this is
/// what makes them evaluable there.
pub fn hurwitz_zeta_finite_part(s: Complex64, a: f64) -> Result<Complex64> {
    adaptive(s, a)
}

/// ζ(s) = ζ(s, 1).
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zeta_two() {
        let z = riemann_zeta(c(2.0)).unwrap();
        assert!((z.re - PI * PI / 6.0).abs() < 1e-14);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn zeta_negative_values() {
        // ζ(−1) = −1/12, ζ(0, a) = 1/2 − a
        let e = (riemann_zeta(c(-1.0)).unwrap().re + 1.0 / 12.0).abs();
        assert!(e < 1e-14, "{e:e}");
        assert!((hurwitz_zeta(c(0.0), 0.25).unwrap().re - 0.25).abs() < 1e-14);
    }

    #[test]
    fn pole_and_domain() {
        assert!(matches!(hurwitz_zeta(c(1.0), 0.5), Err(Error::Pole(_))));
        assert!(hurwitz_zeta(c(2.0), 0.0).is_err());
        assert!(hurwitz_zeta(c(2.0), 1.5).is_err());
        assert!(hurwitz_zeta(c(70.0), 0.5).is_err());
    }

    #[test]
    fn finite_part_is_minus_digamma() {
        // ψ(1) = −γ, ψ(1/2) = −γ − 2 ln 2
        let g = super::super::EULER_GAMMA;
        let v1 = hurwitz_zeta_finite_part(c(1.0), 1.0).unwrap().re;
        let vh = hurwitz_zeta_finite_part(c(1.0), 0.5).unwrap().re;
        assert!((v1 - g).abs() < 1e-14);
        assert!((vh - (g + 2.0 * 2f64.ln())).abs() < 1e-14);
    }
}

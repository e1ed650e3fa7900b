//! θ₃ and its residue-class pieces θ(j,p)(q) = Σ_m q^{(jm+p)²}, written in
//! t = −ln q so that q close to 1 keeps full precision.

use crate::error::{Error, Result};

const REANCHOR: u64 = 256;

/// Σ_{m≥0} exp(−t (a + j m)²) for a ≥ 0, t > 0.
///
/// Consecutive terms are generated by multiplying ratios, re-anchored with a
/// direct exponential every few hundred terms so rounding cannot accumulate.
fn half_class(t: f64, a: f64, j: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = a;
    let mut term = (-t * n * n).exp();
    let step_ratio = (-2.0 * t * j * j).exp();
    let mut ratio = (-t * (2.0 * n * j + j * j)).exp();
    let mut count = 0u64;
    loop {
        sum += term;
        if term < 1e-17 * sum || term == 0.0 {
            break;
        }
        n += j;
        count += 1;
        if count % REANCHOR == 0 {
            term = (-t * n * n).exp();
            ratio = (-t * (2.0 * n * j + j * j)).exp();
        } else {
            term *= ratio;
            ratio *= step_ratio;
        }
    }
    sum
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta series needs q < 1 (t = {t})")))
    }
}

/// θ(j,p) at q = e^{−t}: Σ_{n ≡ p (mod j)} e^{−t n²}.
pub fn theta_residue_t(j: u32, p: u32, t: f64) -> Result<f64> {
    check_t(t)?;
    if j == 0 || p >= j {
        return Err(Error::Domain(format!(
            "theta residue needs 0 ≤ p < j (j = {j}, p = {p})"
        )));
    }
    if t.is_infinite() {
        return Ok(if p == 0 { 1.0 } else { 0.0 });
    }
    let jf = j as f64;
    let pf = p as f64;
    // n = p + jm for m ≥ 0, and n = p − jm for m ≥ 1, i.e. |n| = (j − p) + j(m−1)
    let neg_start = if p == 0 { jf } else { jf - pf };
    Ok(half_class(t, pf, jf) + half_class(t, neg_start, jf))
}

/// θ₃ at q = e^{−t}.
pub fn theta3_t(t: f64) -> Result<f64> {
    theta_residue_t(1, 0, t)
}

/// θ₃(q) = 1 + 2Σ q^{n²}, 0 ≤ q < 1.
pub fn theta3(q: f64) -> Result<f64> {
    theta_residue(1, 0, q)
}

/// θ(j,p)(q) = Σ_m q^{(jm+p)²}, 0 ≤ q < 1.
pub fn theta_residue(j: u32, p: u32, q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::Domain(format!(
            "theta series needs 0 ≤ q < 1, got {q}"
        )));
    }
    let t = if q == 0.0 { f64::INFINITY } else { -q.ln() };
    theta_residue_t(j, p, t)
}

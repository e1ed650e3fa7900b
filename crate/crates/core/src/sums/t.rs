use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::shell::{for_each_in_shell, pairwise, Power};
use super::SumResult;
use crate::error::{Error, Result};
use crate::lseries::kl_symbol;
use crate::specfun::riemann_zeta;

fn two_pow(e: Complex64) -> Complex64 {
    (e * std::f64::consts::LN_2).exp()
}

/// T(1,0,−r²;s) = 4r^{-2s}(1−2^{1−s}+2^{1−2s})ζ(s)² + 2Σ_{t=1}^{r−1}[(2r,t)+(2r,2r−t)]².
///
/// Valid for every s ≠ 1 by continuation.
pub fn t_via_kl(r: u64, s: Complex64) -> Result<Complex64> {
    if r == 0 {
        return Err(Error::Domain("T needs r ≥ 1".into()));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("1 (double pole of T)".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let z = riemann_zeta(s)?;
    let factor = one - two_pow(one - s) + two_pow(one - 2.0 * s);
    let r2s = (-2.0 * s * (r as f64).ln()).exp();
    let mut v = 4.0 * r2s * factor * z * z;
    for t in 1..r {
        let p = kl_symbol(2 * r, t, s)? + kl_symbol(2 * r, 2 * r - t, s)?;
        v += 2.0 * p * p;
    }
    if s.im == 0.0 {
        v.im = 0.0;
    }
    Ok(v)
}

/// Direct shell sum of T out to radius `cap`, excluding m² = r²n².
///
/// The error is the change between radius cap/2 and cap: an empirical figure,
/// not a bound, because terms near the diagonals decay slowly.
pub fn t_direct(r: u64, s: Complex64, cap: u64) -> Result<SumResult> {
    if r == 0 {
        return Err(Error::Domain("T needs r ≥ 1".into()));
    }
    if s.re <= 1.0 {
        return Err(Error::NonConvergent(s.re));
    }
    if cap < 2 {
        return Err(Error::Domain("shell cap must be at least 2".into()));
    }
    let start = Instant::now();
    let pw = Power::new(s);
    let r2 = (r * r) as i64;
    let shells: Vec<(Complex64, u64)> = (0..=cap as i64)
        .into_par_iter()
        .map(|rho| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut count = 0;
            for_each_in_shell(rho, |m, n| {
                let x = (m * m - r2 * n * n).abs();
                if x != 0 {
                    acc += pw.complex(x as f64);
                    count += 1;
                }
            });
            (acc, count)
        })
        .collect();
    let partials: Vec<Complex64> = shells.iter().map(|x| x.0).collect();
    let half = (cap / 2) as usize;
    let value = pairwise(&partials);
    let coarse = pairwise(&partials[..=half]);
    let fine_diff = (value - coarse).norm();
    let earlier = pairwise(&partials[..=half / 2]);
    if (coarse - earlier).norm() < fine_diff {
        log::warn!("t_direct(r={r}, s={s}): refinement differences are not decreasing");
    }
    Ok(SumResult {
        value,
        error: fine_diff,
        terms: shells.iter().map(|x| x.1).sum(),
        radius: cap,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

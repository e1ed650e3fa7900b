use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

// Lanczos approximation, g = 607/128, 15 terms.
const G: f64 = 607.0 / 128.0;
const COF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];
const SQRT_TAU: f64 = 2.506_628_274_631_000_5;

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let mut ser = Complex64::new(COF[0], 0.0);
    for (j, c) in COF.iter().enumerate().skip(1) {
        ser += *c / (z + j as f64);
    }
    let t = z + G + 0.5;
    (z + 0.5) * t.ln() - t + (ser * SQRT_TAU / z).ln()
}

/// Γ(s) for complex s; reflection below Re s = 1/2.
pub fn gamma_fn(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        return Err(Error::Pole(format!("{} (Gamma)", s.re)));
    }
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite("gamma_fn"));
    }
    // integer arguments exactly, where the table fits
    if s.im == 0.0 && s.re == s.re.round() && s.re <= 171.0 {
        let n = s.re as u32;
        return Ok(Complex64::new(
            (1..n).fold(1.0, |acc, k| acc * k as f64),
            0.0,
        ));
    }
    let v = if s.re < 0.5 {
        let sin = (s * PI).sin();
        Complex64::new(PI, 0.0) / (sin * ln_gamma_right(1.0 - s).exp())
    } else {
        ln_gamma_right(s).exp()
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite("gamma_fn"));
    }
    Ok(if s.im == 0.0 {
        Complex64::new(v.re, 0.0)
    } else {
        v
    })
}

//! Partial zeta symbols (k,l), Dirichlet L-series and their exact special values.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{euler_phi, gcd};
use crate::chars::{enumerate_characters, DirichletCharacter, Parity, RootOfUnity};
use crate::error::{Error, Result};
use crate::specfun::{bernoulli_polynomial, hurwitz_zeta, hurwitz_zeta_finite_part};

fn pow_neg(k: f64, s: Complex64) -> Complex64 {
    if s.im == 0.0 {
        Complex64::new(k.powf(-s.re), 0.0)
    } else {
        (-s * k.ln()).exp()
    }
}

/// (k,l) = Σ_{n≥0} (kn+l)^{-s}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KLSymbol {
    pub k: u64,
    pub l: u64,
}

impl KLSymbol {
    pub fn new(k: u64, l: u64) -> Result<Self> {
        if k == 0 || l == 0 || l > k {
            return Err(Error::Domain(format!("({k},{l}) needs 1 ≤ l ≤ k")));
        }
        Ok(KLSymbol { k, l })
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        kl_symbol(self.k, self.l, s)
    }
}

impl fmt::Display for KLSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

/// (k,l)_± = (k,l) ± (k,k−l).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignedKLSymbol {
    pub k: u64,
    pub l: u64,
    pub sign: Parity,
}

impl SignedKLSymbol {
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let a = kl_symbol(self.k, self.l, s)?;
        let b = kl_symbol(self.k, self.k - self.l, s)?;
        Ok(match self.sign {
            Parity::Positive => a + b,
            Parity::Negative => a - b,
        })
    }
}

impl fmt::Display for SignedKLSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})_{}", self.k, self.l, self.sign)
    }
}

/// (k,l:s) = k^{-s} ζ(s, l/k).
pub fn kl_symbol(k: u64, l: u64, s: Complex64) -> Result<Complex64> {
    KLSymbol::new(k, l)?;
    Ok(pow_neg(k as f64, s) * hurwitz_zeta(s, l as f64 / k as f64)?)
}

/// L(s,χ) = k^{-s} Σ_{n=1}^{k} χ(n) ζ(s, n/k).
///
/// At s = 1 the Hurwitz poles cancel for every non-principal character, and
/// the value is assembled from the regular parts.
pub fn l_series(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    let k = chi.modulus();
    let at_one = s == Complex64::new(1.0, 0.0);
    if at_one && chi.is_principal() {
        return Err(Error::Pole("1 (principal character)".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=k {
        let v = chi.value(n as i64);
        if v.is_zero() {
            continue;
        }
        let a = n as f64 / k as f64;
        let z = if at_one {
            hurwitz_zeta_finite_part(s, a)?
        } else {
            hurwitz_zeta(s, a)?
        };
        acc += v.to_complex() * z;
    }
    let v = pow_neg(k as f64, s) * acc;
    Ok(if s.im == 0.0 && chi.is_real() {
        Complex64::new(v.re, 0.0)
    } else {
        v
    })
}

/// An exact value R·√k·π^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSpecialValue {
    pub rational: BigRational,
    pub discriminant: u64,
    pub pi_power: u32,
}

impl ExactSpecialValue {
    pub fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        self.rational.to_f64().unwrap_or(f64::NAN)
            * (self.discriminant as f64).sqrt()
            * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

impl fmt::Display for ExactSpecialValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}·√{}·π^{}",
            self.rational, self.discriminant, self.pi_power
        )
    }
}

fn special_value(chi: &DirichletCharacter, m: u32, want: Parity) -> Result<ExactSpecialValue> {
    if !chi.is_real() || !chi.is_primitive() {
        return Err(Error::NotRealPrimitive);
    }
    if chi.parity() != want {
        return Err(Error::Parity(format!(
            "{} has parity {} but the formula needs {}",
            chi.label(),
            chi.parity(),
            want
        )));
    }
    let k = chi.modulus();
    let mut sum = BigRational::zero();
    for n in 1..=k {
        let sign = match chi.value(n as i64).root() {
            None => continue,
            Some(r) if r == RootOfUnity::ONE => 1,
            Some(_) => -1,
        };
        let x = BigRational::new(BigInt::from(k - n), BigInt::from(k));
        let b = bernoulli_polynomial(m as usize, &x)?;
        if sign > 0 {
            sum += b;
        } else {
            sum -= b;
        }
    }
    let half = (m + 1) / 2; // the "s" with m = 2s−1 or m = 2s
    let fact: BigInt = (1..=m).fold(BigInt::one(), |acc, j| acc * BigInt::from(j));
    let mut r = sum * BigRational::from_integer(BigInt::one() << (m - 1))
        / BigRational::from_integer(fact * BigInt::from(k));
    if half % 2 == 0 {
        r = -r;
    }
    Ok(ExactSpecialValue {
        rational: r,
        discriminant: k,
        pi_power: m,
    })
}

/// L(m,χ) for a real primitive odd character and odd m.
pub fn special_value_negative_parity(
    chi: &DirichletCharacter,
    m: u32,
) -> Result<ExactSpecialValue> {
    if m % 2 == 0 || !(1..=31).contains(&m) {
        return Err(Error::Domain(format!("m = {m} must be odd in 1..=31")));
    }
    special_value(chi, m, Parity::Negative)
}

/// L(m,χ) for a real primitive even character and even m.
pub fn special_value_positive_parity(
    chi: &DirichletCharacter,
    m: u32,
) -> Result<ExactSpecialValue> {
    if m % 2 == 1 || !(2..=32).contains(&m) {
        return Err(Error::Domain(format!("m = {m} must be even in 2..=32")));
    }
    special_value(chi, m, Parity::Positive)
}

/// The series of `chi` written in (k,l) symbols, e.g. `(5,1)+i(5,2)-i(5,3)-(5,4)`.
/// With `signed`, residues are paired as (k,l)_± for l < k/2, the sign being
/// the parity; this is the compact form used once φ(k) grows.
pub fn symbol_listing(chi: &DirichletCharacter, signed: bool) -> String {
    let k = chi.modulus();
    let base = crate::chars::unit_group(k).1.exponent();
    let mut out = String::new();
    let top = if signed && k > 2 { (k - 1) / 2 } else { k };
    for l in 1..=top {
        let Some(r) = chi.value(l as i64).root() else {
            continue;
        };
        let c = crate::chars::format_root(r, base);
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, c),
        };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if mag != "1" {
            out.push_str(&mag);
        }
        if signed && k > 2 {
            out.push_str(
                &SignedKLSymbol {
                    k,
                    l,
                    sign: chi.parity(),
                }
                .to_string(),
            );
        } else {
            out.push_str(&KLSymbol { k, l }.to_string());
        }
    }
    out
}

/// One term of a (k,l) decomposition: coefficient conj(χ(l))/φ(k) on L(s,χ).
#[derive(Clone, Debug)]
pub struct KLTerm {
    pub character: DirichletCharacter,
    pub root: RootOfUnity,
    pub denominator: u64,
}

impl KLTerm {
    pub fn coefficient(&self) -> Complex64 {
        self.root.to_complex() / self.denominator as f64
    }
}

/// (k,l) = Σ_χ conj(χ(l))/φ(k) · L(s,χ) over the characters mod k.
pub fn kl_decompose(k: u64, l: u64) -> Result<Vec<KLTerm>> {
    KLSymbol::new(k, l)?;
    if gcd(k, l) != 1 {
        return Err(Error::NonCoprime { k, l });
    }
    let phi = euler_phi(k);
    Ok(enumerate_characters(k)
        .into_iter()
        .map(|c| {
            let root = c.value(l as i64).conj().root().expect("unit residue");
            KLTerm {
                character: c,
                root,
                denominator: phi,
            }
        })
        .collect())
}

/// (k,l) through characters, descending to period k/d when d = gcd(k,l) > 1:
/// (k,l) = d^{-s} (k/d, l/d).
pub fn kl_via_characters(k: u64, l: u64, s: Complex64) -> Result<Complex64> {
    KLSymbol::new(k, l)?;
    let d = gcd(k, l);
    let (k1, l1) = (k / d, l / d);
    let mut acc = Complex64::new(0.0, 0.0);
    for t in kl_decompose(k1, l1)? {
        acc += t.coefficient() * l_series(&t.character, s)?;
    }
    Ok(pow_neg(d as f64, s) * acc)
}

/// Checks (k,l) = Σ_{j<f} (fk, jk+l) at s to 1e-12.
pub fn expansion_identity_check(k: u64, l: u64, f: u64, s: Complex64) -> Result<bool> {
    if f < 2 {
        return Err(Error::Domain(format!(
            "expansion factor {f} must be at least 2"
        )));
    }
    let lhs = kl_symbol(k, l, s)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for j in 0..f {
        rhs += kl_symbol(f * k, j * k + l, s)?;
    }
    Ok((lhs - rhs).norm() <= 1e-12 * lhs.norm())
}

use std::sync::OnceLock;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// Highest Bernoulli index held in the exact cache.
pub const BERNOULLI_CAP: usize = 64;

fn table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0, with B_1 = −1/2
        let mut b: Vec<BigRational> = Vec::with_capacity(BERNOULLI_CAP + 1);
        b.push(BigRational::one());
        for n in 1..=BERNOULLI_CAP {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
        }
        b
    })
}

/// Exact Bernoulli number B_n (B_1 = −1/2).
pub fn bernoulli_number(n: usize) -> Result<BigRational> {
    table().get(n).cloned().ok_or(Error::DegreeOverflow(n))
}

/// Exact B_n(x) = Σ_k C(n,k) B_k x^{n−k}.
pub fn bernoulli_polynomial(n: usize, x: &BigRational) -> Result<BigRational> {
    if n > BERNOULLI_CAP {
        return Err(Error::DegreeOverflow(n));
    }
    let b = table();
    // Horner in x over the coefficients C(n,k) B_k, k = 0..n
    let mut binom = BigInt::one();
    let mut coeffs = Vec::with_capacity(n + 1);
    for (k, bk) in b.iter().enumerate().take(n + 1) {
        coeffs.push(BigRational::from_integer(binom.clone()) * bk);
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    let mut acc = BigRational::zero();
    for c in coeffs {
        acc = acc * x + c;
    }
    Ok(acc)
}

/// B_{2k}/(2k)! as floats, for the Euler–Maclaurin tail.
pub(crate) fn scaled_even(k: usize) -> f64 {
    static SCALED: OnceLock<Vec<f64>> = OnceLock::new();
    let t = SCALED.get_or_init(|| {
        use num::ToPrimitive;
        let mut fact = BigInt::one();
        let mut out = vec![1.0];
        for m in 1..=BERNOULLI_CAP / 2 {
            fact *= BigInt::from((2 * m - 1) * (2 * m));
            let v = &table()[2 * m] / BigRational::from_integer(fact.clone());
            out.push(v.to_f64().unwrap_or(0.0));
        }
        out
    });
    t[k]
}

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;

use super::expr::ClosedFormExpr;
use crate::error::{Error, Result};
use crate::lseries::{kl_symbol, l_series};
use crate::sums::{SumKind, SumResult, SumSpec, DEFAULT_RADIUS_CAP};

type SumKey = (SumKind, u64, u64);

/// Evaluates closed forms; lattice-sum leaves are summed to `sum_tol` and
/// cached, so shared sums are computed once per evaluator. A cached sum is
/// reused whenever it is at least as accurate as the request.
pub struct Evaluator {
    pub sum_tol: f64,
    pub radius_cap: u64,
    cache: Mutex<HashMap<SumKey, SumResult>>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new(1e-9)
    }
}

impl Evaluator {
    pub fn new(sum_tol: f64) -> Self {
        Evaluator {
            sum_tol,
            radius_cap: DEFAULT_RADIUS_CAP,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn sum(&self, kind: SumKind, s: Complex64) -> Result<SumResult> {
        self.sum_to(kind, s, self.sum_tol)
    }

    /// A lattice sum to relative tolerance `tol`.
    pub fn sum_to(&self, kind: SumKind, s: Complex64, tol: f64) -> Result<SumResult> {
        let key = (kind, s.re.to_bits(), s.im.to_bits());
        if let Some(r) = self.cache.lock().expect("sum cache").get(&key) {
            if r.error <= tol * r.value.norm() {
                return Ok(*r);
            }
        }
        let spec = SumSpec { kind, s };
        let r = match kind {
            SumKind::Q { a, b, c } => crate::sums::q_sum_capped(a, b, c, s, tol, self.radius_cap),
            SumKind::S { p, r, j } => crate::sums::s_sum_capped(p, r, j, s, tol, self.radius_cap),
            SumKind::Sigma { p, r, j } => {
                crate::sums::sigma_sum_capped(p, r, j, s, tol, self.radius_cap)
            }
            SumKind::T { .. } => spec.evaluate(tol),
        }?;
        let mut cache = self.cache.lock().expect("sum cache");
        let keep = cache.get(&key).map_or(true, |old| r.error < old.error);
        if keep {
            cache.insert(key, r);
        }
        Ok(r)
    }

    /// Value without the realness clean-up.
    pub fn eval_raw(&self, e: &ClosedFormExpr, s: Complex64) -> Result<Complex64> {
        use ClosedFormExpr::*;
        let v = match e {
            Num(x) => Complex64::new(*x, 0.0),
            Var => s,
            Unit(r) => r.to_complex(),
            Pi => Complex64::new(std::f64::consts::PI, 0.0),
            Sqrt(a) => self.eval_raw(a, s)?.sqrt(),
            Neg(a) => -self.eval_raw(a, s)?,
            Add(a, b) => self.eval_raw(a, s)? + self.eval_raw(b, s)?,
            Sub(a, b) => self.eval_raw(a, s)? - self.eval_raw(b, s)?,
            Mul(a, b) => self.eval_raw(a, s)? * self.eval_raw(b, s)?,
            Div(a, b) => {
                let d = self.eval_raw(b, s)?;
                if d == Complex64::new(0.0, 0.0) {
                    return Err(Error::Pole("division by zero in closed form".into()));
                }
                self.eval_raw(a, s)? / d
            }
            Pow(a, b) => power(self.eval_raw(a, s)?, self.eval_raw(b, s)?),
            L(leaf) => match &leaf.character {
                Some(chi) => l_series(chi, s)?,
                None => return Err(Error::UnresolvedLabel(leaf.label.clone())),
            },
            Kl { k, l, sign } => {
                let a = kl_symbol(*k, *l, s)?;
                match sign {
                    None => a,
                    Some(p) => {
                        let b = kl_symbol(*k, *k - *l, s)?;
                        if *p == crate::chars::Parity::Positive {
                            a + b
                        } else {
                            a - b
                        }
                    }
                }
            }
            Sum(kind) => self.sum(*kind, s)?.value,
            Named(_, body) => self.eval_raw(body, s)?,
            Ident(name) => return Err(Error::Catalog(format!("unbound name {name}"))),
        };
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite("closed-form evaluation"));
        }
        Ok(v)
    }

    /// Value with the imaginary part dropped at real s when it is below 1e-12
    /// relative: conjugate-closed expressions are real there.
    pub fn eval(&self, e: &ClosedFormExpr, s: Complex64) -> Result<Complex64> {
        Ok(clean(self.eval_raw(e, s)?, s))
    }

    /// Value and a first-order bound on its absolute error, with lattice sums
    /// taken to relative tolerance `sum_tol`. Sums contribute their proven
    /// truncation bounds, L-series and (k,l) leaves [`LEAF_REL_ERROR`].
    pub fn eval_bounded(
        &self,
        e: &ClosedFormExpr,
        s: Complex64,
        sum_tol: f64,
    ) -> Result<(Complex64, f64)> {
        let (v, err) = self.bounded(e, s, sum_tol)?;
        Ok((clean(v, s), err))
    }

    fn bounded(&self, e: &ClosedFormExpr, s: Complex64, sum_tol: f64) -> Result<(Complex64, f64)> {
        use ClosedFormExpr::*;
        let out = match e {
            Num(_) | Var | Unit(_) | Pi => (self.eval_raw(e, s)?, 0.0),
            L(_) | Kl { .. } => {
                let v = self.eval_raw(e, s)?;
                (v, LEAF_REL_ERROR * v.norm())
            }
            Sum(kind) => {
                let r = self.sum_to(*kind, s, sum_tol)?;
                (r.value, r.error)
            }
            Named(_, body) => self.bounded(body, s, sum_tol)?,
            Neg(a) => {
                let (v, ea) = self.bounded(a, s, sum_tol)?;
                (-v, ea)
            }
            Sqrt(a) => {
                let (x, ea) = self.bounded(a, s, sum_tol)?;
                let v = x.sqrt();
                (
                    v,
                    if ea == 0.0 {
                        0.0
                    } else {
                        ea / (2.0 * v.norm())
                    },
                )
            }
            Add(a, b) | Sub(a, b) => {
                let (x, ea) = self.bounded(a, s, sum_tol)?;
                let (y, eb) = self.bounded(b, s, sum_tol)?;
                (if matches!(e, Add(..)) { x + y } else { x - y }, ea + eb)
            }
            Mul(a, b) => {
                let (x, ea) = self.bounded(a, s, sum_tol)?;
                let (y, eb) = self.bounded(b, s, sum_tol)?;
                (x * y, x.norm() * eb + y.norm() * ea + ea * eb)
            }
            Div(a, b) => {
                let (x, ea) = self.bounded(a, s, sum_tol)?;
                let (y, eb) = self.bounded(b, s, sum_tol)?;
                if y == Complex64::new(0.0, 0.0) {
                    return Err(Error::Pole("division by zero in closed form".into()));
                }
                let v = x / y;
                let room = y.norm() - eb;
                (
                    v,
                    if room > 0.0 {
                        (ea + v.norm() * eb) / room
                    } else {
                        f64::INFINITY
                    },
                )
            }
            Pow(a, b) => {
                let (x, ea) = self.bounded(a, s, sum_tol)?;
                let (y, eb) = self.bounded(b, s, sum_tol)?;
                let v = power(x, y);
                // d(x^y) = y x^{y−1} dx + x^y ln x dy
                let mut err = 0.0;
                if ea > 0.0 {
                    err += (y * v / x).norm() * ea;
                }
                if eb > 0.0 {
                    err += (v * x.ln()).norm() * eb;
                }
                (v, err)
            }
            Ident(name) => return Err(Error::Catalog(format!("unbound name {name}"))),
        };
        if !(out.0.re.is_finite() && out.0.im.is_finite()) {
            return Err(Error::NonFinite("closed-form evaluation"));
        }
        Ok(out)
    }
}

/// Relative accuracy assumed for Hurwitz-backed leaves.
pub const LEAF_REL_ERROR: f64 = 1e-13;

fn clean(v: Complex64, s: Complex64) -> Complex64 {
    if s.im == 0.0 && v.im.abs() <= 1e-12 * v.re.abs().max(1.0) {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

fn power(b: Complex64, e: Complex64) -> Complex64 {
    if e.im == 0.0 && e.re == e.re.round() && e.re.abs() <= 64.0 {
        return b.powi(e.re as i32);
    }
    if b.im == 0.0 && b.re > 0.0 {
        return (e * b.re.ln()).exp();
    }
    b.powc(e)
}

/// Evaluate with a default evaluator (lattice sums to 1e-9).
pub fn eval_expr(e: &ClosedFormExpr, s: Complex64) -> Result<Complex64> {
    Evaluator::default().eval(e, s)
}

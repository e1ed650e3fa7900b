//! Dirichlet characters with exact root-of-unity values.
//!
//! Characters are generated from the CRT decomposition of (Z/kZ)*: every
//! unit has an exponent tuple over a fixed generator set, and a character is
//! a tuple of generator images. Values never pass through floating point.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{divisors, factorize, gcd, inv_mod, lcm, pow_mod, primitive_root};
use crate::error::{Error, Result};

/// exp(2πi·exponent/order), kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u32,
    exponent: u32,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity {
        order: 1,
        exponent: 0,
    };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity {
        order: 2,
        exponent: 1,
    };

    pub fn new(order: u32, exponent: i64) -> Self {
        assert!(order > 0, "root of unity needs a positive order");
        let e = exponent.rem_euclid(order as i64) as u64;
        let g = gcd(e, order as u64).max(1);
        if e == 0 {
            return Self::ONE;
        }
        RootOfUnity {
            order: (order as u64 / g) as u32,
            exponent: (e / g) as u32,
        }
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    /// Exponent when written over a base order `m` (which must be a multiple of the order).
    pub fn exponent_over(self, m: u32) -> u32 {
        debug_assert_eq!(m % self.order, 0);
        self.exponent * (m / self.order)
    }

    pub fn is_real(self) -> bool {
        self.order <= 2
    }

    pub fn mul(self, other: Self) -> Self {
        let m = lcm(self.order as u64, other.order as u64) as u32;
        Self::new(
            m,
            self.exponent_over(m) as i64 + other.exponent_over(m) as i64,
        )
    }

    pub fn pow(self, k: i64) -> Self {
        Self::new(self.order, self.exponent as i64 * k)
    }

    pub fn conj(self) -> Self {
        Self::new(self.order, -(self.exponent as i64))
    }

    pub fn to_complex(self) -> Complex64 {
        // quarter turns exactly, so real characters stay real
        if (4 * self.exponent) % self.order == 0 {
            return match 4 * self.exponent / self.order {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        let (s, c) = (TAU * self.exponent as f64 / self.order as f64).sin_cos();
        Complex64::new(c, s)
    }
}

/// A character value: zero off the unit group, a root of unity on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharValue {
    Zero,
    Root(RootOfUnity),
}

impl CharValue {
    pub const ONE: CharValue = CharValue::Root(RootOfUnity::ONE);

    pub fn is_zero(self) -> bool {
        matches!(self, CharValue::Zero)
    }

    pub fn root(self) -> Option<RootOfUnity> {
        match self {
            CharValue::Zero => None,
            CharValue::Root(r) => Some(r),
        }
    }

    pub fn mul(self, other: Self) -> Self {
        match (self, other) {
            (CharValue::Root(a), CharValue::Root(b)) => CharValue::Root(a.mul(b)),
            _ => CharValue::Zero,
        }
    }

    pub fn conj(self) -> Self {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(r) => CharValue::Root(r.conj()),
        }
    }

    pub fn is_real(self) -> bool {
        self.root().map_or(true, RootOfUnity::is_real)
    }

    pub fn to_complex(self) -> Complex64 {
        self.root()
            .map_or(Complex64::new(0.0, 0.0), RootOfUnity::to_complex)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Positive,
    Negative,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Positive => "+",
            Parity::Negative => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub residue: u64,
    pub order: u32,
}

/// Generators of (Z/kZ)* and the discrete-log table over them.
#[derive(Clone, Debug)]
pub struct CharacterGroupStructure {
    modulus: u64,
    generators: Vec<Generator>,
    exponent: u32,
    dlog: Vec<Option<Vec<u32>>>,
}

impl CharacterGroupStructure {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Exponent of the group: lcm of the generator orders.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|g| g.order as u64).product()
    }

    /// Exponent tuple of `n` over the generators, or `None` if `n` is not a unit.
    pub fn dlog(&self, n: i64) -> Option<&[u32]> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.dlog[r].as_deref()
    }

    /// Residue with the given exponent tuple.
    pub fn exp(&self, tuple: &[u32]) -> u64 {
        self.generators
            .iter()
            .zip(tuple)
            .fold(1 % self.modulus, |acc, (g, &x)| {
                acc * pow_mod(g.residue, x as u64, self.modulus) % self.modulus
            })
    }
}

fn crt_lift(g: u64, q: u64, k: u64) -> u64 {
    let m = k / q;
    if m == 1 {
        return g % k;
    }
    let inv = inv_mod(m % q, q).expect("coprime CRT moduli");
    let t = ((g + q - 1) % q) * inv % q;
    (1 + m * t) % k
}

/// Units modulo `k` in increasing order, with the group structure.
pub fn unit_group(k: u64) -> (Vec<u64>, CharacterGroupStructure) {
    assert!(k >= 1, "modulus must be positive");
    let mut generators = Vec::new();
    for (p, e) in factorize(k) {
        let q = p.pow(e);
        if p == 2 {
            if e >= 2 {
                generators.push(Generator {
                    residue: crt_lift(q - 1, q, k),
                    order: 2,
                });
            }
            if e >= 3 {
                generators.push(Generator {
                    residue: crt_lift(5, q, k),
                    order: 1 << (e - 2),
                });
            }
        } else {
            let mut g = primitive_root(p);
            if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
                g += p;
            }
            let order = (q / p * (p - 1)) as u32;
            generators.push(Generator {
                residue: crt_lift(g, q, k),
                order,
            });
        }
    }
    let exponent = generators
        .iter()
        .fold(1u64, |acc, g| lcm(acc, g.order as u64)) as u32;

    let mut dlog = vec![None; k as usize];
    let mut tuple = vec![0u32; generators.len()];
    loop {
        let mut r = 1 % k;
        for (g, &x) in generators.iter().zip(&tuple) {
            r = r * pow_mod(g.residue, x as u64, k) % k;
        }
        debug_assert!(dlog[r as usize].is_none(), "discrete log collision");
        dlog[r as usize] = Some(tuple.clone());
        if !advance(&mut tuple, generators.iter().map(|g| g.order)) {
            break;
        }
    }
    let units = (1..=k).filter(|&n| gcd(n, k) == 1).collect();
    (
        units,
        CharacterGroupStructure {
            modulus: k,
            generators,
            exponent,
            dlog,
        },
    )
}

/// Mixed-radix increment; false once the tuple wraps around.
fn advance(tuple: &mut [u32], radices: impl Iterator<Item = u32>) -> bool {
    for (x, r) in tuple.iter_mut().zip(radices) {
        *x += 1;
        if *x < r {
            return true;
        }
        *x = 0;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<CharValue>,
    parity: Parity,
    conductor: u64,
    label: String,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self, n: i64) -> CharValue {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value_complex(&self, n: i64) -> Complex64 {
        self.value(n).to_complex()
    }

    /// Values on 1..=k, the order in which the listings print them.
    pub fn row(&self) -> Vec<CharValue> {
        (1..=self.modulus as i64).map(|n| self.value(n)).collect()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.is_real())
    }

    pub fn is_principal(&self) -> bool {
        self.conductor == 1
    }

    /// Label of the inducing primitive character, e.g. `L_{-5}^{i}`.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Σ_{n=1}^{k} χ(n); zero unless the character is principal.
    pub fn value_sum(&self) -> Complex64 {
        self.values.iter().map(|v| v.to_complex()).sum()
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> DirichletCharacter {
        if self.is_primitive() {
            return self.clone();
        }
        let f = self.conductor;
        let values = restrict(&self.values, self.modulus, f);
        primitive_characters(f)
            .into_iter()
            .find(|c| c.values == values)
            .expect("restriction to the conductor is a primitive character")
    }

    /// Euler factors turning the primitive series into this one, e.g. `(1-2^{-s})L_{1}`.
    pub fn induced_form(&self) -> String {
        let prim = self.primitive();
        let base = unit_group(prim.modulus).1.exponent();
        let mut out = String::new();
        for (p, _) in factorize(self.modulus) {
            if self.conductor % p == 0 {
                continue;
            }
            let c = prim.value(p as i64);
            let term = match c.root() {
                None => continue,
                Some(r) if r == RootOfUnity::ONE => format!("(1-{p}^{{-s}})"),
                Some(r) if r == RootOfUnity::MINUS_ONE => format!("(1+{p}^{{-s}})"),
                Some(r) => {
                    let c = format_root(r, base);
                    match c.strip_prefix('-') {
                        Some(c) => format!("(1+{c}{p}^{{-s}})"),
                        None => format!("(1-{c}{p}^{{-s}})"),
                    }
                }
            };
            out.push_str(&term);
        }
        out.push_str(&self.label);
        out
    }

    fn from_values(modulus: u64, values: Vec<CharValue>) -> Self {
        let parity = if modulus <= 2 || values[(modulus - 1) as usize] == CharValue::ONE {
            Parity::Positive
        } else {
            Parity::Negative
        };
        let conductor = conductor_of(&values, modulus);
        DirichletCharacter {
            modulus,
            values,
            parity,
            conductor,
            label: String::new(),
        }
    }
}

fn conductor_of(values: &[CharValue], k: u64) -> u64 {
    for d in divisors(k) {
        let induced = (1..=k)
            .filter(|&n| gcd(n, k) == 1 && n % d == 1 % d)
            .all(|n| values[(n % k) as usize] == CharValue::ONE);
        if induced {
            return d;
        }
    }
    k
}

/// Values of the character mod `f` that induces `values` (mod `k`), indexed by residue mod `f`.
fn restrict(values: &[CharValue], k: u64, f: u64) -> Vec<CharValue> {
    (0..f)
        .map(|m| {
            if gcd(m, f) != 1 {
                return CharValue::Zero;
            }
            let mut n = m;
            while gcd(n, k) != 1 {
                n += f;
            }
            values[(n % k) as usize]
        })
        .collect()
}

fn raw_characters(k: u64) -> Vec<DirichletCharacter> {
    let (_, g) = unit_group(k);
    let e = g.exponent;
    let mut a = vec![0u32; g.generators.len()];
    let mut out = Vec::new();
    loop {
        let values = (0..k)
            .map(|n| match g.dlog[n as usize].as_ref() {
                None => CharValue::Zero,
                Some(x) => {
                    let ex: u64 = g
                        .generators
                        .iter()
                        .zip(&a)
                        .zip(x)
                        .map(|((gen, &ai), &xi)| ai as u64 * xi as u64 * (e / gen.order) as u64)
                        .sum();
                    CharValue::Root(RootOfUnity::new(e, (ex % e as u64) as i64))
                }
            })
            .collect();
        out.push(DirichletCharacter::from_values(k, values));
        if !advance(&mut a, g.generators.iter().map(|g| g.order)) {
            break;
        }
    }
    out
}

/// Symbol used for the primitive root of order `m` in labels and rows.
fn root_symbol(m: u32) -> String {
    match m {
        4 => "i".into(),
        6 => "ω".into(),
        10 => "τ".into(),
        12 => "φ".into(),
        _ => format!("ζ_{m}"),
    }
}

/// Render a root of unity against base order `base`, as the listings do:
/// ζ^e for e < base/2 and −ζ^{e−base/2} otherwise.
pub fn format_root(r: RootOfUnity, base: u32) -> String {
    let e = r.exponent_over(base);
    if e == 0 {
        return "1".into();
    }
    if 2 * e == base {
        return "-1".into();
    }
    let (sign, e) = if 2 * e < base {
        ("", e)
    } else {
        ("-", e - base / 2)
    };
    let sym = root_symbol(base);
    if e == 0 {
        format!("{sign}1")
    } else if e == 1 {
        format!("{sign}{sym}")
    } else {
        format!("{sign}{sym}^{e}")
    }
}

pub fn format_value(v: CharValue, base: u32) -> String {
    match v {
        CharValue::Zero => "0".into(),
        CharValue::Root(r) => format_root(r, base),
    }
}

/// Primitive characters mod `f`, labelled. Labels follow the listing rule
/// (sign = parity, superscript = first non-real coefficient); where that rule
/// is ambiguous further coefficients are appended, comma separated.
pub fn primitive_characters(f: u64) -> Vec<DirichletCharacter> {
    let base = unit_group(f).1.exponent();
    let mut chars: Vec<_> = raw_characters(f)
        .into_iter()
        .filter(|c| c.is_primitive())
        .collect();
    let head = |c: &DirichletCharacter| {
        if f == 1 {
            "L_{1}".to_string()
        } else {
            format!(
                "L_{{{}{f}}}",
                if c.parity == Parity::Negative {
                    "-"
                } else {
                    ""
                }
            )
        }
    };
    // coefficient strings from the first non-real unit onward
    let tails: Vec<Vec<String>> = chars
        .iter()
        .map(|c| {
            (1..f as i64)
                .map(|n| c.value(n))
                .filter(|v| !v.is_zero())
                .skip_while(|v| v.is_real())
                .map(|v| format_value(v, base))
                .collect()
        })
        .collect();
    let mut groups: BTreeMap<(String, Option<String>), Vec<usize>> = BTreeMap::new();
    for (idx, c) in chars.iter().enumerate() {
        groups
            .entry((head(c), tails[idx].first().cloned()))
            .or_default()
            .push(idx);
    }
    for ((h, first), members) in groups {
        let Some(_) = first else {
            for &idx in &members {
                chars[idx].label = h.clone();
            }
            continue;
        };
        let max_len = members.iter().map(|&i| tails[i].len()).min().unwrap_or(1);
        let mut len = 1;
        while len < max_len {
            let mut seen: Vec<&[String]> = members.iter().map(|&i| &tails[i][..len]).collect();
            seen.sort();
            seen.dedup();
            if seen.len() == members.len() {
                break;
            }
            len += 1;
        }
        for &idx in &members {
            chars[idx].label = format!("{h}^{{{}}}", tails[idx][..len].join(","));
        }
    }
    chars
}

/// All φ(k) characters mod `k`, ordered by parity (positive first),
/// real before complex, then label.
pub fn enumerate_characters(k: u64) -> Vec<DirichletCharacter> {
    let mut chars = raw_characters(k);
    let mut tables: HashMap<u64, Vec<DirichletCharacter>> = HashMap::new();
    for c in &mut chars {
        let f = c.conductor;
        let table = tables.entry(f).or_insert_with(|| primitive_characters(f));
        let values = restrict(&c.values, k, f);
        c.label = table
            .iter()
            .find(|p| p.values == values)
            .map(|p| p.label.clone())
            .expect("inducing primitive character exists");
    }
    chars.sort_by(|a, b| {
        (a.parity, !a.is_real(), &a.label).cmp(&(b.parity, !b.is_real(), &b.label))
    });
    chars
}

/// Bring a label written with ASCII aliases (`w`, `tau`, `phi`) or without
/// braces (`L_-4`) into the canonical form produced by [`primitive_characters`].
pub fn canonical_label(label: &str) -> String {
    let mut s: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = s.strip_prefix("L_") {
        if !rest.starts_with('{') {
            let end = rest.find('^').unwrap_or(rest.len());
            s = format!("L_{{{}}}{}", &rest[..end], &rest[end..]);
        }
    }
    if let Some(pos) = s.find('^') {
        let (head, sup) = s.split_at(pos + 1);
        let mut sup = sup.to_string();
        if !sup.starts_with('{') {
            sup = format!("{{{sup}}}");
        }
        let sup = sup
            .replace("tau", "τ")
            .replace("phi", "φ")
            .replace('w', "ω");
        s = format!("{head}{sup}");
    }
    s
}

/// Find the primitive character carrying `label`.
pub fn character_by_label(label: &str) -> Result<DirichletCharacter> {
    let canon = canonical_label(label);
    let inner = canon
        .strip_prefix("L_{")
        .and_then(|r| r.split('}').next())
        .ok_or_else(|| Error::UnresolvedLabel(label.to_string()))?;
    let k: i64 = inner
        .parse()
        .map_err(|_| Error::UnresolvedLabel(label.to_string()))?;
    if k == 0 {
        return Err(Error::UnresolvedLabel(label.to_string()));
    }
    primitive_characters(k.unsigned_abs())
        .into_iter()
        .find(|c| c.label == canon)
        .ok_or_else(|| Error::UnresolvedLabel(label.to_string()))
}

/// Kronecker symbol (n|k).
pub fn kronecker_symbol(n: i64, k: i64) -> i32 {
    assert!(n != 0 || k != 0, "kronecker symbol (0|0) is undefined");
    let (mut a, mut b) = (n as i128, k as i128);
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut res = 1;
    let mut v = 0;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    if v % 2 == 1 && (a.rem_euclid(8) == 3 || a.rem_euclid(8) == 5) {
        res = -res;
    }
    if b < 0 {
        b = -b;
        if a < 0 {
            res = -res;
        }
    }
    // Jacobi symbol (a|b), b odd positive
    a = a.rem_euclid(b);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if b % 8 == 3 || b % 8 == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            res = -res;
        }
        a %= b;
    }
    if b == 1 {
        res
    } else {
        0
    }
}

/// A listing property that fails to hold for some modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PropertyViolation {
    ParitySplit { positive: usize, negative: usize },
    UnpairedConjugate { label: String },
    ConjugateParity { label: String },
    ComplexEndpoint { label: String },
    AmbiguousLabel { label: String, count: usize },
}

/// Check the observed listing properties for modulus `k`: equal parity
/// split, conjugate pairing with equal parity, real first and last
/// coefficients, and uniqueness of the first-non-real-coefficient label
/// among primitive characters.
pub fn property_violations(k: u64) -> Vec<PropertyViolation> {
    let chars = enumerate_characters(k);
    let mut out = Vec::new();
    if k >= 3 {
        let positive = chars
            .iter()
            .filter(|c| c.parity == Parity::Positive)
            .count();
        let negative = chars.len() - positive;
        if positive != negative {
            out.push(PropertyViolation::ParitySplit { positive, negative });
        }
    }
    for c in &chars {
        let conj: Vec<_> = c.values.iter().map(|v| v.conj()).collect();
        match chars.iter().find(|d| d.values == conj) {
            None => out.push(PropertyViolation::UnpairedConjugate {
                label: c.label.clone(),
            }),
            Some(d) if d.parity != c.parity => out.push(PropertyViolation::ConjugateParity {
                label: c.label.clone(),
            }),
            _ => {}
        }
        if !c.value(1).is_real() || !c.value(k as i64 - 1).is_real() {
            out.push(PropertyViolation::ComplexEndpoint {
                label: c.label.clone(),
            });
        }
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for c in primitive_characters(k) {
        let short = match c.label.find(',') {
            Some(p) => format!("{}}}", &c.label[..p]),
            None => c.label.clone(),
        };
        *counts.entry(short).or_default() += 1;
    }
    for (label, count) in counts {
        if count > 1 {
            out.push(PropertyViolation::AmbiguousLabel { label, count });
        }
    }
    out
}

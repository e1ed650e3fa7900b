//! Catalog of closed forms for lattice sums and the drivers that verify them.
//!
//! The identities are data: `data/catalog.toml` is embedded at build time and
//! parsed by [`build_catalog`]. Both sides of an identity are expressions in
//! the grammar of [`expr`]; named sub-expressions come from a `[define]`
//! table. Entries whose printed form is known not to hold are kept with
//! `status = "expected_fail"` next to the reading that does.

mod eval;
pub mod expr;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

pub use eval::{eval_expr, Evaluator, LEAF_REL_ERROR};
pub use expr::{parse_expr, ClosedFormExpr, LLeaf};
pub use verify::{
    class_number_spotcheck, functional_equation_check, pole_expansion_check, verify,
    verify_identity, zero_expansion_check, PoleExpansion, VerificationRecord, ZeroExpansion,
    C_CONSTANT,
};

use crate::chars::{character_by_label, DirichletCharacter};
use crate::error::{Error, Result};

const CATALOG_TOML: &str = include_str!("../../data/catalog.toml");

#[derive(Clone, Debug)]
pub struct Identity {
    pub id: String,
    pub group: String,
    pub source: String,
    pub lhs: ClosedFormExpr,
    pub rhs: ClosedFormExpr,
    pub lhs_text: String,
    pub rhs_text: String,
    /// Literal transcription known not to hold.
    pub expected_fail: bool,
    /// For a literal entry, the id of the reading that holds.
    pub corrects: Option<String>,
    pub note: Option<String>,
}

impl Identity {
    /// Whether either side needs direct lattice summation.
    pub fn needs_direct_sum(&self) -> bool {
        self.lhs.needs_direct_sum() || self.rhs.needs_direct_sum()
    }

    /// Evaluation points used when none are given.
    ///
    /// Direct sums skip s = 1.5, where the tail bound decays like 1/R and a
    /// 1e-6 target is out of reach; Hurwitz-backed identities also get a
    /// complex point.
    pub fn default_grid(&self) -> Vec<Complex64> {
        let re = |x| Complex64::new(x, 0.0);
        if self.needs_direct_sum() {
            vec![re(2.0), re(2.5), re(3.0)]
        } else {
            vec![re(1.5), re(2.0), re(2.5), re(3.0), Complex64::new(2.0, 1.0)]
        }
    }

    pub fn default_tol(&self) -> f64 {
        if self.needs_direct_sum() {
            1e-6
        } else {
            1e-10
        }
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub identities: Vec<Identity>,
    pub defines: BTreeMap<String, ClosedFormExpr>,
    /// Definitions as written, for display.
    pub define_texts: BTreeMap<String, String>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Option<&Identity> {
        self.identities.iter().find(|i| i.id == id)
    }

    pub fn group<'a>(&'a self, group: &'a str) -> impl Iterator<Item = &'a Identity> + 'a {
        self.identities.iter().filter(move |i| i.group == group)
    }

    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }

    /// Expression text in typeset form: definitions expanded, `^(x)` as
    /// `^{x}`, `L_{k}` as `L_k`, and implicit products where unambiguous,
    /// e.g. `4(1-2^{1-s}+2^{1-2s})L_1^2`; `sqrt` and the root names print as
    /// symbols.
    pub fn typeset(&self, text: &str) -> String {
        let expanded = self.expand(text, 0);
        let chars: Vec<char> = expanded.chars().collect();
        let mut out = String::new();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            match ch {
                ' ' => {}
                '*' => {
                    let next = chars.get(i + 1).copied().unwrap_or(' ');
                    if !(next == '(' || next.is_ascii_alphabetic()) {
                        out.push('·');
                    }
                }
                '^' if chars.get(i + 1) == Some(&'(') => {
                    let close = matching(&chars, i + 1);
                    out.push_str("^{");
                    out.extend(&chars[i + 2..close]);
                    out.push('}');
                    i = close;
                }
                _ => out.push(ch),
            }
            i += 1;
        }
        // exponent bodies were copied verbatim
        let typeset = out
            .replace('*', "")
            .replace("sqrt(", "√(")
            .replace("tau", "τ")
            .replace("phi", "φ")
            .replace('w', "ω");
        let typeset = ["2", "3", "5"].iter().fold(typeset, |t, n| {
            t.replace(&format!("√({n})"), &format!("√{n}"))
        });
        // (L_{k})^2 → L_k^2, then L_{k} → L_k
        let mut s = typeset;
        while let Some(p) = s.find("(L_{") {
            let Some(q) = s[p..].find("})").map(|q| p + q) else {
                break;
            };
            let inner = s[p + 4..q].to_string();
            s.replace_range(p..q + 2, &format!("L_{inner}"));
        }
        let mut out = String::new();
        let mut rest = s.as_str();
        while let Some(p) = rest.find("L_{") {
            out.push_str(&rest[..p]);
            let q = rest[p..].find('}').map(|q| p + q).unwrap_or(rest.len() - 1);
            out.push_str("L_");
            out.push_str(&rest[p + 3..q]);
            rest = &rest[q + 1..];
        }
        out.push_str(rest);
        out
    }

    fn expand(&self, text: &str, depth: usize) -> String {
        let mut out = String::new();
        let mut word = String::new();
        let flush = |word: &mut String, out: &mut String| {
            match self.define_texts.get(word.as_str()) {
                Some(def) if depth < 8 => {
                    let inner = self.expand(def, depth + 1);
                    let wrapped = inner.starts_with('(')
                        && matching(&inner.chars().collect::<Vec<_>>(), 0)
                            == inner.chars().count() - 1;
                    if wrapped {
                        out.push_str(&inner);
                    } else {
                        out.push('(');
                        out.push_str(&inner);
                        out.push(')');
                    }
                }
                _ => out.push_str(word),
            }
            word.clear();
        };
        for ch in text.chars() {
            if ch.is_ascii_alphanumeric() || ch == '_' {
                word.push(ch);
            } else {
                flush(&mut word, &mut out);
                out.push(ch);
            }
        }
        flush(&mut word, &mut out);
        out
    }
}

/// Index of the bracket closing the one at `open`.
fn matching(chars: &[char], open: usize) -> usize {
    let mut depth = 0;
    for (i, &c) in chars.iter().enumerate().skip(open) {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return i;
                }
            }
            _ => {}
        }
    }
    chars.len() - 1
}

#[derive(Deserialize)]
struct RawCatalog {
    #[serde(default)]
    define: BTreeMap<String, String>,
    identity: Vec<RawIdentity>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdentity {
    id: String,
    group: String,
    source: String,
    lhs: String,
    rhs: String,
    status: Option<String>,
    corrects: Option<String>,
    note: Option<String>,
}

fn context(what: &str, e: Error) -> Error {
    Error::Catalog(format!("{what}: {e}"))
}

/// Parse a catalog from TOML text and resolve every label it mentions.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;

    // definitions may refer to earlier ones in any order; bind until stable
    let mut parsed: BTreeMap<String, ClosedFormExpr> = BTreeMap::new();
    for (name, src) in &raw.define {
        parsed.insert(name.clone(), parse_expr(src).map_err(|e| context(name, e))?);
    }
    let mut bound: HashMap<String, ClosedFormExpr> = HashMap::new();
    for _ in 0..=parsed.len() {
        let mut progress = false;
        for (name, e) in &parsed {
            if bound.contains_key(name) {
                continue;
            }
            let mut e = e.clone();
            if e.bind(&bound).is_ok() {
                bound.insert(name.clone(), e);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    if let Some(name) = parsed.keys().find(|n| !bound.contains_key(*n)) {
        return Err(Error::Catalog(format!(
            "definition {name} is circular or uses an undefined name"
        )));
    }

    let mut cache: HashMap<String, Option<Arc<DirichletCharacter>>> = HashMap::new();
    let mut resolve = |label: &str| {
        cache
            .entry(label.to_string())
            .or_insert_with(|| character_by_label(label).ok().map(Arc::new))
            .clone()
    };

    let mut identities = Vec::with_capacity(raw.identity.len());
    let mut seen = std::collections::HashSet::new();
    for r in raw.identity {
        if !seen.insert(r.id.clone()) {
            return Err(Error::Catalog(format!("duplicate id {}", r.id)));
        }
        let mut lhs = parse_expr(&r.lhs).map_err(|e| context(&r.id, e))?;
        let mut rhs = parse_expr(&r.rhs).map_err(|e| context(&r.id, e))?;
        lhs.bind(&bound).map_err(|e| context(&r.id, e))?;
        rhs.bind(&bound).map_err(|e| context(&r.id, e))?;
        lhs.resolve_labels(&mut resolve);
        rhs.resolve_labels(&mut resolve);
        let expected_fail = match r.status.as_deref() {
            None => false,
            Some("expected_fail") => true,
            Some(other) => return Err(Error::Catalog(format!("{}: unknown status {other}", r.id))),
        };
        identities.push(Identity {
            id: r.id,
            group: r.group,
            source: r.source,
            lhs,
            rhs,
            lhs_text: r.lhs,
            rhs_text: r.rhs,
            expected_fail,
            corrects: r.corrects,
            note: r.note,
        });
    }
    for i in &identities {
        if let Some(c) = &i.corrects {
            if !identities.iter().any(|j| &j.id == c) {
                return Err(Error::Catalog(format!("{} corrects unknown id {c}", i.id)));
            }
        }
    }
    let defines = bound
        .into_iter()
        .map(|(name, mut e)| {
            e.resolve_labels(&mut resolve);
            (name, e)
        })
        .collect();
    Ok(Catalog {
        identities,
        defines,
        define_texts: raw.define,
    })
}

/// The embedded catalog.
pub fn build_catalog() -> Catalog {
    parse_catalog(CATALOG_TOML).expect("embedded catalog is well formed")
}

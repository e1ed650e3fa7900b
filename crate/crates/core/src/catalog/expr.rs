//! Expression language for closed forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' unary)?
//! atom   := number | name | name '(' args ')' | label | '(' expr ')'
//! label  := 'L_{' int '}' ('^{' text '}')?
//! ```

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::chars::{canonical_label, DirichletCharacter, Parity, RootOfUnity};
use crate::error::{Error, Result};
use crate::sums::SumKind;

/// An L-series leaf: the label as written plus the character it resolved to.
#[derive(Clone, Debug, PartialEq)]
pub struct LLeaf {
    pub label: String,
    pub character: Option<Arc<DirichletCharacter>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClosedFormExpr {
    Num(f64),
    Var,
    Unit(RootOfUnity),
    Pi,
    Sqrt(Box<ClosedFormExpr>),
    Neg(Box<ClosedFormExpr>),
    Add(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Sub(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Mul(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Div(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Pow(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    L(LLeaf),
    /// (k,l), or (k,l)_± with a sign.
    Kl {
        k: u64,
        l: u64,
        sign: Option<Parity>,
    },
    Sum(SumKind),
    /// A named sub-expression from the catalog's define table.
    Named(String, Box<ClosedFormExpr>),
    /// An identifier not yet bound to a definition.
    Ident(String),
}

impl ClosedFormExpr {
    /// Visit every node, depth first.
    pub fn walk(&self, f: &mut impl FnMut(&ClosedFormExpr)) {
        f(self);
        use ClosedFormExpr::*;
        match self {
            Sqrt(a) | Neg(a) | Named(_, a) => a.walk(f),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }

    fn walk_mut(&mut self, f: &mut impl FnMut(&mut ClosedFormExpr) -> Result<()>) -> Result<()> {
        f(self)?;
        use ClosedFormExpr::*;
        match self {
            Sqrt(a) | Neg(a) | Named(_, a) => a.walk_mut(f),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                a.walk_mut(f)?;
                b.walk_mut(f)
            }
            _ => Ok(()),
        }
    }

    /// Lattice sums appearing in the expression.
    pub fn sums(&self) -> Vec<SumKind> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let ClosedFormExpr::Sum(k) = e {
                out.push(*k);
            }
        });
        out
    }

    /// True if evaluation needs a direct lattice sum (Q, S or σ).
    pub fn needs_direct_sum(&self) -> bool {
        self.sums().iter().any(|k| k.is_direct())
    }

    /// Labels of all L-series leaves.
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let ClosedFormExpr::L(leaf) = e {
                out.push(leaf.label.clone());
            }
        });
        out
    }

    /// Labels that did not resolve to a character.
    pub fn unresolved(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| match e {
            ClosedFormExpr::L(leaf) if leaf.character.is_none() => out.push(leaf.label.clone()),
            ClosedFormExpr::Ident(name) => out.push(name.clone()),
            _ => {}
        });
        out
    }

    /// Replace identifiers by definitions.
    pub fn bind(&mut self, defs: &HashMap<String, ClosedFormExpr>) -> Result<()> {
        self.walk_mut(&mut |e| {
            if let ClosedFormExpr::Ident(name) = e {
                let body = defs
                    .get(name.as_str())
                    .ok_or_else(|| Error::Catalog(format!("undefined name {name}")))?;
                *e = ClosedFormExpr::Named(name.clone(), Box::new(body.clone()));
            }
            Ok(())
        })
    }

    /// Attach characters to L leaves through `resolve`; unresolvable labels stay empty.
    pub fn resolve_labels(
        &mut self,
        resolve: &mut impl FnMut(&str) -> Option<Arc<DirichletCharacter>>,
    ) {
        let _ = self.walk_mut(&mut |e| {
            if let ClosedFormExpr::L(leaf) = e {
                if leaf.character.is_none() {
                    leaf.character = resolve(&leaf.label);
                }
            }
            Ok(())
        });
    }
}

fn prec(e: &ClosedFormExpr) -> u8 {
    use ClosedFormExpr::*;
    match e {
        Add(..) | Sub(..) => 1,
        Mul(..) | Div(..) => 2,
        Neg(..) => 3,
        Pow(..) => 4,
        Num(x) if *x < 0.0 => 3,
        _ => 5,
    }
}

fn paren(f: &mut fmt::Formatter<'_>, e: &ClosedFormExpr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for ClosedFormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ClosedFormExpr::*;
        match self {
            Num(x) => write!(f, "{x}"),
            Var => f.write_str("s"),
            Unit(r) => write!(f, "exp(2πi·{}/{})", r.exponent(), r.order()),
            Pi => f.write_str("pi"),
            Sqrt(a) => write!(f, "sqrt({a})"),
            Neg(a) => {
                f.write_str("-")?;
                paren(f, a, 3)
            }
            Add(a, b) => {
                write!(f, "{a}+")?;
                paren(f, b, 2)
            }
            Sub(a, b) => {
                write!(f, "{a}-")?;
                paren(f, b, 2)
            }
            Mul(a, b) => {
                paren(f, a, 2)?;
                f.write_str("*")?;
                paren(f, b, 3)
            }
            Div(a, b) => {
                paren(f, a, 2)?;
                f.write_str("/")?;
                paren(f, b, 3)
            }
            Pow(a, b) => {
                paren(f, a, 5)?;
                f.write_str("^")?;
                paren(f, b, 5)
            }
            L(leaf) => f.write_str(&leaf.label),
            Kl { k, l, sign: None } => write!(f, "({k},{l})"),
            Kl {
                k,
                l,
                sign: Some(p),
            } => write!(f, "({k},{l})_{p}"),
            Sum(k) => write!(f, "{k}"),
            Named(n, _) | Ident(n) => f.write_str(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Label(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|x| x.1).collect();
            let v = text.parse::<f64>().map_err(|_| err(pos, "bad number"))?;
            out.push((pos, Tok::Num(v)));
        } else if c == 'L' && chars.get(i + 1).map(|x| x.1) == Some('_') {
            // L_{k} with optional ^{...}
            if chars.get(i + 2).map(|x| x.1) != Some('{') {
                return Err(err(pos, "label needs braces: L_{k}"));
            }
            let mut j = i + 3;
            while j < chars.len() && chars[j].1 != '}' {
                j += 1;
            }
            if j >= chars.len() {
                return Err(err(pos, "unterminated label"));
            }
            j += 1;
            if chars.get(j).map(|x| x.1) == Some('^') && chars.get(j + 1).map(|x| x.1) == Some('{')
            {
                let mut depth = 0;
                j += 1;
                loop {
                    match chars.get(j).map(|x| x.1) {
                        Some('{') => depth += 1,
                        Some('}') => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        None => return Err(err(pos, "unterminated superscript")),
                        _ => {}
                    }
                    j += 1;
                }
                j += 1;
            }
            let text: String = chars[i..j].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Label(canonical_label(&text))));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((
                pos,
                Tok::Name(chars[start..i].iter().map(|x| x.1).collect()),
            ));
        } else if "+-*/^(),".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(pos, &format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<ClosedFormExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = ClosedFormExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = ClosedFormExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ClosedFormExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = ClosedFormExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = ClosedFormExpr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ClosedFormExpr> {
        if self.eat('-') {
            return Ok(ClosedFormExpr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(ClosedFormExpr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn int_args(&mut self, name: &str, n: usize) -> Result<Vec<i64>> {
        self.expect('(')?;
        let mut out = Vec::with_capacity(n);
        for idx in 0..n {
            if idx > 0 {
                self.expect(',')?;
            }
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Num(v)) if v.fract() == 0.0 => {
                    self.pos += 1;
                    out.push(if neg { -(v as i64) } else { v as i64 });
                }
                _ => return self.err(format!("{name} takes {n} integer arguments")),
            }
        }
        self.expect(')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<ClosedFormExpr> {
        let tok = match self.peek().cloned() {
            Some(t) => t,
            None => return self.err("unexpected end of expression"),
        };
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(ClosedFormExpr::Num(v)),
            Tok::Label(label) => Ok(ClosedFormExpr::L(LLeaf {
                label,
                character: None,
            })),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op(c) => {
                self.pos -= 1;
                self.err(format!("unexpected '{c}'"))
            }
            Tok::Name(name) => self.named(&name),
        }
    }

    fn named(&mut self, name: &str) -> Result<ClosedFormExpr> {
        use ClosedFormExpr as E;
        Ok(match name {
            "s" => E::Var,
            "i" => E::Unit(RootOfUnity::new(4, 1)),
            "w" | "ω" => E::Unit(RootOfUnity::new(6, 1)),
            "tau" | "τ" => E::Unit(RootOfUnity::new(10, 1)),
            "phi" | "φ" => E::Unit(RootOfUnity::new(12, 1)),
            "pi" | "π" => E::Pi,
            "sqrt" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(')')?;
                E::Sqrt(Box::new(e))
            }
            "K" | "Kp" | "Km" => {
                let a = self.int_args(name, 2)?;
                if a[0] < 1 || a[1] < 1 || a[1] > a[0] {
                    return self.err(format!("({},{}) needs 1 ≤ l ≤ k", a[0], a[1]));
                }
                let sign = match name {
                    "Kp" => Some(Parity::Positive),
                    "Km" => Some(Parity::Negative),
                    _ => None,
                };
                E::Kl {
                    k: a[0] as u64,
                    l: a[1] as u64,
                    sign,
                }
            }
            "Q" => {
                let a = self.int_args(name, 3)?;
                E::Sum(SumKind::Q {
                    a: a[0],
                    b: a[1],
                    c: a[2],
                })
            }
            "S" | "sigma" => {
                let a = self.int_args(name, 3)?;
                let (p, r, j) = (a[0], a[1], a[2]);
                E::Sum(if name == "S" {
                    SumKind::S { p, r, j }
                } else {
                    SumKind::Sigma { p, r, j }
                })
            }
            "T" => {
                let a = self.int_args(name, 1)?;
                E::Sum(SumKind::T { r: a[0] })
            }
            other => E::Ident(other.to_string()),
        })
    }
}

/// Parse an expression; identifiers are left unbound.
pub fn parse_expr(src: &str) -> Result<ClosedFormExpr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    if let Some(k) = e.sums().into_iter().find(|k| k.validate().is_err()) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("invalid lattice sum {k}"),
        });
    }
    Ok(e)
}

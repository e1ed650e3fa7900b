use std::time::Instant;

use dirichlet_lattice::catalog::{
    build_catalog, functional_equation_check, pole_expansion_check, verify, zero_expansion_check,
    Catalog, VerificationRecord,
};
use dirichlet_lattice::chars::format_value;
use dirichlet_lattice::lseries::{
    special_value_negative_parity, special_value_positive_parity, symbol_listing,
};
use dirichlet_lattice::sums::{q_sum_capped, s_sum_capped, sigma_sum_capped, t_direct, t_via_kl};
use dirichlet_lattice::{
    character_by_label, enumerate_characters, euler_phi, l_series, unit_group, Complex64,
    DirichletCharacter, Error, ExactSpecialValue, Parity, SumResult,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, LseriesArgs, SumCommand, VerifyArgs};
use crate::output::Record;

/// What a command produced: its records, and whether every check in it held.
pub struct Outcome {
    pub records: Vec<Record>,
    pub ok: bool,
    /// One-line summary for the diagnostic stream.
    pub note: Option<String>,
}

impl Outcome {
    fn data(records: Vec<Record>) -> Self {
        Outcome {
            records,
            ok: true,
            note: None,
        }
    }
}

fn record(v: impl Serialize) -> Record {
    match serde_json::to_value(v) {
        Ok(Value::Object(m)) => m,
        other => panic!("records serialize to objects, got {other:?}"),
    }
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn run(command: &Command, timings: bool) -> Result<Outcome, Error> {
    match command {
        Command::Characters { modulus } => Ok(Outcome::data(characters(*modulus))),
        Command::Lseries(a) => lseries(a).map(Outcome::data),
        Command::Sum(cmd) => sum(cmd, timings).map(Outcome::data),
        Command::Verify(a) => run_verify(a, timings),
        Command::Funceq { r, s, tol } => {
            let rec = functional_equation_check(*r, *s, *tol)?;
            Ok(Outcome {
                ok: rec.pass,
                records: vec![verification(&rec, timings)],
                note: None,
            })
        }
        Command::Pole { r, tol } => {
            let p = pole_expansion_check(*r, *tol)?;
            Ok(Outcome {
                ok: p.pass,
                records: vec![record(&p)],
                note: None,
            })
        }
        Command::Zero { r, tol } => {
            let z = zero_expansion_check(*r, *tol)?;
            Ok(Outcome {
                ok: z.pass,
                records: vec![record(&z)],
                note: None,
            })
        }
        Command::Table1 { s } => table1(*s),
    }
}

fn characters(k: u64) -> Vec<Record> {
    let base = unit_group(k).1.exponent();
    // the paired (k,l)_± notation once the plain listing gets long
    let signed = euler_phi(k) > 6;
    enumerate_characters(k)
        .iter()
        .map(|chi| {
            let values: Vec<String> = (1..=k as i64)
                .filter(|&n| !chi.value(n).is_zero())
                .map(|n| format_value(chi.value(n), base))
                .collect();
            let mut r = Record::new();
            r.insert("label".into(), json!(chi.label()));
            r.insert("parity".into(), json!(chi.parity().to_string()));
            r.insert("real".into(), json!(chi.is_real()));
            r.insert("primitive".into(), json!(chi.is_primitive()));
            r.insert("conductor".into(), json!(chi.conductor()));
            r.insert("values".into(), json!(values));
            r.insert("induced".into(), json!(chi.induced_form()));
            r.insert("series".into(), json!(symbol_listing(chi, signed)));
            r
        })
        .collect()
}

fn exact_value(chi: &DirichletCharacter, m: u32) -> Option<ExactSpecialValue> {
    let fits = (m % 2 == 1) == (chi.parity() == Parity::Negative);
    if !fits || !chi.is_real() || !chi.is_primitive() {
        return None;
    }
    if m % 2 == 1 {
        special_value_negative_parity(chi, m).ok()
    } else {
        special_value_positive_parity(chi, m).ok()
    }
}

fn lseries(a: &LseriesArgs) -> Result<Vec<Record>, Error> {
    if let Some(label) = &a.label {
        let chi = character_by_label(label)?;
        let value = l_series(&chi, a.s)?;
        let m = a.s.re as u32;
        let exact = (a.s.im == 0.0 && a.s.re == m as f64 && m >= 1)
            .then(|| exact_value(&chi, m))
            .flatten();
        let mut r = Record::new();
        r.insert("label".into(), json!(chi.label()));
        r.insert("s".into(), complex(a.s));
        r.insert("value".into(), complex(value));
        r.insert("exact".into(), json!(exact.as_ref().map(|e| e.to_string())));
        r.insert(
            "exact_value".into(),
            json!(exact.as_ref().map(|e| e.to_f64())),
        );
        return Ok(vec![r]);
    }
    let k = a.modulus.expect("clap requires --label or --modulus");
    let mut out = Vec::new();
    for chi in enumerate_characters(k) {
        if a.list {
            for &m in &a.m {
                let Some(exact) = exact_value(&chi, m) else {
                    continue;
                };
                let float = l_series(&chi, Complex64::new(m as f64, 0.0))?.re;
                let e = exact.to_f64();
                let mut r = Record::new();
                r.insert("label".into(), json!(chi.label()));
                r.insert("m".into(), json!(m));
                r.insert("exact".into(), json!(exact.to_string()));
                r.insert("exact_value".into(), json!(e));
                r.insert("series_value".into(), json!(float));
                r.insert("rel_diff".into(), json!((e - float).abs() / e.abs()));
                out.push(r);
            }
        } else {
            let mut r = Record::new();
            r.insert("label".into(), json!(chi.label()));
            r.insert("induced".into(), json!(chi.induced_form()));
            r.insert("s".into(), complex(a.s));
            r.insert("value".into(), complex(l_series(&chi, a.s)?));
            out.push(r);
        }
    }
    Ok(out)
}

fn sum_record(name: String, s: Complex64, method: &str, res: &SumResult, timings: bool) -> Record {
    let mut r = Record::new();
    r.insert("sum".into(), json!(name));
    r.insert("s".into(), complex(s));
    r.insert("method".into(), json!(method));
    r.insert("value".into(), complex(res.value));
    r.insert("error".into(), json!(res.error));
    r.insert("terms".into(), json!(res.terms));
    r.insert("radius".into(), json!(res.radius));
    if timings {
        r.insert("secs".into(), json!(res.elapsed_secs));
    }
    r
}

fn sum(cmd: &SumCommand, timings: bool) -> Result<Vec<Record>, Error> {
    let rec = match cmd {
        SumCommand::Q { a, b, c, common: x } => {
            let res = q_sum_capped(*a, *b, *c, x.s, x.tol, x.cap)?;
            sum_record(format!("Q({a},{b},{c})"), x.s, "shells", &res, timings)
        }
        SumCommand::S { pj, common: x } => {
            let res = s_sum_capped(pj.p, pj.r, pj.j, x.s, x.tol, x.cap)?;
            sum_record(
                format!("S({},{},{})", pj.p, pj.r, pj.j),
                x.s,
                "shells",
                &res,
                timings,
            )
        }
        SumCommand::Sigma { pj, common: x } => {
            let res = sigma_sum_capped(pj.p, pj.r, pj.j, x.s, x.tol, x.cap)?;
            sum_record(
                format!("sigma({},{},{})", pj.p, pj.r, pj.j),
                x.s,
                "shells",
                &res,
                timings,
            )
        }
        SumCommand::T {
            r,
            s,
            direct: true,
            cap,
        } => {
            let res = t_direct(*r, *s, *cap)?;
            sum_record(
                format!("T({r})"),
                *s,
                "direct (empirical error)",
                &res,
                timings,
            )
        }
        SumCommand::T {
            r,
            s,
            direct: false,
            ..
        } => {
            let start = Instant::now();
            let value = t_via_kl(*r, *s)?;
            let res = SumResult {
                value,
                error: dirichlet_lattice::catalog::LEAF_REL_ERROR * value.norm(),
                terms: 0,
                radius: 0,
                elapsed_secs: start.elapsed().as_secs_f64(),
            };
            sum_record(format!("T({r})"), *s, "hurwitz", &res, timings)
        }
    };
    Ok(vec![rec])
}

fn verification(rec: &VerificationRecord, timings: bool) -> Record {
    let mut r = record(rec);
    if timings {
        r.insert("lhs_secs".into(), json!(rec.lhs_secs));
        r.insert("rhs_secs".into(), json!(rec.rhs_secs));
    }
    r
}

/// `table1.rN` is the table's own numbering of `t.rN`.
fn catalog_id(id: &str) -> String {
    match id.strip_prefix("table1.r") {
        Some(rest) => format!("t.r{rest}"),
        None => id.to_string(),
    }
}

fn run_verify(a: &VerifyArgs, timings: bool) -> Result<Outcome, Error> {
    let cat = build_catalog();
    let mut ids: Vec<String> = Vec::new();
    if a.all {
        ids.extend(cat.identities.iter().map(|i| i.id.clone()));
    }
    ids.extend(a.id.iter().map(|i| catalog_id(i)));
    for g in &a.group {
        let before = ids.len();
        ids.extend(cat.group(g).map(|i| i.id.clone()));
        if ids.len() == before {
            return Err(Error::Catalog(format!("no identities in group {g}")));
        }
    }
    let mut seen = std::collections::HashSet::new();
    ids.retain(|i| seen.insert(i.clone()));

    let recs = verify(&cat, &ids, &a.s_grid, a.tol)?;
    let unexpected = recs.iter().filter(|r| r.is_unexpected_failure()).count();
    let literal = recs.iter().filter(|r| r.expected_fail && !r.pass).count();
    let note = format!(
        "{} records: {} pass, {} literal readings fail as documented, {} unexpected failures",
        recs.len(),
        recs.iter().filter(|r| r.pass).count(),
        literal,
        unexpected
    );
    Ok(Outcome {
        ok: unexpected == 0,
        records: recs.iter().map(|r| verification(r, timings)).collect(),
        note: Some(note),
    })
}

fn table1(s: Complex64) -> Result<Outcome, Error> {
    let cat: Catalog = build_catalog();
    let mut records = Vec::new();
    let mut ok = true;
    for r in 1..=13 {
        let id = format!("t.r{r}");
        let ident = cat
            .get(&id)
            .ok_or_else(|| Error::Catalog(format!("missing {id}")))?;
        let literal_id = format!("{id}.literal");
        let mut ids = vec![id.clone()];
        if cat.get(&literal_id).is_some() {
            ids.push(literal_id.clone());
        }
        let recs = verify(&cat, &ids, &[s], Some(1e-10))?;
        let main = &recs[0];
        let literal = recs.get(1);
        ok &= main.pass;
        let mut row = Record::new();
        row.insert("r".into(), json!(r));
        row.insert("closed_form".into(), json!(cat.typeset(&ident.rhs_text)));
        row.insert("lhs".into(), main.lhs.map(complex).unwrap_or(Value::Null));
        row.insert("rhs".into(), main.rhs.map(complex).unwrap_or(Value::Null));
        row.insert("rel_err".into(), json!(main.rel_err));
        row.insert("pass".into(), json!(main.pass));
        row.insert("literal_rel_err".into(), json!(literal.map(|l| l.rel_err)));
        records.push(row);
    }
    Ok(Outcome {
        records,
        ok,
        note: None,
    })
}

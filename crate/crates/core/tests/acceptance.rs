//! Acceptance criteria, one line each. Runs without the test harness so the
//! report reads top to bottom; exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::listings::{real_primitive_count_law, row_strings, LISTINGS};
use common::{c, class_number, fundamental_unit, rel};
use dirichlet_lattice::catalog::{
    build_catalog, class_number_spotcheck, functional_equation_check, pole_expansion_check, verify,
    zero_expansion_check, Catalog, VerificationRecord, C_CONSTANT,
};
use dirichlet_lattice::chars::property_violations;
use dirichlet_lattice::lseries::{special_value_negative_parity, special_value_positive_parity};
use dirichlet_lattice::specfun::{hurwitz_zeta, riemann_zeta, theta3, theta_residue};
use dirichlet_lattice::{
    character_by_label, enumerate_characters, l_series, unit_group, Complex64, Parity,
};
use num::{BigInt, BigRational};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn ids_in(cat: &Catalog, groups: &[&str]) -> Vec<String> {
    cat.identities
        .iter()
        .filter(|i| groups.contains(&i.group.as_str()))
        .map(|i| i.id.clone())
        .collect()
}

/// Every non-literal record passes; every literal one fails and its correction passes.
fn judge(recs: &[VerificationRecord], cat: &Catalog) -> Outcome {
    let mut typos = Vec::new();
    let mut worst: f64 = 0.0;
    for r in recs {
        if r.expected_fail {
            ensure!(!r.pass, "literal reading {} holds at {}", r.id, r.s);
            let fixed = cat
                .get(&r.id)
                .and_then(|i| i.corrects.clone())
                .unwrap_or_default();
            ensure!(
                recs.iter().any(|x| x.id == fixed && x.s == r.s && x.pass),
                "correction {fixed} of {} not verified at {}",
                r.id,
                r.s
            );
            typos.push(r.id.clone());
        } else {
            ensure!(
                r.pass,
                "{} at {}: rel {:.2e} ({:?})",
                r.id,
                r.s,
                r.rel_err,
                r.reason
            );
            worst = worst.max(r.rel_err / r.tol);
        }
    }
    typos.sort();
    typos.dedup();
    Ok(format!(
        "{} records, worst rel/tol {:.2e}; literal readings rejected: {}",
        recs.len(),
        worst,
        if typos.is_empty() {
            "none".to_string()
        } else {
            typos.join(", ")
        }
    ))
}

fn listings() -> Outcome {
    let mut rows = 0;
    for &(k, listing) in LISTINGS {
        let chars = enumerate_characters(k);
        ensure!(
            chars.len() == listing.len(),
            "k = {k}: {} characters",
            chars.len()
        );
        for &(label, row, factor) in listing {
            let chi = chars
                .iter()
                .find(|c| c.label() == label)
                .ok_or(format!("k = {k}: no {label}"))?;
            ensure!(
                row_strings(k, chi) == row,
                "k = {k}, {label}: {:?}",
                row_strings(k, chi)
            );
            ensure!(
                chi.induced_form() == format!("{factor}{label}"),
                "k = {k}, {label}: {}",
                chi.induced_form()
            );
            rows += 1;
        }
    }
    Ok(format!("{rows} rows over {} moduli", LISTINGS.len()))
}

fn real_primitive_counts() -> Outcome {
    for k in 1..=50u64 {
        let n = enumerate_characters(k)
            .iter()
            .filter(|c| c.is_real() && c.is_primitive())
            .count();
        ensure!(n == real_primitive_count_law(k), "k = {k}: {n}");
    }
    let eight: Vec<String> = enumerate_characters(8)
        .into_iter()
        .filter(|c| c.is_real() && c.is_primitive())
        .map(|c| c.label().to_string())
        .collect();
    ensure!(eight.len() == 2, "k = 8: {eight:?}");
    Ok(format!("k <= 50; k = 8 has {}", eight.join(", ")))
}

fn square_lattice(cat: &Catalog) -> Outcome {
    let recs = verify(cat, &["lorenz-hardy".into()], &[c(2.0), c(3.0)], Some(1e-8))
        .map_err(|e| e.to_string())?;
    for r in &recs {
        ensure!(r.pass, "s = {}: rel {:.2e}", r.s, r.rel_err);
    }
    let parts: Vec<String> = recs
        .iter()
        .map(|r| format!("s={} rel {:.1e}", r.s.re, r.rel_err))
        .collect();
    Ok(parts.join(", "))
}

fn catalog_groups(cat: &Catalog, groups: &[&str], grid: &[Complex64], tol: f64) -> Outcome {
    let recs = verify(cat, &ids_in(cat, groups), grid, Some(tol)).map_err(|e| e.to_string())?;
    judge(&recs, cat)
}

fn functional_equation() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in 1..=3 {
        for s in [c(0.25), Complex64::new(0.3, 0.2), c(0.7)] {
            let rec = functional_equation_check(r, s, 1e-8).map_err(|e| e.to_string())?;
            ensure!(rec.pass, "r = {r}, s = {s}: rel {:.2e}", rec.rel_err);
            worst = worst.max(rec.rel_err);
        }
    }
    Ok(format!("r = 1..3, worst rel {worst:.1e}"))
}

fn pole() -> Outcome {
    let mut parts = Vec::new();
    for r in 1..=3u64 {
        let p = pole_expansion_check(r, 1e-6).map_err(|e| e.to_string())?;
        ensure!(p.pass, "r = {r}: {p:?}");
        let expected = C_CONSTANT[r as usize - 1]();
        ensure!(
            (p.c_fit - expected).abs() < 1e-5,
            "r = {r}: C {} vs {expected}",
            p.c_fit
        );
        parts.push(format!("C({r}) = {:.6}", p.c_fit));
    }
    Ok(parts.join(", "))
}

fn zero() -> Outcome {
    for r in 1..=3u64 {
        let z = zero_expansion_check(r, 1e-6).map_err(|e| e.to_string())?;
        ensure!(z.pass, "r = {r}: {z:?}");
        ensure!(
            (z.slope - 2.0 * (PI / r as f64).ln()).abs() < 1e-6,
            "r = {r}: slope {}",
            z.slope
        );
    }
    Ok("r = 1..3".into())
}

fn special_values() -> Outcome {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let cases = [
        ("L_{-4}", 1, q(1, 8), PI / 4.0),
        ("L_{-3}", 1, q(1, 9), PI / (3.0 * 3f64.sqrt())),
        ("L_{-4}", 3, q(1, 64), PI.powi(3) / 32.0),
        ("L_{1}", 2, q(1, 6), PI * PI / 6.0),
        ("L_{5}", 2, q(4, 125), 4.0 * PI * PI / (25.0 * 5f64.sqrt())),
        ("L_{8}", 2, q(1, 32), PI * PI / (8.0 * 2f64.sqrt())),
    ];
    let mut worst: f64 = 0.0;
    for (label, m, r, value) in cases {
        let chi = character_by_label(label).map_err(|e| e.to_string())?;
        let exact = if m % 2 == 1 {
            special_value_negative_parity(&chi, m)
        } else {
            special_value_positive_parity(&chi, m)
        }
        .map_err(|e| e.to_string())?;
        ensure!(
            exact.rational == r,
            "{label}({m}): rational {}",
            exact.rational
        );
        ensure!(
            (exact.to_f64() - value).abs() < 1e-14 * value,
            "{label}({m}): {}",
            exact.to_f64()
        );
        let float = l_series(&chi, c(m as f64)).map_err(|e| e.to_string())?.re;
        let e = (float - value).abs() / value;
        ensure!(e < 1e-11, "{label}({m}): series {float} rel {e:.2e}");
        worst = worst.max(e);
    }
    Ok(format!("6 values, worst rel {worst:.1e}"))
}

fn properties() -> Outcome {
    for k in 1..=50u64 {
        let chars = enumerate_characters(k);
        let units = unit_group(k).0;
        // orthogonality over units: the row sum of χ(a)χ̄(b) is φ(k) or 0
        for &a in &units {
            for &b in &units {
                let sum: Complex64 = chars
                    .iter()
                    .map(|c| c.value(a as i64).mul(c.value(b as i64).conj()).to_complex())
                    .sum();
                let want = if a == b { chars.len() as f64 } else { 0.0 };
                ensure!(
                    (sum - c(want)).norm() < 1e-9,
                    "k = {k}: orthogonality at ({a}, {b})"
                );
            }
        }
        if k >= 3 {
            let pos = chars
                .iter()
                .filter(|c| c.parity() == Parity::Positive)
                .count();
            ensure!(
                2 * pos == chars.len(),
                "k = {k}: parity split {pos}/{}",
                chars.len()
            );
        }
        let v: Vec<_> = property_violations(k)
            .into_iter()
            .filter(|x| {
                !matches!(
                    x,
                    dirichlet_lattice::chars::PropertyViolation::AmbiguousLabel { .. }
                )
            })
            .collect();
        ensure!(v.is_empty(), "k = {k}: {v:?}");
    }
    for s in [c(1.5), c(2.5), Complex64::new(2.0, 3.0)] {
        let zeta = riemann_zeta(s).map_err(|e| e.to_string())?;
        for m in 2..=7u32 {
            let mut lhs = Complex64::new(0.0, 0.0);
            for l in 1..=m {
                lhs += hurwitz_zeta(s, l as f64 / m as f64).map_err(|e| e.to_string())?;
            }
            let rhs = (s * (m as f64).ln()).exp() * zeta;
            ensure!(
                rel(lhs, rhs) < 1e-12,
                "multiplication m = {m}, s = {s}: {:.2e}",
                rel(lhs, rhs)
            );
        }
    }
    for qv in [0.1, 0.5, 0.9] {
        let full = theta3(qv).map_err(|e| e.to_string())?;
        for j in 1..=8u32 {
            let parts: f64 = (0..j).map(|p| theta_residue(j, p, qv).unwrap()).sum();
            ensure!(
                (parts - full).abs() < 1e-14 * full,
                "theta partition j = {j}, q = {qv}"
            );
        }
    }
    Ok("characters k <= 50, Hurwitz multiplication m <= 7, theta partition j <= 8".into())
}

fn class_numbers() -> Outcome {
    let mut parts = Vec::new();
    for k in [5u64, 8, 12] {
        let h = class_number(k as i64);
        let eps = fundamental_unit(k).0;
        let rec = class_number_spotcheck(k, h, eps, 1e-10).map_err(|e| e.to_string())?;
        ensure!(rec.pass, "k = {k}: rel {:.2e}", rec.rel_err);
        parts.push(format!("k={k} h={h} eps={eps:.6}"));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let cat = build_catalog();
    let c2 = [c(2.0)];
    let t_grid = [c(1.5), c(2.0), c(3.0), Complex64::new(2.0, 1.0)];
    let s_groups = [
        "s-in-q", "j2", "j3", "j4", "j5", "j6", "j7", "j8", "j9", "j10",
    ];
    let criteria: Vec<(&str, f64, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("character listings", 1.0, Box::new(listings)),
        (
            "real primitive counts",
            5.0,
            Box::new(real_primitive_counts),
        ),
        (
            "square lattice sum",
            30.0,
            Box::new(|| square_lattice(&cat)),
        ),
        (
            "quadratic-form catalog",
            300.0,
            Box::new(|| catalog_groups(&cat, &["q"], &c2, 1e-6)),
        ),
        (
            "displaced-sum catalog",
            1200.0,
            Box::new(|| catalog_groups(&cat, &s_groups, &c2, 1e-6)),
        ),
        (
            "indefinite-form table",
            10.0,
            Box::new(|| catalog_groups(&cat, &["t"], &t_grid, 1e-10)),
        ),
        ("functional equation", 5.0, Box::new(functional_equation)),
        ("pole expansion", 5.0, Box::new(pole)),
        ("zero expansion", 5.0, Box::new(zero)),
        ("exact special values", 5.0, Box::new(special_values)),
        ("property suites", 120.0, Box::new(properties)),
        ("class numbers", 5.0, Box::new(class_numbers)),
    ];
    let mut failed = 0;
    for (n, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match outcome {
            Ok(d) if secs <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; took {secs:.1} s, limit {limit} s")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {name}: {detail} [{secs:.2} s]",
            if ok { "PASS" } else { "FAIL" },
            n + 1
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

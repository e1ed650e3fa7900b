mod common;

use std::f64::consts::PI;

use common::{c, catalan_ref, q_ref, rel, s_ref, square_sum, zeta_ref};
use dirichlet_lattice::sums::{
    q_sum, q_sum_capped, q_tail_bound, q_theta_mellin, s_sum, s_sum_via_theta, s_tail_bound,
    sigma_sum, t_direct, t_via_kl, QuadratureSpec,
};
use dirichlet_lattice::{character_by_label, l_series, Complex64, Error, SumKind, SumSpec};

fn close(a: Complex64, b: Complex64, allowed: f64) -> bool {
    (a - b).norm() <= allowed
}

#[test]
fn square_lattice_sum() {
    let exact = 4.0 * zeta_ref(2.0) * catalan_ref();
    let q = q_sum(1, 0, 1, c(2.0), 1e-7).unwrap();
    assert!((q.value.re - 6.026812).abs() < 1e-6);
    assert!(close(q.value, c(exact), q.error + 1e-12 * exact));
    assert!(q.error <= 1e-7 * exact);
    let exact3 = 4.0 * zeta_ref(3.0) * PI.powi(3) / 32.0;
    let q3 = q_sum(1, 0, 1, c(3.0), 1e-10).unwrap();
    assert!(close(q3.value, c(exact3), q3.error + 1e-12 * exact3));
}

#[test]
fn quadratic_forms_against_reference() {
    for (a, b, cc) in [(1, 1, 1), (1, 1, 2), (2, 1, 3), (1, 0, 5), (3, 2, 3)] {
        for (s, tol) in [(2.0, 1e-7), (3.0, 1e-10)] {
            let q = q_sum(a, b, cc, c(s), tol).unwrap();
            let oracle = q_ref(a, b, cc, s, 400);
            assert!(
                close(q.value, c(oracle), q.error + 1e-10 * oracle),
                "Q({a},{b},{cc};{s}): {} vs {oracle}",
                q.value
            );
            assert_eq!(q.value.im, 0.0);
        }
    }
}

#[test]
fn complex_exponent() {
    let s = Complex64::new(2.5, 1.0);
    let q = q_sum(1, 0, 1, s, 1e-8).unwrap();
    let l1 = l_series(&character_by_label("L_{1}").unwrap(), s).unwrap();
    let l4 = l_series(&character_by_label("L_{-4}").unwrap(), s).unwrap();
    let rhs = 4.0 * l1 * l4;
    assert!(close(q.value, rhs, q.error + 1e-12 * rhs.norm()));
}

#[test]
fn tail_bounds_cover_the_omitted_shells() {
    for (a, b, cc) in [(1, 0, 1), (1, 1, 2), (2, 1, 3), (1, 0, 9), (5, 2, 10)] {
        for s in [1.5, 2.0, 3.0] {
            let f = |m: i64, n: i64| {
                let x = a * m * m + b * m * n + cc * n * n;
                if x == 0 {
                    0.0
                } else {
                    (x as f64).powf(-s)
                }
            };
            let full = q_ref(a, b, cc, s, 300);
            for r in [20u64, 40, 80] {
                let bound = q_tail_bound(a, b, cc, s, r).bound;
                let at_r = square_sum(r as i64, f);
                let at_2r = square_sum(2 * r as i64, f);
                assert!(
                    at_2r - at_r <= bound,
                    "Q({a},{b},{cc};{s}) R={r}: refinement"
                );
                assert!(full - at_r <= bound, "Q({a},{b},{cc};{s}) R={r}: full tail");
            }
        }
    }
    for (p, r, j) in [(1, 1, 2), (0, 1, 3), (1, 2, 5), (3, 3, 7), (0, 0, 4)] {
        for s in [1.5, 2.0, 3.0] {
            // centred offsets, as the shells are taken about the nearest lattice point
            let centre = |x: i64| {
                let x = x.rem_euclid(j);
                if 2 * x > j {
                    x - j
                } else {
                    x
                }
            };
            let (dx, dy) = (centre(p) as f64 / j as f64, centre(r) as f64 / j as f64);
            let f = |m: i64, n: i64| {
                let x = (m as f64 + dx).powi(2) + (n as f64 + dy).powi(2);
                if x == 0.0 {
                    0.0
                } else {
                    x.powf(-s)
                }
            };
            let full = s_ref(p, r, j, s, 300);
            for rr in [20u64, 40, 80] {
                let bound = s_tail_bound(s, rr).bound;
                let at_r = square_sum(rr as i64, f);
                assert!(full - at_r <= bound, "S({p},{r},{j};{s}) R={rr}");
                assert!(full - at_r >= 0.0);
            }
        }
    }
}

#[test]
fn form_symmetries() {
    let s = c(3.0);
    for (a, b, cc) in [(1, 1, 2), (2, 1, 3), (1, 0, 4), (3, 2, 7)] {
        let base = q_sum(a, b, cc, s, 1e-10).unwrap();
        for other in [
            q_sum(cc, b, a, s, 1e-10).unwrap(),
            q_sum(a, -b, cc, s, 1e-10).unwrap(),
        ] {
            assert!(close(
                base.value,
                other.value,
                base.error + other.error + 1e-13
            ));
        }
    }
}

#[test]
fn displaced_sums() {
    // offsets on the lattice itself give back the square lattice sum
    let q = q_sum(1, 0, 1, c(3.0), 1e-10).unwrap();
    let s6 = s_sum(0, 0, 6, c(3.0), 1e-10).unwrap();
    assert!(close(q.value, s6.value, q.error + s6.error + 1e-13));
    let s2 = s_sum(2, 2, 2, c(3.0), 1e-10).unwrap();
    assert!(close(s2.value, q.value, q.error + s2.error + 1e-13));

    // S(1,1,2) = 2^{s+2}(1−2^{−s}) ζ(s) β(s) at s = 2
    let oracle = 12.0 * zeta_ref(2.0) * catalan_ref();
    let v = s_sum(1, 1, 2, c(2.0), 1e-7).unwrap();
    assert!(close(v.value, c(oracle), v.error + 1e-12 * oracle));

    for (p, r, j) in [(0, 1, 3), (1, 2, 5), (2, 3, 7), (1, 3, 8)] {
        let v = s_sum(p, r, j, c(3.0), 1e-10).unwrap();
        let oracle = s_ref(p, r, j, 3.0, 300);
        assert!(
            close(v.value, c(oracle), v.error + 1e-11 * oracle),
            "S({p},{r},{j})"
        );
    }
}

#[test]
fn displaced_symmetries() {
    let s = c(3.0);
    for (p, r, j) in [(1, 2, 5), (0, 1, 3), (2, 3, 7), (1, 4, 9), (3, 5, 10)] {
        let base = s_sum(p, r, j, s, 1e-10).unwrap();
        for (pp, rr) in [(r, p), (j - p, j - r)] {
            let other = s_sum(pp, rr, j, s, 1e-10).unwrap();
            assert!(
                close(base.value, other.value, base.error + other.error + 1e-12),
                "S({p},{r},{j})"
            );
        }
    }
}

#[test]
fn phased_sums() {
    let s = c(3.0);
    let q = q_sum(1, 0, 1, s, 1e-10).unwrap();
    let s0 = sigma_sum(0, 0, 4, s, 1e-10).unwrap();
    assert!(close(q.value, s0.value, q.error + s0.error + 1e-13));
    let a = sigma_sum(0, 1, 3, s, 1e-10).unwrap();
    let b = sigma_sum(3, 1, 3, s, 1e-10).unwrap();
    assert!(close(a.value, b.value, a.error + b.error + 1e-13));

    // σ(p,r,j) = j^{−2s} Σ_{u,v mod j} e^{2πi(up+vr)/j} S(u,v,j), with each S from the reference
    for (p, r, j) in [(1, 0, 3), (1, 1, 2), (1, 2, 5)] {
        let mut acc = Complex64::new(0.0, 0.0);
        for u in 0..j {
            for v in 0..j {
                let phase =
                    Complex64::from_polar(1.0, 2.0 * PI * ((u * p + v * r) % j) as f64 / j as f64);
                acc += phase * s_ref(u, v, j, 3.0, 200);
            }
        }
        acc /= (j as f64).powi(6);
        let got = sigma_sum(p, r, j, s, 1e-10).unwrap();
        assert!(
            close(got.value, acc, got.error + 1e-11 * acc.norm()),
            "σ({p},{r},{j}): {} vs {acc}",
            got.value
        );
    }
}

#[test]
fn theta_route() {
    let spec = QuadratureSpec::default();
    for lambda in 1..=16u32 {
        let theta = q_theta_mellin(lambda, c(2.0), spec).unwrap();
        let oracle = q_ref(1, 0, lambda as i64, 2.0, 600);
        assert!(
            rel(theta, c(oracle)) < 1e-9,
            "λ = {lambda}: {theta} vs {oracle}"
        );
    }
    for (p, r, j) in [(1, 1, 2), (0, 1, 3), (1, 2, 5), (0, 0, 6)] {
        let theta = s_sum_via_theta(p, r, j, c(2.0), spec).unwrap();
        let oracle = s_ref(p, r, j, 2.0, 600);
        assert!(
            rel(theta, c(oracle)) < 1e-9,
            "S({p},{r},{j}): {theta} vs {oracle}"
        );
    }
    assert!(q_theta_mellin(1, c(1.0), spec).is_err());
}

#[test]
fn residues_of_displaced_values() {
    for j in [5i64, 7] {
        for p in 0..j {
            for r in 0..j {
                let target = (p * p + r * r).rem_euclid(j);
                let span = 2000f64.sqrt() as i64 / j + 2;
                for m in -span..=span {
                    for n in -span..=span {
                        let x = (j * m + p).pow(2) + (j * n + r).pow(2);
                        if x > 0 && x <= 2000 {
                            assert_eq!(x.rem_euclid(j), target, "({p},{r},{j}) n = {x}");
                        }
                    }
                }
            }
        }
    }
    // S(0,1,5): only n ≡ 1 (mod 5)
    for m in -10i64..=10 {
        for n in -10i64..=10 {
            let x = (5 * m).pow(2) + (5 * n + 1).pow(2);
            assert_eq!(x % 5, 1);
        }
    }
}

#[test]
fn indefinite_sum_through_symbols() {
    for s in [2.0, 3.0, 4.5] {
        let z = zeta_ref(s);
        let f = 1.0 - 2f64.powf(1.0 - s) + 2f64.powf(1.0 - 2.0 * s);
        let t1 = t_via_kl(1, c(s)).unwrap();
        assert!(rel(t1, c(4.0 * f * z * z)) < 1e-12, "r=1 s={s}");
        // r = 2: (4,1)+(4,3) = (1−2^{−s})ζ(s)
        let pair = (1.0 - 2f64.powf(-s)) * z;
        let t2 = t_via_kl(2, c(s)).unwrap();
        let oracle = 4.0 * 4f64.powf(-s) * f * z * z + 2.0 * pair * pair;
        assert!(rel(t2, c(oracle)) < 1e-12, "r=2 s={s}");
    }
    assert!(matches!(t_via_kl(1, c(1.0)), Err(Error::Pole(_))));
    assert!(t_via_kl(0, c(2.0)).is_err());
    assert_eq!(t_via_kl(3, c(2.0)).unwrap().im, 0.0);
}

#[test]
fn indefinite_direct_sum_converges() {
    for r in 1..=4u64 {
        for (s, cap) in [(4.0, 800u64), (3.0, 1600)] {
            let exact = t_via_kl(r, c(s)).unwrap();
            let coarse = t_direct(r, c(s), cap / 4).unwrap();
            let fine = t_direct(r, c(s), cap).unwrap();
            let (e_coarse, e_fine) = ((coarse.value - exact).norm(), (fine.value - exact).norm());
            assert!(e_fine <= e_coarse, "r={r} s={s}");
            assert!(
                e_fine <= 10.0 * fine.error + 1e-12,
                "r={r} s={s}: {e_fine:e} vs estimate {:e}",
                fine.error
            );
            assert!(e_fine / exact.norm() < 1e-4, "r={r} s={s}");
        }
    }
    assert!(t_direct(1, c(1.0), 100).is_err());
}

#[test]
fn direct_sums_need_convergence() {
    assert!(matches!(
        q_sum(1, 0, 1, c(1.0), 1e-6),
        Err(Error::NonConvergent(_))
    ));
    assert!(matches!(
        s_sum(1, 1, 2, Complex64::new(0.5, 3.0), 1e-6),
        Err(Error::NonConvergent(_))
    ));
    assert!(sigma_sum(1, 1, 2, c(0.9), 1e-6).is_err());
    assert!(matches!(
        q_sum(1, 3, 1, c(2.0), 1e-6),
        Err(Error::IndefiniteForm { .. })
    ));
    assert!(s_sum(1, 9, 8, c(2.0), 1e-6).is_err());
    assert!(matches!(
        q_sum_capped(1, 0, 1, c(1.1), 1e-9, 100),
        Err(Error::Budget { .. })
    ));
    assert!(SumKind::T { r: 0 }.validate().is_err());
    let spec = SumSpec {
        kind: SumKind::T { r: 2 },
        s: Complex64::new(0.3, 0.2),
    };
    assert!(spec.evaluate(1e-6).is_ok());
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let run = || {
        (
            q_sum(1, 1, 2, c(2.0), 1e-6).unwrap().value,
            s_sum(1, 2, 5, Complex64::new(2.0, 1.0), 1e-6)
                .unwrap()
                .value,
            sigma_sum(1, 2, 3, c(2.5), 1e-6).unwrap().value,
        )
    };
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(run);
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(run);
    assert_eq!(one, four);
}

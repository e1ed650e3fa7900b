//! Independent reference computations for the integration tests. Nothing here
//! goes through the Hurwitz zeta code: values come from plain partial sums
//! with explicit tail corrections.
#![allow(dead_code)]

pub mod listings;

use dirichlet_lattice::Complex64;
use std::collections::BTreeSet;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// ζ(s) for real s > 1: partial sum to N plus the trapezoid tail
/// N^{1−s}/(s−1) − N^{−s}/2 + sN^{−s−1}/12, whose error is O(N^{−s−3}).
pub fn zeta_ref(s: f64) -> f64 {
    let n = 20_000u64;
    // smallest terms first
    let mut sum = 0.0;
    for k in (1..n).rev() {
        sum += (k as f64).powf(-s);
    }
    let nf = n as f64;
    sum + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
}

/// Σ_{n≥1} a(n) n^{−s} for a k-periodic coefficient sequence with zero mean
/// over a period. Partial sums are averaged over the final period, which
/// cancels the leading boundary oscillation.
pub fn periodic_series_ref(k: u64, a: impl Fn(u64) -> Complex64, s: f64) -> Complex64 {
    let periods = (2_000_000 / k).max(1);
    let n_max = periods * k;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut avg = Complex64::new(0.0, 0.0);
    for n in 1..=n_max + k {
        sum += a(n % k) * (n as f64).powf(-s);
        if n > n_max {
            avg += sum;
        }
    }
    avg / k as f64
}

/// Catalan's constant β(2) from the alternating series, accelerated by
/// repeated averaging of consecutive partial sums.
pub fn catalan_ref() -> f64 {
    alternating(|n| 1.0 / ((2 * n + 1) as f64).powi(2))
}

/// Σ (−1)^n b(n) for decreasing positive b, via iterated averaging.
pub fn alternating(b: impl Fn(u64) -> f64) -> f64 {
    let m = 40;
    let mut partial = Vec::with_capacity(m);
    let mut s = 0.0;
    for n in 0..m as u64 {
        s += if n % 2 == 0 { b(n) } else { -b(n) };
        partial.push(s);
    }
    while partial.len() > 1 {
        partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    partial[0]
}

/// Brute-force double sum over the square max(|m|,|n|) ≤ R of f(m,n).
pub fn square_sum(r: i64, f: impl Fn(i64, i64) -> f64) -> f64 {
    let mut acc = 0.0;
    for m in -r..=r {
        for n in -r..=r {
            acc += f(m, n);
        }
    }
    acc
}

/// Σ' f(m+dx, n+dy)^{−s} over all of Z², f a positive definite binary
/// quadratic form. The box |m|,|n| ≤ R is summed directly; each lattice point
/// outside it stands for its unit cell, so the rest is replaced by the integral
/// of f^{−s} outside [−R−½+dx, R+½+dx] × [−R−½+dy, R+½+dy], done in polar
/// coordinates: ∫ f(θ)^{−s} ρ_b(θ)^{2−2s}/(2s−2) dθ. The midpoint-rule error
/// is O(R^{−2s}).
pub fn lattice_ref(f: impl Fn(f64, f64) -> f64, dx: f64, dy: f64, s: f64, r: i64) -> f64 {
    let mut near = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
    for m in -r..=r {
        for n in -r..=r {
            let q = f(m as f64 + dx, n as f64 + dy);
            if q > 0.0 {
                near.push(q.powf(-s));
            }
        }
    }
    near.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let head: f64 = near.iter().sum();

    let a = r as f64 + 0.5;
    let (x0, x1, y0, y1) = (-a + dx, a + dx, -a + dy, a + dy);
    let reach = |th: f64| {
        let (c, sn) = (th.cos(), th.sin());
        let tx = if c > 0.0 {
            x1 / c
        } else if c < 0.0 {
            x0 / c
        } else {
            f64::INFINITY
        };
        let ty = if sn > 0.0 {
            y1 / sn
        } else if sn < 0.0 {
            y0 / sn
        } else {
            f64::INFINITY
        };
        tx.min(ty)
    };
    let g =
        |th: f64| f(th.cos(), th.sin()).powf(-s) * reach(th).powf(2.0 - 2.0 * s) / (2.0 * s - 2.0);
    // the boundary distance has kinks at the four corner directions
    let mut cuts: Vec<f64> = [(x1, y1), (x0, y1), (x0, y0), (x1, y0)]
        .iter()
        .map(|&(x, y)| y.atan2(x).rem_euclid(std::f64::consts::TAU))
        .collect();
    cuts.push(0.0);
    cuts.push(std::f64::consts::TAU);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut tail = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let steps = 2000;
        let h = (hi - lo) / steps as f64;
        let mut acc = g(lo) + g(hi);
        for i in 1..steps {
            acc += g(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        tail += acc * h / 3.0;
    }
    head + tail
}

/// Q(a,b,c;s) for real s via [`lattice_ref`].
pub fn q_ref(a: i64, b: i64, c: i64, s: f64, r: i64) -> f64 {
    let (a, b, c) = (a as f64, b as f64, c as f64);
    lattice_ref(|x, y| a * x * x + b * x * y + c * y * y, 0.0, 0.0, s, r)
}

/// S(p,r,j;s) for real s via [`lattice_ref`] on the offset lattice.
pub fn s_ref(p: i64, q: i64, j: i64, s: f64, r: i64) -> f64 {
    let (dx, dy) = (p as f64 / j as f64, q as f64 / j as f64);
    lattice_ref(|x, y| x * x + y * y, dx, dy, s, r)
}

/// Fundamental unit (x + y√D)/2 of discriminant D: smallest y > 0 with x² − Dy² = ±4.
/// Returns the unit and its norm.
pub fn fundamental_unit(d: u64) -> (f64, i32) {
    for y in 1u64.. {
        for (target, norm) in [(d * y * y - 4, -1), (d * y * y + 4, 1)] {
            let x = (target as f64).sqrt().round() as u64;
            if x * x == target {
                return ((x as f64 + y as f64 * (d as f64).sqrt()) / 2.0, norm);
            }
        }
    }
    unreachable!()
}

/// Class number (wide sense) of the real quadratic order of discriminant D,
/// counted as cycles of reduced primitive indefinite forms under the
/// reduction operator; halved when the fundamental unit has norm +1.
pub fn class_number(d: i64) -> u64 {
    let rd = (d as f64).sqrt();
    let gcd3 = |a: i64, b: i64, c: i64| {
        let g = |mut x: i64, mut y: i64| {
            while y != 0 {
                (x, y) = (y, x % y);
            }
            x.abs()
        };
        g(g(a, b), c)
    };
    let mut reduced = BTreeSet::new();
    for b in 1..=(rd as i64) {
        if (b * b - d) % 4 != 0 || (b as f64) >= rd {
            continue;
        }
        let ac = (b * b - d) / 4;
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let c = ac / sa;
                let w = 2.0 * a as f64;
                if rd - (b as f64) < w && w < rd + b as f64 && gcd3(sa, b, c) == 1 {
                    reduced.insert((sa, b, c));
                }
            }
        }
    }
    let rho = |(_, b, c): (i64, i64, i64)| {
        let m = 2 * c.abs();
        // b' ≡ −b (mod 2|c|) in the window (√D − 2|c|, √D)
        let mut nb = (-b).rem_euclid(m);
        while (nb as f64) < rd - m as f64 {
            nb += m;
        }
        while nb as f64 >= rd {
            nb -= m;
        }
        while (nb as f64) <= rd - m as f64 {
            nb += m;
        }
        (c, nb, (nb * nb - d) / (4 * c))
    };
    let mut cycles = 0;
    let mut seen = BTreeSet::new();
    for &f in &reduced {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        while seen.insert(g) {
            g = rho(g);
        }
    }
    if fundamental_unit(d as u64).1 == 1 {
        cycles / 2
    } else {
        cycles
    }
}

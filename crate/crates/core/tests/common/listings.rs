//! The character listings for small moduli, transcribed coefficient by
//! coefficient, and the counting law for real primitive characters.

use dirichlet_lattice::chars::format_value;
use dirichlet_lattice::{unit_group, DirichletCharacter};

/// (label as printed, coefficients on the units in increasing order, Euler factor prefix)
pub type Listing = &'static [(&'static str, &'static [&'static str], &'static str)];

// The listings for k = 1..10 and 16, transcribed coefficient by coefficient.
pub const LISTINGS: &[(u64, Listing)] = &[
    (1, &[("L_{1}", &["1"], "")]),
    (2, &[("L_{1}", &["1"], "(1-2^{-s})")]),
    (
        3,
        &[
            ("L_{1}", &["1", "1"], "(1-3^{-s})"),
            ("L_{-3}", &["1", "-1"], ""),
        ],
    ),
    (
        4,
        &[
            ("L_{1}", &["1", "1"], "(1-2^{-s})"),
            ("L_{-4}", &["1", "-1"], ""),
        ],
    ),
    (
        5,
        &[
            ("L_{1}", &["1", "1", "1", "1"], "(1-5^{-s})"),
            ("L_{5}", &["1", "-1", "-1", "1"], ""),
            ("L_{-5}^{i}", &["1", "i", "-i", "-1"], ""),
            ("L_{-5}^{-i}", &["1", "-i", "i", "-1"], ""),
        ],
    ),
    (
        6,
        &[
            ("L_{1}", &["1", "1"], "(1-2^{-s})(1-3^{-s})"),
            ("L_{-3}", &["1", "-1"], "(1+2^{-s})"),
        ],
    ),
    (
        7,
        &[
            ("L_{1}", &["1", "1", "1", "1", "1", "1"], "(1-7^{-s})"),
            ("L_{-7}", &["1", "1", "-1", "1", "-1", "-1"], ""),
            ("L_{-7}^{ω^2}", &["1", "ω^2", "ω", "-ω", "-ω^2", "-1"], ""),
            ("L_{-7}^{-ω}", &["1", "-ω", "-ω^2", "ω^2", "ω", "-1"], ""),
            ("L_{7}^{ω^2}", &["1", "ω^2", "-ω", "-ω", "ω^2", "1"], ""),
            ("L_{7}^{-ω}", &["1", "-ω", "ω^2", "ω^2", "-ω", "1"], ""),
        ],
    ),
    (
        8,
        &[
            ("L_{1}", &["1", "1", "1", "1"], "(1-2^{-s})"),
            ("L_{-4}", &["1", "-1", "1", "-1"], ""),
            ("L_{-8}", &["1", "1", "-1", "-1"], ""),
            ("L_{8}", &["1", "-1", "-1", "1"], ""),
        ],
    ),
    (
        9,
        &[
            ("L_{1}", &["1", "1", "1", "1", "1", "1"], "(1-3^{-s})"),
            ("L_{-3}", &["1", "-1", "1", "-1", "1", "-1"], ""),
            ("L_{-9}^{-ω^2}", &["1", "-ω^2", "-ω", "ω", "ω^2", "-1"], ""),
            ("L_{-9}^{ω}", &["1", "ω", "ω^2", "-ω^2", "-ω", "-1"], ""),
            ("L_{9}^{ω^2}", &["1", "ω^2", "-ω", "-ω", "ω^2", "1"], ""),
            ("L_{9}^{-ω}", &["1", "-ω", "ω^2", "ω^2", "-ω", "1"], ""),
        ],
    ),
    (
        10,
        &[
            ("L_{1}", &["1", "1", "1", "1"], "(1-2^{-s})(1-5^{-s})"),
            ("L_{5}", &["1", "-1", "-1", "1"], "(1+2^{-s})"),
            ("L_{-5}^{i}", &["1", "-i", "i", "-1"], "(1-i2^{-s})"),
            ("L_{-5}^{-i}", &["1", "i", "-i", "-1"], "(1+i2^{-s})"),
        ],
    ),
    (
        16,
        // signed symbols expanded: (16,l)_± contributes ±c at 16 − l
        &[
            (
                "L_{1}",
                &["1", "1", "1", "1", "1", "1", "1", "1"],
                "(1-2^{-s})",
            ),
            ("L_{-4}", &["1", "-1", "1", "-1", "1", "-1", "1", "-1"], ""),
            ("L_{-8}", &["1", "1", "-1", "-1", "1", "1", "-1", "-1"], ""),
            ("L_{8}", &["1", "-1", "-1", "1", "1", "-1", "-1", "1"], ""),
            (
                "L_{-16}^{i}",
                &["1", "i", "i", "1", "-1", "-i", "-i", "-1"],
                "",
            ),
            (
                "L_{-16}^{-i}",
                &["1", "-i", "-i", "1", "-1", "i", "i", "-1"],
                "",
            ),
            (
                "L_{16}^{i}",
                &["1", "i", "-i", "-1", "-1", "-i", "i", "1"],
                "",
            ),
            (
                "L_{16}^{-i}",
                &["1", "-i", "i", "-1", "-1", "i", "-i", "1"],
                "",
            ),
        ],
    ),
];

pub fn row_strings(k: u64, chi: &DirichletCharacter) -> Vec<String> {
    let base = unit_group(k).1.exponent();
    (1..=k as i64)
        .filter(|&n| !chi.value(n).is_zero())
        .map(|n| format_value(chi.value(n), base))
        .collect()
}

/// Number of real primitive characters of modulus k per the classification by
/// the odd squarefree part P.
pub fn real_primitive_count_law(k: u64) -> usize {
    let squarefree_odd =
        |p: u64| p % 2 == 1 && (2..).take_while(|d| d * d <= p).all(|d| p % (d * d) != 0);
    if squarefree_odd(k) {
        1
    } else if k % 4 == 0 && squarefree_odd(k / 4) {
        1
    } else if k % 8 == 0 && squarefree_odd(k / 8) {
        2
    } else {
        0
    }
}

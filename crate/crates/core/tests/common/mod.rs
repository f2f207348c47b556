//! Catalog models and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use binhk::affine::{AffineMonoid, Elem};
use binhk::parse::parse_presentation;
use binhk::Presentation;
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn pres(body: &str) -> Presentation {
    parse_presentation(body).unwrap_or_else(|e| panic!("{body}: {e}"))
}

pub fn affine(d: usize, gens: &[&[i64]]) -> AffineMonoid {
    AffineMonoid::from_elems(
        "m",
        d,
        Vec::new(),
        gens.iter().map(|g| g.to_vec()).collect(),
    )
    .unwrap()
}

pub fn affine_t(d: usize, torsion: &[i64], gens: &[&[i64]]) -> AffineMonoid {
    AffineMonoid::from_elems(
        "m",
        d,
        torsion.to_vec(),
        gens.iter().map(|g| g.to_vec()).collect(),
    )
    .unwrap()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `#N/[q]N+` for `N = <x1,x2,x3>/(n x1 = m x2 + k x3)` by normal forms:
/// every class has a unique representative with `x1 < n`, and it survives
/// iff it avoids `[q]N+` after folding `j = min(y/m, z/k)` copies back into `x1`.
pub fn three_gen_brute(n: u64, m: u64, k: u64, q: u64) -> u64 {
    let mut c = 0;
    for x in 0..n {
        for y in 0..q {
            for z in 0..q {
                let j = (y / m).min(z / k);
                if x + n * j < q {
                    c += 1;
                }
            }
        }
    }
    c
}

/// Closed forms for the same family; `None` outside the three cases.
pub fn three_gen_formula(n: i64, m: i64, k: i64, q: i64) -> Option<BigRational> {
    let t = q % n;
    let r = |a: i64| rat(a, 1);
    if n < m.max(k) {
        Some(r(n * q * q))
    } else if n > m.max(k) {
        Some((r(m + k) - rat(m * k, n)) * r(q * q) - rat(m * k, n) * r(t * (n - t)))
    } else if n == m && n >= k {
        Some(
            r(n * q * q) - rat(t * (n - t) * (n - k), n) * r(q) - r(k * t * t)
                + rat(k * t * t * t, n),
        )
    } else {
        None
    }
}

/// Models with both a presentation and an explicit affine realization.
pub fn dual_models() -> Vec<(&'static str, Presentation, AffineMonoid)> {
    vec![
        ("N", pres("gens: x;"), affine(1, &[&[1]])),
        ("N2", pres("gens: x y;"), affine(2, &[&[1, 0], &[0, 1]])),
        (
            "2x=2y",
            pres("gens: x y; rel: 2x = 2y;"),
            affine_t(1, &[2], &[&[1, 0], &[1, 1]]),
        ),
        (
            "3x=3y",
            pres("gens: x y; rel: 3x = 3y;"),
            affine_t(1, &[3], &[&[1, 0], &[1, 1]]),
        ),
        (
            "X+3Y=4Z",
            pres("gens: X Y Z; rel: X + 3Y = 4Z;"),
            affine(2, &[&[4, 0], &[0, 4], &[1, 3]]),
        ),
        (
            "x+z=2y",
            pres("gens: x y z; rel: x + z = 2y;"),
            affine(2, &[&[2, 0], &[1, 1], &[0, 2]]),
        ),
        (
            "<2,3>",
            pres("gens: a b; rel: 3a = 2b;"),
            affine(1, &[&[2], &[3]]),
        ),
        (
            "<3,4,5>",
            pres("gens: a b c; rel: 2b = a + c; rel: 3a = b + c; rel: 2c = 2a + b;"),
            affine(1, &[&[3], &[4], &[5]]),
        ),
    ]
}

pub fn maximal(m: &AffineMonoid) -> Vec<Elem> {
    m.gens.clone()
}

pub fn square_gaps() -> Vec<Elem> {
    (0..3)
        .flat_map(|a| (0..3).map(move |b| vec![a, b]))
        .filter(|v| v != &vec![0, 0])
        .collect()
}

pub fn five_gaps() -> Vec<Elem> {
    vec![vec![1, 0], vec![2, 0], vec![0, 1], vec![1, 1], vec![0, 2]]
}

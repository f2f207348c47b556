//! The `N`-set `^qN`: `N` acting on itself through `x -> q x`.
//!
//! In lattice coordinates the irreducible components are the residue classes
//! of `N` modulo `q Z^d`; the minimal generators of all components together
//! are exactly `N \ [q]N+`.

use std::collections::{BTreeMap, HashSet};

use crate::affine::{conductor_element, gaps_and_primary_gaps, AffineMonoid, Elem};
use crate::boxq::DEFAULT_LEVEL_CAP;
use crate::error::{Error, Result};
use crate::hk::{hkf_affine, AffineCounter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QComponent {
    /// Residue class in `[0, q)^d`, lattice coordinates.
    pub anchor: Vec<i64>,
    /// Minimal generators, lattice coordinates, sorted.
    pub generators: Vec<Elem>,
}

impl QComponent {
    /// Generators shifted by their coordinatewise minimum and divided by `q`.
    pub fn signature(&self, q: u32) -> Vec<Elem> {
        let d = self.anchor.len();
        let min: Vec<i64> = (0..d)
            .map(|i| self.generators.iter().map(|g| g[i]).min().unwrap_or(0))
            .collect();
        let mut sig: Vec<Elem> = self
            .generators
            .iter()
            .map(|g| {
                g.iter()
                    .zip(&min)
                    .map(|(a, b)| (a - b) / q as i64)
                    .collect()
            })
            .collect();
        sig.sort();
        sig
    }
}

#[derive(Debug, Clone)]
pub struct Partition {
    pub q: u32,
    pub d: usize,
    pub components: Vec<QComponent>,
    /// Largest grading level of any minimal generator.
    pub max_generator_level: i64,
    /// `l(m) + d max_h k_h l(h)` over the Hilbert basis, `m` a conductor element;
    /// reported for comparison with `max_generator_level / q`.
    pub window_constant: i64,
}

impl Partition {
    pub fn generator_count(&self) -> u64 {
        self.components
            .iter()
            .map(|c| c.generators.len() as u64)
            .sum()
    }
}

fn check_input(m: &AffineMonoid) -> Result<()> {
    if !m.is_torsion_free() {
        return Err(Error::invalid(
            "the q-partition is implemented for torsion-free monoids",
        ));
    }
    Ok(())
}

/// Components of `^qN` with their minimal generators.
pub fn components(m: &AffineMonoid, q: u32) -> Result<Partition> {
    check_input(m)?;
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    let lc = m.lattice_coords()?;
    let n = &lc.monoid;
    let counter = AffineCounter::new(n, &n.gens)?;
    let outside = counter.outside(q, DEFAULT_LEVEL_CAP)?;
    let mut classes: BTreeMap<Vec<i64>, Vec<Elem>> = BTreeMap::new();
    for x in outside {
        let anchor: Vec<i64> = x.iter().map(|v| v.rem_euclid(q as i64)).collect();
        classes.entry(anchor).or_default().push(x);
    }
    let components: Vec<QComponent> = classes
        .into_iter()
        .map(|(anchor, mut generators)| {
            generators.sort();
            QComponent { anchor, generators }
        })
        .collect();
    let max_generator_level = components
        .iter()
        .flat_map(|c| c.generators.iter())
        .map(|g| n.level(g))
        .max()
        .unwrap_or(0);
    Ok(Partition {
        q,
        d: n.d,
        components,
        max_generator_level,
        window_constant: window_constant(n)?,
    })
}

fn window_constant(n: &AffineMonoid) -> Result<i64> {
    let c = conductor_element(n)?;
    let worst = c
        .witnesses
        .iter()
        .map(|(h, k, _)| k * n.level(h))
        .max()
        .unwrap_or(0);
    Ok(n.level(&c.element) + n.d as i64 * worst)
}

/// `#N/[q]N+` as the total number of minimal generators of `^qN`
/// (the unit group is trivial here).
pub fn hkf_via_generators(m: &AffineMonoid, q: u32) -> Result<u64> {
    Ok(components(m, q)?.generator_count())
}

/// Number of classes of the relation "have a common upper bound" among the
/// generators of a component; an irreducible component gives 1.
///
/// Two elements `g, g'` of one residue class are joined by `y = g + q n =
/// g' + q n'` once `n` is deep enough in the cone, which is what this searches.
pub fn connected_pieces(m: &AffineMonoid, part: &Partition, comp: &QComponent) -> Result<usize> {
    let lc = m.lattice_coords()?;
    let n = &lc.monoid;
    let c = conductor_element(n)?.element;
    let s: Elem = n.gens.iter().fold(n.zero(), |acc, g| n.add(&acc, g));
    let mut mem = n.membership().with_conductor(c.clone());
    let q = part.q as i64;
    let g0 = &comp.generators[0];
    let mut pieces = 1;
    for g in &comp.generators[1..] {
        let delta: Elem = g.iter().zip(g0).map(|(a, b)| (a - b) / q).collect();
        let joined = (0..64).any(|k| {
            let n1 = n.add(&c, &n.scale(&s, k));
            let n2 = n.sub(&n1, &delta);
            mem.contains(&n1) && mem.contains(&n2)
        });
        if !joined {
            pieces += 1;
        }
    }
    Ok(pieces)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoClassReport {
    /// Signature and number of components carrying it, ordered by signature.
    pub classes: Vec<(Vec<Elem>, usize)>,
    /// Two classes with equal generator counts; signatures tell them apart but
    /// isomorphism is only decided up to translation.
    pub ambiguous: bool,
}

/// Bucket components by translated generator signature.
pub fn iso_classes(part: &Partition) -> IsoClassReport {
    let mut buckets: BTreeMap<Vec<Elem>, usize> = BTreeMap::new();
    for c in &part.components {
        *buckets.entry(c.signature(part.q)).or_default() += 1;
    }
    let mut sizes = HashSet::new();
    let ambiguous = buckets.keys().any(|sig| !sizes.insert(sig.len()));
    IsoClassReport {
        classes: buckets.into_iter().collect(),
        ambiguous,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapFormula {
    pub k: usize,
    /// Number of gaps.
    pub n: u64,
    /// Number of primary gaps.
    pub p: u64,
    /// Minimal generators of `N^k \ {0}` as an `N`-set.
    pub d: u64,
    pub predicted: u64,
    pub actual: u64,
}

impl GapFormula {
    pub fn bounds_hold(&self) -> bool {
        let (k, p, d) = (self.k as u64, self.p, self.d);
        k + p <= d && d <= k * (p + 1)
    }
}

/// Compare `(p+1)(q^k - n) + d n` with the counted `#N/[q]N+` for `N = N^k \ gaps`.
pub fn gap_formula_check(k: usize, gaps: &[Elem], q: u32) -> Result<GapFormula> {
    let m = AffineMonoid::from_gaps("gaps", k, gaps)?;
    let maxc = gaps.iter().flatten().copied().max().unwrap_or(0);
    if (q as i64) <= maxc {
        return Err(Error::invalid(format!(
            "q must exceed the largest gap coordinate {maxc}"
        )));
    }
    let bound = gaps_and_primary_gaps(&m, 0)?.primary_bound;
    let report = gaps_and_primary_gaps(&m, bound)?;
    let p = report.primary_gaps.len() as u64;
    let side = m.gens.iter().flatten().copied().max().unwrap_or(1) + 1;
    let mut d = 0u64;
    let mut pt = vec![0i64; k];
    'outer: loop {
        if pt.iter().any(|&x| x != 0) {
            let minimal = m.gens.iter().all(|v| {
                let z: Vec<i64> = pt.iter().zip(v).map(|(a, b)| a - b).collect();
                z.iter().any(|&x| x < 0) || z.iter().all(|&x| x == 0)
            });
            if minimal {
                d += 1;
            }
        }
        for i in 0..k {
            pt[i] += 1;
            if pt[i] < side {
                continue 'outer;
            }
            pt[i] = 0;
        }
        break;
    }
    let n = gaps.len() as u64;
    let qk = (q as u64).pow(k as u32);
    let predicted = (p + 1) * (qk - n) + d * n;
    let actual = hkf_affine(&m, &m.gens, q)?;
    Ok(GapFormula {
        k,
        n,
        p,
        d,
        predicted,
        actual,
    })
}

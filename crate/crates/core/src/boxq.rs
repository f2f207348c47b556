//! Exact finite quotients `N/[q]I` by congruence closure over a lattice box.
//!
//! A point of the box stands for its image in `N`. Every coordinate bound is
//! `q * c_i` where `c_i * e_i` lies in `I`, so anything outside the box is in
//! `[q]I` and a relation step that leaves the box proves the start is `inf`.

use crate::error::{Error, Result};
use crate::presentation::{IdealSpec, Presentation, Relation};

/// Default cap on the number of box points.
pub const DEFAULT_LEVEL_CAP: usize = 10_000_000;
/// Default bound for the primary certificate search.
pub const DEFAULT_PRIMARY_BOUND: u32 = 64;

const INF_LABEL: u32 = u32::MAX;

struct Dsu {
    parent: Vec<u32>,
    size: Vec<u32>,
    inf: u32,
}

impl Dsu {
    fn new(points: usize) -> Self {
        Dsu {
            parent: (0..=points as u32).collect(),
            size: vec![1; points + 1],
            inf: points as u32,
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (root, child) = if ra == self.inf {
            (ra, rb)
        } else if rb == self.inf || self.size[rb as usize] > self.size[ra as usize] {
            (rb, ra)
        } else {
            (ra, rb)
        };
        self.parent[child as usize] = root;
        self.size[root as usize] += self.size[child as usize];
        true
    }
}

#[derive(Debug, Clone)]
struct Grid {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl Grid {
    fn new(dims: &[usize], cap: usize) -> Result<Self> {
        let mut strides = vec![0; dims.len()];
        let mut total: usize = 1;
        for i in (0..dims.len()).rev() {
            strides[i] = total;
            total = total
                .checked_mul(dims[i])
                .filter(|&t| t <= cap)
                .ok_or_else(|| Error::ResourceCap(format!("box {dims:?} exceeds {cap} points")))?;
        }
        Ok(Grid {
            dims: dims.to_vec(),
            strides,
            total,
        })
    }

    fn offset(&self, v: &[u32]) -> usize {
        v.iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    fn inside(&self, v: &[u32]) -> bool {
        v.iter().zip(&self.dims).all(|(&c, &d)| (c as usize) < d)
    }

    fn point(&self, mut idx: usize) -> Vec<u32> {
        let mut p = vec![0; self.dims.len()];
        for i in 0..self.dims.len() {
            p[i] = (idx / self.strides[i]) as u32;
            idx %= self.strides[i];
        }
        p
    }

    /// Calls `f(t, idx(t))` for every `t` in the box with `t + shift` inside.
    fn for_each_translate(&self, shift: &[u32], mut f: impl FnMut(&[usize], usize)) {
        let r = self.dims.len();
        let mut lim = Vec::with_capacity(r);
        for i in 0..r {
            if shift[i] as usize >= self.dims[i] {
                return;
            }
            lim.push(self.dims[i] - shift[i] as usize);
        }
        let mut t = vec![0usize; r];
        let mut idx = 0usize;
        loop {
            f(&t, idx);
            let mut i = r;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                t[i] += 1;
                idx += self.strides[i];
                if t[i] < lim[i] {
                    break;
                }
                idx -= t[i] * self.strides[i];
                t[i] = 0;
            }
        }
    }
}

/// How the closure treats relation steps that leave the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Escape {
    /// The box is certified: leaving it means landing in the ideal.
    ToInfinity,
    /// Uncertified box: escapes carry no information.
    Ignore,
}

fn close(p: &Presentation, grid: &Grid, marks: &[Vec<u32>], escape: Escape) -> (Dsu, usize) {
    let mut dsu = Dsu::new(grid.total);
    let inf = dsu.inf;
    for m in marks {
        let off = grid.offset(m);
        grid.for_each_translate(m, |_, idx| {
            dsu.union((idx + off) as u32, inf);
        });
    }
    let fits = |t: &[usize], v: &[u32]| {
        t.iter()
            .zip(v)
            .zip(&grid.dims)
            .all(|((&a, &b), &d)| a + (b as usize) < d)
    };
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut changed = false;
        for rel in &p.relations {
            match rel {
                Relation::Monomial { lhs } => {
                    let off = grid.offset(lhs);
                    grid.for_each_translate(lhs, |_, idx| {
                        changed |= dsu.union((idx + off) as u32, inf);
                    });
                }
                Relation::Binomial { lhs, rhs } => {
                    let (ol, or) = (grid.offset(lhs), grid.offset(rhs));
                    grid.for_each_translate(lhs, |t, idx| {
                        let a = (idx + ol) as u32;
                        if fits(t, rhs) {
                            changed |= dsu.union(a, (idx + or) as u32);
                        } else if escape == Escape::ToInfinity {
                            changed |= dsu.union(a, inf);
                        }
                    });
                    if escape == Escape::ToInfinity {
                        grid.for_each_translate(rhs, |t, idx| {
                            if !fits(t, lhs) {
                                changed |= dsu.union((idx + or) as u32, inf);
                            }
                        });
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (dsu, sweeps)
}

fn label(dsu: &mut Dsu, total: usize) -> (Vec<u32>, usize) {
    let mut labels = vec![INF_LABEL; total];
    let mut root_label = vec![INF_LABEL; total];
    let mut count = 0usize;
    for (i, slot) in labels.iter_mut().enumerate() {
        let root = dsu.find(i as u32);
        if root == dsu.inf {
            continue;
        }
        let rl = &mut root_label[root as usize];
        if *rl == INF_LABEL {
            *rl = count as u32;
            count += 1;
        }
        *slot = *rl;
    }
    (labels, count)
}

/// The finite quotient `N/[q]I` as a labelled box.
#[derive(Debug, Clone)]
pub struct QuotientTable {
    pub q: u32,
    pub dims: Vec<usize>,
    pub class_count: usize,
    pub sweeps: usize,
    grid: Grid,
    labels: Vec<u32>,
}

impl QuotientTable {
    /// Class label of a box point; `None` for the `inf` class or points outside the box.
    pub fn class_of(&self, point: &[u32]) -> Option<u32> {
        if point.len() != self.grid.dims.len() || !self.grid.inside(point) {
            return None;
        }
        let l = self.labels[self.grid.offset(point)];
        (l != INF_LABEL).then_some(l)
    }

    pub fn is_infinity(&self, point: &[u32]) -> bool {
        self.class_of(point).is_none()
    }

    /// Smallest box point (in index order) of each class.
    pub fn representatives(&self) -> Vec<Vec<u32>> {
        let mut reps = vec![None; self.class_count];
        for (i, &l) in self.labels.iter().enumerate() {
            if l != INF_LABEL && reps[l as usize].is_none() {
                reps[l as usize] = Some(self.grid.point(i));
            }
        }
        reps.into_iter()
            .map(|r| r.expect("class without points"))
            .collect()
    }

    /// All box points with their labels (`None` for `inf`).
    pub fn points(&self) -> impl Iterator<Item = (Vec<u32>, Option<u32>)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (self.grid.point(i), (l != INF_LABEL).then_some(l)))
    }
}

/// Outcome of the primary certificate search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimaryCheck {
    /// `c_i * e_i` lies in the ideal for each generator `i`.
    Certified(Vec<u32>),
    /// No certificate up to the bound for these generator indices.
    Unknown { missing: Vec<usize> },
}

impl PrimaryCheck {
    pub fn certificates(&self) -> Option<&[u32]> {
        match self {
            PrimaryCheck::Certified(c) => Some(c),
            PrimaryCheck::Unknown { .. } => None,
        }
    }
}

/// Search minimal `c_i <= bound` with `c_i * e_i` in the closure of `I`.
///
/// Membership is only claimed when a congruence chain inside the search box
/// proves it, so a certificate is always sound; failure is reported as unknown.
pub fn is_primary(p: &Presentation, ideal: &IdealSpec, bound: u32) -> Result<PrimaryCheck> {
    is_primary_capped(p, ideal, bound, DEFAULT_LEVEL_CAP)
}

pub fn is_primary_capped(
    p: &Presentation,
    ideal: &IdealSpec,
    bound: u32,
    cap: usize,
) -> Result<PrimaryCheck> {
    let r = p.rank();
    check_ideal(p, ideal)?;
    let mut certs: Vec<Option<u32>> = vec![None; r];
    for g in &ideal.gens {
        let supp: Vec<usize> = (0..r).filter(|&i| g[i] > 0).collect();
        if let [i] = supp[..] {
            if g[i] <= bound && certs[i].is_none_or(|c| g[i] < c) {
                certs[i] = Some(g[i]);
            }
        }
    }
    if certs.iter().all(|c| *c == Some(1)) {
        return Ok(PrimaryCheck::Certified(vec![1; r]));
    }
    let pad = p
        .relations
        .iter()
        .flat_map(|rel| rel.lhs().iter().chain(rel.rhs().unwrap_or(&[])))
        .chain(ideal.gens.iter().flatten())
        .copied()
        .max()
        .unwrap_or(0);
    let side = (bound + 1 + pad) as usize;
    let dims = vec![side; r];
    match Grid::new(&dims, cap) {
        Ok(grid) => {
            let (mut dsu, _) = close(p, &grid, &ideal.gens, Escape::Ignore);
            let inf = dsu.inf;
            for (i, cert) in certs.iter_mut().enumerate() {
                let mut e = vec![0u32; r];
                for c in 1..=bound {
                    if cert.is_some_and(|k| k <= c) {
                        break;
                    }
                    e[i] = c;
                    if dsu.find(grid.offset(&e) as u32) == inf {
                        *cert = Some(c);
                        break;
                    }
                }
            }
        }
        Err(e) if certs.iter().any(Option::is_none) => return Err(e),
        Err(_) => {}
    }
    let missing: Vec<usize> = (0..r).filter(|&i| certs[i].is_none()).collect();
    if missing.is_empty() {
        Ok(PrimaryCheck::Certified(
            certs.into_iter().map(Option::unwrap).collect(),
        ))
    } else {
        Ok(PrimaryCheck::Unknown { missing })
    }
}

fn check_ideal(p: &Presentation, ideal: &IdealSpec) -> Result<()> {
    if ideal.gens.iter().any(|g| g.len() != p.rank()) {
        return Err(Error::invalid(format!(
            "ideal `{}` does not match the rank of `{}`",
            ideal.name, p.name
        )));
    }
    Ok(())
}

fn certificates(p: &Presentation, ideal: &IdealSpec, cap: usize) -> Result<Vec<u32>> {
    match is_primary_capped(p, ideal, DEFAULT_PRIMARY_BOUND, cap)? {
        PrimaryCheck::Certified(c) => Ok(c),
        PrimaryCheck::Unknown { missing } => Err(Error::NotPrimary(format!(
            "no power of generator(s) {:?} found in `{}` up to {}",
            missing
                .iter()
                .map(|&i| p.gens[i].as_str())
                .collect::<Vec<_>>(),
            ideal.name,
            DEFAULT_PRIMARY_BOUND
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct BoxOptions {
    /// Primary certificates; computed when absent.
    pub certificates: Option<Vec<u32>>,
    /// Extra q-strides added to every box side.
    pub padding: u32,
    pub level_cap: usize,
}

impl Default for BoxOptions {
    fn default() -> Self {
        BoxOptions {
            certificates: None,
            padding: 0,
            level_cap: DEFAULT_LEVEL_CAP,
        }
    }
}

/// `N/[q]I` on the certified box.
pub fn box_quotient(p: &Presentation, ideal: &IdealSpec, q: u32) -> Result<QuotientTable> {
    box_quotient_with(p, ideal, q, &BoxOptions::default())
}

pub fn box_quotient_with(
    p: &Presentation,
    ideal: &IdealSpec,
    q: u32,
    opts: &BoxOptions,
) -> Result<QuotientTable> {
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    check_ideal(p, ideal)?;
    let certs = match &opts.certificates {
        Some(c) => c.clone(),
        None => certificates(p, ideal, opts.level_cap)?,
    };
    let dims: Vec<usize> = certs
        .iter()
        .map(|&c| (q as usize) * (c as usize + opts.padding as usize))
        .collect();
    let grid = Grid::new(&dims, opts.level_cap)?;
    let marks: Vec<Vec<u32>> = ideal.frobenius_power(q).gens;
    let (mut dsu, sweeps) = close(p, &grid, &marks, Escape::ToInfinity);
    let (labels, class_count) = label(&mut dsu, grid.total);
    Ok(QuotientTable {
        q,
        dims,
        class_count,
        sweeps,
        grid,
        labels,
    })
}

/// The `N`-set whose quotient is counted by [`count_relative_quotient`].
#[derive(Debug, Clone)]
pub enum RelativeSet {
    Whole,
    Ideal(IdealSpec),
    /// `I ∩ [q]J`.
    Intersection(IdealSpec),
    /// The Rees quotient `N/I`.
    Rees(IdealSpec),
}

/// `#S / ([q]J + S)`.
///
/// For `S = I`, `I ∩ [q]J` and `N/I` the count is read off one box certified for
/// `K = I + [q]J`: every class outside `K` is tested for membership in `I` and
/// in `[q]J` by looking for a point dominating a generator.
pub fn count_relative_quotient(
    p: &Presentation,
    s: &RelativeSet,
    j: &IdealSpec,
    q: u32,
) -> Result<u64> {
    let i = match s {
        RelativeSet::Whole => return Ok(box_quotient(p, j, q)?.class_count as u64),
        RelativeSet::Ideal(i) | RelativeSet::Intersection(i) | RelativeSet::Rees(i) => i,
    };
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    check_ideal(p, i)?;
    check_ideal(p, j)?;
    let ci = certificates(p, i, DEFAULT_LEVEL_CAP)?;
    let cj = certificates(p, j, DEFAULT_LEVEL_CAP)?;
    let qj = j.frobenius_power(q);
    let k = i.sum(&qj);
    let dims: Vec<usize> = ci
        .iter()
        .zip(&cj)
        .map(|(&a, &b)| a as usize + q as usize * b as usize)
        .collect();
    let grid = Grid::new(&dims, DEFAULT_LEVEL_CAP)?;
    let (mut dsu, _) = close(p, &grid, &k.gens, Escape::ToInfinity);
    let (labels, count) = label(&mut dsu, grid.total);
    let mut in_i = vec![false; count];
    let mut in_qj = vec![false; count];
    let dominates = |pt: &[u32], g: &[u32]| pt.iter().zip(g).all(|(a, b)| a >= b);
    for (idx, &l) in labels.iter().enumerate() {
        if l == INF_LABEL {
            continue;
        }
        let pt = grid.point(idx);
        if i.gens.iter().any(|g| dominates(&pt, g)) {
            in_i[l as usize] = true;
        }
        if qj.gens.iter().any(|g| dominates(&pt, g)) {
            in_qj[l as usize] = true;
        }
    }
    let n = (0..count)
        .filter(|&c| match s {
            RelativeSet::Ideal(_) => in_i[c],
            RelativeSet::Intersection(_) => in_i[c] && in_qj[c],
            RelativeSet::Rees(_) => !in_i[c] && !in_qj[c],
            RelativeSet::Whole => unreachable!(),
        })
        .count();
    Ok(n as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilWitness {
    pub element: Vec<u32>,
    pub multiple: u32,
}

/// Bounded search for nonzero nilpotent elements.
///
/// A candidate `a` must be non-`inf` in the exact quotient `N/[bound+1]N+`
/// (so `a != inf` in `N`), and some `n*a` with `n <= bound` must be `inf` by a
/// chain that stays inside the box. An empty result proves nothing.
pub fn bounded_nilpotence_scan(p: &Presentation, bound: u32) -> Result<Vec<NilWitness>> {
    nilpotence_scan_capped(p, bound, DEFAULT_LEVEL_CAP)
}

pub fn nilpotence_scan_capped(p: &Presentation, bound: u32, cap: usize) -> Result<Vec<NilWitness>> {
    let r = p.rank();
    if r == 0 || bound < 2 || p.is_integral() {
        // Without monomial relations nothing is ever identified with inf.
        return Ok(Vec::new());
    }
    let side = bound as usize + 1;
    let grid = Grid::new(&vec![side; r], cap)?;
    let exact = box_quotient_with(
        p,
        &IdealSpec::maximal(r),
        bound + 1,
        &BoxOptions {
            certificates: Some(vec![1; r]),
            padding: 0,
            level_cap: cap,
        },
    )?;
    let (mut partial, _) = close(p, &grid, &[], Escape::Ignore);
    let inf = partial.inf;
    let mut found: Vec<NilWitness> = Vec::new();
    for idx in 1..grid.total {
        let a = grid.point(idx);
        if exact.is_infinity(&a) {
            continue;
        }
        if found
            .iter()
            .any(|w| w.element.iter().zip(&a).all(|(x, y)| x <= y))
        {
            continue;
        }
        for n in 2..=bound {
            let na: Vec<u32> = a.iter().map(|&c| c * n).collect();
            if !grid.inside(&na) {
                break;
            }
            if partial.find(grid.offset(&na) as u32) == inf {
                found.push(NilWitness {
                    element: a.clone(),
                    multiple: n,
                });
                break;
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;

    fn pres(s: &str) -> Presentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn free_is_q_to_the_n() {
        let p = Presentation::free(2);
        let t = box_quotient(&p, &IdealSpec::maximal(2), 4).unwrap();
        assert_eq!(t.class_count, 16);
        let t = box_quotient(&p, &IdealSpec::maximal(2), 1).unwrap();
        assert_eq!(t.class_count, 1);
    }

    #[test]
    fn two_generator_binomial() {
        let p = pres("gens: x y; rel: x + y = 2x + 2y;");
        let t = box_quotient(&p, &IdealSpec::maximal(2), 5).unwrap();
        assert_eq!(t.class_count, 9);
    }

    #[test]
    fn stabilizing_example() {
        let p = pres("gens: x y; rel: 3x = 5x + 2y; rel: 3y = 2x + 5y;");
        for q in 3..8 {
            let t = box_quotient(&p, &IdealSpec::maximal(2), q).unwrap();
            assert_eq!(t.class_count, 9, "q = {q}");
        }
    }

    #[test]
    fn zero_q_rejected() {
        let p = Presentation::free(1);
        assert!(box_quotient(&p, &IdealSpec::maximal(1), 0).is_err());
    }

    #[test]
    fn primary_certificates() {
        let p = Presentation::free(2);
        let ok = |gens: Vec<Vec<u32>>| {
            is_primary(&p, &IdealSpec::new("i", 2, gens).unwrap(), 10).unwrap()
        };
        assert_eq!(
            ok(vec![vec![1, 0], vec![0, 1]]),
            PrimaryCheck::Certified(vec![1, 1])
        );
        assert_eq!(
            ok(vec![vec![2, 0], vec![0, 1]]),
            PrimaryCheck::Certified(vec![2, 1])
        );
        assert_eq!(
            ok(vec![vec![1, 0]]),
            PrimaryCheck::Unknown { missing: vec![1] }
        );
    }

    #[test]
    fn certificate_through_relation() {
        // 2x = y puts 2x into <y>.
        let p = pres("gens: x y; rel: 2x = y;");
        let i = IdealSpec::new("i", 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(
            is_primary(&p, &i, 10).unwrap(),
            PrimaryCheck::Certified(vec![2, 1])
        );
    }

    #[test]
    fn relative_counts_on_n() {
        let p = Presentation::free(1);
        let i = IdealSpec::new("i", 1, vec![vec![2]]).unwrap();
        let j = IdealSpec::maximal(1);
        // I = {2,3,..}, I + [5]N+ = {7,8,..}.
        assert_eq!(
            count_relative_quotient(&p, &RelativeSet::Ideal(i.clone()), &j, 5).unwrap(),
            5
        );
        assert_eq!(
            count_relative_quotient(&p, &RelativeSet::Whole, &j, 5).unwrap(),
            5
        );
        assert_eq!(
            count_relative_quotient(&p, &RelativeSet::Rees(i.clone()), &j, 5).unwrap(),
            2
        );
        assert_eq!(
            count_relative_quotient(&p, &RelativeSet::Intersection(i), &j, 5).unwrap(),
            2
        );
    }

    #[test]
    fn nilpotence_examples() {
        let w = bounded_nilpotence_scan(&pres("gens: x; rel: 2x = inf;"), 4).unwrap();
        assert_eq!(
            w,
            vec![NilWitness {
                element: vec![1],
                multiple: 2
            }]
        );
        assert!(bounded_nilpotence_scan(&Presentation::free(2), 6)
            .unwrap()
            .is_empty());
        // x + y = inf is reduced: x + y itself is inf, not a nonzero nilpotent.
        assert!(
            bounded_nilpotence_scan(&pres("gens: x y; rel: x + y = inf;"), 6)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn nilpotent_through_binomial() {
        // 2x = x + y and x + y = inf make x nilpotent only via the binomial step.
        let p = pres("gens: x y; rel: 2x = x + y; rel: x + y = inf;");
        let w = bounded_nilpotence_scan(&p, 4).unwrap();
        assert!(w.iter().any(|w| w.element == vec![1, 0]));
    }
}

//! Cancellative binoids as affine monoids in `Z^d x T`.
//!
//! Elements are flat vectors: `d` free coordinates followed by one coordinate
//! per torsion factor, reduced into `[0, k)`.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::ToPrimitive;

use crate::boxq::{box_quotient_with, BoxOptions};
use crate::cone::{dot_i64, Cone};
use crate::error::{Error, Result};
use crate::lattice::linalg::{self, Q};
use crate::lattice::{left_kernel, snf, LatticeQuotient};
use crate::presentation::{IdealSpec, Presentation};

pub type Elem = Vec<i64>;

/// Cap on parallelepiped points per simplicial cone in the Hilbert basis search.
const PARALLELEPIPED_CAP: i128 = 2_000_000;

#[derive(Debug, Clone)]
pub struct AffineMonoid {
    pub name: String,
    pub d: usize,
    pub torsion: Vec<i64>,
    pub gens: Vec<Elem>,
    cone: Cone,
    grading: Vec<i64>,
}

impl PartialEq for AffineMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.torsion == other.torsion && self.gens == other.gens
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl DiffGroup {
    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().map(|&k| k as u64).product()
    }
}

impl AffineMonoid {
    pub fn new(
        name: &str,
        d: usize,
        torsion: Vec<i64>,
        gens: Vec<(Vec<i64>, Vec<i64>)>,
    ) -> Result<Self> {
        let l = torsion.len();
        let mut elems = Vec::with_capacity(gens.len());
        for (f, t) in gens {
            if f.len() != d || t.len() != l {
                return Err(Error::invalid(format!(
                    "generator needs {d} free and {l} torsion entries"
                )));
            }
            let mut e = f;
            e.extend(t);
            elems.push(e);
        }
        Self::from_elems(name, d, torsion, elems)
    }

    pub fn from_elems(name: &str, d: usize, torsion: Vec<i64>, gens: Vec<Elem>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("affine monoid needs free rank >= 1"));
        }
        if torsion.iter().any(|&k| k < 2) {
            return Err(Error::invalid("torsion moduli must be >= 2"));
        }
        if gens.is_empty() {
            return Err(Error::invalid("affine monoid needs at least one generator"));
        }
        let mut seen = HashSet::new();
        let mut reduced = Vec::with_capacity(gens.len());
        for mut g in gens {
            if g.len() != d + torsion.len() {
                return Err(Error::invalid("generator has the wrong length"));
            }
            for (x, &k) in g[d..].iter_mut().zip(&torsion) {
                *x = x.rem_euclid(k);
            }
            if !seen.insert(g.clone()) {
                return Err(Error::invalid(format!("duplicate generator {g:?}")));
            }
            reduced.push(g);
        }
        let free: Vec<Vec<i64>> = reduced.iter().map(|g| g[..d].to_vec()).collect();
        let cone = Cone::from_generators(&free, d)?;
        let grading = cone.grading();
        if free.iter().any(|f| dot_i64(&grading, f) <= 0) {
            return Err(Error::invalid(
                "no strictly positive grading on the generators",
            ));
        }
        Ok(AffineMonoid {
            name: name.to_string(),
            d,
            torsion,
            gens: reduced,
            cone,
            grading,
        })
    }

    /// `N^k` minus a finite set of gaps.
    pub fn from_gaps(name: &str, k: usize, gaps: &[Vec<i64>]) -> Result<Self> {
        let gapset: HashSet<&Vec<i64>> = gaps.iter().collect();
        for g in gaps {
            if g.len() != k || g.iter().any(|&x| x < 0) || g.iter().all(|&x| x == 0) {
                return Err(Error::invalid(format!(
                    "gap {g:?} is not a nonzero point of N^{k}"
                )));
            }
        }
        let c = gaps.iter().flatten().copied().max().unwrap_or(0);
        // Irreducibles have all coordinates <= 2c + 1.
        let side = 2 * c + 2;
        let pts = box_points(k, side);
        let member = |p: &Vec<i64>| !gapset.contains(p);
        for a in &pts {
            for b in &pts {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if member(a) && member(b) && !member(&s) {
                    return Err(Error::invalid(format!(
                        "complement is not closed: {a:?} + {b:?} is a gap"
                    )));
                }
            }
        }
        let nonzero: Vec<&Vec<i64>> = pts
            .iter()
            .filter(|p| member(p) && p.iter().any(|&x| x != 0))
            .collect();
        let mut gens = Vec::new();
        for x in &nonzero {
            let reducible = nonzero.iter().any(|y| {
                *y != *x && {
                    let z: Vec<i64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                    z.iter().all(|&v| v >= 0) && z.iter().any(|&v| v != 0) && member(&z)
                }
            });
            if !reducible {
                gens.push((*x).clone());
            }
        }
        Self::from_elems(name, k, Vec::new(), gens)
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn grading(&self) -> &[i64] {
        &self.grading
    }

    pub fn level(&self, x: &[i64]) -> i64 {
        dot_i64(&self.grading, &x[..self.d])
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.d + self.torsion.len()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Elem {
        let mut out: Elem = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&mut out);
        out
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Elem {
        let mut out: Elem = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&mut out);
        out
    }

    pub fn scale(&self, a: &[i64], n: i64) -> Elem {
        let mut out: Elem = a.iter().map(|x| x * n).collect();
        self.reduce(&mut out);
        out
    }

    fn reduce(&self, x: &mut [i64]) {
        for (v, &k) in x[self.d..].iter_mut().zip(&self.torsion) {
            *v = v.rem_euclid(k);
        }
    }

    pub fn canonical_text(&self) -> String {
        format!(
            "affine d={} torsion={:?} gens={:?}",
            self.d, self.torsion, self.gens
        )
    }

    /// Integer relations among the generators: `{c : sum c_j g_j = 0 in Z^d x T}`.
    pub fn relation_lattice(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.gens.len();
        let cols = self.d + self.torsion.len();
        let mut rows: Vec<Vec<i64>> = self.gens.clone();
        for (i, &k) in self.torsion.iter().enumerate() {
            let mut r = vec![0; cols];
            r[self.d + i] = k;
            rows.push(r);
        }
        Ok(left_kernel(&rows, cols)?
            .into_iter()
            .map(|c| c[..n].to_vec())
            .filter(|c| c.iter().any(|&x| x != 0))
            .collect())
    }

    /// Rank and invariant factors of the group generated by the generators.
    pub fn difference_group(&self) -> Result<DiffGroup> {
        let lq = LatticeQuotient::new(self.gens.len(), &self.relation_lattice()?)?;
        Ok(DiffGroup {
            rank: lq.rank,
            torsion: lq.torsion,
        })
    }

    /// Project away the torsion part; returns `(F, |T|)` with `T` the torsion
    /// subgroup of the difference group.
    pub fn torsion_freefication(&self) -> Result<(AffineMonoid, u64)> {
        let t = self.difference_group()?.torsion_order();
        if self.is_torsion_free() {
            return Ok((self.clone(), t));
        }
        let mut free: Vec<Elem> = Vec::new();
        for g in &self.gens {
            let f = g[..self.d].to_vec();
            if !free.contains(&f) {
                free.push(f);
            }
        }
        let f = AffineMonoid::from_elems(&format!("{}_tf", self.name), self.d, Vec::new(), free)?;
        Ok((f, t))
    }

    /// All elements of level `<= bound`, sorted by level then coordinates.
    pub fn enumerate_members(&self, bound: i64) -> Vec<Elem> {
        let mut seen: HashSet<Elem> = HashSet::new();
        let zero = self.zero();
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for g in &self.gens {
                let y = self.add(&x, g);
                if self.level(&y) <= bound && seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let mut out: Vec<Elem> = seen.into_iter().collect();
        out.sort_by(|a, b| self.level(a).cmp(&self.level(b)).then_with(|| a.cmp(b)));
        out
    }

    pub fn membership(&self) -> Membership<'_> {
        Membership::new(self)
    }

    /// Coordinates in which the difference lattice is all of `Z^d`.
    pub fn lattice_coords(&self) -> Result<LatticeCoords> {
        if !self.is_torsion_free() {
            return Err(Error::invalid(
                "lattice coordinates need a torsion-free monoid",
            ));
        }
        let s = snf::smith(&self.gens, self.d)?;
        if s.rank == self.d && s.diag.iter().all(|&x| x == 1) {
            return Ok(LatticeCoords {
                monoid: self.clone(),
                to_user: None,
                from_user: None,
            });
        }
        let n = self.gens.len();
        let lq = LatticeQuotient::new(n, &self.relation_lattice()?)?;
        if lq.rank != self.d || !lq.torsion.is_empty() {
            return Err(Error::invalid("generators do not span a full-rank lattice"));
        }
        let gens = (0..n)
            .map(|j| lq.unit_image(j, n).map(|(f, _)| f))
            .collect::<Result<Vec<_>>>()?;
        let monoid = AffineMonoid::from_elems(&self.name, self.d, Vec::new(), gens)?;
        let to_user: Vec<Vec<i64>> = lq
            .free_unit_preimages()?
            .iter()
            .map(|c| {
                let mut v = vec![0i64; self.d];
                for (cj, g) in c.iter().zip(&self.gens) {
                    for (a, b) in v.iter_mut().zip(g) {
                        *a += cj * b;
                    }
                }
                v
            })
            .collect();
        let tq: Vec<Vec<Q>> = to_user.iter().map(|r| linalg::q_vec(r)).collect();
        let from_user =
            linalg::inverse_q(&tq).ok_or_else(|| Error::invalid("singular lattice basis"))?;
        Ok(LatticeCoords {
            monoid,
            to_user: Some(to_user),
            from_user: Some(from_user),
        })
    }

    /// Hilbert basis of the normalization, in these coordinates, plus the
    /// torsion of the difference group (the normalization is `F^ x T`).
    pub fn normalization(&self) -> Result<Normalization> {
        let (f, _) = self.torsion_freefication()?;
        let torsion = self.difference_group()?.torsion;
        let lc = f.lattice_coords()?;
        let hb = hilbert_basis(lc.monoid.cone())?;
        let user: Vec<Elem> = hb.iter().map(|h| lc.to_user(h)).collect();
        let monoid =
            AffineMonoid::from_elems(&format!("{}^", self.name), self.d, Vec::new(), user)?;
        Ok(Normalization { monoid, torsion })
    }

    pub fn is_normal(&self) -> Result<bool> {
        if !self.is_torsion_free() {
            return Ok(false);
        }
        let lc = self.lattice_coords()?;
        let hb = hilbert_basis(lc.monoid.cone())?;
        let gens: HashSet<&Elem> = lc.monoid.gens.iter().collect();
        Ok(hb.iter().all(|h| gens.contains(h)))
    }
}

fn box_points(k: usize, side: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..side).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Change of coordinates between a torsion-free monoid and a copy whose
/// difference lattice is `Z^d`.
#[derive(Debug, Clone)]
pub struct LatticeCoords {
    pub monoid: AffineMonoid,
    to_user: Option<Vec<Vec<i64>>>,
    from_user: Option<Vec<Vec<Q>>>,
}

impl LatticeCoords {
    pub fn is_identity(&self) -> bool {
        self.to_user.is_none()
    }

    pub fn to_user(&self, y: &[i64]) -> Elem {
        match &self.to_user {
            None => y.to_vec(),
            Some(t) => {
                let mut v = vec![0i64; t.first().map_or(0, Vec::len)];
                for (yk, row) in y.iter().zip(t) {
                    for (a, b) in v.iter_mut().zip(row) {
                        *a += yk * b;
                    }
                }
                v
            }
        }
    }

    /// Inverse of [`to_user`](Self::to_user); fails off the difference lattice.
    pub fn from_user(&self, x: &[i64]) -> Result<Elem> {
        match &self.from_user {
            None => Ok(x.to_vec()),
            Some(inv) => {
                let d = inv.len();
                let xq = linalg::q_vec(x);
                (0..d)
                    .map(|k| {
                        let v: Q = (0..d).map(|i| &xq[i] * &inv[i][k]).sum();
                        if v.is_integer() {
                            v.to_integer()
                                .to_i64()
                                .ok_or(Error::Overflow("coordinates"))
                        } else {
                            Err(Error::invalid(format!(
                                "{x:?} is not in the difference lattice"
                            )))
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Normalization {
    /// Normalization of the torsion-free part.
    pub monoid: AffineMonoid,
    /// Torsion factor carried along as a direct product.
    pub torsion: Vec<i64>,
}

/// Hilbert basis of `C ∩ Z^d` for a full-dimensional pointed cone.
///
/// Candidates are the rays and the lattice points of each half-open
/// parallelepiped of a triangulation; irreducible ones are kept.
pub fn hilbert_basis(cone: &Cone) -> Result<Vec<Elem>> {
    let d = cone.dim;
    let mut cands: BTreeSet<Elem> = cone.rays.iter().cloned().collect();
    for simplex in cone.triangulate() {
        let rows: Vec<Vec<i64>> = simplex.iter().map(|&i| cone.rays[i].clone()).collect();
        for p in parallelepiped_points(&rows, d)? {
            if p.iter().any(|&x| x != 0) {
                cands.insert(p);
            }
        }
    }
    let ell = cone.grading();
    let mut by_level: Vec<Elem> = cands.into_iter().collect();
    by_level.sort_by_key(|x| (dot_i64(&ell, x), x.clone()));
    let mut basis: Vec<Elem> = Vec::new();
    for x in &by_level {
        let lx = dot_i64(&ell, x);
        let reducible = by_level.iter().any(|c| {
            dot_i64(&ell, c) < lx && {
                let diff: Vec<i64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
                cone.contains(&diff)
            }
        });
        if !reducible {
            basis.push(x.clone());
        }
    }
    basis.sort();
    Ok(basis)
}

/// Lattice points `sum l_i r_i` with `0 <= l_i < 1`.
fn parallelepiped_points(rays: &[Vec<i64>], d: usize) -> Result<Vec<Elem>> {
    let s = snf::smith(rays, d)?;
    let det: i128 = s.diag.iter().product();
    if det == 0 {
        return Err(Error::invalid("degenerate simplicial cone"));
    }
    if det > PARALLELEPIPED_CAP {
        return Err(Error::ResourceCap(format!(
            "simplicial cone of index {det} is too large for Hilbert basis enumeration"
        )));
    }
    let vq: Vec<Vec<Q>> =
        s.v.iter()
            .map(|r| r.iter().map(|&x| linalg::q(x as i64)).collect())
            .collect();
    let vinv = linalg::inverse_q(&vq).expect("unimodular");
    let rq: Vec<Vec<Q>> = rays.iter().map(|r| linalg::q_vec(r)).collect();
    let rinv = linalg::inverse_q(&rq).expect("nonsingular");
    let mut out = Vec::with_capacity(det as usize);
    let mut y = vec![0i128; d];
    loop {
        // x = y V^-1, then fold x into the parallelepiped via its coefficients.
        let x: Vec<Q> = (0..d)
            .map(|j| (0..d).map(|i| linalg::q(y[i] as i64) * &vinv[i][j]).sum())
            .collect();
        let lam: Vec<Q> = (0..d)
            .map(|j| (0..d).map(|i| &x[i] * &rinv[i][j]).sum())
            .collect();
        let frac: Vec<Q> = lam.iter().map(|l| l - l.floor()).collect();
        let p: Elem = (0..d)
            .map(|j| {
                let v: Q = (0..d).map(|i| &frac[i] * &rq[i][j]).sum();
                v.to_integer().to_i64().expect("small coordinates")
            })
            .collect();
        out.push(p);
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            y[i] += 1;
            if y[i] < s.diag[i] {
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
}

/// Exact membership in an affine monoid by memoized search over generator
/// subtractions, pruned by the cone and the grading.
pub struct Membership<'a> {
    m: &'a AffineMonoid,
    memo: HashMap<Elem, bool>,
    /// `c` with `c + (C ∩ Z^d) ⊆ M`; only valid in lattice coordinates.
    conductor: Option<Elem>,
}

impl<'a> Membership<'a> {
    pub fn new(m: &'a AffineMonoid) -> Self {
        Membership {
            m,
            memo: HashMap::new(),
            conductor: None,
        }
    }

    /// Enable the shortcut `x - c ∈ C ⇒ x ∈ M`. The caller guarantees that the
    /// difference lattice is the ambient lattice and that `c` is a conductor element.
    pub fn with_conductor(mut self, c: Elem) -> Self {
        self.conductor = Some(c);
        self
    }

    fn quick(&self, x: &[i64]) -> Option<bool> {
        let d = self.m.d;
        if !self.m.cone.contains(&x[..d]) {
            return Some(false);
        }
        if x[..d].iter().all(|&v| v == 0) {
            return Some(x[d..].iter().all(|&v| v == 0));
        }
        if let Some(c) = &self.conductor {
            let diff: Vec<i64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
            if self.m.cone.contains(&diff) {
                return Some(true);
            }
        }
        if self.m.gens.iter().any(|g| g.as_slice() == x) {
            return Some(true);
        }
        self.memo.get(x).copied()
    }

    pub fn contains(&mut self, x: &[i64]) -> bool {
        if let Some(b) = self.quick(x) {
            return b;
        }
        let mut stack: Vec<(Elem, usize)> = vec![(x.to_vec(), 0)];
        while let Some((p, j)) = stack.last_mut() {
            if *j == self.m.gens.len() {
                let p = p.clone();
                stack.pop();
                self.memo.insert(p, false);
                continue;
            }
            let c = self.m.sub(p, &self.m.gens[*j]);
            *j += 1;
            match self.quick(&c) {
                Some(true) => {
                    for (q, _) in stack.drain(..) {
                        self.memo.insert(q, true);
                    }
                    return true;
                }
                Some(false) => {}
                None => stack.push((c, 0)),
            }
        }
        false
    }

    pub fn memo_size(&self) -> usize {
        self.memo.len()
    }
}

/// A conductor element `m` with `m + M^ ⊆ M`, in the monoid's coordinates.
#[derive(Debug, Clone)]
pub struct Conductor {
    pub element: Elem,
    /// Per Hilbert basis element `h`: `(h, k, b)` with `k h ∈ M` minimal and `h + b ∈ M`.
    pub witnesses: Vec<(Elem, i64, Elem)>,
}

/// Builds `m = sum (k_h - 1) b_h` over the Hilbert basis, where `h + b_h ∈ M`
/// and `k_h h ∈ M`. Any `sum n_h h` splits as multiples of `k_h h` plus
/// `t_h h` with `t_h < k_h`, and `m` absorbs the remainders.
pub fn conductor_element(m: &AffineMonoid) -> Result<Conductor> {
    let lc = m.lattice_coords()?;
    let c = &lc.monoid;
    let hb = hilbert_basis(c.cone())?;
    let mut mem = c.membership();
    let mut total = c.zero();
    let mut witnesses = Vec::new();
    let max_gen = c.gens.iter().map(|g| c.level(g)).max().unwrap_or(1);
    for h in &hb {
        if mem.contains(h) {
            witnesses.push((lc.to_user(h), 1, m.zero()));
            continue;
        }
        let mut k = 2i64;
        while !mem.contains(&c.scale(h, k)) {
            k += 1;
            if k > 100_000 {
                return Err(Error::invalid(
                    "normalization element is not integral (bug guard)",
                ));
            }
        }
        let mut bound = max_gen;
        let b = loop {
            let found = c
                .enumerate_members(bound)
                .into_iter()
                .find(|b| mem.contains(&c.add(h, b)));
            if let Some(b) = found {
                break b;
            }
            bound *= 2;
            if bound > 1 << 20 {
                return Err(Error::invalid(
                    "no difference representation found (bug guard)",
                ));
            }
        };
        total = c.add(&total, &c.scale(&b, k - 1));
        witnesses.push((lc.to_user(h), k, lc.to_user(&b)));
    }
    for h in &hb {
        if !mem.contains(&c.add(&total, h)) {
            return Err(Error::invalid("conductor verification failed (bug guard)"));
        }
    }
    Ok(Conductor {
        element: lc.to_user(&total),
        witnesses,
    })
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub gaps: Vec<Elem>,
    pub primary_gaps: Vec<Elem>,
    /// Every primary gap has level at most this.
    pub primary_bound: i64,
    pub complete: bool,
}

/// Gaps `M^ \ M` up to `level_bound` and the primary ones among them.
///
/// Primary gaps lie in `{sum t_h h : t_h < k_h}` (every gap is such a point plus
/// an element of `M`), so the list is complete once the bound reaches the
/// largest level of that box.
pub fn gaps_and_primary_gaps(m: &AffineMonoid, level_bound: i64) -> Result<GapReport> {
    let lc = m.lattice_coords()?;
    let c = &lc.monoid;
    let hb = hilbert_basis(c.cone())?;
    let normal = AffineMonoid::from_elems("normal", c.d, Vec::new(), hb.clone())?;
    let mut mem = c.membership();
    let mut primary_bound = 0;
    for h in &hb {
        let mut k = 1;
        while !mem.contains(&c.scale(h, k)) {
            k += 1;
        }
        primary_bound += (k - 1) * c.level(h);
    }
    let gaps: Vec<Elem> = normal
        .enumerate_members(level_bound)
        .into_iter()
        .filter(|x| !mem.contains(x))
        .collect();
    let gapset: HashSet<&Elem> = gaps.iter().collect();
    let primary: Vec<Elem> = gaps
        .iter()
        .filter(|b| c.gens.iter().all(|v| !gapset.contains(&c.sub(b, v))))
        .cloned()
        .collect();
    Ok(GapReport {
        gaps: gaps.iter().map(|g| lc.to_user(g)).collect(),
        primary_gaps: primary.iter().map(|g| lc.to_user(g)).collect(),
        primary_bound,
        complete: level_bound >= primary_bound,
    })
}

/// Outcome of the bounded cancellativity check of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cancellativity {
    /// Distinct elements outside `[q]N+` have distinct images for this `q`.
    VerifiedUpTo(u32),
    /// Two distinct elements with the same image in the difference group.
    Witness(Vec<u32>, Vec<u32>),
}

#[derive(Debug, Clone)]
pub struct AffineEmbedding {
    pub monoid: AffineMonoid,
    /// Image of each presentation generator.
    pub images: Vec<Elem>,
    pub cancellativity: Cancellativity,
}

impl AffineEmbedding {
    pub fn map(&self, v: &[u32]) -> Elem {
        let mut out = self.monoid.zero();
        for (&c, img) in v.iter().zip(&self.images) {
            out = self.monoid.add(&out, &self.monoid.scale(img, c as i64));
        }
        out
    }
}

/// Image of an integral presentation in `Z^r / L`, `L` spanned by the relation
/// vectors, with a bounded check that the map is injective.
pub fn presentation_to_affine(p: &Presentation) -> Result<AffineEmbedding> {
    if !p.is_integral() {
        return Err(Error::invalid("presentation has a monomial relation"));
    }
    let r = p.rank();
    if r == 0 {
        return Err(Error::invalid("the trivial binoid has no affine model"));
    }
    let rows: Vec<Vec<i64>> = p.relations.iter().filter_map(|x| x.difference()).collect();
    let lq = LatticeQuotient::new(r, &rows)?;
    let d = lq.rank;
    let mut images: Vec<Elem> = (0..r)
        .map(|j| {
            lq.unit_image(j, r).map(|(mut f, t)| {
                f.extend(t);
                f
            })
        })
        .collect::<Result<_>>()?;
    // Flip free coordinates that are nonpositive on every generator.
    for c in 0..d {
        if images.iter().all(|x| x[c] <= 0) {
            images.iter_mut().for_each(|x| x[c] = -x[c]);
        }
    }
    let image_of = |v: &[u32]| -> Elem {
        let mut out = vec![0i64; images[0].len()];
        for (&c, img) in v.iter().zip(&images) {
            for (a, b) in out.iter_mut().zip(img) {
                *a += c as i64 * b;
            }
        }
        for (x, &k) in out[d..].iter_mut().zip(&lq.torsion) {
            *x = x.rem_euclid(k);
        }
        out
    };
    let q = (2..=12u32)
        .rev()
        .find(|&q| (q as f64).powi(r as i32) <= 1e6)
        .unwrap_or(2);
    let cancellativity = if (q as f64).powi(r as i32) > 1e7 {
        Cancellativity::VerifiedUpTo(1)
    } else {
        let table = box_quotient_with(
            p,
            &IdealSpec::maximal(r),
            q,
            &BoxOptions {
                certificates: Some(vec![1; r]),
                ..BoxOptions::default()
            },
        )?;
        let mut seen: HashMap<Elem, Vec<u32>> = HashMap::new();
        let mut witness = None;
        for rep in table.representatives() {
            let img = image_of(&rep);
            if let Some(other) = seen.get(&img) {
                witness = Some((other.clone(), rep));
                break;
            }
            seen.insert(img, rep);
        }
        match witness {
            Some((a, b)) => Cancellativity::Witness(a, b),
            None => Cancellativity::VerifiedUpTo(q),
        }
    };
    if let Cancellativity::Witness(..) = cancellativity {
        // No affine monoid to build; report through a placeholder-free error path.
        return Ok(AffineEmbedding {
            monoid: placeholder(),
            images,
            cancellativity,
        });
    }
    let mut distinct: Vec<Elem> = Vec::new();
    for img in &images {
        if !distinct.contains(img) {
            distinct.push(img.clone());
        }
    }
    let monoid = AffineMonoid::from_elems(&p.name, d, lq.torsion.clone(), distinct)?;
    Ok(AffineEmbedding {
        monoid,
        images,
        cancellativity,
    })
}

fn placeholder() -> AffineMonoid {
    AffineMonoid::from_elems("none", 1, Vec::new(), vec![vec![1]]).expect("N")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;

    fn m(d: usize, gens: &[&[i64]]) -> AffineMonoid {
        AffineMonoid::from_elems(
            "m",
            d,
            Vec::new(),
            gens.iter().map(|g| g.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn enumerate_small() {
        let ns = m(1, &[&[2], &[3]]);
        let got: Vec<i64> = ns.enumerate_members(7).iter().map(|x| x[0]).collect();
        assert_eq!(got, vec![0, 2, 3, 4, 5, 6, 7]);
        let n2 = m(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(n2.grading(), &[1, 1]);
        assert_eq!(n2.enumerate_members(2).len(), 6);
    }

    #[test]
    fn five_generator_example_fills_quadrant() {
        let x = m(2, &[&[2, 0], &[3, 2], &[3, 3], &[2, 3], &[0, 2]]);
        let mut mem = x.membership();
        for a in 2..12 {
            for b in 2..12 {
                assert!(mem.contains(&[a, b]), "({a},{b})");
            }
        }
        assert!(!mem.contains(&[1, 0]));
        assert!(!mem.contains(&[1, 1]));
        let hb = x.normalization().unwrap().monoid.gens;
        assert_eq!(hb, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn numerical_semigroup_normalizes_to_n() {
        let ns = m(1, &[&[2], &[3]]);
        assert_eq!(ns.normalization().unwrap().monoid.gens, vec![vec![1]]);
        let c = conductor_element(&ns).unwrap();
        assert!(c.element[0] >= 2);
        let mut mem = ns.membership();
        for k in 0..20 {
            assert!(mem.contains(&[c.element[0] + k]));
        }
        let g = gaps_and_primary_gaps(&ns, 10).unwrap();
        assert_eq!(g.gaps, vec![vec![1]]);
        assert_eq!(g.primary_gaps, vec![vec![1]]);
        assert!(g.complete);
    }

    #[test]
    fn normal_has_zero_conductor_and_no_gaps() {
        let n = m(1, &[&[1]]);
        assert_eq!(conductor_element(&n).unwrap().element, vec![0]);
        assert!(gaps_and_primary_gaps(&n, 10).unwrap().gaps.is_empty());
    }

    #[test]
    fn torsion_example() {
        let t = AffineMonoid::new(
            "t",
            1,
            vec![2],
            vec![(vec![2], vec![1]), (vec![3], vec![0])],
        )
        .unwrap();
        assert_eq!(
            t.difference_group().unwrap(),
            DiffGroup {
                rank: 1,
                torsion: vec![2]
            }
        );
        let (f, order) = t.torsion_freefication().unwrap();
        assert_eq!(f.gens, vec![vec![2], vec![3]]);
        assert_eq!(order, 2);
        let n = t.normalization().unwrap();
        assert_eq!(n.monoid.gens, vec![vec![1]]);
        assert_eq!(n.torsion, vec![2]);
        let mut mem = t.membership();
        assert!(mem.contains(&[5, 1]));
        assert!(!mem.contains(&[2, 0]));
        assert!(mem.contains(&[4, 0]));
    }

    #[test]
    fn sublattice_coordinates() {
        let x = m(2, &[&[16, 0], &[0, 16], &[4, 12]]);
        let lc = x.lattice_coords().unwrap();
        assert!(!lc.is_identity());
        for (g, h) in x.gens.iter().zip(&lc.monoid.gens) {
            assert_eq!(&lc.to_user(h), g);
            assert_eq!(&lc.from_user(g).unwrap(), h);
        }
        assert!(lc.from_user(&[1, 0]).is_err());
    }

    #[test]
    fn presentation_images() {
        let p = parse_presentation("gens: x y; rel: 3x = 3y;").unwrap();
        let e = presentation_to_affine(&p).unwrap();
        assert_eq!(e.cancellativity, Cancellativity::VerifiedUpTo(12));
        assert_eq!(e.monoid.d, 1);
        assert_eq!(e.monoid.torsion, vec![3]);
        assert_eq!(e.images[0][0], 1);
        assert_eq!(e.images[1][0], 1);

        let p = parse_presentation("gens: X Y Z; rel: 4X + 12Y = 16Z;").unwrap();
        let e = presentation_to_affine(&p).unwrap();
        assert_eq!(
            e.monoid.difference_group().unwrap(),
            DiffGroup {
                rank: 2,
                torsion: vec![4]
            }
        );
        let (f, t) = e.monoid.torsion_freefication().unwrap();
        assert_eq!(t, 4);
        assert_eq!(f.gens.len(), 3);
    }

    #[test]
    fn non_cancellative_witness() {
        let p = parse_presentation("gens: x y; rel: x + y = x;").unwrap();
        let e = presentation_to_affine(&p).unwrap();
        assert!(matches!(e.cancellativity, Cancellativity::Witness(..)));
    }

    #[test]
    fn gap_monoid_generators() {
        let g = AffineMonoid::from_gaps("g", 1, &[vec![1]]).unwrap();
        assert_eq!(g.gens, vec![vec![2], vec![3]]);
        assert!(AffineMonoid::from_gaps("bad", 1, &[vec![2]]).is_err());
    }
}

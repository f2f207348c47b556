//! Polyhedral cones and polytopes in exact arithmetic: double description,
//! vertex enumeration, pulling triangulations and volumes.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::linalg::{self, dot, primitive, primitive_of, rank_big, Q};

/// Extreme rays of the pointed cone `{x : a.x >= 0 for a in rows}`.
///
/// Rows are inserted one at a time; two rays are adjacent when the rows tight
/// at both have rank `d - 2`.
pub fn extreme_rays(rows: &[Vec<BigInt>], d: usize) -> Result<Vec<Vec<BigInt>>> {
    if d == 0 {
        return Ok(Vec::new());
    }
    // Independent starting rows.
    let mut basis: Vec<usize> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(r.clone());
        if rank_big(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() < d {
        return Err(Error::invalid(
            "cone is not pointed (constraints have rank < d)",
        ));
    }
    let a: Vec<Vec<Q>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    let inv = linalg::inverse_q(&a).expect("independent rows");
    // Column k of the inverse is tight on every basis row except k.
    let mut rays: Vec<(Vec<BigInt>, Vec<usize>)> = (0..d)
        .map(|k| {
            let col: Vec<Q> = (0..d).map(|i| inv[i][k].clone()).collect();
            let tight = basis
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &i)| i)
                .collect();
            (primitive_of(&col), tight)
        })
        .collect();
    let in_basis: HashSet<usize> = basis.iter().copied().collect();
    for (ri, row) in rows.iter().enumerate() {
        if in_basis.contains(&ri) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        let mut next: Vec<(Vec<BigInt>, Vec<usize>)> = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (k, (r, t)) in rays.iter().enumerate() {
            match vals[k].sign() {
                num_bigint::Sign::Plus => {
                    pos.push(k);
                    next.push((r.clone(), t.clone()));
                }
                num_bigint::Sign::NoSign => {
                    let mut t = t.clone();
                    t.push(ri);
                    next.push((r.clone(), t));
                }
                num_bigint::Sign::Minus => neg.push(k),
            }
        }
        for &p in pos.iter().filter(|_| d >= 2) {
            for &n in &neg {
                let tp: HashSet<usize> = rays[p].1.iter().copied().collect();
                let common: Vec<usize> = rays[n]
                    .1
                    .iter()
                    .copied()
                    .filter(|i| tp.contains(i))
                    .collect();
                if common.len() + 2 < d {
                    continue;
                }
                let crows: Vec<Vec<BigInt>> = common.iter().map(|&i| rows[i].clone()).collect();
                if rank_big(&crows) != d - 2 {
                    continue;
                }
                let (vp, vn) = (&vals[p], &vals[n]);
                let new: Vec<BigInt> = rays[n]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(xn, xp)| vp * xn - vn * xp)
                    .collect();
                let mut t = common;
                t.push(ri);
                next.push((primitive(&new), t));
            }
        }
        // Duplicate rows can produce repeated rays.
        let mut seen = HashSet::new();
        next.retain(|(r, _)| seen.insert(r.clone()));
        rays = next;
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|(r, _)| r).collect();
    out.sort();
    Ok(out)
}

/// A full-dimensional pointed rational cone with primitive facet forms and rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub dim: usize,
    pub facets: Vec<Vec<i64>>,
    pub rays: Vec<Vec<i64>>,
}

fn small(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow("cone coordinates")))
        .collect()
}

impl Cone {
    /// The cone spanned by `gens` in `Q^d`; they must span `Q^d`.
    pub fn from_generators(gens: &[Vec<i64>], d: usize) -> Result<Self> {
        if d == 0 {
            return Ok(Cone {
                dim: 0,
                facets: Vec::new(),
                rays: Vec::new(),
            });
        }
        let rows: Vec<Vec<BigInt>> = gens.iter().map(|g| linalg::big_vec(g)).collect();
        if rank_big(&rows) < d {
            return Err(Error::invalid(format!(
                "generators span a cone of dimension < {d}; project to their lattice first"
            )));
        }
        let facets: Vec<Vec<i64>> = extreme_rays(&rows, d)?
            .iter()
            .map(|f| small(f))
            .collect::<Result<_>>()?;
        if linalg::rank_i64(&facets) < d {
            return Err(Error::invalid("cone contains a line (no positive grading)"));
        }
        let mut rays: Vec<Vec<i64>> = Vec::new();
        for g in gens {
            if g.iter().all(|&x| x == 0) {
                continue;
            }
            let tight: Vec<Vec<i64>> = facets.iter().filter(|f| dot(f, g) == 0).cloned().collect();
            if linalg::rank_i64(&tight) + 1 == d {
                let r = small(&primitive(&linalg::big_vec(g)))?;
                if !rays.contains(&r) {
                    rays.push(r);
                }
            }
        }
        rays.sort();
        Ok(Cone {
            dim: d,
            facets,
            rays,
        })
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| dot_i64(f, x) >= 0)
    }

    /// Sum of the facet forms divided by their gcd; positive on `C \ {0}`
    /// whenever the cone is pointed.
    pub fn grading(&self) -> Vec<i64> {
        let mut s = vec![0i64; self.dim];
        for f in &self.facets {
            for (a, b) in s.iter_mut().zip(f) {
                *a += b;
            }
        }
        let g = s.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g > 1 {
            s.iter_mut().for_each(|x| *x /= g);
        }
        s
    }

    /// Pulling triangulation into simplicial cones, as index sets into `rays`.
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        let d = self.dim;
        if d == 0 {
            return Vec::new();
        }
        if d == 1 {
            return vec![vec![0]];
        }
        let ell = linalg::q_vec(&self.grading());
        let pts: Vec<Vec<Q>> = self
            .rays
            .iter()
            .map(|r| {
                let rq = linalg::q_vec(r);
                let l = dot(&ell, &rq);
                rq.into_iter().map(|x| x / &l).collect()
            })
            .collect();
        let halves: Vec<(Vec<Q>, Q)> = self
            .facets
            .iter()
            .map(|f| (linalg::q_vec(f), Q::zero()))
            .collect();
        let all: Vec<usize> = (0..pts.len()).collect();
        pull(&pts, &all, &halves, d - 1)
    }
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Recursive pulling triangulation of the face spanned by `face` (of affine
/// dimension `dim`), using `halves` (`a.x >= b`) to find its facets.
fn pull(pts: &[Vec<Q>], face: &[usize], halves: &[(Vec<Q>, Q)], dim: usize) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for (a, b) in halves {
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&v| dot(a, &pts[v]) == *b)
            .collect();
        if sub.is_empty() || sub.contains(&apex) || sub.len() == face.len() {
            continue;
        }
        let refs: Vec<&Vec<Q>> = sub.iter().map(|&v| &pts[v]).collect();
        if linalg::affine_rank(&refs) + 1 != dim || !seen.insert(sub.clone()) {
            continue;
        }
        for mut s in pull(pts, &sub, halves, dim - 1) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

/// `{x : a.x >= b}` with integer normals and rational bounds.
#[derive(Debug, Clone)]
pub struct HPolyhedron {
    pub dim: usize,
    pub rows: Vec<(Vec<BigInt>, BigRational)>,
}

impl HPolyhedron {
    pub fn new(dim: usize) -> Self {
        HPolyhedron {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, a: Vec<BigInt>, b: BigRational) {
        assert_eq!(a.len(), self.dim);
        self.rows.push((a, b));
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.rows.iter().all(|(a, b)| {
            let aq: Vec<Q> = a.iter().map(|v| Q::from_integer(v.clone())).collect();
            dot(&aq, x) >= *b
        })
    }

    fn homogenized(&self) -> Vec<Vec<BigInt>> {
        let mut rows: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|(a, b)| {
                let den = b.denom().clone();
                let mut r: Vec<BigInt> = a.iter().map(|x| x * &den).collect();
                r.push(-b.numer().clone());
                r
            })
            .collect();
        let mut t = vec![BigInt::zero(); self.dim + 1];
        t[self.dim] = BigInt::one();
        rows.push(t);
        rows
    }

    /// Exact vertices; errors on unbounded input.
    pub fn vertices(&self) -> Result<Vec<Vec<Q>>> {
        let rows = self.homogenized();
        if rank_big(&rows) < self.dim + 1 {
            return Err(Error::invalid(
                "polyhedron is unbounded (has a lineality space)",
            ));
        }
        let rays = extreme_rays(&rows, self.dim + 1)?;
        let mut out = Vec::new();
        for r in rays {
            let t = &r[self.dim];
            if t.is_zero() {
                return Err(Error::invalid("polyhedron is unbounded"));
            }
            let tq = Q::from_integer(t.clone());
            out.push(
                r[..self.dim]
                    .iter()
                    .map(|x| Q::from_integer(x.clone()) / &tq)
                    .collect(),
            );
        }
        out.sort();
        Ok(out)
    }

    /// Volume of a bounded polyhedron, using its own rows as facet candidates.
    pub fn volume(&self) -> Result<Q> {
        let verts = self.vertices()?;
        let halves: Vec<(Vec<Q>, Q)> = self
            .rows
            .iter()
            .map(|(a, b)| {
                (
                    a.iter().map(|x| Q::from_integer(x.clone())).collect(),
                    b.clone(),
                )
            })
            .collect();
        Ok(volume_with_facets(&verts, &halves, self.dim))
    }
}

fn simplex_volume(pts: &[Vec<Q>], s: &[usize], d: usize) -> Q {
    let m: Vec<Vec<Q>> = s[1..]
        .iter()
        .map(|&v| pts[v].iter().zip(&pts[s[0]]).map(|(a, b)| a - b).collect())
        .collect();
    let fact: BigInt = (1..=d).map(BigInt::from).product();
    linalg::det_q(m).abs() / Q::from_integer(fact)
}

fn volume_with_facets(verts: &[Vec<Q>], halves: &[(Vec<Q>, Q)], d: usize) -> Q {
    if verts.len() < d + 1 {
        return Q::zero();
    }
    let refs: Vec<&Vec<Q>> = verts.iter().collect();
    if linalg::affine_rank(&refs) < d {
        return Q::zero();
    }
    if d == 0 {
        return Q::one();
    }
    let all: Vec<usize> = (0..verts.len()).collect();
    pull(verts, &all, halves, d)
        .iter()
        .map(|s| simplex_volume(verts, s, d))
        .fold(Q::zero(), |a, b| a + b)
}

/// Exact `d`-volume of the convex hull of `vertices`; 0 when degenerate.
pub fn polytope_volume(vertices: &[Vec<Q>]) -> Result<Q> {
    let Some(first) = vertices.first() else {
        return Ok(Q::zero());
    };
    let d = first.len();
    let refs: Vec<&Vec<Q>> = vertices.iter().collect();
    if vertices.len() < d + 1 || linalg::affine_rank(&refs) < d {
        return Ok(Q::zero());
    }
    // Facets of conv(V) are the rays of the dual of cone{(v, 1)}.
    let gens: Vec<Vec<BigInt>> = vertices
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.push(Q::one());
            primitive_of(&w)
        })
        .collect();
    let facets = extreme_rays(&gens, d + 1)?;
    let halves: Vec<(Vec<Q>, Q)> = facets
        .iter()
        .map(|f| {
            let a: Vec<Q> = f[..d].iter().map(|x| Q::from_integer(x.clone())).collect();
            (a, -Q::from_integer(f[d].clone()))
        })
        .collect();
    Ok(volume_with_facets(vertices, &halves, d))
}

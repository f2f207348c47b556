//! Prime spectrum of a presented binoid, dimensions and simplicial binoids.
//!
//! Primes are subsets of generators: `p` is prime iff its indicator map to
//! `{0, inf}` respects every relation.

use crate::error::{Error, Result};
use crate::lattice::snf;
use crate::presentation::{support_mask, Presentation, Relation};

pub const MAX_SPEC_RANK: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal(pub u64);

impl PrimeIdeal {
    pub fn members(&self) -> Vec<usize> {
        (0..64).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn contains(&self, other: &PrimeIdeal) -> bool {
        other.0 & !self.0 == 0
    }

    pub fn names(&self, p: &Presentation) -> Vec<String> {
        self.members()
            .into_iter()
            .map(|i| p.gens[i].clone())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SpecPoset {
    pub rank: usize,
    /// Sorted lexicographically by member list.
    pub primes: Vec<PrimeIdeal>,
}

pub fn is_consistent(p: &Presentation, mask: u64) -> bool {
    p.relations.iter().all(|rel| match rel {
        Relation::Binomial { lhs, rhs } => {
            (support_mask(lhs) & mask != 0) == (support_mask(rhs) & mask != 0)
        }
        Relation::Monomial { lhs } => support_mask(lhs) & mask != 0,
    })
}

pub fn spectrum(p: &Presentation) -> Result<SpecPoset> {
    let r = p.rank();
    if r > MAX_SPEC_RANK {
        return Err(Error::ResourceCap(format!(
            "spectrum enumeration needs r <= {MAX_SPEC_RANK}, got {r}"
        )));
    }
    let mut primes: Vec<PrimeIdeal> = (0..1u64 << r)
        .filter(|&m| is_consistent(p, m))
        .map(PrimeIdeal)
        .collect();
    primes.sort_by_key(|q| q.members());
    Ok(SpecPoset { rank: r, primes })
}

impl SpecPoset {
    pub fn combinatorial_dimension(&self) -> usize {
        let mut order: Vec<usize> = (0..self.primes.len()).collect();
        order.sort_by_key(|&i| self.primes[i].0.count_ones());
        let mut len = vec![0usize; self.primes.len()];
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[..k] {
                let (a, b) = (self.primes[j], self.primes[i]);
                if a != b && b.contains(&a) {
                    len[i] = len[i].max(len[j] + 1);
                }
            }
        }
        len.into_iter().max().unwrap_or(0)
    }

    pub fn minimal_primes(&self) -> Vec<PrimeIdeal> {
        self.primes
            .iter()
            .filter(|&&a| !self.primes.iter().any(|&b| b != a && a.contains(&b)))
            .copied()
            .collect()
    }
}

/// `N/p`: drop the generators in `p` and every relation touching them.
pub fn quotient_by_prime(p: &Presentation, prime: PrimeIdeal) -> Presentation {
    let keep: Vec<usize> = (0..p.rank()).filter(|&i| prime.0 >> i & 1 == 0).collect();
    let restrict = |v: &[u32]| keep.iter().map(|&i| v[i]).collect::<Vec<u32>>();
    let relations = p
        .relations
        .iter()
        .filter(|rel| {
            support_mask(rel.lhs()) & prime.0 == 0
                && rel.rhs().is_none_or(|v| support_mask(v) & prime.0 == 0)
        })
        .map(|rel| match rel {
            Relation::Binomial { lhs, rhs } => Relation::Binomial {
                lhs: restrict(lhs),
                rhs: restrict(rhs),
            },
            Relation::Monomial { lhs } => Relation::Monomial { lhs: restrict(lhs) },
        })
        .collect();
    Presentation {
        name: format!("{}/{:?}", p.name, prime.names(p)),
        gens: keep.iter().map(|&i| p.gens[i].clone()).collect(),
        relations,
    }
}

/// Rank of the group generated by `N/p`: generators minus relation-lattice rank.
pub fn prime_rank(p: &Presentation, prime: PrimeIdeal) -> usize {
    let qp = quotient_by_prime(p, prime);
    let rows: Vec<Vec<i64>> = qp
        .relations
        .iter()
        .filter_map(Relation::difference)
        .collect();
    qp.rank() - snf::rank(&rows, qp.rank())
}

/// Maximum over all primes of the rank of the associated difference group.
pub fn rank_dimension(p: &Presentation, s: &SpecPoset) -> usize {
    s.primes
        .iter()
        .map(|&q| prime_rank(p, q))
        .max()
        .unwrap_or(0)
}

/// A simplicial complex on named vertices, facets stored as bit masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: Vec<String>,
    pub facets: Vec<u64>,
}

impl SimplicialComplex {
    pub fn new(vertices: Vec<String>, facets: Vec<u64>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 || n > 24 {
            return Err(Error::invalid("a complex needs between 1 and 24 vertices"));
        }
        let all = (1u64 << n) - 1;
        for (i, &f) in facets.iter().enumerate() {
            if f & !all != 0 {
                return Err(Error::invalid("facet uses an unknown vertex"));
            }
            for (j, &g) in facets.iter().enumerate() {
                if i != j && f & !g == 0 {
                    return Err(Error::invalid(format!(
                        "facet {i} is contained in facet {j}"
                    )));
                }
            }
        }
        let covered = facets.iter().fold(0, |a, &f| a | f);
        if covered != all {
            return Err(Error::invalid("every vertex must lie in some facet"));
        }
        Ok(SimplicialComplex { vertices, facets })
    }

    pub fn from_names(vertices: Vec<String>, facets: &[Vec<String>]) -> Result<Self> {
        let mut masks = Vec::new();
        for f in facets {
            let mut m = 0u64;
            for v in f {
                let i = vertices
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| Error::UnknownGenerator(v.clone()))?;
                m |= 1 << i;
            }
            masks.push(m);
        }
        SimplicialComplex::new(vertices, masks)
    }

    pub fn is_face(&self, s: u64) -> bool {
        self.facets.iter().any(|&f| s & !f == 0)
    }

    /// Non-faces all of whose proper subsets are faces.
    pub fn minimal_non_faces(&self) -> Vec<u64> {
        let n = self.vertices.len();
        let max_size = self
            .facets
            .iter()
            .map(|f| f.count_ones())
            .max()
            .unwrap_or(0)
            + 1;
        let mut out = Vec::new();
        for s in 1u64..(1 << n) {
            if s.count_ones() > max_size || self.is_face(s) {
                continue;
            }
            let minimal = (0..n)
                .filter(|i| s >> i & 1 == 1)
                .all(|i| self.is_face(s & !(1 << i)));
            if minimal {
                out.push(s);
            }
        }
        out.sort_by_key(|&s| (s.count_ones(), s));
        out
    }

    pub fn dimension(&self) -> usize {
        self.facets
            .iter()
            .map(|f| f.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Number of facets of maximal size.
    pub fn top_facets(&self) -> usize {
        let d = self.dimension();
        self.facets
            .iter()
            .filter(|f| f.count_ones() as usize == d)
            .count()
    }
}

/// Free binoid on the vertices modulo `sum(m) = inf` for each minimal non-face `m`.
pub fn simplicial_binoid(cx: &SimplicialComplex) -> Result<Presentation> {
    let n = cx.vertices.len();
    let relations = cx
        .minimal_non_faces()
        .into_iter()
        .map(|m| Relation::Monomial {
            lhs: (0..n).map(|i| (m >> i & 1) as u32).collect(),
        })
        .collect();
    Presentation::new("simplicial", cx.vertices.clone(), relations)
}

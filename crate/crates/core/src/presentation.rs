//! Finitely presented binoids `(N^r)^inf / ~` and their ideals.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `lhs = rhs`, both sides finite.
    Binomial { lhs: Vec<u32>, rhs: Vec<u32> },
    /// `lhs = inf`.
    Monomial { lhs: Vec<u32> },
}

impl Relation {
    pub fn lhs(&self) -> &[u32] {
        match self {
            Relation::Binomial { lhs, .. } | Relation::Monomial { lhs } => lhs,
        }
    }

    pub fn rhs(&self) -> Option<&[u32]> {
        match self {
            Relation::Binomial { rhs, .. } => Some(rhs),
            Relation::Monomial { .. } => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self, Relation::Monomial { .. })
    }

    /// `lhs - rhs` as a signed vector; `None` for monomial relations.
    pub fn difference(&self) -> Option<Vec<i64>> {
        match self {
            Relation::Binomial { lhs, rhs } => Some(
                lhs.iter()
                    .zip(rhs)
                    .map(|(&a, &b)| a as i64 - b as i64)
                    .collect(),
            ),
            Relation::Monomial { .. } => None,
        }
    }
}

pub(crate) fn support_mask(v: &[u32]) -> u64 {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(0u64, |m, (i, _)| m | (1 << i))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub gens: Vec<String>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        gens: Vec<String>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        let p = Presentation {
            name: name.into(),
            gens,
            relations,
        };
        p.validate()?;
        Ok(p)
    }

    /// The free binoid on `r` generators named `x1..xr`.
    pub fn free(r: usize) -> Self {
        Presentation {
            name: format!("free{r}"),
            gens: (1..=r).map(|i| format!("x{i}")).collect(),
            relations: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    fn validate(&self) -> Result<()> {
        let r = self.gens.len();
        if r > 63 {
            return Err(Error::invalid("at most 63 generators are supported"));
        }
        let mut seen = HashSet::new();
        for g in &self.gens {
            if !seen.insert(g.as_str()) {
                return Err(Error::DuplicateGenerator(g.clone()));
            }
        }
        for rel in &self.relations {
            if rel.lhs().len() != r || rel.rhs().is_some_and(|v| v.len() != r) {
                return Err(Error::invalid(format!(
                    "relation vector length differs from generator count {r}"
                )));
            }
            match rel {
                Relation::Binomial { lhs, rhs } => {
                    if lhs == rhs {
                        return Err(Error::TrivialRelation);
                    }
                    if lhs.iter().all(|&c| c == 0) || rhs.iter().all(|&c| c == 0) {
                        return Err(Error::ZeroSidedRelation);
                    }
                }
                Relation::Monomial { lhs } => {
                    if lhs.iter().all(|&c| c == 0) {
                        return Err(Error::invalid("relation 0 = inf gives the zero binoid"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_integral(&self) -> bool {
        self.relations.iter().all(|r| !r.is_monomial())
    }

    /// Smash product over the trivial binoid: disjoint generators, padded relations.
    pub fn smash(&self, other: &Presentation) -> Presentation {
        let (r1, r2) = (self.rank(), other.rank());
        let pad = |v: &[u32], before: usize, after: usize| {
            let mut out = vec![0; before];
            out.extend_from_slice(v);
            out.extend(std::iter::repeat_n(0, after));
            out
        };
        let left: HashSet<&str> = self.gens.iter().map(String::as_str).collect();
        let mut gens = self.gens.clone();
        for g in &other.gens {
            let mut name = g.clone();
            while left.contains(name.as_str()) || gens.contains(&name) {
                name.push('\'');
            }
            gens.push(name);
        }
        let mut relations = Vec::with_capacity(self.relations.len() + other.relations.len());
        for rel in &self.relations {
            relations.push(match rel {
                Relation::Binomial { lhs, rhs } => Relation::Binomial {
                    lhs: pad(lhs, 0, r2),
                    rhs: pad(rhs, 0, r2),
                },
                Relation::Monomial { lhs } => Relation::Monomial {
                    lhs: pad(lhs, 0, r2),
                },
            });
        }
        for rel in &other.relations {
            relations.push(match rel {
                Relation::Binomial { lhs, rhs } => Relation::Binomial {
                    lhs: pad(lhs, r1, 0),
                    rhs: pad(rhs, r1, 0),
                },
                Relation::Monomial { lhs } => Relation::Monomial {
                    lhs: pad(lhs, r1, 0),
                },
            });
        }
        Presentation {
            name: format!("{}^{}", self.name, other.name),
            gens,
            relations,
        }
    }

    /// Replace each monomial relation `u = inf` by `u = u + (1,..,1)|supp u`.
    pub fn integralize(&self) -> Presentation {
        let relations = self
            .relations
            .iter()
            .map(|rel| match rel {
                Relation::Monomial { lhs } => Relation::Binomial {
                    lhs: lhs.clone(),
                    rhs: lhs.iter().map(|&c| if c > 0 { c + 1 } else { 0 }).collect(),
                },
                other => other.clone(),
            })
            .collect();
        Presentation {
            name: format!("{}-int", self.name),
            gens: self.gens.clone(),
            relations,
        }
    }

    /// Stable text form used for hashing and display.
    pub fn canonical_text(&self) -> String {
        let mut s = format!("binoid r={} gens={}", self.rank(), self.gens.join(","));
        for rel in &self.relations {
            match rel {
                Relation::Binomial { lhs, rhs } => s.push_str(&format!(";{lhs:?}={rhs:?}")),
                Relation::Monomial { lhs } => s.push_str(&format!(";{lhs:?}=inf")),
            }
        }
        s
    }

    pub fn format_vector(&self, v: &[u32]) -> String {
        let terms: Vec<String> = v
            .iter()
            .zip(&self.gens)
            .filter(|(&c, _)| c > 0)
            .map(|(&c, g)| if c == 1 { g.clone() } else { format!("{c}{g}") })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "binoid {} {{ gens: {};", self.name, self.gens.join(" "))?;
        for rel in &self.relations {
            match rel {
                Relation::Binomial { lhs, rhs } => write!(
                    f,
                    " rel: {} = {};",
                    self.format_vector(lhs),
                    self.format_vector(rhs)
                )?,
                Relation::Monomial { lhs } => {
                    write!(f, " rel: {} = inf;", self.format_vector(lhs))?
                }
            }
        }
        write!(f, " }}")
    }
}

/// An ideal given by finitely many nonzero generator vectors in `N^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    pub name: String,
    pub gens: Vec<Vec<u32>>,
}

impl IdealSpec {
    pub fn new(name: impl Into<String>, r: usize, gens: Vec<Vec<u32>>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::invalid("an ideal needs at least one generator"));
        }
        for g in &gens {
            if g.len() != r {
                return Err(Error::invalid("ideal generator length differs from rank"));
            }
            if g.iter().all(|&c| c == 0) {
                return Err(Error::invalid(
                    "ideal generator 0 would give the whole binoid",
                ));
            }
        }
        Ok(IdealSpec {
            name: name.into(),
            gens,
        })
    }

    /// The maximal ideal `N+`, generated by the unit vectors.
    pub fn maximal(r: usize) -> Self {
        IdealSpec {
            name: "N+".into(),
            gens: (0..r)
                .map(|i| {
                    let mut v = vec![0; r];
                    v[i] = 1;
                    v
                })
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.gens.first().map_or(0, Vec::len)
    }

    /// `[n]I`, generated by `n*g` for the generators `g` of `I`.
    pub fn frobenius_power(&self, n: u32) -> IdealSpec {
        assert!(n > 0, "Frobenius sum needs n >= 1");
        IdealSpec {
            name: if n == 1 {
                self.name.clone()
            } else {
                format!("[{n}]{}", self.name)
            },
            gens: self
                .gens
                .iter()
                .map(|g| g.iter().map(|&c| c * n).collect())
                .collect(),
        }
    }

    /// The ideal `I + J = {a + b}`, generated by pairwise sums.
    pub fn sum(&self, other: &IdealSpec) -> IdealSpec {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if !gens.contains(&s) {
                    gens.push(s);
                }
            }
        }
        IdealSpec {
            name: format!("({})+({})", self.name, other.name),
            gens,
        }
    }

    pub fn canonical_text(&self) -> String {
        format!("ideal {:?}", self.gens)
    }
}

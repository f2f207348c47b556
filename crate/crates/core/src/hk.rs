//! Hilbert-Kunz functions and multiplicities.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::affine::{hilbert_basis, presentation_to_affine, AffineMonoid, Cancellativity, Elem};
use crate::boxq::{self, box_quotient, DEFAULT_LEVEL_CAP};
use crate::cone::{dot_i64, Cone, HPolyhedron};
use crate::error::{Error, Result};
use crate::lattice::linalg::Q;
use crate::presentation::{IdealSpec, Presentation};
use crate::spectrum::{self, quotient_by_prime};

/// Largest ideal generator count for the inclusion-exclusion over subsets.
pub const SUBSET_CAP: usize = 20;

/// `#N/[q]I` on a presentation, by box congruence closure.
pub fn hkf(p: &Presentation, ideal: &IdealSpec, q: u32) -> Result<u64> {
    Ok(box_quotient(p, ideal, q)?.class_count as u64)
}

/// `#M/[q]I` on an affine monoid, counting `M \ U (q a_i + M)` directly.
pub fn hkf_affine(m: &AffineMonoid, ideal: &[Elem], q: u32) -> Result<u64> {
    hkf_affine_capped(m, ideal, q, DEFAULT_LEVEL_CAP)
}

pub fn hkf_affine_capped(m: &AffineMonoid, ideal: &[Elem], q: u32, cap: usize) -> Result<u64> {
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    let ctx = AffineCounter::new(m, ideal)?;
    ctx.count(q, cap)
}

/// Ideal generators and a membership oracle in the best available coordinates.
pub(crate) struct AffineCounter {
    pub(crate) m: AffineMonoid,
    ideal: Vec<Elem>,
    pub(crate) conductor: Option<Elem>,
}

impl AffineCounter {
    pub(crate) fn new(m: &AffineMonoid, ideal: &[Elem]) -> Result<Self> {
        if ideal.is_empty() {
            return Err(Error::invalid("ideal needs at least one generator"));
        }
        let mut mem = m.membership();
        for a in ideal {
            if a.len() != m.d + m.torsion.len() || !mem.contains(a) {
                return Err(Error::invalid(format!(
                    "ideal generator {a:?} is not in the monoid"
                )));
            }
        }
        check_primary_affine(m, ideal)?;
        if !m.is_torsion_free() {
            return Ok(AffineCounter {
                m: m.clone(),
                ideal: ideal.to_vec(),
                conductor: None,
            });
        }
        // In lattice coordinates a conductor element turns most membership
        // queries into a cone test.
        let lc = m.lattice_coords()?;
        let ideal = ideal
            .iter()
            .map(|a| lc.from_user(a))
            .collect::<Result<Vec<_>>>()?;
        let conductor = crate::affine::conductor_element(&lc.monoid)?.element;
        Ok(AffineCounter {
            m: lc.monoid,
            ideal,
            conductor: Some(conductor),
        })
    }

    fn count(&self, q: u32, cap: usize) -> Result<u64> {
        Ok(self.outside(q, cap)?.len() as u64)
    }

    /// `M \ U (q a_i + M)`, in this counter's coordinates.
    pub(crate) fn outside(&self, q: u32, cap: usize) -> Result<HashSet<Elem>> {
        let m = &self.m;
        if self.ideal.iter().any(|a| a.iter().all(|&x| x == 0)) {
            return Ok(HashSet::new());
        }
        let mut mem = m.membership();
        if let Some(c) = &self.conductor {
            mem = mem.with_conductor(c.clone());
        }
        let shifts: Vec<Elem> = self.ideal.iter().map(|a| m.scale(a, q as i64)).collect();
        let mut seen: HashSet<Elem> = HashSet::new();
        let zero = m.zero();
        seen.insert(zero.clone());
        let mut stack = vec![zero];
        while let Some(x) = stack.pop() {
            for g in &m.gens {
                let y = m.add(&x, g);
                if seen.contains(&y) {
                    continue;
                }
                let in_ideal = shifts.iter().any(|s| mem.contains(&m.sub(&y, s)));
                if !in_ideal {
                    if seen.len() >= cap {
                        return Err(Error::ResourceCap(format!(
                            "more than {cap} elements outside [{q}]I"
                        )));
                    }
                    seen.insert(y.clone());
                    stack.push(y);
                }
            }
        }
        Ok(seen)
    }
}

/// Every extreme ray of the cone must carry an ideal generator, and every
/// monoid generator needs a multiple inside the ideal.
fn check_primary_affine(m: &AffineMonoid, ideal: &[Elem]) -> Result<()> {
    let cone = m.cone();
    for r in &cone.rays {
        if alpha(cone, r, ideal).is_none() {
            return Err(Error::NotPrimary(format!(
                "no power of the ray {r:?} enters the ideal"
            )));
        }
    }
    let mut mem = m.membership();
    for g in &m.gens {
        let found = (1..=boxq::DEFAULT_PRIMARY_BOUND as i64).any(|k| {
            let kg = m.scale(g, k);
            ideal.iter().any(|a| mem.contains(&m.sub(&kg, a)))
        });
        if !found {
            return Err(Error::PrimaryUnknown {
                bound: boxq::DEFAULT_PRIMARY_BOUND as u64,
            });
        }
    }
    Ok(())
}

/// Smallest `t >= 0` with `t r` in some `a_i + C`, if any.
fn alpha(cone: &Cone, r: &[i64], ideal: &[Elem]) -> Option<Q> {
    let d = cone.dim;
    ideal
        .iter()
        .filter_map(|a| {
            let mut t = Q::zero();
            for f in &cone.facets {
                let fr = dot_i64(f, r);
                let fa = dot_i64(f, &a[..d]);
                if fr == 0 {
                    if fa > 0 {
                        return None;
                    }
                } else {
                    t = t.max(Q::new(BigInt::from(fa), BigInt::from(fr)));
                }
            }
            Some(t)
        })
        .min()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkSeries {
    pub qs: Vec<u32>,
    pub counts: Vec<u64>,
}

impl HkSeries {
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.qs.iter().copied().zip(self.counts.iter().copied())
    }
}

/// Evaluate `f` on every `q`, in parallel when the feature is on.
pub fn hkf_series<F>(qs: &[u32], f: F) -> Result<HkSeries>
where
    F: Fn(u32) -> Result<u64> + Sync,
{
    #[cfg(feature = "parallel")]
    let counts: Result<Vec<u64>> = {
        use rayon::prelude::*;
        qs.par_iter().map(|&q| f(q)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let counts: Result<Vec<u64>> = qs.iter().map(|&q| f(q)).collect();
    Ok(HkSeries {
        qs: qs.to_vec(),
        counts: counts?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Volume,
    Pipeline,
    Fit,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Volume => "volume",
            Method::Pipeline => "pipeline",
            Method::Fit => "fit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EhkResult {
    pub value: Q,
    pub method: Method,
    /// Exponent `d` in `hkf(q) ~ e q^d`.
    pub dim: usize,
    pub trace: Vec<String>,
}

/// `vol(B)` for `B = C \ U (a_i + C)`, with `C` full-dimensional in `Z^d`
/// and the `a_i` in lattice coordinates.
fn region_volume(cone: &Cone, ideal: &[Elem], trace: &mut Vec<String>) -> Result<Q> {
    let d = cone.dim;
    if ideal.iter().any(|a| a[..d].iter().all(|&x| x == 0)) {
        return Ok(Q::zero());
    }
    // Drop a_i with a_i + C inside some a_k + C.
    let mut gens: Vec<Elem> = Vec::new();
    for (i, a) in ideal.iter().enumerate() {
        let covered = ideal.iter().enumerate().any(|(k, b)| {
            let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            k != i && cone.contains(&diff) && (diff.iter().any(|&x| x != 0) || k < i)
        });
        if !covered {
            gens.push(a[..d].to_vec());
        }
    }
    if gens.len() > SUBSET_CAP {
        return Err(Error::ResourceCap(format!(
            "{} irredundant ideal generators exceed the subset cap {SUBSET_CAP}",
            gens.len()
        )));
    }
    let ell = cone.grading();
    let mut bound = Q::zero();
    for r in &cone.rays {
        let a = alpha(cone, r, &gens).ok_or_else(|| {
            Error::NotPrimary(format!("no multiple of the ray {r:?} enters the ideal"))
        })?;
        bound += a * Q::from_integer(BigInt::from(dot_i64(&ell, r)));
    }
    let level_bound: BigInt = bound.ceil().to_integer() + 1;
    trace.push(format!(
        "region: {} facets, {} rays, {} ideal generators, level bound {}",
        cone.facets.len(),
        cone.rays.len(),
        gens.len(),
        level_bound
    ));
    // Group subsets by the corner vector max_{i in I} sigma(a_i).
    let forms: Vec<Vec<i64>> = gens
        .iter()
        .map(|a| cone.facets.iter().map(|f| dot_i64(f, a)).collect())
        .collect();
    let mut coeff: HashMap<Vec<i64>, i64> = HashMap::new();
    fn walk(
        i: usize,
        corner: &mut Vec<i64>,
        sign: i64,
        forms: &[Vec<i64>],
        acc: &mut HashMap<Vec<i64>, i64>,
    ) {
        if i == forms.len() {
            *acc.entry(corner.clone()).or_insert(0) += sign;
            return;
        }
        walk(i + 1, corner, sign, forms, acc);
        let saved = corner.clone();
        for (c, &v) in corner.iter_mut().zip(&forms[i]) {
            *c = (*c).max(v);
        }
        walk(i + 1, corner, -sign, forms, acc);
        *corner = saved;
    }
    walk(0, &mut vec![0; cone.facets.len()], 1, &forms, &mut coeff);
    let mut terms: Vec<(Vec<i64>, i64)> = coeff.into_iter().filter(|&(_, c)| c != 0).collect();
    terms.sort();
    trace.push(format!(
        "inclusion-exclusion: {} distinct corners",
        terms.len()
    ));
    let piece = |corner: &Vec<i64>| -> Result<Q> {
        let mut h = HPolyhedron::new(d);
        for (f, &b) in cone.facets.iter().zip(corner) {
            h.push(
                f.iter().map(|&x| BigInt::from(x)).collect(),
                Q::from_integer(BigInt::from(b)),
            );
        }
        h.push(
            ell.iter().map(|&x| -BigInt::from(x)).collect(),
            Q::from_integer(-level_bound.clone()),
        );
        h.volume()
    };
    #[cfg(feature = "parallel")]
    let vols: Vec<Result<Q>> = {
        use rayon::prelude::*;
        terms.par_iter().map(|(c, _)| piece(c)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let vols: Vec<Result<Q>> = terms.iter().map(|(c, _)| piece(c)).collect();
    let mut total = Q::zero();
    for ((_, c), v) in terms.iter().zip(vols) {
        total += v? * Q::from_integer(BigInt::from(*c));
    }
    Ok(total)
}

/// `e_HK(I, M) = vol(C \ U (a_i + C))` for a normal torsion-free monoid.
pub fn ehk_normal_volume(m: &AffineMonoid, ideal: &[Elem]) -> Result<EhkResult> {
    if !m.is_torsion_free() {
        return Err(Error::invalid(
            "the volume formula needs a torsion-free monoid",
        ));
    }
    let lc = m.lattice_coords()?;
    let hb = hilbert_basis(lc.monoid.cone())?;
    let mut mem = lc.monoid.membership();
    if let Some(h) = hb.iter().find(|h| !mem.contains(h)) {
        return Err(Error::invalid(format!(
            "monoid is not normal: {:?} lies in the cone but not in the monoid",
            lc.to_user(h)
        )));
    }
    let local = ideal
        .iter()
        .map(|a| lc.from_user(a))
        .collect::<Result<Vec<_>>>()?;
    for a in &local {
        if !mem.contains(a) {
            return Err(Error::invalid(format!(
                "ideal generator {a:?} is not in the monoid"
            )));
        }
    }
    let mut trace = vec![format!("normal monoid of rank {}", m.d)];
    let value = region_volume(lc.monoid.cone(), &local, &mut trace)?;
    Ok(EhkResult {
        value,
        method: Method::Volume,
        dim: m.d,
        trace,
    })
}

/// `e_HK` of a torsion-free monoid w.r.t. its maximal ideal, through the
/// normalization: the ideal extended to the normalization has the same multiplicity.
fn ehk_torsion_free(f: &AffineMonoid, trace: &mut Vec<String>) -> Result<Q> {
    let lc = f.lattice_coords()?;
    let hb = hilbert_basis(lc.monoid.cone())?;
    let mut mem = lc.monoid.membership();
    let normal = hb.iter().all(|h| mem.contains(h));
    trace.push(format!(
        "normalization: Hilbert basis of {} elements ({})",
        hb.len(),
        if normal {
            "already normal"
        } else {
            "extends the monoid"
        }
    ));
    region_volume(lc.monoid.cone(), &lc.monoid.gens, trace)
}

/// Full reduction for an affine monoid: torsion part, then normalization and volume.
pub fn ehk_pipeline_affine(m: &AffineMonoid) -> Result<EhkResult> {
    let mut trace = Vec::new();
    let (f, t) = m.torsion_freefication()?;
    trace.push(format!(
        "torsion subgroup of order {t}; free part has {} generators",
        f.gens.len()
    ));
    let v = ehk_torsion_free(&f, &mut trace)?;
    trace.push(format!("contribution {t} * {v}"));
    Ok(EhkResult {
        value: v * Q::from_integer(BigInt::from(t)),
        method: Method::Pipeline,
        dim: m.d,
        trace,
    })
}

/// Largest scan bound `b <= 8` whose box `(b+1)^r` stays small.
fn nilpotence_bound(r: usize) -> u32 {
    (2..=8u32)
        .rev()
        .find(|&b| (b as f64 + 1.0).powi(r as i32) <= 2e6)
        .unwrap_or(2)
}

/// Full reduction for a presented binoid: minimal primes of maximal rank,
/// cancellative image, torsion-freefication, normalization and volume.
pub fn ehk_pipeline_presentation(p: &Presentation) -> Result<EhkResult> {
    let mut trace = Vec::new();
    let r = p.rank();
    if r == 0 {
        return Ok(EhkResult {
            value: Q::one(),
            method: Method::Pipeline,
            dim: 0,
            trace: vec!["trivial binoid".into()],
        });
    }
    let bound = nilpotence_bound(r);
    let nil = boxq::bounded_nilpotence_scan(p, bound)?;
    if let Some(w) = nil.first() {
        return Err(Error::refused(
            "reduced (no nonzero nilpotent elements)",
            "the multiplicity is only known to exist for reduced binoids; \
             without reducedness only hkf(q) <= C q^d holds",
            format!("{} * {} = inf", w.multiple, p.format_vector(&w.element)),
        ));
    }
    trace.push(format!("no nilpotent element found up to multiple {bound}"));
    let spec = spectrum::spectrum(p)?;
    let minimal = spec.minimal_primes();
    let ranks: Vec<usize> = minimal
        .iter()
        .map(|&q| spectrum::prime_rank(p, q))
        .collect();
    let d = ranks.iter().copied().max().unwrap_or(0);
    trace.push(format!(
        "{} minimal primes, maximal rank {d}",
        minimal.len()
    ));
    let mut total = Q::zero();
    for (&prime, &rk) in minimal.iter().zip(&ranks) {
        if rk < d {
            trace.push(format!(
                "prime {:?}: rank {rk} < {d}, skipped",
                prime.names(p)
            ));
            continue;
        }
        let qp = quotient_by_prime(p, prime);
        if qp.rank() == 0 {
            trace.push(format!(
                "prime {:?}: trivial quotient, contributes 1",
                prime.names(p)
            ));
            total += Q::one();
            continue;
        }
        let emb = presentation_to_affine(&qp)?;
        if let Cancellativity::Witness(a, b) = &emb.cancellativity {
            return Err(Error::refused(
                "cancellative",
                "the volume formula applies to cancellative binoids and their torsion-free parts",
                format!(
                    "{} and {} differ but have the same image in the difference group of N/{:?}",
                    qp.format_vector(a),
                    qp.format_vector(b),
                    prime.names(p)
                ),
            ));
        }
        let (f, t) = emb.monoid.torsion_freefication()?;
        let checked = match emb.cancellativity {
            Cancellativity::VerifiedUpTo(b) => b,
            Cancellativity::Witness(..) => unreachable!("refused above"),
        };
        trace.push(format!(
            "prime {:?}: embedding injective outside [{checked}]N+, rank {}, torsion order {t}",
            prime.names(p),
            emb.monoid.d
        ));
        let v = ehk_torsion_free(&f, &mut trace)?;
        trace.push(format!("contribution {t} * {v}"));
        total += v * Q::from_integer(BigInt::from(t));
    }
    Ok(EhkResult {
        value: total,
        method: Method::Pipeline,
        dim: d,
        trace,
    })
}

#[derive(Debug, Clone)]
pub struct Fit {
    pub leading: f64,
    pub second: f64,
    /// Continued-fraction approximation of `leading` with small denominator.
    pub guess: Q,
    /// Largest relative residual over the fitted points.
    pub residual: f64,
}

/// Least squares `count ~ c q^d + c' q^(d-1)`.
pub fn fit_leading_coefficient(s: &HkSeries, d: usize) -> Result<Fit> {
    let max_q = s.qs.iter().copied().max().unwrap_or(0) as usize;
    if s.qs.len() < 4 || max_q < 8 * d.max(1) {
        return Err(Error::invalid(format!(
            "fit needs at least 4 values and max q >= {}",
            8 * d.max(1)
        )));
    }
    let pts: Vec<(f64, f64)> = s.iter().map(|(q, c)| (q as f64, c as f64)).collect();
    let (c, c2) = if d == 0 {
        (pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64, 0.0)
    } else {
        // Normal equations for the basis q^d, q^(d-1), scaled by q^-d.
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(q, y) in &pts {
            let u = 1.0;
            let v = 1.0 / q;
            let t = y / q.powi(d as i32);
            a11 += u * u;
            a12 += u * v;
            a22 += v * v;
            b1 += u * t;
            b2 += v * t;
        }
        let det = a11 * a22 - a12 * a12;
        ((b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det)
    };
    let residual = pts
        .iter()
        .map(|&(q, y)| {
            let pred = c * q.powi(d as i32) + c2 * q.powi(d as i32 - 1);
            if y == 0.0 {
                pred.abs()
            } else {
                ((pred - y) / y).abs()
            }
        })
        .fold(0.0, f64::max);
    Ok(Fit {
        leading: c,
        second: c2,
        guess: rational_guess(c, 1000),
        residual,
    })
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rational_guess(x: f64, max_den: i64) -> Q {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let ai = a as i64;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-9 {
            break;
        }
        y = 1.0 / frac;
    }
    if k1 == 0 {
        return Q::from_integer(BigInt::from(x.round() as i64));
    }
    Q::new(BigInt::from(h1), BigInt::from(k1))
}

/// `e_HK` estimated from counts alone, rounded to a nearby small fraction.
pub fn ehk_fit(s: &HkSeries, d: usize) -> Result<EhkResult> {
    let fit = fit_leading_coefficient(s, d)?;
    Ok(EhkResult {
        value: fit.guess.clone(),
        method: Method::Fit,
        dim: d,
        trace: vec![format!(
            "least squares leading coefficient {:.6}, max relative residual {:.2e}",
            fit.leading, fit.residual
        )],
    })
}

/// Render a rational as `p/q` (or `p`).
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `|hkf(q)/q^d - e|` as a float.
pub fn deviation(count: u64, q: u32, d: usize, e: &Q) -> f64 {
    let qd = BigInt::from(q).pow(d as u32);
    let x = Q::new(BigInt::from(count), qd) - e;
    let (n, den) = (x.numer().abs(), x.denom().clone());
    let g = n.gcd(&den);
    (n / &g).to_f64().unwrap_or(f64::INFINITY) / (den / g).to_f64().unwrap_or(f64::INFINITY)
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

    fn rat(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn box_engine_values() {
        let p = parse_presentation("gens: x y;").unwrap();
        assert_eq!(hkf(&p, &IdealSpec::maximal(2), 5).unwrap(), 25);
        let p = parse_presentation("gens: x y z; rel: 5x = 2y + 3z;").unwrap();
        assert_eq!(hkf(&p, &IdealSpec::maximal(3), 12).unwrap(), 540);
        let p = parse_presentation("gens: x y z; rel: 2x = 3y + 5z;").unwrap();
        assert_eq!(hkf(&p, &IdealSpec::maximal(3), 9).unwrap(), 162);
    }

    #[test]
    fn lattice_engine_values() {
        let ns = m(1, &[&[2], &[3]]);
        assert_eq!(hkf_affine(&ns, &ns.gens, 5).unwrap(), 10);
        let n2 = m(2, &[&[2, 0], &[0, 2], &[1, 1]]);
        assert_eq!(hkf_affine(&n2, &n2.gens, 10).unwrap(), 150);
        let free = m(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(hkf_affine(&free, &free.gens, 4).unwrap(), 64);
    }

    #[test]
    fn lattice_engine_with_torsion() {
        let t = AffineMonoid::new(
            "t",
            1,
            vec![3],
            vec![(vec![1], vec![0]), (vec![1], vec![1])],
        )
        .unwrap();
        let p = parse_presentation("gens: x y; rel: 3x = 3y;").unwrap();
        for q in 1..8 {
            assert_eq!(
                hkf_affine(&t, &t.gens, q).unwrap(),
                hkf(&p, &IdealSpec::maximal(2), q).unwrap(),
                "q={q}"
            );
        }
    }

    #[test]
    fn non_primary_is_rejected() {
        let n2 = m(2, &[&[1, 0], &[0, 1]]);
        assert!(matches!(
            ehk_normal_volume(&n2, &[vec![1, 1]]),
            Err(Error::NotPrimary(_))
        ));
        assert!(hkf_affine(&n2, &[vec![1, 1]], 3).is_err());
    }

    #[test]
    fn volumes() {
        let n2 = m(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(ehk_normal_volume(&n2, &n2.gens).unwrap().value, Q::one());
        let e = ehk_normal_volume(&n2, &[vec![3, 0], vec![2, 1], vec![0, 3]]).unwrap();
        // Staircase: 3*3 minus the quadrant above (2,1).
        assert_eq!(e.value, rat(9 - 2, 1));
        let n1 = m(1, &[&[1]]);
        assert_eq!(
            ehk_normal_volume(&n1, &[vec![4], vec![6]]).unwrap().value,
            rat(4, 1)
        );
    }

    #[test]
    fn pipeline_examples() {
        let p = parse_presentation("gens: X Y Z; rel: 4X + 12Y = 16Z;").unwrap();
        assert_eq!(ehk_pipeline_presentation(&p).unwrap().value, rat(13, 1));
        let p = parse_presentation("gens: X Y Z; rel: X + 3Y = 4Z;").unwrap();
        assert_eq!(ehk_pipeline_presentation(&p).unwrap().value, rat(13, 4));
        let p = parse_presentation("gens: x y; rel: 3x = 3y;").unwrap();
        assert_eq!(ehk_pipeline_presentation(&p).unwrap().value, rat(3, 1));
        let t = AffineMonoid::new(
            "t",
            1,
            vec![2],
            vec![(vec![2], vec![1]), (vec![3], vec![0])],
        )
        .unwrap();
        assert_eq!(ehk_pipeline_affine(&t).unwrap().value, rat(4, 1));
    }

    #[test]
    fn nilpotent_input_is_refused() {
        let p = parse_presentation("gens: x y; rel: 2x = inf;").unwrap();
        assert!(matches!(
            ehk_pipeline_presentation(&p),
            Err(Error::Refused { .. })
        ));
    }

    #[test]
    fn fit_recovers_square() {
        let s = HkSeries {
            qs: vec![10, 20, 30, 40],
            counts: vec![100, 400, 900, 1600],
        };
        let f = fit_leading_coefficient(&s, 2).unwrap();
        assert!((f.leading - 1.0).abs() < 1e-9);
        assert!(f.residual < 1e-9);
        assert_eq!(f.guess, Q::one());
        assert!(fit_leading_coefficient(
            &HkSeries {
                qs: vec![1, 2],
                counts: vec![1, 4]
            },
            2
        )
        .is_err());
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(rational_guess(3.25, 100), rat(13, 4));
        assert_eq!(rational_guess(19.0 / 5.0, 100), rat(19, 5));
        assert_eq!(format_rational(&rat(13, 4)), "13/4");
        assert_eq!(format_rational(&rat(13, 1)), "13");
    }
}

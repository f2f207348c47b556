//! Exact dense linear algebra over `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_vec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Divide by the gcd of the entries; zero stays zero.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

/// Scale a rational vector to the primitive integer vector on the same ray.
pub fn primitive_of(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Q::from_integer(l.clone())).to_integer())
        .collect();
    primitive(&ints)
}

/// Row echelon form in place; returns the pivot columns.
fn echelon(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (top, bottom) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in bottom.iter_mut().zip(top.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).len()
}

pub fn rank_big(rows: &[Vec<BigInt>]) -> usize {
    let m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    rank_q(&m)
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<Q>> = rows.iter().map(|r| q_vec(r)).collect();
    rank_q(&m)
}

pub fn det_q(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            let (a, b) = m.split_at_mut(i);
            for (x, y) in b[0][c..].iter_mut().zip(&a[c][c..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

pub fn inverse_q(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let piv = echelon(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `a x = b` for square nonsingular `a`.
pub fn solve_q(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let inv = inverse_q(a)?;
    Some(inv.iter().map(|row| dot(row, b)).collect())
}

/// Rank of `{v - v0}` for a point set.
pub fn affine_rank(points: &[&Vec<Q>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let rows: Vec<Vec<Q>> = rest
                .iter()
                .map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect())
                .collect();
            rank_q(&rows)
        }
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = vec![q_vec(&[2, 1]), q_vec(&[1, 1])];
        assert_eq!(det_q(m.clone()), q(1));
        let inv = inverse_q(&m).unwrap();
        assert_eq!(inv, vec![q_vec(&[1, -1]), q_vec(&[-1, 2])]);
        assert!(inverse_q(&[q_vec(&[1, 2]), q_vec(&[2, 4])]).is_none());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 0]]), 2);
        assert_eq!(rank_i64(&[]), 0);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![Q::new(BigInt::from(1), BigInt::from(2)), q(3)];
        assert_eq!(primitive_of(&v), big_vec(&[1, 6]));
        assert_eq!(primitive(&big_vec(&[4, -6])), big_vec(&[2, -3]));
    }
}

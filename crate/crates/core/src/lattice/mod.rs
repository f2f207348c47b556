//! Integer lattices: Smith normal form, kernels and quotients `Z^n / L`.

pub mod linalg;
pub mod snf;

use crate::error::{Error, Result};
use linalg::{inverse_q, Q};
use num_traits::ToPrimitive;

/// `Z^n / L` written as `Z^rank x Z/k_1 x ... x Z/k_s`.
#[derive(Debug, Clone)]
pub struct LatticeQuotient {
    pub rank: usize,
    pub torsion: Vec<i64>,
    /// `x -> x * v`; the first `offset` coordinates are dropped (trivial factors),
    /// torsion coordinates follow, then free ones.
    v: Vec<Vec<i128>>,
    torsion_cols: Vec<usize>,
    free_cols: Vec<usize>,
}

fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow("lattice coordinates"))
}

impl LatticeQuotient {
    /// Quotient of `Z^n` by the row span of `rows`.
    pub fn new(n: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let s = snf::smith(rows, n)?;
        let mut torsion = Vec::new();
        let mut torsion_cols = Vec::new();
        for (i, &d) in s.diag[..s.rank].iter().enumerate() {
            if d > 1 {
                torsion.push(to_i64(d)?);
                torsion_cols.push(i);
            }
        }
        let free_cols: Vec<usize> = (s.rank..n).collect();
        Ok(LatticeQuotient {
            rank: n - s.rank,
            torsion,
            v: s.v,
            torsion_cols,
            free_cols,
        })
    }

    /// Image of `x` as `(free, torsion)` with torsion entries in `[0, k)`.
    pub fn image(&self, x: &[i64]) -> Result<(Vec<i64>, Vec<i64>)> {
        let col = |j: usize| -> Result<i128> {
            x.iter().enumerate().try_fold(0i128, |acc, (i, &c)| {
                (c as i128)
                    .checked_mul(self.v[i][j])
                    .and_then(|t| acc.checked_add(t))
                    .ok_or(Error::Overflow("lattice image"))
            })
        };
        let free = self
            .free_cols
            .iter()
            .map(|&j| col(j).and_then(to_i64))
            .collect::<Result<Vec<_>>>()?;
        let tors = self
            .torsion_cols
            .iter()
            .zip(&self.torsion)
            .map(|(&j, &k)| to_i64(col(j)?.rem_euclid(k as i128)))
            .collect::<Result<Vec<_>>>()?;
        Ok((free, tors))
    }

    pub fn unit_image(&self, j: usize, n: usize) -> Result<(Vec<i64>, Vec<i64>)> {
        let mut e = vec![0; n];
        e[j] = 1;
        self.image(&e)
    }

    /// A preimage in `Z^n` of each free unit vector of the quotient.
    pub fn free_unit_preimages(&self) -> Result<Vec<Vec<i64>>> {
        let vq: Vec<Vec<Q>> = self
            .v
            .iter()
            .map(|r| r.iter().map(|&x| linalg::q(x as i64)).collect())
            .collect();
        let inv = inverse_q(&vq).ok_or_else(|| Error::invalid("singular transform"))?;
        self.free_cols
            .iter()
            .map(|&k| {
                inv[k]
                    .iter()
                    .map(|x| {
                        x.to_integer()
                            .to_i64()
                            .ok_or(Error::Overflow("lattice preimage"))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Basis of `{c in Z^m : sum_i c_i rows_i = 0}`.
pub fn left_kernel(rows: &[Vec<i64>], cols: usize) -> Result<Vec<Vec<i64>>> {
    let s = snf::smith(rows, cols)?;
    s.left_kernel()
        .into_iter()
        .map(|r| r.into_iter().map(to_i64).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_of_relation() {
        // a x = a y with a = 3: Z x Z/3.
        let lq = LatticeQuotient::new(2, &[vec![3, -3]]).unwrap();
        assert_eq!(lq.rank, 1);
        assert_eq!(lq.torsion, vec![3]);
        let (fx, tx) = lq.unit_image(0, 2).unwrap();
        let (fy, ty) = lq.unit_image(1, 2).unwrap();
        assert_eq!(fx.iter().map(|v| v.abs()).collect::<Vec<_>>(), vec![1]);
        assert_eq!(fx, fy);
        assert_ne!(tx, ty);
        // 3x and 3y agree in the quotient.
        assert_eq!(lq.image(&[3, 0]).unwrap(), lq.image(&[0, 3]).unwrap());
    }

    #[test]
    fn preimages_map_to_units() {
        let lq = LatticeQuotient::new(3, &[vec![1, 3, -4]]).unwrap();
        assert_eq!(lq.rank, 2);
        for (k, pre) in lq.free_unit_preimages().unwrap().iter().enumerate() {
            let (f, _) = lq.image(pre).unwrap();
            let mut e = vec![0; 2];
            e[k] = 1;
            assert_eq!(f, e);
        }
    }

    #[test]
    fn kernel() {
        let k = left_kernel(&[vec![2], vec![3]], 1).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(2 * k[0][0] + 3 * k[0][1], 0);
    }
}

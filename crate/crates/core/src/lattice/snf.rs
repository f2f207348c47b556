//! Smith normal form over `Z` with checked `i128` arithmetic.

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<i128>>;

/// `u * a * v = diag(d)` with `u`, `v` unimodular and `d[i] | d[i+1]`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: Mat,
    pub v: Mat,
    /// Diagonal entries, `min(rows, cols)` of them, nonnegative.
    pub diag: Vec<i128>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
}

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("Smith normal form"))
}

/// `row[dst] -= f * row[src]`
fn row_axpy(m: &mut Mat, dst: usize, src: usize, f: i128) -> Result<()> {
    if f == 0 {
        return Ok(());
    }
    for j in 0..m[dst].len() {
        let t = ck(m[src][j].checked_mul(f))?;
        m[dst][j] = ck(m[dst][j].checked_sub(t))?;
    }
    Ok(())
}

fn col_axpy(m: &mut Mat, dst: usize, src: usize, f: i128) -> Result<()> {
    if f == 0 {
        return Ok(());
    }
    for row in m.iter_mut() {
        let t = ck(row[src].checked_mul(f))?;
        row[dst] = ck(row[dst].checked_sub(t))?;
    }
    Ok(())
}

fn col_swap(m: &mut Mat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith(a: &[Vec<i64>], cols: usize) -> Result<Smith> {
    let rows = a.len();
    let mut m: Mat = a
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut m, t, pj);
        col_swap(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let f = m[i][t].div_euclid(m[t][t]);
                    row_axpy(&mut m, i, t, f)?;
                    row_axpy(&mut u, i, t, f)?;
                    if m[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let f = m[t][j].div_euclid(m[t][t]);
                    col_axpy(&mut m, j, t, f)?;
                    col_axpy(&mut v, j, t, f)?;
                    if m[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // Move the smallest remainder in row/column t into the pivot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    m.swap(t, best.0);
                    u.swap(t, best.0);
                } else if best.1 != t {
                    col_swap(&mut m, t, best.1);
                    col_swap(&mut v, t, best.1);
                }
                continue;
            }
            // Divisibility: fold in a row whose entry the pivot does not divide.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % m[t][t] != 0));
            match bad {
                Some(i) => {
                    row_axpy(&mut m, t, i, -1)?;
                    row_axpy(&mut u, t, i, -1)?;
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diag: Vec<i128> = (0..rows.min(cols)).map(|i| m[i][i]).collect();
    let rank = diag.iter().filter(|&&x| x != 0).count();
    let s = Smith {
        u,
        v,
        diag,
        rank,
        rows,
        cols,
    };
    debug_assert!(s.check(a).is_ok(), "Smith form postcondition failed");
    Ok(s)
}

fn mul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Result<Mat> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).try_fold(0i128, |acc, k| {
                        ck(acc.checked_add(ck(row[k].checked_mul(b[k][j]))?))
                    })
                })
                .collect()
        })
        .collect()
}

/// Determinant of a small square integer matrix by cofactor-free elimination.
fn det(m: &Mat) -> Result<i128> {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Ok(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = ck(a[i][j].checked_mul(a[k][k]))?;
                let y = ck(a[i][k].checked_mul(a[k][j]))?;
                a[i][j] = ck(x.checked_sub(y))? / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * if n == 0 { 1 } else { a[n - 1][n - 1] })
}

impl Smith {
    /// Verify `u a v = d`, unimodularity and the divisibility chain.
    pub fn check(&self, a: &[Vec<i64>]) -> Result<()> {
        let am: Mat = a
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let ua = mul(&self.u, &am, self.rows, self.cols)?;
        let uav = mul(&ua, &self.v, self.cols, self.cols)?;
        for (i, row) in uav.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { self.diag[i] } else { 0 };
                if x != want {
                    return Err(Error::invalid(format!("U A V differs from D at ({i},{j})")));
                }
            }
        }
        if det(&self.u)?.abs() != 1 || det(&self.v)?.abs() != 1 {
            return Err(Error::invalid("transform is not unimodular"));
        }
        for w in self.diag.windows(2) {
            if w[0] < 0 || (w[0] == 0 && w[1] != 0) || (w[0] != 0 && w[1] % w[0] != 0) {
                return Err(Error::invalid(format!(
                    "divisibility chain broken: {:?}",
                    self.diag
                )));
            }
        }
        Ok(())
    }

    /// Basis of `{c : c a = 0}`: the last rows of `u`.
    pub fn left_kernel(&self) -> Vec<Vec<i128>> {
        self.u[self.rank..].to_vec()
    }

    /// Nontrivial invariant factors (`> 1`).
    pub fn torsion(&self) -> Vec<i128> {
        self.diag[..self.rank]
            .iter()
            .copied()
            .filter(|&x| x > 1)
            .collect()
    }
}

pub fn rank(rows: &[Vec<i64>], cols: usize) -> usize {
    match smith(rows, cols) {
        Ok(s) => s.rank,
        Err(_) => crate::lattice::linalg::rank_i64(rows),
    }
}

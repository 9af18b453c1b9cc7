//! Small dense linear algebra over truncated series and over ℚ(i).

use num_traits::Zero;
use rustc_hash::FxHashMap;

use super::{GaussianRational, TruncatedSeries};
use crate::error::{Error, Result};

/// Determinants of sub-matrices selected by row and column bit masks,
/// computed by Laplace expansion along the first selected row and memoized
/// so that all cofactors of one matrix share their sub-minors.
pub struct MinorCache<'a> {
    m: &'a [Vec<TruncatedSeries>],
    memo: FxHashMap<(u32, u32), TruncatedSeries>,
}

impl<'a> MinorCache<'a> {
    pub fn new(m: &'a [Vec<TruncatedSeries>]) -> Self {
        assert!(
            m.len() < 32 && m.iter().all(|r| r.len() == m.len()),
            "square matrix expected"
        );
        Self {
            m,
            memo: FxHashMap::default(),
        }
    }

    fn full(&self) -> u32 {
        (1u32 << self.m.len()) - 1
    }

    pub fn det(&mut self) -> TruncatedSeries {
        let f = self.full();
        self.minor(f, f)
    }

    /// Determinant of the rows in `rows` and columns in `cols` (equal popcount).
    pub fn minor(&mut self, rows: u32, cols: u32) -> TruncatedSeries {
        debug_assert_eq!(rows.count_ones(), cols.count_ones());
        let sample = &self.m[0][0];
        if rows == 0 {
            return TruncatedSeries::one(sample.vars(), min_order(self.m));
        }
        if let Some(d) = self.memo.get(&(rows, cols)) {
            return d.clone();
        }
        let r = rows.trailing_zeros() as usize;
        let rest = rows & !(1 << r);
        let mut acc = TruncatedSeries::zero(sample.vars(), min_order(self.m));
        let mut sign_neg = false;
        for c in 0..self.m.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            let entry = &self.m[r][c];
            if !entry.is_zero() {
                let sub = self.minor(rest, cols & !(1 << c));
                let t = entry * &sub;
                acc = if sign_neg { &acc - &t } else { &acc + &t };
            }
            sign_neg = !sign_neg;
        }
        self.memo.insert((rows, cols), acc.clone());
        acc
    }

    /// Signed cofactor `(−1)^{r+c}` times the minor deleting row `r`, column `c`.
    pub fn cofactor(&mut self, r: usize, c: usize) -> TruncatedSeries {
        let f = self.full();
        let d = self.minor(f & !(1 << r), f & !(1 << c));
        if (r + c) % 2 == 1 {
            d.neg()
        } else {
            d
        }
    }
}

fn min_order(m: &[Vec<TruncatedSeries>]) -> u32 {
    m.iter().flatten().map(|s| s.order()).min().unwrap_or(0)
}

pub fn determinant(m: &[Vec<TruncatedSeries>]) -> TruncatedSeries {
    MinorCache::new(m).det()
}

/// Solves `a·x = b` by Gaussian elimination, pivoting on entries with a
/// nonzero constant term. Fails with `SingularJacobian` when `a(0)` is singular.
pub fn solve_linear(a: &[Vec<TruncatedSeries>], b: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
    let n = a.len();
    let mut m: Vec<Vec<TruncatedSeries>> = a.to_vec();
    let mut rhs: Vec<TruncatedSeries> = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].constant_term().is_zero())
            .ok_or(Error::SingularJacobian)?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].invert()?;
        for k in col..n {
            m[col][k] = &m[col][k] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for k in col..n {
                let t = &f * &m[col][k];
                m[r][k] = &m[r][k] - &t;
            }
            let t = &f * &rhs[col];
            rhs[r] = &rhs[r] - &t;
        }
    }
    Ok(rhs)
}

/// Solves a square system over ℚ(i); `None` when the matrix is singular.
pub fn solve_constant(a: &[Vec<GaussianRational>], b: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
    let n = a.len();
    let mut m: Vec<Vec<GaussianRational>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].inv().ok()?;
        for k in col..n {
            m[col][k] = &m[col][k] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for k in col..n {
                let t = &f * &m[col][k];
                m[r][k] = &m[r][k] - &t;
            }
            let t = &f * &rhs[col];
            rhs[r] = &rhs[r] - &t;
        }
    }
    Some(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Vars;

    fn consts(vals: &[&[i64]]) -> Vec<Vec<TruncatedSeries>> {
        let v = Vars::new(["x"]);
        vals.iter()
            .map(|r| r.iter().map(|&k| TruncatedSeries::constant(&v, k.into(), 3)).collect())
            .collect()
    }

    #[test]
    fn determinant_and_cofactors() {
        let m = consts(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        let mut cache = MinorCache::new(&m);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(cache.det().is_zero());
        assert_eq!(cache.cofactor(0, 0).constant_term(), 1.into());
        assert_eq!(cache.cofactor(0, 1).constant_term(), 1.into());
        assert_eq!(cache.cofactor(1, 2).constant_term(), (-2).into());
    }

    #[test]
    fn series_system() {
        let v = Vars::new(["x"]);
        let x = TruncatedSeries::var(&v, "x", 5).unwrap();
        let one = TruncatedSeries::one(&v, 5);
        // [[1, x], [x, 1]] · sol = [1, 0]
        let a = vec![vec![one.clone(), x.clone()], vec![x.clone(), one.clone()]];
        let sol = solve_linear(&a, &[one.clone(), TruncatedSeries::zero(&v, 5)]).unwrap();
        let check0 = &(&a[0][0] * &sol[0]) + &(&a[0][1] * &sol[1]);
        let check1 = &(&a[1][0] * &sol[0]) + &(&a[1][1] * &sol[1]);
        assert_eq!(check0, one);
        assert!(check1.is_zero());
        let singular = vec![vec![x.clone(), one.clone()], vec![x.clone(), one.clone()]];
        assert_eq!(
            solve_linear(&singular, &[one.clone(), one]),
            Err(Error::SingularJacobian)
        );
    }
}

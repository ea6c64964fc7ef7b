//! Dense linear algebra over GF(p).

use std::collections::BTreeMap;

use crate::scalars::{Gf, Prime};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    p: Prime,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, p: Prime) -> Self {
        Matrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    /// Builds a matrix from column vectors of equal length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Gf>], p: Prime) -> Self {
        let mut m = Matrix::zeros(rows, columns.len(), p);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.value();
            }
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gf {
        Gf::new(self.data[i * self.cols + j], self.p)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Gf) {
        self.data[i * self.cols + j] = v.value();
    }

    pub fn mul_vec(&self, x: &[Gf]) -> Vec<Gf> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = 0u64;
                for j in 0..self.cols {
                    s += self.data[i * self.cols + j] as u64 * x[j].value() as u64;
                }
                Gf::new((s % self.p.get() as u64) as u32, self.p)
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p.get() as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * self.cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().unwrap().value() as u64;
            for j in 0..self.cols {
                let v = &mut self.data[r * self.cols + j];
                *v = ((*v as u64 * inv) % p) as u32;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * self.cols + c] as u64;
                if f == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let sub = (f * self.data[r * self.cols + j] as u64) % p;
                    let v = &mut self.data[i * self.cols + j];
                    *v = ((*v as u64 + p - sub) % p) as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Some solution of `A x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[Gf]) -> Option<Vec<Gf>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * aug.cols + j] = self.data[i * self.cols + j];
            }
            aug.data[i * aug.cols + self.cols] = b[i].value();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.p.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// A basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Gf>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.p.zero(); self.cols];
            v[free] = self.p.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m.get(r, free);
            }
            basis.push(v);
        }
        basis
    }
}

/// A linear system assembled column by column from sparse vectors keyed by
/// arbitrary ordered labels.
pub struct SparseSystem<K: Ord + Clone> {
    p: Prime,
    columns: Vec<BTreeMap<K, Gf>>,
}

impl<K: Ord + Clone> SparseSystem<K> {
    pub fn new(p: Prime) -> Self {
        SparseSystem { p, columns: Vec::new() }
    }

    pub fn push_column(&mut self, col: BTreeMap<K, Gf>) -> usize {
        self.columns.push(col);
        self.columns.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    fn matrix(&self, extra: &[&BTreeMap<K, Gf>]) -> (Matrix, Vec<K>) {
        let mut keys: Vec<K> = Vec::new();
        {
            let mut set = std::collections::BTreeSet::new();
            for c in self.columns.iter().chain(extra.iter().copied()) {
                for (k, v) in c {
                    if !v.is_zero() {
                        set.insert(k.clone());
                    }
                }
            }
            keys.extend(set);
        }
        let index: BTreeMap<&K, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut m = Matrix::zeros(keys.len(), self.columns.len(), self.p);
        for (j, c) in self.columns.iter().enumerate() {
            for (k, v) in c {
                if !v.is_zero() {
                    m.set(index[k], j, *v);
                }
            }
        }
        (m, keys)
    }

    /// Coefficients `x` with `Σ x_j col_j = rhs`, or `None`.
    pub fn solve(&self, rhs: &BTreeMap<K, Gf>) -> Option<Vec<Gf>> {
        let (m, keys) = self.matrix(&[rhs]);
        let b: Vec<Gf> = keys.iter().map(|k| rhs.get(k).copied().unwrap_or(self.p.zero())).collect();
        m.solve(&b)
    }

    /// A basis of the relations among the columns.
    pub fn nullspace(&self) -> Vec<Vec<Gf>> {
        let (m, _) = self.matrix(&[]);
        m.nullspace()
    }

    pub fn rank(&self) -> usize {
        self.matrix(&[]).0.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_nullspace() {
        let p = Prime::new(5).unwrap();
        let e = |v| p.elem(v);
        // columns (1,2), (2,4), (0,1)
        let m = Matrix::from_columns(2, &[vec![e(1), e(2)], vec![e(2), e(4)], vec![e(0), e(1)]], p);
        assert_eq!(m.rank(), 2);
        let b = vec![e(3), e(1)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn inconsistent_system() {
        let p = Prime::new(3).unwrap();
        let m = Matrix::from_columns(2, &[vec![p.one(), p.one()]], p);
        assert!(m.solve(&[p.one(), p.zero()]).is_none());
    }
}

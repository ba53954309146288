use std::collections::BTreeMap;

use crate::qscalar::Scalar;
use crate::{QError, Result};

/// Sparse vector over the scalar field; absent keys are zero.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn sv_add_scaled(target: &mut SparseVec, coeff: &Scalar, source: &SparseVec) {
    if coeff.is_zero() {
        return;
    }
    for (j, v) in source {
        let entry = target.entry(*j).or_insert_with(Scalar::zero);
        *entry = &*entry + &(coeff * v);
        if entry.is_zero() {
            target.remove(j);
        }
    }
}

pub fn sv_scale(target: &mut SparseVec, coeff: &Scalar) {
    if coeff.is_zero() {
        target.clear();
        return;
    }
    for v in target.values_mut() {
        *v = &*v * coeff;
    }
}

/// Exact matrix over ℚ(s), stored as sparse rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl Mat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat { nrows, ncols, rows: vec![SparseVec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.rows[i].insert(i, Scalar::one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn get_ref(&self, i: usize, j: usize) -> Option<&Scalar> {
        self.rows[i].get(&j)
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i].get(&j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.nrows && j < self.ncols, "index out of range");
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let entry = self.rows[i].entry(j).or_insert_with(Scalar::zero);
        *entry = &*entry + v;
        if entry.is_zero() {
            self.rows[i].remove(&j);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols), "shape mismatch");
        let mut out = self.clone();
        for (i, j, v) in rhs.entries() {
            out.add_at(i, j, v);
        }
        out
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Mat {
        self.map(|v| -v)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat {
        let mut out = Mat::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.entries() {
            out.set(i, j, f(v));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        self.map(|v| v * c)
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.ncols, rhs.nrows, "shape mismatch in matmul");
        let mut out = Mat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            let mut acc = SparseVec::new();
            for (k, a) in &self.rows[i] {
                sv_add_scaled(&mut acc, a, &rhs.rows[*k]);
            }
            out.rows[i] = acc;
        }
        out
    }

    pub fn matvec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (j, a) in row {
                if let Some(x) = v.get(j) {
                    acc = &acc + &(a * x);
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.ncols, self.nrows);
        for (i, j, v) in self.entries() {
            out.set(j, i, v.clone());
        }
        out
    }

    pub fn kron(&self, rhs: &Mat) -> Mat {
        let mut out = Mat::zeros(self.nrows * rhs.nrows, self.ncols * rhs.ncols);
        for (i1, j1, v1) in self.entries() {
            for (i2, j2, v2) in rhs.entries() {
                out.set(i1 * rhs.nrows + i2, j1 * rhs.ncols + j2, v1 * v2);
            }
        }
        out
    }

    /// Exact inverse by Gauss-Jordan elimination; pivots chosen for sparsity.
    pub fn invert(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(QError::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.nrows;
        let mut left = self.rows.clone();
        let mut right = Mat::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| left[r].contains_key(&col))
                .min_by_key(|&r| (left[r].len(), r))
                .ok_or(QError::SingularMatrix)?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            let inv = left[col][&col].inv().expect("pivot nonzero");
            sv_scale(&mut left[col], &inv);
            sv_scale(&mut right[col], &inv);
            let prow = left[col].clone();
            let qrow = right[col].clone();
            for r in 0..n {
                if r == col {
                    continue;
                }
                if let Some(c) = left[r].get(&col).cloned() {
                    let neg = -&c;
                    sv_add_scaled(&mut left[r], &neg, &prow);
                    sv_add_scaled(&mut right[r], &neg, &qrow);
                }
            }
        }
        Ok(Mat { nrows: n, ncols: n, rows: right })
    }
}

/// Reduced row echelon form; returns (rref, pivot columns).
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let mut rows: Vec<SparseVec> = m.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut echelon: Vec<SparseVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    // forward elimination against the growing echelon set
    for mut row in rows.drain(..) {
        loop {
            let Some((&lead, _)) = row.iter().next() else { break };
            match pivots.binary_search(&lead) {
                Ok(k) => {
                    let c = -&row[&lead];
                    let src = echelon[k].clone();
                    sv_add_scaled(&mut row, &c, &src);
                }
                Err(k) => {
                    let inv = row[&lead].inv().expect("leading entry nonzero");
                    sv_scale(&mut row, &inv);
                    echelon.insert(k, row);
                    pivots.insert(k, lead);
                    break;
                }
            }
        }
    }
    // back substitution
    for k in (0..echelon.len()).rev() {
        let src = echelon[k].clone();
        let lead = pivots[k];
        for r in 0..k {
            if let Some(c) = echelon[r].get(&lead).cloned() {
                let neg = -&c;
                sv_add_scaled(&mut echelon[r], &neg, &src);
            }
        }
    }
    let mut out = Mat::zeros(echelon.len(), m.ncols);
    out.rows = echelon;
    (out, pivots)
}

pub fn rank(m: &Mat) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel {v : M v = 0}, one vector per free column.
pub fn kernel_basis(m: &Mat) -> Vec<SparseVec> {
    let (r, pivots) = rref(m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..m.ncols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = SparseVec::new();
        v.insert(free, Scalar::one());
        for (k, &p) in pivots.iter().enumerate() {
            if let Some(c) = r.get_ref(k, free) {
                v.insert(p, -c);
            }
        }
        basis.push(v);
    }
    basis
}

/// Row-reduce a set of sparse vectors to an independent echelon basis
/// (leading coefficients 1, ordered by leading index).
pub fn echelon_reduce(vectors: Vec<SparseVec>) -> Vec<SparseVec> {
    let n = vectors.iter().flat_map(|v| v.keys().copied()).max().map_or(0, |m| m + 1);
    let mut m = Mat::zeros(vectors.len(), n);
    for (i, v) in vectors.into_iter().enumerate() {
        m.rows[i] = v;
    }
    let (r, _) = rref(&m);
    r.rows
}

/// Reduce `v` against echelon vectors (leading coeff 1, sorted by leading
/// index); returns the remainder.
pub fn reduce_against(mut v: SparseVec, echelon: &[SparseVec]) -> SparseVec {
    let leads: Vec<usize> = echelon.iter().map(|e| *e.keys().next().unwrap()).collect();
    loop {
        let mut acted = false;
        let keys: Vec<usize> = v.keys().copied().collect();
        for lead in keys {
            if let Ok(k) = leads.binary_search(&lead) {
                if let Some(c) = v.get(&lead).cloned() {
                    if !c.is_zero() {
                        let neg = -&c;
                        sv_add_scaled(&mut v, &neg, &echelon[k]);
                        acted = true;
                    }
                }
            }
        }
        if !acted {
            return v;
        }
    }
}

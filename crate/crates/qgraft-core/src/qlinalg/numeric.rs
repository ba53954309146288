use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::mat::Mat;
use crate::qscalar::Rat;
use crate::{QError, Result};

/// Rational sparse vector used by the numeric oracle.
pub type SparseVecQ = BTreeMap<usize, Rat>;

/// Numeric twin of [`Mat`]: the same operations over plain rationals, used
/// to re-check symbolic identities at sampled points through an independent
/// code path.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatQ {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVecQ>,
}

impl MatQ {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        MatQ { nrows, ncols, rows: vec![SparseVecQ::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatQ::zeros(n, n);
        for i in 0..n {
            m.rows[i].insert(i, Rat::one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.rows[i].get(&j).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn add(&self, rhs: &MatQ) -> MatQ {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        for (i, j, v) in rhs.entries() {
            let cur = out.get(i, j) + v;
            out.set(i, j, cur);
        }
        out
    }

    pub fn sub(&self, rhs: &MatQ) -> MatQ {
        self.add(&rhs.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> MatQ {
        let mut out = MatQ::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.entries() {
            out.set(i, j, v * c);
        }
        out
    }

    pub fn matmul(&self, rhs: &MatQ) -> MatQ {
        assert_eq!(self.ncols, rhs.nrows);
        let mut out = MatQ::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            let mut acc = SparseVecQ::new();
            for (k, a) in &self.rows[i] {
                for (j, b) in &rhs.rows[*k] {
                    let entry = acc.entry(*j).or_insert_with(Rat::zero);
                    *entry += a * b;
                    if entry.is_zero() {
                        acc.remove(j);
                    }
                }
            }
            out.rows[i] = acc;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn invert(&self) -> Result<MatQ> {
        if self.nrows != self.ncols {
            return Err(QError::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.nrows;
        let mut left = self.rows.clone();
        let mut right = MatQ::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| left[r].contains_key(&col))
                .min_by_key(|&r| (left[r].len(), r))
                .ok_or(QError::SingularMatrix)?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            let inv = left[col][&col].clone().recip();
            for row in [&mut left[col], &mut right[col]] {
                for v in row.values_mut() {
                    *v *= &inv;
                }
            }
            let prow = left[col].clone();
            let qrow = right[col].clone();
            for r in 0..n {
                if r == col {
                    continue;
                }
                if let Some(c) = left[r].get(&col).cloned() {
                    for (j, v) in &prow {
                        let entry = left[r].entry(*j).or_insert_with(Rat::zero);
                        *entry -= &c * v;
                        if entry.is_zero() {
                            left[r].remove(j);
                        }
                    }
                    for (j, v) in &qrow {
                        let entry = right[r].entry(*j).or_insert_with(Rat::zero);
                        *entry -= &c * v;
                        if entry.is_zero() {
                            right[r].remove(j);
                        }
                    }
                }
            }
        }
        Ok(MatQ { nrows: n, ncols: n, rows: right })
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<SparseVecQ> =
            self.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut echelon: Vec<SparseVecQ> = Vec::new();
        let mut leads: Vec<usize> = Vec::new();
        for mut row in rows.drain(..) {
            loop {
                let Some((&lead, _)) = row.iter().next() else { break };
                match leads.binary_search(&lead) {
                    Ok(k) => {
                        let c = row[&lead].clone();
                        let src = echelon[k].clone();
                        for (j, v) in &src {
                            let entry = row.entry(*j).or_insert_with(Rat::zero);
                            *entry -= &c * v;
                            if entry.is_zero() {
                                row.remove(j);
                            }
                        }
                    }
                    Err(k) => {
                        let inv = row[&lead].clone().recip();
                        for v in row.values_mut() {
                            *v *= &inv;
                        }
                        echelon.insert(k, row);
                        leads.insert(k, lead);
                        break;
                    }
                }
            }
        }
        echelon.len()
    }
}

impl Mat {
    /// Evaluate every entry at s = s0; errors at poles.
    pub fn eval_numeric(&self, s0: &Rat) -> Result<MatQ> {
        let mut out = MatQ::zeros(self.nrows(), self.ncols());
        for (i, j, v) in self.entries() {
            out.set(i, j, v.eval_numeric(s0)?);
        }
        Ok(out)
    }
}

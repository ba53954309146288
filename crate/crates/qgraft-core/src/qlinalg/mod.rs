//! Exact linear algebra on composite-indexed operators: permutations,
//! partial transposes and traces, leg embeddings, inverses, minimal
//! polynomials, and the interleaved Kronecker construction.

mod mat;
mod numeric;
mod poly;

pub use mat::{echelon_reduce, kernel_basis, rank, reduce_against, rref, sv_add_scaled, sv_scale, Mat, SparseVec};
pub use numeric::{MatQ, SparseVecQ};
pub use poly::{minimal_polynomial, ScalarPoly};

use serde_json::{json, Value};

use crate::qscalar::{parse_scalar, Scalar};
use crate::{QError, Result};

/// Ordered factor dimensions of one tensor leg V = V_1⊗…⊗V_k, with the
/// fixed row-major mixed-radix bijection between composite and flat indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexShape {
    dims: Vec<usize>,
}

impl IndexShape {
    pub fn new(dims: Vec<usize>) -> Self {
        assert!(!dims.is_empty() && dims.iter().all(|&m| m >= 1), "factor dims must be ≥ 1");
        IndexShape { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut flat = 0;
        for (i, m) in idx.iter().zip(&self.dims) {
            debug_assert!(i < m);
            flat = flat * m + i;
        }
        flat
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (slot, m) in self.dims.iter().enumerate().rev() {
            idx[slot] = flat % m;
            flat /= m;
        }
        idx
    }

    pub fn concat(&self, other: &IndexShape) -> IndexShape {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        IndexShape::new(dims)
    }

    /// All composite indices in flat order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.total()).map(|f| self.unflatten(f))
    }
}

/// Square operator on V⊗V for a composite leg V, entries in ℚ(s).
///
/// Addressing follows the superscript-row/subscript-column convention:
/// `entry(ī, j̄, k̄, l̄)` is M^{ī j̄}_{k̄ l̄}, the coefficient at row (ī, j̄)
/// and column (k̄, l̄).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompositeMatrix {
    shape: IndexShape,
    mat: Mat,
}

impl CompositeMatrix {
    pub fn new(shape: IndexShape, mat: Mat) -> Self {
        let n = shape.total();
        assert_eq!((mat.nrows(), mat.ncols()), (n * n, n * n), "matrix must act on V⊗V");
        CompositeMatrix { shape, mat }
    }

    pub fn zeros(shape: IndexShape) -> Self {
        let n = shape.total();
        CompositeMatrix { mat: Mat::zeros(n * n, n * n), shape }
    }

    pub fn identity(shape: IndexShape) -> Self {
        let n = shape.total();
        CompositeMatrix { mat: Mat::identity(n * n), shape }
    }

    pub fn shape(&self) -> &IndexShape {
        &self.shape
    }

    /// Dimension of one leg V.
    pub fn leg_dim(&self) -> usize {
        self.shape.total()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    pub fn row_of(&self, i: usize, j: usize) -> usize {
        i * self.leg_dim() + j
    }

    pub fn get_flat(&self, i: usize, j: usize, k: usize, l: usize) -> Scalar {
        self.mat.get(self.row_of(i, j), self.row_of(k, l))
    }

    pub fn set_flat(&mut self, i: usize, j: usize, k: usize, l: usize, v: Scalar) {
        let (r, c) = (self.row_of(i, j), self.row_of(k, l));
        self.mat.set(r, c, v);
    }

    pub fn entry(&self, iv: &[usize], jv: &[usize], kv: &[usize], lv: &[usize]) -> Scalar {
        self.get_flat(
            self.shape.flatten(iv),
            self.shape.flatten(jv),
            self.shape.flatten(kv),
            self.shape.flatten(lv),
        )
    }

    pub fn matmul(&self, rhs: &CompositeMatrix) -> CompositeMatrix {
        assert_eq!(self.shape, rhs.shape);
        CompositeMatrix { shape: self.shape.clone(), mat: self.mat.matmul(&rhs.mat) }
    }

    pub fn add(&self, rhs: &CompositeMatrix) -> CompositeMatrix {
        CompositeMatrix { shape: self.shape.clone(), mat: self.mat.add(&rhs.mat) }
    }

    pub fn sub(&self, rhs: &CompositeMatrix) -> CompositeMatrix {
        CompositeMatrix { shape: self.shape.clone(), mat: self.mat.sub(&rhs.mat) }
    }

    pub fn scale(&self, c: &Scalar) -> CompositeMatrix {
        CompositeMatrix { shape: self.shape.clone(), mat: self.mat.scale(c) }
    }

    pub fn invert(&self) -> Result<CompositeMatrix> {
        Ok(CompositeMatrix { shape: self.shape.clone(), mat: self.mat.invert()? })
    }

    pub fn with_mat(&self, mat: Mat) -> CompositeMatrix {
        CompositeMatrix::new(self.shape.clone(), mat)
    }

    /// Matrix file format: {"dims": […], "entries": [[row, col, "scalar"], …]},
    /// zero entries omitted, rows in flat order.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .mat
            .entries()
            .map(|(i, j, v)| json!([i, j, v.to_string()]))
            .collect();
        json!({ "dims": self.shape.dims(), "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<CompositeMatrix> {
        let bad = |msg: &str| QError::InvalidSpec(format!("matrix json: {msg}"));
        let dims: Vec<usize> = v
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing dims"))?
            .iter()
            .map(|d| d.as_u64().map(|x| x as usize).ok_or_else(|| bad("bad dim")))
            .collect::<Result<_>>()?;
        let shape = IndexShape::new(dims);
        let n2 = shape.total() * shape.total();
        let mut mat = Mat::zeros(n2, n2);
        for e in v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing entries"))?
        {
            let t = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("bad entry"))?;
            let (r, c) = (
                t[0].as_u64().ok_or_else(|| bad("bad row"))? as usize,
                t[1].as_u64().ok_or_else(|| bad("bad col"))? as usize,
            );
            if r >= n2 || c >= n2 {
                return Err(bad("entry out of range"));
            }
            let s = parse_scalar(t[2].as_str().ok_or_else(|| bad("bad scalar"))?)?;
            mat.set(r, c, s);
        }
        Ok(CompositeMatrix { shape, mat })
    }
}

/// Permutation operator P^{ī j̄}_{k̄ l̄} = δ_{ī l̄} δ_{j̄ k̄}.
pub fn permutation_p(shape: &IndexShape) -> CompositeMatrix {
    let n = shape.total();
    let mut out = CompositeMatrix::zeros(shape.clone());
    for i in 0..n {
        for j in 0..n {
            out.set_flat(i, j, j, i, Scalar::one());
        }
    }
    out
}

/// K_0 with (K_0)^{ī j̄}_{k̄ l̄} = δ_{ī j̄} δ_{k̄ l̄}.
pub fn k0(shape: &IndexShape) -> CompositeMatrix {
    let n = shape.total();
    let mut out = CompositeMatrix::zeros(shape.clone());
    for i in 0..n {
        for k in 0..n {
            out.set_flat(i, i, k, k, Scalar::one());
        }
    }
    out
}

/// Which tensor slot a partial transpose acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transpose {
    T1,
    T2,
}

/// (M^{t1})^{ī j̄}_{k̄ l̄} = M^{k̄ j̄}_{ī l̄};  (M^{t2})^{ī j̄}_{k̄ l̄} = M^{ī l̄}_{k̄ j̄}.
pub fn partial_transpose(m: &CompositeMatrix, which: Transpose) -> CompositeMatrix {
    let n = m.leg_dim();
    let mut out = CompositeMatrix::zeros(m.shape().clone());
    for (r, c, v) in m.mat().entries() {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        match which {
            Transpose::T1 => out.set_flat(k, j, i, l, v.clone()),
            Transpose::T2 => out.set_flat(i, l, k, j, v.clone()),
        }
    }
    out
}

/// (tr_2 M)^{ī}_{k̄} = Σ_{ā} M^{ī ā}_{k̄ ā}, an operator on one leg V.
pub fn partial_trace_2(m: &CompositeMatrix) -> Mat {
    let n = m.leg_dim();
    let mut out = Mat::zeros(n, n);
    for (r, c, v) in m.mat().entries() {
        let (i, a) = (r / n, r % n);
        let (k, b) = (c / n, c % n);
        if a == b {
            out.add_at(i, k, v);
        }
    }
    out
}

/// Leg slot for embedding an operator on V⊗V into V⊗V⊗V.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    S12,
    S13,
    S23,
}

/// Permutation of legs 2 and 3 of V⊗V⊗V.
fn perm_23(n: usize) -> Mat {
    let mut p = Mat::zeros(n * n * n, n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                p.set((a * n + b) * n + c, (a * n + c) * n + b, Scalar::one());
            }
        }
    }
    p
}

/// Standard leg embedding with identity on the untouched factor; slot 13 is
/// the slot-12 embedding conjugated by the (23) permutation.
pub fn embed_on_triple(m: &CompositeMatrix, slot: Slot) -> Mat {
    let n = m.leg_dim();
    let cube = n * n * n;
    match slot {
        Slot::S12 => {
            let mut out = Mat::zeros(cube, cube);
            for (r, c, v) in m.mat().entries() {
                for f in 0..n {
                    out.set(r * n + f, c * n + f, v.clone());
                }
            }
            out
        }
        Slot::S23 => {
            let mut out = Mat::zeros(cube, cube);
            for (r, c, v) in m.mat().entries() {
                for f in 0..n {
                    out.set(f * n * n + r, f * n * n + c, v.clone());
                }
            }
            out
        }
        Slot::S13 => {
            let p = perm_23(n);
            p.matmul(&embed_on_triple(m, Slot::S12)).matmul(&p)
        }
    }
}

/// Builds the tensor R-matrix the direct way: Kronecker product of the
/// factors conjugated by the interleaving permutation, so factor t acts on
/// legs (t, k+t) of (V_1⊗…⊗V_k)^{⊗2}. Independent oracle for the entrywise
/// product construction.
pub fn interleave_construct(factors: &[CompositeMatrix]) -> Result<CompositeMatrix> {
    if factors.is_empty() {
        return Err(QError::InvalidSpec("interleave_construct needs ≥ 1 factor".into()));
    }
    // Kronecker product over factor order: acts on (V_1⊗V_1)⊗(V_2⊗V_2)⊗…
    let mut kron = factors[0].mat().clone();
    for f in &factors[1..] {
        kron = kron.kron(f.mat());
    }
    // interleaving permutation X: source legs (i_1, j_1, i_2, j_2, …) to
    // target legs (i_1, …, i_k, j_1, …, j_k)
    let k = factors.len();
    let mut source_dims = Vec::with_capacity(2 * k);
    for f in factors {
        let d = f.leg_dim();
        source_dims.push(d);
        source_dims.push(d);
    }
    let source = IndexShape::new(source_dims);
    let mut target_dims = Vec::with_capacity(2 * k);
    for f in factors {
        target_dims.push(f.leg_dim());
    }
    target_dims.extend_from_slice(&target_dims.clone());
    let target = IndexShape::new(target_dims);
    let total = source.total();
    let mut x = Mat::zeros(total, total);
    for (flat_src, tuple) in source.indices().enumerate() {
        let mut t = vec![0usize; 2 * k];
        for p in 0..k {
            t[p] = tuple[2 * p];
            t[k + p] = tuple[2 * p + 1];
        }
        x.set(target.flatten(&t), flat_src, Scalar::one());
    }
    let mat = x.matmul(&kron).matmul(&x.transpose());
    let mut leg_dims = Vec::new();
    for f in factors {
        leg_dims.extend_from_slice(f.shape().dims());
    }
    Ok(CompositeMatrix::new(IndexShape::new(leg_dims), mat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{parse_scalar, rat};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sc(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    fn random_mat(rng: &mut StdRng, n: usize, fill: f64) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(fill) {
                    let e = rng.gen_range(-2i64..3);
                    let c = rat(rng.gen_range(-4i64..5), 1);
                    m.set(i, j, Scalar::new(
                        crate::qscalar::LaurentPoly::monomial(e, c),
                        crate::qscalar::LaurentPoly::one(),
                    ).unwrap());
                }
            }
        }
        m
    }

    fn random_composite(rng: &mut StdRng, shape: IndexShape) -> CompositeMatrix {
        let n = shape.total();
        CompositeMatrix::new(shape, random_mat(rng, n * n, 0.4))
    }

    #[test]
    fn flatten_round_trip() {
        let shape = IndexShape::new(vec![3, 2, 4]);
        for f in 0..shape.total() {
            assert_eq!(shape.flatten(&shape.unflatten(f)), f);
        }
        assert_eq!(shape.flatten(&[0, 0, 0]), 0);
        assert_eq!(shape.flatten(&[2, 1, 3]), 23);
    }

    #[test]
    fn permutation_properties() {
        let shape = IndexShape::new(vec![2]);
        let p = permutation_p(&shape);
        // swaps basis (0,1) and (1,0)
        assert!(p.get_flat(0, 1, 1, 0).is_one());
        assert!(p.get_flat(1, 0, 0, 1).is_one());
        assert!(p.get_flat(0, 1, 0, 1).is_zero());
        let one = IndexShape::new(vec![1]);
        assert_eq!(permutation_p(&one).mat(), CompositeMatrix::identity(one).mat());
        let big = IndexShape::new(vec![3, 2]);
        let pb = permutation_p(&big);
        assert_eq!(pb.matmul(&pb).mat(), &Mat::identity(36));
    }

    #[test]
    fn k0_shape_and_trace() {
        let shape = IndexShape::new(vec![2]);
        let k = k0(&shape);
        for (i, j, k_, l) in [(0, 0, 0, 0), (0, 0, 1, 1), (1, 1, 0, 0), (1, 1, 1, 1)] {
            assert!(k.get_flat(i, j, k_, l).is_one());
        }
        assert_eq!(k.mat().nnz(), 4);
        for n in [1usize, 2, 3] {
            let sh = IndexShape::new(vec![n]);
            let tr: Scalar = (0..n * n).fold(Scalar::zero(), |acc, d| {
                &acc + &k0(&sh).mat().get(d, d)
            });
            assert_eq!(tr, Scalar::int(n as i64));
        }
    }

    #[test]
    fn partial_transpose_involutive_and_composite() {
        let mut rng = StdRng::seed_from_u64(5);
        let shape = IndexShape::new(vec![3]);
        let m = random_composite(&mut rng, shape);
        let t1 = partial_transpose(&m, Transpose::T1);
        let t2 = partial_transpose(&m, Transpose::T2);
        assert_eq!(partial_transpose(&t1, Transpose::T1), m);
        assert_eq!(partial_transpose(&t2, Transpose::T2), m);
        let full = partial_transpose(&t1, Transpose::T2);
        assert_eq!(full.mat(), &m.mat().transpose());
        let id = CompositeMatrix::identity(IndexShape::new(vec![4]));
        assert_eq!(partial_transpose(&id, Transpose::T1), id);
        assert_eq!(partial_transpose(&id, Transpose::T2), id);
    }

    #[test]
    fn trace_examples() {
        let shape = IndexShape::new(vec![3]);
        let id = CompositeMatrix::identity(shape.clone());
        assert_eq!(partial_trace_2(&id), Mat::identity(3).scale(&Scalar::int(3)));
        assert_eq!(partial_trace_2(&permutation_p(&shape)), Mat::identity(3));
    }

    #[test]
    fn invert_identity_and_random() {
        let id = Mat::identity(6);
        assert_eq!(id.invert().unwrap(), id);
        let mut rng = StdRng::seed_from_u64(9);
        let mut found = false;
        for _ in 0..10 {
            let m = random_mat(&mut rng, 5, 0.6);
            if let Ok(inv) = m.invert() {
                assert_eq!(m.matmul(&inv), Mat::identity(5));
                assert_eq!(inv.matmul(&m), Mat::identity(5));
                found = true;
            }
        }
        assert!(found, "no invertible sample found");
        assert_eq!(Mat::zeros(3, 3).invert(), Err(crate::QError::SingularMatrix));
    }

    #[test]
    fn inverse_matches_numeric_oracle() {
        let mut rng = StdRng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 5 {
            let m = random_mat(&mut rng, 4, 0.7);
            let Ok(inv) = m.invert() else { continue };
            let s0 = rat(rng.gen_range(2i64..9), rng.gen_range(1i64..4));
            let (Ok(mq), Ok(invq)) = (m.eval_numeric(&s0), inv.eval_numeric(&s0)) else {
                continue;
            };
            assert_eq!(mq.invert().unwrap(), invq);
            checked += 1;
        }
    }

    #[test]
    fn embed_slots() {
        let shape = IndexShape::new(vec![2]);
        let id = CompositeMatrix::identity(shape.clone());
        for slot in [Slot::S12, Slot::S13, Slot::S23] {
            assert_eq!(embed_on_triple(&id, slot), Mat::identity(8));
        }
        // slot-13 embedding of P is the (13) permutation
        let p = permutation_p(&shape);
        let e13 = embed_on_triple(&p, Slot::S13);
        let n = 2;
        let mut p13 = Mat::zeros(8, 8);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    p13.set((a * n + b) * n + c, (c * n + b) * n + a, Scalar::one());
                }
            }
        }
        assert_eq!(e13, p13);
        // direct formula for slot 13 agrees with the conjugation
        let mut rng = StdRng::seed_from_u64(17);
        let m = random_composite(&mut rng, shape);
        let e = embed_on_triple(&m, Slot::S13);
        let mut direct = Mat::zeros(8, 8);
        for (r, c, v) in m.mat().entries() {
            let (i, j) = (r / n, r % n);
            let (k, l) = (c / n, c % n);
            for f in 0..n {
                direct.set((i * n + f) * n + j, (k * n + f) * n + l, v.clone());
            }
        }
        assert_eq!(e, direct);
    }

    #[test]
    fn minimal_polynomial_hint_and_krylov() {
        // 1×1 [q] → x − q
        let mut m = Mat::zeros(1, 1);
        m.set(0, 0, sc("q"));
        let p = minimal_polynomial(&m, None);
        assert_eq!(p, ScalarPoly::from_roots(&[sc("q")]));
        // diagonal with repeated eigenvalues → squarefree minpoly
        let mut d = Mat::zeros(3, 3);
        d.set(0, 0, sc("q"));
        d.set(1, 1, sc("q"));
        d.set(2, 2, sc("-q^-1"));
        let roots = [sc("q"), sc("-q^-1")];
        for hints in [None, Some(&roots[..]), Some(&[sc("q"), sc("-q^-1"), sc("q^2")][..])] {
            let p = minimal_polynomial(&d, hints);
            assert_eq!(p, ScalarPoly::from_roots(&roots));
            assert!(p.eval_mat(&d).is_zero());
        }
        // non-diagonalizable block: [[0,1],[0,0]] → x²
        let mut jordan = Mat::zeros(2, 2);
        jordan.set(0, 1, Scalar::one());
        let p = minimal_polynomial(&jordan, Some(&[Scalar::zero()]));
        assert_eq!(p.degree(), 2);
        assert!(p.eval_mat(&jordan).is_zero());
    }

    #[test]
    fn minpoly_numeric_annihilation() {
        let mut rng = StdRng::seed_from_u64(31);
        let m = random_mat(&mut rng, 4, 0.5);
        let p = minimal_polynomial(&m, None);
        assert!(p.eval_mat(&m).is_zero());
        let s0 = rat(3, 1);
        if let Ok(mq) = m.eval_numeric(&s0) {
            // Horner over MatQ
            let mut acc = MatQ::zeros(4, 4);
            for c in (0..=p.degree() as usize).rev().map(|k| p.coeff(k)) {
                acc = acc.matmul(&mq);
                acc = acc.add(&MatQ::identity(4).scale(&c.eval_numeric(&s0).unwrap()));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn interleave_single_and_identity() {
        let mut rng = StdRng::seed_from_u64(2);
        let m = random_composite(&mut rng, IndexShape::new(vec![3]));
        let one = interleave_construct(std::slice::from_ref(&m)).unwrap();
        assert_eq!(one.mat(), m.mat());
        let ids = [
            CompositeMatrix::identity(IndexShape::new(vec![2])),
            CompositeMatrix::identity(IndexShape::new(vec![3])),
        ];
        let both = interleave_construct(&ids).unwrap();
        assert_eq!(both.mat(), &Mat::identity(36));
        assert_eq!(both.shape().dims(), &[2, 3]);
    }

    #[test]
    fn kernel_and_rank() {
        // rows (1, 1, 0), (0, 0, 1) → kernel spanned by (1, -1, 0)
        let mut m = Mat::zeros(2, 3);
        m.set(0, 0, Scalar::one());
        m.set(0, 1, Scalar::one());
        m.set(1, 2, Scalar::one());
        assert_eq!(rank(&m), 2);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.matvec(v).is_empty());
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = StdRng::seed_from_u64(13);
        let m = random_composite(&mut rng, IndexShape::new(vec![2, 2]));
        let j = m.to_json();
        let back = CompositeMatrix::from_json(&j).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json().to_string(), j.to_string());
    }
}

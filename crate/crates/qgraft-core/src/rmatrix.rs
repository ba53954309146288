//! R-matrix constructors for sl_n modules, tensor composition, Majid pair
//! synthesis, and the exact YBE / FRT / dual-pair matrix checks.

use itertools::Itertools;

use crate::qlinalg::{
    embed_on_triple, k0, minimal_polynomial, partial_transpose, permutation_p, CompositeMatrix,
    IndexShape, ScalarPoly, Slot, Transpose,
};
use crate::qscalar::{Rat, Scalar};
use crate::{QError, Result};

/// Module flavor of an sl_n factor. The dual module produces the same
/// matrix as the natural one after the standard basis relabeling, so the
/// flag only records intent.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Module {
    Natural,
    Dual,
}

/// One sl_n factor together with its module and root normalization
/// d = (α,α)/2, so the quantum parameter of the factor is q^d.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepSpec {
    pub lie_rank: usize,
    pub module: Module,
    pub root_norm: Rat,
}

impl RepSpec {
    pub fn new(lie_rank: usize, module: Module, root_norm: Rat) -> Result<Self> {
        use num_traits::Signed;
        if lie_rank < 2 {
            return Err(QError::InvalidSpec(format!(
                "sl_n factor needs n ≥ 2, got {lie_rank}"
            )));
        }
        if !root_norm.is_positive() {
            return Err(QError::InvalidSpec("root norm must be positive".into()));
        }
        if !(&root_norm * Rat::from_integer(2.into())).is_integer() {
            return Err(QError::InvalidSpec(
                "root norm must be a half-integer so q^d lives in ℚ(s)".into(),
            ));
        }
        Ok(RepSpec { lie_rank, module, root_norm })
    }

    /// Exponent of q^d in s-units (s = q^{1/2}), i.e. 2d.
    pub fn s_exponent(&self) -> i64 {
        use num_traits::ToPrimitive;
        (&self.root_norm * Rat::from_integer(2.into()))
            .to_integer()
            .to_i64()
            .expect("root norm out of range")
    }
}

/// Standard R-matrix of the spec's module: entries
/// (R)^{ij}_{kl} = q_d^{δ_ij} δ_ik δ_jl + (q_d − q_d^{-1}) δ_il δ_jk θ(j−i)
/// with q_d = q^d and θ(k) = 1 iff k > 0.
pub fn standard_r(spec: &RepSpec) -> CompositeMatrix {
    let n = spec.lie_rank;
    let e = spec.s_exponent();
    let qd = Scalar::s_pow(e);
    let gap = &qd - &Scalar::s_pow(-e);
    let mut r = CompositeMatrix::zeros(IndexShape::new(vec![n]));
    for i in 0..n {
        for j in 0..n {
            r.set_flat(i, j, i, j, if i == j { qd.clone() } else { Scalar::one() });
            if i < j {
                r.set_flat(i, j, j, i, gap.clone());
            }
        }
    }
    r
}

/// Tensor R-matrix by the entry product formula
/// (R_⊗)^{ī j̄}_{k̄ l̄} = ∏_t (R_t)^{i_t j_t}_{k_t l_t}.
pub fn tensor_r(factors: &[CompositeMatrix]) -> Result<CompositeMatrix> {
    if factors.is_empty() {
        return Err(QError::InvalidSpec("tensor_r needs ≥ 1 factor".into()));
    }
    let mut dims = Vec::new();
    for f in factors {
        dims.extend_from_slice(f.shape().dims());
    }
    let mut out = CompositeMatrix::zeros(IndexShape::new(dims));
    let entry_lists: Vec<Vec<(usize, usize, usize, usize, Scalar)>> = factors
        .iter()
        .map(|f| {
            let d = f.leg_dim();
            f.mat()
                .entries()
                .map(|(r, c, v)| (r / d, r % d, c / d, c % d, v.clone()))
                .collect()
        })
        .collect();
    for combo in entry_lists.iter().map(|l| l.iter()).multi_cartesian_product() {
        let (mut i, mut j, mut k, mut l) = (0, 0, 0, 0);
        let mut val = Scalar::one();
        for (t, e) in combo.iter().enumerate() {
            let d = factors[t].leg_dim();
            i = i * d + e.0;
            j = j * d + e.1;
            k = k * d + e.2;
            l = l * d + e.3;
            val = &val * &e.4;
        }
        out.set_flat(i, j, k, l, val);
    }
    Ok(out)
}

/// Eigenvalues of the tensor braiding: deduplicated products of one root
/// per factor.
pub fn predict_eigenvalues(factor_roots: &[Vec<Scalar>]) -> Vec<Scalar> {
    assert!(
        factor_roots.iter().all(|r| !r.is_empty()),
        "each factor needs at least one root"
    );
    let mut out: Vec<Scalar> = Vec::new();
    for combo in factor_roots.iter().map(|l| l.iter()).multi_cartesian_product() {
        let prod = combo.into_iter().fold(Scalar::one(), |acc, r| &acc * r);
        if !out.contains(&prod) {
            out.push(prod);
        }
    }
    out
}

/// Roots {q_d, −q_d^{-1}} of the quadratic braiding relation for one
/// standard factor.
pub fn standard_roots(spec: &RepSpec) -> Vec<Scalar> {
    let e = spec.s_exponent();
    vec![Scalar::s_pow(e), -&Scalar::s_pow(-e)]
}

/// A normalized R with its partner R′: the data of the braided vector and
/// covector algebras.
#[derive(Clone, Debug)]
pub struct MajidPair {
    /// Normalized R (R_big = λ·R).
    pub r: CompositeMatrix,
    pub rprime: CompositeMatrix,
    pub lambda: Scalar,
    /// Roots of the minimal polynomial of PR; contains −1.
    pub eigenvalues: Vec<Scalar>,
}

/// Normalizes R_big at the given braiding eigenvalue and synthesizes R′.
///
/// With μ the monic squarefree minimal polynomial of PR (root −1 after
/// normalization), PR′ = I + μ(PR)/(x+1)|_{x=PR} and R′ = P·PR′. All four
/// compatibility conditions are verified exactly before returning:
/// (PR+I)(PR′−I) = 0, R₂₁R′₁₂ = R′₂₁R₁₂, and both mixed braid identities
/// R₁₂R₁₃R′₂₃ = R′₂₃R₁₃R₁₂, R₂₃R₁₃R′₁₂ = R′₁₂R₁₃R₂₃.
pub fn majid_pair(r_big: &CompositeMatrix, eigen_to_minus_one: &Scalar) -> Result<MajidPair> {
    if eigen_to_minus_one.is_zero() {
        return Err(QError::NotAnEigenvalue("0".into()));
    }
    let lambda = -eigen_to_minus_one;
    let r = r_big.scale(&lambda.inv()?);
    let p = permutation_p(r.shape());
    let pr = p.matmul(&r);
    let mu = minimal_polynomial(pr.mat(), None).squarefree_part();
    let minus_one = -&Scalar::one();
    if !mu.eval_scalar(&minus_one).is_zero() {
        return Err(QError::NotAnEigenvalue(eigen_to_minus_one.to_string()));
    }
    let x_plus_one = ScalarPoly::from_roots(&[minus_one]);
    let (quot, rem) = mu.divrem(&x_plus_one);
    debug_assert!(rem.is_zero());
    let n2 = pr.mat().nrows();
    let pr_prime = pr.with_mat(
        quot.eval_mat(pr.mat()).add(&crate::qlinalg::Mat::identity(n2)),
    );
    let rprime = p.matmul(&pr_prime);

    let id = CompositeMatrix::identity(r.shape().clone());
    if !pr.add(&id).matmul(&pr_prime.sub(&id)).mat().is_zero() {
        return Err(QError::MajidConditionFailed(
            "(PR+I)(PR′−I) ≠ 0".into(),
        ));
    }
    // R₂₁ = P·R·P, so the exchange condition reads (PRP)R′ = (PR′P)R
    let r21 = p.matmul(&r).matmul(&p);
    let rp21 = p.matmul(&rprime).matmul(&p);
    if r21.matmul(&rprime) != rp21.matmul(&r) {
        return Err(QError::MajidConditionFailed("R₂₁R′₁₂ ≠ R′₂₁R₁₂".into()));
    }
    let e12 = embed_on_triple(&r, Slot::S12);
    let e13 = embed_on_triple(&r, Slot::S13);
    let e23 = embed_on_triple(&r, Slot::S23);
    let f12 = embed_on_triple(&rprime, Slot::S12);
    let f23 = embed_on_triple(&rprime, Slot::S23);
    if e12.matmul(&e13).matmul(&f23) != f23.matmul(&e13).matmul(&e12) {
        return Err(QError::MajidConditionFailed(
            "R₁₂R₁₃R′₂₃ ≠ R′₂₃R₁₃R₁₂".into(),
        ));
    }
    if e23.matmul(&e13).matmul(&f12) != f12.matmul(&e13).matmul(&e23) {
        return Err(QError::MajidConditionFailed(
            "R₂₃R₁₃R′₁₂ ≠ R′₁₂R₁₃R₂₃".into(),
        ));
    }

    let eigenvalues = monomial_roots(&mu).ok_or_else(|| {
        QError::MajidConditionFailed(
            "minimal polynomial does not split into monomial roots".into(),
        )
    })?;
    Ok(MajidPair { r, rprime, lambda, eigenvalues })
}

/// Splits a polynomial whose roots are all of the form ±s^k (or 0); None
/// when some root is not of that shape.
pub fn monomial_roots(p: &ScalarPoly) -> Option<Vec<Scalar>> {
    let mut bound: i64 = 1;
    for c in p.coeffs() {
        for poly in [c.num(), c.den()] {
            for e in [poly.min_exp(), poly.max_exp()].into_iter().flatten() {
                bound = bound.max(e.abs());
            }
        }
    }
    let mut candidates = vec![Scalar::zero()];
    for k in -bound..=bound {
        candidates.push(Scalar::s_pow(k));
        candidates.push(-&Scalar::s_pow(k));
    }
    let (roots, cofactor) = p.peel_roots(&candidates);
    (cofactor.degree() <= 0).then_some(roots)
}

/// Exact braid relation R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂ on the triple leg space.
pub fn check_ybe(r: &CompositeMatrix) -> bool {
    let e12 = embed_on_triple(r, Slot::S12);
    let e13 = embed_on_triple(r, Slot::S13);
    let e23 = embed_on_triple(r, Slot::S23);
    e12.matmul(&e13).matmul(&e23) == e23.matmul(&e13).matmul(&e12)
}

/// Verifies (R^{-1})^{t1} P (R^{t2})^{-1} P K₀ = c·K₀ and returns c.
pub fn check_frt(r: &CompositeMatrix) -> Result<Scalar> {
    let p = permutation_p(r.shape());
    let k = k0(r.shape());
    let rinv_t1 = partial_transpose(&r.invert()?, Transpose::T1);
    let rt2_inv = partial_transpose(r, Transpose::T2).invert()?;
    let lhs = rinv_t1.matmul(&p).matmul(&rt2_inv).matmul(&p).matmul(&k);
    let c = lhs.get_flat(0, 0, 0, 0);
    if lhs != k.scale(&c) {
        return Err(QError::FrtViolation(
            "left side is not a scalar multiple of K_0".into(),
        ));
    }
    Ok(c)
}

/// The four dual-pairing value matrices ⟨m^±, t⟩ and ⟨m^±, t̃⟩, all
/// addressed with rows (m-upper, t-upper) and columns (m-lower, t-lower):
/// R, P·R^{-1}·P, (R^{t2})^{-1}, P·[(R^{-1})^{t1}]^{-1}·P. The P
/// conjugations realize the swapped index roles of the minus family.
pub fn pairing_matrices(r: &CompositeMatrix) -> Result<[CompositeMatrix; 4]> {
    let p = permutation_p(r.shape());
    let rinv = r.invert()?;
    let m_minus_t = p.matmul(&rinv).matmul(&p);
    let m_plus_tilde = partial_transpose(r, Transpose::T2).invert()?;
    let m_minus_tilde = p
        .matmul(&partial_transpose(&rinv, Transpose::T1).invert()?)
        .matmul(&p);
    Ok([r.clone(), m_minus_t, m_plus_tilde, m_minus_tilde])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{Mat, MatQ};
    use crate::qscalar::{parse_scalar, rat, rat_int};

    fn sc(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    fn natural(n: usize, d: (i64, i64)) -> RepSpec {
        RepSpec::new(n, Module::Natural, rat(d.0, d.1)).unwrap()
    }

    fn sl2_half() -> CompositeMatrix {
        standard_r(&natural(2, (1, 2)))
    }

    fn sl3_long() -> CompositeMatrix {
        standard_r(&natural(3, (1, 1)))
    }

    /// Type A preset: natural ℂ^n paired with dual (ℂ^m)^*.
    fn type_a(n: usize, m: usize) -> CompositeMatrix {
        let rn = standard_r(&natural(n, (1, 1)));
        let rm = standard_r(&RepSpec::new(m, Module::Dual, rat_int(1)).unwrap());
        tensor_r(&[rn, rm]).unwrap()
    }

    #[test]
    fn displayed_4x4_short_root() {
        let r = sl2_half();
        let mut want = Mat::zeros(4, 4);
        for (d, v) in ["q^(1/2)", "1", "1", "q^(1/2)"].iter().enumerate() {
            want.set(d, d, sc(v));
        }
        want.set(1, 2, sc("q^(1/2) - q^(-1/2)"));
        assert_eq!(r.mat(), &want);
    }

    #[test]
    fn displayed_9x9_long_root() {
        let r = sl3_long();
        let mut want = Mat::zeros(9, 9);
        for d in 0..9 {
            want.set(d, d, if d % 4 == 0 { sc("q") } else { sc("1") });
        }
        let gap = sc("q - q^-1");
        want.set(1, 3, gap.clone());
        want.set(2, 6, gap.clone());
        want.set(5, 7, gap);
        assert_eq!(r.mat(), &want);
    }

    #[test]
    fn dual_module_same_matrix() {
        for n in [2, 3, 4] {
            let nat = standard_r(&natural(n, (1, 1)));
            let dual = standard_r(&RepSpec::new(n, Module::Dual, rat_int(1)).unwrap());
            assert_eq!(nat, dual);
        }
    }

    #[test]
    fn q_one_specializes_to_identity() {
        for spec in [natural(2, (1, 2)), natural(3, (1, 1)), natural(4, (1, 1))] {
            let r = standard_r(&spec);
            let n2 = spec.lie_rank * spec.lie_rank;
            let at_one = r.mat().eval_numeric(&rat_int(1)).unwrap();
            assert_eq!(at_one, MatQ::identity(n2));
        }
    }

    #[test]
    fn quadratic_braiding_relation() {
        for spec in [natural(2, (1, 1)), natural(3, (1, 1)), natural(2, (1, 2)), natural(3, (1, 2))] {
            let r = standard_r(&spec);
            let p = permutation_p(r.shape());
            let pr = p.matmul(&r);
            let e = spec.s_exponent();
            let id = CompositeMatrix::identity(r.shape().clone());
            let a = pr.sub(&id.scale(&Scalar::s_pow(e)));
            let b = pr.add(&id.scale(&Scalar::s_pow(-e)));
            assert!(a.matmul(&b).mat().is_zero());
        }
    }

    #[test]
    fn rep_spec_validation() {
        assert!(RepSpec::new(1, Module::Natural, rat_int(1)).is_err());
        assert!(RepSpec::new(2, Module::Natural, rat_int(0)).is_err());
        assert!(RepSpec::new(2, Module::Natural, rat(1, 3)).is_err());
        assert!(RepSpec::new(2, Module::Natural, rat(3, 2)).is_ok());
    }

    #[test]
    fn ybe_standard_and_identity() {
        for spec in [natural(2, (1, 1)), natural(3, (1, 1)), natural(2, (1, 2))] {
            assert!(check_ybe(&standard_r(&spec)));
        }
        let id = CompositeMatrix::identity(IndexShape::new(vec![3]));
        assert!(check_ybe(&id));
    }

    #[test]
    fn tensor_entry_examples() {
        let r = tensor_r(&[sl3_long(), sl2_half()]).unwrap();
        // corner (1,1),(1,1) over (1,1),(1,1): q·q^{1/2}
        assert_eq!(r.entry(&[0, 0], &[0, 0], &[0, 0], &[0, 0]), sc("q^(3/2)"));
        let single = tensor_r(std::slice::from_ref(&sl3_long())).unwrap();
        assert_eq!(single, sl3_long());
    }

    #[test]
    fn tensor_matches_interleave() {
        use crate::qlinalg::interleave_construct;
        let fo = [sl3_long(), sl2_half()];
        assert_eq!(tensor_r(&fo).unwrap(), interleave_construct(&fo).unwrap());
        let ta = [
            standard_r(&natural(2, (1, 1))),
            standard_r(&RepSpec::new(2, Module::Dual, rat_int(1)).unwrap()),
        ];
        assert_eq!(tensor_r(&ta).unwrap(), interleave_construct(&ta).unwrap());
    }

    #[test]
    fn eigenvalue_prediction() {
        let long = vec![sc("q"), sc("-q^-1")];
        let short = vec![sc("q^(1/2)"), sc("-q^(-1/2)")];
        let got = predict_eigenvalues(&[long.clone(), long.clone()]);
        assert_eq!(got, vec![sc("q^2"), sc("-1"), sc("q^-2")]);
        let got = predict_eigenvalues(&[long.clone(), short]);
        assert_eq!(
            got,
            vec![sc("q^(3/2)"), sc("-q^(1/2)"), sc("-q^(-1/2)"), sc("q^(-3/2)")]
        );
        assert_eq!(predict_eigenvalues(&[long.clone()]), long);
    }

    #[test]
    fn tensor_minpoly_has_predicted_roots() {
        let r = type_a(2, 2);
        let p = permutation_p(r.shape());
        let pr = p.matmul(&r);
        let roots = [sc("q^2"), sc("-1"), sc("q^-2")];
        let mu = minimal_polynomial(pr.mat(), Some(&roots));
        assert_eq!(mu, ScalarPoly::from_roots(&roots));
    }

    #[test]
    fn majid_type_a_regression() {
        let r_big = type_a(2, 2);
        let pair = majid_pair(&r_big, &sc("-1")).unwrap();
        assert!(pair.lambda.is_one());
        assert_eq!(pair.r, r_big);
        // R′ = RPR − (q²+q^{-2})R + 2P
        let p = permutation_p(r_big.shape());
        let want = pair
            .r
            .matmul(&p)
            .matmul(&pair.r)
            .sub(&pair.r.scale(&sc("q^2 + q^-2")))
            .add(&p.scale(&sc("2")));
        assert_eq!(pair.rprime, want);
        let mut eig = pair.eigenvalues.clone();
        eig.sort_by(crate::qscalar::Scalar::sort_cmp);
        let mut expect = vec![sc("-1"), sc("q^2"), sc("q^-2")];
        expect.sort_by(crate::qscalar::Scalar::sort_cmp);
        assert_eq!(eig, expect);
    }

    #[test]
    fn majid_f4_regression() {
        let r_big = tensor_r(&[sl3_long(), sl2_half()]).unwrap();
        let pair = majid_pair(&r_big, &sc("-q^(1/2)")).unwrap();
        assert_eq!(pair.lambda, sc("q^(1/2)"));
        // R′ = R(PR)² + (q^{-1}−q−q^{-2})R(PR) + (q^{-1}−1−q^{-3})R + (q^{-2}+1)P
        let p = permutation_p(r_big.shape());
        let rpr = pair.r.matmul(&p).matmul(&pair.r);
        let rprpr = rpr.matmul(&p).matmul(&pair.r);
        let want = rprpr
            .add(&rpr.scale(&sc("q^-1 - q - q^-2")))
            .add(&pair.r.scale(&sc("q^-1 - 1 - q^-3")))
            .add(&p.scale(&sc("q^-2 + 1")));
        assert_eq!(pair.rprime, want);
    }

    #[test]
    fn majid_single_factor() {
        let r_big = standard_r(&natural(2, (1, 1)));
        let pair = majid_pair(&r_big, &sc("-q^-1")).unwrap();
        assert_eq!(pair.lambda, sc("q^-1"));
        // PR′ = PR + (1 − q²)I
        let p = permutation_p(r_big.shape());
        let pr = p.matmul(&pair.r);
        let want = p.matmul(&pr.add(&CompositeMatrix::identity(r_big.shape().clone()).scale(&sc("1 - q^2"))));
        assert_eq!(pair.rprime, want);
    }

    #[test]
    fn majid_rejects_non_eigenvalue() {
        let r_big = standard_r(&natural(2, (1, 1)));
        match majid_pair(&r_big, &sc("q^5")) {
            Err(QError::NotAnEigenvalue(_)) => {}
            other => panic!("expected NotAnEigenvalue, got {other:?}"),
        }
    }

    #[test]
    fn frt_constants() {
        let id = CompositeMatrix::identity(IndexShape::new(vec![2]));
        assert!(check_frt(&id).unwrap().is_one());
        let c2 = check_frt(&sl2_half()).unwrap();
        assert!(!c2.is_zero());
        let c3 = check_frt(&sl3_long()).unwrap();
        let c_tensor = check_frt(&tensor_r(&[sl3_long(), sl2_half()]).unwrap()).unwrap();
        assert_eq!(c_tensor, &c3 * &c2);
    }

    #[test]
    fn pairing_matrix_shapes() {
        let id = CompositeMatrix::identity(IndexShape::new(vec![2]));
        for m in pairing_matrices(&id).unwrap() {
            assert_eq!(m, id);
        }
        let r = sl2_half();
        let outs = pairing_matrices(&r).unwrap();
        assert_eq!(outs[0], r);
        assert_eq!(
            outs[2],
            partial_transpose(&r, Transpose::T2).invert().unwrap()
        );
        // numeric cross-check at s0 = 3
        let s0 = rat_int(3);
        let rq = r.mat().eval_numeric(&s0).unwrap();
        let pq = permutation_p(r.shape()).mat().eval_numeric(&s0).unwrap();
        let want1 = pq.matmul(&rq.invert().unwrap()).matmul(&pq);
        assert_eq!(outs[1].mat().eval_numeric(&s0).unwrap(), want1);
        let t1q = partial_transpose(&r.invert().unwrap(), Transpose::T1)
            .mat()
            .eval_numeric(&s0)
            .unwrap();
        let want3 = pq.matmul(&t1q.invert().unwrap()).matmul(&pq);
        assert_eq!(outs[3].mat().eval_numeric(&s0).unwrap(), want3);
    }

    #[test]
    fn t2_inverse_factorizes() {
        let f3 = partial_transpose(&sl3_long(), Transpose::T2).invert().unwrap();
        let f2 = partial_transpose(&sl2_half(), Transpose::T2).invert().unwrap();
        let whole = partial_transpose(&tensor_r(&[sl3_long(), sl2_half()]).unwrap(), Transpose::T2)
            .invert()
            .unwrap();
        assert_eq!(whole, tensor_r(&[f3, f2]).unwrap());
    }
}

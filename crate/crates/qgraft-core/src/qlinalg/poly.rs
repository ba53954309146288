use std::fmt;

use super::mat::{sv_add_scaled, Mat, SparseVec};
use crate::qscalar::Scalar;

/// Univariate polynomial over ℚ(s); coefficients ascending, trailing zeros
/// trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarPoly {
    coeffs: Vec<Scalar>,
}

impl ScalarPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map_or(false, Scalar::is_zero) {
            coeffs.pop();
        }
        ScalarPoly { coeffs }
    }

    pub fn zero() -> Self {
        ScalarPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        ScalarPoly { coeffs: vec![Scalar::one()] }
    }

    pub fn x() -> Self {
        ScalarPoly { coeffs: vec![Scalar::zero(), Scalar::one()] }
    }

    /// Monic product ∏ (x − r).
    pub fn from_roots(roots: &[Scalar]) -> Self {
        let mut p = ScalarPoly::one();
        for r in roots {
            p = p.mul(&ScalarPoly::new(vec![-r, Scalar::one()]));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn monic(&self) -> ScalarPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("leading coefficient nonzero");
        self.scale(&inv)
    }

    pub fn scale(&self, c: &Scalar) -> ScalarPoly {
        ScalarPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, rhs: &ScalarPoly) -> ScalarPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ScalarPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &ScalarPoly) -> ScalarPoly {
        self.add(&rhs.scale(&Scalar::int(-1)))
    }

    pub fn mul(&self, rhs: &ScalarPoly) -> ScalarPoly {
        if self.is_zero() || rhs.is_zero() {
            return ScalarPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        ScalarPoly::new(out)
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn divrem(&self, den: &ScalarPoly) -> (ScalarPoly, ScalarPoly) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let dlc = den.leading().inv().expect("nonzero");
        let mut rem = self.clone();
        let mut quo = ScalarPoly::zero();
        while !rem.is_zero() && rem.degree() >= den.degree() {
            let shift = (rem.degree() - den.degree()) as usize;
            let factor = &rem.leading() * &dlc;
            let mut tc = vec![Scalar::zero(); shift + 1];
            tc[shift] = factor;
            let term = ScalarPoly::new(tc);
            quo = quo.add(&term);
            rem = rem.sub(&term.mul(den));
        }
        (quo, rem)
    }

    pub fn gcd(&self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, rhs: &ScalarPoly) -> ScalarPoly {
        if self.is_zero() || rhs.is_zero() {
            return ScalarPoly::zero();
        }
        let g = self.gcd(rhs);
        let (q, r) = self.mul(rhs).divrem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    pub fn eval_scalar(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Horner evaluation p(M).
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        assert!(m.is_square());
        let n = m.nrows();
        let mut acc = Mat::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.matmul(m);
            if !c.is_zero() {
                acc = acc.add(&Mat::identity(n).scale(c));
            }
        }
        acc
    }

    /// Roots found by clearing linear factors with the given candidates;
    /// returns (roots with multiplicity, remaining cofactor).
    pub fn peel_roots(&self, candidates: &[Scalar]) -> (Vec<Scalar>, ScalarPoly) {
        let mut rest = self.clone();
        let mut found = Vec::new();
        let mut progress = true;
        while progress && rest.degree() > 0 {
            progress = false;
            for r in candidates {
                if rest.eval_scalar(r).is_zero() {
                    let lin = ScalarPoly::new(vec![-r, Scalar::one()]);
                    let (q, rem) = rest.divrem(&lin);
                    debug_assert!(rem.is_zero());
                    rest = q;
                    found.push(r.clone());
                    progress = true;
                    break;
                }
            }
        }
        (found, rest)
    }

    pub fn derivative(&self) -> ScalarPoly {
        ScalarPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::int(k as i64))
                .collect(),
        )
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> ScalarPoly {
        if self.degree() <= 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() <= 0 {
            return self.monic();
        }
        let (q, r) = self.divrem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Minimal polynomial of a square matrix.
///
/// With `hint_roots`, first tries the squarefree product over distinct
/// hints, greedily dropping removable roots; otherwise (or on failure)
/// falls back to exact Krylov iteration per basis vector, accumulating the
/// lcm of the per-vector annihilators until it kills the matrix.
pub fn minimal_polynomial(m: &Mat, hint_roots: Option<&[Scalar]>) -> ScalarPoly {
    assert!(m.is_square(), "minimal polynomial of non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return ScalarPoly::one();
    }
    if let Some(hints) = hint_roots {
        let mut distinct: Vec<Scalar> = Vec::new();
        for r in hints {
            if !distinct.contains(r) {
                distinct.push(r.clone());
            }
        }
        let p = ScalarPoly::from_roots(&distinct);
        if p.eval_mat(m).is_zero() {
            // squarefree annihilator: greedy root dropping reaches the minimum
            loop {
                let mut dropped = false;
                for k in 0..distinct.len() {
                    let mut fewer = distinct.clone();
                    fewer.remove(k);
                    if ScalarPoly::from_roots(&fewer).eval_mat(m).is_zero() {
                        distinct = fewer;
                        dropped = true;
                        break;
                    }
                }
                if !dropped {
                    return ScalarPoly::from_roots(&distinct);
                }
            }
        }
    }
    krylov_minimal_polynomial(m)
}

fn krylov_minimal_polynomial(m: &Mat) -> ScalarPoly {
    let n = m.nrows();
    let mut p = ScalarPoly::one();
    for i in 0..n {
        let mut v = SparseVec::new();
        v.insert(i, Scalar::one());
        let local = krylov_annihilator(m, v);
        p = p.lcm(&local);
        if p.eval_mat(m).is_zero() {
            return p.monic();
        }
    }
    p.monic()
}

/// Monic minimal annihilator of a single vector: iterate v, Mv, M²v, …
/// keeping an echelon basis augmented with Krylov coordinates; the first
/// dependency yields the polynomial.
fn krylov_annihilator(m: &Mat, v0: SparseVec) -> ScalarPoly {
    // echelon rows: (lead index, vector, coords over Krylov powers)
    let mut echelon: Vec<(usize, SparseVec, Vec<Scalar>)> = Vec::new();
    let mut v = v0;
    let mut power = 0usize;
    loop {
        // coords of the current vector in terms of M^k v0 before reduction
        let mut coords = vec![Scalar::zero(); power + 1];
        coords[power] = Scalar::one();
        let mut cur = v.clone();
        for (lead, evec, ecoords) in &echelon {
            if let Some(c) = cur.get(lead).cloned() {
                let neg = -&c;
                sv_add_scaled(&mut cur, &neg, evec);
                for (k, ec) in ecoords.iter().enumerate() {
                    if k < coords.len() {
                        coords[k] = &coords[k] + &(&neg * ec);
                    } else {
                        coords.push(&neg * ec);
                    }
                }
            }
        }
        match cur.iter().next() {
            None => {
                // dependency: Σ coords_k M^k v0 = 0 up to sign bookkeeping
                return ScalarPoly::new(coords).monic();
            }
            Some((&lead, _)) => {
                let inv = cur[&lead].inv().expect("nonzero lead");
                let mut evec = cur.clone();
                super::mat::sv_scale(&mut evec, &inv);
                let ecoords: Vec<Scalar> = coords.iter().map(|c| c * &inv).collect();
                let pos = echelon.partition_point(|(l, _, _)| *l < lead);
                echelon.insert(pos, (lead, evec, ecoords));
            }
        }
        v = m.matvec(&v);
        power += 1;
    }
}

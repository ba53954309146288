//! Braided (co)vector algebras attached to a Majid pair: quadratic relation
//! extraction from R′, the degree-d duality pairing matrices, radical
//! detection, and quotients by radical generators.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::qlinalg::{
    echelon_reduce, kernel_basis, permutation_p, reduce_against, rref, Mat, SparseVec,
};
use crate::qscalar::{rat, Scalar};
use crate::rmatrix::MajidPair;
use crate::{QError, Result};

/// Word in the free algebra: a sequence of generator indices.
pub type Word = Vec<u16>;

/// Noncommutative polynomial: finitely many words with nonzero scalar
/// coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCPolynomial {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPolynomial {
    pub fn zero() -> Self {
        NCPolynomial::default()
    }

    pub fn from_term(word: Word, coeff: Scalar) -> Self {
        let mut p = NCPolynomial::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[u16]) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, word: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &NCPolynomial) -> NCPolynomial {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &NCPolynomial) -> NCPolynomial {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> NCPolynomial {
        NCPolynomial { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> NCPolynomial {
        if c.is_zero() {
            return NCPolynomial::zero();
        }
        NCPolynomial { terms: self.terms.iter().map(|(w, k)| (w.clone(), k * c)).collect() }
    }

    /// Left- and right-multiplication by plain words.
    pub fn framed(&self, left: &[u16], right: &[u16]) -> NCPolynomial {
        NCPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let mut word = Vec::with_capacity(left.len() + w.len() + right.len());
                    word.extend_from_slice(left);
                    word.extend_from_slice(w);
                    word.extend_from_slice(right);
                    (word, c.clone())
                })
                .collect(),
        }
    }

    /// Common word length, or None for 0 or an inhomogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let d = it.next()?.len();
        it.all(|w| w.len() == d).then_some(d)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Serializes as a list of (word, scalar-string) pairs.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| json!([w.iter().map(|&g| g as u64).collect::<Vec<_>>(), c.to_string()]))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<NCPolynomial> {
        let bad = |m: &str| QError::InvalidSpec(format!("ncpoly json: {m}"));
        let mut p = NCPolynomial::zero();
        for t in v.as_array().ok_or_else(|| bad("expected array"))? {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("bad pair"))?;
            let word: Word = pair[0]
                .as_array()
                .ok_or_else(|| bad("bad word"))?
                .iter()
                .map(|g| g.as_u64().map(|x| x as u16).ok_or_else(|| bad("bad index")))
                .collect::<Result<_>>()?;
            let coeff = crate::qscalar::parse_scalar(
                pair[1].as_str().ok_or_else(|| bad("bad coeff"))?,
            )?;
            p.add_term(word, coeff);
        }
        Ok(p)
    }
}

/// Which of the dually-paired algebras a relation set presents.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Vector,
    Covector,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::Vector => 'e',
            Side::Covector => 'f',
        }
    }
}

/// Presentation data of a braided vector or covector algebra.
#[derive(Clone, Debug)]
pub struct BraidedAlgebra {
    pub side: Side,
    /// Composite index tuple of each generator, 0-based per factor.
    pub generators: Vec<Vec<usize>>,
    pub quad_relations: Vec<NCPolynomial>,
    pub extra_relations: Vec<NCPolynomial>,
    pub pair: MajidPair,
}

impl BraidedAlgebra {
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Printed generator name, 1-based per factor: e(1,2), f(2,1), …
    pub fn generator_name(&self, g: usize) -> String {
        let parts: Vec<String> =
            self.generators[g].iter().map(|i| (i + 1).to_string()).collect();
        format!("{}({})", self.side.letter(), parts.join(","))
    }

    pub fn format_word(&self, w: &[u16]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| self.generator_name(g as usize)).collect::<Vec<_>>().join("*")
    }

    pub fn format_poly(&self, p: &NCPolynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        // largest-degree, lexicographically-largest words first
        let mut terms: Vec<(&Word, &Scalar)> = p.terms().collect();
        terms.sort_by(|a, b| (b.0.len(), b.0).cmp(&(a.0.len(), a.0)));
        let mut out = String::new();
        for (i, (w, c)) in terms.iter().enumerate() {
            let cs = c.to_string();
            let neg = cs.starts_with('-');
            let mag = if neg { cs[1..].to_string() } else { cs };
            let simple = c.as_monomial().is_some() || mag == "1";
            let mag_wrapped = if simple { mag.clone() } else { format!("({mag})") };
            let body = if mag == "1" {
                self.format_word(w)
            } else {
                format!("{}*{}", mag_wrapped, self.format_word(w))
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    /// Tests membership in the exact span of the quadratic relations.
    pub fn in_quadratic_span(&self, p: &NCPolynomial) -> bool {
        if p.is_zero() {
            return true;
        }
        if p.homogeneous_degree() != Some(2) {
            return false;
        }
        let n = self.num_generators();
        let rows: Vec<SparseVec> = self
            .quad_relations
            .iter()
            .map(|r| poly_to_vec(r, n))
            .collect();
        let ech = echelon_reduce(rows);
        reduce_against(poly_to_vec(p, n), &ech).is_empty()
    }
}

/// Flattens a homogeneous polynomial to its word-coefficient vector, words
/// indexed in base n.
pub fn poly_to_vec(p: &NCPolynomial, n: usize) -> SparseVec {
    let mut v = SparseVec::new();
    for (w, c) in p.terms() {
        let idx = w.iter().fold(0usize, |acc, &g| acc * n + g as usize);
        v.insert(idx, c.clone());
    }
    v
}

/// Inverse of poly_to_vec for degree-d vectors.
pub fn vec_to_poly(v: &SparseVec, n: usize, d: usize) -> NCPolynomial {
    let mut p = NCPolynomial::zero();
    for (&idx, c) in v {
        let mut word = vec![0u16; d];
        let mut rest = idx;
        for slot in (0..d).rev() {
            word[slot] = (rest % n) as u16;
            rest /= n;
        }
        p.add_term(word, c.clone());
    }
    p
}

/// The coefficient c such that w1 = c·w2 holds in the span of the given
/// relations, when the span contains a relation supported on exactly those
/// two words; None otherwise.
pub fn two_word_coefficient(
    relations: &[NCPolynomial],
    w1: &[u16],
    w2: &[u16],
) -> Option<Scalar> {
    use std::collections::BTreeSet;
    let mut others: BTreeSet<Word> = BTreeSet::new();
    for r in relations {
        for (w, _) in r.terms() {
            others.insert(w.clone());
        }
    }
    others.remove(w1);
    others.remove(w2);
    // coordinate order puts w1, w2 last, so after elimination a row leading
    // at w1 is supported on those two words alone
    let mut index: BTreeMap<Word, usize> = BTreeMap::new();
    for (k, w) in others.iter().enumerate() {
        index.insert(w.clone(), k);
    }
    let i1 = others.len();
    let i2 = others.len() + 1;
    index.insert(w1.to_vec(), i1);
    index.insert(w2.to_vec(), i2);
    let rows: Vec<SparseVec> = relations
        .iter()
        .map(|r| {
            r.terms()
                .map(|(w, c)| (index[w], c.clone()))
                .collect::<SparseVec>()
        })
        .collect();
    for row in echelon_reduce(rows) {
        if row.keys().next() == Some(&i1) {
            // row is monic at w1: w1 + c2·w2 = 0
            let c2 = row.get(&i2).cloned().unwrap_or_else(Scalar::zero);
            return Some(-&c2);
        }
    }
    None
}

/// Extracts the quadratic relations of the chosen side from a Majid pair.
///
/// Vector side: the span of e^ī e^j̄ − Σ R′^{j̄ī}_{āb̄} e^ā e^b̄, i.e. the
/// row space of I − PR′, reduced to an independent basis. Covector side:
/// f_ī f_j̄ − Σ f_b̄ f_ā R′^{āb̄}_{īj̄}, the row space of I − R′ᵀP.
pub fn relations_from_pair(pair: &MajidPair, side: Side) -> BraidedAlgebra {
    let shape = pair.r.shape();
    let n = shape.total();
    let p = permutation_p(shape);
    let coeff = match side {
        Side::Vector => p.mat().matmul(pair.rprime.mat()),
        Side::Covector => pair.rprime.mat().transpose().matmul(p.mat()),
    };
    let rel_rows = Mat::identity(n * n).sub(&coeff);
    let (echelon, _) = rref(&rel_rows);
    let quad_relations = (0..echelon.nrows())
        .map(|i| echelon.row(i))
        .filter(|r| !r.is_empty())
        .map(|r| vec_to_poly(r, n, 2))
        .collect();
    BraidedAlgebra {
        side,
        generators: shape.indices().collect(),
        quad_relations,
        extra_relations: Vec::new(),
        pair: pair.clone(),
    }
}

/// Ψ embedded on adjacent slots (slot, slot+1) of d factors of dimension n;
/// slots are 1-based.
fn embed_adjacent(psi: &Mat, n: usize, d: usize, slot: usize) -> Mat {
    debug_assert!((1..d).contains(&slot));
    let right = n.pow((d - 1 - slot) as u32);
    let left = n.pow((slot - 1) as u32);
    let total = n.pow(d as u32);
    let mut out = Mat::zeros(total, total);
    for (r, c, v) in psi.entries() {
        for a in 0..left {
            for b in 0..right {
                out.set((a * n * n + r) * right + b, (a * n * n + c) * right + b, v.clone());
            }
        }
    }
    out
}

/// Duality pairing matrix on degree-d words: G_1 = I and
/// G_d = [d]_Ψ · (G_{d−1} ⊗ I) with Ψ = PR of the normalized pair and
/// [d]_Ψ = Σ_{k=0}^{d−1} Ψ_{d−k} Ψ_{d−k+1} ⋯ Ψ_{d−1} (empty product = I).
///
/// The staircase terms are the minimal coset representatives of
/// S_d / S_{d−1}, so expanding the recursion yields one reduced braid word
/// per permutation: the braided symmetrizer.
pub fn pairing_matrix(pair: &MajidPair, degree: usize) -> Mat {
    assert!(degree >= 1, "pairing defined for degree ≥ 1");
    let shape = pair.r.shape();
    let n = shape.total();
    let psi = permutation_p(shape).mat().matmul(pair.r.mat());
    let mut g = Mat::identity(n);
    for d in 2..=degree {
        let total = n.pow(d as u32);
        let mut braided_int = Mat::identity(total);
        let mut partial = Mat::identity(total);
        for k in 1..d {
            partial = embed_adjacent(&psi, n, d, d - k).matmul(&partial);
            braided_int = braided_int.add(&partial);
        }
        g = braided_int.matmul(&g.kron(&Mat::identity(n)));
    }
    g
}

fn side_kernel(g: &Mat, side: Side) -> Vec<SparseVec> {
    match side {
        // vector words pair on the right: right kernel
        Side::Vector => kernel_basis(g),
        // covector words pair on the left: left kernel
        Side::Covector => kernel_basis(&g.transpose()),
    }
}

/// All degree-d placements W_i ⊗ r ⊗ W_j of the per-degree relation
/// generators (i + k + j = d over generators r of degree k).
fn ideal_placements(gens: &[Vec<SparseVec>], degree: usize, n: usize) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for (k, batch) in gens.iter().enumerate().take(degree.min(gens.len())) {
        if batch.is_empty() || k >= degree {
            continue;
        }
        let outer = degree - k;
        for i in 0..=outer {
            let j = outer - i;
            let (li, lj) = (n.pow(i as u32), n.pow(j as u32));
            for r in batch {
                for u in 0..li {
                    for w in 0..lj {
                        let mut v = SparseVec::new();
                        for (&idx, c) in r {
                            v.insert((u * n.pow(k as u32) + idx) * lj + w, c.clone());
                        }
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

fn stack_rows(rows: &[SparseVec], ncols: usize) -> Mat {
    let mut m = Mat::zeros(rows.len(), ncols);
    for (i, r) in rows.iter().enumerate() {
        for (&j, c) in r {
            m.set(i, j, c.clone());
        }
    }
    m
}

/// Exact check that every placement row lies in the pairing kernel of the
/// given side, done as one sparse product.
fn assert_ideal_in_kernel(g: &Mat, placements: &[SparseVec], side: Side, degree: usize) {
    if placements.is_empty() {
        return;
    }
    let v = stack_rows(placements, g.ncols());
    let image = match side {
        Side::Vector => v.matmul(&g.transpose()),
        Side::Covector => v.matmul(g),
    };
    assert!(
        image.is_zero(),
        "lower-degree ideal escapes the degree-{degree} pairing kernel"
    );
}

const SAMPLE_POINTS: [(i64, i64); 3] = [(7, 3), (3, 5), (11, 4)];

/// Numeric saturation certificate. The placement span gives an exact lower
/// bound on the kernel (placements are exactly annihilated; their numeric
/// rank at a sample point bounds their symbolic rank from below), and the
/// numeric rank of G bounds its symbolic rank from below. When the two
/// bounds add up to the full dimension the kernel equals the ideal span
/// exactly, so the radical is empty.
fn certified_saturated(g: &Mat, placements: &[SparseVec], total: usize) -> bool {
    for (num, den) in SAMPLE_POINTS {
        let s0 = rat(num, den);
        let Ok(gq) = g.eval_numeric(&s0) else { continue };
        let Ok(vq) = stack_rows(placements, total).eval_numeric(&s0) else { continue };
        if gq.rank() + vq.rank() == total {
            return true;
        }
    }
    false
}

/// Fresh relation generators per degree 2..=up_to: degree 2 holds the
/// side-appropriate kernel of G_2, degree k > 2 the kernel vectors of G_k
/// independent of the ideal generated below.
fn relation_generators(pair: &MajidPair, side: Side, up_to: usize) -> Vec<Vec<SparseVec>> {
    let n = pair.r.shape().total();
    let mut gens: Vec<Vec<SparseVec>> = vec![Vec::new(); up_to + 1];
    if up_to < 2 {
        return gens;
    }
    gens[2] = side_kernel(&pairing_matrix(pair, 2), side);
    for k in 3..=up_to {
        let g = pairing_matrix(pair, k);
        let total = g.nrows();
        let placements = ideal_placements(&gens, k, n);
        assert_ideal_in_kernel(&g, &placements, side, k);
        if total > 300 && certified_saturated(&g, &placements, total) {
            continue;
        }
        let mut ech = echelon_reduce(placements);
        for v in side_kernel(&g, side) {
            let rem = reduce_against(v, &ech);
            if rem.is_empty() {
                continue;
            }
            let lead = *rem.keys().next().unwrap();
            let inv = rem[&lead].inv().expect("nonzero lead");
            let mut unit = SparseVec::new();
            for (key, c) in &rem {
                unit.insert(*key, c * &inv);
            }
            gens[k].push(unit.clone());
            let pos = ech.partition_point(|e| *e.keys().next().unwrap() < lead);
            ech.insert(pos, unit);
        }
    }
    gens
}

/// Exact rank of G_d, certified without a full symbolic elimination when
/// possible: the lower-degree ideal span gives an exact lower bound on the
/// kernel, a numeric evaluation gives an exact lower bound on the rank (a
/// nonzero minor at a sample point is nonzero as a polynomial), and when
/// the bounds meet the rank is pinned. Falls back to symbolic reduction.
pub fn pairing_rank(pair: &MajidPair, degree: usize) -> usize {
    let g = pairing_matrix(pair, degree);
    let total = g.nrows();
    if total <= 300 {
        return crate::qlinalg::rank(&g);
    }
    let n = pair.r.shape().total();
    let gens = relation_generators(pair, Side::Vector, degree - 1);
    let placements = ideal_placements(&gens, degree, n);
    assert_ideal_in_kernel(&g, &placements, Side::Vector, degree);
    for (num, den) in SAMPLE_POINTS {
        let s0 = rat(num, den);
        let Ok(gq) = g.eval_numeric(&s0) else { continue };
        let Ok(vq) = stack_rows(&placements, total).eval_numeric(&s0) else { continue };
        let (rank_bound, kernel_bound) = (gq.rank(), vq.rank());
        if rank_bound + kernel_bound == total {
            return rank_bound;
        }
    }
    crate::qlinalg::rank(&g)
}

/// Basis of the degree-d radical: kernel vectors of G_d that are not
/// generated by lower-degree relations. Every lower-degree ideal placement
/// is asserted to lie in the kernel first.
pub fn radical_basis(pair: &MajidPair, degree: usize, side: Side) -> Vec<NCPolynomial> {
    assert!(degree >= 1);
    if degree == 1 {
        return Vec::new();
    }
    let n = pair.r.shape().total();
    let gens = relation_generators(pair, side, degree);
    gens[degree].iter().map(|v| vec_to_poly(v, n, degree)).collect()
}

/// Appends radical generators (or any homogeneous consequences) to the
/// algebra's relation list.
pub fn quotient(algebra: &BraidedAlgebra, extra: &[NCPolynomial]) -> Result<BraidedAlgebra> {
    for p in extra {
        if !p.is_zero() && p.homogeneous_degree().is_none() {
            return Err(QError::InvalidSpec(
                "quotient relations must be homogeneous".into(),
            ));
        }
    }
    let mut out = algebra.clone();
    out.extra_relations.extend_from_slice(extra);
    Ok(out)
}

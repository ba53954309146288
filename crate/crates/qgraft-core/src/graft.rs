//! End-to-end grafting pipeline: per-factor R-matrices, the composite
//! Majid pair, braided relations and radical quotient, graded dimensions,
//! cross-relation exponents of the new node, Cartan assembly, finite-type
//! classification, and the emitted presentation.

use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::braided::{
    pairing_rank, quotient, radical_basis, relations_from_pair, NCPolynomial, Side,
};
use crate::qlinalg::{minimal_polynomial, permutation_p};
use crate::qscalar::{q_binomial, rat, rat_int, Rat, Scalar};
use crate::rewrite::{complete, hilbert_dims, orient, MonomialOrder};
use crate::rmatrix::{
    check_frt, check_ybe, majid_pair, monomial_roots, predict_eigenvalues, standard_r,
    standard_roots, tensor_r, MajidPair, RepSpec,
};
use crate::{QError, Result};

/// What to graft: the ordered factors, the braiding eigenvalue that is
/// normalized to −1, and how far to certify the braided algebra.
#[derive(Clone, Debug)]
pub struct GraftSpec {
    pub name: String,
    pub factors: Vec<RepSpec>,
    pub eigen_to_minus_one: Scalar,
    pub max_degree: usize,
}

impl GraftSpec {
    pub fn new(
        name: &str,
        factors: Vec<RepSpec>,
        eigen_to_minus_one: Scalar,
        max_degree: usize,
    ) -> Result<GraftSpec> {
        if factors.is_empty() {
            return Err(QError::InvalidSpec("graft needs at least one factor".into()));
        }
        if max_degree < 2 {
            return Err(QError::InvalidSpec("max degree must be at least 2".into()));
        }
        let roots: Vec<Vec<Scalar>> = factors.iter().map(standard_roots).collect();
        if !predict_eigenvalues(&roots).contains(&eigen_to_minus_one) {
            return Err(QError::NotAnEigenvalue(eigen_to_minus_one.to_string()));
        }
        Ok(GraftSpec { name: name.into(), factors, eigen_to_minus_one, max_degree })
    }

    /// sl_n natural ⊗ sl_m dual, both at d = 1; grafts to A_{n+m−1}.
    pub fn type_a(n: usize, m: usize) -> Result<GraftSpec> {
        use crate::rmatrix::Module::{Dual, Natural};
        GraftSpec::new(
            "typeA",
            vec![
                RepSpec::new(n, Natural, rat_int(1))?,
                RepSpec::new(m, Dual, rat_int(1))?,
            ],
            -&Scalar::one(),
            4,
        )
    }

    /// sl_3 natural at d = 1 ⊗ sl_2 natural at d = 1/2; grafts to F_4.
    pub fn f4() -> GraftSpec {
        use crate::rmatrix::Module::Natural;
        GraftSpec::new(
            "f4",
            vec![
                RepSpec::new(3, Natural, rat_int(1)).expect("factor"),
                RepSpec::new(2, Natural, rat(1, 2)).expect("factor"),
            ],
            -&Scalar::s(),
            4,
        )
        .expect("preset")
    }

    /// Single sl_2 natural factor at d = 1; the degenerate rank-induction
    /// case, grafts to A_2.
    pub fn rank1() -> GraftSpec {
        use crate::rmatrix::Module::Natural;
        GraftSpec::new(
            "rank1",
            vec![RepSpec::new(2, Natural, rat_int(1)).expect("factor")],
            -&Scalar::q_pow(-1),
            4,
        )
        .expect("preset")
    }

    pub fn preset(name: &str, n: usize, m: usize) -> Result<GraftSpec> {
        match name {
            "typeA" => GraftSpec::type_a(n, m),
            "f4" => Ok(GraftSpec::f4()),
            "rank1" => Ok(GraftSpec::rank1()),
            other => Err(QError::InvalidSpec(format!("unknown preset `{other}`"))),
        }
    }
}

/// Exponents of the new group-like over the old Cartan generators, in
/// old-node order; composition of group-likes adds exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub exponents: Vec<Rat>,
}

impl WeightVector {
    pub fn add(&self, other: &WeightVector) -> WeightVector {
        assert_eq!(self.exponents.len(), other.exponents.len());
        WeightVector {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Placement of nodes in the assembled diagram: the first factor's nodes,
/// then the new node, then the remaining factors' nodes.
#[derive(Clone, Debug)]
struct Layout {
    old_count: usize,
    new_pos: usize,
}

impl Layout {
    fn of(spec: &GraftSpec) -> Layout {
        let old_count = spec.factors.iter().map(|f| f.lie_rank - 1).sum();
        Layout { old_count, new_pos: spec.factors[0].lie_rank - 1 }
    }

    fn total(&self) -> usize {
        self.old_count + 1
    }

    /// Global position of the j-th old node (old-node order).
    fn global(&self, j: usize) -> usize {
        if j < self.new_pos {
            j
        } else {
            j + 1
        }
    }
}

fn monomial_q_exponent(value: &Scalar, what: &str) -> Result<Rat> {
    let (e, c) = value
        .as_monomial()
        .ok_or_else(|| QError::NonMonomialScalar(format!("{what}: {value}")))?;
    if !c.abs().is_one() {
        return Err(QError::NonMonomialScalar(format!("{what}: {value}")));
    }
    Ok(rat(e, 2))
}

/// (α_new, α_new) read off the normalized R diagonal at the distinguished
/// composite index (the all-maximal tuple), as a q-exponent.
pub fn self_pairing(spec: &GraftSpec, pair: &MajidPair) -> Result<Rat> {
    debug_assert_eq!(
        pair.r.shape().dims(),
        spec.factors.iter().map(|f| f.lie_rank).collect::<Vec<_>>()
    );
    let v = pair.r.leg_dim() - 1;
    monomial_q_exponent(&pair.r.get_flat(v, v, v, v), "self pairing")
}

/// (α_new, α_j) for every old node, in old-node order, from ratios of R
/// diagonal entries at the distinguished index; dual factors pair through
/// the reversed index positions.
pub fn neighbor_pairings(spec: &GraftSpec, pair: &MajidPair) -> Result<Vec<Rat>> {
    use crate::rmatrix::Module;
    let shape = pair.r.shape().clone();
    let distinguished: Vec<usize> = spec.factors.iter().map(|f| f.lie_rank - 1).collect();
    let diag_at = |tuple: &[usize]| -> Scalar {
        let flat = shape.flatten(tuple);
        let v = shape.flatten(&distinguished);
        pair.r.get_flat(flat, v, flat, v)
    };
    let mut out = Vec::new();
    for (t, f) in spec.factors.iter().enumerate() {
        let r = f.lie_rank;
        for j in 1..r {
            // 1-based index positions whose diagonal entries are compared
            let pos = match f.module {
                Module::Natural => j,
                Module::Dual => r - j,
            };
            let mut hi = distinguished.clone();
            hi[t] = pos - 1;
            let mut lo = distinguished.clone();
            lo[t] = pos;
            let ratio = diag_at(&hi).checked_div(&diag_at(&lo))?;
            out.push(monomial_q_exponent(&ratio, &format!("factor {} node {j}", t + 1))?);
        }
    }
    Ok(out)
}

/// Exponents of the new group-like over the old Cartan generators, read
/// from the FRT diagonal at the distinguished index: −j/n on a natural
/// sl_n factor, −(m−j)/m on a dual sl_m factor.
pub fn weight_exponents(spec: &GraftSpec) -> WeightVector {
    use crate::rmatrix::Module;
    let mut exponents = Vec::new();
    for f in &spec.factors {
        let r = f.lie_rank as i64;
        for j in 1..r {
            exponents.push(match f.module {
                Module::Natural => rat(-j, r),
                Module::Dual => rat(-(r - j), r),
            });
        }
    }
    WeightVector { exponents }
}

/// The weight-side exponents t_j of E_j K_new = q^{t_j} K_new E_j, checked
/// against the R-matrix side: magnitudes must agree on every node, sign
/// disagreements are reported as warnings.
pub fn old_on_new_scalars(
    spec: &GraftSpec,
    pair: &MajidPair,
) -> Result<(Vec<Rat>, Vec<String>)> {
    let w = weight_exponents(spec);
    let ratios = neighbor_pairings(spec, pair)?;
    let mut out = Vec::new();
    let mut base = 0usize;
    for f in &spec.factors {
        let k = f.lie_rank - 1;
        for j in 0..k {
            // t_j = Σ_i c_i (α_i, α_j) over the factor's own A-chain
            let mut t = Rat::zero();
            for i in 0..k {
                let a = if i == j {
                    2
                } else if i.abs_diff(j) == 1 {
                    -1
                } else {
                    0
                };
                if a != 0 {
                    t += w.exponents[base + i].clone() * f.root_norm.clone() * rat_int(a);
                }
            }
            out.push(t);
        }
        base += k;
    }
    let mut warnings = Vec::new();
    for (j, (tw, tr)) in out.iter().zip(&ratios).enumerate() {
        if tw.abs() != tr.abs() {
            return Err(QError::SymmetryViolation(format!(
                "old node {}: weight side q^({tw}) vs ratio side q^({tr})",
                j + 1
            )));
        }
        if tw != tr {
            warnings.push(format!(
                "old node {}: weight side q^({tw}) and ratio side q^({tr}) differ in sign",
                j + 1
            ));
        }
    }
    Ok((out, warnings))
}

/// Assembled pairing data of the grafted diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    /// (α_i, α_j) in global node order.
    pub sym: Vec<Vec<Rat>>,
    /// a_ij = 2(α_i, α_j)/(α_i, α_i).
    pub cartan: Vec<Vec<i64>>,
    /// Finite-type label, or "unrecognized".
    pub classification: String,
}

/// Builds the global symmetric pairing matrix from the factor Cartan data
/// plus the new node's row, converts to Cartan integers, and matches the
/// result against the finite-type catalog up to relabeling.
pub fn cartan_assemble(spec: &GraftSpec, t_self: &Rat, new_old: &[Rat]) -> Result<CartanData> {
    let lay = Layout::of(spec);
    assert_eq!(new_old.len(), lay.old_count);
    let n = lay.total();
    let mut sym = vec![vec![Rat::zero(); n]; n];
    let mut base = 0usize;
    for f in &spec.factors {
        let k = f.lie_rank - 1;
        for i in 0..k {
            for j in 0..k {
                let v = if i == j {
                    f.root_norm.clone() * rat_int(2)
                } else if i.abs_diff(j) == 1 {
                    -f.root_norm.clone()
                } else {
                    continue;
                };
                sym[lay.global(base + i)][lay.global(base + j)] = v;
            }
        }
        base += k;
    }
    sym[lay.new_pos][lay.new_pos] = t_self.clone();
    for (j, v) in new_old.iter().enumerate() {
        sym[lay.new_pos][lay.global(j)] = v.clone();
        sym[lay.global(j)][lay.new_pos] = v.clone();
    }

    let mut cartan = vec![vec![0i64; n]; n];
    for i in 0..n {
        if sym[i][i].is_zero() {
            return Err(QError::NotSymmetrizable(format!("node {} has zero norm", i + 1)));
        }
        for j in 0..n {
            let a = sym[i][j].clone() * rat_int(2) / sym[i][i].clone();
            if !a.is_integer() {
                return Err(QError::NotSymmetrizable(format!(
                    "2(α_{}, α_{})/(α_{}, α_{}) = {a} is not an integer",
                    i + 1,
                    j + 1,
                    i + 1,
                    i + 1
                )));
            }
            cartan[i][j] = a
                .to_integer()
                .to_i64()
                .ok_or_else(|| QError::NotSymmetrizable("entry out of range".into()))?;
        }
    }
    let classification = classify_cartan(&cartan);
    Ok(CartanData { sym, cartan, classification })
}

fn simply_laced(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
    }
    for &(u, v) in edges {
        a[u][v] = -1;
        a[v][u] = -1;
    }
    a
}

fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()
}

/// Finite-type Cartan matrices of the given rank, in match priority order.
fn catalog_for_rank(n: usize) -> Vec<(String, Vec<Vec<i64>>)> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    out.push((format!("A_{n}"), simply_laced(n, &path_edges(n))));
    if n >= 2 {
        // short last root: a_{n,n-1} = -2
        let mut b = simply_laced(n, &path_edges(n));
        b[n - 1][n - 2] = -2;
        out.push((format!("B_{n}"), b));
    }
    if n >= 3 {
        let mut c = simply_laced(n, &path_edges(n));
        c[n - 2][n - 1] = -2;
        out.push((format!("C_{n}"), c));
    }
    if n >= 4 {
        let mut edges = path_edges(n - 1);
        edges.push((n - 3, n - 1));
        out.push((format!("D_{n}"), simply_laced(n, &edges)));
    }
    if (6..=8).contains(&n) {
        let mut edges = vec![(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
        for i in 5..n - 1 {
            edges.push((i, i + 1));
        }
        out.push((format!("E_{n}"), simply_laced(n, &edges)));
    }
    if n == 4 {
        let mut f = simply_laced(4, &path_edges(4));
        f[2][1] = -2;
        out.push(("F_4".into(), f));
    }
    if n == 2 {
        out.push(("G_2".into(), vec![vec![2, -1], vec![-3, 2]]));
    }
    out
}

/// Whether two Cartan matrices present the same diagram up to relabeling.
pub fn diagram_isomorphic(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let sig = |m: &[Vec<i64>], i: usize| -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = (0..n)
            .filter(|&j| j != i && (m[i][j] != 0 || m[j][i] != 0))
            .map(|j| (m[i][j], m[j][i]))
            .collect();
        v.sort_unstable();
        v
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    {
        let mut xa = sa.clone();
        let mut xb = sb.clone();
        xa.sort();
        xb.sort();
        if xa != xb {
            return false;
        }
    }
    fn extend(
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        a: &[Vec<i64>],
        b: &[Vec<i64>],
        sa: &[Vec<(i64, i64)>],
        sb: &[Vec<(i64, i64)>],
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || sa[cand] != sb[i] {
                continue;
            }
            let ok = (0..i)
                .all(|j| a[cand][perm[j]] == b[i][j] && a[perm[j]][cand] == b[j][i]);
            if !ok {
                continue;
            }
            perm.push(cand);
            used[cand] = true;
            if extend(i + 1, perm, used, a, b, sa, sb) {
                return true;
            }
            perm.pop();
            used[cand] = false;
        }
        false
    }
    extend(0, &mut Vec::new(), &mut vec![false; n], a, b, &sa, &sb)
}

/// Finite-type label of a Cartan matrix up to relabeling, or "unrecognized".
pub fn classify_cartan(cartan: &[Vec<i64>]) -> String {
    for (label, m) in catalog_for_rank(cartan.len()) {
        if diagram_isomorphic(cartan, &m) {
            return label;
        }
    }
    "unrecognized".into()
}

/// Everything the pipeline established, plus the emitted presentation.
#[derive(Clone, Debug)]
pub struct GraftReport {
    pub preset: String,
    pub dims: Vec<usize>,
    pub minpoly_roots: Vec<Scalar>,
    pub ybe: bool,
    pub majid: bool,
    pub frt_const: Scalar,
    pub cartan: Vec<Vec<i64>>,
    pub sym_pairings: Vec<Vec<Rat>>,
    pub classification: String,
    pub hilbert: Vec<usize>,
    pub warnings: Vec<String>,
    pub lambda: Scalar,
    pub self_exponent: Rat,
    pub neighbor_exponents: Vec<Rat>,
    pub weight: WeightVector,
    /// Global 0-based position of the new node.
    pub new_node: usize,
    pub presentation: String,
}

impl GraftReport {
    /// The report file: keys are emitted in sorted order, so the byte
    /// output is deterministic.
    pub fn to_json(&self) -> Value {
        json!({
            "preset": self.preset,
            "dims": self.dims,
            "minpoly_roots": self.minpoly_roots.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "checks": {
                "ybe": self.ybe,
                "majid": self.majid,
                "frt_const": self.frt_const.to_string(),
            },
            "cartan": self.cartan,
            "sym_pairings": self
                .sym_pairings
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "classification": self.classification,
            "hilbert": self.hilbert,
            "warnings": self.warnings,
        })
    }
}

/// The presentation text and the report object.
pub fn emit_presentation(report: &GraftReport) -> (String, Value) {
    (report.presentation.clone(), report.to_json())
}

fn q_pow_str(e: &Rat) -> String {
    if e.is_zero() {
        "1".into()
    } else if e.is_one() {
        "q".into()
    } else if e.is_integer() {
        format!("q^{}", e.numer())
    } else {
        format!("q^({e})")
    }
}

/// Cross-relation exponents as printed in the worked construction this
/// engine follows, kept for erratum detection; the last F_4 entry is
/// printed there with the opposite sign to what the ratio formula gives.
fn reference_cross_exponents(name: &str) -> Option<Vec<Rat>> {
    (name == "f4").then(|| vec![rat_int(0), rat_int(-1), rat(1, 2)])
}

fn render_presentation(
    spec: &GraftSpec,
    lay: &Layout,
    cd: &CartanData,
    weight: &WeightVector,
    lambda: &Scalar,
    t_self: &Rat,
    hilbert: &[usize],
    radical_degrees: &[usize],
) -> String {
    use crate::rmatrix::Module;
    let n = lay.total();
    let new = lay.new_pos + 1;
    let v_tuple = spec
        .factors
        .iter()
        .map(|f| f.lie_rank.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let d_new = t_self.clone() / rat_int(2);
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, "grafted quantum group presentation");
    let _ = writeln!(w, "classification: {}", cd.classification);
    let _ = writeln!(w, "lambda = {lambda}");
    let _ = writeln!(w, "q_* = {}", q_pow_str(&d_new));
    let _ = writeln!(w);
    let _ = writeln!(w, "nodes:");
    let mut old = 0usize;
    for g in 0..n {
        if g == lay.new_pos {
            let _ = writeln!(w, "  {new}: new node from composite index ({v_tuple}), d = {d_new}");
            continue;
        }
        // recover (factor, local node) of the old node at global position g
        let mut j = old;
        let mut factor = 0;
        while j >= spec.factors[factor].lie_rank - 1 {
            j -= spec.factors[factor].lie_rank - 1;
            factor += 1;
        }
        let f = &spec.factors[factor];
        let kind = match f.module {
            Module::Natural => "natural",
            Module::Dual => "dual",
        };
        let _ = writeln!(
            w,
            "  {}: factor {} (sl_{}, {kind}, d = {}), node {}",
            g + 1,
            factor + 1,
            f.lie_rank,
            f.root_norm,
            j + 1
        );
        old += 1;
    }
    let _ = writeln!(w);
    let _ = writeln!(w, "symmetric pairings (alpha_i, alpha_j):");
    for row in &cd.sym {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(w, "  [{}]", cells.join(", "));
    }
    let _ = writeln!(w, "cartan matrix:");
    for row in &cd.cartan {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(w, "  [{}]", cells.join(", "));
    }
    let _ = writeln!(w);
    let _ = writeln!(w, "group-like of the new node:");
    let parts: Vec<String> = weight
        .exponents
        .iter()
        .enumerate()
        .map(|(j, c)| format!("K{}^({c})", lay.global(j) + 1))
        .collect();
    let _ = writeln!(w, "  K{new} = {}*c^-1", parts.join("*"));
    let _ = writeln!(w);
    let _ = writeln!(w, "identification:");
    let _ = writeln!(w, "  e^({v_tuple}) -> E{new}");
    let _ = writeln!(w, "  f_({v_tuple}) -> F{new}");
    let _ = writeln!(w, "  (m^+)^({v_tuple})_({v_tuple})*c^-1 -> K{new}");
    let _ = writeln!(w);
    let _ = writeln!(w, "k-commutation, E_i K_j = q^((alpha_i, alpha_j)) K_j E_i:");
    for i in 0..n {
        for j in 0..n {
            let e = &cd.sym[i][j];
            if e.is_zero() {
                let _ = writeln!(w, "  E{} K{} = K{} E{}", i + 1, j + 1, j + 1, i + 1);
            } else {
                let _ = writeln!(
                    w,
                    "  E{} K{} = {} K{} E{}",
                    i + 1,
                    j + 1,
                    q_pow_str(e),
                    j + 1,
                    i + 1
                );
            }
        }
    }
    let _ = writeln!(w);
    let _ = writeln!(w, "cartan pairing of E and F:");
    let _ = writeln!(w, "  [Ei, Fj] = delta(i,j) (Ki - Ki^-1)/(q_i - q_i^-1)");
    let _ = writeln!(
        w,
        "  [E{new}, Fk] = delta({new},k) (K{new} - K{new}^-1)/({} - {})",
        q_pow_str(&d_new),
        q_pow_str(&(-d_new.clone()))
    );
    let _ = writeln!(w);
    let _ = writeln!(w, "serre relations:");
    for i in 0..n {
        for j in 0..n {
            if i == j || cd.cartan[i][j] >= 0 {
                continue;
            }
            let order = (1 - cd.cartan[i][j]) as u32;
            // q_i = q^{(alpha_i, alpha_i)/2} = s^{(alpha_i, alpha_i)}
            let norm = &cd.sym[i][i];
            assert!(norm.is_integer(), "serre base needs an integer norm");
            let base = Scalar::s_pow(norm.to_integer().to_i64().expect("norm fits"));
            let mut line = String::new();
            for k in 0..=order {
                let coeff = q_binomial(order, k, &base).expect("binomial");
                let mut mono: Vec<String> = Vec::new();
                if order - k > 0 {
                    mono.push(if order - k > 1 {
                        format!("E{}^{}", i + 1, order - k)
                    } else {
                        format!("E{}", i + 1)
                    });
                }
                mono.push(format!("E{}", j + 1));
                if k > 0 {
                    mono.push(if k > 1 {
                        format!("E{}^{}", i + 1, k)
                    } else {
                        format!("E{}", i + 1)
                    });
                }
                let mono = mono.join("*");
                if k == 0 {
                    line.push_str(&mono);
                } else {
                    line.push_str(if k % 2 == 1 { " - " } else { " + " });
                    if !coeff.is_one() {
                        line.push_str(&format!("({coeff})*"));
                    }
                    line.push_str(&mono);
                }
            }
            let _ = writeln!(w, "  ({},{}): {line} = 0", i + 1, j + 1);
        }
    }
    let mut commuting = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if cd.cartan[i][j] == 0 {
                commuting.push(format!("E{} E{} = E{} E{}", i + 1, j + 1, j + 1, i + 1));
            }
        }
    }
    if !commuting.is_empty() {
        let _ = writeln!(w, "commuting pairs:");
        for c in commuting {
            let _ = writeln!(w, "  {c}");
        }
    }
    let _ = writeln!(w);
    let dims: Vec<String> = hilbert.iter().map(ToString::to_string).collect();
    let _ = writeln!(w, "graded dimensions: {}", dims.join(", "));
    if !radical_degrees.is_empty() {
        let degs: Vec<String> = radical_degrees.iter().map(ToString::to_string).collect();
        let _ = writeln!(w, "radical quotient applied in degree(s): {}", degs.join(", "));
    }
    s
}

/// Runs the whole graft: factor R-matrices, tensor composite, Majid pair,
/// braided relations with radical quotient, graded dimensions checked two
/// independent ways, cross-relation exponents, Cartan assembly and
/// classification, and the emitted presentation.
pub fn run_pipeline(spec: &GraftSpec) -> Result<GraftReport> {
    let factor_rs: Vec<_> = spec.factors.iter().map(standard_r).collect();
    let r_big = tensor_r(&factor_rs).map_err(|e| e.at_stage("tensor"))?;
    let ybe = check_ybe(&r_big);

    // spectrum of the unnormalized braiding: must be exactly the products
    // of the factor braiding roots
    let pr_big = permutation_p(r_big.shape()).matmul(&r_big);
    let predicted =
        predict_eigenvalues(&spec.factors.iter().map(standard_roots).collect::<Vec<_>>());
    let minpoly = minimal_polynomial(pr_big.mat(), Some(predicted.as_slice()));
    let mut roots = monomial_roots(&minpoly).ok_or_else(|| {
        QError::NonMonomialScalar("braiding minimal polynomial root".into()).at_stage("minpoly")
    })?;
    roots.sort_by(|a, b| a.sort_cmp(b));
    {
        let mut expect = predicted.clone();
        expect.sort_by(|a, b| a.sort_cmp(b));
        if roots != expect {
            return Err(QError::InvalidSpec(
                "braiding spectrum differs from factor root products".into(),
            )
            .at_stage("minpoly"));
        }
    }

    let pair = majid_pair(&r_big, &spec.eigen_to_minus_one).map_err(|e| e.at_stage("majid"))?;
    let frt_const = check_frt(&pair.r).map_err(|e| e.at_stage("frt"))?;

    let alg = relations_from_pair(&pair, Side::Vector);
    let mut extras: Vec<NCPolynomial> = Vec::new();
    let mut radical_degrees = Vec::new();
    for d in 3..=spec.max_degree {
        let rad = radical_basis(&pair, d, Side::Vector);
        if !rad.is_empty() {
            radical_degrees.push(d);
            extras.extend(rad);
        }
    }
    let alg = if extras.is_empty() {
        alg
    } else {
        quotient(&alg, &extras).map_err(|e| e.at_stage("radical quotient"))?
    };
    let mut relations = alg.quad_relations.clone();
    relations.extend(alg.extra_relations.clone());
    let sys = orient(
        &relations,
        MonomialOrder::total(alg.num_generators()),
        spec.max_degree,
    )
    .map_err(|e| e.at_stage("orient"))?;
    let done = complete(&sys).map_err(|e| e.at_stage("complete"))?;
    let hilbert = hilbert_dims(&done, spec.max_degree);

    // the same graded dimensions must come out of the duality pairing
    if hilbert[0] != 1 || hilbert[1] != alg.num_generators() {
        return Err(
            QError::InvalidSpec("graded dimensions are wrong in low degree".into())
                .at_stage("hilbert"),
        );
    }
    for d in 2..=spec.max_degree {
        let rank = pairing_rank(&pair, d);
        if hilbert[d] != rank {
            return Err(QError::InvalidSpec(format!(
                "degree {d}: {} normal words vs pairing rank {rank}",
                hilbert[d]
            ))
            .at_stage("hilbert"));
        }
    }

    let lay = Layout::of(spec);
    let t_self = self_pairing(spec, &pair).map_err(|e| e.at_stage("self pairing"))?;
    let neighbor = neighbor_pairings(spec, &pair).map_err(|e| e.at_stage("neighbor pairing"))?;
    let (_weights_side, mut warnings) =
        old_on_new_scalars(spec, &pair).map_err(|e| e.at_stage("weight pairing"))?;
    if let Some(reference) = reference_cross_exponents(&spec.name) {
        for (j, (computed, printed)) in neighbor.iter().zip(&reference).enumerate() {
            if computed != printed {
                let node = lay.global(j) + 1;
                if computed.abs() == printed.abs() {
                    warnings.push(format!(
                        "node {node} cross exponent: computed q^({computed}) but the reference \
                         prints q^({printed}); suspected sign misprint, magnitude agrees and the \
                         classification is unaffected"
                    ));
                } else {
                    warnings.push(format!(
                        "node {node} cross exponent: computed q^({computed}) differs from the \
                         reference q^({printed})"
                    ));
                }
            }
        }
    }
    let cd = cartan_assemble(spec, &t_self, &neighbor).map_err(|e| e.at_stage("cartan"))?;
    let weight = weight_exponents(spec);
    let presentation = render_presentation(
        spec,
        &lay,
        &cd,
        &weight,
        &pair.lambda,
        &t_self,
        &hilbert,
        &radical_degrees,
    );

    Ok(GraftReport {
        preset: spec.name.clone(),
        dims: spec.factors.iter().map(|f| f.lie_rank).collect(),
        minpoly_roots: roots,
        ybe,
        majid: true,
        frt_const,
        cartan: cd.cartan,
        sym_pairings: cd.sym,
        classification: cd.classification,
        hilbert,
        warnings,
        lambda: pair.lambda.clone(),
        self_exponent: t_self,
        neighbor_exponents: neighbor,
        weight,
        new_node: lay.new_pos,
        presentation,
    })
}

//! Python bindings for the grafting engine.
//!
//! Exposes the exact scalar field, composite R-matrices, braiding pairs
//! and the grafting pipeline as a compiled module `qgraft._native`; the
//! `qgraft` package re-exports everything from here.

use pyo3::exceptions::{PyIndexError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use qgraft_core::braided::{self, NCPolynomial, Side};
use qgraft_core::graft::{run_pipeline, GraftSpec};
use qgraft_core::qlinalg::CompositeMatrix;
use qgraft_core::qscalar::{parse_scalar, Rat, Scalar as CoreScalar};
use qgraft_core::rewrite::{complete, hilbert_dims, normal_form, orient, parse_dsl};
use qgraft_core::rmatrix::{self, MajidPair, Module, RepSpec};

fn value_err(e: qgraft_core::QError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(text: &str) -> PyResult<Rat> {
    text.trim()
        .parse::<Rat>()
        .map_err(|e| PyValueError::new_err(format!("invalid rational `{text}`: {e}")))
}

fn parse_module(text: &str) -> PyResult<Module> {
    match text {
        "natural" => Ok(Module::Natural),
        "dual" => Ok(Module::Dual),
        other => Err(PyValueError::new_err(format!(
            "module must be `natural` or `dual`, got `{other}`"
        ))),
    }
}

fn parse_side(text: &str) -> PyResult<Side> {
    match text {
        "vector" => Ok(Side::Vector),
        "covector" => Ok(Side::Covector),
        other => Err(PyValueError::new_err(format!(
            "side must be `vector` or `covector`, got `{other}`"
        ))),
    }
}

/// Exact scalar in the field Q(s) with s^2 = q.
#[pyclass(name = "Scalar", module = "qgraft", skip_from_py_object)]
#[derive(Clone)]
struct PyScalar {
    inner: CoreScalar,
}

#[pymethods]
impl PyScalar {
    /// Parse the same syntax the engine prints: `q^2 + 1`, `-q^(1/2)`, `2/3`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyScalar { inner: parse_scalar(text).map_err(value_err)? })
    }

    /// q^k as a scalar.
    #[staticmethod]
    fn q_pow(k: i64) -> Self {
        PyScalar { inner: CoreScalar::q_pow(k) }
    }

    /// s^k = q^(k/2) as a scalar.
    #[staticmethod]
    fn s_pow(k: i64) -> Self {
        PyScalar { inner: CoreScalar::s_pow(k) }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_one(&self) -> bool {
        self.inner.is_one()
    }

    /// Evaluate at a rational value of s, e.g. `evaluate("3/7")` -> `"9/49 + ..."`.
    fn evaluate(&self, s_value: &str) -> PyResult<String> {
        let point = parse_rat(s_value)?;
        let v = self.inner.eval_numeric(&point).map_err(value_err)?;
        Ok(v.to_string())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar('{}')", self.inner)
    }

    fn __add__(&self, other: &Self) -> Self {
        PyScalar { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyScalar { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyScalar { inner: &self.inner * &other.inner }
    }

    fn __neg__(&self) -> Self {
        PyScalar { inner: -&self.inner }
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        match self.inner.checked_div(&other.inner) {
            Ok(v) => Ok(PyScalar { inner: v }),
            Err(qgraft_core::QError::DivisionByZero) => {
                Err(PyZeroDivisionError::new_err("division by zero scalar"))
            }
            Err(e) => Err(value_err(e)),
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Square matrix over Q(s) acting on a pair of composite tensor legs.
#[pyclass(name = "Matrix", module = "qgraft", from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: CompositeMatrix,
}

#[pymethods]
impl PyMatrix {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))?;
        Ok(PyMatrix { inner: CompositeMatrix::from_json(&v).map_err(value_err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    /// Dimensions of each tensor factor of one leg.
    fn dims(&self) -> Vec<usize> {
        self.inner.shape().dims().to_vec()
    }

    /// Flat dimension of one leg; the matrix itself is leg^2 x leg^2.
    fn leg_dim(&self) -> usize {
        self.inner.leg_dim()
    }

    fn nrows(&self) -> usize {
        self.inner.mat().nrows()
    }

    /// Entry R^{ij}_{kl} by flat leg indices.
    fn get(&self, i: usize, j: usize, k: usize, l: usize) -> PyResult<PyScalar> {
        let d = self.inner.leg_dim();
        if i >= d || j >= d || k >= d || l >= d {
            return Err(PyIndexError::new_err(format!("leg index out of range 0..{d}")));
        }
        Ok(PyScalar { inner: self.inner.get_flat(i, j, k, l) })
    }

    fn matmul(&self, other: &Self) -> PyResult<Self> {
        if self.inner.leg_dim() != other.inner.leg_dim() {
            return Err(PyValueError::new_err("leg dimensions differ"));
        }
        Ok(PyMatrix { inner: self.inner.matmul(&other.inner) })
    }

    fn add(&self, other: &Self) -> PyResult<Self> {
        if self.inner.leg_dim() != other.inner.leg_dim() {
            return Err(PyValueError::new_err("leg dimensions differ"));
        }
        Ok(PyMatrix { inner: self.inner.add(&other.inner) })
    }

    fn sub(&self, other: &Self) -> PyResult<Self> {
        if self.inner.leg_dim() != other.inner.leg_dim() {
            return Err(PyValueError::new_err("leg dimensions differ"));
        }
        Ok(PyMatrix { inner: self.inner.sub(&other.inner) })
    }

    fn scale(&self, c: &PyScalar) -> Self {
        PyMatrix { inner: self.inner.scale(&c.inner) }
    }

    fn invert(&self) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.invert().map_err(value_err)? })
    }

    fn __matmul__(&self, other: &Self) -> PyResult<Self> {
        self.matmul(other)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.add(other)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.sub(other)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let n = self.inner.mat().nrows();
        format!("Matrix({n}x{n}, legs {:?})", self.inner.shape().dims())
    }
}

/// Braiding pair (R, R') with its normalization and spectrum.
#[pyclass(name = "Pair", module = "qgraft", skip_from_py_object)]
#[derive(Clone)]
struct PyPair {
    inner: MajidPair,
}

#[pymethods]
impl PyPair {
    #[getter]
    fn r(&self) -> PyMatrix {
        PyMatrix { inner: self.inner.r.clone() }
    }

    #[getter]
    fn rprime(&self) -> PyMatrix {
        PyMatrix { inner: self.inner.rprime.clone() }
    }

    /// Normalization lambda; PR/lambda has the stored eigenvalues.
    #[getter]
    fn lam(&self) -> PyScalar {
        PyScalar { inner: self.inner.lambda.clone() }
    }

    /// Eigenvalues of the normalized braiding PR/lambda.
    #[getter]
    fn eigenvalues(&self) -> Vec<PyScalar> {
        self.inner.eigenvalues.iter().map(|e| PyScalar { inner: e.clone() }).collect()
    }

    /// Eigenvalues of PR itself (normalized spectrum times lambda).
    fn raw_eigenvalues(&self) -> Vec<PyScalar> {
        self.inner
            .eigenvalues
            .iter()
            .map(|e| PyScalar { inner: e * &self.inner.lambda })
            .collect()
    }

    fn __repr__(&self) -> String {
        let spectrum: Vec<String> =
            self.inner.eigenvalues.iter().map(|e| e.to_string()).collect();
        format!("Pair(lambda={}, eigenvalues=[{}])", self.inner.lambda, spectrum.join(", "))
    }
}

/// Standard R-matrix of the rank-`rank` natural or dual module.
#[pyfunction]
#[pyo3(signature = (rank, module="natural", norm="1"))]
fn standard_r(rank: usize, module: &str, norm: &str) -> PyResult<PyMatrix> {
    let spec =
        RepSpec::new(rank, parse_module(module)?, parse_rat(norm)?).map_err(value_err)?;
    Ok(PyMatrix { inner: rmatrix::standard_r(&spec) })
}

/// Interleaved tensor R-matrix of several factors.
#[pyfunction]
fn tensor_r(factors: Vec<PyMatrix>) -> PyResult<PyMatrix> {
    let mats: Vec<CompositeMatrix> = factors.into_iter().map(|f| f.inner).collect();
    Ok(PyMatrix { inner: rmatrix::tensor_r(&mats).map_err(value_err)? })
}

/// Quantum Yang-Baxter equation R12 R13 R23 = R23 R13 R12, checked exactly.
#[pyfunction]
fn check_ybe(r: &PyMatrix) -> bool {
    rmatrix::check_ybe(&r.inner)
}

/// The constant c in (R^{-1})^{t1} P (R^{t2})^{-1} P K0 = c K0.
#[pyfunction]
fn frt_constant(r: &PyMatrix) -> PyResult<PyScalar> {
    Ok(PyScalar { inner: rmatrix::check_frt(&r.inner).map_err(value_err)? })
}

/// Build the pair (R, R') from R, sending the chosen PR-eigenvalue to -1.
#[pyfunction]
fn pair(r: &PyMatrix, eigen_to_minus_one: &str) -> PyResult<PyPair> {
    let eigen = parse_scalar(eigen_to_minus_one).map_err(value_err)?;
    Ok(PyPair { inner: rmatrix::majid_pair(&r.inner, &eigen).map_err(value_err)? })
}

/// Rank of the degree-`degree` duality pairing matrix.
#[pyfunction]
fn pairing_rank(pair: &PyPair, degree: usize) -> usize {
    braided::pairing_rank(&pair.inner, degree)
}

/// Quadratic relations of the braided vector or covector algebra, rendered.
#[pyfunction]
#[pyo3(signature = (pair, side="vector"))]
fn quadratic_relations(pair: &PyPair, side: &str) -> PyResult<Vec<String>> {
    let alg = braided::relations_from_pair(&pair.inner, parse_side(side)?);
    Ok(alg.quad_relations.iter().map(|p| alg.format_poly(p)).collect())
}

/// Dimension of the pairing radical in degree `degree` that is new, i.e.
/// not generated by the radical in lower degrees.
#[pyfunction]
#[pyo3(signature = (pair, degree, side="vector"))]
fn radical_dimension(pair: &PyPair, degree: usize, side: &str) -> PyResult<usize> {
    Ok(braided::radical_basis(&pair.inner, degree, parse_side(side)?).len())
}

fn completed_system(
    dsl: &str,
    max_degree: usize,
) -> PyResult<(Vec<String>, qgraft_core::rewrite::RewriteSystem)> {
    let parsed = parse_dsl(dsl).map_err(value_err)?;
    let sys = orient(&parsed.relations, parsed.order, max_degree).map_err(value_err)?;
    let done = complete(&sys).map_err(value_err)?;
    Ok((parsed.generators, done))
}

/// Dimensions of the degree-0..max_degree graded pieces of the algebra
/// presented by a relation file, after completing its rewrite system.
#[pyfunction]
fn hilbert_series(dsl: &str, max_degree: usize) -> PyResult<Vec<usize>> {
    let (_, done) = completed_system(dsl, max_degree)?;
    Ok(hilbert_dims(&done, max_degree))
}

/// Normal form of a `*`-separated word, as (coefficient, word) pairs.
#[pyfunction]
fn reduce_word(
    dsl: &str,
    word: &str,
    max_degree: usize,
) -> PyResult<Vec<(String, Vec<String>)>> {
    let (generators, done) = completed_system(dsl, max_degree)?;
    let mut letters = Vec::new();
    for name in word.split('*') {
        let name = name.trim();
        match generators.iter().position(|g| g == name) {
            Some(i) => letters.push(i as u16),
            None => {
                return Err(PyValueError::new_err(format!("unknown generator `{name}`")))
            }
        }
    }
    let nf = normal_form(&done, &NCPolynomial::from_term(letters, CoreScalar::one()));
    Ok(nf
        .terms()
        .map(|(w, c)| {
            let names = w.iter().map(|&g| generators[g as usize].clone()).collect();
            (c.to_string(), names)
        })
        .collect())
}

/// Run the grafting pipeline for a preset (`type-a`, `f4`, `rank1`) and
/// return the full report as a JSON string with sorted keys.
#[pyfunction]
#[pyo3(signature = (preset, n=2, m=2))]
fn graft_report(preset: &str, n: usize, m: usize) -> PyResult<String> {
    let spec = GraftSpec::preset(preset, n, m).map_err(value_err)?;
    let report = run_pipeline(&spec).map_err(value_err)?;
    Ok(report.to_json().to_string())
}

#[pymodule]
fn _native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyPair>()?;
    m.add_function(wrap_pyfunction!(standard_r, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_r, m)?)?;
    m.add_function(wrap_pyfunction!(check_ybe, m)?)?;
    m.add_function(wrap_pyfunction!(frt_constant, m)?)?;
    m.add_function(wrap_pyfunction!(pair, m)?)?;
    m.add_function(wrap_pyfunction!(pairing_rank, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_relations, m)?)?;
    m.add_function(wrap_pyfunction!(radical_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_series, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_word, m)?)?;
    m.add_function(wrap_pyfunction!(graft_report, m)?)?;
    Ok(())
}

//! Python bindings. Slots and twists are numbered from 0, as in the Rust API.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use cyclovhs::arith::rational::{self, Rational};
use cyclovhs::arith::{CycMatrix as CoreMatrix, CyclotomicNumber as CoreNumber};
use cyclovhs::classify::{self, PureVhsResult as CoreResult};
use cyclovhs::cover::{CoverFamily as CoreFamily, Partition, QuotientFamily};
use cyclovhs::cy::{self, FixedLocusProfile, NikulinTriple, VhsExpression};
use cyclovhs::monodromy::{self, DehnTwist, SummandKind, TwistOrder};
use cyclovhs::tables;
use num_traits::ToPrimitive;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    cyclovhs,
    CycloVhsError,
    PyValueError,
    "Invalid input to a cyclovhs operation."
);

fn to_py(e: cyclovhs::Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        CycloVhsError::new_err(e.to_string())
    }
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let numer = q
        .numer()
        .to_i64()
        .ok_or_else(|| PyValueError::new_err("numerator overflows i64"))?;
    let denom = q
        .denom()
        .to_i64()
        .ok_or_else(|| PyValueError::new_err("denominator overflows i64"))?;
    py.import("fractions")?.getattr("Fraction")?.call1((numer, denom))
}

/// Accepts anything whose `str()` is `p/q` or an integer, such as `Fraction` or `int`.
fn rationals(values: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<Rational>> {
    values
        .iter()
        .map(|v| rational::parse(&v.str()?.to_cow()?).map_err(to_py))
        .collect()
}

/// A family of cyclic covers `y^m = prod (x - a_k)^{d_k}`.
#[pyclass(name = "CoverFamily", module = "cyclovhs", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyCoverFamily {
    inner: CoreFamily,
}

#[pymethods]
impl PyCoverFamily {
    #[new]
    fn new(degree: u64, indices: Vec<u64>) -> PyResult<Self> {
        Ok(Self {
            inner: CoreFamily::new(degree, indices).map_err(to_py)?,
        })
    }

    /// Parses the literal `m:d1,...,dN`.
    #[staticmethod]
    fn parse(literal: &str) -> PyResult<Self> {
        Ok(Self {
            inner: literal.parse().map_err(to_py)?,
        })
    }

    #[getter]
    fn degree(&self) -> u64 {
        self.inner.degree()
    }

    #[getter]
    fn indices(&self) -> Vec<u64> {
        self.inner.indices().to_vec()
    }

    fn local_data<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner.local_data().iter().map(|q| fraction(py, q)).collect()
    }

    fn genus(&self) -> u64 {
        self.inner.genus()
    }

    fn riemann_hurwitz_genus(&self) -> u64 {
        cyclovhs::cover::riemann_hurwitz_genus(&self.inner)
    }

    /// `(p, q)` of the character-`j` eigenspace.
    fn eigenspace_type(&self, j: u64) -> PyResult<(u64, u64)> {
        Ok(self.inner.eigenspace_profile(j).map_err(to_py)?.hodge_type())
    }

    /// Dict with `character`, `support`, `local_data` and `type`.
    fn eigenspace_profile<'py>(&self, py: Python<'py>, j: u64) -> PyResult<Bound<'py, PyDict>> {
        let p = self.inner.eigenspace_profile(j).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("character", p.character)?;
        d.set_item("support", p.support.clone())?;
        let data: PyResult<Vec<_>> = p.local_data.iter().map(|q| fraction(py, q)).collect();
        d.set_item("local_data", data?)?;
        d.set_item("type", p.hodge_type())?;
        Ok(d)
    }

    fn canonical_form(&self) -> Self {
        Self {
            inner: self.inner.canonical_form(),
        }
    }

    fn is_equivalent(&self, other: &Self) -> bool {
        self.inner.is_equivalent(&other.inner)
    }

    /// Quotient by the subgroup of order `r`; `None` when at most three points survive.
    fn quotient_family(&self, r: u64) -> PyResult<Option<Self>> {
        Ok(match self.inner.quotient_family(r).map_err(to_py)? {
            QuotientFamily::Family(f) => Some(Self { inner: f }),
            QuotientFamily::Degenerate { .. } => None,
        })
    }

    /// Collides the slots of each block into one branch point.
    fn collide(&self, blocks: Vec<Vec<usize>>) -> PyResult<Self> {
        let partition = Partition::new(self.inner.len(), blocks).map_err(to_py)?;
        Ok(Self {
            inner: self.inner.collide(&partition).map_err(to_py)?,
        })
    }

    fn has_fermat_cm_fiber(&self) -> bool {
        self.inner.has_fermat_cm_fiber()
    }

    fn classify(&self) -> PyResult<PyPureVhsResult> {
        Ok(PyPureVhsResult {
            inner: classify::classify_pure(&self.inner).map_err(to_py)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CoverFamily.parse('{}')", self.inner)
    }
}

/// Outcome of the pure `(1,n)` classification.
#[pyclass(name = "PureVhsResult", module = "cyclovhs", frozen)]
struct PyPureVhsResult {
    inner: CoreResult,
}

#[pymethods]
impl PyPureVhsResult {
    /// `"not-pure"`, `"primitive"` or `"derived"`.
    #[getter]
    fn tag(&self) -> &'static str {
        self.inner.tag()
    }

    #[getter]
    fn j0(&self) -> Option<u64> {
        self.inner.distinguished_character()
    }

    #[getter]
    fn r0(&self) -> Option<u64> {
        match &self.inner {
            CoreResult::Derived { r0, .. } => Some(*r0),
            _ => None,
        }
    }

    #[getter]
    fn quotient(&self) -> Option<PyCoverFamily> {
        match &self.inner {
            CoreResult::Derived { primitive, .. } => Some(PyCoverFamily {
                inner: primitive.clone(),
            }),
            _ => None,
        }
    }

    #[getter]
    fn obstruction(&self) -> Option<String> {
        match &self.inner {
            CoreResult::NotPure { obstruction } => Some(obstruction.to_string()),
            _ => None,
        }
    }

    fn is_pure(&self) -> bool {
        self.inner.is_pure()
    }

    fn __repr__(&self) -> String {
        format!("PureVhsResult({:?})", self.inner)
    }
}

fn same_field(a: &CoreNumber, b: &CoreNumber) -> PyResult<()> {
    if a.order() != b.order() {
        return Err(CycloVhsError::new_err(format!(
            "operands live in Q(xi_{}) and Q(xi_{})",
            a.order(),
            b.order()
        )));
    }
    Ok(())
}

/// Element of `Q(xi_m)` in the power basis `1, xi, ..., xi^{phi(m)-1}`.
#[pyclass(name = "CyclotomicNumber", module = "cyclovhs", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyCyclotomicNumber {
    inner: CoreNumber,
}

#[pymethods]
impl PyCyclotomicNumber {
    /// `xi_m^e`.
    #[staticmethod]
    fn root(m: u64, e: i64) -> Self {
        Self {
            inner: CoreNumber::root(m, e),
        }
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    fn coeffs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner.coeffs().iter().map(|q| fraction(py, q)).collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_one(&self) -> bool {
        self.inner.is_one()
    }

    fn galois(&self, v: u64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.galois(v).map_err(to_py)?,
        })
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        same_field(&self.inner, &other.inner)?;
        Ok(Self {
            inner: &self.inner + &other.inner,
        })
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        same_field(&self.inner, &other.inner)?;
        Ok(Self {
            inner: &self.inner - &other.inner,
        })
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        same_field(&self.inner, &other.inner)?;
        Ok(Self {
            inner: &self.inner * &other.inner,
        })
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        same_field(&self.inner, &other.inner)?;
        Ok(Self {
            inner: self.inner.checked_div(&other.inner).map_err(to_py)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CyclotomicNumber({}, order={})", self.inner, self.inner.order())
    }
}

/// Square matrix over `Q(xi_m)`.
#[pyclass(name = "CycMatrix", module = "cyclovhs", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyCycMatrix {
    inner: CoreMatrix,
}

#[pymethods]
impl PyCycMatrix {
    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn entry(&self, row: usize, col: usize) -> PyResult<PyCyclotomicNumber> {
        if row >= self.inner.dim() || col >= self.inner.dim() {
            return Err(pyo3::exceptions::PyIndexError::new_err("entry out of range"));
        }
        Ok(PyCyclotomicNumber {
            inner: self.inner.get(row, col).clone(),
        })
    }

    fn det(&self) -> PyCyclotomicNumber {
        PyCyclotomicNumber {
            inner: self.inner.det(),
        }
    }

    fn trace(&self) -> PyCyclotomicNumber {
        PyCyclotomicNumber {
            inner: self.inner.trace(),
        }
    }

    /// Monic characteristic polynomial, lowest degree first.
    fn charpoly(&self) -> Vec<PyCyclotomicNumber> {
        self.inner
            .charpoly()
            .into_iter()
            .map(|inner| PyCyclotomicNumber { inner })
            .collect()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn __matmul__(&self, other: &Self) -> PyResult<Self> {
        if self.inner.order() != other.inner.order() || self.inner.dim() != other.inner.dim() {
            return Err(CycloVhsError::new_err("matrices have different order or dimension"));
        }
        Ok(Self {
            inner: self.inner.mul(&other.inner),
        })
    }

    fn __pow__(&self, exp: u64, _modulo: Option<u64>) -> Self {
        Self {
            inner: self.inner.pow(exp),
        }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CycMatrix({}, order={})", self.inner, self.inner.order())
    }
}

/// `(holds, sum_is_two, witness)` where `witness` is the first failing pair or `None`.
type Verdict = (bool, bool, Option<(usize, usize)>);

#[pyfunction]
fn sint_check(mu: Vec<Bound<'_, PyAny>>) -> PyResult<Verdict> {
    let v = classify::sint_check(&rationals(mu)?).map_err(to_py)?;
    Ok((v.holds(), v.sum_is_two, v.violation))
}

#[pyfunction]
fn int_check(mu: Vec<Bound<'_, PyAny>>) -> PyResult<Verdict> {
    let v = classify::int_check(&rationals(mu)?).map_err(to_py)?;
    Ok((v.holds(), v.sum_is_two, v.violation))
}

#[pyfunction]
fn triangle_family<'py>(py: Python<'py>, p: u64, q: u64, r: u64) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let t = classify::TriangleParams::new(p, q, r).map_err(to_py)?;
    classify::triangle_family(t).iter().map(|x| fraction(py, x)).collect()
}

/// Pure `(1,n)` families with degree at most `m_max`, one per equivalence class.
#[pyfunction]
#[pyo3(signature = (n, m_max, jobs = 1))]
fn enumerate_pure(n: usize, m_max: u64, jobs: usize) -> PyResult<Vec<(PyCoverFamily, PyPureVhsResult)>> {
    let rows = classify::enumerate_pure_with_jobs(n, m_max, jobs.max(1)).map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|c| (PyCoverFamily { inner: c.family }, PyPureVhsResult { inner: c.result }))
        .collect())
}

#[pyfunction]
fn dehn_twist_matrix(family: &PyCoverFamily, j: u64, ell: usize) -> PyResult<PyCycMatrix> {
    let inner = monodromy::dehn_twist_matrix(&family.inner, j, DehnTwist::between(ell)).map_err(to_py)?;
    Ok(PyCycMatrix { inner })
}

#[pyfunction]
fn galois_conjugate(matrix: &PyCycMatrix, v: u64) -> PyResult<PyCycMatrix> {
    Ok(PyCycMatrix {
        inner: monodromy::galois_conjugate(&matrix.inner, v).map_err(to_py)?,
    })
}

/// Order of the twist of slots `k1`, `k2`; `None` when it is infinite.
#[pyfunction]
fn twist_order(family: &PyCoverFamily, j: u64, k1: usize, k2: usize) -> PyResult<Option<u64>> {
    Ok(match monodromy::twist_order(&family.inner, j, k1, k2).map_err(to_py)? {
        TwistOrder::Finite(n) => Some(n),
        TwistOrder::Infinite => None,
    })
}

/// One dict per involution with keys `v`, `t1`, `t2`, `kind` and, for complex
/// records, `witness` and `system`.
#[pyfunction]
fn exceptional_analysis<'py>(py: Python<'py>, family: &PyCoverFamily) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let report = monodromy::exceptional_analysis(&family.inner).map_err(to_py)?;
    report
        .involutions
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("v", r.v)?;
            d.set_item("t1", r.t1)?;
            d.set_item("t2", r.t2)?;
            match &r.kind {
                SummandKind::Separated => d.set_item("kind", "separated")?,
                SummandKind::Neither => d.set_item("kind", "neither")?,
                SummandKind::Complex { witness, system } => {
                    d.set_item("kind", "complex")?;
                    d.set_item("witness", witness.to_vec())?;
                    d.set_item("system", system)?;
                }
            }
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn intertwiner_identity(family: &PyCoverFamily, j: u64, v: u64) -> PyResult<PyCyclotomicNumber> {
    let inner = monodromy::intertwiner_identity(&family.inner, j, v).map_err(to_py)?;
    Ok(PyCyclotomicNumber { inner })
}

/// `(h11, h21)` of the Borcea-Voisin threefold for a fixed locus of `n` curves of total genus `n_prime`.
#[pyfunction]
fn borcea_voisin_hodge(n: u64, n_prime: u64) -> PyResult<(u64, u64)> {
    let h = cy::borcea_voisin_hodge(FixedLocusProfile::new(n, n_prime)).map_err(to_py)?;
    Ok((h.h11, h.h21))
}

/// `(N, N')` for the involution with invariants `(t, a, delta)`.
#[pyfunction]
fn nikulin_fixed_locus(t: u64, a: u64, delta: u8) -> PyResult<(u64, u64)> {
    let triple = NikulinTriple::new(t, a, delta).map_err(to_py)?;
    let p = cy::nikulin_fixed_locus(triple).map_err(to_py)?;
    Ok((p.curve_count, p.genus_sum))
}

/// Length of the Yukawa coupling of `leaf <int>` / `tensor(...)` / `sum(...)` expressions.
#[pyfunction]
fn yukawa_length(expression: &str) -> PyResult<u64> {
    let e: VhsExpression = expression.parse().map_err(to_py)?;
    Ok(cy::yukawa_length(&e))
}

/// Text rendering of `"ch10"`, `"ch11"` or `"classification"`.
#[pyfunction]
fn render_table(which: &str) -> PyResult<String> {
    match which {
        "ch10" => Ok(tables::render_borcea_voisin(
            &tables::borcea_voisin_table().map_err(to_py)?,
        )),
        "ch11" => Ok(tables::render_nikulin(&tables::nikulin_table().map_err(to_py)?)),
        "classification" => Ok(tables::render_classification(
            &tables::classification_tables(1).map_err(to_py)?,
        )),
        other => Err(CycloVhsError::new_err(format!("unknown table {other:?}"))),
    }
}

/// Exact invariants of families of cyclic covers of the projective line.
#[pymodule(name = "cyclovhs")]
pub fn cyclovhs_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CycloVhsError", m.py().get_type::<CycloVhsError>())?;
    m.add_class::<PyCoverFamily>()?;
    m.add_class::<PyPureVhsResult>()?;
    m.add_class::<PyCyclotomicNumber>()?;
    m.add_class::<PyCycMatrix>()?;
    m.add_function(wrap_pyfunction!(sint_check, m)?)?;
    m.add_function(wrap_pyfunction!(int_check, m)?)?;
    m.add_function(wrap_pyfunction!(triangle_family, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_pure, m)?)?;
    m.add_function(wrap_pyfunction!(dehn_twist_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(galois_conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(twist_order, m)?)?;
    m.add_function(wrap_pyfunction!(exceptional_analysis, m)?)?;
    m.add_function(wrap_pyfunction!(intertwiner_identity, m)?)?;
    m.add_function(wrap_pyfunction!(borcea_voisin_hodge, m)?)?;
    m.add_function(wrap_pyfunction!(nikulin_fixed_locus, m)?)?;
    m.add_function(wrap_pyfunction!(yukawa_length, m)?)?;
    m.add_function(wrap_pyfunction!(render_table, m)?)?;
    Ok(())
}

//! Python bindings. Reports that are plain data in Rust come back as
//! dicts; the objects with behavior (matrices, group elements, zeta
//! functions, torus points) are classes.

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use kmeis::cartan::{self, CorootVec, Weight};
use kmeis::cone::{self, CorootSpacePoint};
use kmeis::eisenstein::{self, SpectralParam, SumOptions};
use kmeis::scalar::Precision;
use kmeis::torus;
use kmeis::weyl::{self, EnumOptions};
use kmeis::zeta;

create_exception!(kmeis_py, KmeisError, PyException);

fn err(e: kmeis::Error) -> PyErr {
    KmeisError::new_err(format!("{}: {}", e.code(), e))
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for kmeis::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(err)
    }
}

/// Round-trip through JSON so reports arrive as ordinary dicts and lists.
fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text =
        serde_json::to_string(value).map_err(|e| KmeisError::new_err(format!("SERIALIZE: {e}")))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Accepts ints, fractions, or strings like "-1/2".
fn point(coords: &[Bound<'_, PyAny>]) -> PyResult<CorootSpacePoint> {
    let parts = coords
        .iter()
        .map(|c| c.str().map(|s| s.to_string()))
        .collect::<PyResult<Vec<_>>>()?;
    parts.join(",").parse().or_raise()
}

#[pyclass(name = "Gcm", module = "kmeis_py", frozen)]
struct PyGcm {
    inner: cartan::Gcm,
}

#[pymethods]
impl PyGcm {
    #[new]
    fn new(rows: Vec<Vec<i64>>) -> PyResult<Self> {
        Ok(PyGcm {
            inner: cartan::Gcm::new(rows).or_raise()?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<i64>> {
        self.inner.rows()
    }

    #[getter]
    fn determinant(&self) -> BigInt {
        self.inner.determinant().clone()
    }

    /// Symmetrizer entries as strings ("3/2").
    #[getter]
    fn symmetrizer(&self) -> Vec<String> {
        self.inner
            .symmetrizer()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    fn is_finite_type(&self) -> bool {
        self.inner.is_finite_type()
    }

    fn identity(&self) -> PyWeylElt {
        PyWeylElt {
            inner: weyl::WeylElt::identity(&self.inner),
            g: self.inner.clone(),
        }
    }

    /// Element from a word; the word must be reduced.
    fn element(&self, word: Vec<usize>) -> PyResult<PyWeylElt> {
        let inner = weyl::WeylElt::from_word(&self.inner, &word).or_raise()?;
        Ok(PyWeylElt {
            inner,
            g: self.inner.clone(),
        })
    }

    #[pyo3(signature = (depth, words = false))]
    fn shells<'py>(
        &self,
        py: Python<'py>,
        depth: usize,
        words: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let shells = weyl::enumerate_shells(&self.inner, EnumOptions::new(depth)).or_raise()?;
        let reports: Vec<_> = shells
            .iter()
            .map(|s| weyl::ShellReport::from_shell(s, words))
            .collect();
        to_py(py, &reports)
    }

    /// All elements up to `depth`, in enumeration order.
    fn elements(&self, depth: usize) -> PyResult<Vec<PyWeylElt>> {
        let shells = weyl::enumerate_shells(&self.inner, EnumOptions::new(depth)).or_raise()?;
        Ok(shells
            .into_iter()
            .flat_map(|s| s.elements)
            .map(|inner| PyWeylElt {
                inner,
                g: self.inner.clone(),
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Gcm({:?})", self.inner.rows())
    }
}

#[pyclass(name = "WeylElt", module = "kmeis_py", frozen)]
struct PyWeylElt {
    inner: weyl::WeylElt,
    g: cartan::Gcm,
}

#[pymethods]
impl PyWeylElt {
    #[getter]
    fn word(&self) -> Vec<usize> {
        self.inner.word().to_vec()
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.length()
    }

    #[getter]
    fn m_root(&self) -> Vec<Vec<BigInt>> {
        self.inner.m_root().to_rows()
    }

    #[getter]
    fn m_coroot(&self) -> Vec<Vec<BigInt>> {
        self.inner.m_coroot().to_rows()
    }

    fn inverse(&self) -> PyWeylElt {
        PyWeylElt {
            inner: self.inner.inverse(&self.g),
            g: self.g.clone(),
        }
    }

    fn compose(&self, other: &PyWeylElt) -> PyWeylElt {
        PyWeylElt {
            inner: self.inner.compose(&self.g, &other.inner),
            g: self.g.clone(),
        }
    }

    /// Action on a weight given in fundamental-weight coordinates.
    fn apply(&self, weight: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(self
            .inner
            .apply(&self.g, &Weight::new(weight))
            .or_raise()?
            .coords)
    }

    /// Pairs `(root, coroot)` of the positive roots sent negative by `w^-1`.
    fn inversion_set(&self) -> Vec<(Vec<BigInt>, Vec<BigInt>)> {
        let inv = weyl::inversion_set(&self.inner, &self.g);
        inv.roots()
            .zip(inv.coroots())
            .map(|(r, c)| (r.0.clone(), c.0.clone()))
            .collect()
    }

    /// Values of `w^-1 mu` on `c`: equivalently `<mu, w c>`.
    fn pairing(&self, weight: Vec<Complex64>, coroot: Vec<i64>) -> PyResult<Complex64> {
        let c = self.inner.apply_coroot(&CorootVec::from_i64(&coroot));
        cartan::pairing(&Weight::new(weight), &c).or_raise()
    }

    fn __eq__(&self, other: &PyWeylElt) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("WeylElt({:?})", self.inner.word())
    }
}

#[pyclass(name = "CurveZeta", module = "kmeis_py", frozen)]
struct PyCurveZeta {
    inner: zeta::CurveZeta,
}

#[pymethods]
impl PyCurveZeta {
    #[staticmethod]
    fn genus0(q: u64) -> PyResult<Self> {
        Ok(PyCurveZeta {
            inner: zeta::CurveZeta::from_genus0(q).or_raise()?,
        })
    }

    /// From `N_1, ..., N_g`.
    #[staticmethod]
    #[pyo3(signature = (q, counts, weil_check = true))]
    fn from_point_counts(q: u64, counts: Vec<i64>, weil_check: bool) -> PyResult<Self> {
        let inner = zeta::CurveZeta::from_point_counts(q, &counts, weil_check).or_raise()?;
        Ok(PyCurveZeta { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (q, genus, coefficients, weil_check = true))]
    fn from_coefficients(
        q: u64,
        genus: usize,
        coefficients: Vec<BigInt>,
        weil_check: bool,
    ) -> PyResult<Self> {
        let inner =
            zeta::CurveZeta::from_coefficients(q, genus, coefficients, weil_check).or_raise()?;
        Ok(PyCurveZeta { inner })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    #[getter]
    fn coefficients(&self) -> Vec<BigInt> {
        self.inner.coefficients().to_vec()
    }

    fn satisfies_weil_bound(&self) -> bool {
        self.inner.satisfies_weil_bound()
    }

    fn point_counts(&self, m: usize) -> Vec<BigInt> {
        self.inner.point_counts(m)
    }

    fn closed_points(&self, n_max: usize) -> PyResult<Vec<BigInt>> {
        self.inner.closed_points(n_max).or_raise()
    }

    fn __call__(&self, s: Complex64) -> PyResult<Complex64> {
        self.inner.eval(&s).or_raise()
    }

    /// `zeta(s) / zeta(s + 1)`.
    fn gk_ratio(&self, s: Complex64) -> PyResult<Complex64> {
        self.inner.gk_ratio(&s).or_raise()
    }

    fn z_of_t(&self, t: Complex64) -> Complex64 {
        self.inner.z_of_t(t)
    }

    fn functional_equation_residual(&self, t: Complex64) -> f64 {
        self.inner.functional_equation_residual(t)
    }

    fn euler_truncated(&self, s: Complex64, n_max: usize) -> PyResult<Complex64> {
        self.inner.euler_truncated(s, n_max).or_raise()
    }

    fn ratio_bound_s<'py>(&self, py: Python<'py>, m: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.ratio_bound_s(m).or_raise()?)
    }

    fn __repr__(&self) -> String {
        format!(
            "CurveZeta(q={}, genus={})",
            self.inner.q(),
            self.inner.genus()
        )
    }
}

#[pyclass(name = "TorusPoint", module = "kmeis_py", frozen)]
struct PyTorusPoint {
    inner: torus::TorusPoint,
}

#[pymethods]
impl PyTorusPoint {
    #[new]
    fn new(q: u64, exps: Vec<i64>) -> PyResult<Self> {
        Ok(PyTorusPoint {
            inner: torus::TorusPoint::new(q, exps).or_raise()?,
        })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn exps(&self) -> Vec<i64> {
        self.inner.exps().to_vec()
    }

    fn is_compact(&self) -> bool {
        self.inner.is_compact()
    }

    fn h_pow(&self, mu: Vec<Complex64>) -> PyResult<Complex64> {
        self.inner.h_pow(&Weight::new(mu)).or_raise()
    }

    fn in_hc(&self, g: &PyGcm) -> PyResult<bool> {
        self.inner.in_hc(&g.inner).or_raise()
    }

    #[pyo3(signature = (g, cap = 10000))]
    fn in_h_titscone<'py>(
        &self,
        py: Python<'py>,
        g: &PyGcm,
        cap: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &self.inner.in_h_titscone(&g.inner, cap).or_raise()?.report(),
        )
    }

    fn transport(&self, w: &PyWeylElt) -> PyResult<PyTorusPoint> {
        Ok(PyTorusPoint {
            inner: self.inner.transport(&w.g, &w.inner).or_raise()?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "TorusPoint(q={}, exps={:?})",
            self.inner.q(),
            self.inner.exps()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (g, x, cap = 10000))]
fn descend<'py>(
    py: Python<'py>,
    g: &PyGcm,
    x: Vec<Bound<'py, PyAny>>,
    cap: usize,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &cone::descend(&g.inner, &point(&x)?, cap)
            .or_raise()?
            .report(),
    )
}

/// "Inside", "Boundary" or "Outside".
#[pyfunction]
fn rank2_certificate<'py>(
    py: Python<'py>,
    g: &PyGcm,
    x: Vec<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &cone::rank2_certificate(&g.inner, &point(&x)?).or_raise()?,
    )
}

#[pyfunction]
fn godement_check(lam: Vec<Complex64>) -> bool {
    cone::godement_check(&Weight::new(lam))
}

#[pyfunction]
fn units_nullity(rows: Vec<Vec<i64>>, m: Vec<i64>) -> PyResult<usize> {
    torus::units_nullity(&rows, &m).or_raise()
}

#[pyfunction]
#[pyo3(signature = (lam, h, zeta, g, depth = 20, tol = 1e-10, k_consec = 3, precision = 53))]
#[allow(clippy::too_many_arguments)]
fn constant_term<'py>(
    py: Python<'py>,
    lam: Vec<Complex64>,
    h: &PyTorusPoint,
    zeta: &PyCurveZeta,
    g: &PyGcm,
    depth: usize,
    tol: f64,
    k_consec: usize,
    precision: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = SumOptions {
        tol,
        k_consec,
        precision: Precision::from_bits(precision),
        ..SumOptions::new(depth)
    };
    let lam = SpectralParam::new(Weight::new(lam));
    // the sum can run for a while on deep shells; let other threads in
    let report = py
        .detach(|| eisenstein::constant_term(&lam, &h.inner, &zeta.inner, &g.inner, &opts))
        .or_raise()?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (lam, h, g, m = 1.5, depth = 20))]
fn dominating_series<'py>(
    py: Python<'py>,
    lam: Vec<Complex64>,
    h: &PyTorusPoint,
    g: &PyGcm,
    m: f64,
    depth: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let lam = SpectralParam::new(Weight::new(lam));
    to_py(
        py,
        &eisenstein::dominating_series(&lam, &h.inner, m, &g.inner, depth).or_raise()?,
    )
}

#[pyfunction]
#[pyo3(signature = (lam, zeta, g, m = 1.5, depth = 20))]
fn bound_constant<'py>(
    py: Python<'py>,
    lam: Vec<Complex64>,
    zeta: &PyCurveZeta,
    g: &PyGcm,
    m: f64,
    depth: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let lam = SpectralParam::new(Weight::new(lam));
    to_py(
        py,
        &eisenstein::bound_constant(&lam, &zeta.inner, &g.inner, depth, m).or_raise()?,
    )
}

#[pymodule]
fn kmeis_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("KmeisError", m.py().get_type::<KmeisError>())?;
    m.add_class::<PyGcm>()?;
    m.add_class::<PyWeylElt>()?;
    m.add_class::<PyCurveZeta>()?;
    m.add_class::<PyTorusPoint>()?;
    m.add_function(wrap_pyfunction!(descend, m)?)?;
    m.add_function(wrap_pyfunction!(rank2_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(godement_check, m)?)?;
    m.add_function(wrap_pyfunction!(units_nullity, m)?)?;
    m.add_function(wrap_pyfunction!(constant_term, m)?)?;
    m.add_function(wrap_pyfunction!(dominating_series, m)?)?;
    m.add_function(wrap_pyfunction!(bound_constant, m)?)?;
    Ok(())
}

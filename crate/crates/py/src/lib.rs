//! Python bindings. Matrices cross the boundary as lists of rows of Python
//! numbers (`complex` or `float`); results are plain dicts and lists.

use posext::cayley::{PartialOperator, RelationSpectrum, SelfadjointRelation};
use posext::discretization::{demo_report, minimal_laplacian};
use posext::extensions::{
    compare_extensions, domain_decomposition, is_extension_member, recover_gamma, ExtensionOrder, GammaParameter,
    MembershipRoute,
};
use posext::linalg::{CMatrix, Tolerance};
use posext::num_complex::Complex64;
use posext::oracle::{run_suite, Sampler, SUITES};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    posext_py,
    InvariantError,
    PyValueError,
    "A mathematical precondition was violated."
);
create_exception!(
    posext_py,
    VerificationError,
    PyRuntimeError,
    "An internal cross-check failed."
);

type Rows = Vec<Vec<Complex64>>;

fn to_py_err(e: posext::Error) -> PyErr {
    let message = e.to_string();
    let args = (message, e.invariant(), e.residual());
    match e {
        posext::Error::CrossCheck(_) => VerificationError::new_err(args),
        posext::Error::NonFinite
        | posext::Error::NotSquare { .. }
        | posext::Error::DimensionMismatch { .. }
        | posext::Error::Precondition(_) => PyValueError::new_err(args),
        _ => InvariantError::new_err(args),
    }
}

fn matrix_from_rows(rows: &Rows, what: &str) -> PyResult<CMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err(format!("{what}: rows have different lengths")));
    }
    Ok(CMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn rows(m: &CMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn tolerance(profile: &str) -> PyResult<Tolerance> {
    Tolerance::profile(profile).ok_or_else(|| PyValueError::new_err(format!("unknown tolerance profile `{profile}`")))
}

fn spectrum_dict<'py>(py: Python<'py>, s: &RelationSpectrum) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("finite", s.finite.clone())?;
    d.set_item("infinity_multiplicity", s.infinity_multiplicity)?;
    Ok(d)
}

fn relation_dict<'py>(py: Python<'py>, r: &SelfadjointRelation, tol: &Tolerance) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("is_operator", r.is_operator())?;
    d.set_item("operator_part", rows(&r.operator_part()))?;
    d.set_item("domain_basis", rows(r.domain().basis()))?;
    d.set_item("multivalued_basis", rows(r.multivalued_part().basis()))?;
    d.set_item("spectrum", spectrum_dict(py, &r.spectrum(tol))?)?;
    Ok(d)
}

fn order_name(o: ExtensionOrder) -> &'static str {
    match o {
        ExtensionOrder::Le => "le",
        ExtensionOrder::Ge => "ge",
        ExtensionOrder::Equal => "equal",
        ExtensionOrder::Incomparable => "incomparable",
    }
}

/// A positive symmetric operator on `ℂⁿ` given by the images of spanning
/// vectors of its domain.
#[pyclass(frozen, module = "posext_py")]
struct ExtensionProblem {
    inner: posext::extensions::ExtensionProblem,
    tol: Tolerance,
}

impl ExtensionProblem {
    /// `gamma` is `"krein"`, `"friedrichs"`, `"neutral"` or a matrix in the
    /// defect basis reported by `parametrization()`.
    fn gamma(&self, gamma: &Bound<'_, PyAny>) -> PyResult<GammaParameter> {
        let d = self.inner.defect_dim();
        if let Ok(name) = gamma.extract::<String>() {
            return match name.as_str() {
                "krein" => Ok(GammaParameter::krein(d)),
                "friedrichs" => Ok(GammaParameter::friedrichs(d)),
                "neutral" => Ok(GammaParameter::neutral(d)),
                other => Err(PyValueError::new_err(format!("unknown gamma `{other}`"))),
            };
        }
        let m = matrix_from_rows(&gamma.extract::<Rows>()?, "gamma")?;
        self.inner.params().gamma(m, &self.tol).map_err(to_py_err)
    }
}

#[pymethods]
impl ExtensionProblem {
    #[new]
    #[pyo3(signature = (domain_basis, action, lower_bound_shift=None, tolerance="default"))]
    fn new(domain_basis: Rows, action: Rows, lower_bound_shift: Option<f64>, tolerance: &str) -> PyResult<Self> {
        let tol = self::tolerance(tolerance)?;
        let columns = matrix_from_rows(&domain_basis, "domain_basis")?;
        let images = matrix_from_rows(&action, "action")?;
        let mut s = PartialOperator::from_spanning_set(&columns, &images, &tol).map_err(to_py_err)?;
        if let Some(shift) = lower_bound_shift {
            s = posext::cayley::shift_lower_bound(&s, shift, &tol).map_err(to_py_err)?;
        }
        let inner = posext::extensions::ExtensionProblem::new(s, &tol).map_err(to_py_err)?;
        Ok(Self { inner, tol })
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.params().ambient_dim()
    }

    #[getter]
    fn dom_dim(&self) -> usize {
        self.inner.operator().domain().dim()
    }

    /// Side length of the parameter `Γ`.
    #[getter]
    fn defect_dim(&self) -> usize {
        self.inner.defect_dim()
    }

    /// `A`, `Γ₂`, the defect operators and the basis of `𝒟_{Γ₂*}`.
    fn parametrization<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = self.inner.params();
        let d = PyDict::new(py);
        d.set_item("dom_t_basis", rows(p.dom_t().basis()))?;
        d.set_item("contraction_action", rows(p.operator().action()))?;
        d.set_item("complement_basis", rows(p.complement().basis()))?;
        d.set_item("a", rows(p.a()))?;
        d.set_item("gamma2", rows(p.gamma2()))?;
        d.set_item("d_a", rows(p.d_a()))?;
        d.set_item("d_gamma2_star", rows(p.d_gamma2_star()))?;
        d.set_item("defect_gamma2_star_basis", rows(p.defect_gamma2_star().basis()))?;
        d.set_item("defect_gamma2_star_ambient", rows(&p.defect_gamma2_star_ambient()))?;
        d.set_item("gamma_dim", p.defect_dim())?;
        Ok(d)
    }

    /// The selfadjoint contraction extension `T̃(Γ)`.
    fn contraction(&self, gamma: &Bound<'_, PyAny>) -> PyResult<Rows> {
        let g = self.gamma(gamma)?;
        Ok(rows(&self.inner.contraction(&g, &self.tol).map_err(to_py_err)?))
    }

    /// The positive selfadjoint extension `S̃(Γ)` as a dict.
    fn extension<'py>(&self, py: Python<'py>, gamma: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
        let g = self.gamma(gamma)?;
        let r = self.inner.relation(&g, &self.tol).map_err(to_py_err)?;
        relation_dict(py, &r, &self.tol)
    }

    /// `Γ` with `T̃(Γ) = candidate`.
    fn recover_gamma(&self, candidate: Rows) -> PyResult<Rows> {
        let b = matrix_from_rows(&candidate, "candidate")?;
        let g = recover_gamma(self.inner.params(), &b, &self.tol).map_err(to_py_err)?;
        Ok(rows(g.matrix()))
    }

    #[pyo3(signature = (candidate, route="direct"))]
    fn is_member(&self, candidate: Rows, route: &str) -> PyResult<bool> {
        let route = match route {
            "direct" => MembershipRoute::Direct,
            "interval" => MembershipRoute::Interval,
            other => return Err(PyValueError::new_err(format!("unknown route `{other}`"))),
        };
        let b = matrix_from_rows(&candidate, "candidate")?;
        let n = self.ambient_dim();
        if b.shape() != (n, n) {
            return Err(PyValueError::new_err(format!("candidate must be {n}x{n}")));
        }
        Ok(is_extension_member(self.inner.params(), &b, route, &self.tol))
    }

    /// Form order of `S̃(gamma_a)` relative to `S̃(gamma_b)`: `"le"`, `"ge"`,
    /// `"equal"` or `"incomparable"`.
    fn compare(&self, gamma_a: &Bound<'_, PyAny>, gamma_b: &Bound<'_, PyAny>) -> PyResult<&'static str> {
        let a = self
            .inner
            .relation(&self.gamma(gamma_a)?, &self.tol)
            .map_err(to_py_err)?;
        let b = self
            .inner
            .relation(&self.gamma(gamma_b)?, &self.tol)
            .map_err(to_py_err)?;
        Ok(order_name(compare_extensions(&a, &b, &self.tol).map_err(to_py_err)?))
    }

    fn domain_decomposition<'py>(&self, py: Python<'py>, gamma: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
        let g = self.gamma(gamma)?;
        let dd = domain_decomposition(self.inner.params(), &g, &self.tol).map_err(to_py_err)?;
        let d = PyDict::new(py);
        d.set_item("dom_friedrichs_basis", rows(dd.dom_friedrichs.basis()))?;
        d.set_item("correction_basis", rows(dd.correction.basis()))?;
        d.set_item("dom_gamma_basis", rows(dd.dom_gamma.basis()))?;
        d.set_item("residual", dd.residual)?;
        d.set_item("verified", dd.verified)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "ExtensionProblem(ambient_dim={}, dom_dim={}, defect_dim={})",
            self.ambient_dim(),
            self.dom_dim(),
            self.defect_dim()
        )
    }
}

/// Extremal spectra and sampled order checks for the minimal
/// second-difference operator on `size` grid points.
#[pyfunction]
#[pyo3(signature = (size, samples=50, seed=0, tolerance="default"))]
fn laplacian_demo<'py>(
    py: Python<'py>,
    size: usize,
    samples: usize,
    seed: u64,
    tolerance: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let tol = self::tolerance(tolerance)?;
    let problem = minimal_laplacian(size, &tol).map_err(to_py_err)?;
    let r = demo_report(&problem, samples, seed, &tol).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("size", r.size)?;
    d.set_item("krein_spectrum", spectrum_dict(py, &r.krein_spectrum)?)?;
    d.set_item("friedrichs_spectrum", spectrum_dict(py, &r.friedrichs_spectrum)?)?;
    d.set_item("krein_min_eigenvalue", r.krein_min_eigenvalue)?;
    d.set_item("krein_is_singular", r.krein_is_singular)?;
    d.set_item("order_failures", r.checks.order_failures)?;
    d.set_item("domain_failures", r.checks.domain_failures)?;
    d.set_item("counting_failures", r.checks.counting_failures)?;
    d.set_item("dirichlet_spectrum", r.dirichlet.dirichlet_spectrum.clone())?;
    d.set_item("dom_friedrichs_dim", r.dimensions.dom_friedrichs)?;
    d.set_item("dom_krein_dim", r.dimensions.dom_krein)?;
    d.set_item("passed", r.passed())?;
    Ok(d)
}

/// Runs the randomized verification suites for ambient dimensions
/// `lo..=hi` and every domain dimension. Returns one dict per suite and
/// dimension pair.
#[pyfunction]
#[pyo3(signature = (dims=(2, 5), trials=200, seed=0, suites=None))]
fn verify<'py>(
    py: Python<'py>,
    dims: (usize, usize),
    trials: usize,
    seed: u64,
    suites: Option<Vec<String>>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let tol = Tolerance::default();
    let names: Vec<String> = suites.unwrap_or_else(|| SUITES.iter().map(|s| s.to_string()).collect());
    let mut out = Vec::new();
    for n in dims.0..=dims.1 {
        for k in 1..=n {
            let s = Sampler::new(seed, n, k).map_err(to_py_err)?;
            for name in &names {
                let r = py.detach(|| run_suite(name, &s, trials, &tol)).map_err(to_py_err)?;
                let d = PyDict::new(py);
                d.set_item("property", &r.property)?;
                d.set_item("ambient_dim", r.ambient_dim)?;
                d.set_item("dom_dim", r.dom_dim)?;
                d.set_item("trials", r.trials)?;
                d.set_item("failures", r.failures)?;
                d.set_item("worst_residual", r.worst_residual)?;
                d.set_item("elapsed_seconds", r.elapsed_seconds)?;
                out.push(d);
            }
        }
    }
    Ok(out)
}

#[pymodule]
fn posext_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ExtensionProblem>()?;
    m.add_function(wrap_pyfunction!(laplacian_demo, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("InvariantError", m.py().get_type::<InvariantError>())?;
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    m.add("SUITES", SUITES.to_vec())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let m = CMatrix::from_fn(2, 3, |i, j| Complex64::new(i as f64, j as f64));
        assert_eq!(matrix_from_rows(&rows(&m), "m").unwrap(), m);
    }

    #[test]
    fn order_names() {
        assert_eq!(order_name(ExtensionOrder::Le), "le");
        assert_eq!(order_name(ExtensionOrder::Incomparable), "incomparable");
    }
}

//! Python bindings for corrdyn.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use corrdyn::algebra::rational::{format_rational, Place};
use corrdyn::correspondence::{RationalCorrespondence, RationalNormalForm};
use corrdyn::heights;
use corrdyn::localheights::{self as lh, Coefficients, GreenStart, LambdaConvention, PadicStart, SearchConfig};
use corrdyn::sdset::{self, PixelVerdict, RenderSpec};
use corrdyn::unicritical::{UnicriticalFamily as Family, DEFAULT_DEGREE_CAP};
use corrdyn::CorrdynError;

create_exception!(corrdyn, BudgetExceeded, PyRuntimeError);

/// (scale, shift) pair of an affine change of variable.
type Affine = (String, String);

fn err(e: CorrdynError) -> PyErr {
    if e.is_budget() {
        BudgetExceeded::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn place(p: Option<u64>) -> PyResult<Place> {
    match p {
        None => Ok(Place::Archimedean),
        Some(p) => Place::padic(p).map_err(err),
    }
}

/// Certified enclosure [lo, hi] of an escape rate.
#[pyclass(frozen, skip_from_py_object, module = "corrdyn")]
#[derive(Clone)]
struct EscapeInterval {
    #[pyo3(get)]
    lo: f64,
    #[pyo3(get)]
    hi: f64,
    #[pyo3(get)]
    depth: usize,
    #[pyo3(get)]
    tie: bool,
}

impl From<lh::EscapeInterval> for EscapeInterval {
    fn from(i: lh::EscapeInterval) -> Self {
        EscapeInterval { lo: i.lo, hi: i.hi, depth: i.depth, tie: i.tie }
    }
}

#[pymethods]
impl EscapeInterval {
    #[getter]
    fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn __repr__(&self) -> String {
        format!("EscapeInterval(lo={}, hi={}, depth={}, tie={})", self.lo, self.hi, self.depth, self.tie)
    }
}

/// g(y) = f(x) with rational coefficients, e.g. "f=1,0,0,1;g=0,0,1".
#[pyclass(frozen, module = "corrdyn")]
struct Correspondence {
    inner: RationalCorrespondence,
}

#[pymethods]
impl Correspondence {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Correspondence { inner: RationalCorrespondence::parse(text).map_err(err)? })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn e(&self) -> usize {
        self.inner.e()
    }

    /// (normal form, (pre_scale, pre_shift), (post_scale, post_shift)), exact.
    fn normalize(&self) -> PyResult<(NormalForm, Affine, Affine)> {
        let n = self.inner.normalize().map_err(err)?;
        Ok((
            NormalForm { inner: n.form },
            (format_rational(&n.pre_scale), format_rational(&n.pre_shift)),
            (format_rational(&n.post_scale), format_rational(&n.post_shift)),
        ))
    }

    fn critical_points(&self) -> PyResult<Vec<Complex64>> {
        self.inner.to_complex().critical_points().map_err(err)
    }

    fn branch_step(&self, x: Complex64) -> PyResult<Vec<Complex64>> {
        self.inner.to_complex().branch_step(x).map_err(err)
    }

    #[pyo3(signature = (p=None, flipped=false))]
    fn lambda_local(&self, p: Option<u64>, flipped: bool) -> PyResult<f64> {
        let conv = if flipped { LambdaConvention::PadicCorrection } else { LambdaConvention::ArchimedeanCorrection };
        lh::lambda_local_with(Coefficients::Rational(&self.inner), place(p)?, conv).map_err(err)
    }

    /// Minimal escape rate over paths from x (complex at ∞, or a rational string with p).
    #[pyo3(signature = (x, depth=20, tol=1e-6, p=None))]
    fn green_min(&self, x: &Bound<'_, PyAny>, depth: usize, tol: f64, p: Option<u64>) -> PyResult<EscapeInterval> {
        let i = match p {
            Some(p) => {
                let a = corrdyn::algebra::rational::parse_rational(&x.str()?.to_cow()?).map_err(err)?;
                lh::green_min_padic(&self.inner, &PadicStart::Point(a), p, depth)
            }
            None => {
                let cfg = SearchConfig { depth, tol, ..SearchConfig::default() };
                lh::green_min(&self.inner.to_complex(), GreenStart::Point(x.extract()?), &cfg)
            }
        };
        Ok(i.map_err(err)?.into())
    }

    #[pyo3(signature = (depth=20, tol=1e-6, p=None))]
    fn capital_lambda(&self, depth: usize, tol: f64, p: Option<u64>) -> PyResult<EscapeInterval> {
        let i = match p {
            Some(p) => lh::lambda_capital_padic(&self.inner, p, depth),
            None => lh::lambda_capital(&self.inner.to_complex(), &SearchConfig { depth, tol, ..SearchConfig::default() }),
        };
        Ok(i.map_err(err)?.into())
    }

    /// Critical height, summed over the support places.
    #[pyo3(signature = (depth=20, tol=1e-6))]
    fn crit_height(&self, depth: usize, tol: f64) -> PyResult<EscapeInterval> {
        let cfg = SearchConfig { depth, tol, ..SearchConfig::default() };
        Ok(heights::crit_height_general(&self.inner, &cfg).map_err(err)?.crit.into())
    }

    /// (mean, stderr) of the escape rate along random paths from z.
    #[pyo3(signature = (z, samples=1000, depth=40, seed=0))]
    fn expected_green_mc(&self, py: Python<'_>, z: Complex64, samples: usize, depth: usize, seed: u64) -> PyResult<(f64, f64)> {
        let c = self.inner.to_complex();
        let m = py.detach(|| lh::expected_green_mc(&c, z, samples, depth, seed)).map_err(err)?;
        Ok((m.mean, m.stderr))
    }

    fn __repr__(&self) -> String {
        format!("Correspondence('{}')", self.inner)
    }
}

/// A rational normal form, e.g. NormalForm("s=2,3;t=1").
#[pyclass(frozen, module = "corrdyn")]
struct NormalForm {
    inner: RationalNormalForm,
}

#[pymethods]
impl NormalForm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(NormalForm { inner: RationalNormalForm::parse(text).map_err(err)? })
    }

    #[getter]
    fn s(&self) -> Vec<String> {
        self.inner.s().iter().map(format_rational).collect()
    }

    #[getter]
    fn t(&self) -> Vec<String> {
        self.inner.t().iter().map(format_rational).collect()
    }

    fn correspondence(&self) -> Correspondence {
        Correspondence { inner: self.inner.correspondence() }
    }

    /// Places as strings: "inf" or the prime.
    fn support_places(&self) -> PyResult<Vec<String>> {
        Ok(heights::support_places(&self.inner).map_err(err)?.iter().map(|p| p.to_string()).collect())
    }

    fn weil_height(&self) -> PyResult<f64> {
        heights::weil_height(&self.inner).map_err(err)
    }

    #[pyo3(signature = (depth=20, tol=1e-6))]
    fn crit_height(&self, depth: usize, tol: f64) -> PyResult<EscapeInterval> {
        let cfg = SearchConfig { depth, tol, ..SearchConfig::default() };
        Ok(heights::crit_height(&self.inner, &cfg).map_err(err)?.into())
    }

    fn __repr__(&self) -> String {
        format!("NormalForm('{}')", self.inner)
    }
}

/// y^e = x^d + c over F_p: the recursion f_n and its parameter searches.
#[pyclass(frozen, module = "corrdyn")]
struct UnicriticalFamily {
    inner: Family,
}

#[pymethods]
impl UnicriticalFamily {
    #[new]
    fn new(p: u64, e: u64) -> PyResult<Self> {
        Ok(UnicriticalFamily { inner: Family::new(p, e).map_err(err)? })
    }

    /// Coefficients of f_n in ascending degree.
    #[pyo3(signature = (n, degree_cap=DEFAULT_DEGREE_CAP))]
    fn fn_poly(&self, n: u32, degree_cap: u64) -> PyResult<Vec<u64>> {
        Ok(self.inner.fn_poly(n, degree_cap).map_err(err)?.coeffs().to_vec())
    }

    #[pyo3(signature = (n, degree_cap=DEFAULT_DEGREE_CAP))]
    fn has_primitive_prime_factor(&self, n: u32, degree_cap: u64) -> PyResult<(bool, Vec<u64>)> {
        let (found, w) = self.inner.has_primitive_prime_factor(n, degree_cap).map_err(err)?;
        Ok((found, w.coeffs().to_vec()))
    }

    fn bound_threshold(&self) -> u32 {
        self.inner.bound_threshold()
    }

    /// Certificates in their text form.
    #[pyo3(signature = (n, k, degree_cap=DEFAULT_DEGREE_CAP))]
    fn period_search(&self, n: u32, k: u32, degree_cap: u64) -> PyResult<Vec<String>> {
        Ok(self.inner.period_search(n, k, degree_cap).map_err(err)?.iter().map(|c| c.to_string()).collect())
    }
}

/// ("survived", None) or ("escaped", k) for y^e = x^d + c.
#[pyfunction]
#[pyo3(signature = (c, d=3, e=2, depth=24, frontier_cap=4096))]
fn member(c: Complex64, d: usize, e: usize, depth: usize, frontier_cap: usize) -> PyResult<(&'static str, Option<usize>)> {
    Ok(match sdset::unicritical_witness(d, e, c, depth, frontier_cap).map_err(err)? {
        PixelVerdict::Survived { .. } => ("survived", None),
        PixelVerdict::Escaped(k) => ("escaped", Some(k)),
    })
}

/// Renders the y^e = x^d + c slice; returns (pixels, width, height, summary).
#[pyfunction]
#[pyo3(signature = (d=3, e=2, center=Complex64::new(0.0, 0.0), half_width=4.5, width=256, height=256, depth=24))]
#[allow(clippy::too_many_arguments)]
fn render<'py>(
    py: Python<'py>,
    d: usize,
    e: usize,
    center: Complex64,
    half_width: f64,
    width: usize,
    height: usize,
    depth: usize,
) -> PyResult<(Bound<'py, PyBytes>, usize, usize, String)> {
    let spec = RenderSpec {
        family: sdset::Family::Unicritical { d, e },
        center,
        half_width,
        half_height: half_width * height as f64 / width.max(1) as f64,
        width,
        height,
        depth,
        ..RenderSpec::default()
    };
    let r = py.detach(|| sdset::render(&spec)).map_err(err)?;
    Ok((PyBytes::new(py, &r.pixels()), width, height, r.summary.to_string()))
}

/// Runs the command-line frontend; returns (exit status, stdout, stderr).
#[pyfunction]
fn cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = corrdyn::cli::dispatch(&args, &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
}

#[pymodule]
#[pyo3(name = "corrdyn")]
fn corrdyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_class::<EscapeInterval>()?;
    m.add_class::<Correspondence>()?;
    m.add_class::<NormalForm>()?;
    m.add_class::<UnicriticalFamily>()?;
    m.add_function(wrap_pyfunction!(member, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}

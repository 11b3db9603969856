//! Python bindings: build a curve over a p-adic field from exact rationals,
//! then integrate, take periods and local heights.

use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyFloat, PyList, PyString, PyTuple};
use volint::curve::{CurvePoint, HyperellipticCurve, MeromorphicForm};
use volint::padic::{FieldCtx, FieldSpec, PadicElement};
use volint::vologodsky::{Config, Vologodsky};

create_exception!(pyvolint, ComputationError, pyo3::exceptions::PyException);
create_exception!(pyvolint, BackendUnavailable, ComputationError);

fn to_py(e: volint::Error) -> PyErr {
    let msg = format!("error in {}: {e}", e.module());
    match e {
        volint::Error::BackendUnavailable { .. } => BackendUnavailable::new_err(msg),
        _ => ComputationError::new_err(msg),
    }
}

/// int, fractions.Fraction or a string "a/b"; floats are refused.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if obj.is_instance_of::<PyFloat>() {
        return Err(PyTypeError::new_err("floating point values are not accepted; use int, Fraction or \"a/b\""));
    }
    let text = if obj.is_instance_of::<PyString>() { obj.extract::<String>()? } else { obj.str()?.extract::<String>()? };
    let text = text.trim();
    text.parse::<BigRational>().map_err(|_| PyValueError::new_err(format!("not an exact rational: {text:?}")))
}

fn rationals(obj: &Bound<'_, PyAny>) -> PyResult<Vec<BigRational>> {
    obj.try_iter()?.map(|x| rational(&x?)).collect()
}

/// A rational, or a list of coefficients in the power basis of the generator.
fn element(v: &Vologodsky, obj: &Bound<'_, PyAny>) -> PyResult<PadicElement> {
    let f = v.field();
    if obj.is_instance_of::<PyList>() || obj.is_instance_of::<PyTuple>() {
        Ok(f.from_rational_coeffs(&rationals(obj)?))
    } else {
        Ok(f.from_rational(&rational(obj)?))
    }
}

/// "inf", "inf+", "inf-" or a pair (x, y).
fn point(v: &Vologodsky, obj: &Bound<'_, PyAny>) -> PyResult<CurvePoint> {
    if let Ok(s) = obj.extract::<String>() {
        return match s.as_str() {
            "inf" => Ok(CurvePoint::Infinity),
            "inf+" => Ok(CurvePoint::InfinityPlus),
            "inf-" => Ok(CurvePoint::InfinityMinus),
            _ => Err(PyValueError::new_err(format!("unknown point {s:?}"))),
        };
    }
    let (x, y): (Bound<'_, PyAny>, Bound<'_, PyAny>) = obj.extract()?;
    v.curve.point(element(v, &x)?, element(v, &y)?).map_err(to_py)
}

/// An element of K known to O(pi^N).
#[pyclass(frozen, name = "Value")]
struct Value(PadicElement);

#[pymethods]
impl Value {
    /// Absolute precision in powers of the uniformizer.
    #[getter]
    fn precision(&self) -> i64 {
        self.0.prec()
    }

    /// Valuation in powers of the uniformizer; None for O(pi^N).
    #[getter]
    fn valuation(&self) -> Option<i64> {
        self.0.valuation()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Value({})", self.0)
    }
}

/// y^2 = f(x) over K with its semistable covering.
#[pyclass(frozen)]
struct Curve {
    v: Vologodsky,
}

#[pymethods]
impl Curve {
    /// f lists coefficients constant term first; modulus is a monic
    /// polynomial defining K over Q_p, omitted for Q_p itself.
    #[new]
    #[pyo3(signature = (p, f, precision, modulus=None, generator="a", cycles=None))]
    fn new(
        p: u64,
        f: &Bound<'_, PyAny>,
        precision: i64,
        modulus: Option<&Bound<'_, PyAny>>,
        generator: &str,
        cycles: Option<Vec<Vec<(usize, i8)>>>,
    ) -> PyResult<Self> {
        let mut spec = FieldSpec::qp(p);
        if let Some(m) = modulus {
            spec.modulus = rationals(m)?;
            spec.generator = generator.to_string();
        }
        let e = FieldCtx::new(&spec, 1).map_err(to_py)?.e;
        let field = FieldCtx::new(&spec, Config::default_cap(precision, e)).map_err(to_py)?;
        let curve = HyperellipticCurve::new(&field, &rationals(f)?).map_err(to_py)?;
        let mut v = Vologodsky::new(&curve, Config::new(precision)).map_err(to_py)?;
        if let Some(c) = cycles {
            v.set_cycles(c).map_err(to_py)?;
        }
        Ok(Curve { v })
    }

    /// First Betti number of the dual graph.
    #[getter]
    fn betti(&self) -> usize {
        self.v.cov.betti()
    }

    /// Basis cycles as edge walks [(edge, +-1), ...].
    #[getter]
    fn cycles(&self) -> Vec<Vec<(usize, i8)>> {
        self.v.cycles.iter().map(|c| c.walk.clone()).collect()
    }

    /// Dual harmonic forms, one value per edge as "a/b" strings.
    #[getter]
    fn etas(&self) -> Vec<Vec<String>> {
        self.v.etas.iter().map(|eta| eta.iter().map(|q| q.to_string()).collect()).collect()
    }

    /// Vologodsky integral of sum omega[i] x^i dx/2y + sum c dx/((x - beta) 2y)
    /// from start to end; nu is a list of pairs (beta, c).
    #[pyo3(signature = (omega, start, end, nu=None))]
    fn integrate(
        &self,
        omega: &Bound<'_, PyAny>,
        start: &Bound<'_, PyAny>,
        end: &Bound<'_, PyAny>,
        nu: Option<&Bound<'_, PyAny>>,
    ) -> PyResult<Value> {
        let form = self.form(omega, nu)?;
        let (s, r) = (point(&self.v, start)?, point(&self.v, end)?);
        Ok(Value(self.v.integrate(&form, &s, &r).map_err(to_py)?.value))
    }

    /// Berkovich-Coleman period of the form around basis cycle i.
    #[pyo3(signature = (omega, cycle, nu=None))]
    fn period(&self, omega: &Bound<'_, PyAny>, cycle: usize, nu: Option<&Bound<'_, PyAny>>) -> PyResult<Value> {
        let form = self.form(omega, nu)?;
        let walk = &self
            .v
            .cycles
            .get(cycle)
            .ok_or_else(|| PyValueError::new_err(format!("no basis cycle {cycle}")))?
            .walk;
        Ok(Value(self.v.form_period(&form, walk).map_err(to_py)?))
    }

    /// p-part of the Coleman-Gross height of two points; elliptic curves only.
    fn height(&self, p: &Bound<'_, PyAny>, r: &Bound<'_, PyAny>) -> PyResult<Value> {
        let (p, r) = (point(&self.v, p)?, point(&self.v, r)?);
        Ok(Value(self.v.coleman_gross_hp(&p, &r).map_err(to_py)?))
    }
}

impl Curve {
    fn form(&self, omega: &Bound<'_, PyAny>, nu: Option<&Bound<'_, PyAny>>) -> PyResult<MeromorphicForm> {
        let mut form = MeromorphicForm::zero(self.v.field());
        form.omega = omega.try_iter()?.map(|c| element(&self.v, &c?)).collect::<PyResult<_>>()?;
        if let Some(nu) = nu {
            for pair in nu.try_iter()? {
                let (beta, c): (Bound<'_, PyAny>, Bound<'_, PyAny>) = pair?.extract()?;
                form.nu.push((element(&self.v, &beta)?, element(&self.v, &c)?));
            }
        }
        Ok(form)
    }
}

#[pymodule]
pub fn pyvolint(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Curve>()?;
    m.add_class::<Value>()?;
    m.add("ComputationError", m.py().get_type::<ComputationError>())?;
    m.add("BackendUnavailable", m.py().get_type::<BackendUnavailable>())?;
    Ok(())
}

//! Python bindings for the two-valued group engine.
//!
//! Exposes the exact polynomial type (`Poly`), the family constructors, the
//! law audit, the finite-field operator system (`HeckeSystem`), the elliptic
//! coset cross-check, and the ⋆/Möbius/locus reports. Reports come back as
//! plain dicts mirroring the CLI's JSON payloads; `run_cli` gives access to
//! the complete CLI surface with the identical deterministic envelope.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::{json, Value};

use twoval_core::cli::{law_report_json, parse_args, run};
use twoval_core::exactnum::{rat, rat_parse, rat_to_string, FqElement, Rational};
use twoval_core::families::{
    self, BuchstaberParams, KontsevichParams,
};
use twoval_core::grouplaw::{self, AssocMode, IdentityPoint};
use twoval_core::hecke;
use twoval_core::mpoly::{self, substitute, var_id, QPoly, RationalSubst};
use twoval_core::{elliptic, starinv};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn value_to_py(py: Python<'_>, v: &Value) -> PyResult<PyObject> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py(py)
            } else {
                n.as_f64().expect("finite JSON number").into_py(py)
            }
        }
        Value::String(s) => s.into_py(py),
        Value::Array(items) => {
            let list = PyList::empty_bound(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.into_py(py)
        }
        Value::Object(map) => {
            let dict = PyDict::new_bound(py);
            for (k, val) in map {
                dict.set_item(k, value_to_py(py, val)?)?;
            }
            dict.into_py(py)
        }
    })
}

fn any_to_rational(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(i) = v.extract::<i64>() {
        return Ok(rat(i));
    }
    let s: String = v.extract()?;
    rat_parse(&s).map_err(err)
}

/// All three → rational parameters, none → symbolic, partial → error.
fn triple_params(
    vals: [&Option<Bound<'_, PyAny>>; 3],
    names: [&str; 3],
) -> PyResult<Option<[Rational; 3]>> {
    match vals {
        [Some(a), Some(b), Some(c)] => Ok(Some([
            any_to_rational(a)?,
            any_to_rational(b)?,
            any_to_rational(c)?,
        ])),
        [None, None, None] => Ok(None),
        _ => Err(PyValueError::new_err(format!(
            "give all of {} or none (symbolic)",
            names.join(", ")
        ))),
    }
}

fn b_params(
    a1: &Option<Bound<'_, PyAny>>,
    a2: &Option<Bound<'_, PyAny>>,
    a3: &Option<Bound<'_, PyAny>>,
) -> PyResult<BuchstaberParams> {
    Ok(match triple_params([a1, a2, a3], ["a1", "a2", "a3"])? {
        Some([a1, a2, a3]) => BuchstaberParams::rational(a1, a2, a3),
        None => BuchstaberParams::symbolic(),
    })
}

fn k_params(
    a: &Option<Bound<'_, PyAny>>,
    b: &Option<Bound<'_, PyAny>>,
    c: &Option<Bound<'_, PyAny>>,
) -> PyResult<KontsevichParams> {
    Ok(match triple_params([a, b, c], ["a", "b", "c"])? {
        Some([a, b, c]) => KontsevichParams::rational(a, b, c),
        None => KontsevichParams::symbolic(),
    })
}

/// An exact multivariate polynomial over ℚ on the fixed variable registry
/// (x, y, z, w, u, v, t, homogenization pairs, and parameter names).
#[pyclass(module = "twoval")]
#[derive(Clone)]
struct Poly {
    inner: QPoly,
}

#[pymethods]
impl Poly {
    /// A registry variable, e.g. Poly.variable("x").
    #[staticmethod]
    fn variable(name: &str) -> PyResult<Poly> {
        var_id(name).map_err(err)?;
        Ok(Poly {
            inner: QPoly::qvar(name),
        })
    }

    /// A constant polynomial from an int or a "p/q" string.
    #[staticmethod]
    fn constant(value: &Bound<'_, PyAny>) -> PyResult<Poly> {
        Ok(Poly {
            inner: QPoly::constant(any_to_rational(value)?),
        })
    }

    /// Parses the serialized polynomial schema produced by to_json().
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Poly> {
        let v: Value = serde_json::from_str(text).map_err(err)?;
        Ok(Poly {
            inner: QPoly::from_json(&v).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({})", self.inner)
    }

    fn __eq__(&self, other: &Poly) -> bool {
        self.inner == other.inner
    }

    fn __add__(&self, other: &Poly) -> Poly {
        Poly {
            inner: self.inner.add(&other.inner),
        }
    }

    fn __sub__(&self, other: &Poly) -> Poly {
        Poly {
            inner: self.inner.sub(&other.inner),
        }
    }

    fn __mul__(&self, other: &Poly) -> Poly {
        Poly {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn __neg__(&self) -> Poly {
        Poly {
            inner: self.inner.neg(),
        }
    }

    fn pow(&self, n: u32) -> Poly {
        Poly {
            inner: self.inner.pow(n),
        }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn total_degree(&self) -> u32 {
        self.inner.total_degree()
    }

    fn degree_in(&self, name: &str) -> PyResult<u32> {
        Ok(self.inner.degree_in(var_id(name).map_err(err)?))
    }

    fn num_terms(&self) -> usize {
        self.inner.num_terms()
    }

    /// Variable names appearing in the polynomial.
    fn variables(&self) -> Vec<String> {
        self.inner
            .vars()
            .iter()
            .map(|&v| mpoly::REGISTRY[v].to_string())
            .collect()
    }

    /// Simultaneous substitution: {"x": poly_or_int_or_"p/q", ...}.
    fn subs(&self, map: &Bound<'_, PyDict>) -> PyResult<Poly> {
        let mut s = RationalSubst::new();
        for (k, v) in map.iter() {
            let name: String = k.extract()?;
            let id = var_id(&name).map_err(err)?;
            let value = if let Ok(p) = v.extract::<Poly>() {
                p.inner
            } else {
                QPoly::constant(any_to_rational(&v)?)
            };
            s = s.set_poly(id, value);
        }
        let (n, d) = substitute(&self.inner, &s).map_err(err)?;
        debug_assert_eq!(d.as_constant(), Some(rat(1)));
        Ok(Poly { inner: n })
    }
}

/// Resultant of two polynomials with respect to a variable.
#[pyfunction]
fn resultant(p: &Poly, q: &Poly, var: &str) -> PyResult<Poly> {
    Ok(Poly {
        inner: mpoly::resultant(&p.inner, &q.inner, var_id(var).map_err(err)?).map_err(err)?,
    })
}

/// Discriminant of a polynomial with respect to a variable.
#[pyfunction]
fn discriminant(p: &Poly, var: &str) -> PyResult<Poly> {
    Ok(Poly {
        inner: mpoly::discriminant(&p.inner, var_id(var).map_err(err)?).map_err(err)?,
    })
}

/// The three-parameter symmetric family B_{a₁,a₂,a₃} (symbolic parameters
/// when none are given).
#[pyfunction]
#[pyo3(signature = (a1=None, a2=None, a3=None))]
fn buchstaber(
    a1: Option<Bound<'_, PyAny>>,
    a2: Option<Bound<'_, PyAny>>,
    a3: Option<Bound<'_, PyAny>>,
) -> PyResult<Poly> {
    Ok(Poly {
        inner: families::buchstaber(&b_params(&a1, &a2, &a3)?),
    })
}

/// The cubic-generated symmetric family D_{a,b,c}.
#[pyfunction]
#[pyo3(signature = (a=None, b=None, c=None))]
fn kontsevich(
    a: Option<Bound<'_, PyAny>>,
    b: Option<Bound<'_, PyAny>>,
    c: Option<Bound<'_, PyAny>>,
) -> PyResult<Poly> {
    Ok(Poly {
        inner: families::kontsevich(&k_params(&a, &b, &c)?),
    })
}

/// The classical one-parameter polynomial P_t (symbolic t by default).
#[pyfunction]
#[pyo3(signature = (t=None))]
fn classical(t: Option<Bound<'_, PyAny>>) -> PyResult<Poly> {
    let tp = match t {
        Some(v) => QPoly::constant(any_to_rational(&v)?),
        None => QPoly::qvar("t"),
    };
    Ok(Poly {
        inner: families::kontsevich_classical(&tp),
    })
}

/// The n-th power law p_n (2 ≤ n ≤ 6).
#[pyfunction]
fn p_n(n: u32) -> PyResult<Poly> {
    Ok(Poly {
        inner: families::p_n(n).map_err(err)?,
    })
}

/// Coefficients (A, B, C) of the D-family multiplication law A·z² + B·z + C.
#[pyfunction]
#[pyo3(signature = (a=None, b=None, c=None))]
fn law_triple(
    a: Option<Bound<'_, PyAny>>,
    b: Option<Bound<'_, PyAny>>,
    c: Option<Bound<'_, PyAny>>,
) -> PyResult<(Poly, Poly, Poly)> {
    let triple = families::law_triple(&k_params(&a, &b, &c)?);
    Ok((
        Poly { inner: triple.a },
        Poly { inner: triple.b },
        Poly { inner: triple.c },
    ))
}

/// Audits a law polynomial (identity, inverse, associativity, discriminant
/// split) and returns the report as a dict. `e` is a rational or "inf".
#[pyfunction]
#[pyo3(signature = (law, e="0", seed=0, samples=20, symbolic=false))]
fn check_law(
    py: Python<'_>,
    law: &Poly,
    e: &str,
    seed: u64,
    samples: usize,
    symbolic: bool,
) -> PyResult<PyObject> {
    let point = if e == "inf" {
        IdentityPoint::Infinity
    } else {
        IdentityPoint::Finite(rat_parse(e).map_err(err)?)
    };
    let mode = if symbolic {
        AssocMode::Symbolic
    } else {
        AssocMode::Specialize { seed, samples }
    };
    let rep = grouplaw::check_law(&law.inner, &point, mode, None).map_err(err)?;
    let mut payload = law_report_json(&rep, &point, &mode);
    payload["pass"] = json!(rep.all_pass());
    value_to_py(py, &payload)
}

/// The finite-field operator system {T_x : x ∈ ℙ¹(𝔽_q)} of the classical
/// family at parameter t.
#[pyclass(module = "twoval", name = "HeckeSystem")]
struct PyHeckeSystem {
    inner: hecke::HeckeSystem,
}

#[pymethods]
impl PyHeckeSystem {
    #[new]
    fn new(q: u64, t: u64) -> PyResult<Self> {
        Ok(PyHeckeSystem {
            inner: hecke::HeckeSystem::build(q, t).map_err(err)?,
        })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn t(&self) -> u64 {
        self.inner.t().residue()
    }

    /// Matrix size q + 1 (index order 0, …, q−1, ∞).
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn operator(&self, x: u64) -> Vec<Vec<i64>> {
        self.inner.operator(x).clone()
    }

    fn infinity_operator(&self) -> Vec<Vec<i64>> {
        self.inner.infinity_operator()
    }

    fn branch_points(&self) -> Vec<u64> {
        self.inner.branch_points()
    }

    fn degenerate_pairs(&self) -> Vec<(u64, u64)> {
        self.inner.degenerate_pairs()
    }

    fn row_sums(&self, x: u64) -> Vec<i64> {
        self.inner.row_sums(x)
    }

    fn to_csv(&self, x: u64) -> String {
        self.inner.to_csv(x)
    }

    fn verify_commute(&self, py: Python<'_>) -> PyResult<PyObject> {
        let rep = self.inner.verify_commute();
        value_to_py(
            py,
            &json!({
                "pass": rep.pass,
                "pairs": rep.pairs,
                "commute_over_z": rep.commute_over_z,
                "first_failure": rep.first_failure,
            }),
        )
    }

    fn verify_algebra(&self, py: Python<'_>) -> PyResult<PyObject> {
        let rep = self.inner.verify_algebra();
        value_to_py(
            py,
            &json!({
                "pass": rep.pass,
                "closes_with_infinity": rep.closes_with_infinity,
                "closes_without_infinity": rep.closes_without_infinity,
                "diagonal_only_defect": rep.diagonal_only_defect,
            }),
        )
    }

    fn mutate_entry(&mut self, x: u64, y: usize, z: usize, delta: i64) {
        self.inner.mutate_entry(x, y, z, delta);
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<PyObject> {
        value_to_py(py, &self.inner.to_json())
    }
}

fn base_point_str(p: &elliptic::BasePoint<FqElement>) -> String {
    match p {
        elliptic::BasePoint::Finite(v) => v.residue().to_string(),
        elliptic::BasePoint::Infinity => "inf".into(),
    }
}

/// Multiplies x·y through the elliptic curve w² = t³+at²+bt+c over 𝔽_q and
/// cross-checks against the root multiset of the law quadratic.
#[pyfunction]
#[pyo3(signature = (q, x, y, a=None, b=None, c=None))]
fn coset_vs_law(
    py: Python<'_>,
    q: u64,
    x: i64,
    y: i64,
    a: Option<Bound<'_, PyAny>>,
    b: Option<Bound<'_, PyAny>>,
    c: Option<Bound<'_, PyAny>>,
) -> PyResult<PyObject> {
    let params = match triple_params([&a, &b, &c], ["a", "b", "c"])? {
        Some([a, b, c]) => KontsevichParams::rational(a, b, c),
        None => KontsevichParams::rational(rat(0), rat(0), rat(1)),
    };
    let cc = elliptic::coset_vs_law(&params, q, FqElement::of(x, q), FqElement::of(y, q))
        .map_err(err)?;
    value_to_py(
        py,
        &json!({
            "coset": [base_point_str(&cc.coset[0]), base_point_str(&cc.coset[1])],
            "quadratic": cc.quadratic.map(|r| {
                json!([base_point_str(&r[0]), base_point_str(&r[1])])
            }),
            "agree": cc.agree,
        }),
    )
}

/// The ⋆-involution bridge: B in σ-coordinates equals σ₃²·D⋆.
#[pyfunction]
fn star_identity_check(py: Python<'_>) -> PyResult<PyObject> {
    let rep = starinv::star_identity_check().map_err(err)?;
    value_to_py(
        py,
        &json!({
            "pass": rep.pass,
            "star_denominator": rep.star_denominator,
        }),
    )
}

/// Determines the sign of the argument-inversion identity and checks the
/// branch-cubic presentation of disc_z B.
#[pyfunction]
fn kb_check(py: Python<'_>) -> PyResult<PyObject> {
    let rep = starinv::kb_check().map_err(err)?;
    value_to_py(
        py,
        &json!({
            "pass": rep.pass,
            "sign": rep.sign,
            "plus_pass": rep.plus_pass,
            "minus_pass": rep.minus_pass,
            "disc_presentation_pass": rep.disc_presentation_pass,
        }),
    )
}

/// Möbius matching between the homogenized families at parameter A.
#[pyfunction]
#[pyo3(signature = (a_val, a=None, b=None, c=None))]
fn mobius_match_check(
    py: Python<'_>,
    a_val: &Bound<'_, PyAny>,
    a: Option<Bound<'_, PyAny>>,
    b: Option<Bound<'_, PyAny>>,
    c: Option<Bound<'_, PyAny>>,
) -> PyResult<PyObject> {
    let params = match triple_params([&a, &b, &c], ["a", "b", "c"])? {
        Some([a, b, c]) => KontsevichParams::rational(a, b, c),
        None => KontsevichParams::rational(rat(1), rat(2), rat(3)),
    };
    let rep = starinv::mobius_match_check(&any_to_rational(a_val)?, &params).map_err(err)?;
    value_to_py(
        py,
        &json!({
            "pass": rep.pass,
            "ratio": rep.ratio.as_ref().map(rat_to_string),
            "expected_ratio": rat_to_string(&rep.expected_ratio),
            "transported": {
                "a": rat_to_string(&rep.transported.0),
                "b": rat_to_string(&rep.transported.1),
                "c": rat_to_string(&rep.transported.2),
            },
        }),
    )
}

/// Fixed locus of the inversion involution: parametrization, singularity,
/// and the five factor divisibilities.
#[pyfunction]
fn fixed_locus_suite(py: Python<'_>) -> PyResult<PyObject> {
    let rep = starinv::fixed_locus_suite().map_err(err)?;
    value_to_py(
        py,
        &json!({
            "pass": rep.pass,
            "parametrization_pass": rep.parametrization_pass,
            "singular_pass": rep.singular_pass,
            "factors": rep.factors.iter().map(|(f, ok)| json!({
                "factor": f.to_string(),
                "divides": ok,
            })).collect::<Vec<_>>(),
        }),
    )
}

/// Hesse-form checks over ℚ(ζ₃).
#[pyfunction]
fn hesse_substitution_check(py: Python<'_>) -> PyResult<PyObject> {
    let rep = starinv::hesse_substitution_check().map_err(err)?;
    value_to_py(
        py,
        &json!({
            "pass": rep.pass,
            "branch_pass": rep.branch_pass,
            "singular_pass": rep.singular_pass,
            "swap_pass": rep.swap_pass,
        }),
    )
}

/// Runs a full CLI command (same subcommands and flags as the `twoval`
/// binary) and returns the deterministic JSON report as a dict.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> PyResult<PyObject> {
    let cli = parse_args(args).map_err(err)?;
    let report = run(&cli).map_err(err)?;
    value_to_py(py, &report.to_json(cli.seed))
}

#[pymodule]
fn twoval(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Poly>()?;
    m.add_class::<PyHeckeSystem>()?;
    m.add_function(wrap_pyfunction!(resultant, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(buchstaber, m)?)?;
    m.add_function(wrap_pyfunction!(kontsevich, m)?)?;
    m.add_function(wrap_pyfunction!(classical, m)?)?;
    m.add_function(wrap_pyfunction!(p_n, m)?)?;
    m.add_function(wrap_pyfunction!(law_triple, m)?)?;
    m.add_function(wrap_pyfunction!(check_law, m)?)?;
    m.add_function(wrap_pyfunction!(coset_vs_law, m)?)?;
    m.add_function(wrap_pyfunction!(star_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(kb_check, m)?)?;
    m.add_function(wrap_pyfunction!(mobius_match_check, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_locus_suite, m)?)?;
    m.add_function(wrap_pyfunction!(hesse_substitution_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

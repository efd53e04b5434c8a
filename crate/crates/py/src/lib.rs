//! Python bindings for the latcert toolkit.
//!
//! Scalar results come back as native Python values; structured results
//! (profiles, certificates, reports) come back as JSON strings, so the
//! Python side can `json.loads` them without a custom type layer.

use latcert::families;
use latcert::fieldforge::{self, IntPoly};
use latcert::hermform::{self, HermProfile};
use latcert::localsym;
use latcert::quadform::{self, ProfileJson, QuadForm};
use latcert::{Place, Rational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::str::FromStr;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rational(s: &str) -> PyResult<Rational> {
    Rational::from_str(s).map_err(|_| value_err(format!("not a rational number: {s}")))
}

fn parse_place(s: &str) -> PyResult<Place> {
    s.parse().map_err(value_err)
}

fn parse_form(entries: Vec<String>) -> PyResult<QuadForm> {
    let entries: PyResult<Vec<Rational>> =
        entries.iter().map(|e| parse_rational(e)).collect();
    QuadForm::new(entries?).map_err(value_err)
}

fn parse_poly(s: &str) -> PyResult<IntPoly> {
    s.parse().map_err(value_err)
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(value_err)
}

/// Hilbert symbol (a, b) at a place ("real" or a prime), as +1 or -1.
#[pyfunction]
fn hilbert(a: &str, b: &str, place: &str) -> PyResult<i32> {
    let a = parse_rational(a)?;
    let b = parse_rational(b)?;
    let v = parse_place(place)?;
    localsym::hilbert(&a, &b, v).map_err(value_err)
}

/// Legendre symbol (a / p) for an odd prime p.
#[pyfunction]
fn legendre(a: i64, p: u64) -> PyResult<i32> {
    localsym::legendre(a, p).map_err(value_err)
}

/// Canonical square-class representative of `a` at a place.
#[pyfunction]
fn square_class(a: &str, place: &str) -> PyResult<String> {
    let a = parse_rational(a)?;
    let v = parse_place(place)?;
    Ok(localsym::square_class(&a, v)
        .map_err(value_err)?
        .representative
        .to_string())
}

/// Whether the product of Hilbert symbols over the joint support is +1.
#[pyfunction]
fn product_formula_check(a: &str, b: &str) -> PyResult<bool> {
    let a = parse_rational(a)?;
    let b = parse_rational(b)?;
    localsym::product_formula_check(&a, &b).map_err(value_err)
}

/// Full invariant profile of a diagonal form, as a JSON string.
#[pyfunction]
fn form_invariants(entries: Vec<String>) -> PyResult<String> {
    let f = parse_form(entries)?;
    to_json(&ProfileJson::from_profile(&quadform::invariants(&f)))
}

/// Witt index of a diagonal form at a place.
#[pyfunction]
fn witt_index(entries: Vec<String>, place: &str) -> PyResult<usize> {
    let f = parse_form(entries)?;
    Ok(quadform::witt_index(&f, parse_place(place)?))
}

/// Whether a JSON profile satisfies the local-global admissibility test.
#[pyfunction]
fn form_admissible(profile_json: &str) -> PyResult<bool> {
    let pj: ProfileJson = serde_json::from_str(profile_json).map_err(value_err)?;
    let p = pj.to_profile().map_err(value_err)?;
    quadform::admissible(&p).map_err(value_err)
}

/// Diagonal entries of a form realizing a JSON profile.
#[pyfunction]
fn form_realize(profile_json: &str) -> PyResult<Vec<String>> {
    let pj: ProfileJson = serde_json::from_str(profile_json).map_err(value_err)?;
    let p = pj.to_profile().map_err(value_err)?;
    let f = quadform::realize(&p).map_err(value_err)?;
    Ok(f.entries().iter().map(|e| e.to_string()).collect())
}

/// Whether a hermitian profile (JSON) satisfies the Landherr conditions.
#[pyfunction]
fn landherr_admissible(profile_json: &str) -> PyResult<bool> {
    let h: HermProfile = serde_json::from_str(profile_json).map_err(value_err)?;
    hermform::landherr_admissible(&h).map_err(value_err)
}

/// Hermitian Witt index at a non-split finite place from dimension and
/// discriminant (+1 or -1).
#[pyfunction]
fn herm_witt_index(dim: usize, disc: i32) -> PyResult<usize> {
    if dim == 0 || (disc != 1 && disc != -1) {
        return Err(value_err("need dim >= 1 and disc in {+1, -1}"));
    }
    Ok(hermform::herm_witt_index(dim, disc))
}

/// Local rank of the special unitary group of a hermitian profile (JSON).
#[pyfunction]
fn su_local_rank(profile_json: &str, place: &str) -> PyResult<usize> {
    let h: HermProfile = serde_json::from_str(profile_json).map_err(value_err)?;
    hermform::su_local_rank(&h, place).map_err(value_err)
}

/// Verified pair of degree d*k algebras, locally but not globally
/// isomorphic, as a JSON report.
#[pyfunction]
#[pyo3(signature = (d, k, real_ramified = false))]
fn brauer_pair(d: u64, k: u64, real_ramified: bool) -> PyResult<String> {
    let pair = latcert::brauer::find_pair_prop36(d, k, real_ramified).map_err(value_err)?;
    to_json(&pair)
}

/// Exact number of distinct real roots of a squarefree integer polynomial
/// given as comma-separated coefficients, constant first.
#[pyfunction]
fn sturm_count(poly: &str) -> PyResult<usize> {
    fieldforge::sturm_count(&parse_poly(poly)?).map_err(value_err)
}

/// Irreducibility over the rationals.
#[pyfunction]
fn is_irreducible(poly: &str) -> PyResult<bool> {
    Ok(fieldforge::is_irreducible(&parse_poly(poly)?))
}

/// Symmetric-group certificate for an irreducible polynomial, as JSON.
#[pyfunction]
#[pyo3(signature = (poly, bound = 200))]
fn certify_sn(poly: &str, bound: u64) -> PyResult<String> {
    let cert =
        fieldforge::certify_sn_with_bound(&parse_poly(poly)?, bound).map_err(value_err)?;
    to_json(&cert)
}

/// Certified polynomial with exactly one complex place in prime degree p:
/// JSON with the polynomial, its certificate, and its place profile.
#[pyfunction]
#[pyo3(signature = (p, height = 40))]
fn find_type_ii_poly(p: u64, height: u64) -> PyResult<String> {
    let (f, cert, profile) =
        fieldforge::find_type_ii_poly_with_bound(p, height).map_err(value_err)?;
    to_json(&serde_json::json!({
        "poly": f.to_string(),
        "certificate": cert,
        "profile": profile,
    }))
}

/// Certified totally real polynomial of degree n, same JSON shape.
#[pyfunction]
#[pyo3(signature = (n, bound = 40))]
fn find_type_i_poly(n: usize, bound: u64) -> PyResult<String> {
    let (f, cert, profile) =
        fieldforge::find_type_i_poly_with_bound(n, bound).map_err(value_err)?;
    to_json(&serde_json::json!({
        "poly": f.to_string(),
        "certificate": cert,
        "profile": profile,
    }))
}

/// Factor-degree comparison of two polynomials up to a prime bound, as
/// JSON ("Consistent" or a refutation with its witness prime).
#[pyfunction]
#[pyo3(signature = (f, g, bound = 500))]
fn arith_equiv(f: &str, g: &str, bound: u64) -> PyResult<String> {
    to_json(&fieldforge::arith_equiv_upto(
        &parse_poly(f)?,
        &parse_poly(g)?,
        bound,
    ))
}

/// Family certificate for the special unitary construction, as JSON.
#[pyfunction]
fn build_su_family(r: u32, s: u32, n: usize) -> PyResult<String> {
    to_json(&families::build_su_family(r, s, n).map_err(value_err)?)
}

/// Family certificate for the spin construction, as JSON.
#[pyfunction]
fn build_so_family(r: u32, s: u32, n: usize) -> PyResult<String> {
    to_json(&families::build_so_family(r, s, n).map_err(value_err)?)
}

/// Independent re-verification of a family certificate (JSON in, JSON out).
#[pyfunction]
fn verify_family(cert_json: &str) -> PyResult<String> {
    let cert: families::FamilyCertificate =
        serde_json::from_str(cert_json).map_err(value_err)?;
    to_json(&families::verify_family(&cert.descriptors).map_err(value_err)?)
}

/// Size of a subfamily guaranteed to share one of c classes among n items.
#[pyfunction]
fn pigeonhole_bound(n: u64, c: u64) -> PyResult<u64> {
    if n == 0 || c == 0 {
        return Err(value_err("need n >= 1 and c >= 1"));
    }
    Ok(families::pigeonhole_bound(n, c))
}

#[pymodule]
fn latcert_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(hilbert, m)?)?;
    m.add_function(wrap_pyfunction!(legendre, m)?)?;
    m.add_function(wrap_pyfunction!(square_class, m)?)?;
    m.add_function(wrap_pyfunction!(product_formula_check, m)?)?;
    m.add_function(wrap_pyfunction!(form_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(witt_index, m)?)?;
    m.add_function(wrap_pyfunction!(form_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(form_realize, m)?)?;
    m.add_function(wrap_pyfunction!(landherr_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(herm_witt_index, m)?)?;
    m.add_function(wrap_pyfunction!(su_local_rank, m)?)?;
    m.add_function(wrap_pyfunction!(brauer_pair, m)?)?;
    m.add_function(wrap_pyfunction!(sturm_count, m)?)?;
    m.add_function(wrap_pyfunction!(is_irreducible, m)?)?;
    m.add_function(wrap_pyfunction!(certify_sn, m)?)?;
    m.add_function(wrap_pyfunction!(find_type_ii_poly, m)?)?;
    m.add_function(wrap_pyfunction!(find_type_i_poly, m)?)?;
    m.add_function(wrap_pyfunction!(arith_equiv, m)?)?;
    m.add_function(wrap_pyfunction!(build_su_family, m)?)?;
    m.add_function(wrap_pyfunction!(build_so_family, m)?)?;
    m.add_function(wrap_pyfunction!(verify_family, m)?)?;
    m.add_function(wrap_pyfunction!(pigeonhole_bound, m)?)?;
    Ok(())
}

//! Diagonal quadratic forms over the rationals: complete local invariants,
//! Witt decomposition at every place, isometry testing, and realization of
//! forms from prescribed admissible invariant profiles.

use crate::localsym::{hilbert, square_class, Place, SymbolError};
use crate::rational::{odd_prime_support, rat, squarefree_part, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadFormError {
    #[error("diagonal entries must be nonzero")]
    ZeroEntry,
    #[error("a quadratic form needs at least one entry")]
    Empty,
    #[error("profile is malformed: {0}")]
    Malformed(String),
    #[error("profile is not admissible: {0}")]
    Inadmissible(String),
    #[error("realization search exhausted its candidate bound")]
    SearchExhausted,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// A nondegenerate diagonal quadratic form over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadForm {
    entries: Vec<Rational>,
}

impl QuadForm {
    pub fn new(entries: Vec<Rational>) -> Result<Self, QuadFormError> {
        if entries.is_empty() {
            return Err(QuadFormError::Empty);
        }
        if entries.iter().any(Rational::is_zero) {
            return Err(QuadFormError::ZeroEntry);
        }
        Ok(QuadForm { entries })
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self, QuadFormError> {
        Self::new(entries.iter().map(|&n| rat(n)).collect())
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> Rational {
        self.entries.iter().product()
    }

    /// Real signature (positive count, negative count).
    pub fn signature(&self) -> (usize, usize) {
        let pos = self.entries.iter().filter(|a| a.is_positive()).count();
        (pos, self.entries.len() - pos)
    }
}

/// Complete local invariant profile of a nondegenerate form: dimension,
/// global determinant class, real signature, and the finite-place Hasse map
/// (stored sparsely; absent places carry the value +1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QFProfile {
    pub dim: usize,
    /// Squarefree integer representative of the determinant modulo squares.
    pub det: Rational,
    pub signature: (usize, usize),
    /// Finite places with Hasse invariant -1.
    pub hasse_minus: BTreeSet<Place>,
}

impl QFProfile {
    pub fn new(
        dim: usize,
        det: Rational,
        signature: (usize, usize),
        hasse_minus: BTreeSet<Place>,
    ) -> Result<Self, QuadFormError> {
        if dim == 0 {
            return Err(QuadFormError::Malformed("dimension must be positive".into()));
        }
        if det.is_zero() {
            return Err(QuadFormError::Malformed("determinant must be nonzero".into()));
        }
        if hasse_minus.contains(&Place::Real) {
            return Err(QuadFormError::Malformed(
                "the real Hasse value is implied by the signature".into(),
            ));
        }
        Ok(QFProfile {
            dim,
            det: Rational::from_integer(squarefree_part(&det)),
            signature,
            hasse_minus,
        })
    }

    pub fn hasse_at(&self, v: Place) -> i32 {
        match v {
            Place::Real => real_hasse(self.signature.1),
            _ => {
                if self.hasse_minus.contains(&v) {
                    -1
                } else {
                    1
                }
            }
        }
    }
}

/// Real Hasse invariant implied by a signature with `s` negative entries.
pub fn real_hasse(s: usize) -> i32 {
    if (s * (s.saturating_sub(1)) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Hasse invariant of `f` at `v`: the product of Hilbert symbols of all
/// entry pairs with i < j.
pub fn hasse_invariant(f: &QuadForm, v: Place) -> i32 {
    let es = f.entries();
    let mut s = 1;
    for i in 0..es.len() {
        for j in (i + 1)..es.len() {
            s *= hilbert(&es[i], &es[j], v).expect("nonzero entries");
        }
    }
    s
}

/// Full invariant profile of a form.
pub fn invariants(f: &QuadForm) -> QFProfile {
    let det = f.det();
    let mut hasse_minus = BTreeSet::new();
    let mut places: BTreeSet<Place> = BTreeSet::new();
    places.insert(Place::Finite(2));
    for a in f.entries() {
        for p in odd_prime_support(a) {
            places.insert(Place::Finite(p));
        }
    }
    for v in places {
        if hasse_invariant(f, v) == -1 {
            hasse_minus.insert(v);
        }
    }
    QFProfile::new(f.dim(), det, f.signature(), hasse_minus).expect("forms yield valid profiles")
}

fn is_local_square(a: &Rational, v: Place) -> bool {
    square_class(a, v).expect("nonzero").representative.is_one()
}

/// Whether a form with the given local data is isotropic over the completion
/// at a finite prime.
fn isotropic_at_finite(dim: usize, det: &Rational, eps: i32, p: u64) -> bool {
    let v = Place::Finite(p);
    match dim {
        0 | 1 => false,
        2 => is_local_square(&-det.clone(), v),
        3 => {
            let t = hilbert(&rat(-1), &(-det.clone()), v).expect("nonzero");
            eps == t
        }
        4 => {
            if !is_local_square(det, v) {
                true
            } else {
                eps == hilbert(&rat(-1), &rat(-1), v).expect("nonzero")
            }
        }
        _ => true,
    }
}

/// Witt index over the completion at `p` of a form with the given dimension,
/// determinant class, and Hasse invariant.
pub fn witt_index_from_invariants(dim: usize, det: &Rational, eps: i32, p: u64) -> usize {
    let mut dim = dim;
    let mut det = det.clone();
    let mut eps = eps;
    let mut w = 0;
    while dim >= 2 && isotropic_at_finite(dim, &det, eps, p) {
        dim -= 2;
        det = -det;
        if dim > 0 {
            eps *= hilbert(&det, &rat(-1), Place::Finite(p)).expect("nonzero");
        }
        w += 1;
    }
    w
}

/// Number of hyperbolic planes split off by `f` over the completion at `v`.
pub fn witt_index(f: &QuadForm, v: Place) -> usize {
    match v {
        Place::Real => {
            let (r, s) = f.signature();
            r.min(s)
        }
        Place::Finite(p) => {
            witt_index_from_invariants(f.dim(), &f.det(), hasse_invariant(f, v), p)
        }
    }
}

/// Isometry over the rationals, by the Hasse-Minkowski classification:
/// equal dimension, global determinant class, signature, and Hasse maps.
pub fn isometric(f: &QuadForm, g: &QuadForm) -> bool {
    invariants(f) == invariants(g)
}

/// Realizability of a profile by an actual form over the rationals.
///
/// Malformed profiles (signature not summing to the dimension) are an
/// error, not `false`.
pub fn admissible(p: &QFProfile) -> Result<bool, QuadFormError> {
    let (r, s) = p.signature;
    if r + s != p.dim {
        return Err(QuadFormError::Malformed(format!(
            "signature ({r},{s}) does not sum to dim {}",
            p.dim
        )));
    }
    // determinant sign at the real place
    let want_neg = s % 2 == 1;
    if p.det.is_negative() != want_neg {
        return Ok(false);
    }
    // global product formula, with the real value implied by the signature
    let mut prod = real_hasse(s);
    for _ in &p.hasse_minus {
        prod = -prod;
    }
    if prod != 1 {
        return Ok(false);
    }
    // low-dimension exclusions
    if p.dim == 1 && !p.hasse_minus.is_empty() {
        return Ok(false);
    }
    if p.dim == 2 {
        for &v in &p.hasse_minus {
            if is_local_square(&-p.det.clone(), v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Deterministic candidate entries: signed squarefree products over a small
/// prime pool, ordered by magnitude with the positive sign first.
fn candidate_entries(support: &BTreeSet<u64>) -> Vec<Rational> {
    let mut pool: BTreeSet<u64> = [2, 3, 5, 7, 11, 13].into_iter().collect();
    pool.extend(support.iter().copied());
    let pool: Vec<u64> = pool.into_iter().collect();
    let mut values: Vec<i64> = Vec::new();
    for mask in 0u32..(1 << pool.len()) {
        let mut v: i64 = 1;
        for (i, &p) in pool.iter().enumerate() {
            if mask & (1 << i) != 0 {
                v = v.saturating_mul(p as i64);
            }
        }
        values.push(v);
    }
    values.sort_unstable();
    values.dedup();
    let mut out = Vec::with_capacity(values.len() * 2);
    for v in values {
        out.push(rat(v));
        out.push(rat(-v));
    }
    out
}

fn profile_support(p: &QFProfile) -> BTreeSet<u64> {
    let mut s: BTreeSet<u64> = odd_prime_support(&p.det).into_iter().collect();
    s.insert(2);
    for v in &p.hasse_minus {
        if let Place::Finite(q) = v {
            s.insert(*q);
        }
    }
    s
}

/// Places at which the Hasse invariant of a candidate binary form must be
/// checked: the profile support plus every prime occurring in the entries.
fn check_places(p: &QFProfile, extra: &[&Rational]) -> BTreeSet<Place> {
    let mut places: BTreeSet<Place> = profile_support(p)
        .into_iter()
        .map(Place::Finite)
        .collect();
    for a in extra {
        for q in odd_prime_support(a) {
            places.insert(Place::Finite(q));
        }
    }
    places
}

fn realize_dim1(p: &QFProfile) -> Result<QuadForm, QuadFormError> {
    QuadForm::new(vec![p.det.clone()])
}

fn realize_dim2(p: &QFProfile) -> Result<QuadForm, QuadFormError> {
    let (_, s) = p.signature;
    for a in candidate_entries(&profile_support(p)) {
        let b = Rational::from_integer(squarefree_part(&(p.det.clone() / &a)));
        // sign pattern must match the signature
        let negs = [&a, &b].iter().filter(|x| x.is_negative()).count();
        if negs != s {
            continue;
        }
        let places = check_places(p, &[&a, &b]);
        let ok = places
            .iter()
            .all(|&v| hilbert(&a, &b, v).expect("nonzero") == p.hasse_at(v))
            && hilbert(&a, &b, Place::Real).expect("nonzero") == real_hasse(s);
        if ok {
            return QuadForm::new(vec![a, b]);
        }
    }
    Err(QuadFormError::SearchExhausted)
}

/// Profile of `g` where `f = <a> ⊥ g`, given the profile of `f`.
fn peel(p: &QFProfile, a: &Rational) -> Result<QFProfile, QuadFormError> {
    let (r, s) = p.signature;
    let sig = if a.is_positive() {
        (r - 1, s)
    } else {
        (r, s - 1)
    };
    let det_g = Rational::from_integer(squarefree_part(&(p.det.clone() / a)));
    // eps_f(v) = eps_g(v) * (a, det_g)_v
    let mut hasse_minus = BTreeSet::new();
    let mut places = check_places(p, &[a, &det_g]);
    places.extend(p.hasse_minus.iter().copied());
    for v in places {
        let adj = hilbert(a, &det_g, v)?;
        if p.hasse_at(v) * adj == -1 {
            hasse_minus.insert(v);
        }
    }
    QFProfile::new(p.dim - 1, det_g, sig, hasse_minus)
}

/// Construct a diagonal form whose invariants are exactly `p`.
///
/// The form is built one entry at a time; each entry is the first candidate
/// in a fixed magnitude ordering whose peeled remainder profile is still
/// admissible.  The output is deterministic and round-trips through
/// `invariants`.
pub fn realize(p: &QFProfile) -> Result<QuadForm, QuadFormError> {
    if !admissible(p)? {
        return Err(QuadFormError::Inadmissible(describe_violation(p)));
    }
    let form = realize_rec(p)?;
    debug_assert_eq!(&invariants(&form), p);
    Ok(form)
}

fn realize_rec(p: &QFProfile) -> Result<QuadForm, QuadFormError> {
    match p.dim {
        1 => realize_dim1(p),
        2 => realize_dim2(p),
        _ => {
            let (r, _) = p.signature;
            for a in candidate_entries(&profile_support(p)) {
                if a.is_positive() && r == 0 {
                    continue;
                }
                if a.is_negative() && p.signature.1 == 0 {
                    continue;
                }
                let rest = peel(p, &a)?;
                if admissible(&rest)? {
                    if let Ok(g) = realize_rec(&rest) {
                        let mut entries = vec![a];
                        entries.extend(g.entries().iter().cloned());
                        let f = QuadForm::new(entries)?;
                        if &invariants(&f) == p {
                            return Ok(f);
                        }
                    }
                }
            }
            Err(QuadFormError::SearchExhausted)
        }
    }
}

fn describe_violation(p: &QFProfile) -> String {
    let (_, s) = p.signature;
    if p.det.is_negative() != (s % 2 == 1) {
        return "determinant sign contradicts the signature".into();
    }
    let mut prod = real_hasse(s);
    for _ in &p.hasse_minus {
        prod = -prod;
    }
    if prod != 1 {
        return "global Hasse product formula is violated".into();
    }
    if p.dim == 1 && !p.hasse_minus.is_empty() {
        return "dimension 1 forces the Hasse map to be trivial".into();
    }
    if p.dim == 2 {
        for &v in &p.hasse_minus {
            if is_local_square(&-p.det.clone(), v) {
                return format!("dimension 2 forbids Hasse -1 at {v} where -det is a square");
            }
        }
    }
    "profile violates a realizability constraint".into()
}

/// JSON-facing profile with places as strings and an explicit Hasse map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileJson {
    pub dim: usize,
    pub det: String,
    pub signature: (usize, usize),
    #[serde(default)]
    pub hasse: BTreeMap<String, i32>,
}

impl ProfileJson {
    pub fn to_profile(&self) -> Result<QFProfile, QuadFormError> {
        let det: Rational = self
            .det
            .parse()
            .map_err(|_| QuadFormError::Malformed(format!("bad determinant: {}", self.det)))?;
        let mut hasse_minus = BTreeSet::new();
        for (k, &val) in &self.hasse {
            let place: Place = k
                .parse()
                .map_err(|_| QuadFormError::Malformed(format!("bad place: {k}")))?;
            match val {
                1 => {}
                -1 => {
                    hasse_minus.insert(place);
                }
                _ => {
                    return Err(QuadFormError::Malformed(format!(
                        "Hasse values must be +1 or -1, got {val}"
                    )))
                }
            }
        }
        QFProfile::new(self.dim, det, self.signature, hasse_minus)
    }

    pub fn from_profile(p: &QFProfile) -> Self {
        let hasse = p
            .hasse_minus
            .iter()
            .map(|v| (v.to_string(), -1))
            .collect();
        ProfileJson {
            dim: p.dim,
            det: p.det.to_string(),
            signature: p.signature,
            hasse,
        }
    }
}

//! Central simple algebras over the rationals as Brauer classes given by
//! finite local invariant vectors, the tensor/opposite/index calculus, and
//! the division-algebra pair search behind the non-cocompact special linear
//! families.

use crate::localsym::Place;
use crate::rational::{primes_from, rat, ratio, Rational};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BrauerError {
    #[error("local invariants must lie in [0, 1), got {0}")]
    OutOfRange(Rational),
    #[error("the real invariant must be 0 or 1/2, got {0}")]
    BadRealInvariant(Rational),
    #[error("invariant sum {0} is not an integer")]
    SumCondition(Rational),
    #[error("degree parameter must satisfy {0}")]
    BadParameter(&'static str),
}

/// A Brauer class over the rationals: a finite map from places to
/// invariants in [0, 1) summing to an integer, with the real invariant
/// restricted to 0 or 1/2.  Zero invariants are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerClass {
    inv: BTreeMap<Place, Rational>,
}

impl BrauerClass {
    pub fn trivial() -> Self {
        BrauerClass {
            inv: BTreeMap::new(),
        }
    }

    /// Validate and normalize an invariant map into a class.
    pub fn new(inv: BTreeMap<Place, Rational>) -> Result<Self, BrauerError> {
        let mut sum = Rational::zero();
        let mut clean = BTreeMap::new();
        for (v, x) in inv {
            if x.is_negative() || x >= rat(1) {
                return Err(BrauerError::OutOfRange(x));
            }
            if v == Place::Real && !x.is_zero() && x != ratio(1, 2) {
                return Err(BrauerError::BadRealInvariant(x));
            }
            sum += &x;
            if !x.is_zero() {
                clean.insert(v, x);
            }
        }
        if !sum.is_integer() {
            return Err(BrauerError::SumCondition(sum));
        }
        Ok(BrauerClass { inv: clean })
    }

    pub fn invariants(&self) -> &BTreeMap<Place, Rational> {
        &self.inv
    }

    pub fn invariant_at(&self, v: Place) -> Rational {
        self.inv.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = Place> + '_ {
        self.inv.keys().copied()
    }

    pub fn is_trivial(&self) -> bool {
        self.inv.is_empty()
    }
}

fn frac_mod_one(x: Rational) -> Rational {
    let f = x.fract();
    if f.is_negative() {
        f + rat(1)
    } else {
        f
    }
}

/// Tensor product of classes: invariants add modulo one.
pub fn tensor(a: &BrauerClass, b: &BrauerClass) -> BrauerClass {
    let mut inv = a.inv.clone();
    for (v, x) in &b.inv {
        let e = inv.entry(*v).or_insert_with(Rational::zero);
        *e = frac_mod_one(e.clone() + x);
    }
    inv.retain(|_, x| !x.is_zero());
    BrauerClass { inv }
}

/// Opposite class: invariants negate modulo one.
pub fn opposite(a: &BrauerClass) -> BrauerClass {
    let inv = a
        .inv
        .iter()
        .map(|(v, x)| (*v, frac_mod_one(-x.clone())))
        .filter(|(_, x)| !x.is_zero())
        .collect();
    BrauerClass { inv }
}

/// Index of the class: the lcm of the invariant denominators.
pub fn index(a: &BrauerClass) -> u64 {
    let mut l: u64 = 1;
    for x in a.inv.values() {
        let d = x
            .denom()
            .to_u64_digits()
            .1
            .first()
            .copied()
            .unwrap_or(1);
        l = l.lcm(&d);
    }
    l
}

/// A central simple algebra: a Brauer class blown up by a matrix size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Csa {
    pub class: BrauerClass,
    pub matrix_size: u64,
}

impl Csa {
    pub fn new(class: BrauerClass, matrix_size: u64) -> Result<Self, BrauerError> {
        if matrix_size == 0 {
            return Err(BrauerError::BadParameter("matrix size must be positive"));
        }
        Ok(Csa { class, matrix_size })
    }

    pub fn degree(&self) -> u64 {
        self.matrix_size * index(&self.class)
    }

    pub fn dimension(&self) -> u64 {
        self.degree() * self.degree()
    }
}

/// Global isomorphism: equal Brauer classes and equal degree.
pub fn csa_isomorphic(a: &Csa, b: &Csa) -> bool {
    a.class == b.class && a.degree() == b.degree()
}

/// Isomorphism of the completed algebras at one place.
pub fn csa_locally_isomorphic(a: &Csa, b: &Csa, v: Place) -> bool {
    a.degree() == b.degree() && a.class.invariant_at(v) == b.class.invariant_at(v)
}

/// Verification report for a division-algebra pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairReport {
    pub d: u64,
    pub k: u64,
    pub m: u64,
    pub quaternionic: bool,
    pub e1: BrauerClass,
    pub e2: BrauerClass,
    pub index_e1: u64,
    pub index_e2: u64,
    pub a_iso_b: bool,
    pub a_iso_b_op: bool,
    pub locally_plus_minus: bool,
    pub c_not_opposite: bool,
    pub disjoint_supports: bool,
    pub all_pass: bool,
}

/// Output of the division-algebra pair search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prop36Pair {
    pub c: BrauerClass,
    pub d_class: BrauerClass,
    pub a: Csa,
    pub b: Csa,
    pub report: PairReport,
}

/// Find degree-d division classes C, D with disjoint finite supports such
/// that both C tensor D and C tensor D-opposite have index d, and verify
/// the non-isomorphism and local comparison properties of the matrix
/// algebras built from them.
///
/// With `real_ramified` set (requires even d), C carries real invariant
/// 1/2, which is the variant used for the quaternionic target.
pub fn find_pair_prop36(d: u64, k: u64, real_ramified: bool) -> Result<Prop36Pair, BrauerError> {
    if d < 3 {
        return Err(BrauerError::BadParameter("d must be at least 3"));
    }
    if k < 2 {
        return Err(BrauerError::BadParameter("k must be at least 2"));
    }
    if real_ramified && d % 2 != 0 {
        return Err(BrauerError::BadParameter(
            "a real-ramified division class requires even d",
        ));
    }
    // smallest primes >= 5, in order, skipping 2 and 3
    let ps: Vec<u64> = primes_from(5).take(4).collect();
    let di = d as i64;
    let c = if real_ramified {
        // 1/2 + 1/d + (d-2)/(2d) is an integer and all denominators divide d
        BrauerClass::new(
            [
                (Place::Real, ratio(1, 2)),
                (Place::Finite(ps[0]), ratio(1, di)),
                (Place::Finite(ps[1]), ratio(di - 2, 2 * di)),
            ]
            .into_iter()
            .collect(),
        )?
    } else {
        BrauerClass::new(
            [
                (Place::Finite(ps[0]), ratio(1, di)),
                (Place::Finite(ps[1]), ratio(di - 1, di)),
            ]
            .into_iter()
            .collect(),
        )?
    };
    let dd = BrauerClass::new(
        [
            (Place::Finite(ps[2]), ratio(1, di)),
            (Place::Finite(ps[3]), ratio(di - 1, di)),
        ]
        .into_iter()
        .collect(),
    )?;

    let e1 = tensor(&c, &dd);
    let e2 = tensor(&c, &opposite(&dd));
    let a = Csa::new(e1.clone(), k)?;
    let b = Csa::new(e2.clone(), k)?;

    let a_iso_b = csa_isomorphic(&a, &b);
    let b_op = Csa::new(opposite(&b.class), b.matrix_size)?;
    let a_iso_b_op = csa_isomorphic(&a, &b_op);
    let mut support: Vec<Place> = e1.support().chain(e2.support()).collect();
    support.sort_unstable();
    support.dedup();
    let locally_plus_minus = support.iter().all(|&v| {
        let ia = a.class.invariant_at(v);
        let ib = b.class.invariant_at(v);
        ia == ib || ia == frac_mod_one(-ib)
    });
    let c_not_opposite = opposite(&c) != c && opposite(&dd) != dd;
    let disjoint_supports = c
        .support()
        .filter(|v| *v != Place::Real)
        .all(|v| dd.invariant_at(v).is_zero())
        && dd.support().all(|v| c.invariant_at(v).is_zero() || v == Place::Real);

    let index_e1 = index(&e1);
    let index_e2 = index(&e2);
    let all_pass = !a_iso_b
        && !a_iso_b_op
        && locally_plus_minus
        && c_not_opposite
        && disjoint_supports
        && index_e1 == d
        && index_e2 == d
        && index(&c) == d
        && index(&dd) == d;
    let report = PairReport {
        d,
        k,
        m: d * k,
        quaternionic: real_ramified,
        e1: e1.clone(),
        e2: e2.clone(),
        index_e1,
        index_e2,
        a_iso_b,
        a_iso_b_op,
        locally_plus_minus,
        c_not_opposite,
        disjoint_supports,
        all_pass,
    };
    Ok(Prop36Pair {
        c,
        d_class: dd,
        a,
        b,
        report,
    })
}

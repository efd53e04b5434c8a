//! Exact local symbol arithmetic over the completions of the rationals:
//! Legendre symbols, square classes, and Hilbert symbols at every place
//! including the dyadic and the real one.

use crate::rational::{
    is_prime, odd_prime_support, pow_mod, rat, residue_mod, squarefree_part, unit_part, valuation,
    Rational,
};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A place of the rationals: the real place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Finite(u64),
}

impl Place {
    /// Finite place at a verified prime.
    pub fn finite(p: u64) -> Result<Place, SymbolError> {
        if !is_prime(p) {
            return Err(SymbolError::NotPrime(p));
        }
        Ok(Place::Finite(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = SymbolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("real") || s == "inf" || s == "oo" {
            return Ok(Place::Real);
        }
        let p: u64 = s.parse().map_err(|_| SymbolError::BadPlace(s.to_string()))?;
        Place::finite(p)
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is rejected here; use the dyadic routines")]
    EvenPrime,
    #[error("zero input is not allowed")]
    ZeroInput,
    #[error("unrecognized place: {0}")]
    BadPlace(String),
}

/// Canonical square class of a nonzero rational at a place.
///
/// Over the reals the representative is plus or minus one.  Over the p-adics
/// (p odd) it is one of 1, u, p, up for the least positive non-residue u.
/// Over the 2-adics it is one of plus or minus 1, 2, 5, 10.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareClass {
    pub place: Place,
    pub representative: Rational,
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: i64, p: u64) -> Result<i32, SymbolError> {
    if p == 2 {
        return Err(SymbolError::EvenPrime);
    }
    if !is_prime(p) {
        return Err(SymbolError::NotPrime(p));
    }
    let a = (a.rem_euclid(p as i64)) as u64;
    if a == 0 {
        return Ok(0);
    }
    let e = pow_mod(a, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

fn legendre_rat(a: &Rational, p: u64) -> i32 {
    // a must be a p-adic unit
    let r = residue_mod(a, p);
    let e = pow_mod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&u| pow_mod(u, (p - 1) / 2, p) != 1)
        .expect("every odd prime has a non-residue")
}

/// Hilbert symbol (a, b)_v over the completion of the rationals at `v`.
pub fn hilbert(a: &Rational, b: &Rational, v: Place) -> Result<i32, SymbolError> {
    if a.is_zero() || b.is_zero() {
        return Err(SymbolError::ZeroInput);
    }
    Ok(match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => hilbert_dyadic(a, b),
        Place::Finite(p) => hilbert_odd(a, b, p),
    })
}

fn hilbert_odd(a: &Rational, b: &Rational, p: u64) -> i32 {
    let alpha = valuation(a, p);
    let beta = valuation(b, p);
    let u = unit_part(a, p);
    let w = unit_part(b, p);
    let mut s = 1;
    if alpha.rem_euclid(2) == 1 && beta.rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 && legendre_rat(&u, p) == -1 {
        s = -s;
    }
    if alpha.rem_euclid(2) == 1 && legendre_rat(&w, p) == -1 {
        s = -s;
    }
    s
}

fn hilbert_dyadic(a: &Rational, b: &Rational) -> i32 {
    let alpha = valuation(a, 2);
    let beta = valuation(b, 2);
    let u = unit_part(a, 2);
    let w = unit_part(b, 2);
    let u8r = residue_mod(&u, 8);
    let w8r = residue_mod(&w, 8);
    // epsilon(u) = (u-1)/2 mod 2, omega(u) = (u^2-1)/8 mod 2, both via u mod 8
    let eps = |r: u64| ((r - 1) / 2) % 2;
    let omg = |r: u64| ((r * r - 1) / 8) % 2;
    let exp = eps(u8r) * eps(w8r)
        + (alpha.rem_euclid(2) as u64) * omg(w8r)
        + (beta.rem_euclid(2) as u64) * omg(u8r);
    if exp % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Canonical square class of `a` at `v`.
pub fn square_class(a: &Rational, v: Place) -> Result<SquareClass, SymbolError> {
    if a.is_zero() {
        return Err(SymbolError::ZeroInput);
    }
    let representative = match v {
        Place::Real => {
            if a.is_negative() {
                rat(-1)
            } else {
                rat(1)
            }
        }
        Place::Finite(2) => {
            let alpha = valuation(a, 2).rem_euclid(2);
            let u8r = residue_mod(&unit_part(a, 2), 8);
            let unit_rep = match u8r {
                1 => 1i64,
                3 => -5,
                5 => 5,
                7 => -1,
                _ => unreachable!("odd 2-adic unit mod 8"),
            };
            rat(unit_rep * if alpha == 1 { 2 } else { 1 })
        }
        Place::Finite(p) => {
            let alpha = valuation(a, p).rem_euclid(2);
            let unit_rep = if legendre_rat(&unit_part(a, p), p) == 1 {
                1
            } else {
                least_nonresidue(p) as i64
            };
            rat(unit_rep * if alpha == 1 { p as i64 } else { 1 })
        }
    };
    Ok(SquareClass {
        place: v,
        representative,
    })
}

/// Places where the Hilbert symbol of `a` and `b` can possibly be nontrivial:
/// the real place together with 2 and the odd primes dividing either argument.
pub fn symbol_support(a: &Rational, b: &Rational) -> Vec<Place> {
    let mut places = vec![Place::Real, Place::Finite(2)];
    let mut odd: Vec<u64> = odd_prime_support(a);
    odd.extend(odd_prime_support(b));
    odd.sort_unstable();
    odd.dedup();
    places.extend(odd.into_iter().map(Place::Finite));
    places
}

/// Whether the product of Hilbert symbols over the full symbol support is +1.
/// A correct symbol implementation returns true for every pair.
pub fn product_formula_check(a: &Rational, b: &Rational) -> Result<bool, SymbolError> {
    let mut prod = 1;
    for v in symbol_support(a, b) {
        prod *= hilbert(a, b, v)?;
    }
    Ok(prod == 1)
}

/// Squarefree integer representative of `a` modulo global rational squares.
pub fn global_square_class(a: &Rational) -> Rational {
    Rational::from_integer(squarefree_part(a))
}

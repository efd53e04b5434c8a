//! Integer polynomial machinery: exact real-root counting, irreducibility,
//! symmetric-group certification from factorization patterns modulo primes,
//! the type I / type II field polynomial searches, weak approximation over
//! the rationals, and the decomposition-type arithmetic-equivalence test.

use crate::localsym::{square_class, Place, SymbolError};
use crate::rational::{is_prime, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("polynomial must have degree at least 1")]
    ConstantPoly,
    #[error("leading coefficient must be nonzero")]
    ZeroLeading,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("bad prime {0}: reduction is not squarefree or drops degree")]
    BadPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("input must be irreducible")]
    Reducible,
    #[error("search bound {0} exhausted without a hit")]
    SearchExhausted(u64),
    #[error("conflicting constraints at place {0}")]
    ConflictingConstraints(Place),
    #[error("weak approximation search exhausted")]
    WeakApproxExhausted,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// A univariate polynomial with exact integer coefficients, constant term
/// first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, FieldError> {
        let mut coeffs = coeffs;
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(FieldError::ConstantPoly);
        }
        Ok(IntPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, FieldError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    fn to_rational(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Squarefree over the rationals, via the gcd with the derivative.
    pub fn is_squarefree(&self) -> bool {
        let d = IntPoly::new(self.derivative());
        match d {
            Ok(d) => rat_poly_gcd_degree(&self.to_rational(), &d.to_rational()) == 0,
            // degree-1 polynomials have constant derivative
            Err(_) => true,
        }
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for IntPoly {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs: Result<Vec<BigInt>, _> = s
            .split(',')
            .map(|t| t.trim().parse::<BigInt>())
            .collect();
        let coeffs = coeffs.map_err(|_| FieldError::ZeroLeading)?;
        IntPoly::new(coeffs)
    }
}

// ---- rational polynomial helpers (dense, constant first) ----

fn rat_deg(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn rat_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn rat_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = rat_deg(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    let lead_b = b[db].clone();
    while let Some(dr) = rat_deg(&r) {
        if dr < db {
            break;
        }
        let q = r[dr].clone() / lead_b.clone();
        for i in 0..=db {
            let v = r[dr - db + i].clone() - q.clone() * b[i].clone();
            r[dr - db + i] = v;
        }
        r[dr] = Rational::zero();
    }
    rat_trim(r)
}

fn rat_poly_gcd_degree(a: &[Rational], b: &[Rational]) -> usize {
    let mut a = rat_trim(a.to_vec());
    let mut b = rat_trim(b.to_vec());
    while !b.is_empty() {
        let r = rat_rem(&a, &b);
        a = b;
        b = r;
    }
    rat_deg(&a).unwrap_or(0)
}

fn sign_at_plus_inf(p: &[Rational]) -> i32 {
    match rat_deg(p) {
        None => 0,
        Some(d) => {
            if p[d].is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

fn sign_at_minus_inf(p: &[Rational]) -> i32 {
    match rat_deg(p) {
        None => 0,
        Some(d) => {
            let s = if p[d].is_positive() { 1 } else { -1 };
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

fn sign_variations(signs: &[i32]) -> usize {
    let mut count = 0;
    let mut last = 0;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Exact number of distinct real roots of a squarefree integer polynomial,
/// by a Sturm chain over exact rationals.
pub fn sturm_count(f: &IntPoly) -> Result<usize, FieldError> {
    if !f.is_squarefree() {
        return Err(FieldError::NotSquarefree);
    }
    let mut chain: Vec<Vec<Rational>> = Vec::new();
    chain.push(rat_trim(f.to_rational()));
    let d = IntPoly::new(f.derivative()).map(|d| rat_trim(d.to_rational()));
    match d {
        Ok(d) => chain.push(d),
        Err(_) => return Ok(1), // linear polynomial
    }
    while rat_deg(chain.last().expect("nonempty")).is_some() {
        let n = chain.len();
        let r = rat_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    let at_minus: Vec<i32> = chain.iter().map(|p| sign_at_minus_inf(p)).collect();
    let at_plus: Vec<i32> = chain.iter().map(|p| sign_at_plus_inf(p)).collect();
    Ok(sign_variations(&at_minus) - sign_variations(&at_plus))
}

// ---- polynomials over the p-element field ----

#[derive(Debug, Clone)]
struct ModPoly {
    c: Vec<u64>, // constant first, no leading zeros; empty = zero
    p: u64,
}

impl ModPoly {
    fn trim(mut c: Vec<u64>, p: u64) -> ModPoly {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { c, p }
    }

    fn from_int_poly(f: &IntPoly, p: u64) -> ModPoly {
        let pb = BigInt::from(p);
        let c = f
            .coeffs()
            .iter()
            .map(|a| a.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect();
        ModPoly::trim(c, p)
    }

    fn zero(p: u64) -> ModPoly {
        ModPoly { c: vec![], p }
    }

    fn x(p: u64) -> ModPoly {
        ModPoly { c: vec![0, 1], p }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = crate::rational::mod_inverse(*self.c.last().expect("nonzero"), self.p)
            .expect("prime modulus");
        let c = self
            .c
            .iter()
            .map(|&a| crate::rational::mul_mod(a, inv, self.p))
            .collect();
        ModPoly::trim(c, self.p)
    }

    fn sub(&self, other: &ModPoly) -> ModPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            c[i] = (a + self.p - b) % self.p;
        }
        ModPoly::trim(c, self.p)
    }

    fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + crate::rational::mul_mod(a, b, self.p)) % self.p;
            }
        }
        ModPoly::trim(c, self.p)
    }

    fn rem(&self, m: &ModPoly) -> ModPoly {
        let dm = m.degree();
        let lead_inv =
            crate::rational::mod_inverse(*m.c.last().expect("nonzero modulus"), self.p)
                .expect("prime modulus");
        let mut r = self.c.clone();
        while r.len() > dm {
            let dr = r.len() - 1;
            let q = crate::rational::mul_mod(r[dr], lead_inv, self.p);
            if q != 0 {
                for i in 0..=dm {
                    let t = crate::rational::mul_mod(q, m.c[i], self.p);
                    r[dr - dm + i] = (r[dr - dm + i] + self.p - t) % self.p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        ModPoly::trim(r, self.p)
    }

    fn div_exact(&self, m: &ModPoly) -> ModPoly {
        let dm = m.degree();
        let lead_inv =
            crate::rational::mod_inverse(*m.c.last().expect("nonzero"), self.p).expect("prime");
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len().saturating_sub(dm)];
        while r.len() > dm {
            let dr = r.len() - 1;
            let qc = crate::rational::mul_mod(r[dr], lead_inv, self.p);
            q[dr - dm] = qc;
            if qc != 0 {
                for i in 0..=dm {
                    let t = crate::rational::mul_mod(qc, m.c[i], self.p);
                    r[dr - dm + i] = (r[dr - dm + i] + self.p - t) % self.p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        ModPoly::trim(q, self.p)
    }

    fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> ModPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| crate::rational::mul_mod(a, (i as u64) % self.p, self.p))
            .collect();
        ModPoly::trim(c, self.p)
    }

    /// self^e modulo m.
    fn pow_mod(&self, e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::trim(vec![1], self.p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

/// Degree multiset of the irreducible factorization of `f` modulo `p`,
/// by distinct-degree factorization.  Bad primes (leading coefficient
/// vanishing or non-squarefree reduction) are rejected.
pub fn factor_degrees_mod_p(f: &IntPoly, p: u64) -> Result<Vec<usize>, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotOddPrime(p));
    }
    let fp = ModPoly::from_int_poly(f, p);
    if fp.degree() != f.degree() {
        return Err(FieldError::BadPrime(p));
    }
    if fp.gcd(&fp.derivative()).degree() != 0 {
        return Err(FieldError::BadPrime(p));
    }
    let mut v = fp.monic();
    let mut degrees = Vec::new();
    let mut h = ModPoly::x(p);
    let mut i = 0;
    while v.degree() >= 1 {
        i += 1;
        if 2 * i > v.degree() {
            degrees.push(v.degree());
            break;
        }
        h = h.pow_mod(p, &v);
        let g = v.gcd(&h.sub(&ModPoly::x(p))).monic();
        if g.degree() > 0 {
            for _ in 0..(g.degree() / i) {
                degrees.push(i);
            }
            v = v.div_exact(&g);
            h = h.rem(&v);
        }
    }
    degrees.sort_unstable();
    Ok(degrees)
}

// ---- irreducibility over the rationals ----

fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u8);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.to_u64().expect("small factor"));
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1u8;
    }
    if n > BigInt::one() {
        if let Some(q) = n.to_u64() {
            out.push(q);
        }
    }
    out
}

fn eisenstein_applies(f: &IntPoly) -> bool {
    if f.constant().is_zero() {
        return false;
    }
    for p in prime_factors(f.constant()) {
        let pb = BigInt::from(p);
        let lower_ok = f.coeffs()[..f.degree()].iter().all(|c| (c % &pb).is_zero());
        let lead_ok = !(f.leading() % &pb).is_zero();
        let sq_ok = !(f.constant() % (&pb * &pb)).is_zero();
        if lower_ok && lead_ok && sq_ok {
            return true;
        }
    }
    false
}

fn has_rational_root(f: &IntPoly) -> bool {
    if f.constant().is_zero() {
        return true;
    }
    let nums = divisors_u64(f.constant());
    let dens = divisors_u64(f.leading());
    for n in &nums {
        for d in &dens {
            for sign in [1i64, -1] {
                let x = Rational::new(BigInt::from(sign * *n as i64), BigInt::from(*d as i64));
                if f.eval(&x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

fn divisors_u64(n: &BigInt) -> Vec<u64> {
    let n = n.abs().to_u64().unwrap_or(u64::MAX);
    if n == u64::MAX {
        // fall back to 1 and give up on full enumeration for huge values
        return vec![1];
    }
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

fn subset_sums(degrees: &[usize], n: usize) -> BTreeSet<usize> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degrees {
        for i in (d..=n).rev() {
            if reach[i - d] {
                reach[i] = true;
            }
        }
    }
    reach
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(i, _)| i)
        .collect()
}

const WITNESS_PRIME_BOUND: u64 = 200;

/// Irreducibility over the rationals.  Decided by an Eisenstein shortcut,
/// then a factor-degree intersection argument across good primes, then an
/// exhaustive bounded factor search.
pub fn is_irreducible(f: &IntPoly) -> bool {
    let n = f.degree();
    if n == 1 {
        return true;
    }
    if has_rational_root(f) {
        return false;
    }
    if eisenstein_applies(f) {
        return true;
    }
    let mut possible: Option<BTreeSet<usize>> = None;
    for p in (2..=WITNESS_PRIME_BOUND).filter(|&p| is_prime(p)) {
        if let Ok(degs) = factor_degrees_mod_p(f, p) {
            let sums = subset_sums(&degs, n);
            possible = Some(match possible {
                None => sums,
                Some(acc) => acc.intersection(&sums).copied().collect(),
            });
            let proper: Vec<usize> = possible
                .as_ref()
                .expect("just set")
                .iter()
                .copied()
                .filter(|&d| d > 0 && d < n)
                .collect();
            if proper.is_empty() {
                return true;
            }
        }
    }
    find_proper_factor(f).is_none()
}

/// Exhaustive search for a proper factor of degree 2..n/2 with
/// Mignotte-style coefficient bounds.  Degree-1 factors are assumed to have
/// been excluded already by the rational root test.
fn find_proper_factor(f: &IntPoly) -> Option<IntPoly> {
    let n = f.degree();
    let norm: f64 = f
        .coeffs()
        .iter()
        .map(|c| {
            let v = c.to_f64().unwrap_or(f64::MAX);
            v * v
        })
        .sum::<f64>()
        .sqrt();
    let lc = f.leading().to_f64().unwrap_or(f64::MAX).abs();
    for d in 2..=(n / 2) {
        let bound = ((1u64 << (d - 1)) as f64 * (norm + lc)).ceil() as i64;
        let b0s = divisors_u64(f.constant());
        let bds = divisors_u64(f.leading());
        if let Some(g) = search_factors(f, d, bound, &b0s, &bds) {
            return Some(g);
        }
    }
    None
}

fn search_factors(
    f: &IntPoly,
    d: usize,
    bound: i64,
    b0s: &[u64],
    bds: &[u64],
) -> Option<IntPoly> {
    let mut coeffs = vec![0i64; d + 1];
    for &bd in bds {
        coeffs[d] = bd as i64;
        for &b0 in b0s {
            for s0 in [1i64, -1] {
                coeffs[0] = s0 * b0 as i64;
                if let Some(g) = search_middle(f, &mut coeffs, 1, d, bound) {
                    return Some(g);
                }
            }
        }
    }
    None
}

fn search_middle(
    f: &IntPoly,
    coeffs: &mut Vec<i64>,
    idx: usize,
    d: usize,
    bound: i64,
) -> Option<IntPoly> {
    if idx == d {
        let g = IntPoly::from_i64(coeffs).ok()?;
        if g.degree() != d {
            return None;
        }
        if divides(&g, f) {
            return Some(g);
        }
        return None;
    }
    for v in -bound..=bound {
        coeffs[idx] = v;
        if let Some(g) = search_middle(f, coeffs, idx + 1, d, bound) {
            return Some(g);
        }
    }
    None
}

fn divides(g: &IntPoly, f: &IntPoly) -> bool {
    let r = rat_rem(&f.to_rational(), &g.to_rational());
    r.is_empty()
}

// ---- symmetric-group certification ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SnConclusion {
    Sn,
    Inconclusive,
}

/// One Frobenius witness: a good prime and the factor degree multiset of
/// the reduction, which by Dedekind's criterion is a cycle type occurring
/// in the Galois group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnWitness {
    pub prime: u64,
    pub degrees: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnCertificate {
    pub poly: IntPoly,
    pub witnesses: Vec<SnWitness>,
    pub conclusion: SnConclusion,
    /// Human-readable generation argument when the conclusion is Sn.
    pub rule: Option<String>,
}

fn is_transposition_type(degs: &[usize], n: usize) -> bool {
    degs.len() == n - 1 && degs.iter().filter(|&&d| d == 2).count() == 1
}

fn odd_parity(degs: &[usize]) -> bool {
    degs.iter().map(|&d| d - 1).sum::<usize>() % 2 == 1
}

/// Certify that the Galois group of `f` is the full symmetric group, from
/// cycle types observed via Dedekind's criterion.  One-sided: an `Sn`
/// conclusion is always sound, `Inconclusive` makes no claim.
pub fn certify_sn(f: &IntPoly) -> Result<SnCertificate, FieldError> {
    certify_sn_with_bound(f, WITNESS_PRIME_BOUND)
}

pub fn certify_sn_with_bound(f: &IntPoly, bound: u64) -> Result<SnCertificate, FieldError> {
    if !is_irreducible(f) {
        return Err(FieldError::Reducible);
    }
    let n = f.degree();
    let mut witnesses = Vec::new();
    let mut has_transposition = false;
    let mut has_n_cycle = false;
    let mut has_n_minus_1_cycle = false;
    let mut has_odd = false;
    let mut jordan_prime = false;
    let mut rule: Option<String> = None;

    // the prime-degree route needs the real-root count once
    let prime_degree_transposition = n >= 3
        && is_prime(n as u64)
        && f.is_squarefree()
        && sturm_count(f)? == n - 2;

    for p in (2..=bound).filter(|&p| is_prime(p)) {
        let degs = match factor_degrees_mod_p(f, p) {
            Ok(d) => d,
            Err(_) => continue, // bad primes are never witnesses
        };
        has_transposition |= is_transposition_type(&degs, n);
        has_n_cycle |= degs == vec![n];
        has_n_minus_1_cycle |= degs == vec![1, n - 1] && n >= 3;
        has_odd |= odd_parity(&degs);
        jordan_prime |= degs.iter().any(|&d| {
            is_prime(d as u64) && 2 * d > n && d + 3 <= n
        });
        witnesses.push(SnWitness { prime: p, degrees: degs });

        let concluded = if is_prime(n as u64) && (has_transposition || prime_degree_transposition)
        {
            // a transitive group of prime degree contains a full cycle, and
            // together with a transposition this generates the whole group
            Some(if has_transposition {
                "prime degree: full cycle plus observed transposition".to_string()
            } else {
                "prime degree: full cycle plus complex-conjugation transposition".to_string()
            })
        } else if n == 4 && has_n_cycle && witnesses.iter().any(|w| w.degrees == vec![1, 3]) {
            // order divisible by 12 plus a 4-cycle rules everything but S4
            Some("degree 4: 3-cycle and 4-cycle witnesses".to_string())
        } else if jordan_prime && has_odd {
            Some("Jordan prime cycle gives the alternating group; odd witness extends".to_string())
        } else if (has_n_minus_1_cycle || jordan_prime) && has_transposition {
            Some("primitivity witness plus transposition".to_string())
        } else {
            None
        };
        if let Some(r) = concluded {
            rule = Some(r);
            break;
        }
    }

    let conclusion = if rule.is_some() {
        SnConclusion::Sn
    } else {
        SnConclusion::Inconclusive
    };
    Ok(SnCertificate {
        poly: f.clone(),
        witnesses,
        conclusion,
        rule,
    })
}

// ---- place profiles ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArchTag {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePlaceData {
    pub id: String,
    pub residue_char: u64,
    pub lies_over_split_prime: bool,
}

/// The abstract place structure of a number field: degree, archimedean
/// tags, named finite places, and the trivial-automorphism flag.  This is
/// the sole bridge from polynomial certification into the family builders;
/// no ring-of-integers arithmetic happens anywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceProfile {
    pub degree: usize,
    pub archimedean: Vec<ArchTag>,
    pub finite_places: Vec<FinitePlaceData>,
    pub trivial_aut: bool,
    pub source_poly: Option<IntPoly>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldType {
    TotallyReal,
    OneComplexPlace,
}

impl PlaceProfile {
    pub fn field_type(&self) -> Option<FieldType> {
        let complex = self
            .archimedean
            .iter()
            .filter(|t| **t == ArchTag::Complex)
            .count();
        let real = self.archimedean.len() - complex;
        if real + 2 * complex != self.degree {
            return None;
        }
        match complex {
            0 => Some(FieldType::TotallyReal),
            1 => Some(FieldType::OneComplexPlace),
            _ => None,
        }
    }

    fn standard_finite_places(n: usize, split_prime: u64, aux_prime: u64) -> Vec<FinitePlaceData> {
        let mut places: Vec<FinitePlaceData> = (1..=n)
            .map(|i| FinitePlaceData {
                id: format!("w{i}"),
                residue_char: split_prime,
                lies_over_split_prime: true,
            })
            .collect();
        places.push(FinitePlaceData {
            id: "w0".to_string(),
            residue_char: aux_prime,
            lies_over_split_prime: false,
        });
        places
    }

    /// Symbolic totally real profile of the given degree, with n places
    /// over a completely split odd prime plus the designated extra place.
    pub fn type_i_fixture(n: usize, split_prime: u64, aux_prime: u64) -> PlaceProfile {
        PlaceProfile {
            degree: n,
            archimedean: vec![ArchTag::Real; n],
            finite_places: Self::standard_finite_places(n, split_prime, aux_prime),
            trivial_aut: true,
            source_poly: None,
        }
    }

    /// Symbolic profile with exactly one complex place.
    pub fn type_ii_fixture(n: usize, split_prime: u64, aux_prime: u64) -> PlaceProfile {
        let mut archimedean = vec![ArchTag::Complex];
        // degree n with one complex place leaves n - 2 real embeddings
        archimedean.extend(vec![ArchTag::Real; n.saturating_sub(2)]);
        PlaceProfile {
            degree: n,
            archimedean,
            finite_places: Self::standard_finite_places(n, split_prime, aux_prime),
            trivial_aut: true,
            source_poly: None,
        }
    }
}

// ---- the two lemma engines ----

const DEFAULT_SEARCH_HEIGHT: u64 = 40;

/// Search the sparse family x^p + a x + b for a certified degree-p
/// polynomial with exactly two non-real roots, and emit the type II place
/// profile it defines.
pub fn find_type_ii_poly(
    p: u64,
) -> Result<(IntPoly, SnCertificate, PlaceProfile), FieldError> {
    find_type_ii_poly_with_bound(p, DEFAULT_SEARCH_HEIGHT)
}

pub fn find_type_ii_poly_with_bound(
    p: u64,
    height: u64,
) -> Result<(IntPoly, SnCertificate, PlaceProfile), FieldError> {
    if p == 2 || !is_prime(p) {
        return Err(FieldError::NotOddPrime(p));
    }
    let n = p as usize;
    for h in 1..=(height as i64) {
        for a in -h..=h {
            for b in -h..=h {
                if b == 0 || a.abs().max(b.abs()) != h {
                    continue;
                }
                let mut coeffs = vec![0i64; n + 1];
                coeffs[0] = b;
                coeffs[1] = a;
                coeffs[n] = 1;
                let f = IntPoly::from_i64(&coeffs).expect("monic");
                if !f.is_squarefree() || sturm_count(&f)? != n - 2 {
                    continue;
                }
                if !is_irreducible(&f) {
                    continue;
                }
                let cert = certify_sn(&f)?;
                if cert.conclusion != SnConclusion::Sn {
                    continue;
                }
                let mut profile = PlaceProfile::type_ii_fixture(n, 5, 7);
                profile.source_poly = Some(f.clone());
                return Ok((f, cert, profile));
            }
        }
    }
    Err(FieldError::SearchExhausted(height))
}

/// Search perturbed products of distinct linear factors for a certified
/// totally real degree-n polynomial, and emit its type I place profile.
pub fn find_type_i_poly(
    n: usize,
) -> Result<(IntPoly, SnCertificate, PlaceProfile), FieldError> {
    find_type_i_poly_with_bound(n, DEFAULT_SEARCH_HEIGHT)
}

pub fn find_type_i_poly_with_bound(
    n: usize,
    bound: u64,
) -> Result<(IntPoly, SnCertificate, PlaceProfile), FieldError> {
    if n < 3 {
        return Err(FieldError::SearchExhausted(0));
    }
    // base polynomial with roots 0, 2, 4, ..., 2(n-1)
    let mut base = vec![BigInt::one()];
    for i in 0..n {
        let root = BigInt::from(2 * i as i64);
        let mut next = vec![BigInt::zero(); base.len() + 1];
        for (j, c) in base.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * &root;
        }
        base = next;
    }
    for t in 1..=(bound as i64) {
        for sign in [-1i64, 1] {
            let mut coeffs = base.clone();
            coeffs[0] += BigInt::from(sign * t);
            let f = IntPoly::new(coeffs).expect("monic");
            if !f.is_squarefree() || sturm_count(&f)? != n {
                continue;
            }
            if !is_irreducible(&f) {
                continue;
            }
            let cert = certify_sn(&f)?;
            if cert.conclusion != SnConclusion::Sn {
                continue;
            }
            let mut profile = PlaceProfile::type_i_fixture(n, 5, 7);
            profile.source_poly = Some(f.clone());
            return Ok((f, cert, profile));
        }
    }
    Err(FieldError::SearchExhausted(bound))
}

// ---- weak approximation over the rationals ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Requirement {
    Positive,
    Negative,
    SquareClassOf(Rational),
}

/// A nonzero rational meeting every constraint, chosen deterministically by
/// minimal height with integers preferred over fractions.
pub fn weak_approx(constraints: &[(Place, Requirement)]) -> Result<Rational, FieldError> {
    let mut seen = BTreeSet::new();
    for (v, _) in constraints {
        if !seen.insert(*v) {
            return Err(FieldError::ConflictingConstraints(*v));
        }
    }
    let satisfies = |x: &Rational| -> Result<bool, FieldError> {
        for (v, req) in constraints {
            let ok = match req {
                Requirement::Positive => match v {
                    Place::Real => x.is_positive(),
                    _ => return Err(FieldError::ConflictingConstraints(*v)),
                },
                Requirement::Negative => match v {
                    Place::Real => x.is_negative(),
                    _ => return Err(FieldError::ConflictingConstraints(*v)),
                },
                Requirement::SquareClassOf(c) => {
                    square_class(x, *v)? == square_class(c, *v)?
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for h in 1i64..=10_000 {
        for d in 1..=h {
            for num in 1..=h {
                if num.max(d) != h || num.gcd(&d) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let x = Rational::new(BigInt::from(sign * num), BigInt::from(d));
                    if satisfies(&x)? {
                        return Ok(x);
                    }
                }
            }
        }
    }
    Err(FieldError::WeakApproxExhausted)
}

// ---- arithmetic equivalence up to a bound ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArithEquiv {
    Consistent,
    /// Refuted, with the first witness prime if the degrees agreed.
    Refuted { witness: Option<u64> },
}

/// Necessary-condition test for arithmetic equivalence: compare factor
/// degree multisets modulo every good prime up to the bound.
pub fn arith_equiv_upto(f: &IntPoly, g: &IntPoly, bound: u64) -> ArithEquiv {
    if f.degree() != g.degree() {
        return ArithEquiv::Refuted { witness: None };
    }
    for p in (2..=bound).filter(|&p| is_prime(p)) {
        let df = factor_degrees_mod_p(f, p);
        let dg = factor_degrees_mod_p(g, p);
        if let (Ok(df), Ok(dg)) = (df, dg) {
            if df != dg {
                return ArithEquiv::Refuted { witness: Some(p) };
            }
        }
    }
    ArithEquiv::Consistent
}

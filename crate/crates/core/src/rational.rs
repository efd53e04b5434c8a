//! The scalar type used throughout: exact arbitrary-precision rationals,
//! plus a few number-theoretic helpers on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Build a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Build a rational from numerator and denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(a: &Rational, p: u64) -> i64 {
    assert!(!a.is_zero(), "valuation of zero");
    int_valuation(a.numer(), p) - int_valuation(a.denom(), p)
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// The unit part of `a` at `p`: `a / p^{v_p(a)}`.
pub fn unit_part(a: &Rational, p: u64) -> Rational {
    let v = valuation(a, p);
    let pr = rat(p as i64);
    let mut u = a.clone();
    if v >= 0 {
        for _ in 0..v {
            u /= &pr;
        }
    } else {
        for _ in 0..(-v) {
            u *= &pr;
        }
    }
    u
}

/// Residue of a rational with denominator prime to `m`, as an integer in `[0, m)`.
pub fn residue_mod(a: &Rational, m: u64) -> u64 {
    let m_big = BigInt::from(m);
    let num = a.numer().mod_floor(&m_big);
    let den = a.denom().mod_floor(&m_big);
    let den_u = big_to_u64(&den);
    let inv = mod_inverse(den_u, m).expect("denominator not invertible modulo m");
    let num_u = big_to_u64(&num);
    mul_mod(num_u, inv, m)
}

fn big_to_u64(n: &BigInt) -> u64 {
    let (_, digits) = n.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => unreachable!("residue exceeds u64"),
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// Deterministic primality test by trial division; inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in ascending order starting from 2.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&n| is_prime(n))
}

/// The squarefree integer representing `a` modulo nonzero rational squares,
/// with the sign of `a`.
pub fn squarefree_part(a: &Rational) -> BigInt {
    assert!(!a.is_zero(), "squarefree part of zero");
    let n = a.numer() * a.denom();
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut n = n.abs();
    let mut sf = BigInt::one();
    let mut p = BigInt::from(2u8);
    while &p * &p <= n {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            sf *= &p;
        }
        p += 1u8;
    }
    // what's left is prime or 1
    sf *= n;
    sf * sign
}

/// Odd prime divisors of numerator and denominator, ascending and deduplicated.
pub fn odd_prime_support(a: &Rational) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = (a.numer() * a.denom()).abs();
    while n.is_even() && !n.is_zero() {
        n /= 2;
    }
    let mut p = BigInt::from(3u8);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(big_to_u64(&p));
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 2u8;
    }
    if n > BigInt::one() && n.is_odd() {
        out.push(big_to_u64(&n));
    }
    out
}

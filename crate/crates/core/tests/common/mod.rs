//! Brute-force oracles shared by the integration suites.  Everything here
//! is deliberately naive: congruence searches with no number theory beyond
//! the definitions, used as independent ground truth for the fast
//! implementations.

use latcert::Place;
use std::collections::HashMap;

/// Cache of square bitsets modulo p^k per prime.
pub struct SolvabilityOracle {
    squares: HashMap<u64, Vec<bool>>,
    memo: HashMap<(i64, i64, Place), bool>,
}

fn modulus(p: u64) -> i64 {
    if p == 2 {
        1 << 8
    } else {
        (p as i64).pow(5)
    }
}

impl SolvabilityOracle {
    pub fn new() -> Self {
        SolvabilityOracle {
            squares: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    fn squares_mod(&mut self, p: u64) -> &Vec<bool> {
        self.squares.entry(p).or_insert_with(|| {
            let m = modulus(p);
            let mut s = vec![false; m as usize];
            for z in 0..m {
                s[((z * z) % m) as usize] = true;
            }
            s
        })
    }

    /// Whether z^2 = a x^2 + b y^2 has a nontrivial solution over the
    /// completion at `v`, for p-integral square-class representatives a, b.
    ///
    /// At a finite place this searches for a primitive solution modulo
    /// p^5 (2^8 at the dyadic place); primitive solutions normalize to
    /// one coordinate equal to 1, giving three linear sweeps.  The
    /// moduli exceed the Hensel-lifting threshold for representatives of
    /// valuation at most 1, so the congruence test is exact.
    pub fn solvable(&mut self, a: i64, b: i64, v: Place) -> bool {
        if let Some(&r) = self.memo.get(&(a, b, v)) {
            return r;
        }
        let r = match v {
            Place::Real => a > 0 || b > 0,
            Place::Finite(p) => {
                let m = modulus(p);
                let am = a.rem_euclid(m);
                let bm = b.rem_euclid(m);
                let squares = self.squares_mod(p).clone();
                let mut found = false;
                // x = 1: z^2 = a + b y^2
                for y in 0..m {
                    let t = (am + bm * ((y * y) % m)).rem_euclid(m);
                    if squares[t as usize] {
                        found = true;
                        break;
                    }
                }
                // y = 1: z^2 = a x^2 + b
                if !found {
                    for x in 0..m {
                        let t = (bm + am * ((x * x) % m)).rem_euclid(m);
                        if squares[t as usize] {
                            found = true;
                            break;
                        }
                    }
                }
                // z = 1: a x^2 + b y^2 = 1
                if !found {
                    let mut b_sq = vec![false; m as usize];
                    for y in 0..m {
                        b_sq[((bm * ((y * y) % m)) % m) as usize] = true;
                    }
                    for x in 0..m {
                        let t = (1 - am * ((x * x) % m)).rem_euclid(m);
                        if b_sq[t as usize] {
                            found = true;
                            break;
                        }
                    }
                }
                found
            }
        };
        self.memo.insert((a, b, v), r);
        r
    }
}

impl Default for SolvabilityOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl SolvabilityOracle {
    /// Direct isotropy search for a small diagonal form over the
    /// completion at p, by primitive congruence search modulo p^5 (2^8).
    ///
    /// Dimension 1 is never isotropic; dimension 2 reduces to -ab being
    /// a square; dimension 3 rescales by the last entry to the
    /// two-variable solvability sweep.
    // shared between test binaries; not every binary calls it
    #[allow(dead_code)]
    pub fn isotropic(&mut self, entries: &[i64], p: u64) -> bool {
        let m = modulus(p);
        match entries {
            [] | [_] => false,
            [a, b] => {
                let t = (-a * b).rem_euclid(m);
                self.squares_mod(p)[t as usize]
            }
            [a, b, c] => self.solvable(-a * c, -b * c, Place::Finite(p)),
            _ => panic!("brute-force isotropy is only wired for dim <= 3"),
        }
    }
}

//! Places of Q, Hilbert symbols and the conic splitting variety for a cup
//! product `(a) ∪ (b)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::arith::{is_prime_u64, isqrt_exact_u128, legendre_unchecked, squarefree_primes};
use crate::error::{domain, Error, Result};

/// A place of Q: the archimedean one or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Place> {
        if is_prime_u64(p) {
            Ok(Place::Prime(p))
        } else {
            Err(domain(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "real" | "oo" => Ok(Place::Real),
            t => {
                let p: u64 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid place `{t}`")))?;
                Place::prime(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Hilbert symbols of a fixed pair `(a, b)` at the places where they can be
/// nontrivial. Every place not listed carries `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolTable {
    pub a: i128,
    pub b: i128,
    pub entries: BTreeMap<Place, i8>,
}

impl SymbolTable {
    pub fn get(&self, place: Place) -> i8 {
        self.entries.get(&place).copied().unwrap_or(1)
    }

    pub fn product(&self) -> i8 {
        self.entries.values().product()
    }

    /// Places where the symbol is `-1`.
    pub fn obstructions(&self) -> impl Iterator<Item = Place> + '_ {
        self.entries
            .iter()
            .filter(|(_, &s)| s == -1)
            .map(|(&p, _)| p)
    }
}

/// `{real, 2}` together with every prime dividing one of `values`.
pub fn relevant_places(values: &[i128]) -> Result<BTreeSet<Place>> {
    let mut out = BTreeSet::from([Place::Real, Place::Prime(2)]);
    for &v in values {
        for p in squarefree_primes(v)? {
            out.insert(Place::Prime(p));
        }
    }
    Ok(out)
}

fn split_valuation(mut n: i128, p: u64) -> (u32, i128) {
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// The Hilbert symbol `(a, b)_place` for nonzero integers `a`, `b`.
///
/// `+1` iff `a x^2 + b y^2 = z^2` has a nontrivial solution in the
/// completion. Closed forms: sign test at the real place, Legendre symbols
/// at odd primes and the `ε`/`ω` unit characters at 2.
pub fn hilbert_symbol(a: i128, b: i128, place: Place) -> i8 {
    assert!(a != 0 && b != 0, "Hilbert symbol needs nonzero entries");
    match place {
        Place::Real => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, v) = split_valuation(b, 2);
            let eps = |x: i128| (x.rem_euclid(4) == 3) as u32;
            let omega = |x: i128| matches!(x.rem_euclid(8), 3 | 5) as u32;
            let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre_unchecked(u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre_unchecked(v, p);
            }
            s
        }
    }
}

/// Whether `(a) ∪ (b)` vanishes in `H^2(Q, Z/2)`, i.e. all local Hilbert
/// symbols are `+1`. The table is returned as a witness either way.
pub fn cup_vanishes_globally(a: i128, b: i128) -> Result<(bool, SymbolTable)> {
    let places = relevant_places(&[a, b])?;
    let entries: BTreeMap<Place, i8> = places
        .into_iter()
        .map(|v| (v, hilbert_symbol(a, b, v)))
        .collect();
    let vanishes = entries.values().all(|&s| s == 1);
    Ok((vanishes, SymbolTable { a, b, entries }))
}

/// A primitive point `(u, v, w)` on the conic `a v^2 + b w^2 = u^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConicPoint {
    pub u: i128,
    pub v: i128,
    pub w: i128,
}

/// Bounded box search for a primitive integer point on `a v^2 + b w^2 = u^2`
/// with all coordinates in `[0, height]`.
///
/// Returns the first hit in lexicographic order of `(v, w)`. Failure only
/// means nothing was found in the box; solvability is decided by
/// [`cup_vanishes_globally`].
pub fn conic_point(a: i128, b: i128, height: u64) -> Option<ConicPoint> {
    assert!(a != 0 && b != 0);
    let h = height as i128;
    for v in 0..=h {
        for w in 0..=h {
            if v == 0 && w == 0 {
                continue;
            }
            let Some(rhs) = a
                .checked_mul(v * v)
                .and_then(|x| b.checked_mul(w * w).and_then(|y| x.checked_add(y)))
            else {
                continue;
            };
            if rhs < 0 {
                continue;
            }
            let Some(u) = isqrt_exact_u128(rhs as u128) else {
                continue;
            };
            let u = u as i128;
            if u <= h && v.gcd(&w).gcd(&u) == 1 {
                return Some(ConicPoint { u, v, w });
            }
        }
    }
    None
}

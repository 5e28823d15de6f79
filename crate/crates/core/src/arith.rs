//! Exact integer and rational helpers: factorization, square classes,
//! perfect squares and quadratic residue symbols.
//!
//! Rationals are [`num_rational::BigRational`]; square-class representatives
//! are machine integers (`i128`) because every desk-scale input
//! (numerator and denominator below 10^18) has a squarefree part that fits.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};

pub type ExactRational = BigRational;

/// Primes below this bound are removed by trial division before Pollard rho.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// A nonzero rational written as `rep * cofactor_square` with `rep` a
/// squarefree integer carrying the sign of the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareClass {
    pub rep: i128,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub cofactor_square: ExactRational,
    /// Primes dividing `rep`, ascending.
    pub rep_primes: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. `n` must be odd, composite and > 3.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 2u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Prime factorization `n = prod p^e`, primes ascending.
///
/// Trial division runs up to [`TRIAL_DIVISION_BOUND`]; a remaining cofactor
/// that does not fit in 64 bits is reported as [`Error::Unfactored`].
pub fn factor(n: u128) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(domain("cannot factor zero"));
    }
    let mut rest = n;
    let mut primes: Vec<u64> = Vec::new();
    let push_all = |p: u64, rest: &mut u128, primes: &mut Vec<u64>| {
        while *rest % p as u128 == 0 {
            *rest /= p as u128;
            primes.push(p);
        }
    };
    push_all(2, &mut rest, &mut primes);
    let mut d = 3u64;
    while d < TRIAL_DIVISION_BOUND && (d as u128) * (d as u128) <= rest {
        push_all(d, &mut rest, &mut primes);
        d += 2;
    }
    if rest > 1 {
        if (d as u128) * (d as u128) > rest {
            // everything below d is gone, so rest is prime
            match u64::try_from(rest) {
                Ok(p) => primes.push(p),
                Err(_) => return Err(Error::Unfactored(n.to_string())),
            }
        } else {
            let r = u64::try_from(rest).map_err(|_| Error::Unfactored(n.to_string()))?;
            split_u64(r, &mut primes);
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Writes `n = s * r^2` with `s` squarefree. Returns `(s, r, primes of s)`.
fn squarefree_decompose(n: u128) -> Result<(u128, u128, Vec<u64>)> {
    let mut s = 1u128;
    let mut r = 1u128;
    let mut primes = Vec::new();
    for (p, e) in factor(n)? {
        let p = p as u128;
        if e % 2 == 1 {
            s *= p;
            primes.push(p as u64);
        }
        r *= p.pow(e / 2);
    }
    Ok((s, r, primes))
}

/// True iff no prime divides `n` twice. Zero is rejected.
pub fn is_squarefree(n: i128) -> Result<bool> {
    if n == 0 {
        return Err(domain("zero is not a unit"));
    }
    Ok(factor(n.unsigned_abs())?.iter().all(|&(_, e)| e == 1))
}

/// Primes dividing a squarefree integer, ascending. Errors if `n` is not
/// squarefree.
pub fn squarefree_primes(n: i128) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(domain("zero is not a unit"));
    }
    let f = factor(n.unsigned_abs())?;
    if f.iter().any(|&(_, e)| e > 1) {
        return Err(domain(format!("{n} is not squarefree")));
    }
    Ok(f.into_iter().map(|(p, _)| p).collect())
}

fn to_u128(v: &BigInt, original: &ExactRational) -> Result<u128> {
    v.magnitude()
        .to_u128()
        .ok_or_else(|| Error::Unfactored(original.to_string()))
}

/// Reduces a nonzero rational to its squarefree representative.
pub fn square_class(v: &ExactRational) -> Result<SquareClass> {
    if v.is_zero() {
        return Err(domain("square class of zero is undefined"));
    }
    let (sn, rn, pn) = squarefree_decompose(to_u128(v.numer(), v)?)?;
    let (sd, rd, pd) = squarefree_decompose(to_u128(v.denom(), v)?)?;
    // n/d = sn*sd * (rn / (sd*rd))^2
    let mag = sn
        .checked_mul(sd)
        .filter(|m| *m <= i128::MAX as u128)
        .ok_or_else(|| Error::Unfactored(v.to_string()))?;
    let rep = if v.is_negative() { -(mag as i128) } else { mag as i128 };
    let root = BigRational::new(BigInt::from(rn), BigInt::from(sd) * BigInt::from(rd));
    let mut rep_primes: Vec<u64> = pn.into_iter().chain(pd).collect();
    rep_primes.sort_unstable();
    Ok(SquareClass {
        rep,
        cofactor_square: &root * &root,
        rep_primes,
    })
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
pub fn jacobi(a: u128, n: u128) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

pub(crate) fn legendre_unchecked(a: i128, p: u64) -> i8 {
    let r = a.rem_euclid(p as i128) as u128;
    jacobi(r, p as u128)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i128, p: u64) -> Result<i8> {
    if p % 2 == 0 || !is_prime_u64(p) {
        return Err(domain(format!("{p} is not an odd prime")));
    }
    Ok(legendre_unchecked(a, p))
}

/// The nonnegative rational square root of `v`, if there is one.
pub fn is_perfect_square(v: &ExactRational) -> Option<ExactRational> {
    if v.is_negative() {
        return None;
    }
    let n = exact_isqrt(v.numer())?;
    let d = exact_isqrt(v.denom())?;
    Some(BigRational::new(n, d))
}

/// Square root of a nonnegative integer when it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root of `n` when it is a perfect square; filters on residues
/// mod 64 before taking the root.
pub fn isqrt_exact_u128(n: u128) -> Option<u128> {
    const SQ64: u64 = {
        let mut mask = 0u64;
        let mut i = 0;
        while i < 64 {
            mask |= 1 << ((i * i) % 64);
            i += 1;
        }
        mask
    };
    if (SQ64 >> (n & 63)) & 1 == 0 {
        return None;
    }
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

pub(crate) fn rational(n: i128) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

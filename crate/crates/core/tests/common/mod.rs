//! Helpers shared by the integration tests: an independent Hilbert-symbol
//! oracle and small input generators.
#![allow(dead_code)]

use std::collections::HashMap;

use massey::places::Place;
use rand::Rng;

/// Precision used by the brute-force oracle: `p^3` for odd `p`, `2^6`.
pub fn oracle_exponent(p: u64) -> u32 {
    if p == 2 {
        6
    } else {
        3
    }
}

fn valuation(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

fn residue(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// `(a, b)_p` decided by looking for a primitive zero of `a x² + b y² − z²`
/// modulo `p^k` that Hensel-lifts: some partial derivative has valuation
/// `m` with `2m + 1 <= k`.
///
/// A primitive zero has a unit coordinate, so it suffices to scan the three
/// affine charts `z = 1`, `y = 1`, `x = 1`.
pub fn brute_force_hilbert(a: i128, b: i128, p: u64) -> i8 {
    let k = oracle_exponent(p);
    let m = p.pow(k);
    let (ar, br) = (residue(a, m), residue(b, m));
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % m as u128) as u64;
    let lifts = |x: u64, y: u64, z: u64| {
        let dv = [mulm(2, mulm(ar, x)), mulm(2, mulm(br, y)), mulm(2, z)]
            .into_iter()
            .map(|d| valuation(d, p, k))
            .min()
            .unwrap();
        2 * dv < k
    };
    // value -> residues t with coeff * t^2 ≡ value
    let buckets = |coeff: u64, sign: bool| {
        let mut map: HashMap<u64, Vec<u64>> = HashMap::new();
        for t in 0..m {
            let v = mulm(coeff, mulm(t, t));
            let v = if sign { (m - v) % m } else { v };
            map.entry(v).or_default().push(t);
        }
        map
    };
    // z = 1: b y² ≡ 1 − a x²
    let by2 = buckets(br, false);
    for x in 0..m {
        let target = (1 + m - mulm(ar, mulm(x, x))) % m;
        if let Some(ys) = by2.get(&target) {
            if ys.iter().any(|&y| lifts(x, y, 1)) {
                return 1;
            }
        }
    }
    // y = 1: −z² ≡ −b − a x², i.e. z² ≡ a x² + b
    let z2 = buckets(1, false);
    for x in 0..m {
        let target = (mulm(ar, mulm(x, x)) + br) % m;
        if let Some(zs) = z2.get(&target) {
            if zs.iter().any(|&z| lifts(x, 1, z)) {
                return 1;
            }
        }
    }
    // x = 1: z² ≡ a + b y²
    for y in 0..m {
        let target = (ar + mulm(br, mulm(y, y))) % m;
        if let Some(zs) = z2.get(&target) {
            if zs.iter().any(|&z| lifts(1, y, z)) {
                return 1;
            }
        }
    }
    -1
}

/// Oracle at any place: the real place by sign inspection of the conic.
pub fn oracle_symbol(a: i128, b: i128, place: Place) -> i8 {
    match place {
        Place::Real => {
            // a x² + b y² = z² has a real nonzero solution unless a, b < 0
            if a > 0 || b > 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => brute_force_hilbert(a, b, p),
    }
}

pub fn is_squarefree(n: i128) -> bool {
    let n = n.unsigned_abs();
    n != 0 && (2..).take_while(|d| d * d <= n).all(|d| n % (d * d) != 0)
}

/// Nonzero squarefree integers with `|n| <= bound`, both signs.
pub fn squarefree_upto(bound: i128) -> Vec<i128> {
    (-bound..=bound).filter(|&n| is_squarefree(n)).collect()
}

pub fn random_squarefree(rng: &mut impl Rng, bound: i128) -> i128 {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if is_squarefree(n) {
            return n;
        }
    }
}

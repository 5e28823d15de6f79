//! Finite fields `F_p` and `F_{p^2}` (odd `p`) with exhaustive oracles for
//! the image of the quartic norm form and for points of `X(a,b,c)`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime_u64;
use crate::error::{domain, Error, Result};
use crate::masseyq::norm_form_eval;

/// Largest `q^4` the exhaustive enumerations accept.
pub const MAX_ENUMERATION: u64 = 300_000;
/// Largest field the full triple sweep runs on.
pub const MAX_SWEEP_Q: u32 = 13;

/// `F_q` with `q = p` or `q = p^2`, the latter as `F_p[t]/(t^2 − d)` for the
/// least nonsquare `d` mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    p: u32,
    k: u8,
    d: u32,
    root_count: Vec<u8>,
}

/// An element `c0 + c1 t`. Carries its field parameters so that the ring
/// operators can be used directly.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElement {
    c: [u32; 2],
    p: u32,
    d: u32,
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c {
            [c0, 0] => write!(f, "{c0}"),
            [0, c1] => write!(f, "{c1}t"),
            [c0, c1] => write!(f, "{c0}+{c1}t"),
        }
    }
}

impl Serialize for FqElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FqElement {
    pub fn is_zero(&self) -> bool {
        self.c == [0, 0]
    }

    pub fn coefficients(&self) -> [u32; 2] {
        self.c
    }

    fn index(&self) -> usize {
        (self.c[0] + self.p * self.c[1]) as usize
    }

    fn with(self, c: [u32; 2]) -> Self {
        FqElement { c, ..self }
    }
}

impl Add for FqElement {
    type Output = FqElement;
    fn add(self, o: FqElement) -> FqElement {
        debug_assert_eq!((self.p, self.d), (o.p, o.d));
        let p = self.p;
        self.with([(self.c[0] + o.c[0]) % p, (self.c[1] + o.c[1]) % p])
    }
}

impl Neg for FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        let p = self.p;
        self.with([(p - self.c[0]) % p, (p - self.c[1]) % p])
    }
}

impl Sub for FqElement {
    type Output = FqElement;
    fn sub(self, o: FqElement) -> FqElement {
        self + (-o)
    }
}

impl Mul for FqElement {
    type Output = FqElement;
    fn mul(self, o: FqElement) -> FqElement {
        debug_assert_eq!((self.p, self.d), (o.p, o.d));
        let p = self.p as u64;
        let [a0, a1] = self.c.map(u64::from);
        let [b0, b1] = o.c.map(u64::from);
        let c0 = (a0 * b0 + (a1 * b1 % p) * self.d as u64) % p;
        let c1 = (a0 * b1 + a1 * b0) % p;
        self.with([c0 as u32, c1 as u32])
    }
}

impl FqField {
    /// Builds `F_q`. Only `q = p` and `q = p^2` with `p` an odd prime are
    /// supported; characteristic 2 is rejected.
    pub fn new(q: u32) -> Result<FqField> {
        if q < 3 {
            return Err(domain(format!("no field F_{q} in odd characteristic")));
        }
        if q % 2 == 0 {
            return Err(domain(format!("F_{q} has characteristic 2")));
        }
        if q > 1 << 20 {
            return Err(Error::Size(format!("q = {q} exceeds 2^20")));
        }
        let (p, k) = if is_prime_u64(q as u64) {
            (q, 1)
        } else {
            let r = q.isqrt();
            if r * r == q && is_prime_u64(r as u64) {
                (r, 2)
            } else {
                return Err(domain(format!("{q} is not an odd prime or the square of one")));
            }
        };
        let d = if k == 2 {
            (2..p)
                .find(|&x| crate::arith::legendre_unchecked(x as i128, p as u64) == -1)
                .expect("odd primes have nonsquares")
        } else {
            0
        };
        let mut field = FqField { p, k, d, root_count: Vec::new() };
        let mut root_count = vec![0u8; q as usize];
        for x in field.elements() {
            root_count[(x * x).index()] += 1;
        }
        field.root_count = root_count;
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.k as u32)
    }

    /// The constant `d` with `t^2 = d` when `k = 2`.
    pub fn modulus_constant(&self) -> Option<u32> {
        (self.k == 2).then_some(self.d)
    }

    /// The element with index `v`, i.e. `v mod p + (v div p) t`.
    pub fn element(&self, v: u32) -> FqElement {
        let v = v % self.order();
        FqElement { c: [v % self.p, v / self.p], p: self.p, d: self.d }
    }

    pub fn zero(&self) -> FqElement {
        self.element(0)
    }

    pub fn one(&self) -> FqElement {
        self.element(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (0..self.order()).map(|v| self.element(v))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (1..self.order()).map(|v| self.element(v))
    }

    pub fn contains(&self, x: &FqElement) -> bool {
        x.p == self.p && x.d == self.d && x.c[0] < self.p && x.c[1] < self.p && (self.k == 2 || x.c[1] == 0)
    }

    /// Number of `x` with `x^2 = v`.
    pub fn sqrt_count(&self, v: FqElement) -> usize {
        self.root_count[v.index()] as usize
    }

    pub fn is_square(&self, v: FqElement) -> bool {
        self.sqrt_count(v) > 0
    }

    pub fn inv(&self, v: FqElement) -> Option<FqElement> {
        if v.is_zero() {
            return None;
        }
        // v^(q-2)
        let mut acc = self.one();
        let mut base = v;
        let mut e = self.order() - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        Some(acc)
    }

    fn check_units(&self, units: &[FqElement]) -> Result<()> {
        for u in units {
            if !self.contains(u) {
                return Err(domain(format!("{u} is not an element of F_{}", self.order())));
            }
            if u.is_zero() {
                return Err(domain("parameters must be nonzero"));
            }
        }
        let q = self.order() as u64;
        if q.pow(4) > MAX_ENUMERATION {
            return Err(Error::Size(format!("q^4 = {} exceeds {MAX_ENUMERATION}", q.pow(4))));
        }
        Ok(())
    }

    fn vectors(&self) -> impl Iterator<Item = [FqElement; 4]> + '_ {
        let q = self.order();
        (1..q.pow(4)).map(move |mut i| {
            let mut y = [self.zero(); 4];
            for slot in &mut y {
                *slot = self.element(i % q);
                i /= q;
            }
            y
        })
    }

    /// Multiplicity of each value `N(y)`, `y ∈ F^4 − {0}`, indexed by element.
    fn norm_histogram(&self, a: FqElement, c: FqElement) -> Vec<u64> {
        let mut hist = vec![0u64; self.order() as usize];
        for y in self.vectors() {
            hist[norm_form_eval(&y, &a, &c).index()] += 1;
        }
        hist
    }
}

/// `{N(y) : y ∈ F^4 − {0}} ∩ F*` by enumeration.
pub fn norm_image_direct(f: &FqField, a: FqElement, c: FqElement) -> Result<BTreeSet<FqElement>> {
    f.check_units(&[a, c])?;
    Ok(f.norm_histogram(a, c)
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &n)| n > 0)
        .map(|(i, _)| f.element(i as u32))
        .collect())
}

/// Degree of `F(√a, √c)` over `F`. Over a finite field it is 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidueDegree {
    One,
    Two { d: FqElement },
}

/// The norm image `N(F(μ)*)` computed inside the residue field
/// `F(μ) = F[√a, √c]`: all of `F*` in degree 1, `{x² − d y²}` for the
/// nonsquare `d` among `a, c, ac` in degree 2.
pub fn norm_image_via_residue_field(
    f: &FqField,
    a: FqElement,
    c: FqElement,
) -> Result<(ResidueDegree, BTreeSet<FqElement>)> {
    f.check_units(&[a, c])?;
    let nonsquare = [a, c, a * c].into_iter().find(|&v| !f.is_square(v));
    match nonsquare {
        None => Ok((ResidueDegree::One, f.nonzero_elements().collect())),
        Some(d) => {
            let mut image = BTreeSet::new();
            for x in f.elements() {
                for y in f.elements() {
                    if x.is_zero() && y.is_zero() {
                        continue;
                    }
                    image.insert(x * x - d * y * y);
                }
            }
            Ok((ResidueDegree::Two { d }, image))
        }
    }
}

/// Whether `X(a,b,c)` has an `F_q`-point, together with the number of
/// points `(x, y)` with `x ≠ 0` and `b x² = N(y)`.
pub fn x_has_point(f: &FqField, a: FqElement, b: FqElement, c: FqElement) -> Result<(bool, u64)> {
    f.check_units(&[a, b, c])?;
    let b_inv = f.inv(b).expect("b is nonzero");
    let count: u64 = f
        .vectors()
        .map(|y| {
            let n = norm_form_eval(&y, &a, &c);
            if n.is_zero() {
                0
            } else {
                f.sqrt_count(n * b_inv) as u64
            }
        })
        .sum();
    Ok((count > 0, count))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairMismatch {
    pub a: FqElement,
    pub c: FqElement,
    pub direct: Vec<FqElement>,
    pub residue_field: Vec<FqElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub q: u32,
    pub pairs_checked: usize,
    pub pairs_equal: usize,
    pub triples_checked: usize,
    pub triples_with_points: usize,
    pub pair_mismatches: Vec<PairMismatch>,
    /// `(a, b, c)` without an `F_q`-point.
    pub pointless_triples: Vec<[FqElement; 3]>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.pair_mismatches.is_empty() && self.pointless_triples.is_empty()
    }
}

/// Checks the two norm-image computations agree for every `(a, c)` and that
/// every `X(a,b,c)` has a point. Point existence for all `b` is read off one
/// histogram of norm values per `(a, c)`.
pub fn sweep(f: &FqField) -> Result<SweepReport> {
    if f.order() > MAX_SWEEP_Q {
        return Err(Error::Size(format!("sweep supports q <= {MAX_SWEEP_Q}, got {}", f.order())));
    }
    let units: Vec<FqElement> = f.nonzero_elements().collect();
    let pairs: Vec<(FqElement, FqElement)> = units
        .iter()
        .flat_map(|&a| units.iter().map(move |&c| (a, c)))
        .collect();
    let per_pair: Vec<Result<(Option<PairMismatch>, Vec<[FqElement; 3]>)>> = pairs
        .par_iter()
        .map(|&(a, c)| {
            let direct = norm_image_direct(f, a, c)?;
            let (_, via) = norm_image_via_residue_field(f, a, c)?;
            let mismatch = (direct != via).then(|| PairMismatch {
                a,
                c,
                direct: direct.iter().copied().collect(),
                residue_field: via.iter().copied().collect(),
            });
            let hist = f.norm_histogram(a, c);
            let mut pointless = Vec::new();
            for &b in &units {
                let b_inv = f.inv(b).expect("unit");
                let has = hist
                    .iter()
                    .enumerate()
                    .skip(1)
                    .any(|(i, &n)| n > 0 && f.is_square(f.element(i as u32) * b_inv));
                if !has {
                    pointless.push([a, b, c]);
                }
            }
            Ok((mismatch, pointless))
        })
        .collect();
    let mut report = SweepReport {
        q: f.order(),
        pairs_checked: pairs.len(),
        pairs_equal: 0,
        triples_checked: pairs.len() * units.len(),
        triples_with_points: 0,
        pair_mismatches: Vec::new(),
        pointless_triples: Vec::new(),
    };
    for r in per_pair {
        let (mismatch, pointless) = r?;
        match mismatch {
            Some(m) => report.pair_mismatches.push(m),
            None => report.pairs_equal += 1,
        }
        report.pointless_triples.extend(pointless);
    }
    report.triples_with_points = report.triples_checked - report.pointless_triples.len();
    Ok(report)
}

//! Inhomogeneous `Z/2`-valued cochains on a finite group, their coboundaries
//! and cup products, plus bit-packed F₂ elimination.

use std::fmt;

use serde::{Serialize, Serializer};

use super::group::FiniteGroup;
use crate::error::{Error, Result};

/// A bit vector over F₂, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Bits> {
        let s = s.trim();
        let mut b = Bits::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => b.set(i, true),
                _ => return Err(Error::Parse(format!("`{s}` is not a bit string"))),
            }
        }
        Ok(b)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! cochain_type {
    ($(#[$m:meta])* $name:ident, $deg:expr) => {
        $(#[$m])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
        #[serde(transparent)]
        pub struct $name(pub Bits);

        impl $name {
            pub fn zero(g: &FiniteGroup) -> Self {
                $name(Bits::zeros(g.order().pow($deg)))
            }

            pub fn bits(&self) -> &Bits {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.clone();
                out.0.xor_assign(&other.0);
                out
            }
        }
    };
}

cochain_type!(
    /// A function `G → Z/2`, one bit per element.
    Cochain1,
    1
);
cochain_type!(
    /// A function `G × G → Z/2`; bit `g·n + h` holds the value at `(g, h)`.
    Cochain2,
    2
);
cochain_type!(
    /// A function `G³ → Z/2`; bit `(g·n + h)·n + k` holds `(g, h, k)`.
    Cochain3,
    3
);

impl Cochain1 {
    pub fn at(&self, g: usize) -> bool {
        self.0.get(g)
    }

    /// The indicator of a single element.
    pub fn indicator(g: &FiniteGroup, x: usize) -> Self {
        let mut c = Cochain1::zero(g);
        c.0.set(x, true);
        c
    }

    pub fn from_fn(g: &FiniteGroup, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut c = Cochain1::zero(g);
        for x in 0..g.order() {
            c.0.set(x, f(x));
        }
        c
    }

    /// Parses a bit string of length `|G|`.
    pub fn parse(g: &FiniteGroup, s: &str) -> Result<Self> {
        let b = Bits::parse(s)?;
        if b.len() != g.order() {
            return Err(Error::Parse(format!("bit string `{s}` has length {}, expected {}", b.len(), g.order())));
        }
        Ok(Cochain1(b))
    }
}

impl Cochain2 {
    pub fn at(&self, n: usize, g: usize, h: usize) -> bool {
        self.0.get(g * n + h)
    }
}

impl Cochain3 {
    pub fn at(&self, n: usize, g: usize, h: usize, k: usize) -> bool {
        self.0.get((g * n + h) * n + k)
    }
}

/// `(d f)(g, h) = f(g) + f(h) + f(gh)`.
pub fn d1(f: &Cochain1, g: &FiniteGroup) -> Cochain2 {
    let n = g.order();
    let mut out = Cochain2::zero(g);
    for x in 0..n {
        for y in 0..n {
            out.0.set(x * n + y, f.at(x) ^ f.at(y) ^ f.at(g.mul(x, y)));
        }
    }
    out
}

/// `(d F)(g, h, k) = F(h, k) + F(gh, k) + F(g, hk) + F(g, h)`.
pub fn d2(f: &Cochain2, g: &FiniteGroup) -> Cochain3 {
    let n = g.order();
    let mut out = Cochain3::zero(g);
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x, y);
            for z in 0..n {
                let v = f.at(n, y, z) ^ f.at(n, xy, z) ^ f.at(n, x, g.mul(y, z)) ^ f.at(n, x, y);
                out.0.set((x * n + y) * n + z, v);
            }
        }
    }
    out
}

/// `(f ∪ g)(x, y) = f(x) g(y)`.
pub fn cup(f: &Cochain1, h: &Cochain1) -> Cochain2 {
    let n = f.0.len();
    let mut out = Cochain2(Bits::zeros(n * n));
    for x in f.0.ones() {
        for y in h.0.ones() {
            out.0.set(x * n + y, true);
        }
    }
    out
}

/// `(F ∪ h)(x, y, z) = F(x, y) h(z)`.
pub fn cup_2_1(f: &Cochain2, h: &Cochain1) -> Cochain3 {
    let n = h.0.len();
    let mut out = Cochain3(Bits::zeros(n * n * n));
    for xy in f.0.ones() {
        for z in h.0.ones() {
            out.0.set(xy * n + z, true);
        }
    }
    out
}

/// `(f ∪ H)(x, y, z) = f(x) H(y, z)`.
pub fn cup_1_2(f: &Cochain1, h: &Cochain2) -> Cochain3 {
    let n = f.0.len();
    let mut out = Cochain3(Bits::zeros(n * n * n));
    for x in f.0.ones() {
        for yz in h.0.ones() {
            out.0.set(x * n * n + yz, true);
        }
    }
    out
}

/// Incremental row-echelon basis of a span of bit vectors over F₂.
///
/// Every inserted generator carries a tag; reductions report which tagged
/// generators were combined, so solutions of linear systems can be read off.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    tags: usize,
    rows: Vec<(usize, Bits, Bits)>,
    /// Tag combinations of inserted generators that reduced to zero.
    relations: Vec<Bits>,
}

impl Echelon {
    pub fn new(len: usize, tags: usize) -> Self {
        Echelon { len, tags, rows: Vec::new(), relations: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. Returns the residual and the tags used.
    pub fn reduce(&self, v: &Bits) -> (Bits, Bits) {
        debug_assert_eq!(v.len(), self.len);
        let mut r = v.clone();
        let mut combo = Bits::zeros(self.tags);
        for (pivot, row, row_combo) in &self.rows {
            if r.get(*pivot) {
                r.xor_assign(row);
                combo.xor_assign(row_combo);
            }
        }
        (r, combo)
    }

    /// Inserts a generator with the given tag. Returns false when it was
    /// already in the span, recording the resulting relation.
    pub fn insert(&mut self, v: &Bits, tag: usize) -> bool {
        let (r, mut combo) = self.reduce(v);
        combo.flip(tag);
        match r.first_one() {
            Some(pivot) => {
                self.rows.push((pivot, r, combo));
                true
            }
            None => {
                self.relations.push(combo);
                false
            }
        }
    }

    pub fn relations(&self) -> &[Bits] {
        &self.relations
    }
}

/// Solves `d1 f = target` and reduces 2-cochains modulo coboundaries.
#[derive(Clone, Debug)]
pub struct CoboundarySolver {
    n: usize,
    echelon: Echelon,
}

impl CoboundarySolver {
    /// Inserts the coboundaries of the indicator cochains in `order`
    /// (a permutation of the group elements). Different orders give
    /// different particular solutions.
    pub fn with_order(g: &FiniteGroup, order: &[usize]) -> Self {
        let n = g.order();
        let mut echelon = Echelon::new(n * n, n);
        for &x in order {
            echelon.insert(&d1(&Cochain1::indicator(g, x), g).0, x);
        }
        CoboundarySolver { n, echelon }
    }

    pub fn new(g: &FiniteGroup) -> Self {
        let order: Vec<usize> = (0..g.order()).collect();
        CoboundarySolver::with_order(g, &order)
    }

    /// Some `f` with `d1 f = target`, if one exists.
    pub fn solve(&self, target: &Cochain2) -> Option<Cochain1> {
        let (r, combo) = self.echelon.reduce(&target.0);
        r.is_zero().then_some(Cochain1(combo))
    }

    /// Canonical representative of `target` modulo the image of `d1`.
    pub fn reduce(&self, target: &Cochain2) -> Cochain2 {
        Cochain2(self.echelon.reduce(&target.0).0)
    }

    /// A basis of the 1-cocycles, i.e. of `Hom(G, Z/2)`.
    pub fn cocycle_basis(&self) -> Vec<Cochain1> {
        self.echelon.relations().iter().cloned().map(Cochain1).collect()
    }

    /// Dimension of the image of `d1`.
    pub fn coboundary_rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn group_order(&self) -> usize {
        self.n
    }
}

/// Whether the cocycle `f` is a coboundary; returns a primitive if so.
pub fn h2_class_is_zero(f: &Cochain2, g: &FiniteGroup) -> Result<Option<Cochain1>> {
    if f.0.len() != g.order().pow(2) {
        return Err(crate::error::domain("cochain length does not match the group"));
    }
    if !d2(f, g).is_zero() {
        return Err(crate::error::domain("not a 2-cocycle"));
    }
    Ok(CoboundarySolver::new(g).solve(f))
}

//! Sparse multivariate polynomials with exact rational coefficients, plus
//! the monomial-denominator fractions needed for Laurent variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

/// An ordered list of variable names shared by the polynomials of one ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new(names: &[&str]) -> Self {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        for (i, n) in owned.iter().enumerate() {
            assert!(!owned[..i].contains(n), "duplicate variable {n}");
        }
        Vars(owned.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| domain(format!("variable `{name}` is not in the ring")))
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// An exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; requires `self.divides(other)`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn display(&self, vars: &Vars) -> String {
        if self.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars.names())
            .filter(|(e, _)| **e > 0)
            .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in a fixed [`Vars`] list. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    vars: Vars,
    terms: BTreeMap<Monomial, BigRational>,
}

impl SparsePoly {
    pub fn zero(vars: &Vars) -> Self {
        SparsePoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: impl Into<BigRational>) -> Self {
        let mut p = SparsePoly::zero(vars);
        p.add_term(Monomial::one(vars.len()), c.into());
        p
    }

    pub fn int(vars: &Vars, c: i64) -> Self {
        SparsePoly::constant(vars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self> {
        let i = vars.index(name)?;
        let mut p = SparsePoly::zero(vars);
        p.add_term(Monomial::var(vars.len(), i), BigRational::one());
        Ok(p)
    }

    /// All variables of `vars`, in order.
    pub fn gens(vars: &Vars) -> Vec<Self> {
        vars.names().iter().map(|n| SparsePoly::var(vars, n).expect("own variable")).collect()
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: BigRational) -> Self {
        assert_eq!(m.0.len(), vars.len(), "monomial arity mismatch");
        let mut p = SparsePoly::zero(vars);
        p.add_term(m, c);
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &SparsePoly) {
        assert!(self.vars == other.vars, "polynomials over different variable lists");
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return SparsePoly::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        SparsePoly { vars: self.vars.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(k, x)| (k.mul(m), x.clone())).collect();
        SparsePoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = SparsePoly::int(&self.vars, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The same polynomial over another variable list, matching by name.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index(n).ok()).collect();
        let mut out = SparsePoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| {
                    domain(format!("variable `{}` is not in the target ring", self.vars.names()[i]))
                })?;
                e[j] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Replaces `name` by `value`. The value may live over any variable
    /// list whose used variables all belong to this ring.
    pub fn substitute(&self, name: &str, value: &SparsePoly) -> Result<Self> {
        let i = self.vars.index(name)?;
        let value = value.embed(&self.vars)?;
        let mut powers = vec![SparsePoly::int(&self.vars, 1)];
        let mut out = SparsePoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            while powers.len() <= k {
                let next = &powers[powers.len() - 1] * &value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[i] = 0;
            out = &out + &powers[k].mul_monomial(&rest).scale(c);
        }
        Ok(out)
    }

    /// Evaluates with every variable replaced by a [`Fraction`] over
    /// `target`. Variables absent from `images` map to the variable of the
    /// same name in `target`.
    pub fn compose(&self, target: &Vars, images: &[(&str, Fraction)]) -> Result<Fraction> {
        let mut values = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            let v = match images.iter().find(|(n, _)| n == name) {
                Some((_, f)) => {
                    if f.vars() != target {
                        return Err(domain(format!("image of `{name}` is not over the target ring")));
                    }
                    f.clone()
                }
                None => Fraction::from_poly(SparsePoly::var(target, name)?),
            };
            values.push(v);
        }
        for (n, _) in images {
            self.vars.index(n)?;
        }
        let mut out = Fraction::from_poly(SparsePoly::zero(target));
        let mut cache: BTreeMap<(usize, u32), Fraction> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = Fraction::from_poly(SparsePoly::constant(target, c.clone()));
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| values[i].pow(e)).clone();
                t = t.mul(&p);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Largest monomial dividing every term (the one monomial for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.vars.len()),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    /// `self / m`; requires `m` to divide every term.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                assert!(m.divides(k), "monomial does not divide every term");
                (m.quotient_of(k), c.clone())
            })
            .collect();
        SparsePoly { vars: self.vars.clone(), terms }
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let abs = c.abs();
            let sep = if i > 0 { " " } else { "" };
            if m.is_one() {
                write!(f, "{sep}{sign}{sep}{abs}")?;
            } else if abs.is_one() {
                write!(f, "{sep}{sign}{sep}{}", m.display(&self.vars))?;
            } else {
                write!(f, "{sep}{sign}{sep}{abs}*{}", m.display(&self.vars))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.same_ring(rhs);
        let mut out = SparsePoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-BigRational::one())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $f(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// `num / den` with `den` a monomial, kept reduced: no variable divides
/// both `den` and every term of `num`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fraction {
    num: SparsePoly,
    den: Monomial,
}

impl Fraction {
    pub fn from_poly(p: SparsePoly) -> Self {
        let n = p.vars.len();
        Fraction { num: p, den: Monomial::one(n) }
    }

    pub fn new(num: SparsePoly, den: Monomial) -> Self {
        assert_eq!(den.0.len(), num.vars.len(), "denominator arity mismatch");
        let mut f = Fraction { num, den };
        f.reduce();
        f
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Monomial::one(self.den.0.len());
            return;
        }
        let g = self.num.monomial_content().gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.div_monomial(&g);
            self.den = g.quotient_of(&self.den);
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.num.vars
    }

    pub fn numerator(&self) -> &SparsePoly {
        &self.num
    }

    pub fn denominator(&self) -> &Monomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Fraction) -> Fraction {
        let l = self.den.lcm(&other.den);
        let a = self.num.mul_monomial(&self.den.quotient_of(&l));
        let b = other.num.mul_monomial(&other.den.quotient_of(&l));
        Fraction::new(&a + &b, l)
    }

    pub fn neg(&self) -> Fraction {
        Fraction { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &Fraction) -> Fraction {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Fraction) -> Fraction {
        Fraction::new(&self.num * &other.num, self.den.mul(&other.den))
    }

    pub fn pow(&self, e: u32) -> Fraction {
        let mut acc = Fraction::from_poly(SparsePoly::int(self.vars(), 1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn square_of_sum() {
        let v = Vars::new(&["x", "y"]);
        let x = SparsePoly::var(&v, "x").unwrap();
        let y = SparsePoly::var(&v, "y").unwrap();
        let lhs = (&x + &y).pow(2);
        let rhs = &(&x.pow(2) + &(&x * &y).scale(&q(2))) + &y.pow(2);
        assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn substitution() {
        let v = Vars::new(&["a", "alpha", "y"]);
        let a = SparsePoly::var(&v, "a").unwrap();
        let alpha = SparsePoly::var(&v, "alpha").unwrap();
        let y = SparsePoly::var(&v, "y").unwrap();
        let p = &a * &y.pow(2);
        let s = p.substitute("a", &alpha.pow(2)).unwrap();
        assert_eq!(s, &alpha.pow(2) * &y.pow(2));

        let other = Vars::new(&["z"]);
        let z = SparsePoly::var(&other, "z").unwrap();
        assert!(p.substitute("a", &z).is_err());
        assert!(p.substitute("w", &alpha).is_err());
        // a value over a smaller ring embeds by name
        let small = Vars::new(&["alpha"]);
        let s2 = p.substitute("a", &SparsePoly::var(&small, "alpha").unwrap().pow(2)).unwrap();
        assert_eq!(s2, s);
    }

    #[test]
    fn insertion_order_is_irrelevant() {
        let v = Vars::new(&["x", "y", "z", "w"]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut terms: Vec<(Monomial, BigRational)> = (0..100)
            .map(|_| {
                let e: Vec<u32> = (0..4).map(|_| rng.gen_range(0..4)).collect();
                (Monomial(e), q(rng.gen_range(-5..=5)))
            })
            .collect();
        let build = |ts: &[(Monomial, BigRational)]| {
            let mut p = SparsePoly::zero(&v);
            for (m, c) in ts {
                p.add_term(m.clone(), c.clone());
            }
            p
        };
        let reference = build(&terms);
        for _ in 0..20 {
            terms.shuffle(&mut rng);
            assert_eq!(build(&terms), reference);
        }
    }

    #[test]
    fn fractions_reduce() {
        let v = Vars::new(&["x", "b"]);
        let x = SparsePoly::var(&v, "x").unwrap();
        let b = SparsePoly::var(&v, "b").unwrap();
        // (x b) / b = x
        let f = Fraction::new(&x * &b, Monomial::var(2, 1));
        assert_eq!(f, Fraction::from_poly(x.clone()));
        // x/b - x/b = 0
        let g = Fraction::new(x.clone(), Monomial::var(2, 1));
        assert!(g.sub(&g).is_zero());
        // b * (x/b)^2 = x^2 / b
        let h = Fraction::from_poly(b.clone()).mul(&g.pow(2));
        assert_eq!(h.denominator(), &Monomial::var(2, 1));
        assert_eq!(h.numerator(), &x.pow(2));
    }

    #[test]
    fn compose_and_eval() {
        let v = Vars::new(&["s", "t"]);
        let p = SparsePoly::var(&v, "s").unwrap().pow(2) - SparsePoly::var(&v, "t").unwrap();
        let w = Vars::new(&["u"]);
        let u = SparsePoly::var(&w, "u").unwrap();
        let out = p
            .compose(&w, &[("s", Fraction::from_poly(u.clone())), ("t", Fraction::from_poly(u.pow(2)))])
            .unwrap();
        assert!(out.is_zero());
        assert_eq!(p.eval(&[q(3), q(4)]), q(5));
        // an unmapped variable must exist in the target
        assert!(p.compose(&w, &[("s", Fraction::from_poly(u))]).is_err());
    }

    fn small_poly(v: Vars) -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -4i64..=4), 0..6).prop_map(move |ts| {
            let mut p = SparsePoly::zero(&v);
            for (e, c) in ts {
                p.add_term(Monomial(e), q(c));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn ring_axioms(
            a in small_poly(Vars::new(&["x", "y", "z"])),
            b in small_poly(Vars::new(&["x", "y", "z"])),
            c in small_poly(Vars::new(&["x", "y", "z"])),
        ) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            let pt = [q(2), q(-1), q(3)];
            prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
        }
    }
}

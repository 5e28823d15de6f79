//! The group `U4` of unipotent upper-triangular 4×4 matrices over F₂ and
//! lifts of character triples `G → (Z/2)^3` through `U4`.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};

use super::cochain::{d1, Cochain1};
use super::group::FiniteGroup;
use crate::error::{domain, Error, Result};

/// Bit layout of the six entries above the diagonal.
const ENTRIES: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// An element of `U4`, stored as the six entries `a_ij`, `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct U4Element(u8);

impl U4Element {
    pub const IDENTITY: U4Element = U4Element(0);

    fn bit(i: usize, j: usize) -> u8 {
        let pos = ENTRIES
            .iter()
            .position(|&e| e == (i, j))
            .unwrap_or_else(|| panic!("({i},{j}) is not above the diagonal of a 4x4 matrix"));
        1 << pos
    }

    /// The entry `a_ij` for `1 <= i < j <= 4`.
    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.0 & Self::bit(i, j) != 0
    }

    /// The elementary matrix `E_ij`.
    pub fn elementary(i: usize, j: usize) -> Self {
        U4Element(Self::bit(i, j))
    }

    pub fn from_entries(a12: bool, a13: bool, a14: bool, a23: bool, a24: bool, a34: bool) -> Self {
        let bits = [a12, a13, a14, a23, a24, a34];
        U4Element(bits.iter().enumerate().map(|(k, &b)| (b as u8) << k).sum())
    }

    /// All 64 elements.
    pub fn all() -> impl Iterator<Item = U4Element> {
        (0..64).map(U4Element)
    }

    /// The superdiagonal `(a12, a23, a34)`.
    pub fn superdiagonal(&self) -> (bool, bool, bool) {
        (self.entry(1, 2), self.entry(2, 3), self.entry(3, 4))
    }

    /// `U4` has exponent 4, so `g^-1 = g^3`.
    pub fn inverse(self) -> Self {
        self * self * self
    }

    pub fn order(self) -> u32 {
        let mut x = self;
        let mut k = 1;
        while x != Self::IDENTITY {
            x = x * self;
            k += 1;
        }
        k
    }

    /// The six entries as a compact string `a12 a13 a14 a23 a24 a34`.
    pub fn code(&self) -> String {
        (0..6).map(|k| if self.0 >> k & 1 == 1 { '1' } else { '0' }).collect()
    }
}

impl Mul for U4Element {
    type Output = U4Element;

    fn mul(self, h: U4Element) -> U4Element {
        let g = self;
        let e = |x: &U4Element, i, j| x.entry(i, j);
        U4Element::from_entries(
            e(&g, 1, 2) ^ e(&h, 1, 2),
            e(&g, 1, 3) ^ e(&h, 1, 3) ^ (e(&g, 1, 2) & e(&h, 2, 3)),
            e(&g, 1, 4) ^ e(&h, 1, 4) ^ (e(&g, 1, 2) & e(&h, 2, 4)) ^ (e(&g, 1, 3) & e(&h, 3, 4)),
            e(&g, 2, 3) ^ e(&h, 2, 3),
            e(&g, 2, 4) ^ e(&h, 2, 4) ^ (e(&g, 2, 3) & e(&h, 3, 4)),
            e(&g, 3, 4) ^ e(&h, 3, 4),
        )
    }
}

impl fmt::Debug for U4Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U4[{}]", self.code())
    }
}

impl Serialize for U4Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.code())
    }
}

/// Most generators [`u4_lift_exists`] accepts (8 candidates each).
pub const MAX_LIFT_GENERATORS: usize = 4;

pub(crate) fn require_homomorphism(g: &FiniteGroup, f: &Cochain1, label: &str) -> Result<()> {
    if f.0.len() != g.order() {
        return Err(domain(format!("{label} has length {}, expected {}", f.0.len(), g.order())));
    }
    if !d1(f, g).is_zero() {
        return Err(domain(format!("{label} is not a homomorphism G -> Z/2")));
    }
    Ok(())
}

/// Extends an assignment on the generators along the Cayley graph and
/// checks the result is a homomorphism.
fn extend(g: &FiniteGroup, images: &[U4Element]) -> Option<Vec<U4Element>> {
    let n = g.order();
    let mut phi: Vec<Option<U4Element>> = vec![None; n];
    phi[0] = Some(U4Element::IDENTITY);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let px = phi[x].expect("queued elements are assigned");
        for (&s, &ps) in g.generators().iter().zip(images) {
            let y = g.mul(x, s);
            let py = px * ps;
            match phi[y] {
                None => {
                    phi[y] = Some(py);
                    queue.push_back(y);
                }
                Some(old) if old != py => return None,
                Some(_) => {}
            }
        }
    }
    let phi: Vec<U4Element> = phi.into_iter().collect::<Option<_>>()?;
    for x in 0..n {
        for y in 0..n {
            if phi[g.mul(x, y)] != phi[x] * phi[y] {
                return None;
            }
        }
    }
    Some(phi)
}

/// A homomorphism `G → U4` whose superdiagonal is `(a, b, c)`, if any.
///
/// Generators are assigned one at a time; the superdiagonal of each image is
/// prescribed, leaving 8 candidates per generator.
pub fn u4_lift_exists(
    g: &FiniteGroup,
    a: &Cochain1,
    b: &Cochain1,
    c: &Cochain1,
) -> Result<Option<Vec<U4Element>>> {
    require_homomorphism(g, a, "a")?;
    require_homomorphism(g, b, "b")?;
    require_homomorphism(g, c, "c")?;
    let gens = g.generators();
    if gens.len() > MAX_LIFT_GENERATORS {
        return Err(Error::Size(format!(
            "{} generators; at most {MAX_LIFT_GENERATORS} are supported",
            gens.len()
        )));
    }
    let candidates: Vec<Vec<U4Element>> = gens
        .iter()
        .map(|&s| {
            U4Element::all()
                .filter(|u| u.superdiagonal() == (a.at(s), b.at(s), c.at(s)))
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<U4Element> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(phi) = extend(g, &images) {
            return Ok(Some(phi));
        }
        // odometer over the candidate lists
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(None);
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_axioms() {
        let all: Vec<U4Element> = U4Element::all().collect();
        for &x in &all {
            assert_eq!(x * U4Element::IDENTITY, x);
            assert_eq!(x * x.inverse(), U4Element::IDENTITY);
            for &y in &all {
                for &z in &all {
                    assert_eq!((x * y) * z, x * (y * z));
                }
            }
        }
    }

    #[test]
    fn matches_integer_matrix_product() {
        let to_mat = |x: U4Element| {
            let mut m = [[0u8; 4]; 4];
            for i in 0..4 {
                m[i][i] = 1;
            }
            for &(i, j) in &ENTRIES {
                m[i - 1][j - 1] = x.entry(i, j) as u8;
            }
            m
        };
        for x in U4Element::all() {
            for y in U4Element::all() {
                let (mx, my) = (to_mat(x), to_mat(y));
                let mut prod = [[0u8; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        prod[i][j] = (0..4).map(|k| mx[i][k] * my[k][j]).sum::<u8>() % 2;
                    }
                }
                assert_eq!(prod, to_mat(x * y));
            }
        }
    }

    #[test]
    fn jordan_block_has_order_four() {
        let j = U4Element::from_entries(true, false, false, true, false, true);
        assert_eq!(j.order(), 4);
        // every element with full superdiagonal has order 4
        for x in U4Element::all().filter(|x| x.superdiagonal() == (true, true, true)) {
            assert_eq!(x.order(), 4);
        }
        for (i, j) in ENTRIES {
            assert_eq!(U4Element::elementary(i, j).order(), 2);
        }
    }

    #[test]
    fn lift_examples() {
        let z4 = FiniteGroup::cyclic(4);
        let x = Cochain1::from_fn(&z4, |v| v % 2 == 1);
        let lift = u4_lift_exists(&z4, &x, &x, &x).unwrap().expect("Z/4 lifts");
        assert_eq!(lift[1].superdiagonal(), (true, true, true));
        let jordan = U4Element::from_entries(true, false, false, true, false, true);
        assert_eq!(lift[1], jordan);

        let z2 = FiniteGroup::cyclic(2);
        let x = Cochain1::from_fn(&z2, |v| v == 1);
        assert_eq!(u4_lift_exists(&z2, &x, &x, &x).unwrap(), None);

        for g in FiniteGroup::zoo() {
            let zero = Cochain1::zero(&g);
            let lift = u4_lift_exists(&g, &zero, &zero, &zero).unwrap().unwrap();
            assert!(lift.iter().all(|u| u.superdiagonal() == (false, false, false)));
        }
    }

    #[test]
    fn rejects_non_homomorphism() {
        let z4 = FiniteGroup::cyclic(4);
        let bad = Cochain1::indicator(&z4, 1);
        let zero = Cochain1::zero(&z4);
        assert!(matches!(u4_lift_exists(&z4, &bad, &zero, &zero), Err(Error::Domain(_))));
    }

    #[test]
    fn too_many_generators() {
        let g = FiniteGroup::elementary_abelian(5);
        let zero = Cochain1::zero(&g);
        assert!(matches!(u4_lift_exists(&g, &zero, &zero, &zero), Err(Error::Size(_))));
    }
}

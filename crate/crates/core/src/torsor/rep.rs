//! The 4-dimensional representation of `U4` induced from the sign
//! character `(−1)^{a14}` of the subgroup `{a12 = a13 = 0}`.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::groupcoh::U4Element;

/// A signed 4×4 permutation matrix, acting on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RepMatrix([[i8; 4]; 4]);

impl RepMatrix {
    pub const IDENTITY: RepMatrix = RepMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);

    /// Checks for exactly one `±1` in every row and column.
    pub fn new(m: [[i8; 4]; 4]) -> Option<Self> {
        let row_ok = m.iter().all(|r| r.iter().filter(|&&x| x != 0).count() == 1);
        let col_ok = (0..4).all(|j| (0..4).filter(|&i| m[i][j] != 0).count() == 1);
        let entries_ok = m.iter().flatten().all(|&x| (-1..=1).contains(&x));
        (row_ok && col_ok && entries_ok).then_some(RepMatrix(m))
    }

    pub fn entries(&self) -> &[[i8; 4]; 4] {
        &self.0
    }

    pub fn transpose(&self) -> RepMatrix {
        let mut t = [[0; 4]; 4];
        for (i, row) in self.0.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                t[j][i] = x;
            }
        }
        RepMatrix(t)
    }

    /// For signed permutations the inverse is the transpose.
    pub fn inverse(&self) -> RepMatrix {
        self.transpose()
    }

    /// The matrix of the contragredient action on the dual basis.
    pub fn dual(&self) -> RepMatrix {
        self.inverse().transpose()
    }

    /// `Some(diagonal)` when the matrix is diagonal.
    pub fn eigenvalues(&self) -> Option<[i8; 4]> {
        let mut d = [0; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i != j && self.0[i][j] != 0 {
                    return None;
                }
            }
            d[i] = self.0[i][i];
        }
        Some(d)
    }

    /// The image of basis vector `j` as `(sign, index)`.
    pub fn image_of(&self, j: usize) -> (i8, usize) {
        let i = (0..4).find(|&i| self.0[i][j] != 0).expect("signed permutation");
        (self.0[i][j], i)
    }

    /// `Some(perm)` with `perm[j]` the image index of basis vector `j`, when
    /// every sign is `+1`.
    pub fn as_permutation(&self) -> Option<[usize; 4]> {
        let mut p = [0; 4];
        for (j, slot) in p.iter_mut().enumerate() {
            let (s, i) = self.image_of(j);
            if s != 1 {
                return None;
            }
            *slot = i;
        }
        Some(p)
    }
}

impl Mul for RepMatrix {
    type Output = RepMatrix;
    fn mul(self, rhs: RepMatrix) -> RepMatrix {
        let mut m = [[0i8; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        RepMatrix(m)
    }
}

impl fmt::Debug for RepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Coset representatives `1, E12, E13, E12·E13` of the subgroup `{a12 = a13 = 0}`.
pub fn coset_representatives() -> [U4Element; 4] {
    let e12 = U4Element::elementary(1, 2);
    let e13 = U4Element::elementary(1, 3);
    [U4Element::IDENTITY, e12, e13, e12 * e13]
}

fn in_subgroup(h: U4Element) -> bool {
    !h.entry(1, 2) && !h.entry(1, 3)
}

/// Which character of the subgroup to induce from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Character {
    /// `h ↦ (−1)^{a14(h)}`.
    Sign14,
    /// The trivial character; used only to check that the checks can fail.
    Trivial,
}

/// The action of `g` on the coset basis `c_i = r_i ⊗ 1`: `g r_i = r_j h`
/// sends `c_i` to `χ(h) c_j`.
pub fn coset_matrix(g: U4Element, chi: Character) -> RepMatrix {
    let reps = coset_representatives();
    let mut m = [[0i8; 4]; 4];
    for (i, &r) in reps.iter().enumerate() {
        let gr = g * r;
        let (j, h) = reps
            .iter()
            .enumerate()
            .map(|(j, &rj)| (j, rj.inverse() * gr))
            .find(|&(_, h)| in_subgroup(h))
            .expect("the representatives cover every coset");
        let sign = match chi {
            Character::Sign14 if h.entry(1, 4) => -1,
            _ => 1,
        };
        m[j][i] = sign;
    }
    RepMatrix::new(m).expect("induced action is monomial")
}

/// Columns are `u1 = c0 + c2`, `u2 = c0 − c2`, `u3 = c1 + c3`,
/// `u4 = c1 − c3` in coset coordinates.
const CHANGE: [[i8; 4]; 4] = [[1, 1, 0, 0], [0, 0, 1, 1], [1, -1, 0, 0], [0, 0, 1, -1]];

/// The action of `g` in the basis `u1..u4`: `P^{-1} M P` with `P^{-1} = P^T/2`.
pub fn matrix_of_with(g: U4Element, chi: Character) -> RepMatrix {
    let c = coset_matrix(g, chi).0;
    let mut mp = [[0i32; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            mp[i][j] = (0..4).map(|k| c[i][k] as i32 * CHANGE[k][j] as i32).sum();
        }
    }
    let mut out = [[0i8; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let s: i32 = (0..4).map(|k| CHANGE[k][i] as i32 * mp[k][j]).sum();
            assert!(s % 2 == 0, "change of basis is not integral");
            out[i][j] = (s / 2) as i8;
        }
    }
    RepMatrix::new(out).expect("the u-basis action is a signed permutation")
}

pub fn matrix_of(g: U4Element) -> RepMatrix {
    matrix_of_with(g, Character::Sign14)
}

/// Matrices of the elementary generators in the basis `u1..u4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InducedRep {
    pub e12: RepMatrix,
    pub e23: RepMatrix,
    pub e34: RepMatrix,
    pub e13: RepMatrix,
    pub e24: RepMatrix,
    pub e14: RepMatrix,
}

pub fn build_induced_rep_with(chi: Character) -> InducedRep {
    let m = |i, j| matrix_of_with(U4Element::elementary(i, j), chi);
    InducedRep { e12: m(1, 2), e23: m(2, 3), e34: m(3, 4), e13: m(1, 3), e24: m(2, 4), e14: m(1, 4) }
}

pub fn build_induced_rep() -> InducedRep {
    build_induced_rep_with(Character::Sign14)
}

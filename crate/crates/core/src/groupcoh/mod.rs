//! Mod-2 cohomology of finite groups through explicit cochains: cup
//! products, `H^2` membership, triple Massey products with their
//! indeterminacy, and the equivalent lifting problem through `U4`.
//!
//! For homomorphisms `a, b, c: G → Z/2` a defining system is a pair
//! `(E_ab, E_bc)` of 1-cochains with `d E_ab = a∪b` and `d E_bc = b∪c`; its
//! value is the 2-cocycle `E_ab∪c + a∪E_bc`. Changing `E_ab` (resp. `E_bc`)
//! by a cocycle `z` moves the value by `z∪c` (resp. `a∪z`), so the set of
//! values is a coset of `a·H¹ + H¹·c` in `H²`.

mod cochain;
mod group;
mod u4;

use std::collections::BTreeSet;

use serde::Serialize;

pub use cochain::{
    cup, cup_1_2, cup_2_1, d1, d2, h2_class_is_zero, Bits, Cochain1, Cochain2, Cochain3,
    CoboundarySolver, Echelon,
};
pub use group::FiniteGroup;
pub use u4::{u4_lift_exists, U4Element, MAX_LIFT_GENERATORS};

use crate::error::{Error, Result};
use u4::require_homomorphism;

/// Largest group order [`brute_force_massey`] accepts.
pub const BRUTE_FORCE_MAX_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum MasseyStatus {
    Undefined,
    ContainsZero,
    Nonvanishing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasseyResult {
    pub status: MasseyStatus,
    /// `E_ab∪c + a∪E_bc` for the chosen defining system.
    pub base_class: Option<Cochain2>,
    /// Classes spanning the indeterminacy, independent modulo coboundaries.
    pub indeterminacy_basis: Vec<Cochain2>,
    /// The chosen `(E_ab, E_bc)`.
    pub witnesses: Option<(Cochain1, Cochain1)>,
}

impl MasseyResult {
    /// Every class of the Massey product, as canonical representatives
    /// modulo coboundaries. Empty when undefined.
    pub fn value_classes(&self, g: &FiniteGroup) -> BTreeSet<Cochain2> {
        let solver = CoboundarySolver::new(g);
        let Some(base) = &self.base_class else {
            return BTreeSet::new();
        };
        let k = self.indeterminacy_basis.len();
        (0u64..1 << k)
            .map(|mask| {
                let mut v = base.clone();
                for (i, z) in self.indeterminacy_basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v = v.add(z);
                    }
                }
                solver.reduce(&v)
            })
            .collect()
    }
}

fn check_inputs(g: &FiniteGroup, a: &Cochain1, b: &Cochain1, c: &Cochain1) -> Result<()> {
    require_homomorphism(g, a, "a")?;
    require_homomorphism(g, b, "b")?;
    require_homomorphism(g, c, "c")
}

/// `<a, b, c>` via one particular defining system plus the indeterminacy.
pub fn triple_massey(g: &FiniteGroup, a: &Cochain1, b: &Cochain1, c: &Cochain1) -> Result<MasseyResult> {
    let order: Vec<usize> = (0..g.order()).collect();
    triple_massey_with_order(g, a, b, c, &order)
}

/// As [`triple_massey`], with the elimination pivots inserted in `order`
/// (a permutation of the group elements). The status does not depend on it.
pub fn triple_massey_with_order(
    g: &FiniteGroup,
    a: &Cochain1,
    b: &Cochain1,
    c: &Cochain1,
    order: &[usize],
) -> Result<MasseyResult> {
    check_inputs(g, a, b, c)?;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..g.order()).collect::<Vec<_>>() {
        return Err(crate::error::domain("pivot order is not a permutation of the group"));
    }
    let solver = CoboundarySolver::with_order(g, order);
    let (Some(e_ab), Some(e_bc)) = (solver.solve(&cup(a, b)), solver.solve(&cup(b, c))) else {
        return Ok(MasseyResult {
            status: MasseyStatus::Undefined,
            base_class: None,
            indeterminacy_basis: Vec::new(),
            witnesses: None,
        });
    };
    let base = cup(&e_ab, c).add(&cup(a, &e_bc));

    // span of image(d1) together with the indeterminacy
    let n = g.order();
    let cocycles = solver.cocycle_basis();
    let candidates: Vec<Cochain2> = cocycles
        .iter()
        .flat_map(|z| [cup(a, z), cup(z, c)])
        .collect();
    let mut span = Echelon::new(n * n, n + candidates.len());
    for x in 0..n {
        span.insert(&d1(&Cochain1::indicator(g, x), g).0, x);
    }
    let mut indeterminacy_basis = Vec::new();
    for (i, v) in candidates.into_iter().enumerate() {
        if span.insert(&v.0, n + i) {
            indeterminacy_basis.push(v);
        }
    }
    let status = if span.reduce(&base.0).0.is_zero() {
        MasseyStatus::ContainsZero
    } else {
        MasseyStatus::Nonvanishing
    };
    Ok(MasseyResult {
        status,
        base_class: Some(base),
        indeterminacy_basis,
        witnesses: Some((e_ab, e_bc)),
    })
}

/// Massey product computed from every defining system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForceMassey {
    pub status: MasseyStatus,
    /// Number of defining systems enumerated.
    pub defining_systems: usize,
    /// Every value, reduced modulo coboundaries.
    pub classes: BTreeSet<Cochain2>,
}

/// Enumerates all 1-cochains solving `d E = a∪b` and `d E = b∪c` by
/// exhaustion over `2^|G|` candidates and collects every value's class.
pub fn brute_force_massey(g: &FiniteGroup, a: &Cochain1, b: &Cochain1, c: &Cochain1) -> Result<BruteForceMassey> {
    check_inputs(g, a, b, c)?;
    let n = g.order();
    if n > BRUTE_FORCE_MAX_ORDER {
        return Err(Error::Size(format!("|G| = {n} exceeds {BRUTE_FORCE_MAX_ORDER}")));
    }
    let ab = cup(a, b);
    let bc = cup(b, c);
    let all = || (0u32..1 << n).map(|mask| Cochain1::from_fn(g, |x| mask >> x & 1 == 1));
    let e_abs: Vec<Cochain1> = all().filter(|e| d1(e, g) == ab).collect();
    let e_bcs: Vec<Cochain1> = all().filter(|e| d1(e, g) == bc).collect();
    let solver = CoboundarySolver::new(g);
    let mut classes = BTreeSet::new();
    for e1 in &e_abs {
        let left = cup(e1, c);
        for e2 in &e_bcs {
            classes.insert(solver.reduce(&left.add(&cup(a, e2))));
        }
    }
    let status = if e_abs.is_empty() || e_bcs.is_empty() {
        MasseyStatus::Undefined
    } else if classes.contains(&Cochain2::zero(g)) {
        MasseyStatus::ContainsZero
    } else {
        MasseyStatus::Nonvanishing
    };
    Ok(BruteForceMassey { status, defining_systems: e_abs.len() * e_bcs.len(), classes })
}

/// All homomorphisms `G → Z/2`.
pub fn characters(g: &FiniteGroup) -> Vec<Cochain1> {
    let basis = CoboundarySolver::new(g).cocycle_basis();
    (0u64..1 << basis.len())
        .map(|mask| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(Cochain1::zero(g), |acc, (_, z)| acc.add(z))
        })
        .collect()
}

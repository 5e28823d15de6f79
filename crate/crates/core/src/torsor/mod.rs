//! Exact polynomial algebra and the `U4`-representation calculus used to
//! check, symbolically, that `X(a,b,c)` is the quotient of a free
//! `U4`-action.

mod poly;
mod rep;
mod verify;

pub use poly::{Fraction, Monomial, SparsePoly, Vars};
pub use rep::{
    build_induced_rep, build_induced_rep_with, coset_matrix, coset_representatives, matrix_of, matrix_of_with,
    Character, InducedRep, RepMatrix,
};
pub use verify::{
    biquadratic_product, moved_coordinates, norm_of, quotient_quadratics, verify_core_identity,
    verify_eigen_properties, verify_free_action, verify_norm_expansion, verify_norm_multiplicativity,
    verify_quotient_identity, CheckResult, TorsorCheck,
};

//! Mod-2 triple Massey products and their splitting variety
//! `X(a,b,c): b x² = N(y)`.
//!
//! * [`places`] and [`masseyq`] decide vanishing over Q from Hilbert
//!   symbols and search for rational points as certificates.
//! * [`ffield`] checks the finite-field statements by enumeration.
//! * [`groupcoh`] computes Massey products of characters of finite groups
//!   from cochains and compares with lifts to `U4`.
//! * [`torsor`] verifies the polynomial identities behind the construction
//!   of `X(a,b,c)` as a quotient by `U4`.

pub mod arith;
pub mod cli;
pub mod error;
pub mod ffield;
pub mod groupcoh;
pub mod masseyq;
pub mod places;
pub mod torsor;

pub use error::{Error, Result};

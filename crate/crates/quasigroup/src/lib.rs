//! Finite quasigroups as Cayley tables: class identities, isotopy and
//! parastrophy, congruences, direct-product decomposition and an
//! identity-constrained Latin-square search.
//!
//! The guide in `book/` is compiled into this crate's doctests.

pub mod error;
pub mod morphisms;
pub mod perm;
pub mod table;
pub mod identities;
pub mod constructors;
pub mod congruences;
pub mod decomposition;
pub mod search;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/tables.md")]
    mod tables {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/morphisms.md")]
    mod morphisms {}
    #[doc = include_str!("../../../book/src/congruences.md")]
    mod congruences {}
    #[doc = include_str!("../../../book/src/decomposition.md")]
    mod decomposition {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

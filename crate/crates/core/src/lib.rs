//! Exact invariants of abelian group C*-algebras: `K`-groups through
//! exterior powers of towers, `p`-heights and types of rank-one groups, and
//! the unitary-group invariant, with a comparison engine and a gallery of
//! verified examples.

pub mod desc;
pub mod error;
pub mod exactla;
pub mod fgab;
pub mod format;
pub mod gallery;
pub mod primes;
pub mod supernatural;
pub mod tower;
pub mod uginv;
pub mod wedge;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/towers.md")]
    mod towers {}
    #[doc = include_str!("../../../book/src/k_theory.md")]
    mod k_theory {}
    #[doc = include_str!("../../../book/src/comparing.md")]
    mod comparing {}
    #[doc = include_str!("../../../book/src/gallery.md")]
    mod gallery {}
    #[doc = include_str!("../../../book/src/file_format.md")]
    mod file_format {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

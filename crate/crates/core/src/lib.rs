//! Finite-dimensional quotients of path algebras: bases, grading lattices
//! and automorphism searches.

pub mod algebra;
pub mod autos;
pub mod cli;
pub mod field;
pub mod gradings;
pub mod linalg;
pub mod presentation;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/presentations.md")]
    pub struct Presentations;
    #[doc = include_str!("../../../book/src/quotients.md")]
    pub struct Quotients;
    #[doc = include_str!("../../../book/src/gradings.md")]
    pub struct Gradings;
    #[doc = include_str!("../../../book/src/automorphisms.md")]
    pub struct Automorphisms;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}

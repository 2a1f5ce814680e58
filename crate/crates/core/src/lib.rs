//! Exact-arithmetic library for certifying l1-tree ranks, hereditary set
//! families, and strong-embedding inequalities over finite windows of
//! rational step functions. Every universally quantified inequality is
//! discharged by an exact simplex solve; every negative verdict carries a
//! rational witness that re-substitutes without rounding.

pub mod amalgam;
pub mod basisnorm;
pub mod ell1;
pub mod embed;
pub mod error;
pub mod families;
pub mod par;
pub mod polylin;
pub mod seqtree;
pub mod stepfn;

pub use error::{Error, Result};
pub use polylin::Rat;

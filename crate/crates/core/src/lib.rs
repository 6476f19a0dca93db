//! Permutation-group engine for studying solvable radicals: stabilizer
//! chains, structural series, Fitting heights, conjugacy-class generation
//! criteria, and a small module-representation layer over prime fields, all
//! verified against brute-force oracles at desk scale.

pub mod catalog;
pub mod criterion;
pub mod error;
pub mod group;
pub mod height;
pub mod modrep;
pub mod naive;
pub mod perm;
pub mod series;

pub use error::{Error, Result};
pub use group::{ConjugacyClass, PermGroup, Subgroup};
pub use perm::Permutation;

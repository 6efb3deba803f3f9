//! Classification of closed surfaces from polygon edge words, and a
//! Picard-lattice calculus for rational complex surfaces.

pub mod algebra;
pub mod lattice;
pub mod minimal;
pub mod oracle;
pub mod picard;
pub mod rewrite;
pub mod word;

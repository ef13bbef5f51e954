//! Coproducts on tensor blocks and q-Clebsch-Gordan decomposition.

pub mod index;
pub mod coproduct;
pub mod cg;
pub mod classical;
pub mod tables;

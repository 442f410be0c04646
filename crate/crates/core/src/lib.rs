//! Baumslag-Solitar groups, their Bass-Serre trees, finite discrete measured
//! groupoids with index and cocycle machinery, truncated profinite arithmetic
//! and an exact simulator for the associated coupling.

pub mod bs;
pub mod cli;
pub mod cocycle;
pub mod dynamics;
pub mod groupoid;
pub mod profinite;
pub mod suite;
pub mod tree;

//! Decision procedures for finite monoids, their varieties, and finite
//! lattices: words and identities, finite monoid tables, bounded equational
//! derivation with countermodel search, relatively free objects, variety
//! membership, isoterms, and special lattice elements.

pub mod eqlogic;
pub mod finmon;
pub mod lab;
pub mod lattice;
pub mod varieties;
pub mod word;

//! Square-tiled surfaces (origamis), their automorphisms and voltage
//! covers, and constructions realizing a given group as the full
//! automorphism group of an origami.

pub mod aut;
pub mod cli;
pub mod cover;
pub mod group;
pub mod perm;
pub mod realize;
pub mod surface;

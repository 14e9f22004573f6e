//! Exact bounds, constructive proof procedures, and certified search for
//! L-intersecting set systems and their subspace analogues over finite
//! fields.

pub mod clique;
pub mod exact;
pub mod gf;
pub mod family;
pub mod procedures;
pub mod qspace;
pub mod search;
pub mod theorems;

//! Formal vector fields near a stationary point: Poincaré–Dulac normal
//! forms, Lie-derivative calculus, invariant ideals at a truncation order and
//! certified extraction of semi-invariant generators.

pub mod field;
pub mod cli;
pub mod ideals;
pub mod linalg;
pub mod normalform;
pub mod poly;

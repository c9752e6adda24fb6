//! Finite-characteristic-2 algebra toolkit: the field k = GF(2^e)(t1..td),
//! its tensor square over the squares, Witt vectors, de Rham forms and a
//! pullback model for the truncated de Rham-Witt complex mod 2.

pub mod cli;
pub mod complex;
pub mod derham;
pub mod field;
pub mod forms;
pub mod gf2x;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod tensor;
pub mod trr;
pub mod witt;

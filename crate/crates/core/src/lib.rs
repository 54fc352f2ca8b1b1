//! Exact-arithmetic certification of chaotic unbounded weighted backward
//! shifts on sequence spaces: rational and Gaussian-rational scalars, sparse
//! vectors with certified norms, the shift and its right inverse, the orbit and
//! periodic-point constructions, and a certificate suite with a CLI.

pub mod certify;
pub mod cli;
pub mod constructions;
pub mod operators;
pub mod scalars;
pub mod spaces;

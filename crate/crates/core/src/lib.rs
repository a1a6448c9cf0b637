//! Small pairing-friendly elliptic curves, the reduced Tate pairing, the
//! digit weight D(a), Frobenius descent of f^d, and exhaustive checks of the
//! associated degree/weight lower bounds.

pub mod bounds;
pub mod cli;
pub mod curve;
pub mod dweight;
pub mod field;
pub mod funcfield;
pub mod pairing;

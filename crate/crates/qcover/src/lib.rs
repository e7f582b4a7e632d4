//! Exact computation in quantum covering groups U_{q,π}(g).

pub mod braid;
pub mod cover;
pub mod expr;
pub mod half;
pub mod linalg;
pub mod lincomb;
pub mod modules;
pub mod pbw;
pub mod root;
pub mod scalar;
pub mod verify;

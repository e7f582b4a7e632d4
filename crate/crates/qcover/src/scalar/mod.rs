//! Exact scalars: integers, polynomials, rational functions and the ring Q^π(q).

pub mod int;
pub mod poly;
pub mod qpi;
pub mod quantum;
pub mod ratfunc;

pub use int::Int;
pub use poly::Poly;
pub use qpi::{QPiScalar, ScalarError};
pub use quantum::{choose2, qbinom, qbinom_at, qfact, qfact_at, qint, qint_at};
pub use ratfunc::RatFunc;

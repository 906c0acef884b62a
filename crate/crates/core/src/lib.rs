//! Exact-arithmetic constructions and verifiers for good representations
//! of linear algebraic groups, at the level of finite-field points.

pub mod coinduce;
pub mod constructions;
pub mod descent;
pub mod field;
pub mod grouprep;
pub mod io;
pub mod linalg;
pub mod ntwitness;
pub mod smith;
pub mod suite;

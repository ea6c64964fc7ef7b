//! Truncated polynomial rings, differential forms, Cartier-type operators
//! and the linear solvers built on them.

pub mod cartier;
pub mod forms;
pub mod groebner;
pub mod ring;
pub mod solve;

pub use cartier::{cartier, dlog, log_defect};
pub use forms::{DiffForm, VectorField};
pub use groebner::{ideal_membership, IdealPresentation, Membership};
pub use ring::{Mono, PolyRing, RingRef, TruncPoly, VarKind, Variable};
pub use solve::{solve_dlog, solve_primitive, solve_primitive_2form};

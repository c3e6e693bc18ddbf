//! Exact combinatorics of lattice-class configurations in one apartment:
//! tropical convex closures, the k-subset index calculus of Plücker
//! coordinates, dimension feasibility over obstruction sets, and blow-up
//! schedules.

pub mod apartment;
pub mod dimension;
pub mod error;
pub mod pluecker;
pub mod scheduler;

pub use error::{Error, Result};

//! Exact computations in Ringel–Hall algebras of quivers over finite
//! fields: Hall polynomials, generic composition algebras, PBW-type bases
//! and the canonical basis they determine.
//!
//! Supported quivers are the cyclic quivers (nilpotent representations),
//! linearly ordered `A_n` of any orientation, the Jordan quiver and the
//! Kronecker quiver.

pub mod canonical;
pub mod error;
pub mod fqrep;
pub mod hallalg;
pub mod hallpoly;
pub mod laurent;
pub mod partitions;
pub mod pbw;
pub mod quiver;

pub use error::{Error, Result};
pub use laurent::{Laurent, QLaurent, RationalFn};
pub use partitions::Partition;
pub use quiver::Quiver;

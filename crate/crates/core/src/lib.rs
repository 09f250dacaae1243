//! Exact factorization in small noncommutative domains, and the graph and
//! complex invariants built from irreducible divisors.

pub mod analysis;
pub mod complexes;
pub mod declared;
pub mod error;
pub mod factorize;
pub mod rings;
pub mod tau;

pub use complexes::{DivisorGraph, DivisorOracle, SimplicialComplex, StandardVerdict};
pub use declared::DeclaredSystem;
pub use error::{Error, Result};
pub use factorize::{Factorization, FactorizationClass, PrimeVerdict, UfdVerdict};
pub use rings::{
    Integers, Lipschitz, Quadratic, QuadraticInt, QuatPoly, Quaternion, QuaternionPoly,
    RationalInt, Ring, RingHandle,
};
pub use tau::{TauGraphs, TauRelation};

//! Weight posets of ℤ-gradings of simple Lie algebras.
//!
//! The crate builds root systems of types A–G, the level sets `Δ(i)` of a
//! ℤ-grading given by marks on the simple roots, and the graded poset `Δ(1)`.
//! On top of a generic finite-poset engine it computes ideal and antichain
//! generating polynomials, rowmotion orbits with exact homomesy statistics,
//! and a battery of machine checks collected in [`verify`].

pub mod bitset;
pub mod grading;
pub mod poly;
pub mod poset;
pub mod rootsys;
pub mod rowmotion;
pub mod verify;
pub mod weyl;

pub use bitset::BitSet;
pub use grading::{WeightPoset, ZGrading};
pub use poly::IntPoly;
pub use poset::FinitePoset;
pub use rootsys::{Family, RootSystem, RootVec, SimpleType};
pub use rowmotion::OrbitReport;
pub use weyl::{CosetRep, WeylWord};

//! Exact computations for the cross-ratio variety of six points on P¹ and
//! its compactification: finite geometry over F₃, root systems, toric fans,
//! Chow rings and the intersection form on degree-four classes.

pub mod chowrings;
pub mod exactmath;
pub mod fgeom;
pub mod gram;
pub mod ledger;
pub mod orthgroup;
pub mod report;
pub mod roots;
pub mod toricfan;

pub use exactmath::{BigRational, ExactMatrix, MathError};
pub use fgeom::{F3Vector, ProjectivePoint, QClass};
pub use toricfan::{CharacterMonomial, Fan, LatticePoint};

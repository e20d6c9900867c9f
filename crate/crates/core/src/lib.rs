//! Invariant and tropical geometry of cubic surfaces in `P³`.
//!
//! A cubic surface is given by 20 exact rational coefficients
//! ([`algebra::CubicForm`]). Exact kernels compute the discriminant and the
//! regular subdivision of the Newton polytope; residual-certified numerics
//! compute the 27 lines, their combinatorics, eigenpoints and normal forms.

pub mod algebra;
pub mod eigen;
pub mod lines;
pub mod normal_forms;
pub mod numeric;
pub mod resultant;
pub mod tropical;

pub use algebra::{parse_cubic, CubicForm, Monomial, MultiPoly, ProjTransform, Rational};
pub use numeric::{SolutionSet, TrackerConfig};

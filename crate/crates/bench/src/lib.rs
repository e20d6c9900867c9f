//! Fixed inputs shared by the benchmarks.

use cubic_core::{parse_cubic, CubicForm};

/// A smooth cubic with no special symmetry.
pub fn generic_cubic() -> CubicForm {
    parse_cubic("3x^3 - 2y^3 + z^3 + 5w^3 + x*y*z - 7x^2*w + 4y*z*w + 11z^2*x - 6y^2*w + 2x*y*w")
        .expect("valid cubic")
}

/// Integer lift with a unimodular regular subdivision.
pub const SMOOTH_LIFT: [i64; 20] = [37, 38, 39, 39, 23, 21, 22, 20, 21, 23, 22, 20, 23, 22, 22, 22, 15, 14, 13, 14];

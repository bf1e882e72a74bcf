//! Exact linear algebra over the integers and the rationals.

pub mod matrix;
pub mod rational;
pub mod smith;

pub use matrix::IntMatrix;
pub use rational::{
    floor_to_int, format_rational, format_vector, frac, int, is_integral, lcm_denominators, parse_rational, rat, Rational,
};
pub use smith::{
    cokernel_structure, kernel_lattice, kernel_with_coordinates, rank, smith_normal_form, solve_integer,
    AbelianGroupStructure, SmithDecomposition,
};

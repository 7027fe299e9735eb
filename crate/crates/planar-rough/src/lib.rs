//! Planarly branched rough path calculus on a time grid, truncated at
//! degree three.
//!
//! The crate is layered bottom-up:
//!
//! * [`forest`] — decorated planar rooted trees and forests, parsing,
//!   grafting, and canonical basis enumeration;
//! * [`hopf`] — the Munthe-Kaas-Wright Hopf algebra: shuffle product,
//!   admissible-cut coproduct, pairing, and the dual star product;
//! * [`driver`], [`rough`] — smooth drivers and their canonical rough-path
//!   lifts on a uniform grid, synthetic perturbations, Chen/character
//!   verification, and Hölder norms;
//! * [`controlled`], [`field`] — controlled paths, their remainders and
//!   norms, and C³ vector fields with exact derivative tensors;
//! * [`integration`] — the sewing engine and the rough integral;
//! * [`solver`] — the Picard fixed-point solver for rough differential
//!   equations, with a classical Runge-Kutta oracle for smooth drivers.
//!
//! With the default `parallel` feature the grid-sized inner loops (cell
//! lifting, Hölder suprema, remainder norms) run on rayon; without it the
//! same code runs sequentially.

pub mod controlled;
pub mod driver;
pub mod error;
pub mod field;
pub mod forest;
pub mod hopf;
pub mod integration;
pub(crate) mod parallel;
pub mod rough;
pub mod solver;

pub use error::{Error, Result};
pub use forest::{format_forest, parse_forest, Alphabet, ForestBasis, PlanarForest, PlanarTree};
pub use hopf::{coproduct_mkw, pairing, reduced_coproduct, shuffle, star};
pub use hopf::{BasisTables, DualElement, HopfElement, TensorElement};

/// Hot loops exposed in both sequential and parallel form so the bench suite
/// can compare them; not part of the stable API.
#[doc(hidden)]
pub mod bench_support {
    pub use crate::rough::bench::{holder_norm_seq, lift_cells_par, lift_cells_seq};
}

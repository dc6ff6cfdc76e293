//! Random matrices constrained by discrete point-group symmetry and by SU(2),
//! together with the tools to block-diagonalize them into irreps, predict the
//! width of each irrep block, and tally which irrep hosts the ground state.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense symmetric matrices and a cyclic Jacobi eigensolver.
//! * [`ensemble`]: seeded substreams, polar-method Gaussian deviates and random blocks.
//! * [`groups`]: the cyclic and polyhedral rotation groups, pair orbits and invariant Hamiltonians.
//! * [`irrep`]: explicit irrep decompositions, variance factors and the ground-state census.
//! * [`su2`]: Legendre projection widths and the Gaussian ground-state-J model.
//! * [`output`]: CSV/number formatting shared by the command-line tool.

pub mod ensemble;
pub mod error;
pub mod groups;
pub mod irrep;
pub mod linalg;
pub mod output;
pub mod su2;

pub use error::{Error, Result};
pub use groups::{GroupName, PairOrbitStructure, PointGroup};
pub use irrep::{CnBlockSet, IrrepBlockSpec, IrrepDecomposition};
pub use linalg::{Spectrum, SquareMatrix, SymMatrix};

//! Exact Klein sails and proper palindromic symmetries of 3-dimensional
//! algebraic continued fractions in ℝ⁴.

pub mod cf_core;
pub mod exec;
pub mod intlat;
pub mod json;
pub mod lemma_lab;
pub mod linalg;
pub mod numfield;
pub mod rational;
pub mod sail;
pub mod symmetry;

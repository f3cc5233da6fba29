//! Spectra of the BC1 Inozemtsev Hamiltonian, equivalently eigenvalues of
//! the Heun equation, computed by two independent routes:
//!
//! - perturbation power series from the trigonometric limit, both in the
//!   modular parameter `a` and directly in the nome `p`;
//! - exact algebraic eigenvalues on the finite dimensional invariant spaces
//!   of doubly periodic functions (quasi-exact solvability).
//!
//! The two routes validate each other: the series engines agree with each
//! other coefficientwise in exact rational mode, and the lowest levels agree
//! with the algebraic eigenvalues where an invariant space sits inside the
//! Hilbert space.

pub mod coeff;
pub mod elliptic;
pub mod error;
pub mod gamma;
pub mod epoly;
pub mod heun;
pub mod perturb;
pub mod qes;
pub mod quad;
pub mod series;
pub mod suite;
pub mod trig;

pub use coeff::{Coeff, Couplings, Rat};
pub use error::{Error, Result};
pub use series::{TruncatedSeries, Var};

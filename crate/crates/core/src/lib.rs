//! Verification laboratory for the SD-RT(1) spectral difference scheme on
//! periodic right-triangular meshes for the 2D constant-coefficient transport
//! equation.
//!
//! The crate provides:
//! - the periodic block mesh, mesh functions and projections ([`mesh`]);
//! - the hard-coded block stencil operator and its Fourier symbol ([`operator`]);
//! - the Raviart-Thomas flux reconstruction that re-derives those matrices
//!   from first principles ([`rt`]);
//! - exact rational verification of the algebraic structure: truncation
//!   vectors, co-kernels, the order criterion and the modified-projection
//!   coefficients ([`analysis`]);
//! - the eigenvalue stability scan ([`stability`]);
//! - Runge-Kutta time integration with error tracking ([`solver`]).

pub mod analysis;
pub mod error;
pub mod mesh;
pub mod operator;
pub mod rational;
pub mod rt;
pub mod solver;
pub mod stability;

pub use error::{Error, Result};
pub use mesh::{MeshFunction, MeshGeometry, Velocity};
pub use operator::{StencilOperator, Symbol};

//! Direct nonlinear Fourier transforms of the sine-Gordon equation
//! `u_tt − u_xx + sin u = 0` in the quarter plane `x, t ≥ 0`.
//!
//! Initial data `{u₀, u₁}` and boundary data `{g₀, g₁}` are mapped to the
//! spectral functions `a, b` and `A, B` through the eigenfunctions of the two
//! halves of the Lax pair, and combined into `c = bA − aB` and
//! `d = a·conj(A(k̄)) + b·conj(B(k̄))`. The crate also generates the
//! asymptotic expansions at `k = ∞` and `k = 0`, checks compatibility of the
//! data at the corner, and measures the global relation `c ≡ 0`.

pub mod compat;
pub mod data;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod expansion;
pub mod fit;
pub mod jet;
pub mod matrix;
pub mod ode;
pub mod potential;
pub mod profile;
pub mod profiles;
pub mod quadrature;
pub mod region;
pub mod spectral;

pub use data::{BoundaryData, HalfLineData, InitialData, Side};
pub use error::{NftError, Result};
pub use matrix::{Column, ComplexMatrix2};
pub use profile::{HalfLineProfile, Provenance};
pub use region::{Region, SpectralPoint};

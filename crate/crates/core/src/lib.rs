//! Harmonic analysis on the Jacobi hypergroup.
//!
//! The crate evaluates the characters φ_λ, the Fourier transform
//! F f(λ) = ∫ f φ_λ A dx with its inverse against the Plancherel measure,
//! spectral translation, the L^p modulus of continuity, Besov-type seminorms,
//! and a harness that measures both sides of the inequalities relating them.

pub mod besov;
pub mod characters;
pub mod error;
pub mod families;
pub mod gamma;
pub mod hypergeometric;
pub mod hypergroup;
pub mod interp;
pub mod io;
pub mod quadrature;
pub mod spectral;
pub mod verify;

pub use characters::{character_bound_constant, jacobi_phi, ode_residual, CharacterEval, ComplexValue};
pub use error::{Error, Result};
pub use hypergeometric::gauss_2f1;
pub use hypergroup::{
    check_density_bounds, log_derivative_a, plancherel_density, weight_a, ChebliTrimecheWeight, DensityBounds,
    HypergroupConfig, JacobiParams,
};

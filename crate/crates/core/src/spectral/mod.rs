//! The transform pair, translation and the modulus of continuity.

mod engine;
mod grid;
mod transform;

pub use engine::{LatticeTable, QuadratureSpec, SpectralEngine, XTable, ORIGIN_GRADING};
pub use grid::{GridFunction, Interpolation, Smoothness, Spectrum};
pub use transform::{
    engine, forward_on_nodes, forward_transform, inverse_transform, inverse_values, lp_norm_spectral,
    lp_norm_weighted, modulus_of_continuity, round_trip, round_trip_error, spectral_band_integral, tail_fraction,
    translate, translation_difference,
};

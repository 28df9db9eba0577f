//! Bessel kernels, smooth windows, oscillation-aware quadrature, the two
//! oscillatory integrals of the dual sums, and the two-sided Voronoi check.

mod bessel;
mod integrals;
mod quadrature;
mod voronoi;
mod window;

pub use bessel::{bessel_envelope_w, bessel_j, bessel_j_oracle, bessel_y, envelope_w_blended};
pub use integrals::{
    decay_onset_scan, decay_report, gv_threshold_i, gv_threshold_j, integral_i, integral_j,
    DecayRow, DecayScan, IntegralKind, IntegralParams, OscIntegral, Sign,
};
pub use quadrature::{gauss_legendre, integrate_oscillatory, integrate_real, QuadratureSpec};
pub use voronoi::{voronoi_check, VoronoiKernel};
pub use window::SmoothWindow;

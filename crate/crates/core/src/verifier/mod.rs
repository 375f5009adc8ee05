//! Finite-difference verification of the reduced 8d system and everything it implies.
//!
//! Wirtinger derivatives come from central differences in the real
//! coordinates, `d_z = (d_x - i d_y)/2`, `d_zbar = (d_x + i d_y)/2`, with
//! `z1 = x1 + i x2`, `z2 = x5 + i x6`.

mod derivatives;
mod gauge;
mod holomorphy;
mod lax;
mod lift;
mod report;
mod residuals;

pub use derivatives::{fd_jet, wirtinger_fd, FieldJet, FieldSource, Scheme, StencilSpec};
pub use gauge::{
    gauge_invariance_check, gauge_invariance_check_with, GaugeDeltas, GaugeTransform,
    GaugeTransformed,
};
pub use holomorphy::g_holomorphy_check;
pub use lax::{lax_check, LaxBracket, LaxCheck, LaxCoefficients, LAX_COEFFICIENT_FAMILIES};
pub use lift::{
    lift_fields, lift_to_8d_check, lifted_curvature, lifted_potential, point_of, LiftCheck,
    OCTONION_RELATIONS, STRONG_CHAINS, STRONG_SUMS,
};
pub use report::{EquationId, ReportBuilder, ResidualEntry, ResidualReport, SampleBox};
pub use residuals::{
    curvature_norm_fd, implied_systems_check, residuals_at, residuals_sampled, Blocks,
    ImpliedCheck, PointResiduals, EQ10_FAMILIES,
};

use crate::algebra::C64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("analytic derivatives are not available for this configuration")]
    AnalyticUnavailable,
    #[error("spectral parameter zeta must be nonzero")]
    ZeroZeta,
    #[error("at least one sample point is required")]
    NoSamples,
    #[error("fields are not finite near z = ({}, {})", .0[0], .0[1])]
    NonFinite([C64; 2]),
}

use super::{wirtinger_fd, EquationId, ReportBuilder, ResidualReport, StencilSpec, VerifyError};
use crate::algebra::C64;
use crate::fields::FieldConfig;

/// `Gholo`: `(sum |d_abar G_bc|^2)^{1/2}` from fields evaluated on a stencil.
/// `GIdentity`: `(sum |G_ab - closed form|^2)^{1/2}`.
///
/// Central differences leave an `O(h^2 f''')` remainder even on holomorphic
/// functions, so derivatives here are always Richardson-extrapolated from
/// steps `h` and `h/2` regardless of the requested scheme.
pub fn g_holomorphy_check(
    config: &FieldConfig,
    points: &[[C64; 2]],
    s: &StencilSpec,
) -> Result<ResidualReport, VerifyError> {
    if points.is_empty() {
        return Err(VerifyError::NoSamples);
    }
    let mut builder = ReportBuilder::new(s.fd_step());
    let entries = [(0, 0), (0, 1), (1, 1)];
    for &z in points {
        let mut holo = 0.0;
        for (b, c) in entries {
            let g = |w: [C64; 2]| config.eval_fields(w).g_matrix()[b][c];
            let multiplicity = if b == c { 1.0 } else { 2.0 };
            for (_, dbar) in wirtinger_fd(g, z, s.fd_step(), true) {
                holo += multiplicity * dbar.norm_sqr();
            }
        }
        let (g, want) = (config.eval_fields(z).g_matrix(), config.expected_g(z));
        let identity: f64 = (0..4)
            .map(|k| (g[k / 2][k % 2] - want[k / 2][k % 2]).norm_sqr())
            .sum();
        if !holo.is_finite() || !identity.is_finite() {
            return Err(VerifyError::NonFinite(z));
        }
        builder.add(EquationId::Gholo, libm::sqrt(holo));
        builder.add(EquationId::GIdentity, libm::sqrt(identity));
    }
    Ok(builder.finish())
}

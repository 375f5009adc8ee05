use super::FieldJet;
use super::{
    EquationId, FieldSource, ReportBuilder, ResidualReport, SampleBox, StencilSpec, VerifyError,
};
use crate::algebra::{commutator, ComplexMat2, C64};

/// The five families of the reduced system, in report order.
pub const EQ10_FAMILIES: [EquationId; 5] = [
    EquationId::DbarPhi,
    EquationId::FplusComm,
    EquationId::PhiPhiComm,
    EquationId::F20,
    EquationId::DPhiSkew,
];

type M = ComplexMat2;

/// Covariant derivatives and curvatures assembled from a jet. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Blocks {
    /// `[a][b]`: `D_abar Phi_b`
    pub dbar_phi: [[M; 2]; 2],
    /// `[a][b]`: `D_a Phi_b`
    pub d_phi: [[M; 2]; 2],
    /// `[a][b]`: `D_a (Phi_b^dagger)`, differentiating the conjugate field directly
    pub d_phi_dagger: [[M; 2]; 2],
    /// `[a][b]`: `F_{a bbar}`
    pub f_mixed: [[M; 2]; 2],
    /// `F_{12}`
    pub f12: M,
    /// `F_{1bar 2bar}`
    pub fbar12: M,
    /// `[a][b]`: `[Phi_a, Phi_b^dagger]`
    pub phi_phidag: [[M; 2]; 2],
    /// `[Phi_1, Phi_2]`
    pub phi_phi: M,
}

impl Blocks {
    pub fn from_jet(j: &FieldJet) -> Self {
        let (phi, a, ab) = (j.at.phi, j.at.a, j.at.a_bar);
        let idx = |f: &dyn Fn(usize, usize) -> M| [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]];
        Self {
            dbar_phi: idx(&|a_, b| j.dbar[a_].phi[b] + commutator(ab[a_], phi[b])),
            d_phi: idx(&|a_, b| j.d[a_].phi[b] + commutator(a[a_], phi[b])),
            d_phi_dagger: idx(&|a_, b| {
                j.dbar[a_].phi[b].dagger() + commutator(a[a_], phi[b].dagger())
            }),
            f_mixed: idx(&|a_, b| j.d[a_].a_bar[b] - j.dbar[b].a[a_] + commutator(a[a_], ab[b])),
            f12: j.d[0].a[1] - j.d[1].a[0] + commutator(a[0], a[1]),
            fbar12: j.dbar[0].a_bar[1] - j.dbar[1].a_bar[0] + commutator(ab[0], ab[1]),
            phi_phidag: idx(&|a_, b| commutator(phi[a_], phi[b].dagger())),
            phi_phi: commutator(phi[0], phi[1]),
        }
    }

    /// `F_{a bbar} + 1/4 [Phi_a, Phi_b^dagger]`
    pub fn fplus(&self, a: usize, b: usize) -> M {
        self.f_mixed[a][b] + self.phi_phidag[a][b] * 0.25
    }

    /// `F_{1 1bar} + F_{2 2bar} + 1/4 [Phi_1, Phi_1^dagger] + 1/4 [Phi_2, Phi_2^dagger]`
    pub fn trace_equation(&self) -> M {
        self.fplus(0, 0) + self.fplus(1, 1)
    }

    /// The four left-hand sides of the complex octonionic reduction.
    pub fn kw_blocks(&self) -> [M; 4] {
        [
            self.trace_equation(),
            self.f12 - self.phi_phi * 0.25,
            self.dbar_phi[0][0] - self.d_phi_dagger[1][1],
            self.dbar_phi[1][0] + self.d_phi_dagger[0][1],
        ]
    }
}

fn rss(ms: impl IntoIterator<Item = M>) -> f64 {
    libm::sqrt(ms.into_iter().map(|m| m.frobenius_norm_sqr()).sum())
}

fn pairs() -> [(usize, usize); 4] {
    [(0, 0), (0, 1), (1, 0), (1, 1)]
}

/// Frobenius norms of every residual family at one point; families combine
/// their components in root-sum-square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResiduals {
    pub dbar_phi: f64,
    pub fplus_comm: f64,
    pub phi_phi_comm: f64,
    pub f20: f64,
    pub dphi_skew: f64,
    /// `|F_{a abar} + 1/4 [Phi_a, Phi_a^dagger]|` for `a = 1, 2`
    pub fplus_diag: [f64; 2],
    pub simpson_trace: f64,
    pub simpson: f64,
    pub kw_blocks: [f64; 4],
    pub kw: f64,
}

impl PointResiduals {
    pub fn from_blocks(b: &Blocks) -> Self {
        let kw_blocks = b.kw_blocks().map(|m| m.frobenius_norm());
        let dbar_phi = rss(pairs().map(|(a, c)| b.dbar_phi[a][c]));
        let phi_phi_comm = b.phi_phi.frobenius_norm();
        let f20 = b.f12.frobenius_norm();
        let simpson_trace = kw_blocks[0];
        Self {
            dbar_phi,
            fplus_comm: rss(pairs().map(|(a, c)| b.fplus(a, c))),
            phi_phi_comm,
            f20,
            dphi_skew: (b.d_phi[0][1] - b.d_phi[1][0]).frobenius_norm(),
            fplus_diag: [
                b.fplus(0, 0).frobenius_norm(),
                b.fplus(1, 1).frobenius_norm(),
            ],
            simpson_trace,
            simpson: libm::sqrt(
                simpson_trace * simpson_trace
                    + f20 * f20
                    + phi_phi_comm * phi_phi_comm
                    + dbar_phi * dbar_phi,
            ),
            kw: libm::sqrt(kw_blocks.iter().map(|v| v * v).sum()),
            kw_blocks,
        }
    }

    pub fn value(&self, id: EquationId) -> Option<f64> {
        Some(match id {
            EquationId::DbarPhi => self.dbar_phi,
            EquationId::FplusComm => self.fplus_comm,
            EquationId::PhiPhiComm => self.phi_phi_comm,
            EquationId::F20 => self.f20,
            EquationId::DPhiSkew => self.dphi_skew,
            EquationId::Simpson => self.simpson,
            EquationId::KW4 => self.kw,
            _ => return None,
        })
    }

    /// `2 FplusComm + F20 + PhiPhiComm + DbarPhi`, an upper bound for `Simpson`.
    pub fn simpson_bound(&self) -> f64 {
        2.0 * self.fplus_comm + self.f20 + self.phi_phi_comm + self.dbar_phi
    }

    /// `2 FplusComm + F20 + PhiPhiComm/4 + 2 DbarPhi`, an upper bound for `KW4`.
    pub fn kw_bound(&self) -> f64 {
        2.0 * self.fplus_comm + self.f20 + 0.25 * self.phi_phi_comm + 2.0 * self.dbar_phi
    }
}

pub(crate) fn point_residuals<S: FieldSource + ?Sized>(
    source: &S,
    z: [C64; 2],
    s: &StencilSpec,
) -> Result<PointResiduals, VerifyError> {
    let jet = source.jet(z, s)?;
    Ok(PointResiduals::from_blocks(&Blocks::from_jet(&jet)))
}

/// Residual norms of the five families at one point.
pub fn residuals_at<S: FieldSource + ?Sized>(
    source: &S,
    z: [C64; 2],
    s: &StencilSpec,
) -> Result<ResidualReport, VerifyError> {
    residuals_over(source, &[z], s)
}

pub(crate) fn residuals_over<S: FieldSource + ?Sized>(
    source: &S,
    points: &[[C64; 2]],
    s: &StencilSpec,
) -> Result<ResidualReport, VerifyError> {
    if points.is_empty() {
        return Err(VerifyError::NoSamples);
    }
    let mut builder = ReportBuilder::new(s.fd_step());
    for &z in points {
        let r = point_residuals(source, z, s)?;
        for id in EQ10_FAMILIES {
            builder.add(id, r.value(id).expect("base family"));
        }
    }
    Ok(builder.finish())
}

pub fn residuals_sampled<S: FieldSource + ?Sized>(
    source: &S,
    region: &SampleBox,
    n: usize,
    s: &StencilSpec,
    seed: u64,
) -> Result<ResidualReport, VerifyError> {
    residuals_over(source, &region.points(n, seed), s)
}

/// Simpson and complex octonionic residuals at one point, with the bounds
/// implied by the reduced system's residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpliedCheck {
    pub report: ResidualReport,
    pub point: PointResiduals,
    pub simpson_bound: f64,
    pub kw_bound: f64,
}

pub fn implied_systems_check<S: FieldSource + ?Sized>(
    source: &S,
    z: [C64; 2],
    s: &StencilSpec,
) -> Result<ImpliedCheck, VerifyError> {
    let point = point_residuals(source, z, s)?;
    let mut builder = ReportBuilder::new(s.fd_step());
    builder.add(EquationId::Simpson, point.simpson);
    builder.add(EquationId::KW4, point.kw);
    Ok(ImpliedCheck {
        report: builder.finish(),
        point,
        simpson_bound: point.simpson_bound(),
        kw_bound: point.kw_bound(),
    })
}

/// `2 sqrt(2) (sum_ab |F_{a bbar}|^2 + |F_12|^2 + |F_{1bar 2bar}|^2)^{1/2}`, the
/// curvature norm of the flat metric on C^2 from derivative data alone.
pub fn curvature_norm_fd<S: FieldSource + ?Sized>(
    source: &S,
    z: [C64; 2],
    s: &StencilSpec,
) -> Result<f64, VerifyError> {
    let b = Blocks::from_jet(&source.jet(z, s)?);
    let sum = rss(pairs()
        .map(|(a, c)| b.f_mixed[a][c])
        .into_iter()
        .chain([b.f12, b.fbar12]));
    Ok(2.0 * core::f64::consts::SQRT_2 * sum)
}

use alloc::vec::Vec;

use super::residuals::Blocks;
use super::{
    EquationId, FieldJet, FieldSource, ReportBuilder, ResidualReport, StencilSpec, VerifyError,
};
use crate::algebra::{commutator, ComplexMat2, C64, ZERO};

type M = ComplexMat2;

/// Which family of commutators of the Lax operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaxBracket {
    /// `[d_1 + zeta/2 Phi_1, d_2 + zeta/2 Phi_2]`
    Holomorphic,
    /// `[d_a + zeta/2 Phi_a, d_bbar + 1/(2 zeta) Phi_b^dagger]`
    Mixed,
}

/// Power of `zeta` in each bracket and the residual family its coefficient is built from.
pub const LAX_COEFFICIENT_FAMILIES: [(LaxBracket, i32, EquationId); 6] = [
    (LaxBracket::Holomorphic, 0, EquationId::F20),
    (LaxBracket::Holomorphic, 1, EquationId::DPhiSkew),
    (LaxBracket::Holomorphic, 2, EquationId::PhiPhiComm),
    (LaxBracket::Mixed, -1, EquationId::DbarPhi),
    (LaxBracket::Mixed, 0, EquationId::FplusComm),
    (LaxBracket::Mixed, 1, EquationId::DbarPhi),
];

/// Laurent coefficients of the Lax curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxCoefficients {
    /// `[F_12, (D_1 Phi_2 - D_2 Phi_1)/2, [Phi_1, Phi_2]/4]` for powers `0, 1, 2`.
    pub holomorphic: [M; 3],
    /// `[a][b]`: `[D_a Phi_b^dagger / 2, F_{a bbar} + [Phi_a, Phi_b^dagger]/4, -D_bbar Phi_a / 2]`
    /// for powers `-1, 0, 1`.
    pub mixed: [[[M; 3]; 2]; 2],
}

impl LaxCoefficients {
    pub fn from_blocks(b: &Blocks) -> Self {
        let mixed = |a: usize, c: usize| {
            [
                b.d_phi_dagger[a][c] * 0.5,
                b.fplus(a, c),
                b.dbar_phi[c][a] * -0.5,
            ]
        };
        Self {
            holomorphic: [
                b.f12,
                (b.d_phi[0][1] - b.d_phi[1][0]) * 0.5,
                b.phi_phi * 0.25,
            ],
            mixed: [[mixed(0, 0), mixed(0, 1)], [mixed(1, 0), mixed(1, 1)]],
        }
    }

    /// Coefficient matrices of `zeta^power` in `bracket`, over all index pairs.
    pub fn coefficient(&self, bracket: LaxBracket, power: i32) -> Vec<M> {
        match (bracket, power) {
            (LaxBracket::Holomorphic, 0..=2) => alloc::vec![self.holomorphic[power as usize]],
            (LaxBracket::Mixed, -1..=1) => {
                let k = (power + 1) as usize;
                self.mixed
                    .iter()
                    .flat_map(|row| row.iter().map(move |c| c[k]))
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// The assembled brackets at `zeta`: `[d_1, d_2]` then `[d_a, d_bbar]` row-major.
    pub fn assemble(&self, zeta: C64) -> [M; 5] {
        let h = self.holomorphic;
        let m = |a: usize, b: usize| {
            let c = self.mixed[a][b];
            c[0] * zeta.inv() + c[1] + c[2] * zeta
        };
        [
            h[0] + h[1] * zeta + h[2] * (zeta * zeta),
            m(0, 0),
            m(0, 1),
            m(1, 0),
            m(1, 1),
        ]
    }

    pub fn norm_at(&self, zeta: C64) -> f64 {
        norm(self.assemble(zeta))
    }
}

fn norm(ms: [M; 5]) -> f64 {
    libm::sqrt(ms.iter().map(M::frobenius_norm_sqr).sum())
}

/// Curvature of the spectral connection `A_a + zeta/2 Phi_a`, `A_abar + 1/(2 zeta) Phi_a^dagger`,
/// assembled directly from the jet.
pub fn lax_curvature(j: &FieldJet, zeta: C64) -> [M; 5] {
    let (half, half_inv) = (zeta * 0.5, zeta.inv() * 0.5);
    let conn = [0, 1].map(|a| j.at.a[a] + j.at.phi[a] * half);
    let conn_bar = [0, 1].map(|a| j.at.a_bar[a] + j.at.phi[a].dagger() * half_inv);
    // d_c of conn_a and conn_abar; d_c (Phi^dagger) = (d_cbar Phi)^dagger
    let d_conn = |c: usize, a: usize| j.d[c].a[a] + j.d[c].phi[a] * half;
    let dbar_conn = |c: usize, a: usize| j.dbar[c].a[a] + j.dbar[c].phi[a] * half;
    let d_conn_bar = |c: usize, a: usize| j.d[c].a_bar[a] + j.dbar[c].phi[a].dagger() * half_inv;
    let mixed =
        |a: usize, b: usize| d_conn_bar(a, b) - dbar_conn(b, a) + commutator(conn[a], conn_bar[b]);
    [
        d_conn(0, 1) - d_conn(1, 0) + commutator(conn[0], conn[1]),
        mixed(0, 0),
        mixed(0, 1),
        mixed(1, 0),
        mixed(1, 1),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaxCheck {
    /// Single `Lax` entry aggregated over the sampled `zeta`.
    pub report: ResidualReport,
    pub per_zeta: Vec<(C64, f64)>,
    pub coefficients: LaxCoefficients,
}

pub fn lax_check<S: FieldSource + ?Sized>(
    source: &S,
    z: [C64; 2],
    zetas: &[C64],
    s: &StencilSpec,
) -> Result<LaxCheck, VerifyError> {
    if zetas.is_empty() {
        return Err(VerifyError::NoSamples);
    }
    if zetas.iter().any(|&zeta| zeta == ZERO || !zeta.is_finite()) {
        return Err(VerifyError::ZeroZeta);
    }
    let jet = source.jet(z, s)?;
    let mut builder = ReportBuilder::new(s.fd_step());
    let per_zeta: Vec<(C64, f64)> = zetas
        .iter()
        .map(|&zeta| (zeta, norm(lax_curvature(&jet, zeta))))
        .collect();
    for &(_, v) in &per_zeta {
        builder.add(EquationId::Lax, v);
    }
    let coefficients = LaxCoefficients::from_blocks(&Blocks::from_jet(&jet));
    Ok(LaxCheck {
        report: builder.finish(),
        per_zeta,
        coefficients,
    })
}

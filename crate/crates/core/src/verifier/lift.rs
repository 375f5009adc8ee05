//! Lift to eight real dimensions. Fields depend on `(x1, x2, x5, x6)` only, with
//! `z1 = x1 + i x2`, `z2 = x5 + i x6`, `Phi_1 = A_3 + i A_4`, `Phi_2 = A_7 + i A_8`.

use super::{EquationId, FieldSource, ReportBuilder, ResidualReport, StencilSpec, VerifyError};
use crate::algebra::{commutator, ComplexMat2, C64, I};
use crate::fields::PointFields;

type M = ComplexMat2;

/// The seven octonionic relations: each row sums `F_{mu nu}` over four ordered pairs (1-based).
pub const OCTONION_RELATIONS: [[(usize, usize); 4]; 7] = [
    [(1, 2), (3, 4), (5, 6), (7, 8)],
    [(1, 3), (4, 2), (5, 7), (8, 6)],
    [(1, 4), (2, 3), (7, 6), (8, 5)],
    [(1, 5), (6, 2), (7, 3), (4, 8)],
    [(1, 6), (2, 5), (3, 8), (4, 7)],
    [(1, 7), (8, 2), (3, 5), (6, 4)],
    [(1, 8), (2, 7), (6, 3), (5, 4)],
];

/// Pairs whose curvatures must sum to zero in the integrable 8d system.
pub const STRONG_SUMS: [[(usize, usize); 2]; 6] = [
    [(1, 2), (3, 4)],
    [(5, 6), (7, 8)],
    [(1, 3), (4, 2)],
    [(5, 7), (8, 6)],
    [(1, 4), (2, 3)],
    [(7, 6), (8, 5)],
];

/// Quadruples of curvatures that must coincide in the integrable 8d system.
pub const STRONG_CHAINS: [[(usize, usize); 4]; 4] = [
    [(1, 5), (2, 6), (3, 7), (4, 8)],
    [(1, 6), (5, 2), (8, 3), (4, 7)],
    [(1, 7), (2, 8), (5, 3), (6, 4)],
    [(1, 8), (7, 2), (3, 6), (5, 4)],
];

pub fn point_of(x8: &[f64; 8]) -> [C64; 2] {
    [C64::new(x8[0], x8[1]), C64::new(x8[4], x8[5])]
}

/// The eight anti-hermitian real potentials (0-based `mu`). Real-linear in the
/// fields, so it also maps real-coordinate derivative data.
pub fn lift_fields(f: &PointFields) -> [M; 8] {
    let gauge = |a: usize| [f.a[a] + f.a_bar[a], (f.a[a] - f.a_bar[a]) * I];
    let higgs = |a: usize| {
        let (p, pd) = (f.phi[a], f.phi[a].dagger());
        [(p - pd) * 0.5, (p + pd) * C64::new(0.0, -0.5)]
    };
    let [g1, g2, h1, h2] = [gauge(0), gauge(1), higgs(0), higgs(1)];
    [g1[0], g1[1], h1[0], h1[1], g2[0], g2[1], h2[0], h2[1]]
}

pub fn lifted_potential<S: FieldSource + ?Sized>(source: &S, x8: &[f64; 8]) -> [M; 8] {
    lift_fields(&source.fields(point_of(x8)))
}

/// All `F_{mu nu}` (0-based) of the lifted potential.
///
/// Derivatives along `x1, x2, x5, x6` come from the field jet; the remaining
/// four directions are differenced directly and vanish identically.
pub fn lifted_curvature<S: FieldSource + ?Sized>(
    source: &S,
    x8: &[f64; 8],
    s: &StencilSpec,
) -> Result<[[M; 8]; 8], VerifyError> {
    let jet = source.jet(point_of(x8), s)?;
    let pot = lift_fields(&jet.at);
    let mut d = [[M::ZERO; 8]; 8];
    for b in 0..2 {
        let dx = jet.d[b] + jet.dbar[b];
        let dy = (jet.d[b] - jet.dbar[b]) * I;
        d[4 * b] = lift_fields(&dx);
        d[4 * b + 1] = lift_fields(&dy);
    }
    let h = s.fd_step();
    for mu in [2, 3, 6, 7] {
        let shifted = |sign: f64| {
            let mut y = *x8;
            y[mu] += sign * h;
            lifted_potential(source, &y)
        };
        let (plus, minus) = (shifted(1.0), shifted(-1.0));
        for nu in 0..8 {
            d[mu][nu] = (plus[nu] - minus[nu]) * (0.5 / h);
        }
    }
    let mut f = [[M::ZERO; 8]; 8];
    for mu in 0..8 {
        for nu in 0..8 {
            f[mu][nu] = d[mu][nu] - d[nu][mu] + commutator(pot[mu], pot[nu]);
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftCheck {
    pub report: ResidualReport,
    /// Norm of each octonionic relation.
    pub octonion: [f64; 7],
    /// Six pair sums followed by the three consecutive differences of each chain.
    pub strong: [f64; 18],
}

pub fn lift_to_8d_check<S: FieldSource + ?Sized>(
    source: &S,
    x8: &[f64; 8],
    s: &StencilSpec,
) -> Result<LiftCheck, VerifyError> {
    let f = lifted_curvature(source, x8, s)?;
    let at = |(mu, nu): (usize, usize)| f[mu - 1][nu - 1];
    let octonion = OCTONION_RELATIONS.map(|row| {
        row.iter()
            .fold(M::ZERO, |acc, &p| acc + at(p))
            .frobenius_norm()
    });
    let mut strong = [0.0; 18];
    for (k, [p, q]) in STRONG_SUMS.iter().enumerate() {
        strong[k] = (at(*p) + at(*q)).frobenius_norm();
    }
    for (c, chain) in STRONG_CHAINS.iter().enumerate() {
        for k in 0..3 {
            strong[6 + 3 * c + k] = (at(chain[k]) - at(chain[k + 1])).frobenius_norm();
        }
    }
    let rss = |v: &[f64]| libm::sqrt(v.iter().map(|x| x * x).sum());
    let mut builder = ReportBuilder::new(s.fd_step());
    builder.add(EquationId::Octonion8, rss(&octonion));
    builder.add(EquationId::A4strong8, rss(&strong));
    Ok(LiftCheck {
        report: builder.finish(),
        octonion,
        strong,
    })
}

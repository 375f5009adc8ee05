//! Explicit solutions on C^2.
//!
//! * Abelian: `A = 0`, `Phi_a = (d_a theta) sigma3` for a polynomial `theta`.
//! * Polynomial ansatz: `Phi_a = (d_a P) [[0, P e^{psi/2}], [e^{-psi/2}, 0]]`,
//!   `A_abar = -1/4 (d_abar psi) sigma3`, `A_a = -(A_abar)^dagger`, with
//!   `psi = psi(|P|)` the radial transcendent.
//!
//! Index `a` is 0-based in code (`a = 0` is `z1`).

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::ops::{Add, Mul, Sub};

use crate::algebra::{sigma3, ComplexMat2, C64, ZERO};
use crate::painleve::TranscendentTable;
use crate::polynomial::Polynomial;

pub const NVARS: usize = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("polynomial ansatz needs degree >= 1, got {degree}")]
    DegeneratePolynomial { degree: i32 },
    #[error("expected a polynomial in {NVARS} variables, got {nvars}")]
    WrongVariableCount { nvars: usize },
    #[error("one-lump direction (alpha, beta) must be nonzero")]
    ZeroDirection,
}

/// All field components at one point of C^2. Also used for derivative data,
/// in which case each matrix holds the derivative of the corresponding field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointFields {
    pub z: [C64; 2],
    pub phi: [ComplexMat2; 2],
    pub a_bar: [ComplexMat2; 2],
    pub a: [ComplexMat2; 2],
}

impl PointFields {
    pub fn zero(z: [C64; 2]) -> Self {
        Self {
            z,
            phi: [ComplexMat2::ZERO; 2],
            a_bar: [ComplexMat2::ZERO; 2],
            a: [ComplexMat2::ZERO; 2],
        }
    }

    /// `s * self + t * other`, keeping `self.z`.
    pub fn combine(&self, s: C64, other: &Self, t: C64) -> Self {
        let f =
            |x: [ComplexMat2; 2], y: [ComplexMat2; 2]| [x[0] * s + y[0] * t, x[1] * s + y[1] * t];
        Self {
            z: self.z,
            phi: f(self.phi, other.phi),
            a_bar: f(self.a_bar, other.a_bar),
            a: f(self.a, other.a),
        }
    }

    /// Applies `f` to every matrix component.
    pub fn map(&self, f: impl Fn(ComplexMat2) -> ComplexMat2) -> Self {
        Self {
            z: self.z,
            phi: self.phi.map(&f),
            a_bar: self.a_bar.map(&f),
            a: self.a.map(&f),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.phi
            .iter()
            .chain(&self.a_bar)
            .chain(&self.a)
            .all(ComplexMat2::is_finite)
    }

    /// `max_a || A_a + A_abar^dagger ||`
    pub fn anti_hermiticity_defect(&self) -> f64 {
        (0..2)
            .map(|a| (self.a[a] + self.a_bar[a].dagger()).frobenius_norm())
            .fold(0.0, f64::max)
    }

    /// `G_ab = tr(Phi_a Phi_b)`
    pub fn g_matrix(&self) -> [[C64; 2]; 2] {
        let g = |a: usize, b: usize| (self.phi[a] * self.phi[b]).trace();
        [[g(0, 0), g(0, 1)], [g(1, 0), g(1, 1)]]
    }
}

impl Add for PointFields {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(C64::new(1.0, 0.0), &rhs, C64::new(1.0, 0.0))
    }
}

impl Sub for PointFields {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(C64::new(1.0, 0.0), &rhs, C64::new(-1.0, 0.0))
    }
}

impl Mul<C64> for PointFields {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.combine(s, &self, ZERO)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Abelian {
        theta: Polynomial,
    },
    PolyAnsatz {
        p: Polynomial,
        table: Arc<TranscendentTable>,
    },
}

/// A constructed configuration, immutable and cheap to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfig {
    kind: FieldKind,
    description: String,
    /// First partials of `theta` or `P`.
    d1: [Polynomial; 2],
    /// Second partials, symmetric.
    d2: [[Polynomial; 2]; 2],
}

fn partials(p: &Polynomial) -> ([Polynomial; 2], [[Polynomial; 2]; 2]) {
    let d = |q: &Polynomial, i: usize| q.partial(i).expect("index < NVARS");
    let d1 = [d(p, 0), d(p, 1)];
    let d2 = [[d(&d1[0], 0), d(&d1[0], 1)], [d(&d1[1], 0), d(&d1[1], 1)]];
    (d1, d2)
}

fn check_nvars(p: &Polynomial) -> Result<(), FieldError> {
    if p.nvars() != NVARS {
        return Err(FieldError::WrongVariableCount { nvars: p.nvars() });
    }
    Ok(())
}

/// `A = 0`, `Phi_a = (d_a theta) sigma3`.
pub fn build_abelian(theta: Polynomial) -> Result<FieldConfig, FieldError> {
    check_nvars(&theta)?;
    let (d1, d2) = partials(&theta);
    let description = format!("abelian: theta = {theta}");
    Ok(FieldConfig {
        kind: FieldKind::Abelian { theta },
        description,
        d1,
        d2,
    })
}

pub fn build_poly_ansatz(
    p: Polynomial,
    table: Arc<TranscendentTable>,
) -> Result<FieldConfig, FieldError> {
    check_nvars(&p)?;
    if p.degree() < 1 {
        return Err(FieldError::DegeneratePolynomial { degree: p.degree() });
    }
    let (d1, d2) = partials(&p);
    let description = format!(
        "polynomial ansatz: P = {p}; psi0 = {}, r_max = {}",
        table.psi0(),
        table.r_max()
    );
    Ok(FieldConfig {
        kind: FieldKind::PolyAnsatz { p, table },
        description,
        d1,
        d2,
    })
}

/// Ansatz with `P = alpha z1 + beta z2`: the one-lump solution in the direction
/// `(alpha, beta)`. With `theta = 2/3 P^{3/2}` it equals the lump written with
/// `theta = w^{3/2}` in the rescaled coordinate `w = (2/3)^{2/3} P`.
pub fn embed_one_lump(
    alpha: C64,
    beta: C64,
    table: Arc<TranscendentTable>,
) -> Result<FieldConfig, FieldError> {
    if alpha == ZERO && beta == ZERO {
        return Err(FieldError::ZeroDirection);
    }
    let p = Polynomial::from_terms(
        NVARS,
        [(alloc::vec![1, 0], alpha), (alloc::vec![0, 1], beta)],
    );
    let mut config = build_poly_ansatz(p, table)?;
    config.description = format!(
        "one-lump embedding along z = ({alpha})*z1 + ({beta})*z2; lump coordinate w = (2/3)^(2/3) * z; {}",
        config.description
    );
    Ok(config)
}

impl FieldConfig {
    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, FieldKind::Abelian { .. })
    }

    /// `theta` or `P`.
    pub fn polynomial(&self) -> &Polynomial {
        match &self.kind {
            FieldKind::Abelian { theta } => theta,
            FieldKind::PolyAnsatz { p, .. } => p,
        }
    }

    pub fn table(&self) -> Option<&Arc<TranscendentTable>> {
        match &self.kind {
            FieldKind::Abelian { .. } => None,
            FieldKind::PolyAnsatz { table, .. } => Some(table),
        }
    }

    /// Partial `d_a` of `theta` or `P`.
    pub fn first_partial(&self, a: usize) -> &Polynomial {
        &self.d1[a]
    }

    pub fn second_partial(&self, a: usize, b: usize) -> &Polynomial {
        &self.d2[a][b]
    }

    pub fn eval_fields(&self, z: [C64; 2]) -> PointFields {
        let dp = [self.d1[0].eval(&z), self.d1[1].eval(&z)];
        match &self.kind {
            FieldKind::Abelian { .. } => PointFields {
                z,
                phi: dp.map(|d| sigma3() * d),
                ..PointFields::zero(z)
            },
            FieldKind::PolyAnsatz { p, table } => {
                let pv = p.eval(&z);
                let r = pv.norm();
                let (psi, _, _) = table.psi_at(r);
                let g = table.dpsi_over_r(r);
                let (up, down) = (libm::exp(0.5 * psi), libm::exp(-0.5 * psi));
                let m = ComplexMat2::offdiag(pv * up, C64::new(down, 0.0));
                // d_abar psi = g/2 P conj(d_a P)
                let a_bar = dp.map(|d| sigma3() * (pv * d.conj() * (-0.125 * g)));
                PointFields {
                    z,
                    phi: dp.map(|d| m * d),
                    a_bar,
                    a: a_bar.map(|x| -x.dagger()),
                }
            }
        }
    }

    /// Gauge-field norm `|e^{-psi} - |P|^2 e^{psi}| (|d_1 P|^2 + |d_2 P|^2)`; zero for abelian data.
    pub fn gauge_field_norm(&self, z: [C64; 2]) -> f64 {
        match &self.kind {
            FieldKind::Abelian { .. } => 0.0,
            FieldKind::PolyAnsatz { p, table } => {
                let r = p.eval(&z).norm();
                let (psi, _, _) = table.psi_at(r);
                let grad = self.d1[0].eval(&z).norm_sqr() + self.d1[1].eval(&z).norm_sqr();
                libm::fabs(libm::exp(-psi) - r * r * libm::exp(psi)) * grad
            }
        }
    }

    /// Closed form of `tr(Phi_a Phi_b)`: `2 theta_a theta_b` (abelian) or `2 P P_a P_b`.
    pub fn expected_g(&self, z: [C64; 2]) -> [[C64; 2]; 2] {
        let dp = [self.d1[0].eval(&z), self.d1[1].eval(&z)];
        let scale = match &self.kind {
            FieldKind::Abelian { .. } => C64::new(2.0, 0.0),
            FieldKind::PolyAnsatz { p, .. } => p.eval(&z) * 2.0,
        };
        [
            [scale * dp[0] * dp[0], scale * dp[0] * dp[1]],
            [scale * dp[1] * dp[0], scale * dp[1] * dp[1]],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::commutator;
    use crate::painleve::solve_radial;

    extern crate std;
    use std::sync::OnceLock;

    fn table() -> Arc<TranscendentTable> {
        static TABLE: OnceLock<Arc<TranscendentTable>> = OnceLock::new();
        TABLE
            .get_or_init(|| Arc::new(solve_radial(8.0, 1e-8).unwrap()))
            .clone()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn conic() -> FieldConfig {
        build_poly_ansatz(Polynomial::parse("2*z1^2 + z2^2 - 4", 2).unwrap(), table()).unwrap()
    }

    fn sample_points() -> impl Iterator<Item = [C64; 2]> {
        (0..40).map(|k| {
            let t = k as f64;
            [
                c(3.0 * (0.7 * t).sin(), 0.5 * (1.3 * t).cos()),
                c(2.5 * (0.9 * t + 1.0).cos(), 0.8 * (0.4 * t).sin()),
            ]
        })
    }

    #[test]
    fn abelian_examples() {
        let f = build_abelian(Polynomial::parse("z1", 2).unwrap()).unwrap();
        let pf = f.eval_fields([c(0.3, 2.0), c(-1.0, 0.5)]);
        assert_eq!(pf.phi, [sigma3(), ComplexMat2::ZERO]);
        assert_eq!(pf.a_bar, [ComplexMat2::ZERO; 2]);
        assert_eq!(pf.a, [ComplexMat2::ZERO; 2]);

        let f = build_abelian(Polynomial::parse("z1^3 + z1*z2", 2).unwrap()).unwrap();
        let pf = f.eval_fields([c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(pf.phi, [sigma3() * 5.0, sigma3()]);
        assert_eq!(f.gauge_field_norm([c(1.0, 0.0), c(2.0, 0.0)]), 0.0);
    }

    #[test]
    fn ansatz_rejects_constants_and_wrong_arity() {
        let err = build_poly_ansatz(Polynomial::parse("3", 2).unwrap(), table()).unwrap_err();
        assert_eq!(err, FieldError::DegeneratePolynomial { degree: 0 });
        let err = build_poly_ansatz(Polynomial::parse("0", 2).unwrap(), table()).unwrap_err();
        assert_eq!(err, FieldError::DegeneratePolynomial { degree: -1 });
        let err = build_abelian(Polynomial::parse("z1", 1).unwrap()).unwrap_err();
        assert_eq!(err, FieldError::WrongVariableCount { nvars: 1 });
        assert_eq!(
            embed_one_lump(ZERO, ZERO, table()).unwrap_err(),
            FieldError::ZeroDirection
        );
    }

    #[test]
    fn higgs_field_is_nilpotent_on_the_conic() {
        let f = conic();
        let z = [c(2f64.sqrt(), 0.0), ZERO];
        let pf = f.eval_fields(z);
        let lower = (-0.5 * table().psi0()).exp();
        let dp = [4.0 * 2f64.sqrt(), 0.0];
        for a in 0..2 {
            assert!(pf.phi[a].e12.norm() < 1e-12);
            assert_eq!(pf.phi[a].e11, ZERO);
            assert_eq!(pf.phi[a].e22, ZERO);
            assert!((pf.phi[a].e21 - dp[a] * lower).norm() < 1e-12);
        }
    }

    #[test]
    fn pointwise_invariants() {
        let f = conic();
        for z in sample_points() {
            let pf = f.eval_fields(z);
            assert!(pf.is_finite());
            for a in 0..2 {
                assert!(pf.phi[a].trace().norm() < 1e-12);
            }
            assert!(pf.anti_hermiticity_defect() < 1e-12);
            assert!(
                commutator(pf.phi[0], pf.phi[1]).frobenius_norm()
                    < 1e-13 * (1.0 + pf.phi[0].frobenius_norm_sqr())
            );
            let (g, want) = (pf.g_matrix(), f.expected_g(z));
            for a in 0..2 {
                for b in 0..2 {
                    assert!((g[a][b] - want[a][b]).norm() <= 1e-8 * want[a][b].norm().max(1.0));
                }
            }
            assert!(f.gauge_field_norm(z) >= 0.0);
        }
    }

    #[test]
    fn far_field_is_approximately_abelian() {
        let f = conic();
        let pf = f.eval_fields([c(10.0, 0.0), c(10.0, 0.0)]);
        for a in 0..2 {
            let normality = commutator(pf.phi[a], pf.phi[a].dagger()).frobenius_norm();
            assert!(normality < 1e-3 * pf.phi[a].frobenius_norm_sqr());
        }
        // and distinctly non-abelian on the zero set
        let pf = f.eval_fields([c(2f64.sqrt(), 0.0), ZERO]);
        let normality = commutator(pf.phi[0], pf.phi[0].dagger()).frobenius_norm();
        assert!(normality > 0.5 * pf.phi[0].frobenius_norm_sqr());
    }

    #[test]
    fn reflection_symmetry_of_the_conic() {
        let f = conic();
        for z in sample_points() {
            let (p, q) = (f.eval_fields(z), f.eval_fields([z[0], -z[1]]));
            for a in 0..2 {
                for (x, y) in p.phi[a].entries().iter().zip(q.phi[a].entries()) {
                    assert!((x.norm() - y.norm()).abs() < 1e-12 * (1.0 + x.norm()));
                }
            }
            assert!((f.gauge_field_norm(z) - f.gauge_field_norm([z[0], -z[1]])).abs() < 1e-12);
        }
    }

    #[test]
    fn fields_are_smooth_across_the_zero_set() {
        let f = conic();
        let at = |x: f64| f.eval_fields([c(x, 0.0), c(0.0, 0.0)]);
        let x0 = 2f64.sqrt();
        for h in [1e-3, 1e-4, 1e-5, 1e-6] {
            let (l, r, m) = (at(x0 - h), at(x0 + h), at(x0));
            for a in 0..2 {
                let slope = (r.phi[a] - l.phi[a]).frobenius_norm() / (2.0 * h);
                let curvature = (r.phi[a] + l.phi[a] - m.phi[a] * 2.0).frobenius_norm() / (h * h);
                assert!(
                    slope < 50.0 && curvature < 500.0,
                    "h = {h}: {slope} {curvature}"
                );
                let jump = (r.a_bar[a] - l.a_bar[a]).frobenius_norm() / (2.0 * h);
                assert!(jump < 50.0);
            }
        }
    }

    #[test]
    fn one_lump_depends_only_on_its_direction() {
        let f = embed_one_lump(c(1.0, 0.0), ZERO, table()).unwrap();
        for z2 in [c(0.0, 0.0), c(2.0, -1.0), c(-3.0, 0.5)] {
            assert_eq!(
                f.gauge_field_norm([c(0.4, 0.1), z2]),
                f.gauge_field_norm([c(0.4, 0.1), ZERO])
            );
        }
        let peak = f.gauge_field_norm([ZERO, ZERO]);
        for k in 1..=300 {
            let x = -3.0 + 0.02 * k as f64;
            assert!(f.gauge_field_norm([c(x, 0.0), ZERO]) <= peak);
        }
        assert!(f.description().contains("one-lump"));
    }

    #[test]
    fn one_lump_phase_rotation() {
        let (alpha, beta) = (c(0.6, 0.3), c(-0.2, 0.9));
        let phase = C64::from_polar(1.0, 0.7);
        let f = embed_one_lump(alpha, beta, table()).unwrap();
        let g = embed_one_lump(alpha * phase, beta * phase, table()).unwrap();
        for z in sample_points() {
            assert!(
                (f.gauge_field_norm(z) - g.gauge_field_norm(z)).abs()
                    < 1e-10 * (1.0 + f.gauge_field_norm(z))
            );
        }
    }

    #[test]
    fn conic_field_peaks_on_the_ellipse() {
        let f = conic();
        let (mut best, mut at) = (0.0, (0.0, 0.0));
        for i in 0..=120 {
            for j in 0..=120 {
                let (x, y) = (-3.0 + 0.05 * i as f64, -3.0 + 0.05 * j as f64);
                let v = f.gauge_field_norm([c(x, 0.0), c(y, 0.0)]);
                if v > best {
                    best = v;
                    at = (x, y);
                }
            }
        }
        let level = 2.0 * at.0 * at.0 + at.1 * at.1 - 4.0;
        let grad = (16.0 * at.0 * at.0 + 4.0 * at.1 * at.1).sqrt();
        assert!((level / grad).abs() < 0.1, "{at:?}");
    }
}

use alloc::vec::Vec;

use super::residuals::{point_residuals, EQ10_FAMILIES};
use super::{
    curvature_norm_fd, fd_jet, EquationId, FieldJet, FieldSource, Scheme, StencilSpec, VerifyError,
};
use crate::algebra::{commutator, random_su2, ComplexMat2, SU2Element, C64};
use crate::fields::PointFields;
use crate::polynomial::Polynomial;
use crate::rng::SampleRng;

type M = ComplexMat2;

/// `Lambda(z) = U exp(f(z) X)` with `U` constant, `X = i n.sigma` for a unit
/// axis `n`, and `f = Re q` for a holomorphic polynomial `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransform {
    constant: SU2Element,
    axis: [f64; 3],
    profile: Polynomial,
    dprofile: [Polynomial; 2],
    ddprofile: [[Polynomial; 2]; 2],
}

impl GaugeTransform {
    /// `profile` must be a polynomial in two variables.
    pub fn new(constant: SU2Element, axis: [f64; 3], profile: Polynomial) -> Option<Self> {
        let n = libm::sqrt(axis.iter().map(|v| v * v).sum());
        if !(n > 0.0) || profile.nvars() != 2 {
            return None;
        }
        let d = |p: &Polynomial, i| p.partial(i).expect("two variables");
        let dprofile = [d(&profile, 0), d(&profile, 1)];
        let ddprofile = [
            [d(&dprofile[0], 0), d(&dprofile[0], 1)],
            [d(&dprofile[1], 0), d(&dprofile[1], 1)],
        ];
        Some(Self {
            constant,
            axis: axis.map(|v| v / n),
            profile,
            dprofile,
            ddprofile,
        })
    }

    pub fn identity() -> Self {
        Self::constant(SU2Element::IDENTITY)
    }

    pub fn constant(u: SU2Element) -> Self {
        Self::new(u, [0.0, 0.0, 1.0], Polynomial::zero(2)).expect("valid axis")
    }

    /// Random constant part and axis, quadratic profile with coefficients of size <= 1/2.
    pub fn position_dependent(seed: u64) -> Self {
        let mut rng = SampleRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
        let axis = [
            rng.uniform_in(-1.0, 1.0),
            rng.uniform_in(-1.0, 1.0),
            rng.uniform_in(-1.0, 1.0) + 2.0,
        ];
        let mut c = || C64::new(rng.uniform_in(-0.5, 0.5), rng.uniform_in(-0.5, 0.5));
        let terms =
            [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2]].map(|e| (alloc::vec![e[0], e[1]], c()));
        Self::new(random_su2(seed), axis, Polynomial::from_terms(2, terms)).expect("valid axis")
    }

    pub fn is_constant(&self) -> bool {
        self.profile.degree() <= 0
    }

    fn generator(&self) -> M {
        let [x, y, z] = self.axis;
        M::new(
            C64::new(0.0, z),
            C64::new(y, x),
            C64::new(-y, x),
            C64::new(0.0, -z),
        )
    }

    fn f(&self, z: [C64; 2]) -> f64 {
        self.profile.eval(&z).re
    }

    pub fn element(&self, z: [C64; 2]) -> SU2Element {
        let [x, y, w] = self.axis;
        let (s, c) = (libm::sin(self.f(z)), libm::cos(self.f(z)));
        let rot = SU2Element::from_quaternion([c, s * x, s * y, s * w]).expect("unit quaternion");
        SU2Element::from_quaternion(quaternion_product(&self.constant, &rot))
            .expect("unit quaternion")
    }

    /// `(d_a f, d_abar f)`
    fn df(&self, z: [C64; 2]) -> [(C64, C64); 2] {
        [0, 1].map(|a| {
            let q = self.dprofile[a].eval(&z) * 0.5;
            (q, q.conj())
        })
    }
}

fn quaternion_product(u: &SU2Element, v: &SU2Element) -> [f64; 4] {
    let m = u.matrix() * v.matrix();
    // inverse of `from_quaternion`: m = [[a+id, c+ib], [-c+ib, a-id]]
    [m.e11.re, m.e12.im, m.e12.re, m.e11.im]
}

/// A source viewed through a gauge transformation.
pub struct GaugeTransformed<'a, S: FieldSource + ?Sized> {
    pub inner: &'a S,
    pub transform: GaugeTransform,
}

impl<S: FieldSource + ?Sized> GaugeTransformed<'_, S> {
    fn transport_jet(&self, inner: &FieldJet) -> FieldJet {
        let z = inner.at.z;
        let lambda = self.transform.element(z);
        let x = self.transform.generator();
        let df = self.transform.df(z);
        let conj = |m: M| lambda.conjugate(m);
        let at = transformed_fields(&inner.at, lambda, x, df);
        // d(L^-1 Y L) = L^-1 (dY) L + df [L^-1 Y L, X];  d(A') adds d(d_a f) X
        let rotated = inner.at.map(conj);
        let derive = |dy: &PointFields, dfc: C64, holo: bool, c: usize| {
            let mut out = dy.map(conj);
            let add = |acc: &mut [M; 2], src: &[M; 2]| {
                for k in 0..2 {
                    acc[k] += commutator(src[k], x) * dfc;
                }
            };
            add(&mut out.phi, &rotated.phi);
            add(&mut out.a, &rotated.a);
            add(&mut out.a_bar, &rotated.a_bar);
            for a in 0..2 {
                let q = self.transform.ddprofile[c][a].eval(&z) * 0.5;
                if holo {
                    out.a[a] += x * q;
                } else {
                    out.a_bar[a] += x * q.conj();
                }
            }
            out
        };
        FieldJet {
            at,
            d: [0, 1].map(|c| derive(&inner.d[c], df[c].0, true, c)),
            dbar: [0, 1].map(|c| derive(&inner.dbar[c], df[c].1, false, c)),
        }
    }
}

fn transformed_fields(
    f: &PointFields,
    lambda: SU2Element,
    x: M,
    df: [(C64, C64); 2],
) -> PointFields {
    let mut out = f.map(|m| lambda.conjugate(m));
    for a in 0..2 {
        out.a[a] += x * df[a].0;
        out.a_bar[a] += x * df[a].1;
    }
    out
}

impl<S: FieldSource + ?Sized> FieldSource for GaugeTransformed<'_, S> {
    fn fields(&self, z: [C64; 2]) -> PointFields {
        let f = self.inner.fields(z);
        transformed_fields(
            &f,
            self.transform.element(z),
            self.transform.generator(),
            self.transform.df(z),
        )
    }

    fn analytic_jet(&self, z: [C64; 2]) -> Option<FieldJet> {
        self.inner.analytic_jet(z).map(|j| self.transport_jet(&j))
    }

    /// Constant transforms and analytic stencils carry the inner derivative
    /// data across exactly; otherwise the transformed fields are differenced afresh.
    fn jet(&self, z: [C64; 2], s: &StencilSpec) -> Result<FieldJet, VerifyError> {
        if s.scheme() == Scheme::Analytic || self.transform.is_constant() {
            return Ok(self.transport_jet(&self.inner.jet(z, s)?));
        }
        fd_jet(self, z, s.fd_step(), s.scheme() == Scheme::Richardson)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeDeltas {
    /// `(id, |after - before|)` for every residual family.
    pub residuals: Vec<(EquationId, f64)>,
    /// Change of the finite-difference curvature norm.
    pub curvature_norm: f64,
}

impl GaugeDeltas {
    pub fn max(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.1)
            .fold(self.curvature_norm, f64::max)
    }
}

/// Random position-dependent transform drawn from `seed`.
pub fn gauge_invariance_check<S: FieldSource + ?Sized>(
    source: &S,
    seed: u64,
    z: [C64; 2],
    s: &StencilSpec,
) -> Result<GaugeDeltas, VerifyError> {
    gauge_invariance_check_with(source, &GaugeTransform::position_dependent(seed), z, s)
}

pub fn gauge_invariance_check_with<S: FieldSource + ?Sized>(
    source: &S,
    transform: &GaugeTransform,
    z: [C64; 2],
    s: &StencilSpec,
) -> Result<GaugeDeltas, VerifyError> {
    let moved = GaugeTransformed {
        inner: source,
        transform: transform.clone(),
    };
    let (before, after) = (
        point_residuals(source, z, s)?,
        point_residuals(&moved, z, s)?,
    );
    let ids = EQ10_FAMILIES
        .iter()
        .chain(&[EquationId::Simpson, EquationId::KW4]);
    let residuals = ids
        .map(|&id| {
            (
                id,
                libm::fabs(
                    after.value(id).expect("known id") - before.value(id).expect("known id"),
                ),
            )
        })
        .collect();
    let curvature_norm =
        libm::fabs(curvature_norm_fd(&moved, z, s)? - curvature_norm_fd(source, z, s)?);
    Ok(GaugeDeltas {
        residuals,
        curvature_norm,
    })
}

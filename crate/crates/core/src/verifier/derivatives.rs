use core::ops::{Add, Mul, Sub};

use super::VerifyError;
use crate::algebra::{sigma3, C64, I};
use crate::fields::{FieldConfig, FieldKind, PointFields};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Second-order central differences with step `fd_step`.
    Central2,
    /// Central differences at `fd_step` and `fd_step/2`, Richardson-extrapolated to fourth order.
    Richardson,
    /// Exact derivatives where the configuration provides them.
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilSpec {
    fd_step: f64,
    scheme: Scheme,
}

impl StencilSpec {
    pub fn new(fd_step: f64, scheme: Scheme) -> Result<Self, VerifyError> {
        if !(fd_step > 0.0 && fd_step.is_finite()) {
            return Err(VerifyError::InvalidStep(fd_step));
        }
        Ok(Self { fd_step, scheme })
    }

    pub fn central(fd_step: f64) -> Result<Self, VerifyError> {
        Self::new(fd_step, Scheme::Central2)
    }

    /// Analytic derivatives; `fd_step` is carried only for reporting and fallbacks.
    pub fn analytic() -> Self {
        Self {
            fd_step: 1e-3,
            scheme: Scheme::Analytic,
        }
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }
}

/// Fields at a point together with their `d_{z^b}` and `d_{zbar^b}` derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldJet {
    pub at: PointFields,
    pub d: [PointFields; 2],
    pub dbar: [PointFields; 2],
}

/// Anything that yields field values on C^2.
pub trait FieldSource {
    fn fields(&self, z: [C64; 2]) -> PointFields;

    /// Exact derivative data, if the source knows it.
    fn analytic_jet(&self, _z: [C64; 2]) -> Option<FieldJet> {
        None
    }

    fn jet(&self, z: [C64; 2], stencil: &StencilSpec) -> Result<FieldJet, VerifyError> {
        match stencil.scheme() {
            Scheme::Analytic => self.analytic_jet(z).ok_or(VerifyError::AnalyticUnavailable),
            scheme => fd_jet(self, z, stencil.fd_step(), scheme == Scheme::Richardson),
        }
    }
}

impl FieldSource for FieldConfig {
    fn fields(&self, z: [C64; 2]) -> PointFields {
        self.eval_fields(z)
    }

    fn analytic_jet(&self, z: [C64; 2]) -> Option<FieldJet> {
        let FieldKind::Abelian { .. } = self.kind() else {
            return None;
        };
        let at = self.eval_fields(z);
        let d = [0, 1].map(|b| {
            let phi = [0, 1].map(|a| sigma3() * self.second_partial(a, b).eval(&z));
            PointFields {
                phi,
                ..PointFields::zero(z)
            }
        });
        Some(FieldJet {
            at,
            d,
            dbar: [PointFields::zero(z); 2],
        })
    }
}

/// Linear spaces that finite differences can act on.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<C64, Output = Self> {}
impl<T: Copy + Add<Output = T> + Sub<Output = T> + Mul<C64, Output = T>> Linear for T {}

/// `(d_{z^b} f, d_{zbar^b} f)` for `b = 0, 1` by central differences; fourth order when `richardson`.
pub fn wirtinger_fd<T: Linear>(
    f: impl Fn([C64; 2]) -> T,
    z: [C64; 2],
    step: f64,
    richardson: bool,
) -> [(T, T); 2] {
    let central = |b: usize, h: f64| {
        let shifted = |dz: C64| {
            let mut w = z;
            w[b] += dz;
            f(w)
        };
        let scale = C64::new(0.5 / h, 0.0);
        let dx = (shifted(C64::new(h, 0.0)) - shifted(C64::new(-h, 0.0))) * scale;
        let dy = (shifted(C64::new(0.0, h)) - shifted(C64::new(0.0, -h))) * scale;
        let half = C64::new(0.5, 0.0);
        ((dx - dy * I) * half, (dx + dy * I) * half)
    };
    [0, 1].map(|b| {
        let (d, dbar) = central(b, step);
        if !richardson {
            return (d, dbar);
        }
        let (d2, dbar2) = central(b, 0.5 * step);
        let (w_fine, w_coarse) = (C64::new(4.0 / 3.0, 0.0), C64::new(1.0 / 3.0, 0.0));
        (d2 * w_fine - d * w_coarse, dbar2 * w_fine - dbar * w_coarse)
    })
}

pub fn fd_jet<S: FieldSource + ?Sized>(
    source: &S,
    z: [C64; 2],
    step: f64,
    richardson: bool,
) -> Result<FieldJet, VerifyError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(VerifyError::InvalidStep(step));
    }
    let at = source.fields(z);
    let [(d0, db0), (d1, db1)] = wirtinger_fd(|w| source.fields(w), z, step, richardson);
    let jet = FieldJet {
        at,
        d: [d0, d1],
        dbar: [db0, db1],
    };
    let all = [jet.at, d0, d1, db0, db1];
    if !all.iter().all(PointFields::is_finite) {
        return Err(VerifyError::NonFinite(z));
    }
    Ok(FieldJet {
        d: jet.d.map(|p| PointFields { z, ..p }),
        dbar: jet.dbar.map(|p| PointFields { z, ..p }),
        ..jet
    })
}

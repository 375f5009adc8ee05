//! 2x2 complex matrices, the su(2) / sl(2,C) arena shared by every other module.
//!
//! Gauge potentials are anti-hermitian, Higgs fields live in the complexified
//! algebra, and gauge transformations act by `X -> g^{-1} X g`.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::rng::SampleRng;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense 2x2 complex matrix.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct ComplexMat2 {
    pub e11: C64,
    pub e12: C64,
    pub e21: C64,
    pub e22: C64,
}

impl ComplexMat2 {
    pub const ZERO: Self = Self::new(ZERO, ZERO, ZERO, ZERO);
    pub const IDENTITY: Self = Self::new(ONE, ZERO, ZERO, ONE);

    pub const fn new(e11: C64, e12: C64, e21: C64, e22: C64) -> Self {
        Self { e11, e12, e21, e22 }
    }

    pub const fn diag(a: C64, d: C64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    /// `[[0, upper], [lower, 0]]`
    pub const fn offdiag(upper: C64, lower: C64) -> Self {
        Self::new(ZERO, upper, lower, ZERO)
    }

    pub fn from_real(e11: f64, e12: f64, e21: f64, e22: f64) -> Self {
        Self::new(e11.into(), e12.into(), e21.into(), e22.into())
    }

    pub fn scale(self, s: C64) -> Self {
        Self::new(self.e11 * s, self.e12 * s, self.e21 * s, self.e22 * s)
    }

    pub fn scale_real(self, s: f64) -> Self {
        Self::new(self.e11 * s, self.e12 * s, self.e21 * s, self.e22 * s)
    }

    pub fn trace(&self) -> C64 {
        self.e11 + self.e22
    }

    pub fn det(&self) -> C64 {
        self.e11 * self.e22 - self.e12 * self.e21
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::new(
            self.e11.conj(),
            self.e21.conj(),
            self.e12.conj(),
            self.e22.conj(),
        )
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.frobenius_norm_sqr())
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.e11.norm_sqr() + self.e12.norm_sqr() + self.e21.norm_sqr() + self.e22.norm_sqr()
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.e11, self.e12, self.e21, self.e22]
    }

    /// Inverse, or `None` when the determinant vanishes exactly.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == ZERO {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(
            self.e22 * inv,
            -self.e12 * inv,
            -self.e21 * inv,
            self.e11 * inv,
        ))
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.e11 + o.e11,
            self.e12 + o.e12,
            self.e21 + o.e21,
            self.e22 + o.e22,
        )
    }
}

impl AddAssign for ComplexMat2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.e11 - o.e11,
            self.e12 - o.e12,
            self.e21 - o.e21,
            self.e22 - o.e22,
        )
    }
}

impl Neg for ComplexMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.e11, -self.e12, -self.e21, -self.e22)
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.e11 * o.e11 + self.e12 * o.e21,
            self.e11 * o.e12 + self.e12 * o.e22,
            self.e21 * o.e11 + self.e22 * o.e21,
            self.e21 * o.e12 + self.e22 * o.e22,
        )
    }
}

impl Mul<C64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.scale(s)
    }
}

impl Mul<ComplexMat2> for C64 {
    type Output = ComplexMat2;
    fn mul(self, m: ComplexMat2) -> ComplexMat2 {
        m.scale(self)
    }
}

impl Mul<f64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale_real(s)
    }
}

impl Mul<ComplexMat2> for f64 {
    type Output = ComplexMat2;
    fn mul(self, m: ComplexMat2) -> ComplexMat2 {
        m.scale_real(self)
    }
}

impl fmt::Debug for ComplexMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e11, self.e12, self.e21, self.e22
        )
    }
}

/// `xy - yx`
pub fn commutator(x: ComplexMat2, y: ComplexMat2) -> ComplexMat2 {
    x * y - y * x
}

pub fn dagger(x: ComplexMat2) -> ComplexMat2 {
    x.dagger()
}

pub fn frobenius_norm(x: ComplexMat2) -> f64 {
    x.frobenius_norm()
}

/// Pauli `sigma_3 = diag(1, -1)`.
pub const fn sigma3() -> ComplexMat2 {
    ComplexMat2::diag(ONE, C64::new(-1.0, 0.0))
}

pub const fn sigma1() -> ComplexMat2 {
    ComplexMat2::offdiag(ONE, ONE)
}

pub const fn sigma2() -> ComplexMat2 {
    ComplexMat2::offdiag(C64::new(0.0, -1.0), I)
}

/// Unit quaternion `(a, b, c, d)` as the SU(2) matrix `a + i(b s1 + c s2 + d s3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SU2Element {
    m: ComplexMat2,
}

impl SU2Element {
    pub const IDENTITY: Self = Self {
        m: ComplexMat2::IDENTITY,
    };

    /// Normalizes the quaternion; `None` for the zero quaternion.
    pub fn from_quaternion(q: [f64; 4]) -> Option<Self> {
        let n = libm::sqrt(q.iter().map(|v| v * v).sum::<f64>());
        if !(n > 0.0) || !n.is_finite() {
            return None;
        }
        let [a, b, c, d] = q.map(|v| v / n);
        Some(Self {
            m: ComplexMat2::new(
                C64::new(a, d),
                C64::new(c, b),
                C64::new(-c, b),
                C64::new(a, -d),
            ),
        })
    }

    /// `exp(angle * i n.sigma)` for a (not necessarily normalized) axis `n`.
    pub fn exp_axis(axis: [f64; 3], angle: f64) -> Option<Self> {
        let n = libm::sqrt(axis.iter().map(|v| v * v).sum::<f64>());
        if !(n > 0.0) {
            return None;
        }
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Self::from_quaternion([c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n])
    }

    pub fn matrix(&self) -> ComplexMat2 {
        self.m
    }

    pub fn inverse(&self) -> Self {
        Self { m: self.m.dagger() }
    }

    /// `g^{-1} x g`
    pub fn conjugate(&self, x: ComplexMat2) -> ComplexMat2 {
        self.m.dagger() * x * self.m
    }

    /// `|| m m^dagger - 1 ||_F`
    pub fn unitarity_defect(&self) -> f64 {
        (self.m * self.m.dagger() - ComplexMat2::IDENTITY).frobenius_norm()
    }
}

/// Haar-distributed SU(2) element, deterministic in `seed`.
///
/// Draws three uniforms from PCG64 (XSL-RR 128/64) seeded with `seed` and maps
/// them to the unit 3-sphere with Shoemake's construction:
/// `q = (sqrt(1-u1) sin 2pi u2, sqrt(1-u1) cos 2pi u2, sqrt(u1) sin 2pi u3, sqrt(u1) cos 2pi u3)`.
pub fn random_su2(seed: u64) -> SU2Element {
    let mut rng = SampleRng::new(seed);
    let (u1, u2, u3) = (rng.uniform(), rng.uniform(), rng.uniform());
    let tau = 2.0 * core::f64::consts::PI;
    let (s1, s2) = (libm::sqrt(1.0 - u1), libm::sqrt(u1));
    let q = [
        s1 * libm::sin(tau * u2),
        s1 * libm::cos(tau * u2),
        s2 * libm::sin(tau * u3),
        s2 * libm::cos(tau * u3),
    ];
    SU2Element::from_quaternion(q).unwrap_or(SU2Element::IDENTITY)
}

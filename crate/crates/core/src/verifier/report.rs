use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::algebra::C64;
use crate::rng::SampleRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EquationId {
    /// `D_abar Phi_b = 0`
    DbarPhi,
    /// `F_{a bbar} + 1/4 [Phi_a, Phi_b^dagger] = 0`
    FplusComm,
    /// `[Phi_a, Phi_b] = 0`
    PhiPhiComm,
    /// `F_ab = 0`
    F20,
    /// `D_1 Phi_2 - D_2 Phi_1 = 0`
    DPhiSkew,
    /// Curvature of the spectral connection.
    Lax,
    /// Trace equation plus the holomorphic conditions.
    Simpson,
    /// Four-dimensional complex form of the octonionic reduction.
    KW4,
    /// Seven octonionic relations of the lifted 8d curvature.
    Octonion8,
    /// Pair and chain relations of the integrable 8d system.
    A4strong8,
    /// `d_abar tr(Phi_b Phi_c)`
    Gholo,
    /// `tr(Phi_a Phi_b)` against its closed form.
    GIdentity,
}

impl EquationId {
    pub const ALL: [EquationId; 12] = [
        Self::DbarPhi,
        Self::FplusComm,
        Self::PhiPhiComm,
        Self::F20,
        Self::DPhiSkew,
        Self::Lax,
        Self::Simpson,
        Self::KW4,
        Self::Octonion8,
        Self::A4strong8,
        Self::Gholo,
        Self::GIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::DbarPhi => "DbarPhi",
            Self::FplusComm => "FplusComm",
            Self::PhiPhiComm => "PhiPhiComm",
            Self::F20 => "F20",
            Self::DPhiSkew => "DPhiSkew",
            Self::Lax => "Lax",
            Self::Simpson => "Simpson",
            Self::KW4 => "KW4",
            Self::Octonion8 => "Octonion8",
            Self::A4strong8 => "A4strong8",
            Self::Gholo => "Gholo",
            Self::GIdentity => "GIdentity",
        }
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("unknown equation id")]
pub struct UnknownEquationId;

impl FromStr for EquationId {
    type Err = UnknownEquationId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or(UnknownEquationId)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualEntry {
    pub id: EquationId,
    pub max_abs: f64,
    pub rms: f64,
    pub n_samples: usize,
    pub fd_step: f64,
}

/// One entry per equation id, in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResidualReport {
    entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn entries(&self) -> &[ResidualEntry] {
        &self.entries
    }

    pub fn get(&self, id: EquationId) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn max_abs(&self, id: EquationId) -> Option<f64> {
        self.get(id).map(|e| e.max_abs)
    }

    /// Largest `max_abs` over all entries; NaN if any entry is NaN.
    pub fn worst(&self) -> f64 {
        self.entries.iter().map(|e| e.max_abs).fold(0.0, |acc, v| {
            if acc.is_nan() || v.is_nan() {
                f64::NAN
            } else {
                acc.max(v)
            }
        })
    }

    /// Appends entries whose ids are not present yet; returns false on a duplicate id.
    pub fn merge(&mut self, other: &ResidualReport) -> bool {
        let mut clean = true;
        for e in &other.entries {
            if self.get(e.id).is_some() {
                clean = false;
            } else {
                self.entries.push(*e);
            }
        }
        clean
    }

    /// Assembles a report from raw entries; `None` if an id repeats or `max_abs >= rms >= 0` fails.
    pub fn from_entries(entries: Vec<ResidualEntry>) -> Option<Self> {
        for (i, e) in entries.iter().enumerate() {
            if entries[..i].iter().any(|f| f.id == e.id) {
                return None;
            }
            let ordered = e.max_abs >= e.rms && e.rms >= 0.0;
            if !(ordered || e.max_abs.is_nan() || e.rms.is_nan()) {
                return None;
            }
        }
        Some(Self { entries })
    }
}

/// Accumulates per-sample values into max/RMS entries.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    fd_step: f64,
    acc: Vec<(EquationId, f64, f64, usize)>,
}

impl ReportBuilder {
    pub fn new(fd_step: f64) -> Self {
        Self {
            fd_step,
            acc: Vec::new(),
        }
    }

    pub fn add(&mut self, id: EquationId, value: f64) {
        let slot = match self.acc.iter().position(|s| s.0 == id) {
            Some(i) => i,
            None => {
                self.acc.push((id, 0.0, 0.0, 0));
                self.acc.len() - 1
            }
        };
        let s = &mut self.acc[slot];
        // NaN propagates into max_abs so a broken sample cannot pass
        s.1 = if value.is_nan() || s.1.is_nan() {
            f64::NAN
        } else {
            s.1.max(value)
        };
        s.2 += value * value;
        s.3 += 1;
    }

    pub fn finish(self) -> ResidualReport {
        let entries = self
            .acc
            .into_iter()
            .map(|(id, max_abs, sumsq, n)| {
                let rms = libm::sqrt(sumsq / n as f64).min(max_abs);
                ResidualEntry {
                    id,
                    max_abs,
                    rms,
                    n_samples: n,
                    fd_step: self.fd_step,
                }
            })
            .collect();
        ResidualReport { entries }
    }
}

/// Region of C^2 to sample. Real parts of both coordinates are uniform on
/// `[re_lo, re_hi]`; every `complex_stride`-th point (indices `stride-1`,
/// `2 stride-1`, ...) also gets imaginary parts uniform on `[-im_half, im_half]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBox {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_half: f64,
    /// 0 keeps every point on the real slice.
    pub complex_stride: usize,
}

impl Default for SampleBox {
    /// `[-3, 3]^2` real slice with one point in five lifted into C^2.
    fn default() -> Self {
        Self {
            re_lo: -3.0,
            re_hi: 3.0,
            im_half: 1.0,
            complex_stride: 5,
        }
    }
}

impl SampleBox {
    pub fn real_slice(lo: f64, hi: f64) -> Self {
        Self {
            re_lo: lo,
            re_hi: hi,
            im_half: 0.0,
            complex_stride: 0,
        }
    }

    /// Deterministic points: four PCG64 uniforms per point.
    pub fn points(&self, n: usize, seed: u64) -> Vec<[C64; 2]> {
        let mut rng = SampleRng::new(seed);
        (0..n)
            .map(|i| {
                let re = [
                    rng.uniform_in(self.re_lo, self.re_hi),
                    rng.uniform_in(self.re_lo, self.re_hi),
                ];
                let im = [
                    rng.uniform_in(-self.im_half, self.im_half),
                    rng.uniform_in(-self.im_half, self.im_half),
                ];
                let complex =
                    self.complex_stride > 0 && i % self.complex_stride == self.complex_stride - 1;
                let im = if complex { im } else { [0.0, 0.0] };
                [C64::new(re[0], im[0]), C64::new(re[1], im[1])]
            })
            .collect()
    }
}

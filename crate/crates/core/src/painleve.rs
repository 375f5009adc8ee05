//! The radial transcendent `psi(r)`, `r = |P|`, solving
//!
//! ```text
//! psi'' + psi'/r = 2 (r^2 e^psi - e^-psi),   psi'(0) = 0,   psi(r) + log r -> 0  (r -> inf)
//! ```
//!
//! The far-field correction `chi = psi + log r` obeys `chi'' + chi'/r ~ 4 r chi`, i.e.
//! `chi ~ K0(4/3 r^{3/2})`, so a single outward shot from the origin is
//! exponentially ill-conditioned. The solver first brackets `psi(0)` by bisection
//! on the outward Dirichlet residual `psi(r_max) + log r_max`, then refines the
//! solution by matching an outward shot from the origin against an inward shot
//! from `r_max` that carries only the decaying far-field mode.

use alloc::vec::Vec;

/// Allowed `|psi(r_max) + log r_max|`.
pub const BOUNDARY_TOLERANCE: f64 = 1e-4;
pub const MIN_R_MAX: f64 = 5.0;
pub const MAX_TOL: f64 = 1e-6;

/// First integration radius; the regular series covers `[0, R_START]`.
const R_START: f64 = 1e-4;
/// End of the log-spaced node block.
const R_LOG_END: f64 = 0.1;
const LOG_RATIO: f64 = 1.02;
const UNIFORM_SPACING: f64 = 0.0025;
/// Inward shots start no further out than this; beyond it `psi = -log r` to
/// well below double precision.
const FAR_START_CAP: f64 = 12.0;
const MATCHING_RADIUS: f64 = 2.0;
/// Departure from `-log r` that counts as blow-up during bracketing.
const BLOWUP_DEVIATION: f64 = 25.0;
const MAX_BRACKET_WIDENINGS: usize = 8;
const MAX_BISECTIONS: usize = 200;
const MAX_NEWTON: usize = 40;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("shooting residual does not change sign on [{lo}, {hi}]")]
    BracketNotFound { lo: f64, hi: f64 },
    #[error("matching did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("integration failed near r = {r}")]
    IntegrationFailure { r: f64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("table needs at least two nodes")]
    TooShort,
    #[error("node columns have different lengths")]
    LengthMismatch,
    #[error("table contains non-finite values")]
    NonFinite,
    #[error("first node must be r = 0")]
    NotAnchoredAtOrigin,
    #[error("nodes are not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("psi'(0) = {dpsi0} but regularity requires 0")]
    IrregularOrigin { dpsi0: f64 },
    #[error("psi(0) = {psi_at_origin} disagrees with recorded psi0 = {psi0}")]
    Psi0Mismatch { psi0: f64, psi_at_origin: f64 },
    #[error("last node {last} differs from r_max = {r_max}")]
    RMaxMismatch { last: f64, r_max: f64 },
    #[error("boundary defect {defect:e} exceeds {BOUNDARY_TOLERANCE:e}")]
    BoundaryDefect { defect: f64 },
    #[error("ODE residual {residual:e} exceeds solver tolerance {tolerance:e}")]
    OdeResidual { residual: f64, tolerance: f64 },
}

/// Right-hand side of the first-order system `(psi, psi')`.
pub fn ode_rhs(r: f64, psi: f64, dpsi: f64) -> [f64; 2] {
    [dpsi, ode_second_derivative(r, psi, dpsi)]
}

/// `psi''` implied by the ODE; at `r = 0` uses the regular limit `psi'/r -> psi''`.
pub fn ode_second_derivative(r: f64, psi: f64, dpsi: f64) -> f64 {
    if r == 0.0 {
        -libm::exp(-psi)
    } else {
        2.0 * (r * r * libm::exp(psi) - libm::exp(-psi)) - dpsi / r
    }
}

/// Coefficients `(c, d)` of the regular expansion `psi = psi0 + c r^2 + d r^4 + O(r^6)`.
pub fn regular_series(psi0: f64) -> (f64, f64) {
    let c = -0.5 * libm::exp(-psi0);
    let d = (2.0 * libm::exp(psi0) - libm::exp(-2.0 * psi0)) / 16.0;
    (c, d)
}

fn series_state(psi0: f64, r: f64) -> [f64; 2] {
    let (c, d) = regular_series(psi0);
    let r2 = r * r;
    [psi0 + c * r2 + d * r2 * r2, 2.0 * c * r + 4.0 * d * r2 * r]
}

/// Integration scheme for the radial ODE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrator {
    /// Dormand-Prince 5(4) with local error control at relative/absolute tolerance `rtol`.
    Adaptive { rtol: f64 },
    /// Classical fourth-order Runge-Kutta with fixed step.
    FixedStep { step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub r_max: f64,
    pub tol: f64,
    pub integrator: Integrator,
}

impl SolveOptions {
    pub fn new(r_max: f64, tol: f64) -> Self {
        Self {
            r_max,
            tol,
            integrator: Integrator::Adaptive {
                rtol: (tol * 1e-3).max(1e-13),
            },
        }
    }

    /// Same problem, integrated with fixed-step RK4.
    pub fn fixed_step(r_max: f64, tol: f64) -> Self {
        Self {
            r_max,
            tol,
            integrator: Integrator::FixedStep {
                step: 0.2 * libm::sqrt(libm::sqrt(tol)),
            },
        }
    }

    fn validate(&self) -> Result<(), SolveError> {
        if !(self.r_max >= MIN_R_MAX) || !self.r_max.is_finite() {
            return Err(SolveError::InvalidArgument("r_max must be at least 5"));
        }
        if !(self.tol > 0.0 && self.tol <= MAX_TOL) {
            return Err(SolveError::InvalidArgument("tol must lie in (0, 1e-6]"));
        }
        match self.integrator {
            Integrator::Adaptive { rtol } if !(rtol > 0.0) => {
                Err(SolveError::InvalidArgument("rtol must be positive"))
            }
            Integrator::FixedStep { step } if !(step > 0.0) => {
                Err(SolveError::InvalidArgument("step must be positive"))
            }
            _ => Ok(()),
        }
    }
}

/// How the shooting went, kept alongside the table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShootingSummary {
    /// Final bisection bracket on `psi(0)`.
    pub bracket: (f64, f64),
    /// Outward Dirichlet residual at the bracket ends (negative, positive; infinite on blow-up).
    pub bracket_residuals: (f64, f64),
    pub bisection_steps: usize,
    /// `psi(0)` from bisection alone.
    pub bisection_psi0: f64,
    /// Norm of the matching mismatch after each Newton iteration.
    pub matching_history: Vec<f64>,
    pub matching_radius: f64,
    /// Amplitude of the decaying far-field mode at the matching radius.
    pub far_field_amplitude: f64,
}

/// Tabulated `psi(r)` on `[0, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscendentTable {
    r_nodes: Vec<f64>,
    psi_values: Vec<f64>,
    dpsi_values: Vec<f64>,
    ddpsi_values: Vec<f64>,
    psi0: f64,
    r_max: f64,
    solver_tolerance: f64,
    summary: Option<ShootingSummary>,
}

impl TranscendentTable {
    /// Assembles a table from stored columns and checks every invariant.
    pub fn from_parts(
        r_nodes: Vec<f64>,
        psi_values: Vec<f64>,
        dpsi_values: Vec<f64>,
        psi0: f64,
        r_max: f64,
        solver_tolerance: f64,
    ) -> Result<Self, TableError> {
        let table = Self::assemble(
            r_nodes,
            psi_values,
            dpsi_values,
            psi0,
            r_max,
            solver_tolerance,
        )?;
        table.validate()?;
        Ok(table)
    }

    fn assemble(
        r_nodes: Vec<f64>,
        psi_values: Vec<f64>,
        dpsi_values: Vec<f64>,
        psi0: f64,
        r_max: f64,
        solver_tolerance: f64,
    ) -> Result<Self, TableError> {
        if r_nodes.len() != psi_values.len() || r_nodes.len() != dpsi_values.len() {
            return Err(TableError::LengthMismatch);
        }
        if r_nodes.len() < 2 {
            return Err(TableError::TooShort);
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&r_nodes) || !finite(&psi_values) || !finite(&dpsi_values) {
            return Err(TableError::NonFinite);
        }
        if ![psi0, r_max, solver_tolerance]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(TableError::NonFinite);
        }
        let ddpsi_values = r_nodes
            .iter()
            .zip(psi_values.iter().zip(&dpsi_values))
            .map(|(&r, (&p, &dp))| ode_second_derivative(r, p, dp))
            .collect();
        Ok(Self {
            r_nodes,
            psi_values,
            dpsi_values,
            ddpsi_values,
            psi0,
            r_max,
            solver_tolerance,
            summary: None,
        })
    }

    /// Checks the structural, boundary and ODE-consistency invariants.
    pub fn validate(&self) -> Result<(), TableError> {
        if self.r_nodes[0] != 0.0 {
            return Err(TableError::NotAnchoredAtOrigin);
        }
        if let Some(index) = self.r_nodes.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(TableError::NotIncreasing { index: index + 1 });
        }
        if self.dpsi_values[0] != 0.0 {
            return Err(TableError::IrregularOrigin {
                dpsi0: self.dpsi_values[0],
            });
        }
        if self.psi_values[0] != self.psi0 {
            return Err(TableError::Psi0Mismatch {
                psi0: self.psi0,
                psi_at_origin: self.psi_values[0],
            });
        }
        let last = *self.r_nodes.last().expect("nonempty");
        if last != self.r_max {
            return Err(TableError::RMaxMismatch {
                last,
                r_max: self.r_max,
            });
        }
        let defect = self.boundary_defect();
        if !(defect <= BOUNDARY_TOLERANCE) {
            return Err(TableError::BoundaryDefect { defect });
        }
        let residual = self.ode_residual();
        if !(residual <= self.solver_tolerance) {
            return Err(TableError::OdeResidual {
                residual,
                tolerance: self.solver_tolerance,
            });
        }
        Ok(())
    }

    pub fn r_nodes(&self) -> &[f64] {
        &self.r_nodes
    }

    pub fn psi_values(&self) -> &[f64] {
        &self.psi_values
    }

    pub fn dpsi_values(&self) -> &[f64] {
        &self.dpsi_values
    }

    pub fn psi0(&self) -> f64 {
        self.psi0
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn solver_tolerance(&self) -> f64 {
        self.solver_tolerance
    }

    pub fn summary(&self) -> Option<&ShootingSummary> {
        self.summary.as_ref()
    }

    /// `|psi(r_max) + log r_max|`
    pub fn boundary_defect(&self) -> f64 {
        let last = self.psi_values.len() - 1;
        libm::fabs(self.psi_values[last] + libm::log(self.r_nodes[last]))
    }

    /// Largest per-unit-length defect of the tabulated first-order system
    /// `(psi, psi')' = (psi', psi'')` over each node interval, with the
    /// increments integrated by Simpson's rule and `psi''` taken from the ODE
    /// at the ends and at the interpolated midpoint.
    pub fn ode_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.r_nodes.len() - 1 {
            let (r0, r1) = (self.r_nodes[i], self.r_nodes[i + 1]);
            let h = r1 - r0;
            let rm = 0.5 * (r0 + r1);
            let [pm, dpm] = self.hermite(i, rm);
            let ddpm = ode_second_derivative(rm, pm, dpm);
            let (dp0, dp1) = (self.dpsi_values[i], self.dpsi_values[i + 1]);
            let (ddp0, ddp1) = (self.ddpsi_values[i], self.ddpsi_values[i + 1]);
            let value =
                (self.psi_values[i + 1] - self.psi_values[i]) / h - (dp0 + 4.0 * dpm + dp1) / 6.0;
            let slope = (dp1 - dp0) / h - (ddp0 + 4.0 * ddpm + ddp1) / 6.0;
            worst = worst.max(libm::fabs(value)).max(libm::fabs(slope));
        }
        worst
    }

    /// `(psi, psi', psi'')` at radius `r >= 0`.
    ///
    /// `psi` and `psi'` come from the quintic Hermite interpolant of the
    /// node data; `psi''` is evaluated from the ODE. Beyond `r_max` the
    /// asymptotic solution `-log r` is returned.
    pub fn psi_at(&self, r: f64) -> (f64, f64, f64) {
        let r = libm::fabs(r);
        if r > self.r_max {
            return (-libm::log(r), -1.0 / r, 1.0 / (r * r));
        }
        if r < 1e-8 {
            let (c, d) = regular_series(self.psi0);
            let r2 = r * r;
            return (
                self.psi0 + c * r2 + d * r2 * r2,
                2.0 * c * r + 4.0 * d * r2 * r,
                2.0 * c + 12.0 * d * r2,
            );
        }
        let i = self.interval(r);
        let [p, dp] = self.hermite(i, r);
        (p, dp, ode_second_derivative(r, p, dp))
    }

    /// `psi'(r) / r`, continuous through `r = 0` where it equals `psi''(0)`.
    pub fn dpsi_over_r(&self, r: f64) -> f64 {
        let r = libm::fabs(r);
        if r < 1e-8 {
            let (c, d) = regular_series(self.psi0);
            return 2.0 * c + 4.0 * d * r * r;
        }
        self.psi_at(r).1 / r
    }

    fn interval(&self, r: f64) -> usize {
        let n = self.r_nodes.len();
        match self.r_nodes.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => i.min(n - 2),
            Err(i) => (i.max(1) - 1).min(n - 2),
        }
    }

    /// `(psi, psi')` on interval `i`: `psi` from the quintic Hermite
    /// interpolant, `psi'` from the cubic Hermite interpolant of the slope
    /// data, which stays well conditioned on the tiny intervals near the origin.
    fn hermite(&self, i: usize, r: f64) -> [f64; 2] {
        let (r0, r1) = (self.r_nodes[i], self.r_nodes[i + 1]);
        let h = r1 - r0;
        let t = (r - r0) / h;
        let (p, dp, ddp) = (&self.psi_values, &self.dpsi_values, &self.ddpsi_values);
        let value = quintic_hermite(
            t,
            h,
            (p[i], dp[i], ddp[i]),
            (p[i + 1], dp[i + 1], ddp[i + 1]),
        )[0];
        let slope = cubic_hermite(t, h, (dp[i], ddp[i]), (dp[i + 1], ddp[i + 1]));
        [value, slope]
    }
}

/// Cubic Hermite interpolant on `[r0, r0 + h]` at local coordinate `t`.
pub fn cubic_hermite(t: f64, h: f64, left: (f64, f64), right: (f64, f64)) -> f64 {
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * left.0
        + (t3 - 2.0 * t2 + t) * h * left.1
        + (3.0 * t2 - 2.0 * t3) * right.0
        + (t3 - t2) * h * right.1
}

/// Quintic Hermite interpolant on `[r0, r0 + h]` at local coordinate `t`,
/// matching value, first and second derivative at both ends. Returns the value
/// and its first two derivatives with respect to `r`.
pub fn quintic_hermite(t: f64, h: f64, left: (f64, f64, f64), right: (f64, f64, f64)) -> [f64; 3] {
    let (t2, t3, t4, t5) = (t * t, t * t * t, t * t * t * t, t * t * t * t * t);
    let basis = [
        1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5,
        t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
        0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5),
        10.0 * t3 - 15.0 * t4 + 6.0 * t5,
        -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
        0.5 * (t3 - 2.0 * t4 + t5),
    ];
    let d1 = [
        -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
        1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
        0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4),
        30.0 * t2 - 60.0 * t3 + 30.0 * t4,
        -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
        0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4),
    ];
    let d2 = [
        -60.0 * t + 180.0 * t2 - 120.0 * t3,
        -36.0 * t + 96.0 * t2 - 60.0 * t3,
        0.5 * (2.0 - 18.0 * t + 36.0 * t2 - 20.0 * t3),
        60.0 * t - 180.0 * t2 + 120.0 * t3,
        -24.0 * t + 84.0 * t2 - 60.0 * t3,
        0.5 * (6.0 * t - 24.0 * t2 + 20.0 * t3),
    ];
    let coeffs = [
        left.0,
        h * left.1,
        h * h * left.2,
        right.0,
        h * right.1,
        h * h * right.2,
    ];
    let dot = |b: &[f64; 6]| b.iter().zip(&coeffs).map(|(x, y)| x * y).sum::<f64>();
    [dot(&basis), dot(&d1) / h, dot(&d2) / (h * h)]
}

/// Node radii: `0`, log-spaced from `R_START` to `R_LOG_END`, then uniform to `r_max`.
pub fn node_layout(r_max: f64) -> Vec<f64> {
    let mut nodes = Vec::new();
    nodes.push(0.0);
    let mut r = R_START;
    while r < R_LOG_END {
        nodes.push(r);
        r *= LOG_RATIO;
    }
    let n = libm::ceil((r_max - R_LOG_END) / UNIFORM_SPACING) as usize;
    let spacing = (r_max - R_LOG_END) / n as f64;
    for k in 0..n {
        nodes.push(R_LOG_END + k as f64 * spacing);
    }
    nodes.push(r_max);
    nodes
}

/// Outcome of integrating through a list of radii.
enum Trajectory {
    Complete,
    /// Solution left the neighbourhood of `-log r`; sign of the departure.
    BlowUp {
        upward: bool,
    },
}

/// Dependent variable being integrated.
#[derive(Clone, Copy)]
enum System {
    /// `(psi, psi')`, absolute-plus-relative error control.
    Psi,
    /// `(chi, chi')` with `chi = psi + log r`, purely relative error control so
    /// that the exponentially small far-field deviation keeps full precision.
    Chi,
}

/// `chi'' + chi'/r = 4 r sinh(chi)`, the transcendent written for `chi = psi + log r`.
pub fn deviation_second_derivative(r: f64, chi: f64, dchi: f64) -> f64 {
    4.0 * r * libm::sinh(chi) - dchi / r
}

struct Stepper {
    integrator: Integrator,
    system: System,
}

impl Stepper {
    /// Integrates `state` from `r` through each target radius in turn (monotone
    /// in either direction), calling `record(index, state)` at each one.
    fn run(
        &self,
        mut r: f64,
        mut state: [f64; 2],
        targets: &[f64],
        watch_blowup: bool,
        mut record: impl FnMut(usize, [f64; 2]),
    ) -> Result<Trajectory, SolveError> {
        for (idx, &target) in targets.iter().enumerate() {
            state = match self.integrator {
                Integrator::Adaptive { rtol } => {
                    dopri5(self.system, r, target, state, rtol, watch_blowup)?
                }
                Integrator::FixedStep { step } => {
                    rk4(self.system, r, target, state, step, watch_blowup)?
                }
            };
            r = target;
            if let Some(upward) = departure(self.system, r, &state) {
                if watch_blowup {
                    return Ok(Trajectory::BlowUp { upward });
                }
                return Err(SolveError::IntegrationFailure { r });
            }
            record(idx, state);
        }
        Ok(Trajectory::Complete)
    }
}

fn departure(system: System, r: f64, state: &[f64; 2]) -> Option<bool> {
    let dev = match system {
        System::Psi => state[0] + libm::log(r.max(1.0)),
        System::Chi => state[0] - libm::log(r.min(1.0)),
    };
    if !state[0].is_finite() || !state[1].is_finite() {
        return Some(dev > 0.0 || (dev.is_nan() && state[1] > 0.0));
    }
    if libm::fabs(dev) > BLOWUP_DEVIATION {
        return Some(dev > 0.0);
    }
    None
}

fn rhs(system: System, r: f64, y: [f64; 2]) -> [f64; 2] {
    match system {
        System::Psi => ode_rhs(r, y[0], y[1]),
        System::Chi => [y[1], deviation_second_derivative(r, y[0], y[1])],
    }
}

fn axpy(y: [f64; 2], h: f64, k: [f64; 2]) -> [f64; 2] {
    [y[0] + h * k[0], y[1] + h * k[1]]
}

fn rk4(
    system: System,
    r0: f64,
    r1: f64,
    mut y: [f64; 2],
    step: f64,
    watch: bool,
) -> Result<[f64; 2], SolveError> {
    let span = r1 - r0;
    if span == 0.0 {
        return Ok(y);
    }
    let n = libm::ceil(libm::fabs(span) / step).max(1.0) as usize;
    let h = span / n as f64;
    for k in 0..n {
        let r = r0 + k as f64 * h;
        let k1 = rhs(system, r, y);
        let k2 = rhs(system, r + 0.5 * h, axpy(y, 0.5 * h, k1));
        let k3 = rhs(system, r + 0.5 * h, axpy(y, 0.5 * h, k2));
        let k4 = rhs(system, r + h, axpy(y, h, k3));
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if watch && departure(system, r + h, &y).is_some() {
            return Ok(y);
        }
    }
    Ok(y)
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B_STAR: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dopri5(
    system: System,
    r0: f64,
    r1: f64,
    mut y: [f64; 2],
    rtol: f64,
    watch: bool,
) -> Result<[f64; 2], SolveError> {
    let span = r1 - r0;
    if span == 0.0 {
        return Ok(y);
    }
    let dir = span.signum();
    let mut r = r0;
    let mut h = libm::fabs(span);
    let min_step = 1e-14 * libm::fabs(r0).max(libm::fabs(r1)).max(1e-3);
    for _ in 0..1_000_000 {
        let remaining = libm::fabs(r1 - r);
        if remaining <= 0.0 {
            return Ok(y);
        }
        let last = h >= remaining;
        let hs = if last { remaining } else { h } * dir;
        let mut k = [[0.0; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys = axpy(ys, hs * DP_A[s][j], *kj);
            }
            k[s] = rhs(system, r + DP_C[s] * hs, ys);
        }
        let mut y5 = y;
        let mut err = [0.0; 2];
        for s in 0..7 {
            y5 = axpy(y5, hs * DP_B[s], k[s]);
            for (e, ks) in err.iter_mut().zip(k[s]) {
                *e += hs * (DP_B[s] - DP_B_STAR[s]) * ks;
            }
        }
        let scaled = (0..2)
            .map(|q| {
                let size = libm::fabs(y[q]).max(libm::fabs(y5[q]));
                let sc = match system {
                    System::Psi => rtol * (1e-3 + size),
                    System::Chi => rtol * size + f64::MIN_POSITIVE,
                };
                err[q] / sc
            })
            .fold(0.0f64, |acc, v| acc.max(libm::fabs(v)));
        if scaled.is_nan() || !y5[0].is_finite() || !y5[1].is_finite() {
            h = libm::fabs(hs) * 0.25;
        } else if scaled <= 1.0 {
            r = if last { r1 } else { r + hs };
            y = y5;
            if watch && departure(system, r, &y).is_some() {
                return Ok(y);
            }
            let factor = if scaled == 0.0 {
                5.0
            } else {
                (0.9 * libm::pow(scaled, -0.2)).clamp(0.2, 5.0)
            };
            h = libm::fabs(hs) * factor;
        } else {
            h = libm::fabs(hs) * (0.9 * libm::pow(scaled, -0.2)).clamp(0.1, 0.9);
        }
        if h < min_step {
            if watch {
                // step collapse ahead of a singularity; report it as blow-up in the slope's direction
                return Ok([f64::INFINITY * y[1].signum(), y[1]]);
            }
            return Err(SolveError::IntegrationFailure { r });
        }
    }
    Err(SolveError::IntegrationFailure { r })
}

/// `s(r) = 4/3 r^{3/2}`, the argument of the decaying far-field mode `K0(s)`.
fn far_field_argument(r: f64) -> f64 {
    4.0 / 3.0 * r * libm::sqrt(r)
}

/// Logarithmic derivative `d/dr log K0(s(r))` from the large-`s` expansion of `K1/K0`.
fn far_field_log_slope(r: f64) -> f64 {
    let s = far_field_argument(r);
    -2.0 * libm::sqrt(r) * (1.0 + 0.5 / s - 0.125 / (s * s))
}

/// Approximate `K0(s(far)) / K0(s(near))`.
fn far_field_decay(near: f64, far: f64) -> f64 {
    let (sn, sf) = (far_field_argument(near), far_field_argument(far));
    libm::sqrt(sn / sf) * libm::exp(-(sf - sn))
}

fn to_deviation(r: f64, y: [f64; 2]) -> [f64; 2] {
    [y[0] + libm::log(r), y[1] + 1.0 / r]
}

fn from_deviation(r: f64, y: [f64; 2]) -> [f64; 2] {
    [y[0] - libm::log(r), y[1] - 1.0 / r]
}

struct Problem {
    nodes: Vec<f64>,
    stepper: Stepper,
    inward: Stepper,
    /// Index of the matching node.
    mid: usize,
    /// Index of the node where inward shots start.
    far: usize,
    r_max: f64,
}

impl Problem {
    fn new(opts: &SolveOptions) -> Self {
        let nodes = node_layout(opts.r_max);
        let nearest = |target: f64| {
            nodes
                .iter()
                .enumerate()
                .min_by(|a, b| libm::fabs(a.1 - target).total_cmp(&libm::fabs(b.1 - target)))
                .map(|(i, _)| i)
                .expect("nonempty")
        };
        let mid = nearest(MATCHING_RADIUS);
        let far = if opts.r_max <= FAR_START_CAP {
            nodes.len() - 1
        } else {
            nearest(FAR_START_CAP)
        };
        let stepper = Stepper {
            integrator: opts.integrator,
            system: System::Psi,
        };
        let inward = Stepper {
            integrator: opts.integrator,
            system: System::Chi,
        };
        Self {
            nodes,
            stepper,
            inward,
            mid,
            far,
            r_max: opts.r_max,
        }
    }

    /// Outward Dirichlet residual `psi(r_max) + log r_max`, infinite with sign on blow-up.
    fn outward_residual(&self, psi0: f64) -> Result<f64, SolveError> {
        let targets = &self.nodes[2..];
        let mut last = series_state(psi0, R_START);
        match self
            .stepper
            .run(R_START, last, targets, true, |_, s| last = s)?
        {
            Trajectory::Complete => Ok(last[0] + libm::log(self.r_max)),
            Trajectory::BlowUp { upward: true, .. } => Ok(f64::INFINITY),
            Trajectory::BlowUp { upward: false, .. } => Ok(f64::NEG_INFINITY),
        }
    }

    fn outward_to_mid(&self, psi0: f64) -> Result<[f64; 2], SolveError> {
        let mut last = series_state(psi0, R_START);
        self.stepper
            .run(R_START, last, &self.nodes[2..=self.mid], false, |_, s| {
                last = s
            })?;
        Ok(last)
    }

    /// `(chi, chi')` at the far node for a decaying mode of size `amplitude` at the matching node.
    fn far_state(&self, amplitude: f64) -> [f64; 2] {
        let (r_far, r_mid) = (self.nodes[self.far], self.nodes[self.mid]);
        let eps = amplitude * far_field_decay(r_mid, r_far);
        [eps, eps * far_field_log_slope(r_far)]
    }

    fn inward_to_mid(&self, amplitude: f64) -> Result<[f64; 2], SolveError> {
        let start = self.far_state(amplitude);
        let mut last = start;
        let targets: Vec<f64> = self.nodes[self.mid..self.far]
            .iter()
            .rev()
            .copied()
            .collect();
        self.inward
            .run(self.nodes[self.far], start, &targets, false, |_, s| {
                last = s
            })?;
        Ok(last)
    }

    /// Outward minus inward `(chi, chi')` at the matching node.
    fn mismatch(&self, psi0: f64, amplitude: f64) -> Result<[f64; 2], SolveError> {
        let out = to_deviation(self.nodes[self.mid], self.outward_to_mid(psi0)?);
        let inw = self.inward_to_mid(amplitude)?;
        Ok([out[0] - inw[0], out[1] - inw[1]])
    }

    fn bisect(&self, summary: &mut ShootingSummary) -> Result<f64, SolveError> {
        let (mut lo, mut hi) = (-2.0f64, 2.0f64);
        let (mut s_lo, mut s_hi) = (self.outward_residual(lo)?, self.outward_residual(hi)?);
        let mut widenings = 0;
        while !(s_lo < 0.0 && s_hi > 0.0) {
            if widenings == MAX_BRACKET_WIDENINGS {
                return Err(SolveError::BracketNotFound { lo, hi });
            }
            let (centre, half) = (0.5 * (lo + hi), hi - lo);
            lo = centre - half;
            hi = centre + half;
            s_lo = self.outward_residual(lo)?;
            s_hi = self.outward_residual(hi)?;
            widenings += 1;
        }
        summary.bracket_residuals = (s_lo, s_hi);
        let mut steps = 0;
        while steps < MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let s = self.outward_residual(mid)?;
            if s == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if s < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            steps += 1;
        }
        summary.bracket = (lo, hi);
        summary.bisection_steps = steps;
        summary.bisection_psi0 = 0.5 * (lo + hi);
        Ok(summary.bisection_psi0)
    }

    /// Newton iteration on `(psi0, amplitude)` for continuity of `(psi, psi')` at the matching node.
    fn match_sides(
        &self,
        psi0: f64,
        summary: &mut ShootingSummary,
        tol: f64,
    ) -> Result<(f64, f64), SolveError> {
        let out = to_deviation(self.nodes[self.mid], self.outward_to_mid(psi0)?);
        let mut x = [psi0, out[0]];
        let mut f = self.mismatch(x[0], x[1])?;
        let norm = |v: [f64; 2]| libm::sqrt(v[0] * v[0] + v[1] * v[1]);
        let target = (tol * 1e-4).max(1e-13);
        for iteration in 0..MAX_NEWTON {
            let current = norm(f);
            summary.matching_history.push(current);
            if current <= target {
                return Ok((x[0], x[1]));
            }
            let h0 = 1e-7;
            let h1 = 1e-7 * libm::fabs(x[1]).max(1e-3);
            let f0 = self.mismatch(x[0] + h0, x[1])?;
            let f1 = self.mismatch(x[0], x[1] + h1)?;
            let j = [
                [(f0[0] - f[0]) / h0, (f1[0] - f[0]) / h1],
                [(f0[1] - f[1]) / h0, (f1[1] - f[1]) / h1],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                return Err(SolveError::NonConvergence {
                    iterations: iteration,
                    residual: current,
                });
            }
            let dx = [
                (j[1][1] * f[0] - j[0][1] * f[1]) / det,
                (j[0][0] * f[1] - j[1][0] * f[0]) / det,
            ];
            // damped step: accept the first halving that does not increase the mismatch
            let mut lambda = 1.0;
            loop {
                let trial = [x[0] - lambda * dx[0], x[1] - lambda * dx[1]];
                let ft = self.mismatch(trial[0], trial[1]);
                if let Ok(ft) = ft {
                    if norm(ft) < current || lambda < 1e-3 {
                        x = trial;
                        f = ft;
                        break;
                    }
                }
                lambda *= 0.5;
                if lambda < 1e-3 {
                    return Err(SolveError::NonConvergence {
                        iterations: iteration,
                        residual: current,
                    });
                }
            }
            if libm::fabs(dx[0]) < 1e-15 && libm::fabs(dx[1]) < 1e-15 {
                summary.matching_history.push(norm(f));
                return Ok((x[0], x[1]));
            }
        }
        Err(SolveError::NonConvergence {
            iterations: MAX_NEWTON,
            residual: norm(f),
        })
    }

    fn tabulate(&self, psi0: f64, amplitude: f64) -> Result<(Vec<f64>, Vec<f64>), SolveError> {
        let n = self.nodes.len();
        let mut psi = alloc::vec![0.0; n];
        let mut dpsi = alloc::vec![0.0; n];
        psi[0] = psi0;
        let start = series_state(psi0, R_START);
        psi[1] = start[0];
        dpsi[1] = start[1];
        self.stepper
            .run(R_START, start, &self.nodes[2..=self.mid], false, |i, s| {
                psi[i + 2] = s[0];
                dpsi[i + 2] = s[1];
            })?;
        let far = self.far_state(amplitude);
        let far_idx = self.far;
        [psi[far_idx], dpsi[far_idx]] = from_deviation(self.nodes[far_idx], far);
        // the matching node keeps the inward value; both sides agree there to the Newton tolerance
        let targets: Vec<f64> = self.nodes[self.mid..far_idx]
            .iter()
            .rev()
            .copied()
            .collect();
        let nodes = &self.nodes;
        self.inward
            .run(nodes[far_idx], far, &targets, false, |k, s| {
                let i = far_idx - 1 - k;
                [psi[i], dpsi[i]] = from_deviation(nodes[i], s);
            })?;
        for i in far_idx + 1..n {
            let r = self.nodes[i];
            psi[i] = -libm::log(r);
            dpsi[i] = -1.0 / r;
        }
        Ok((psi, dpsi))
    }
}

/// Solves the transcendent with the default adaptive integrator.
pub fn solve_radial(r_max: f64, tol: f64) -> Result<TranscendentTable, SolveError> {
    solve_radial_with(&SolveOptions::new(r_max, tol))
}

pub fn solve_radial_with(opts: &SolveOptions) -> Result<TranscendentTable, SolveError> {
    opts.validate()?;
    let problem = Problem::new(opts);
    let mut summary = ShootingSummary {
        matching_radius: problem.nodes[problem.mid],
        ..Default::default()
    };
    let guess = problem.bisect(&mut summary)?;
    let (psi0, amplitude) = problem.match_sides(guess, &mut summary, opts.tol)?;
    summary.far_field_amplitude = amplitude;
    let (psi, dpsi) = problem.tabulate(psi0, amplitude)?;
    let mut table =
        TranscendentTable::assemble(problem.nodes, psi, dpsi, psi0, opts.r_max, opts.tol)
            .map_err(|_| SolveError::IntegrationFailure { r: opts.r_max })?;
    table.summary = Some(summary);
    match table.validate() {
        Ok(()) => Ok(table),
        Err(TableError::OdeResidual { residual, .. })
        | Err(TableError::BoundaryDefect { defect: residual }) => Err(SolveError::NonConvergence {
            iterations: 0,
            residual,
        }),
        Err(_) => Err(SolveError::IntegrationFailure { r: opts.r_max }),
    }
}

/// Largest residual of the Painleve-III form
/// `h'' - h'^2/h + h'/t + 4/(9h) - 4h^3/9 = 0`, with `h(t) = t^{-1/3} e^{-psi/2}`
/// and `t = r^{3/2}`, over `samples` points evenly spread on `[t_min, r_max^{3/2}]`.
pub fn piii_crosscheck(table: &TranscendentTable, t_min: f64, samples: usize) -> f64 {
    let t_max = table.r_max() * libm::sqrt(table.r_max());
    let n = samples.max(2);
    (0..n)
        .map(|k| t_min + (t_max - t_min) * k as f64 / (n - 1) as f64)
        .map(|t| libm::fabs(piii_residual(table, t)))
        .fold(0.0, f64::max)
}

/// `h(t)` together with its first two `t`-derivatives, via the chain rule through `r = t^{2/3}`.
pub fn piii_function(table: &TranscendentTable, t: f64) -> [f64; 3] {
    let r = libm::cbrt(t * t);
    let (psi, dpsi, ddpsi) = table.psi_at(r);
    let h = libm::exp(-0.5 * psi) / libm::sqrt(r);
    let g = -0.5 / r - 0.5 * dpsi; // (dh/dr) / h
    let dh_dr = h * g;
    let d2h_dr2 = h * (g * g + 0.5 / (r * r) - 0.5 * ddpsi);
    let r_t = 2.0 / 3.0 / libm::cbrt(t);
    let r_tt = -2.0 / 9.0 / (t * libm::cbrt(t));
    [h, dh_dr * r_t, d2h_dr2 * r_t * r_t + dh_dr * r_tt]
}

pub fn piii_residual(table: &TranscendentTable, t: f64) -> f64 {
    let [h, dh, ddh] = piii_function(table, t);
    ddh - dh * dh / h + dh / t + 4.0 / (9.0 * h) - 4.0 * h * h * h / 9.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_hermite_reproduces_quintics() {
        let f = |x: f64| {
            [
                1.0 - 2.0 * x + 0.5 * x.powi(3) + 0.3 * x.powi(5),
                -2.0 + 1.5 * x * x + 1.5 * x.powi(4),
                3.0 * x + 6.0 * x.powi(3),
            ]
        };
        let (r0, h) = (0.7, 0.3);
        let [a, b] = [f(r0), f(r0 + h)];
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let got = quintic_hermite(t, h, (a[0], a[1], a[2]), (b[0], b[1], b[2]));
            let want = f(r0 + t * h);
            for q in 0..3 {
                assert!(
                    (got[q] - want[q]).abs() < 1e-12,
                    "{q}: {} vs {}",
                    got[q],
                    want[q]
                );
            }
        }
    }

    #[test]
    fn series_satisfies_ode_near_origin() {
        let psi0 = 0.3;
        for r in [1e-3, 5e-3, 1e-2] {
            let [p, dp] = series_state(psi0, r);
            let (c, d) = regular_series(psi0);
            let ddp = 2.0 * c + 12.0 * d * r * r;
            let residual = ddp + dp / r - 2.0 * (r * r * p.exp() - (-p).exp());
            assert!(residual.abs() < 50.0 * r.powi(4), "r={r}: {residual}");
        }
    }

    #[test]
    fn node_layout_is_increasing_and_hits_r_max() {
        let nodes = node_layout(8.0);
        assert_eq!(nodes[0], 0.0);
        assert_eq!(nodes[1], R_START);
        assert_eq!(*nodes.last().unwrap(), 8.0);
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        assert!(nodes
            .windows(2)
            .all(|w| w[1] - w[0] <= UNIFORM_SPACING * 1.0001));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            solve_radial(2.0, 1e-8),
            Err(SolveError::InvalidArgument(_))
        ));
        assert!(matches!(
            solve_radial(8.0, 1e-3),
            Err(SolveError::InvalidArgument(_))
        ));
        assert!(matches!(
            solve_radial(8.0, 0.0),
            Err(SolveError::InvalidArgument(_))
        ));
        assert!(matches!(
            solve_radial(f64::NAN, 1e-8),
            Err(SolveError::InvalidArgument(_))
        ));
    }

    #[test]
    fn from_parts_rejects_broken_tables() {
        let t = solve_radial(8.0, 1e-8).unwrap();
        let (r, p, dp) = (
            t.r_nodes().to_vec(),
            t.psi_values().to_vec(),
            t.dpsi_values().to_vec(),
        );
        let rebuilt =
            TranscendentTable::from_parts(r.clone(), p.clone(), dp.clone(), t.psi0(), 8.0, 1e-8)
                .unwrap();
        assert_eq!(rebuilt.psi_at(1.234), t.psi_at(1.234));

        let mut bad = p.clone();
        *bad.last_mut().unwrap() += 1e-3;
        assert!(matches!(
            TranscendentTable::from_parts(r.clone(), bad, dp.clone(), t.psi0(), 8.0, 1e-8),
            Err(TableError::BoundaryDefect { .. })
        ));
        let mut bad = p.clone();
        bad[1500] += 1e-6;
        assert!(matches!(
            TranscendentTable::from_parts(r.clone(), bad, dp.clone(), t.psi0(), 8.0, 1e-8),
            Err(TableError::OdeResidual { .. })
        ));
        let mut bad = dp.clone();
        bad[0] = 1e-3;
        assert!(matches!(
            TranscendentTable::from_parts(r.clone(), p.clone(), bad, t.psi0(), 8.0, 1e-8),
            Err(TableError::IrregularOrigin { .. })
        ));
        let mut bad = r.clone();
        bad.swap(10, 11);
        assert!(matches!(
            TranscendentTable::from_parts(bad, p.clone(), dp.clone(), t.psi0(), 8.0, 1e-8),
            Err(TableError::NotIncreasing { index: 11 })
        ));
        assert!(matches!(
            TranscendentTable::from_parts(
                r.clone(),
                p.clone(),
                dp[1..].to_vec(),
                t.psi0(),
                8.0,
                1e-8
            ),
            Err(TableError::LengthMismatch)
        ));
        assert!(matches!(
            TranscendentTable::from_parts(r, p, dp, t.psi0() + 1.0, 8.0, 1e-8),
            Err(TableError::Psi0Mismatch { .. })
        ));
    }

    fn reference() -> TranscendentTable {
        solve_radial(8.0, 1e-8).unwrap()
    }

    /// Independent RK4 from the regular series, small fixed step, no tables.
    fn reintegrate(psi0: f64, r_end: f64) -> (f64, f64) {
        let r0 = 1e-3;
        let (c, d) = regular_series(psi0);
        let mut y = [
            psi0 + c * r0 * r0 + d * r0.powi(4),
            2.0 * c * r0 + 4.0 * d * r0.powi(3),
        ];
        let f = |r: f64, y: [f64; 2]| [y[1], 2.0 * (r * r * y[0].exp() - (-y[0]).exp()) - y[1] / r];
        let n = 40_000;
        let h = (r_end - r0) / n as f64;
        for k in 0..n {
            let r = r0 + k as f64 * h;
            let k1 = f(r, y);
            let k2 = f(
                r + h / 2.0,
                [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]],
            );
            let k3 = f(
                r + h / 2.0,
                [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]],
            );
            let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for q in 0..2 {
                y[q] += h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
            }
        }
        (y[0], y[1])
    }

    #[test]
    fn solution_is_regular_and_decays_to_minus_log() {
        let t = reference();
        assert_eq!(t.psi_at(0.0), (t.psi0(), 0.0, -(-t.psi0()).exp()));
        assert!(t.boundary_defect() < BOUNDARY_TOLERANCE);
        assert!((t.psi_at(8.0).0 + 8f64.ln()).abs() < BOUNDARY_TOLERANCE);
        assert_eq!(t.psi_at(9.0).0, -(9f64.ln()));
        let values = t.psi_values();
        assert!(values.iter().any(|&v| (v - values[0]).abs() > 1.0));
        assert!(t.dpsi_values()[1..].iter().all(|&d| d < 0.0));
    }

    #[test]
    fn dual_integrators_agree() {
        let adaptive = reference();
        let fixed = solve_radial_with(&SolveOptions::fixed_step(8.0, 1e-8)).unwrap();
        assert!((adaptive.psi0() - fixed.psi0()).abs() < 1e-6);
        for r in [0.05, 0.5, 1.7, 3.3, 6.1] {
            assert!(
                (adaptive.psi_at(r).0 - fixed.psi_at(r).0).abs() < 1e-6,
                "r = {r}"
            );
        }
    }

    #[test]
    fn halving_the_step_moves_psi0_by_less_than_ten_tolerances() {
        let tol = 1e-8;
        let coarse = SolveOptions::fixed_step(8.0, tol);
        let Integrator::FixedStep { step } = coarse.integrator else {
            unreachable!()
        };
        let fine = SolveOptions {
            integrator: Integrator::FixedStep { step: step / 2.0 },
            ..coarse
        };
        let a = solve_radial_with(&coarse).unwrap().psi0();
        let b = solve_radial_with(&fine).unwrap().psi0();
        assert!((a - b).abs() < 10.0 * tol, "{a} vs {b}");
    }

    #[test]
    fn off_node_values_match_direct_reintegration() {
        let t = reference();
        for r in [0.0137, 0.4321, 1.2345, 1.9999] {
            let (psi, dpsi) = reintegrate(t.psi0(), r);
            let (p, dp, _) = t.psi_at(r);
            assert!((p - psi).abs() < 1e-6, "r = {r}: {p} vs {psi}");
            assert!((dp - dpsi).abs() < 1e-6, "r = {r}: {dp} vs {dpsi}");
        }
    }

    #[test]
    fn shooting_residual_changes_sign_and_matching_contracts() {
        let t = reference();
        let s = t.summary().unwrap();
        assert!(s.bracket_residuals.0 < 0.0 && s.bracket_residuals.1 > 0.0);
        assert!(s.bracket.0 <= t.psi0() + 1e-9 && t.psi0() - 1e-9 <= s.bracket.1);
        assert!(s.matching_history.windows(2).all(|w| w[1] < w[0]));
        assert!(*s.matching_history.last().unwrap() < 1e-12);
    }

    #[test]
    fn painleve_form_holds() {
        let t = reference();
        assert!(piii_crosscheck(&t, 0.1, 2000) < 1e-6);
        let [h, _, _] = piii_function(&t, 8f64.powf(1.5));
        assert!((h - 1.0).abs() < 1e-3);
        for k in 1..100 {
            assert!(piii_function(&t, 0.2 * k as f64)[0] > 0.0);
        }
    }

    #[test]
    fn larger_domain_reuses_asymptotic_tail() {
        let t = solve_radial(15.0, 1e-8).unwrap();
        let base = reference();
        assert!((t.psi0() - base.psi0()).abs() < 1e-8);
        assert!((t.psi_at(13.0).0 + 13f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn dpsi_over_r_is_continuous_at_origin() {
        let t = reference();
        let at0 = t.dpsi_over_r(0.0);
        assert_eq!(at0, -(-t.psi0()).exp());
        assert!((t.dpsi_over_r(1e-6) - at0).abs() < 1e-9);
        assert!((t.dpsi_over_r(2e-4) - at0).abs() < 1e-6);
    }
}

//! Time evolution of the driven, dephasing qubit.
//!
//! In scaled time `tau` the Bloch vector obeys `ds/dtau = M s` with
//!
//! ```text
//!       | -gamma_d        0         omega cos(theta) |
//!   M = |     0       -gamma_d      omega sin(theta) |
//!       | -omega cos(theta)  -omega sin(theta)   0   |
//! ```
//!
//! which is a rotation about the in-plane axis `(-sin theta, cos theta, 0)`
//! at angular speed `omega`, with the transverse (x, y) components damped at
//! rate `gamma_d`. The equivalent density-matrix form is
//!
//! ```text
//!   drho/dtau = -i (omega/2) [cos(theta) sigma_y - sin(theta) sigma_x, rho]
//!               - (gamma_d/4) [sigma_z, [sigma_z, rho]]
//! ```
//!
//! Three integration routes are kept deliberately independent: a fixed-step
//! RK4 on the Bloch vector (the default), the exact propagator `expm(M tau)`,
//! and an RK4 on the density matrix itself. The density route never calls
//! [`bloch_rhs`], so agreement between the three is a meaningful cross-check
//! rather than a tautology.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::qubit::{
    bloch_to_density, density_to_bloch, BlochVector, DensityMatrix, SIGMA_X, SIGMA_Y, SIGMA_Z,
};

/// Bloch-space generator; `ds/dtau = generator(params) s`.
pub type Generator = Mat3;

/// Laboratory field parameters behind a [`ModelParams`], when it was built
/// from them: `kappa` compares the transverse drive to the square of the
/// static field, `epsilon` is the dephasing strength. They enter the scaled
/// equations only through `omega = kappa / 2` and `gamma_d = 2 epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub kappa: f64,
    pub epsilon: f64,
}

/// Scaled-unit model parameters: polarization angle `theta` (normalized into
/// `[0, 2 pi)`), drive amplitude `omega >= 0`, dephasing rate `gamma_d >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub theta: f64,
    pub omega: f64,
    pub gamma_d: f64,
    cos_theta: f64,
    sin_theta: f64,
    fields: Option<FieldParams>,
}

fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

fn require_nonnegative(name: &'static str, value: f64) -> Result<()> {
    require_finite(name, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

impl ModelParams {
    pub fn new(theta: f64, omega: f64, gamma_d: f64) -> Result<Self> {
        require_finite("theta", theta)?;
        require_nonnegative("omega", omega)?;
        require_nonnegative("gamma_d", gamma_d)?;
        let tau = std::f64::consts::TAU;
        let mut t = theta.rem_euclid(tau);
        if t >= tau {
            // rem_euclid of a tiny negative rounds up to the modulus itself
            t = 0.0;
        }
        let (sin_theta, cos_theta) = t.sin_cos();
        Ok(ModelParams {
            theta: t,
            omega,
            gamma_d,
            cos_theta,
            sin_theta,
            fields: None,
        })
    }

    /// Build from laboratory field parameters, `omega = kappa / 2` and
    /// `gamma_d = 2 epsilon`.
    pub fn from_fields(theta: f64, kappa: f64, epsilon: f64) -> Result<Self> {
        require_nonnegative("kappa", kappa)?;
        require_nonnegative("epsilon", epsilon)?;
        let mut p = Self::new(theta, kappa / 2.0, 2.0 * epsilon)?;
        p.fields = Some(FieldParams { kappa, epsilon });
        Ok(p)
    }

    /// The field parameters this was built from, if [`Self::from_fields`] was used.
    pub fn fields(&self) -> Option<FieldParams> {
        self.fields
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    pub fn sin_theta(&self) -> f64 {
        self.sin_theta
    }
}

/// Integration route selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Fixed-step fourth-order Runge-Kutta on the Bloch vector.
    Rk4,
    /// Repeated application of the exact step propagator `expm(M dtau)`.
    Exact,
    /// Fixed-step RK4 on the density matrix, converted back per sample.
    Oracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::Exact => "exact",
            Method::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "exact" => Ok(Method::Exact),
            "oracle" => Ok(Method::Oracle),
            other => Err(format!(
                "unknown method `{other}` (expected rk4, exact or oracle)"
            )),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A sampled solution of the equation of motion on the uniform grid
/// `tau[k] = k dtau`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: ModelParams,
    pub initial: BlochVector,
    pub method: Method,
    pub dtau: f64,
    pub tau: Vec<f64>,
    pub states: Vec<BlochVector>,
}

/// Right-hand side `M s` of the Bloch equation.
pub fn bloch_rhs(p: &ModelParams, s: BlochVector) -> BlochVector {
    let wc = p.omega * p.cos_theta;
    let ws = p.omega * p.sin_theta;
    BlochVector::new(
        wc * s.z - p.gamma_d * s.x,
        ws * s.z - p.gamma_d * s.y,
        -(wc * s.x + ws * s.y),
    )
}

/// The generator `M` as an explicit matrix. Its trace is `-2 gamma_d`.
pub fn generator(p: &ModelParams) -> Generator {
    let wc = p.omega * p.cos_theta;
    let ws = p.omega * p.sin_theta;
    Mat3([
        [-p.gamma_d, 0.0, wc],
        [0.0, -p.gamma_d, ws],
        [-wc, -ws, 0.0],
    ])
}

fn rk4_step_raw(p: &ModelParams, s: BlochVector, h: f64) -> BlochVector {
    let k1 = bloch_rhs(p, s);
    let k2 = bloch_rhs(p, s.add_scaled(&k1, h / 2.0));
    let k3 = bloch_rhs(p, s.add_scaled(&k2, h / 2.0));
    let k4 = bloch_rhs(p, s.add_scaled(&k3, h));
    BlochVector::new(
        s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        s.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
    )
}

/// A single classical RK4 step of size `dtau > 0`.
pub fn rk4_step(p: &ModelParams, s: BlochVector, dtau: f64) -> Result<BlochVector> {
    if !(dtau.is_finite() && dtau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dtau",
            value: dtau,
        });
    }
    Ok(rk4_step_raw(p, s, dtau))
}

fn check_run(s0: BlochVector, tau_max: f64, dtau: f64) -> Result<usize> {
    if !s0.is_physical() {
        return Err(Error::UnphysicalBloch { norm: s0.norm() });
    }
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau_max",
            value: tau_max,
        });
    }
    if !(dtau.is_finite() && dtau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dtau",
            value: dtau,
        });
    }
    if dtau > tau_max {
        return Err(Error::InvalidParameter {
            name: "dtau (exceeds tau_max)",
            value: dtau,
        });
    }
    // nearest whole number of steps, at least one
    Ok(((tau_max / dtau).round() as usize).max(1))
}

fn tau_grid(steps: usize, dtau: f64) -> Vec<f64> {
    (0..=steps).map(|k| k as f64 * dtau).collect()
}

/// Integrate from `s0` over `[0, tau_max]` on the uniform grid `k dtau`
/// (step count rounded to the nearest integer) with the chosen method.
pub fn integrate(
    p: &ModelParams,
    s0: BlochVector,
    tau_max: f64,
    dtau: f64,
    method: Method,
) -> Result<Trajectory> {
    let steps = check_run(s0, tau_max, dtau)?;
    let states = match method {
        Method::Rk4 => {
            let mut states = Vec::with_capacity(steps + 1);
            states.push(s0);
            let mut s = s0;
            for _ in 0..steps {
                s = rk4_step_raw(p, s, dtau);
                states.push(s);
            }
            states
        }
        Method::Exact => {
            let prop = generator(p).scale(dtau).expm();
            let mut states = Vec::with_capacity(steps + 1);
            states.push(s0);
            let mut s = s0.to_array();
            for _ in 0..steps {
                s = prop.apply(s);
                states.push(BlochVector::from_array(s));
            }
            states
        }
        Method::Oracle => {
            let rho0 = bloch_to_density(s0)?;
            let rhos = density_run(p, *rho0.entries(), steps, dtau);
            rhos.iter()
                .map(|m| density_to_bloch(&DensityMatrix::from_entries(*m)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(Trajectory {
        params: *p,
        initial: s0,
        method,
        dtau,
        tau: tau_grid(steps, dtau),
        states,
    })
}

/// Evaluate `expm(M tau) s0` in one shot (`tau >= 0`).
pub fn propagate_exact(p: &ModelParams, s0: BlochVector, tau: f64) -> Result<BlochVector> {
    if !s0.is_physical() {
        return Err(Error::UnphysicalBloch { norm: s0.norm() });
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
        });
    }
    Ok(BlochVector::from_array(
        generator(p).scale(tau).expm().apply(s0.to_array()),
    ))
}

type C2 = [[Complex64; 2]; 2];

fn mul2(a: &C2, b: &C2) -> C2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn sub2(a: &C2, b: &C2) -> C2 {
    let mut out = *a;
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell -= b[i][j];
        }
    }
    out
}

/// `a + h b` with real `h`.
fn axpy2(a: &C2, b: &C2, h: f64) -> C2 {
    let mut out = *a;
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell += b[i][j] * h;
        }
    }
    out
}

fn scale2(a: &C2, c: Complex64) -> C2 {
    let mut out = *a;
    for row in out.iter_mut() {
        for cell in row.iter_mut() {
            *cell *= c;
        }
    }
    out
}

fn commutator(a: &C2, b: &C2) -> C2 {
    sub2(&mul2(a, b), &mul2(b, a))
}

fn density_rhs_raw(p: &ModelParams, rho: &C2) -> C2 {
    // drive axis operator: cos(theta) sigma_y - sin(theta) sigma_x
    let axis = sub2(
        &scale2(&SIGMA_Y, Complex64::new(p.cos_theta(), 0.0)),
        &scale2(&SIGMA_X, Complex64::new(p.sin_theta(), 0.0)),
    );
    let drive = scale2(
        &commutator(&axis, rho),
        Complex64::new(0.0, -p.omega / 2.0),
    );
    let zz = commutator(&SIGMA_Z, &commutator(&SIGMA_Z, rho));
    axpy2(&drive, &zz, -p.gamma_d / 4.0)
}

/// Density-matrix form of the equation of motion, written directly in terms
/// of Pauli commutators. Shares no code with [`bloch_rhs`], so the two sides
/// check each other.
pub fn density_rhs(p: &ModelParams, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_entries(density_rhs_raw(p, rho.entries()))
}

fn density_rk4_step(p: &ModelParams, rho: &C2, h: f64) -> C2 {
    let k1 = density_rhs_raw(p, rho);
    let k2 = density_rhs_raw(p, &axpy2(rho, &k1, h / 2.0));
    let k3 = density_rhs_raw(p, &axpy2(rho, &k2, h / 2.0));
    let k4 = density_rhs_raw(p, &axpy2(rho, &k3, h));
    let mut acc = k1;
    acc = axpy2(&acc, &k2, 2.0);
    acc = axpy2(&acc, &k3, 2.0);
    acc = axpy2(&acc, &k4, 1.0);
    axpy2(rho, &acc, h / 6.0)
}

fn density_run(p: &ModelParams, rho0: C2, steps: usize, dtau: f64) -> Vec<C2> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(rho0);
    let mut rho = rho0;
    for _ in 0..steps {
        rho = density_rk4_step(p, &rho, dtau);
        out.push(rho);
    }
    out
}

/// Integrate the density-matrix equation with RK4 on the same grid layout as
/// [`integrate`]. Returns the raw matrices so callers can measure how well
/// Hermiticity, unit trace and positivity survive the integration.
pub fn density_trajectory(
    p: &ModelParams,
    rho0: &DensityMatrix,
    tau_max: f64,
    dtau: f64,
) -> Result<(Vec<f64>, Vec<DensityMatrix>)> {
    let report = rho0.validate();
    if !report.pass {
        return Err(Error::InvalidDensity {
            hermiticity_defect: report.hermiticity_defect,
            trace_defect: report.trace_defect,
            min_eigenvalue: report.min_eigenvalue,
        });
    }
    // reuse the run checks with a state known to be physical
    let steps = check_run(BlochVector::ORIGIN, tau_max, dtau)?;
    let rhos = density_run(p, *rho0.entries(), steps, dtau)
        .into_iter()
        .map(DensityMatrix::from_entries)
        .collect();
    Ok((tau_grid(steps, dtau), rhos))
}

/// The set of stationary states of the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointSet {
    /// Drive and dephasing both active: only the maximally mixed state.
    UniqueOrigin,
    /// Dephasing without drive: the whole z axis is left untouched.
    ZAxisLine,
    /// Drive without dephasing: the rotation axis `(-sin theta, cos theta, 0)`.
    DriveAxisLine,
    /// No dynamics at all.
    WholeBall,
}

/// Classify the stationary set of `ds/dtau = M s` from the parameters.
pub fn fixed_point(p: &ModelParams) -> FixedPointSet {
    match (p.omega > 0.0, p.gamma_d > 0.0) {
        (true, true) => FixedPointSet::UniqueOrigin,
        (false, true) => FixedPointSet::ZAxisLine,
        (true, false) => FixedPointSet::DriveAxisLine,
        (false, false) => FixedPointSet::WholeBall,
    }
}

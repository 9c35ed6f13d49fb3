//! Scalar observables along a trajectory and summaries of how they decay.
//!
//! For a state with Bloch vector `s` (polar eigenvalues `(1 +- |s|)/2`):
//! purity is `(1 + |s|^2) / 2`, von Neumann entropy uses natural logarithms
//! (maximum `ln 2` at the center of the ball), and fidelity against another
//! state follows the closed two-level form
//! `tr(rho_0 rho_t) + 2 sqrt(det rho_0 det rho_t)`.

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::qubit::{bloch_to_density, BlochVector, DensityMatrix};

/// Purity threshold that counts as "still on the initial plateau".
pub const PLATEAU_PURITY: f64 = 0.99;

/// Relative range under which a series counts as flat.
const FLAT_EPS: f64 = 1e-12;

/// A decay window is considered covered when the final value sits within
/// this fraction of the observed range above the observed minimum.
const SETTLE_FRACTION: f64 = 0.01;

fn ensure_physical(s: BlochVector) -> Result<f64> {
    let n = s.norm();
    if !(n.is_finite() && n <= 1.0 + crate::qubit::PHYS_TOL) {
        return Err(Error::UnphysicalBloch { norm: n });
    }
    // clamp roundoff excess over the ball surface so boundary states stay exact
    Ok(n.min(1.0))
}

/// `tr(rho^2) = (1 + |s|^2) / 2`, in `[1/2, 1]`.
pub fn purity(s: BlochVector) -> Result<f64> {
    let n = ensure_physical(s)?;
    Ok((1.0 + n * n) / 2.0)
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Von Neumann entropy `-sum lambda ln lambda` with `lambda = (1 +- |s|)/2`.
/// Zero for pure states, `ln 2` at the center of the ball.
pub fn entropy(s: BlochVector) -> Result<f64> {
    let n = ensure_physical(s)?;
    let lp = (1.0 + n) / 2.0;
    let lm = (1.0 - n) / 2.0;
    Ok(-(xlnx(lp) + xlnx(lm)))
}

pub fn bloch_norm(s: BlochVector) -> f64 {
    s.norm()
}

fn checked_pair(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    for rho in [a, b] {
        let report = rho.validate();
        if !report.pass {
            return Err(Error::InvalidDensity {
                hermiticity_defect: report.hermiticity_defect,
                trace_defect: report.trace_defect,
                min_eigenvalue: report.min_eigenvalue,
            });
        }
    }
    Ok(())
}

fn trace_product(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let (a, b) = (a.entries(), b.entries());
    let mut t = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for k in 0..2 {
            t += a[i][k] * b[k][i];
        }
    }
    t.re
}

/// Uhlmann fidelity in the closed two-level form
/// `tr(a b) + 2 sqrt(det a det b)`, in `[0, 1]`, with `fidelity(a, a) = 1`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    checked_pair(a, b)?;
    // determinants of valid states are non-negative up to roundoff
    let da = a.determinant().re.max(0.0);
    let db = b.determinant().re.max(0.0);
    Ok(trace_product(a, b) + 2.0 * (da * db).sqrt())
}

/// Bare state overlap `tr(a b)`, the fidelity variant without the
/// mixed-state correction term.
pub fn overlap(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    checked_pair(a, b)?;
    Ok(trace_product(a, b))
}

/// All tracked observables sampled on a trajectory grid. `fidelity` is taken
/// against the initial state, so it starts at 1.
#[derive(Debug, Clone)]
pub struct ObservableSeries {
    pub params: crate::dynamics::ModelParams,
    pub tau: Vec<f64>,
    pub states: Vec<BlochVector>,
    pub purity: Vec<f64>,
    pub entropy: Vec<f64>,
    pub bloch_norm: Vec<f64>,
    pub fidelity: Vec<f64>,
}

/// Evaluate every observable along a trajectory.
pub fn series(traj: &Trajectory) -> Result<ObservableSeries> {
    let rho0 = bloch_to_density(traj.initial)?;
    let n = traj.states.len();
    let mut purity_v = Vec::with_capacity(n);
    let mut entropy_v = Vec::with_capacity(n);
    let mut norm_v = Vec::with_capacity(n);
    let mut fidelity_v = Vec::with_capacity(n);
    for &s in &traj.states {
        purity_v.push(purity(s)?);
        entropy_v.push(entropy(s)?);
        norm_v.push(bloch_norm(s));
        fidelity_v.push(fidelity(&rho0, &bloch_to_density(s)?)?);
    }
    Ok(ObservableSeries {
        params: traj.params,
        tau: traj.tau.clone(),
        states: traj.states.clone(),
        purity: purity_v,
        entropy: entropy_v,
        bloch_norm: norm_v,
        fidelity: fidelity_v,
    })
}

/// Which column of an [`ObservableSeries`] a decay summary tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackedObservable {
    Purity,
    BlochNorm,
    Fidelity,
}

impl TrackedObservable {
    pub fn values<'a>(&self, s: &'a ObservableSeries) -> &'a [f64] {
        match self {
            TrackedObservable::Purity => &s.purity,
            TrackedObservable::BlochNorm => &s.bloch_norm,
            TrackedObservable::Fidelity => &s.fidelity,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TrackedObservable::Purity => "purity",
            TrackedObservable::BlochNorm => "bloch_norm",
            TrackedObservable::Fidelity => "fidelity",
        }
    }
}

/// Decay-speed verdict relative to the dephasing time scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Abrupt,
    Gradual,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Abrupt => "abrupt",
            Classification::Gradual => "gradual",
        }
    }
}

/// How one observable decays over a run.
///
/// `half_time` interpolates the first crossing of the midpoint between the
/// observed extremes; it is absent when the series is flat or has not
/// settled (final value more than 1% of the range above the minimum, as for
/// an undamped oscillation). `rate_estimate` is the negative least-squares
/// slope of `ln(value)` from the half-time to the end of the window.
/// `plateau_end` is the last time purity still exceeds [`PLATEAU_PURITY`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySummary {
    pub tracked: TrackedObservable,
    pub half_time: Option<f64>,
    pub rate_estimate: Option<f64>,
    pub plateau_end: Option<f64>,
    pub classification: Classification,
}

fn midpoint_crossing(tau: &[f64], v: &[f64]) -> Option<f64> {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let range = max - min;
    if !(range.is_finite()) || range <= FLAT_EPS * max.abs().max(1.0) {
        return None;
    }
    if *v.last().unwrap() > min + SETTLE_FRACTION * range {
        // window does not cover the decay (e.g. an undamped oscillation)
        return None;
    }
    let mid = (max + min) / 2.0;
    let k = v.iter().position(|&x| x <= mid)?;
    if k == 0 {
        return Some(tau[0]);
    }
    let (t0, t1) = (tau[k - 1], tau[k]);
    let (v0, v1) = (v[k - 1], v[k]);
    Some(t0 + (mid - v0) * (t1 - t0) / (v1 - v0))
}

fn log_slope_rate(tau: &[f64], v: &[f64], from: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = tau
        .iter()
        .zip(v)
        .filter(|&(&t, &x)| t >= from && x > 0.0 && x.is_finite())
        .map(|(&t, &x)| (t, x.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for &(t, y) in &pts {
        sxy += (t - mt) * (y - my);
        sxx += (t - mt) * (t - mt);
    }
    if sxx == 0.0 {
        return None;
    }
    Some(-(sxy / sxx))
}

fn plateau_end(tau: &[f64], purity: &[f64]) -> Option<f64> {
    if purity[0] < PLATEAU_PURITY {
        return None;
    }
    match purity.iter().position(|&p| p < PLATEAU_PURITY) {
        None => Some(*tau.last().unwrap()),
        Some(k) => {
            let (t0, t1) = (tau[k - 1], tau[k]);
            let (p0, p1) = (purity[k - 1], purity[k]);
            Some(t0 + (PLATEAU_PURITY - p0) * (t1 - t0) / (p1 - p0))
        }
    }
}

/// [`decay_summary_with_threshold`] with the standard abrupt threshold
/// `1 / gamma_d` (infinite when there is no dephasing).
pub fn decay_summary(s: &ObservableSeries, tracked: TrackedObservable) -> DecaySummary {
    let threshold = if s.params.gamma_d > 0.0 {
        1.0 / s.params.gamma_d
    } else {
        f64::INFINITY
    };
    decay_summary_with_threshold(s, tracked, threshold)
}

/// Summarize how `tracked` decays; the loss is classified abrupt when the
/// half-time is defined and falls below `abrupt_threshold`.
pub fn decay_summary_with_threshold(
    s: &ObservableSeries,
    tracked: TrackedObservable,
    abrupt_threshold: f64,
) -> DecaySummary {
    let v = tracked.values(s);
    let half_time = midpoint_crossing(&s.tau, v);
    let rate_estimate = half_time.and_then(|ht| log_slope_rate(&s.tau, v, ht));
    let classification = match half_time {
        Some(ht) if ht < abrupt_threshold => Classification::Abrupt,
        _ => Classification::Gradual,
    };
    DecaySummary {
        tracked,
        half_time,
        rate_estimate,
        plateau_end: plateau_end(&s.tau, &s.purity),
        classification,
    }
}

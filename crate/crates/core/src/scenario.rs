//! Named figure presets, parameter-grid sweeps and the long-time
//! saturation check.
//!
//! A [`ScenarioSpec`] is a small cartesian experiment: one initial state,
//! grids of polarization angles and drive strengths `kappa`, one dephasing
//! strength, one time window. [`run_scenario`] integrates every combination
//! (angles outer, drives inner, in list order) and evaluates the observable
//! series; [`sweep`] reduces each combination to one summary row.

use rayon::prelude::*;

use crate::dynamics::{integrate, Method, ModelParams, Trajectory};
use crate::error::{Error, Result};
use crate::observables::{
    decay_summary_with_threshold, series, Classification, ObservableSeries, TrackedObservable,
};
use crate::qubit::BlochVector;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

/// Dephasing strength shared by all figure presets. Deliberately weak
/// enough that every preset drive (`kappa >= 0.05`, so `omega >= 0.025`)
/// stays underdamped (`omega > gamma_d / 2`).
pub const PRESET_GAMMA_D: f64 = 0.02;

/// Sample step shared by all figure presets.
pub const PRESET_DTAU: f64 = 0.01;

/// A run saturates only after roughly this many dephasing times; the preset
/// windows span `SATURATION_SPAN / gamma_d`.
pub const SATURATION_SPAN: f64 = 10.0;

/// Initial Bloch vector, by axis label or as an explicit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    X,
    Y,
    Z,
    Custom(BlochVector),
}

impl InitialState {
    pub fn bloch(&self) -> BlochVector {
        match self {
            InitialState::X => BlochVector::new(1.0, 0.0, 0.0),
            InitialState::Y => BlochVector::new(0.0, 1.0, 0.0),
            InitialState::Z => BlochVector::new(0.0, 0.0, 1.0),
            InitialState::Custom(s) => *s,
        }
    }

    /// Stable comma-free label, usable as a CSV field.
    pub fn label(&self) -> String {
        match self {
            InitialState::X => "x".to_string(),
            InitialState::Y => "y".to_string(),
            InitialState::Z => "z".to_string(),
            InitialState::Custom(s) => format!("({};{};{})", s.x, s.y, s.z),
        }
    }
}

impl std::str::FromStr for InitialState {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        match text.trim() {
            "x" => Ok(InitialState::X),
            "y" => Ok(InitialState::Y),
            "z" => Ok(InitialState::Z),
            other => {
                let parts: Vec<&str> = other.split(',').collect();
                if parts.len() != 3 {
                    return Err(format!(
                        "expected `x`, `y`, `z` or three comma-separated components, got `{other}`"
                    ));
                }
                let mut v = [0.0; 3];
                for (slot, part) in v.iter_mut().zip(&parts) {
                    *slot = part
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| format!("bad vector component `{}`", part.trim()))?;
                }
                Ok(InitialState::Custom(BlochVector::from_array(v)))
            }
        }
    }
}

/// One grid experiment: every `(theta, kappa)` combination is integrated
/// from the same initial state with `gamma_d` fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub id: String,
    pub initial: InitialState,
    pub theta: Vec<f64>,
    pub kappa: Vec<f64>,
    pub gamma_d: f64,
    pub tau_max: f64,
    pub dtau: f64,
    /// Observable a multi-curve plot of this scenario should overlay.
    pub featured: TrackedObservable,
}

pub fn preset_ids() -> &'static [&'static str] {
    &[
        "1a", "1b", "1c", "1d", "2a", "2b", "2c", "2d", "3a", "3b", "4", "5a", "5b", "6a", "6b",
        "7a", "7b",
    ]
}

/// Look up a named figure preset.
///
/// The families: 1 holds the drive fixed and steps the polarization angle
/// from a transverse start, 2 contrasts starts parallel and orthogonal to
/// the quantization axis, 3 and 4 track the Bloch norm across angles and
/// drive strengths, 5 through 7 track fidelity (7b zooms into the initial
/// plateau).
pub fn figure_scenario(id: &str) -> Result<ScenarioSpec> {
    use InitialState::{X, Y, Z};
    use TrackedObservable::{BlochNorm, Fidelity, Purity};

    let standard_window = SATURATION_SPAN / PRESET_GAMMA_D;
    let (initial, theta, kappa, tau_max, featured) = match id {
        "1a" => (Y, vec![0.0], vec![0.05], standard_window, Purity),
        "1b" => (Y, vec![FRAC_PI_4], vec![0.05], standard_window, Purity),
        "1c" => (Y, vec![FRAC_PI_3], vec![0.05], standard_window, Purity),
        "1d" => (Y, vec![FRAC_PI_2], vec![0.05], standard_window, Purity),
        "2a" => (X, vec![FRAC_PI_4], vec![0.05], standard_window, Purity),
        "2b" => (X, vec![FRAC_PI_4], vec![0.09], standard_window, Purity),
        "2c" => (Z, vec![FRAC_PI_4], vec![0.05], standard_window, Purity),
        "2d" => (Z, vec![FRAC_PI_4], vec![0.09], standard_window, Purity),
        "3a" => (
            X,
            vec![FRAC_PI_2, 0.0, FRAC_PI_3],
            vec![0.05],
            standard_window,
            BlochNorm,
        ),
        "3b" => (
            Y,
            vec![FRAC_PI_2, 0.0, FRAC_PI_3],
            vec![0.05],
            standard_window,
            BlochNorm,
        ),
        "4" => (
            Z,
            vec![FRAC_PI_4],
            vec![0.05, 0.07, 0.09],
            standard_window,
            BlochNorm,
        ),
        "5a" => (
            X,
            vec![0.0],
            vec![0.05, 0.07, 0.09],
            standard_window,
            Fidelity,
        ),
        "5b" => (
            X,
            vec![FRAC_PI_3],
            vec![0.05, 0.07, 0.09],
            standard_window,
            Fidelity,
        ),
        "6a" => (Y, vec![0.0], vec![0.05], standard_window, Fidelity),
        "6b" => (Y, vec![FRAC_PI_3], vec![0.05], standard_window, Fidelity),
        "7a" => (Z, vec![0.0], vec![0.05], standard_window, Fidelity),
        // zoom on the initial fidelity plateau and its first droop
        "7b" => (Z, vec![0.0], vec![0.05], 25.0, Fidelity),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(ScenarioSpec {
        id: id.to_string(),
        initial,
        theta,
        kappa,
        gamma_d: PRESET_GAMMA_D,
        tau_max,
        dtau: PRESET_DTAU,
        featured,
    })
}

/// One `(theta, kappa)` combination of a scenario, fully integrated.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub theta: f64,
    pub kappa: f64,
    pub params: ModelParams,
    pub trajectory: Trajectory,
    pub series: ObservableSeries,
}

/// Integrate every grid combination (theta outer, kappa inner, in list
/// order). Combinations run in parallel; the output order is the grid order.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<Vec<ScenarioRun>> {
    if spec.theta.is_empty() {
        return Err(Error::EmptyGrid("theta"));
    }
    if spec.kappa.is_empty() {
        return Err(Error::EmptyGrid("kappa"));
    }
    let s0 = spec.initial.bloch();
    let combos: Vec<(f64, f64)> = spec
        .theta
        .iter()
        .flat_map(|&t| spec.kappa.iter().map(move |&k| (t, k)))
        .collect();
    combos
        .par_iter()
        .map(|&(theta, kappa)| {
            let params = ModelParams::from_fields(theta, kappa, spec.gamma_d / 2.0)?;
            let trajectory = integrate(&params, s0, spec.tau_max, spec.dtau, Method::Rk4)?;
            let series = series(&trajectory)?;
            Ok(ScenarioRun {
                theta,
                kappa,
                params,
                trajectory,
                series,
            })
        })
        .collect()
}

/// One summary row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub theta: f64,
    pub initial: InitialState,
    pub final_purity: f64,
    pub final_entropy: f64,
    pub min_fidelity: f64,
    pub half_time: Option<f64>,
    pub rate_estimate: Option<f64>,
    pub plateau_end: Option<f64>,
    pub classification: Classification,
}

/// Sweep output: one row per grid combination, in grid order.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub initial: InitialState,
    pub gamma_d: f64,
    pub tau_max: f64,
    pub tracked: TrackedObservable,
    pub abrupt_threshold: f64,
    pub rows: Vec<SweepRow>,
}

/// Reduce finished runs to sweep rows, classifying against
/// `abrupt_threshold` (defaults to `1 / gamma_d`).
pub fn summarize_runs(
    runs: &[ScenarioRun],
    initial: InitialState,
    tracked: TrackedObservable,
    abrupt_threshold: Option<f64>,
) -> Vec<SweepRow> {
    runs.iter()
        .map(|run| {
            let threshold = abrupt_threshold.unwrap_or(if run.params.gamma_d > 0.0 {
                1.0 / run.params.gamma_d
            } else {
                f64::INFINITY
            });
            let d = decay_summary_with_threshold(&run.series, tracked, threshold);
            SweepRow {
                kappa: run.kappa,
                theta: run.theta,
                initial,
                final_purity: *run.series.purity.last().unwrap(),
                final_entropy: *run.series.entropy.last().unwrap(),
                min_fidelity: run.series.fidelity.iter().copied().fold(f64::INFINITY, f64::min),
                half_time: d.half_time,
                rate_estimate: d.rate_estimate,
                plateau_end: d.plateau_end,
                classification: d.classification,
            }
        })
        .collect()
}

/// Run the grid and summarize each combination, tracking the Bloch norm.
pub fn sweep(spec: &ScenarioSpec) -> Result<SweepResult> {
    sweep_with(spec, TrackedObservable::BlochNorm, None)
}

/// [`sweep`] with an explicit tracked observable and abrupt threshold.
pub fn sweep_with(
    spec: &ScenarioSpec,
    tracked: TrackedObservable,
    abrupt_threshold: Option<f64>,
) -> Result<SweepResult> {
    let runs = run_scenario(spec)?;
    let threshold = abrupt_threshold.unwrap_or(if spec.gamma_d > 0.0 {
        1.0 / spec.gamma_d
    } else {
        f64::INFINITY
    });
    let rows = summarize_runs(&runs, spec.initial, tracked, Some(threshold));
    Ok(SweepResult {
        initial: spec.initial,
        gamma_d: spec.gamma_d,
        tau_max: spec.tau_max,
        tracked,
        abrupt_threshold: threshold,
        rows,
    })
}

/// Verdict of [`saturation_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturationStatus {
    Pass,
    Fail,
    /// The window is too short (or there is no dephasing), so the final
    /// values say nothing about the limit.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SaturationReport {
    pub status: SaturationStatus,
    pub final_purity: f64,
    pub final_entropy: f64,
    pub final_bloch_norm: f64,
    pub detail: String,
}

/// Check that a finished run has reached the maximally mixed limit: final
/// purity within 0.01 of 1/2, final entropy within 0.01 of ln 2, final Bloch
/// norm below 0.1. Windows shorter than `SATURATION_SPAN / gamma_d` are
/// inconclusive rather than failures.
pub fn saturation_check(series: &ObservableSeries) -> SaturationReport {
    let final_purity = *series.purity.last().unwrap();
    let final_entropy = *series.entropy.last().unwrap();
    let final_bloch_norm = *series.bloch_norm.last().unwrap();
    let tau_end = *series.tau.last().unwrap();
    let gamma_d = series.params.gamma_d;

    let mut report = SaturationReport {
        status: SaturationStatus::Inconclusive,
        final_purity,
        final_entropy,
        final_bloch_norm,
        detail: String::new(),
    };

    if gamma_d <= 0.0 {
        report.detail = "no dephasing present, the state never saturates".to_string();
        return report;
    }
    let span = SATURATION_SPAN / gamma_d;
    if tau_end < span - 1e-9 {
        report.detail = format!(
            "window ends at tau = {tau_end:.6}, below the saturation span {span:.6}"
        );
        return report;
    }

    let mut failures = Vec::new();
    if (final_purity - 0.5).abs() >= 0.01 {
        failures.push(format!("final purity {final_purity:.6} is not 0.5 within 0.01"));
    }
    if (final_entropy - std::f64::consts::LN_2).abs() >= 0.01 {
        failures.push(format!(
            "final entropy {final_entropy:.6} is not ln 2 within 0.01"
        ));
    }
    if final_bloch_norm >= 0.1 {
        failures.push(format!(
            "final Bloch norm {final_bloch_norm:.6} has not collapsed below 0.1"
        ));
    }
    if failures.is_empty() {
        report.status = SaturationStatus::Pass;
        report.detail = "saturated at the maximally mixed state".to_string();
    } else {
        report.status = SaturationStatus::Fail;
        report.detail = failures.join("; ");
    }
    report
}

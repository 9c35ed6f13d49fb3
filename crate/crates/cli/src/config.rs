//! `key = value` run configuration files.
//!
//! One pair per line; `#` starts a comment, blank lines are ignored. A file
//! either selects a figure preset with the single `scenario` key or spells
//! out a run with the explicit block `init`, `theta`, `kappa` | `omega`,
//! `epsilon` | `gamma_d`, `tau_max`, `dtau`, `method`. `out` and `emit_plot`
//! control output in both modes. Unknown keys, duplicate keys and mixing the
//! two blocks are errors.

use std::path::PathBuf;

use kanesim_core::{InitialState, Method};
use thiserror::Error;

/// Step used when the explicit block omits `dtau`.
pub const DEFAULT_DTAU: f64 = 1e-3;

/// Dephasing rate used when the explicit block names neither `epsilon` nor
/// `gamma_d`.
pub const DEFAULT_GAMMA_D: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    BadLine { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: malformed value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("{0}")]
    Conflict(String),
}

/// Raw key/value content of a config file (or of the equivalent command-line
/// flags), before cross-key resolution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub scenario: Option<String>,
    pub init: Option<InitialState>,
    pub theta: Option<f64>,
    pub kappa: Option<f64>,
    pub omega: Option<f64>,
    pub epsilon: Option<f64>,
    pub gamma_d: Option<f64>,
    pub tau_max: Option<f64>,
    pub dtau: Option<f64>,
    pub method: Option<Method>,
    pub out: Option<PathBuf>,
    pub emit_plot: bool,
}

fn put<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(ConfigError::DuplicateKey {
            line,
            key: key.to_string(),
        });
    }
    *slot = Some(value);
    Ok(())
}

fn number(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value.parse::<f64>().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason: format!("`{value}` is not a number"),
    })
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut emit_plot: Option<bool> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::BadLine {
                line,
                text: content.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "scenario" => put(&mut cfg.scenario, value.to_string(), line, key)?,
            "init" => {
                let init = value.parse::<InitialState>().map_err(|reason| {
                    ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        reason,
                    }
                })?;
                put(&mut cfg.init, init, line, key)?;
            }
            "theta" => put(&mut cfg.theta, number(line, key, value)?, line, key)?,
            "kappa" => put(&mut cfg.kappa, number(line, key, value)?, line, key)?,
            "omega" => put(&mut cfg.omega, number(line, key, value)?, line, key)?,
            "epsilon" => put(&mut cfg.epsilon, number(line, key, value)?, line, key)?,
            "gamma_d" => put(&mut cfg.gamma_d, number(line, key, value)?, line, key)?,
            "tau_max" => put(&mut cfg.tau_max, number(line, key, value)?, line, key)?,
            "dtau" => put(&mut cfg.dtau, number(line, key, value)?, line, key)?,
            "method" => {
                let method = value.parse::<Method>().map_err(|reason| {
                    ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        reason,
                    }
                })?;
                put(&mut cfg.method, method, line, key)?;
            }
            "out" => put(&mut cfg.out, PathBuf::from(value), line, key)?,
            "emit_plot" => {
                let flag = match value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(ConfigError::BadValue {
                            line,
                            key: key.to_string(),
                            reason: format!("`{other}` is not `true` or `false`"),
                        })
                    }
                };
                put(&mut emit_plot, flag, line, key)?;
            }
            other => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
    }
    cfg.emit_plot = emit_plot.unwrap_or(false);
    Ok(cfg)
}

/// Drive strength, in whichever unit the user chose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveSpec {
    Kappa(f64),
    Omega(f64),
}

/// Dephasing strength, in whichever unit the user chose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DephasingSpec {
    Epsilon(f64),
    GammaD(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitRun {
    pub initial: InitialState,
    pub theta: f64,
    pub drive: DriveSpec,
    pub dephasing: DephasingSpec,
    pub tau_max: f64,
    pub dtau: f64,
    pub method: Method,
}

/// A config resolved into an actionable request.
#[derive(Debug, Clone, PartialEq)]
pub enum RunPlan {
    Preset(String),
    Explicit(ExplicitRun),
}

/// Cross-key resolution: preset selection excludes the explicit block,
/// `kappa`/`omega` and `epsilon`/`gamma_d` are pairwise exclusive, defaults
/// fill in `dtau`, `method` and the dephasing rate.
pub fn resolve(cfg: &RunConfig) -> Result<RunPlan, ConfigError> {
    let explicit_present = cfg.init.is_some()
        || cfg.theta.is_some()
        || cfg.kappa.is_some()
        || cfg.omega.is_some()
        || cfg.epsilon.is_some()
        || cfg.gamma_d.is_some()
        || cfg.tau_max.is_some()
        || cfg.dtau.is_some()
        || cfg.method.is_some();

    if let Some(id) = &cfg.scenario {
        if explicit_present {
            return Err(ConfigError::Conflict(
                "`scenario` cannot be combined with explicit run keys".to_string(),
            ));
        }
        return Ok(RunPlan::Preset(id.clone()));
    }

    let initial = cfg.init.ok_or(ConfigError::MissingKey("init"))?;
    let theta = cfg.theta.ok_or(ConfigError::MissingKey("theta"))?;
    let drive = match (cfg.kappa, cfg.omega) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Conflict(
                "`kappa` and `omega` are mutually exclusive".to_string(),
            ))
        }
        (Some(k), None) => DriveSpec::Kappa(k),
        (None, Some(w)) => DriveSpec::Omega(w),
        (None, None) => return Err(ConfigError::MissingKey("kappa (or omega)")),
    };
    let dephasing = match (cfg.epsilon, cfg.gamma_d) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Conflict(
                "`epsilon` and `gamma_d` are mutually exclusive".to_string(),
            ))
        }
        (Some(e), None) => DephasingSpec::Epsilon(e),
        (None, Some(g)) => DephasingSpec::GammaD(g),
        (None, None) => DephasingSpec::GammaD(DEFAULT_GAMMA_D),
    };
    let tau_max = cfg.tau_max.ok_or(ConfigError::MissingKey("tau_max"))?;
    Ok(RunPlan::Explicit(ExplicitRun {
        initial,
        theta,
        drive,
        dephasing,
        tau_max,
        dtau: cfg.dtau.unwrap_or(DEFAULT_DTAU),
        method: cfg.method.unwrap_or(Method::Rk4),
    }))
}

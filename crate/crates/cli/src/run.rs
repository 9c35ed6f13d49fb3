//! Command implementations behind the argument parser.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use kanesim_core::{
    figure_scenario, integrate, run_scenario, series, summarize_runs, ModelParams, ScenarioRun,
    ScenarioSpec, SweepResult,
};

use crate::config::{parse_config, resolve, DephasingSpec, DriveSpec, ExplicitRun, RunConfig, RunPlan};
use crate::plot::{runs_svg, series_svg, write_svg};
use crate::table::{format_g15, validate_file, write_series_csv, write_sweep_csv};
use crate::{FigureArgs, SimulateArgs, SweepArgs, ValidateArgs};

/// Both drive and dephasing strengths are accepted in either unit system;
/// internally everything runs on (omega, gamma_d) with omega = kappa / 2 and
/// gamma_d = 2 epsilon.
fn build_params(run: &ExplicitRun) -> Result<ModelParams> {
    let params = match (run.drive, run.dephasing) {
        (DriveSpec::Kappa(k), DephasingSpec::Epsilon(e)) => {
            ModelParams::from_fields(run.theta, k, e)
        }
        (DriveSpec::Kappa(k), DephasingSpec::GammaD(g)) => {
            ModelParams::from_fields(run.theta, k, g / 2.0)
        }
        (DriveSpec::Omega(w), DephasingSpec::Epsilon(e)) => {
            ModelParams::new(run.theta, w, 2.0 * e)
        }
        (DriveSpec::Omega(w), DephasingSpec::GammaD(g)) => ModelParams::new(run.theta, w, g),
    }?;
    Ok(params)
}

fn wrote(path: &Path, rows: usize) {
    println!("wrote {} ({} rows)", path.display(), rows);
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => RunConfig {
            scenario: args.scenario.clone(),
            init: args.init,
            theta: args.theta,
            kappa: args.kappa,
            omega: args.omega,
            epsilon: args.epsilon,
            gamma_d: args.gamma_d,
            tau_max: args.tau_max,
            dtau: args.dtau,
            method: args.method,
            ..RunConfig::default()
        },
    };
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    if args.plot {
        cfg.emit_plot = true;
    }

    match resolve(&cfg)? {
        RunPlan::Preset(id) => emit_figure(&id, cfg.out, cfg.emit_plot),
        RunPlan::Explicit(run) => {
            let params = build_params(&run)?;
            let traj = integrate(&params, run.initial.bloch(), run.tau_max, run.dtau, run.method)?;
            let s = series(&traj)?;
            let path = cfg.out.unwrap_or_else(|| PathBuf::from("run.csv"));
            write_series_csv(&s, &path)?;
            wrote(&path, s.tau.len());
            if cfg.emit_plot {
                let title = format!(
                    "init={}, theta={}, omega={}, gamma_d={}, method={}",
                    run.initial.label(),
                    format_g15(params.theta),
                    format_g15(params.omega),
                    format_g15(params.gamma_d),
                    run.method.name(),
                );
                let svg_path = path.with_extension("svg");
                write_svg(&series_svg(&s, &title), &svg_path)?;
                println!("wrote {}", svg_path.display());
            }
            Ok(())
        }
    }
}

pub fn figure(args: &FigureArgs) -> Result<()> {
    emit_figure(&args.id, args.out.clone(), args.plot)
}

/// Splice the grid point into the file name: `figure-4.csv` becomes
/// `figure-4-theta0.7854-kappa0.0500.csv`.
fn combo_path(base: &Path, theta: f64, kappa: f64) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("figure");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}-theta{theta:.4}-kappa{kappa:.4}.{ext}"))
}

fn emit_figure(id: &str, out: Option<PathBuf>, plot: bool) -> Result<()> {
    let spec = figure_scenario(id)?;
    let runs = run_scenario(&spec)?;
    let base = out.unwrap_or_else(|| PathBuf::from(format!("figure-{id}.csv")));

    if let [run] = runs.as_slice() {
        write_series_csv(&run.series, &base)?;
        wrote(&base, run.series.tau.len());
        if plot {
            let title = format!(
                "preset {id}: theta={}, kappa={}",
                format_g15(run.theta),
                format_g15(run.kappa)
            );
            let svg_path = base.with_extension("svg");
            write_svg(&series_svg(&run.series, &title), &svg_path)?;
            println!("wrote {}", svg_path.display());
        }
        return Ok(());
    }

    for run in &runs {
        let path = combo_path(&base, run.theta, run.kappa);
        write_series_csv(&run.series, &path)?;
        wrote(&path, run.series.tau.len());
    }
    if plot {
        let svg_path = base.with_extension("svg");
        write_svg(&runs_svg(&runs, spec.featured, &format!("preset {id}")), &svg_path)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn parse_list(text: &str, name: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|cell| {
            cell.trim()
                .parse::<f64>()
                .with_context(|| format!("bad {name} value `{}`", cell.trim()))
        })
        .collect()
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let spec = ScenarioSpec {
        id: "sweep".to_string(),
        initial: args.init,
        theta: parse_list(&args.theta_list, "theta")?,
        kappa: parse_list(&args.kappa_list, "kappa")?,
        gamma_d: args.gamma_d,
        tau_max: args.tau_max,
        dtau: args.dtau,
        featured: args.track,
    };
    let runs: Vec<ScenarioRun> = run_scenario(&spec)?;
    let threshold = args.abrupt_threshold.unwrap_or(if args.gamma_d > 0.0 {
        1.0 / args.gamma_d
    } else {
        f64::INFINITY
    });
    let rows = summarize_runs(&runs, spec.initial, args.track, Some(threshold));
    let result = SweepResult {
        initial: spec.initial,
        gamma_d: spec.gamma_d,
        tau_max: spec.tau_max,
        tracked: args.track,
        abrupt_threshold: threshold,
        rows,
    };
    let path = args.out.clone().unwrap_or_else(|| PathBuf::from("sweep.csv"));
    write_sweep_csv(&result, &path)?;
    wrote(&path, result.rows.len());
    if args.plot {
        let svg_path = path.with_extension("svg");
        write_svg(&runs_svg(&runs, args.track, "parameter sweep"), &svg_path)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

pub fn validate(args: &ValidateArgs) -> Result<()> {
    let rows = validate_file(&args.file)?;
    println!("ok: {rows} data rows, all invariants hold");
    Ok(())
}

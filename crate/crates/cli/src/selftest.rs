//! Built-in diagnostics: a handful of analytically checkable runs that
//! exercise the whole stack in a few seconds. Useful after a toolchain or
//! dependency bump, where unit tests may not be available.

use kanesim_core::{
    bloch_to_density, density_to_bloch, figure_scenario, fixed_point, integrate, propagate_exact,
    run_scenario, BlochVector, FixedPointSet, Method, ModelParams,
};

use crate::table::format_g15;

type Check = (&'static str, fn() -> Result<(), String>);

fn state_round_trip() -> Result<(), String> {
    let states = [
        BlochVector::ORIGIN,
        BlochVector::new(0.0, 1.0, 0.0),
        BlochVector::new(0.3, -0.4, 0.5),
        BlochVector::new(-0.57735, 0.57735, 0.57735),
    ];
    for s in states {
        let rho = bloch_to_density(s).map_err(|e| e.to_string())?;
        let back = density_to_bloch(&rho).map_err(|e| e.to_string())?;
        let d = ((back.x - s.x).powi(2) + (back.y - s.y).powi(2) + (back.z - s.z).powi(2)).sqrt();
        if d > 1e-14 {
            return Err(format!("({};{};{}) drifts by {d:e}", s.x, s.y, s.z));
        }
    }
    Ok(())
}

fn transverse_decay_rate() -> Result<(), String> {
    // theta = 0 leaves s_y decoupled from the drive: s_y(tau) = e^{-gamma_d tau}
    let p = ModelParams::new(0.0, 0.3, 0.5).map_err(|e| e.to_string())?;
    let traj = integrate(&p, BlochVector::new(0.0, 1.0, 0.0), 5.0, 1e-3, Method::Rk4)
        .map_err(|e| e.to_string())?;
    for (t, s) in traj.tau.iter().zip(&traj.states) {
        let expect = (-0.5 * t).exp();
        if (s.y - expect).abs() > 1e-9 {
            return Err(format!(
                "s_y({t}) = {} but the closed form gives {expect}",
                s.y
            ));
        }
    }
    Ok(())
}

fn integrator_cross_agreement() -> Result<(), String> {
    let p = ModelParams::new(0.9, 0.7, 0.15).map_err(|e| e.to_string())?;
    let s0 = BlochVector::new(0.2, -0.5, 0.6);
    let runs: Vec<_> = [Method::Rk4, Method::Exact, Method::Oracle]
        .into_iter()
        .map(|m| integrate(&p, s0, 3.0, 1e-3, m))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for a in 0..runs.len() {
        for b in a + 1..runs.len() {
            for (sa, sb) in runs[a].states.iter().zip(&runs[b].states) {
                let d = (sa.x - sb.x).abs().max((sa.y - sb.y).abs()).max((sa.z - sb.z).abs());
                if d > 1e-8 {
                    return Err(format!(
                        "{} and {} disagree by {d:e}",
                        runs[a].method.name(),
                        runs[b].method.name()
                    ));
                }
            }
        }
    }
    Ok(())
}

fn exact_propagator_semigroup() -> Result<(), String> {
    let p = ModelParams::new(1.1, 0.4, 0.25).map_err(|e| e.to_string())?;
    let s0 = BlochVector::new(0.1, 0.3, -0.7);
    let two_hop = propagate_exact(&p, propagate_exact(&p, s0, 2.0).map_err(|e| e.to_string())?, 1.5)
        .map_err(|e| e.to_string())?;
    let one_hop = propagate_exact(&p, s0, 3.5).map_err(|e| e.to_string())?;
    let d = (two_hop.x - one_hop.x)
        .abs()
        .max((two_hop.y - one_hop.y).abs())
        .max((two_hop.z - one_hop.z).abs());
    if d > 1e-12 {
        return Err(format!("U(1.5)U(2) and U(3.5) differ by {d:e}"));
    }
    Ok(())
}

fn stationary_set_classification() -> Result<(), String> {
    let cases = [
        (0.5, 0.1, FixedPointSet::UniqueOrigin),
        (0.5, 0.0, FixedPointSet::DriveAxisLine),
        (0.0, 0.1, FixedPointSet::ZAxisLine),
        (0.0, 0.0, FixedPointSet::WholeBall),
    ];
    for (omega, gamma_d, expect) in cases {
        let p = ModelParams::new(0.2, omega, gamma_d).map_err(|e| e.to_string())?;
        let got = fixed_point(&p);
        if got != expect {
            return Err(format!(
                "omega={omega}, gamma_d={gamma_d}: classified {got:?}, expected {expect:?}"
            ));
        }
    }
    Ok(())
}

fn csv_number_round_trip() -> Result<(), String> {
    let samples = [
        std::f64::consts::LN_2,
        std::f64::consts::PI,
        1.0 / 3.0,
        2.5e-8,
        9.87654321e12,
        -0.9999999999999999,
    ];
    for &x in &samples {
        let text = format_g15(x);
        let back: f64 = text.parse().map_err(|e| format!("`{text}`: {e}"))?;
        let ulp15 = 10f64.powi(x.abs().log10().floor() as i32 - 14);
        if (back - x).abs() > ulp15 {
            return Err(format!("{x} -> `{text}` -> {back}"));
        }
    }
    Ok(())
}

fn preset_observable_ranges() -> Result<(), String> {
    let spec = figure_scenario("1a").map_err(|e| e.to_string())?;
    let runs = run_scenario(&spec).map_err(|e| e.to_string())?;
    let ln2 = std::f64::consts::LN_2;
    for run in &runs {
        let s = &run.series;
        let mut prev = f64::INFINITY;
        for k in 0..s.tau.len() {
            if !(0.5 - 1e-9..=1.0 + 1e-9).contains(&s.purity[k]) {
                return Err(format!("purity {} escapes [1/2, 1]", s.purity[k]));
            }
            if !(-1e-9..=ln2 + 1e-9).contains(&s.entropy[k]) {
                return Err(format!("entropy {} escapes [0, ln 2]", s.entropy[k]));
            }
            if s.bloch_norm[k] > prev + 1e-9 {
                return Err(format!("Bloch norm grows at tau = {}", s.tau[k]));
            }
            prev = s.bloch_norm[k];
        }
    }
    Ok(())
}

/// Run every check, print one line each, and return the failure count.
pub fn run() -> i32 {
    let checks: &[Check] = &[
        ("state round trip", state_round_trip),
        ("transverse decay rate", transverse_decay_rate),
        ("integrator cross agreement", integrator_cross_agreement),
        ("exact propagator semigroup", exact_propagator_semigroup),
        ("stationary set classification", stationary_set_classification),
        ("csv number round trip", csv_number_round_trip),
        ("preset observable ranges", preset_observable_ranges),
    ];
    let mut failures = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("ok      {name}"),
            Err(msg) => {
                failures += 1;
                println!("FAILED  {name}: {msg}");
            }
        }
    }
    if failures == 0 {
        println!("selftest: all checks passed");
    } else {
        println!("selftest: {failures} check(s) failed");
    }
    failures
}

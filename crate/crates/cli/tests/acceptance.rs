//! Acceptance suite: one test per release criterion, each printing a
//! PASS line so the whole gate can be read off a single run.

use std::fs;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use tempfile::TempDir;

use kanesim_core::{
    bloch_to_density, decay_summary, density_trajectory, figure_scenario, integrate, preset_ids,
    run_scenario, saturation_check, series, BlochVector, InitialState, Method, ModelParams,
    SaturationStatus, TrackedObservable,
};

const LN2: f64 = std::f64::consts::LN_2;

#[test]
fn acceptance_1_transverse_decay_matches_the_closed_form() {
    let p = ModelParams::new(0.0, 0.3, 0.5).unwrap();
    let traj = integrate(&p, BlochVector::new(0.0, 1.0, 0.0), 20.0, 1e-3, Method::Rk4).unwrap();
    let s = series(&traj).unwrap();
    for k in 0..s.tau.len() {
        let tau = s.tau[k];
        let sy = (-0.5 * tau).exp();
        assert!(
            (traj.states[k].y - sy).abs() <= 1e-8,
            "s_y({tau}) = {} vs {sy}",
            traj.states[k].y
        );
        let purity = (1.0 + (-tau).exp()) / 2.0;
        assert!(
            (s.purity[k] - purity).abs() <= 1e-8,
            "purity({tau}) = {} vs {purity}",
            s.purity[k]
        );
    }
    println!("ACCEPTANCE 1 (closed-form transverse decay): PASS");
}

#[test]
fn acceptance_2_three_integration_routes_agree_on_random_parameters() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x6b616e65);
    for case in 0..100 {
        let omega = rng.gen_range(0.0..=1.0);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let gamma_d = rng.gen_range(0.0..=1.0);
        let s0 = loop {
            let x = rng.gen_range(-1.0..=1.0);
            let y = rng.gen_range(-1.0..=1.0);
            let z = rng.gen_range(-1.0..=1.0);
            if x * x + y * y + z * z <= 1.0 {
                break BlochVector::new(x, y, z);
            }
        };
        let p = ModelParams::new(theta, omega, gamma_d).unwrap();
        let runs: Vec<_> = [Method::Rk4, Method::Exact, Method::Oracle]
            .into_iter()
            .map(|m| integrate(&p, s0, 10.0, 1e-3, m).unwrap())
            .collect();
        for a in 0..3 {
            for b in a + 1..3 {
                for k in 0..runs[a].states.len() {
                    let (sa, sb) = (runs[a].states[k], runs[b].states[k]);
                    let d = (sa.x - sb.x)
                        .abs()
                        .max((sa.y - sb.y).abs())
                        .max((sa.z - sb.z).abs());
                    assert!(
                        d <= 1e-6,
                        "case {case}: {} vs {} differ by {d:e} at tau = {}",
                        runs[a].method.name(),
                        runs[b].method.name(),
                        runs[a].tau[k]
                    );
                }
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!("ACCEPTANCE 2 (three integration routes agree): PASS");
}

#[test]
fn acceptance_3_every_preset_saturates_at_the_maximally_mixed_state() {
    for id in preset_ids() {
        let mut spec = figure_scenario(id).unwrap();
        // hold every preset for ten dephasing times, whatever its plot window
        spec.tau_max = 10.0 / spec.gamma_d;
        for run in run_scenario(&spec).unwrap() {
            let purity = *run.series.purity.last().unwrap();
            let entropy = *run.series.entropy.last().unwrap();
            assert!(
                (purity - 0.5).abs() <= 0.01,
                "preset {id} theta={} kappa={}: final purity {purity}",
                run.theta,
                run.kappa
            );
            assert!(
                (entropy - LN2).abs() <= 0.01,
                "preset {id}: final entropy {entropy}"
            );
            let report = saturation_check(&run.series);
            assert_eq!(
                report.status,
                SaturationStatus::Pass,
                "preset {id}: {}",
                report.detail
            );
        }
    }
    println!("ACCEPTANCE 3 (long-run saturation at the mixed state): PASS");
}

#[test]
fn acceptance_4_half_times_order_with_theta_and_rates_split_two_to_one() {
    // purity half-times grow monotonically as the field tilts off-axis
    let thetas = [
        0.0,
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_3,
        std::f64::consts::FRAC_PI_2,
    ];
    let frozen = [17.3287, 18.0997, 18.5732, 19.1338];
    let mut half_times = Vec::new();
    for (theta, pin) in thetas.iter().zip(frozen) {
        let p = ModelParams::from_fields(*theta, 0.05, 0.01).unwrap();
        assert!(p.omega > p.gamma_d / 2.0, "drive must stay underdamped");
        let traj = integrate(&p, BlochVector::new(0.0, 1.0, 0.0), 500.0, 0.01, Method::Rk4).unwrap();
        let s = series(&traj).unwrap();
        let ht = decay_summary(&s, TrackedObservable::Purity)
            .half_time
            .expect("purity decays past its midpoint");
        assert!((ht - pin).abs() < 0.02, "theta={theta}: half-time {ht} vs {pin}");
        half_times.push(ht);
    }
    for w in half_times.windows(2) {
        assert!(w[0] < w[1], "half-times out of order: {half_times:?}");
    }

    // on-axis start decays at gamma_d, transverse start at gamma_d / 2
    let mut rates = Vec::new();
    for theta in [0.0, std::f64::consts::FRAC_PI_2] {
        let p = ModelParams::from_fields(theta, 0.05, 0.01).unwrap();
        let traj =
            integrate(&p, BlochVector::new(0.0, 1.0, 0.0), 1000.0, 0.01, Method::Rk4).unwrap();
        let s = series(&traj).unwrap();
        let rate = decay_summary(&s, TrackedObservable::BlochNorm)
            .rate_estimate
            .expect("norm decays");
        rates.push(rate);
    }
    let ratio = rates[0] / rates[1];
    assert!(
        (ratio / 2.0 - 1.0).abs() <= 0.10,
        "rate ratio {ratio} strays from 2 (rates {rates:?})"
    );
    println!("ACCEPTANCE 4 (theta ordering and the 2:1 rate split): PASS");
}

#[test]
fn acceptance_5_purity_plateaus_before_decaying() {
    let p = ModelParams::from_fields(std::f64::consts::FRAC_PI_4, 0.05, 0.01).unwrap();
    let traj = integrate(&p, BlochVector::new(0.0, 0.0, 1.0), 5.0, 1e-3, Method::Rk4).unwrap();
    let s = series(&traj).unwrap();
    let mut min_early = f64::INFINITY;
    for k in 0..s.tau.len() {
        if s.tau[k] <= 2.5 {
            min_early = min_early.min(s.purity[k]);
        }
    }
    assert!(
        min_early >= 0.99,
        "purity dips to {min_early} inside the plateau window"
    );
    assert!(min_early > 0.9999, "plateau shallower than expected: {min_early}");
    println!("ACCEPTANCE 5 (early purity plateau): PASS");
}

#[test]
fn acceptance_6_half_times_shrink_with_stronger_coupling() {
    let spec = figure_scenario("4").unwrap();
    let runs = run_scenario(&spec).unwrap();
    assert_eq!(runs.len(), 3);
    let frozen = [77.452, 62.129, 59.040];
    let mut half_times = Vec::new();
    for (run, pin) in runs.iter().zip(frozen) {
        let ht = decay_summary(&run.series, TrackedObservable::BlochNorm)
            .half_time
            .expect("norm decays past its midpoint");
        assert!(
            (ht - pin).abs() < 0.1,
            "kappa={}: half-time {ht} vs {pin}",
            run.kappa
        );
        half_times.push(ht);
    }
    for w in half_times.windows(2) {
        assert!(w[0] > w[1], "half-times out of order: {half_times:?}");
    }
    println!("ACCEPTANCE 6 (kappa ordering of half-times): PASS");
}

type Extrema = Vec<(f64, f64)>;

fn interior_extrema(tau: &[f64], v: &[f64]) -> (Extrema, Extrema) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for k in 1..v.len() - 1 {
        if v[k] > v[k - 1] && v[k] > v[k + 1] {
            maxima.push((tau[k], v[k]));
        }
        if v[k] < v[k - 1] && v[k] < v[k + 1] {
            minima.push((tau[k], v[k]));
        }
    }
    (maxima, minima)
}

#[test]
fn acceptance_7_fidelity_revives_periodically_without_dephasing() {
    let omega = 0.25;
    let p = ModelParams::new(0.0, omega, 0.0).unwrap();
    let traj = integrate(&p, BlochVector::new(0.0, 0.0, 1.0), 80.0, 1e-3, Method::Rk4).unwrap();
    let s = series(&traj).unwrap();
    let (maxima, minima) = interior_extrema(&s.tau, &s.fidelity);
    assert!(maxima.len() >= 3, "{} revivals found", maxima.len());
    assert!(minima.len() >= 3, "{} dips found", minima.len());
    for &(tau, f) in &maxima {
        assert!(f >= 1.0 - 1e-6, "revival at tau={tau} only reaches {f}");
    }
    for &(tau, f) in &minima {
        assert!(f <= 0.01, "dip at tau={tau} only falls to {f}");
    }
    let mut extrema: Vec<(f64, f64)> = maxima.iter().chain(&minima).copied().collect();
    extrema.sort_by(|a, b| a.0.total_cmp(&b.0));
    let expected = std::f64::consts::PI / omega;
    for w in extrema.windows(2) {
        let gap = w[1].0 - w[0].0;
        assert!(
            (gap / expected - 1.0).abs() <= 0.01,
            "extrema spacing {gap} vs {expected}"
        );
    }

    // with dephasing switched on the revivals lose height monotonically
    let p = ModelParams::new(0.0, omega, 0.1).unwrap();
    let traj = integrate(&p, BlochVector::new(0.0, 0.0, 1.0), 80.0, 1e-3, Method::Rk4).unwrap();
    let s = series(&traj).unwrap();
    let (maxima, _) = interior_extrema(&s.tau, &s.fidelity);
    assert!(maxima.len() >= 3);
    let frozen = [0.63866, 0.53846, 0.51066];
    for (k, &(_, f)) in maxima.iter().take(3).enumerate() {
        assert!((f - frozen[k]).abs() < 1e-3, "revival {k} height {f}");
    }
    for w in maxima.windows(2) {
        assert!(w[0].1 > w[1].1, "revival heights fail to decrease");
    }
    println!("ACCEPTANCE 7 (periodic fidelity revivals): PASS");
}

#[test]
fn acceptance_8_observables_stay_physical_on_every_preset() {
    for id in preset_ids() {
        let spec = figure_scenario(id).unwrap();
        for run in run_scenario(&spec).unwrap() {
            let s = &run.series;
            let mut prev = f64::INFINITY;
            for k in 0..s.tau.len() {
                assert!(
                    (0.5 - 1e-9..=1.0 + 1e-9).contains(&s.purity[k]),
                    "preset {id}: purity {} at tau {}",
                    s.purity[k],
                    s.tau[k]
                );
                assert!(
                    (-1e-9..=LN2 + 1e-9).contains(&s.entropy[k]),
                    "preset {id}: entropy {} at tau {}",
                    s.entropy[k],
                    s.tau[k]
                );
                assert!(
                    s.bloch_norm[k] <= prev + 1e-9,
                    "preset {id}: norm grows at tau {}",
                    s.tau[k]
                );
                prev = s.bloch_norm[k];
            }
        }
    }

    // the density-matrix route preserves trace and hermiticity step by step
    let p = ModelParams::from_fields(std::f64::consts::FRAC_PI_4, 0.05, 0.01).unwrap();
    let rho0 = bloch_to_density(InitialState::Y.bloch()).unwrap();
    let (_, rhos) = density_trajectory(&p, &rho0, 100.0, 1e-3).unwrap();
    for rho in &rhos {
        assert!(rho.trace_defect() < 1e-10);
        assert!(rho.hermiticity_defect() < 1e-10);
    }
    println!("ACCEPTANCE 8 (physical ranges and density invariants): PASS");
}

#[test]
fn acceptance_9_cli_output_is_byte_deterministic() {
    let bin = env!("CARGO_BIN_EXE_kanesim");
    let dirs = [TempDir::new().unwrap(), TempDir::new().unwrap()];
    let mut outputs = Vec::new();
    for dir in &dirs {
        let status = Command::new(bin)
            .args(["figure", "--id", "1a", "--out", "fig.csv"])
            .current_dir(dir.path())
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(fs::read(dir.path().join("fig.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "repeat runs differ");

    let status = Command::new(bin)
        .args(["validate", "fig.csv"])
        .current_dir(dirs[0].path())
        .status()
        .unwrap();
    assert!(status.success(), "generated table fails validation");
    println!("ACCEPTANCE 9 (byte-deterministic CLI output): PASS");
}

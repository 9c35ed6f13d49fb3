//! CSV rendering, parsing and invariant validation.
//!
//! Numbers are rendered with 15 significant digits in the shortest of
//! decimal and scientific notation (trailing zeros trimmed), so tables are
//! byte-deterministic and re-parse to within one unit in the 15th
//! significant digit. Rows use `\n` endings and the file ends with one.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use kanesim_core::{ObservableSeries, SweepResult};

pub const CSV_HEADER: &str = "tau,sx,sy,sz,purity,entropy,bloch_norm,fidelity";

pub const SWEEP_HEADER: &str = "kappa,theta,initial_state,final_purity,final_entropy,\
min_fidelity,half_time,rate_estimate,plateau_end,classification";

/// Render with 15 significant digits: decimal notation while the exponent
/// lies in [-4, 15), scientific notation outside, trailing zeros trimmed.
pub fn format_g15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let rendered = format!("{:.14e}", x.abs());
    let (mantissa, exp_text) = rendered.split_once('e').expect("exponential form");
    let exp: i32 = exp_text.parse().expect("numeric exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    debug_assert_eq!(digits.len(), 15);
    let body = if (-4..15).contains(&exp) {
        decimal_form(&digits, exp)
    } else {
        format!("{}e{}", trim_zeros(&insert_point(&digits, 1)), exp)
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

/// Place a decimal point after `k` leading digits.
fn insert_point(digits: &str, k: usize) -> String {
    if k >= digits.len() {
        return digits.to_string();
    }
    format!("{}.{}", &digits[..k], &digits[k..])
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn decimal_form(digits: &str, exp: i32) -> String {
    if exp < 0 {
        let mut out = String::from("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(digits);
        trim_zeros(&out)
    } else {
        trim_zeros(&insert_point(digits, exp as usize + 1))
    }
}

/// One sample row in column order.
fn series_row(s: &ObservableSeries, k: usize) -> [f64; 8] {
    [
        s.tau[k],
        s.states[k].x,
        s.states[k].y,
        s.states[k].z,
        s.purity[k],
        s.entropy[k],
        s.bloch_norm[k],
        s.fidelity[k],
    ]
}

pub fn render_series_csv(s: &ObservableSeries) -> String {
    let mut out = String::with_capacity(64 * (s.tau.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for k in 0..s.tau.len() {
        for (i, v) in series_row(s, k).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_g15(*v));
        }
        out.push('\n');
    }
    out
}

pub fn write_series_csv(s: &ObservableSeries, path: &Path) -> Result<()> {
    fs::write(path, render_series_csv(s))
        .with_context(|| format!("writing {}", path.display()))
}

fn optional(v: Option<f64>) -> String {
    v.map(format_g15).unwrap_or_default()
}

/// Sweep rows with a `#` metadata preamble recording the fixed parameters
/// and conventions of the grid.
pub fn render_sweep_csv(r: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# initial = {}, gamma_d = {}, tau_max = {}, tracked = {}, abrupt_threshold = {}\n",
        r.initial.label(),
        format_g15(r.gamma_d),
        format_g15(r.tau_max),
        r.tracked.name(),
        format_g15(r.abrupt_threshold),
    ));
    out.push_str("# drive convention: omega = kappa / 2\n");
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in &r.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            format_g15(row.kappa),
            format_g15(row.theta),
            row.initial.label(),
            format_g15(row.final_purity),
            format_g15(row.final_entropy),
            format_g15(row.min_fidelity),
            optional(row.half_time),
            optional(row.rate_estimate),
            optional(row.plateau_end),
            row.classification.name(),
        ));
    }
    out
}

pub fn write_sweep_csv(r: &SweepResult, path: &Path) -> Result<()> {
    fs::write(path, render_sweep_csv(r)).with_context(|| format!("writing {}", path.display()))
}

/// A parsed observable table.
pub struct CsvTable {
    pub rows: Vec<[f64; 8]>,
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines();
    let header = lines.next().context("empty file")?;
    ensure!(
        header == CSV_HEADER,
        "unexpected header `{header}` (expected `{CSV_HEADER}`)"
    );
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        ensure!(
            cells.len() == 8,
            "line {}: expected 8 fields, found {}",
            idx + 2,
            cells.len()
        );
        let mut row = [0.0; 8];
        for (slot, cell) in row.iter_mut().zip(&cells) {
            *slot = cell
                .parse::<f64>()
                .with_context(|| format!("line {}: bad number `{cell}`", idx + 2))?;
        }
        rows.push(row);
    }
    ensure!(!rows.is_empty(), "no data rows");
    Ok(CsvTable { rows })
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Re-derive every redundant column and check the state invariants. Returns
/// one message per violation; an empty list means the table is consistent.
pub fn validate_rows(table: &CsvTable) -> Vec<String> {
    const TOL: f64 = 1e-9;
    let ln2 = std::f64::consts::LN_2;
    let mut bad = Vec::new();
    let mut prev_tau = f64::NEG_INFINITY;
    let mut prev_norm = f64::INFINITY;
    for (idx, row) in table.rows.iter().enumerate() {
        let line = idx + 2;
        let [tau, sx, sy, sz, purity, entropy, norm_col, fidelity] = *row;
        if idx == 0 {
            if tau.abs() > TOL {
                bad.push(format!("line {line}: first sample is at tau = {tau}, not 0"));
            }
            if (fidelity - 1.0).abs() > TOL {
                bad.push(format!(
                    "line {line}: fidelity against the initial state starts at {fidelity}, not 1"
                ));
            }
        }
        if tau <= prev_tau {
            bad.push(format!("line {line}: tau = {tau} does not increase"));
        }
        prev_tau = tau;

        let n = (sx * sx + sy * sy + sz * sz).sqrt();
        if n > 1.0 + TOL {
            bad.push(format!("line {line}: state norm {n} lies outside the unit ball"));
        } else {
            let m = n.min(1.0);
            let p = (1.0 + m * m) / 2.0;
            let e = -(xlnx((1.0 + m) / 2.0) + xlnx((1.0 - m) / 2.0));
            if (p - purity).abs() > TOL {
                bad.push(format!(
                    "line {line}: purity column {purity} disagrees with the state ({p})"
                ));
            }
            if (e - entropy).abs() > TOL {
                bad.push(format!(
                    "line {line}: entropy column {entropy} disagrees with the state ({e})"
                ));
            }
        }
        if (n - norm_col).abs() > TOL {
            bad.push(format!(
                "line {line}: bloch_norm column {norm_col} disagrees with the state ({n})"
            ));
        }
        if n > prev_norm + TOL {
            bad.push(format!(
                "line {line}: Bloch norm grows from {prev_norm} to {n}"
            ));
        }
        prev_norm = n;

        if !(0.5 - TOL..=1.0 + TOL).contains(&purity) {
            bad.push(format!("line {line}: purity {purity} outside [1/2, 1]"));
        }
        if !(-TOL..=ln2 + TOL).contains(&entropy) {
            bad.push(format!("line {line}: entropy {entropy} outside [0, ln 2]"));
        }
        if !(-TOL..=1.0 + TOL).contains(&fidelity) {
            bad.push(format!("line {line}: fidelity {fidelity} outside [0, 1]"));
        }
    }
    bad
}

/// Parse a file and validate it, reporting violations as the error text.
pub fn validate_file(path: &Path) -> Result<usize> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let table = parse_csv(&text)?;
    let violations = validate_rows(&table);
    if violations.is_empty() {
        return Ok(table.rows.len());
    }
    for v in &violations {
        eprintln!("{v}");
    }
    bail!(
        "{} invariant violation(s) in {}",
        violations.len(),
        path.display()
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use kanesim_core::{integrate, series, BlochVector, Method, ModelParams};

    #[test]
    fn formatting_landmarks() {
        assert_eq!(format_g15(0.0), "0");
        assert_eq!(format_g15(-0.0), "0");
        assert_eq!(format_g15(1.0), "1");
        assert_eq!(format_g15(-1.0), "-1");
        assert_eq!(format_g15(0.5), "0.5");
        assert_eq!(format_g15(std::f64::consts::LN_2), "0.693147180559945");
        assert_eq!(format_g15(123456.0), "123456");
        assert_eq!(format_g15(1e-5), "1e-5");
        assert_eq!(format_g15(1.5e16), "1.5e16");
        assert_eq!(format_g15(1e15), "1e15");
        assert_eq!(format_g15(999999999999999.9), "1e15");
        assert_eq!(format_g15(-2.5e-8), "-2.5e-8");
        assert_eq!(format_g15(0.1 + 0.2), "0.3");
        assert_eq!(format_g15(0.0001), "0.0001");
        assert_eq!(format_g15(12345.6789), "12345.6789");
    }

    #[test]
    fn formatting_round_trips_to_the_15th_digit() {
        let samples = [
            std::f64::consts::LN_2,
            1.0 / 3.0,
            std::f64::consts::PI,
            2.718281828459045e-3,
            9.87654321e12,
            -4.4501e-101,
            1.234567890123456e200,
            5.0e-5,
            0.9999999999999999,
        ];
        for &x in &samples {
            let text = format_g15(x);
            let back: f64 = text.parse().unwrap();
            let ulp15 = 10f64.powi(x.abs().log10().floor() as i32 - 14);
            assert!(
                (back - x).abs() <= ulp15,
                "{x} -> {text} -> {back} differs by more than {ulp15}"
            );
            // rendering is idempotent: the re-parsed value prints identically
            assert_eq!(format_g15(back), text);
        }
    }

    fn short_series() -> ObservableSeries {
        let p = ModelParams::new(0.3, 0.8, 0.2).unwrap();
        let traj = integrate(&p, BlochVector::new(0.0, 1.0, 0.0), 1.0, 0.01, Method::Rk4).unwrap();
        series(&traj).unwrap()
    }

    #[test]
    fn series_csv_shape() {
        let s = short_series();
        let text = render_series_csv(&s);
        assert!(text.starts_with("tau,sx,sy,sz,purity,entropy,bloch_norm,fidelity\n"));
        assert!(text.ends_with('\n'));
        assert!(!text.contains("\r\n"));
        assert_eq!(text.lines().count(), s.tau.len() + 1);
        // the first data row is the initial state
        let first = text.lines().nth(1).unwrap();
        assert_eq!(first, "0,0,1,0,1,0,1,1");
    }

    #[test]
    fn maximally_mixed_row_rendering() {
        // a stationary center-of-ball state renders with the pinned digits
        let p = ModelParams::new(0.0, 0.5, 0.1).unwrap();
        let traj = integrate(&p, BlochVector::ORIGIN, 0.5, 0.5, Method::Rk4).unwrap();
        let s = series(&traj).unwrap();
        let text = render_series_csv(&s);
        let first = text.lines().nth(1).unwrap();
        assert_eq!(first, "0,0,0,0,0.5,0.693147180559945,0,1");
    }

    #[test]
    fn parse_and_validate_round_trip() {
        let s = short_series();
        let text = render_series_csv(&s);
        let table = parse_csv(&text).unwrap();
        assert_eq!(table.rows.len(), s.tau.len());
        let violations = validate_rows(&table);
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn validation_catches_tampering() {
        let s = short_series();
        let text = render_series_csv(&s);

        // corrupt the purity column of one row
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        let mut cells: Vec<String> = lines[5].split(',').map(str::to_string).collect();
        cells[4] = "0.8".to_string();
        lines[5] = cells.join(",");
        let table = parse_csv(&(lines.join("\n") + "\n")).unwrap();
        let violations = validate_rows(&table);
        assert!(violations.iter().any(|v| v.starts_with("line 6:") && v.contains("purity")));

        // break monotonicity of tau
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        let swapped = lines[3].clone();
        lines[3] = lines[4].clone();
        lines[4] = swapped;
        let table = parse_csv(&(lines.join("\n") + "\n")).unwrap();
        assert!(validate_rows(&table).iter().any(|v| v.contains("does not increase")));

        // structural damage: wrong header, short row, bad number
        assert!(parse_csv("tau,sx\n0,0\n").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3\n")).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n0,0,0,0,0.5,xyz,0,1\n")).is_err());
        assert!(parse_csv(CSV_HEADER).is_err());
    }

    #[test]
    fn sweep_csv_shape() {
        use kanesim_core::{sweep, InitialState, ScenarioSpec, TrackedObservable};
        let spec = ScenarioSpec {
            id: "sweep".to_string(),
            initial: InitialState::Z,
            theta: vec![0.0, 0.5],
            kappa: vec![0.05],
            gamma_d: 0.1,
            tau_max: 150.0,
            dtau: 0.05,
            featured: TrackedObservable::BlochNorm,
        };
        let result = sweep(&spec).unwrap();
        let text = render_sweep_csv(&result);
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# initial = z"));
        assert!(lines.next().unwrap().contains("omega = kappa / 2"));
        assert_eq!(lines.next().unwrap(), SWEEP_HEADER);
        let data: Vec<&str> = lines.collect();
        assert_eq!(data.len(), 2);
        for row in data {
            assert_eq!(row.split(',').count(), 10);
            let class = row.rsplit(',').next().unwrap();
            assert!(class == "abrupt" || class == "gradual");
        }
    }
}

//! Report emission: sweep CSV, verdict JSON, plot data, and the errata table
//! for printed-formula discrepancies.
//!
//! All binary64 values are written in scientific notation with 17 significant
//! digits so that files round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::potential::Parity;
use crate::quasimode::FCoeffs;
use crate::scaling::{ScalingFit, SweepColumn, SweepRow, Verdict};
use crate::{Error, Result};

/// 17 significant digits: exact binary64 round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(Error::Io)?;
    }
    std::fs::write(path, content).map_err(Error::Io)
}

pub const SWEEP_COLUMNS: [SweepColumn; 6] = [
    SweepColumn::Datum,
    SweepColumn::Numerator,
    SweepColumn::ForcingModel,
    SweepColumn::ForcingRest,
    SweepColumn::ForcingTotal,
    SweepColumn::Ratio,
];

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut out = String::new();
    out.push_str(
        "R,datum_l2,w_mixed,forcing_model,forcing_rest,forcing_total,ratio,\
         datum_err,w_err,forcing_model_err,forcing_rest_err,forcing_total_err,converged\n",
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(row.r),
            fmt_f64(row.datum.value),
            fmt_f64(row.numerator.value),
            fmt_f64(row.forcing_model.value),
            fmt_f64(row.forcing_rest.value),
            fmt_f64(row.forcing_total.value),
            fmt_f64(row.ratio),
            fmt_f64(row.datum.rel_error_estimate),
            fmt_f64(row.numerator.rel_error_estimate),
            fmt_f64(row.forcing_model.rel_error_estimate),
            fmt_f64(row.forcing_rest.rel_error_estimate),
            fmt_f64(row.forcing_total.rel_error_estimate),
            row.converged()
        );
    }
    write_file(path, &out)
}

/// One `plot_<label>.dat` per sweep column: two whitespace-separated columns
/// `R value`, consumable by any plotting tool.
pub fn write_plot_data(dir: &Path, rows: &[SweepRow]) -> Result<()> {
    for col in SWEEP_COLUMNS {
        let mut out = String::new();
        for row in rows {
            let _ = writeln!(out, "{} {}", fmt_f64(row.r), fmt_f64(col.extract(row)));
        }
        write_file(&dir.join(format!("plot_{}.dat", col.label())), &out)?;
    }
    Ok(())
}

/// Render the verdict plus fitted-vs-predicted table as JSON. `config_echo`
/// is the resolved flat configuration; embedding it makes every report
/// self-describing.
pub fn verdict_json(
    config_echo: &str,
    seed: u64,
    verdict: &Verdict,
    fits: &[(SweepColumn, ScalingFit)],
) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"config\": \"{}\",", json_escape(config_echo));
    let _ = writeln!(out, "  \"seed\": {seed},");
    let _ = writeln!(out, "  \"overall\": \"{}\",", verdict.overall);
    out.push_str("  \"criteria\": [\n");
    for (i, c) in verdict.criteria.iter().enumerate() {
        let _ = write!(
            out,
            "    {{\"name\": \"{}\", \"status\": \"{}\", \"measured\": {}, \
             \"expected\": {}, \"tolerance\": {}, \"note\": \"{}\"}}",
            c.name,
            c.status,
            fmt_f64(c.measured),
            fmt_f64(c.expected),
            fmt_f64(c.tolerance),
            json_escape(&c.note)
        );
        out.push_str(if i + 1 < verdict.criteria.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ],\n");

    let e = &verdict.exponents;
    out.push_str("  \"exponents\": {\n");
    let mut rat_field = |name: &str, r: num_rational::Ratio<i64>, last: bool| {
        let _ = writeln!(
            out,
            "    \"{name}\": {{\"exact\": \"{r}\", \"value\": {}}}{}",
            fmt_f64(*r.numer() as f64 / *r.denom() as f64),
            if last { "" } else { "," }
        );
    };
    rat_field("f_r_slope", e.f_r_slope, false);
    rat_field("w_r_spatial_slope", e.w_r_spatial_slope, false);
    rat_field("forcing_bound_slope", e.forcing_bound_slope, false);
    rat_field("ratio_wf_slope", e.ratio_wf_slope, false);
    rat_field("kappa", e.kappa, false);
    rat_field("delta", e.delta, false);
    rat_field("beta_threshold", e.beta_threshold, false);
    rat_field("gamma_window_lo", e.gamma_window.0, false);
    rat_field("gamma_window_hi", e.gamma_window.1, true);
    out.push_str("  },\n");
    let _ = writeln!(
        out,
        "  \"delta_argmin\": [{}],",
        e.delta_argmin
            .iter()
            .map(|(label, value)| format!(
                "{{\"term\": \"{}\", \"value\": \"{}\"}}",
                json_escape(label),
                value
            ))
            .collect::<Vec<_>>()
            .join(", ")
    );

    out.push_str("  \"fits\": [\n");
    for (i, (col, fit)) in fits.iter().enumerate() {
        let _ = write!(
            out,
            "    {{\"column\": \"{}\", \"slope\": {}, \"intercept\": {}, \
             \"max_abs_residual\": {}, \"samples\": {}}}",
            col.label(),
            fmt_f64(fit.slope),
            fmt_f64(fit.intercept),
            fmt_f64(fit.max_abs_residual),
            fit.sample_count
        );
        out.push_str(if i + 1 < fits.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn write_verdict_json(
    path: &Path,
    config_echo: &str,
    seed: u64,
    verdict: &Verdict,
    fits: &[(SweepColumn, ScalingFit)],
) -> Result<()> {
    write_file(path, &verdict_json(config_echo, seed, verdict, fits))
}

/// Reconstruct sweep rows from a previously written `sweep.csv` (the
/// `report` subcommand re-fits without re-running the quadrature).
pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let text = std::fs::read_to_string(path).map_err(Error::Io)?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 13 {
            return Err(Error::Config(format!(
                "{}:{}: expected 13 CSV fields, got {}",
                path.display(),
                i + 1,
                fields.len()
            )));
        }
        let num = |j: usize| -> Result<f64> {
            fields[j].trim().parse().map_err(|_| {
                Error::Config(format!(
                    "{}:{}: field {} is not a number: '{}'",
                    path.display(),
                    i + 1,
                    j,
                    fields[j]
                ))
            })
        };
        let converged = fields[12].trim() == "true";
        let norm = |value: f64, err: f64| crate::mixednorm::NormResult {
            value,
            rel_error_estimate: err,
            nodes_used: (0, 0, 0),
            converged,
        };
        rows.push(SweepRow {
            r: num(0)?,
            datum: norm(num(1)?, num(7)?),
            numerator: norm(num(2)?, num(8)?),
            forcing_model: norm(num(3)?, num(9)?),
            forcing_rest: norm(num(4)?, num(10)?),
            forcing_total: norm(num(5)?, num(11)?),
            ratio: num(6)?,
        });
    }
    Ok(rows)
}

/// Printed-vs-derived source-term coefficients. Entries appear only where
/// the two disagree; an empty list means the printed formulas check out.
pub fn errata_json(alpha: f64) -> String {
    let mut entries = Vec::new();
    for parity in [Parity::Odd, Parity::Even] {
        let printed = FCoeffs::printed(parity, alpha);
        let derived = FCoeffs::derived(parity, alpha);
        let terms = [
            ("t2_v", printed.t2_v, derived.t2_v),
            ("it_v", printed.it_v, derived.it_v),
            ("it_g", printed.it_g, derived.it_g),
            ("g_const", printed.g_const, derived.g_const),
            ("h_const", printed.h_const, derived.h_const),
        ];
        for (name, p, d) in terms {
            if (p - d).abs() > 1e-12 * (1.0 + p.abs().max(d.abs())) {
                entries.push(format!(
                    "    {{\"parity\": \"{parity:?}\", \"coefficient\": \"{name}\", \
                     \"printed\": {}, \"derived\": {}}}",
                    fmt_f64(p),
                    fmt_f64(d)
                ));
            }
        }
    }
    format!(
        "{{\n  \"alpha\": {},\n  \"discrepancies\": [\n{}\n  ]\n}}\n",
        fmt_f64(alpha),
        entries.join(",\n")
    )
}

pub fn write_errata_json(path: &Path, alpha: f64) -> Result<()> {
    write_file(path, &errata_json(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixednorm::NormResult;

    fn fake_rows() -> Vec<SweepRow> {
        [32.0, 128.0, 512.0, 2048.0, 8192.0]
            .iter()
            .map(|&r| {
                let n = |v: f64| NormResult {
                    value: v,
                    rel_error_estimate: 1e-9,
                    nodes_used: (64, 64, 32),
                    converged: true,
                };
                SweepRow {
                    r,
                    datum: n(r.powf(1.15)),
                    numerator: n(r.powf(1.2)),
                    forcing_model: n(r.powf(0.1)),
                    forcing_rest: n(r.powf(0.05)),
                    forcing_total: n(r.powf(0.1)),
                    ratio: r.powf(0.07),
                }
            })
            .collect()
    }

    #[test]
    fn f64_formatting_round_trips() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17, 0.1] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn csv_and_plots_round_trip() {
        let dir = std::env::temp_dir().join("magcx-report-test");
        let rows = fake_rows();
        write_sweep_csv(&dir.join("sweep.csv"), &rows).unwrap();
        let text = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
        assert_eq!(text.lines().count(), rows.len() + 1);
        let first_data: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(first_data.len(), 13);
        assert_eq!(first_data[1].parse::<f64>().unwrap(), rows[0].datum.value);

        write_plot_data(&dir, &rows).unwrap();
        let plot = std::fs::read_to_string(dir.join("plot_ratio.dat")).unwrap();
        let last: Vec<&str> = plot.lines().last().unwrap().split_whitespace().collect();
        assert_eq!(last[1].parse::<f64>().unwrap(), rows[4].ratio);
    }

    #[test]
    fn errata_flags_only_the_even_g_constant() {
        let text = errata_json(1.5);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let list = v["discrepancies"].as_array().unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0]["parity"], "Even");
        assert_eq!(list[0]["coefficient"], "g_const");
        let printed = list[0]["printed"].as_f64().unwrap();
        let derived = list[0]["derived"].as_f64().unwrap();
        assert_eq!(printed, -derived);
    }

    #[test]
    fn verdict_json_is_valid_json() {
        use crate::scaling::*;
        use num_rational::Ratio;
        let params = RationalParams::with_default_beta(
            3,
            Ratio::new(3, 2),
            Ratio::new(4, 5),
        )
        .unwrap();
        let pair = AdmissiblePair::from_q(3, Ratio::new(6, 1)).unwrap();
        let rows = fake_rows();
        let v = verdict(&params, &pair, &rows, FitTolerances::default()).unwrap();
        let fits = vec![(
            SweepColumn::Datum,
            fit_exponent(&rows, SweepColumn::Datum).unwrap(),
        )];
        let text = verdict_json("n = 3\nseed = 42\n", 42, &v, &fits);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["seed"], 42);
        assert!(parsed["criteria"].as_array().unwrap().len() >= 3);
        assert_eq!(parsed["exponents"]["delta"]["exact"], "δ".replace('δ', &v.exponents.delta.to_string()));
    }
}

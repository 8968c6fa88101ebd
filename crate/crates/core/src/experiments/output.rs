use std::fmt::Write as _;
use std::io::Write;

use crate::entanglement::EntanglementReport;
use crate::nonreciprocity::BidirectionalReport;
use crate::{Error, Result};

use super::{SweepResult, SweepRow};

pub const CSV_HEADER: [&str; 16] = [
    "sweep_var",
    "value",
    "stable_pos",
    "stable_neg",
    "E_ab_pos",
    "E_ab_neg",
    "E_am_pos",
    "E_am_neg",
    "E_mb_pos",
    "E_mb_neg",
    "Rmin_pos",
    "Rmin_neg",
    "C_ab",
    "C_am",
    "C_mb",
    "C_R",
];

/// 17 significant digits, scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn csv_record(var: &str, row: &SweepRow) -> Vec<String> {
    let stable =
        |r: &Option<EntanglementReport>| r.map(|r| r.stable.to_string()).unwrap_or_default();
    let measure = |r: &Option<EntanglementReport>,
                   pick: fn(&crate::EntanglementMeasures) -> f64| {
        opt(r.and_then(|r| r.measures).map(|m| pick(&m)))
    };
    let (f, b) = (&row.forward, &row.backward);
    vec![
        var.to_string(),
        format_float(row.value),
        stable(f),
        stable(b),
        measure(f, |m| m.e_ab),
        measure(b, |m| m.e_ab),
        measure(f, |m| m.e_am),
        measure(b, |m| m.e_am),
        measure(f, |m| m.e_mb),
        measure(b, |m| m.e_mb),
        measure(f, |m| m.r_min),
        measure(b, |m| m.r_min),
        opt(row.ratios.c_ab),
        opt(row.ratios.c_am),
        opt(row.ratios.c_mb),
        opt(row.ratios.c_r),
    ]
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| Error::Io(format!("writing CSV: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        let var = self.spec.variable.column_name();
        for row in &self.rows {
            w.write_record(csv_record(var, row)).map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Io(format!("writing CSV: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

fn render_direction(out: &mut String, label: &str, r: &EntanglementReport) {
    let _ = writeln!(out, "[{label}]");
    let _ = writeln!(out, "K = {}", format_float(r.kerr));
    let _ = writeln!(out, "stable = {}", r.stable);
    let _ = writeln!(
        out,
        "spectral_abscissa = {}",
        format_float(r.spectral_abscissa)
    );
    if let Some(res) = r.lyapunov_residual {
        let _ = writeln!(out, "lyapunov_residual = {}", format_float(res));
    }
    if let Some(margin) = r.physicality_margin {
        let _ = writeln!(out, "physicality_margin = {}", format_float(margin));
    }
    if let Some(m) = r.measures {
        let _ = writeln!(out, "E_ab = {}", format_float(m.e_ab));
        let _ = writeln!(out, "E_am = {}", format_float(m.e_am));
        let _ = writeln!(out, "E_mb = {}", format_float(m.e_mb));
        let _ = writeln!(out, "R_min = {}", format_float(m.r_min));
        if m.monogamy_violation {
            let _ = writeln!(out, "monogamy_violation = true");
        }
    }
}

/// Plain `key = value` rendering of a single-point report.
pub fn render_report(report: &BidirectionalReport) -> String {
    let mut out = String::new();
    let p = &report.params;
    let _ = writeln!(out, "[params]");
    for (k, v) in [
        ("omega_b", p.omega_b),
        ("kappa_a", p.kappa_a),
        ("gamma_m", p.gamma_m),
        ("gamma_b", p.gamma_b),
        ("g_m", p.g_m),
        ("g_b", p.g_b),
        ("K", p.kerr),
        ("Delta_m", p.delta_m),
        ("Delta_a_tilde", p.delta_a_tilde),
        ("temperature", p.temperature),
    ] {
        let _ = writeln!(out, "{k} = {}", format_float(v));
    }
    render_direction(&mut out, "positive", &report.forward);
    render_direction(&mut out, "negative", &report.backward);
    let _ = writeln!(out, "[contrast]");
    for (k, v) in ["C_ab", "C_am", "C_mb", "C_R"]
        .iter()
        .zip(report.ratios.as_array())
    {
        let _ = writeln!(out, "{k} = {}", opt(v));
    }
    if let Some(d) = &report.diagnostic {
        let _ = writeln!(out, "diagnostic = {d}");
    }
    out
}

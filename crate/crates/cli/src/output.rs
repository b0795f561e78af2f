//! CSV, JSON and gnuplot emitters for sweep results.

use std::io::{Read, Write};

use crate::error::{CliError, Result};
use crate::sweep::{SweepResultRow, SweepVariable};

pub const CSV_HEADER: [&str; 13] = [
    "variant",
    "sweep_value",
    "analytic_pl",
    "sim_pl",
    "sim_pl_ci95",
    "analytic_pi0",
    "sim_pi0",
    "pf",
    "pd",
    "delta",
    "pi_idle",
    "slots",
    "seed",
];

/// Significant digits of every emitted float.
pub const SIG_DIGITS: usize = 9;

/// Formats `x` like C's `%.{digits}g`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds `x` to `SIG_DIGITS` significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

fn row_fields(r: &SweepResultRow) -> [String; 13] {
    let g = |x: f64| format_g(x, SIG_DIGITS);
    [
        r.variant.clone(),
        g(r.sweep_value),
        g(r.analytic_pl),
        g(r.sim_pl),
        g(r.sim_pl_ci95),
        g(r.analytic_pi0),
        g(r.sim_pi0),
        g(r.pf),
        g(r.pd),
        g(r.delta),
        g(r.pi_idle),
        r.slots.to_string(),
        r.seed.to_string(),
    ]
}

/// Writes rows as CSV with a fixed header and LF line endings.
pub fn emit_csv<W: Write>(rows: &[SweepResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let err = |e: csv::Error| CliError::Output(format!("CSV write failed: {e}"));
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        w.write_record(row_fields(r)).map_err(err)?;
    }
    w.flush()
        .map_err(|e| CliError::Output(format!("CSV write failed: {e}")))
}

/// Reads rows written by [`emit_csv`].
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<SweepResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r
        .headers()
        .map_err(|e| CliError::Output(format!("CSV read failed: {e}")))?;
    if headers.iter().ne(CSV_HEADER) {
        return Err(CliError::Output(format!(
            "unexpected CSV header: {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| CliError::Output(format!("CSV read failed: {e}"))))
        .collect()
}

/// Writes rows as a pretty-printed JSON array, floats rounded like the CSV.
pub fn emit_json<W: Write>(rows: &[SweepResultRow], out: W) -> Result<()> {
    let rounded: Vec<SweepResultRow> = rows
        .iter()
        .map(|r| SweepResultRow {
            variant: r.variant.clone(),
            sweep_value: round_sig(r.sweep_value),
            analytic_pl: round_sig(r.analytic_pl),
            sim_pl: round_sig(r.sim_pl),
            sim_pl_ci95: round_sig(r.sim_pl_ci95),
            analytic_pi0: round_sig(r.analytic_pi0),
            sim_pi0: round_sig(r.sim_pi0),
            pf: round_sig(r.pf),
            pd: round_sig(r.pd),
            delta: round_sig(r.delta),
            pi_idle: round_sig(r.pi_idle),
            slots: r.slots,
            seed: r.seed,
        })
        .collect();
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &rounded)
        .map_err(|e| CliError::Output(format!("JSON write failed: {e}")))?;
    out.write_all(b"\n")
        .map_err(|e| CliError::Output(format!("JSON write failed: {e}")))
}

/// Gnuplot script plotting analytic curves and simulated points with 95%
/// error bars, one colour per variant. `csv_name` is resolved relative to the
/// script's working directory.
pub fn emit_plot_script(
    variable: SweepVariable,
    variants: &[String],
    csv_name: &str,
    title: &str,
) -> String {
    let mut s = String::new();
    s.push_str("# Packet-loss probability versus sweep variable.\n");
    s.push_str("# Uncomment a terminal to write a file instead of opening a window:\n");
    s.push_str("# set terminal pngcairo size 900,600\n");
    s.push_str(&format!("# set output '{}.png'\n", csv_name.trim_end_matches(".csv")));
    s.push_str("set termoption noenhanced\n");
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set title '{}'\n", escape(title)));
    s.push_str(&format!("set xlabel '{}'\n", variable.axis_label()));
    s.push_str("set ylabel 'packet loss probability'\n");
    s.push_str("set grid\n");
    s.push_str("set key outside right\n");
    s.push_str(&format!("data = '{}'\n", escape(csv_name)));
    s.push_str("plot \\\n");
    let mut parts = Vec::new();
    for (i, v) in variants.iter().enumerate() {
        let v = escape(v);
        let c = i + 1;
        parts.push(format!(
            "  data using 2:(strcol(1) eq '{v}' ? $3 : 1/0) with lines lc {c} lw 2 title '{v} analytic'"
        ));
        parts.push(format!(
            "  data using 2:(strcol(1) eq '{v}' ? $4 : 1/0):5 with yerrorbars lc {c} pt 7 title '{v} simulated'"
        ));
    }
    s.push_str(&parts.join(", \\\n"));
    s.push('\n');
    s
}

fn escape(s: &str) -> String {
    s.replace('\'', "''")
}

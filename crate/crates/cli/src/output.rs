use std::io::{self, Write};

use leggett_core::hvt::HvtRow;
use leggett_core::inequality::{InequalityReport, SweepRow};
use serde::Serialize;

/// Column order of sweep and hvt output.
pub const SWEEP_HEADER: &str =
    "delta,av_a,av_b,av_ab_paper,av_ab_oracle,lower,upper,margin_lower,margin_upper,satisfied";

pub const CHECK_HEADER: &str =
    "av_a,av_b,av_ab,lower,upper,margin_lower,margin_upper,satisfied,tolerance";

/// One output row. For quantum sweeps `av_ab_paper` is the closed form and
/// `av_ab_oracle` the full trace; for hvt runs they are the Monte Carlo
/// estimate and the model's exact value. Bounds and margins belong to
/// `av_ab_paper`; `satisfied` requires both values to pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Record {
    pub delta: f64,
    pub av_a: f64,
    pub av_b: f64,
    pub av_ab_paper: f64,
    pub av_ab_oracle: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    pub margin_lower: f64,
    pub margin_upper: f64,
    pub satisfied: bool,
}

impl From<&SweepRow> for Record {
    fn from(row: &SweepRow) -> Self {
        let r = &row.report_paper;
        Record {
            delta: row.delta,
            av_a: row.av_a,
            av_b: row.av_b,
            av_ab_paper: row.av_ab_paper,
            av_ab_oracle: Some(row.av_ab_oracle),
            lower: r.lower,
            upper: r.upper,
            margin_lower: r.margin_lower,
            margin_upper: r.margin_upper,
            satisfied: row.satisfied(),
        }
    }
}

impl From<&HvtRow> for Record {
    fn from(row: &HvtRow) -> Self {
        let t = &row.estimate.triple;
        let r = &row.report;
        Record {
            delta: row.delta,
            av_a: t.av_a,
            av_b: t.av_b,
            av_ab_paper: t.av_ab,
            av_ab_oracle: row.exact.map(|e| e.av_ab),
            lower: r.lower,
            upper: r.upper,
            margin_lower: r.margin_lower,
            margin_upper: r.margin_upper,
            satisfied: r.satisfied,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckRecord {
    pub av_a: f64,
    pub av_b: f64,
    pub av_ab: f64,
    pub lower: f64,
    pub upper: f64,
    pub margin_lower: f64,
    pub margin_upper: f64,
    pub satisfied: bool,
    pub tolerance: f64,
}

impl CheckRecord {
    pub fn new(av_a: f64, av_b: f64, r: &InequalityReport) -> Self {
        CheckRecord {
            av_a,
            av_b,
            av_ab: r.value,
            lower: r.lower,
            upper: r.upper,
            margin_lower: r.margin_lower,
            margin_upper: r.margin_upper,
            satisfied: r.satisfied,
            tolerance: r.tolerance,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn write_records_csv(w: &mut dyn Write, records: &[Record]) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in records {
        let oracle = r.av_ab_oracle.map(fmt_float).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_float(r.delta),
            fmt_float(r.av_a),
            fmt_float(r.av_b),
            fmt_float(r.av_ab_paper),
            oracle,
            fmt_float(r.lower),
            fmt_float(r.upper),
            fmt_float(r.margin_lower),
            fmt_float(r.margin_upper),
            r.satisfied
        )?;
    }
    Ok(())
}

pub fn write_check_csv(w: &mut dyn Write, r: &CheckRecord) -> io::Result<()> {
    writeln!(w, "{CHECK_HEADER}")?;
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{}",
        fmt_float(r.av_a),
        fmt_float(r.av_b),
        fmt_float(r.av_ab),
        fmt_float(r.lower),
        fmt_float(r.upper),
        fmt_float(r.margin_lower),
        fmt_float(r.margin_upper),
        r.satisfied,
        fmt_float(r.tolerance)
    )
}

pub fn write_json<T: Serialize + ?Sized>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

//! Report output: a human table, JSON (one object per run) and CSV (one row
//! per theorem/q pair). Machine formats print every float with 17
//! significant digits, so values read back bit for bit.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::bounds::BoundReport;
use crate::run::{CellOutcome, RunReport, SweepReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

pub const CSV_HEADER: [&str; 11] = [
    "expression",
    "a",
    "b",
    "phi",
    "theorem",
    "q",
    "bound",
    "actual",
    "slack",
    "dominant",
    "certificate_status",
];

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON whose floats are printed by [`fmt_f64`].
struct SciFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> io::Result<()> {
    let mut ser =
        serde_json::Serializer::with_formatter(&mut w, SciFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(io::Error::from)?;
    w.write_all(b"\n")
}

fn csv_row(run: &RunReport, row: &BoundReport) -> [String; 11] {
    let cfg = &run.config;
    [
        cfg.expression.clone(),
        fmt_f64(cfg.a),
        fmt_f64(cfg.b),
        fmt_f64(cfg.phi),
        row.theorem.label().to_string(),
        row.q.map(fmt_f64).unwrap_or_default(),
        fmt_f64(row.bound),
        fmt_f64(row.actual),
        fmt_f64(row.slack),
        row.dominant.to_string(),
        row.certificate_status.label().to_string(),
    ]
}

/// CSV rows for the given runs; failed sweep cells produce no rows.
pub fn write_csv<'a, W: Write>(
    runs: impl IntoIterator<Item = &'a RunReport>,
    w: W,
) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for run in runs {
        for row in run
            .bounds
            .iter()
            .chain(run.classical.as_ref().map(|c| &c.report))
        {
            out.write_record(csv_row(run, row))?;
        }
    }
    out.flush()
}

fn write_run_table<W: Write>(r: &RunReport, w: &mut W) -> io::Result<()> {
    let cfg = &r.config;
    writeln!(
        w,
        "f(x) = {}   a = {}   b = {}   phi = {}",
        cfg.expression, cfg.a, cfg.b, cfg.phi
    )?;
    let id = &r.identity;
    writeln!(
        w,
        "identity: simpson = {:.12e}{:+.12e}i   mean = {:.12e}{:+.12e}i",
        id.simpson_value.re, id.simpson_value.im, id.path_mean.re, id.path_mean.im
    )?;
    writeln!(
        w,
        "          lhs = {:.12e}{:+.12e}i   rhs = {:.12e}{:+.12e}i   residual = {:.3e} [{}]",
        id.lhs.re,
        id.lhs.im,
        id.rhs.re,
        id.rhs.im,
        id.residual,
        if r.identity_ok { "ok" } else { "FAILED" }
    )?;
    writeln!(w, "certificates:")?;
    for c in &r.certificates {
        write!(
            w,
            "  q = {:<6} {:<9} worst margin {:.6e} ({} samples)",
            c.q, c.status, c.worst_margin, c.sample_count
        )?;
        match c.violation_t {
            Some(t) => writeln!(w, " at t = {t}")?,
            None => writeln!(w)?,
        }
    }
    writeln!(
        w,
        "{:<10} {:>6} {:>14} {:>14} {:>15} {:>9} {:>12}",
        "theorem", "q", "bound", "actual", "slack", "dominant", "certificate"
    )?;
    let rows = r
        .bounds
        .iter()
        .chain(r.classical.as_ref().map(|c| &c.report));
    for row in rows {
        let q = row.q.map(|q| q.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            w,
            "{:<10} {:>6} {:>14.6e} {:>14.6e} {:>15.6e} {:>9} {:>12}",
            row.theorem.label(),
            q,
            row.bound,
            row.actual,
            row.slack,
            if row.dominant { "yes" } else { "NO" },
            row.certificate_status.label()
        )?;
    }
    if let Some(c) = &r.classical {
        writeln!(
            w,
            "  (classical bound uses an estimated |f''''| max of {:.6e} over {} samples)",
            c.m4, c.m4_samples
        )?;
    }
    match &r.verdict {
        Verdict::AllDominant => writeln!(w, "verdict: all-dominant")?,
        Verdict::ViolationsListed { violations } => {
            let hard = violations.iter().filter(|v| v.is_hard_violation()).count();
            writeln!(
                w,
                "verdict: {} violation(s), {} under a verified certificate",
                violations.len(),
                hard
            )?;
        }
    }
    Ok(())
}

fn write_sweep_table<W: Write>(s: &SweepReport, w: &mut W) -> io::Result<()> {
    for (i, run) in s.runs.iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        match run {
            CellOutcome::Report(r) => write_run_table(r, w)?,
            CellOutcome::Failed { config, error, .. } => writeln!(
                w,
                "f(x) = {}   a = {}   b = {}   phi = {}   q = {:?}\n  FAILED: {error}",
                config.expression, config.a, config.b, config.phi, config.q_list
            )?,
        }
    }
    let sum = &s.summary;
    writeln!(
        w,
        "\nsummary: {} cells, {} failed, {} identity failures, max residual {:.3e}",
        sum.cells, sum.failed_cells, sum.identity_failures, sum.max_residual
    )?;
    for (theorem, slack) in &sum.min_slack {
        writeln!(w, "  min slack {theorem:<10} {slack:.6e}")?;
    }
    writeln!(
        w,
        "  violations: {} under verified certificates, {} informational",
        sum.violations, sum.informational_violations
    )
}

/// Writes a single run report.
pub fn emit_run<W: Write>(r: &RunReport, format: OutputFormat, mut w: W) -> io::Result<()> {
    match format {
        OutputFormat::Table => write_run_table(r, &mut w),
        OutputFormat::Json => write_json(r, w),
        OutputFormat::Csv => write_csv([r], w),
    }
}

/// Writes a sweep. JSON carries `runs` and `summary`; CSV has one row per
/// theorem/q pair across all successful cells.
pub fn emit_sweep<W: Write>(s: &SweepReport, format: OutputFormat, mut w: W) -> io::Result<()> {
    match format {
        OutputFormat::Table => write_sweep_table(s, &mut w),
        OutputFormat::Json => write_json(s, w),
        OutputFormat::Csv => write_csv(s.runs.iter().filter_map(CellOutcome::report), w),
    }
}

/// Opens `path` for writing, or standard output when `None`.
pub fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

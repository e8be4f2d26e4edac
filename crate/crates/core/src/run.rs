//! The verification pipeline behind the `verify` and `sweep` commands.
//!
//! One run parses the expression, evaluates the identity, certifies the
//! convexity hypothesis for every requested `q`, and compares each bound
//! against the measured Simpson error.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{
    bound_for, classical_bound, estimate_m4, BoundInputs, BoundReport, CertificateStatus, Theorem,
};
use crate::convexity::{
    certify_with_derivative, ConvexityCertificate, DEFAULT_CERT_TOL, DEFAULT_SAMPLES,
};
use crate::domain::PhiInterval;
use crate::error::Error;
use crate::expr::parse;
use crate::identity::{identity_residual, IdentityReport, DEFAULT_IDENTITY_TOL};
use crate::quad::{QuadOptions, DEFAULT_BUDGET, DEFAULT_TOL};

pub const DEFAULT_Q_LIST: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 5.0];
pub const DEFAULT_M4_SAMPLES: usize = 1001;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("math error: {0}")]
    Math(Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Math(_) => 3,
            RunError::Io(_) => 4,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => RunError::Config(p.to_string()),
            Error::Interval(msg) => RunError::Config(msg),
            other => RunError::Math(other),
        }
    }
}

/// Parses an angle in radians: a decimal, or one of `pi/6`, `pi/4`,
/// `pi/3`, `pi/2` (and `0`).
pub fn parse_phi(text: &str) -> Result<f64, String> {
    let value = match text.trim() {
        "0" => 0.0,
        "pi/6" => FRAC_PI_6,
        "pi/4" => FRAC_PI_4,
        "pi/3" => FRAC_PI_3,
        "pi/2" => FRAC_PI_2,
        other => other
            .parse::<f64>()
            .map_err(|_| format!("cannot read angle `{other}`"))?,
    };
    if !(0.0..=FRAC_PI_2).contains(&value) {
        return Err(format!("phi must lie in [0, pi/2], got {value}"));
    }
    Ok(value)
}

/// Numeric settings shared by every run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub oracle_tol: f64,
    pub identity_tol: f64,
    pub cert_samples: usize,
    pub budget: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            oracle_tol: DEFAULT_TOL,
            identity_tol: DEFAULT_IDENTITY_TOL,
            cert_samples: DEFAULT_SAMPLES,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Settings {
    fn validate(&self) -> Result<(), RunError> {
        if !(self.oracle_tol > 0.0 && self.oracle_tol.is_finite()) {
            return Err(RunError::Config(format!(
                "oracle tolerance must be positive, got {}",
                self.oracle_tol
            )));
        }
        if !(self.identity_tol > 0.0 && self.identity_tol.is_finite()) {
            return Err(RunError::Config(format!(
                "identity tolerance must be positive, got {}",
                self.identity_tol
            )));
        }
        if self.cert_samples < 3 {
            return Err(RunError::Config(format!(
                "certificate needs at least 3 samples, got {}",
                self.cert_samples
            )));
        }
        Ok(())
    }
}

fn validate_q_list(q_list: &[f64]) -> Result<(), RunError> {
    if q_list.is_empty() {
        return Err(RunError::Config("q list is empty".into()));
    }
    if let Some(q) = q_list.iter().find(|q| !(q.is_finite() && **q >= 1.0)) {
        return Err(RunError::Config(format!("every q must be >= 1, got {q}")));
    }
    Ok(())
}

/// Everything one `verify` run needs. Echoed verbatim into the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub expression: String,
    pub a: f64,
    pub b: f64,
    pub phi: f64,
    pub q_list: Vec<f64>,
    #[serde(flatten)]
    pub settings: Settings,
}

impl RunConfig {
    pub fn new(expression: impl Into<String>, a: f64, b: f64, phi: f64, q_list: Vec<f64>) -> Self {
        Self {
            expression: expression.into(),
            a,
            b,
            phi,
            q_list,
            settings: Settings::default(),
        }
    }

    pub fn validate(&self) -> Result<PhiInterval, RunError> {
        validate_q_list(&self.q_list)?;
        self.settings.validate()?;
        Ok(PhiInterval::new(self.a, self.b, self.phi)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalEntry {
    /// Sampled maximum of `|f⁗|`; a lower estimate of the supremum.
    pub m4: f64,
    pub m4_kind: &'static str,
    pub m4_samples: usize,
    #[serde(flatten)]
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    AllDominant,
    ViolationsListed { violations: Vec<BoundReport> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub identity: IdentityReport,
    pub identity_ok: bool,
    /// One certificate per requested `q`, plus `q = 1` (the hypothesis of
    /// the `T31` bound) when it was not requested. Sorted by `q`.
    pub certificates: Vec<ConvexityCertificate>,
    /// Rows ordered by `q`, then theorem.
    pub bounds: Vec<BoundReport>,
    pub classical: Option<ClassicalEntry>,
    pub verdict: Verdict,
}

impl RunReport {
    /// Rows that failed dominance while the hypothesis was certified.
    pub fn hard_violations(&self) -> impl Iterator<Item = &BoundReport> {
        self.bounds.iter().filter(|r| r.is_hard_violation())
    }

    /// `true` iff the identity held and every certified bound dominated.
    pub fn passed(&self) -> bool {
        self.identity_ok && self.hard_violations().next().is_none()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn certificate(&self, q: f64) -> Option<&ConvexityCertificate> {
        self.certificates.iter().find(|c| c.q == q)
    }
}

/// Runs the whole pipeline for one configuration.
pub fn cmd_verify(config: &RunConfig) -> Result<RunReport, RunError> {
    let iv = config.validate()?;
    let s = &config.settings;
    let f = parse(&config.expression).map_err(Error::from)?;
    let f_prime = f.differentiate();
    let opts = QuadOptions {
        tol: s.oracle_tol,
        budget: s.budget,
    };

    let identity = identity_residual(&f, &iv, &opts)?;
    let actual = identity.actual();

    let mut qs: Vec<f64> = config.q_list.clone();
    qs.sort_by(f64::total_cmp);
    qs.dedup();
    let mut cert_qs = qs.clone();
    if !cert_qs.contains(&1.0) {
        cert_qs.insert(0, 1.0);
    }
    let certificates = cert_qs
        .iter()
        .map(|&q| certify_with_derivative(&f_prime, &iv, q, s.cert_samples, DEFAULT_CERT_TOL))
        .collect::<Result<Vec<_>, _>>()?;
    let status_at = |q: f64| {
        certificates
            .iter()
            .find(|c| c.q == q)
            .map_or(CertificateStatus::Skipped, |c| c.status)
    };

    let mut bounds = Vec::new();
    for &q in &qs {
        let inputs = BoundInputs::from_function(&f_prime, &iv, q)?;
        for theorem in Theorem::CONVEXITY {
            if !theorem.applies(q) {
                continue;
            }
            let bound = bound_for(theorem, &inputs)?;
            // T31 rests on the q = 1 hypothesis whatever row it sits in.
            let status = if theorem == Theorem::T31 {
                status_at(1.0)
            } else {
                status_at(q)
            };
            bounds.push(BoundReport::new(theorem, Some(q), bound, actual, status));
        }
    }

    let classical = if iv.phi() == 0.0 {
        let m4 = estimate_m4(&f, &iv, DEFAULT_M4_SAMPLES)?;
        Some(ClassicalEntry {
            m4,
            m4_kind: "estimated",
            m4_samples: DEFAULT_M4_SAMPLES,
            report: BoundReport::new(
                Theorem::Classical,
                None,
                classical_bound(m4, iv.length()),
                actual,
                CertificateStatus::Skipped,
            ),
        })
    } else {
        None
    };

    let violations: Vec<BoundReport> = bounds
        .iter()
        .chain(classical.as_ref().map(|c| &c.report))
        .filter(|r| !r.dominant)
        .copied()
        .collect();
    let verdict = if violations.is_empty() {
        Verdict::AllDominant
    } else {
        Verdict::ViolationsListed { violations }
    };

    Ok(RunReport {
        config: config.clone(),
        identity_ok: identity.holds(s.identity_tol),
        identity,
        certificates,
        bounds,
        classical,
        verdict,
    })
}

/// Cartesian grid for `sweep`. Each cell runs with a single `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub expressions: Vec<String>,
    /// `(a, b)` pairs.
    pub intervals: Vec<(f64, f64)>,
    pub phis: Vec<f64>,
    pub qs: Vec<f64>,
    pub settings: Settings,
}

impl SweepGrid {
    /// Pairs every `a` with every `b`.
    pub fn interval_product(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
        a.iter()
            .flat_map(|&a| b.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.expressions.is_empty() {
            return Err(RunError::Config("no expressions given".into()));
        }
        if self.intervals.is_empty() {
            return Err(RunError::Config("no intervals given".into()));
        }
        if self.phis.is_empty() {
            return Err(RunError::Config("phi list is empty".into()));
        }
        validate_q_list(&self.qs)?;
        self.settings.validate()
    }

    /// Cells in output order: expression, interval, phi, q.
    pub fn cells(&self) -> Vec<RunConfig> {
        let mut out = Vec::new();
        for e in &self.expressions {
            for &(a, b) in &self.intervals {
                for &phi in &self.phis {
                    for &q in &self.qs {
                        out.push(RunConfig {
                            expression: e.clone(),
                            a,
                            b,
                            phi,
                            q_list: vec![q],
                            settings: self.settings,
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CellOutcome {
    Report(Box<RunReport>),
    Failed {
        config: RunConfig,
        error: String,
        exit_code: i32,
    },
}

impl CellOutcome {
    pub fn report(&self) -> Option<&RunReport> {
        match self {
            CellOutcome::Report(r) => Some(r),
            CellOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub cells: usize,
    pub failed_cells: usize,
    pub identity_failures: usize,
    pub max_residual: f64,
    /// Smallest slack per theorem label over all successful cells.
    pub min_slack: BTreeMap<String, f64>,
    /// Dominance failures under a verified certificate.
    pub violations: usize,
    /// Dominance failures under a violated or skipped certificate.
    pub informational_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub runs: Vec<CellOutcome>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.violations > 0 || self.summary.identity_failures > 0 {
            1
        } else {
            0
        }
    }
}

/// Runs every grid cell; failing cells are recorded, not fatal.
pub fn cmd_sweep(grid: &SweepGrid) -> Result<SweepReport, RunError> {
    grid.validate()?;
    let runs: Vec<CellOutcome> = grid
        .cells()
        .into_par_iter()
        .map(|cfg| match cmd_verify(&cfg) {
            Ok(r) => CellOutcome::Report(Box::new(r)),
            Err(e) => CellOutcome::Failed {
                exit_code: e.exit_code(),
                error: e.to_string(),
                config: cfg,
            },
        })
        .collect();
    let summary = summarize(&runs);
    Ok(SweepReport { runs, summary })
}

fn summarize(runs: &[CellOutcome]) -> SweepSummary {
    let mut summary = SweepSummary {
        cells: runs.len(),
        failed_cells: 0,
        identity_failures: 0,
        max_residual: 0.0,
        min_slack: BTreeMap::new(),
        violations: 0,
        informational_violations: 0,
    };
    for run in runs {
        let Some(r) = run.report() else {
            summary.failed_cells += 1;
            continue;
        };
        if !r.identity_ok {
            summary.identity_failures += 1;
        }
        summary.max_residual = summary.max_residual.max(r.identity.residual);
        for row in r
            .bounds
            .iter()
            .chain(r.classical.as_ref().map(|c| &c.report))
        {
            let slot = summary
                .min_slack
                .entry(row.theorem.label().to_string())
                .or_insert(f64::INFINITY);
            *slot = slot.min(row.slack);
            if row.is_hard_violation() {
                summary.violations += 1;
            } else if !row.dominant {
                summary.informational_violations += 1;
            }
        }
    }
    summary
}

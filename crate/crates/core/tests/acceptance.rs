//! Exit criteria. Run with `cargo test --test acceptance -- --nocapture` to
//! see one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;

use phisimpson::bounds::{
    bound_t31, bound_t34, classical_bound, estimate_m4, kernel_moment, BoundInputs,
    CertificateStatus,
};
use phisimpson::convexity::{certify_phi_convexity, DEFAULT_SAMPLES};
use phisimpson::domain::PhiInterval;
use phisimpson::emit::{emit_sweep, OutputFormat};
use phisimpson::expr::parse;
use phisimpson::identity::identity_residual;
use phisimpson::quad::{integrate_range, QuadOptions};
use phisimpson::run::{cmd_sweep, cmd_verify, RunConfig, Settings, SweepGrid};

const CORPUS: [&str; 6] = ["x^2", "x^3", "x^4", "exp(x)", "sin(x)", "log(x+2)"];
const PHIS: [f64; 4] = [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_2];
const INTERVALS: [(f64, f64); 3] = [(0.0, 1.0), (-1.0, 2.0), (1.0, 3.0)];
const QS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 5.0];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn real_moment(weight: impl Fn(f64) -> f64, breakpoints: &[f64]) -> f64 {
    let opts = QuadOptions::with_tol(1e-13);
    integrate_range(
        |t| Ok(Complex64::new(weight(t), 0.0)),
        0.0,
        0.5,
        breakpoints,
        &opts,
    )
    .unwrap()
    .value
    .re
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let opts = QuadOptions::default();
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    let mut failures = Vec::new();
    for text in CORPUS {
        let f = parse(text).unwrap();
        for phi in PHIS {
            for (a, b) in INTERVALS {
                let iv = PhiInterval::new(a, b, phi).unwrap();
                let rep = identity_residual(&f, &iv, &opts).unwrap();
                cells += 1;
                worst = worst.max(rep.residual);
                if rep.residual > 1e-8 {
                    failures.push(format!(
                        "{text} phi={phi} [{a},{b}] residual={:e}",
                        rep.residual
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && cells == 72 && elapsed < 10.0,
        format!("{cells} cells, max residual {worst:.3e}, {elapsed:.2}s {failures:?}"),
    )
}

fn dominance_suite() -> Outcome {
    let mut cells = 0;
    let mut verified_cells = 0;
    let mut checked_rows = 0;
    let mut violations = Vec::new();
    for text in CORPUS {
        for phi in PHIS {
            for (a, b) in INTERVALS {
                for q in QS {
                    let report = cmd_verify(&RunConfig::new(text, a, b, phi, vec![q])).unwrap();
                    cells += 1;
                    if report.certificate(q).unwrap().is_verified() {
                        verified_cells += 1;
                    }
                    for row in &report.bounds {
                        if row.certificate_status != CertificateStatus::Verified {
                            continue;
                        }
                        assert!(row.theorem.applies(q));
                        checked_rows += 1;
                        if row.actual.is_nan() || row.actual > row.bound + 1e-12 {
                            violations.push(format!(
                                "{text} phi={phi} [{a},{b}] q={q} {}: {} > {}",
                                row.theorem, row.actual, row.bound
                            ));
                        }
                    }
                }
            }
        }
    }
    outcome(
        violations.is_empty() && verified_cells >= 150,
        format!(
            "{cells} cells ({verified_cells} with verified certificate), {checked_rows} rows checked, {} violations {violations:?}",
            violations.len()
        ),
    )
}

fn constant_checks() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = kernel_moment(1.0) == 5.0 / 72.0 && kernel_moment(2.0) == 1.0 / 72.0;
    notes.push(format!(
        "m(1)-5/72={:e} m(2)-1/72={:e}",
        kernel_moment(1.0) - 5.0 / 72.0,
        kernel_moment(2.0) - 1.0 / 72.0
    ));
    for p in [1.0, 1.5, 2.0, 3.0, 5.0, 10.0] {
        let numeric = real_moment(|t| (t - 1.0 / 6.0).abs().powf(p), &[1.0 / 6.0]);
        let diff = (numeric - kernel_moment(p)).abs();
        ok &= diff < 1e-10;
        notes.push(format!("p={p}: {diff:.1e}"));
    }
    let left = real_moment(|t| (t - 1.0 / 6.0).abs() * (1.0 - t), &[1.0 / 6.0]);
    let right = real_moment(|t| (t - 1.0 / 6.0).abs() * t, &[1.0 / 6.0]);
    let (dl, dr) = ((left - 61.0 / 1296.0).abs(), (right - 29.0 / 1296.0).abs());
    ok &= dl < 1e-10 && dr < 1e-10;
    notes.push(format!("61/1296: {dl:.1e}, 29/1296: {dr:.1e}"));
    outcome(ok, notes.join("; "))
}

fn reduction_checks() -> Outcome {
    let mut worst_gap: f64 = 0.0;
    for (a_deriv, b_deriv, len) in [
        (0.0, 4.0, 1.0),
        (1.0, std::f64::consts::E, 1.0),
        (12.0, 3.0, 3.0),
        (0.3, 0.0, 2.0),
    ] {
        let inp = BoundInputs::new(a_deriv, b_deriv, len, 1.0).unwrap();
        worst_gap = worst_gap.max((bound_t34(&inp) - bound_t31(&inp)).abs());
    }
    let opts = QuadOptions::default();
    let mut worst_imag: f64 = 0.0;
    for text in CORPUS {
        let f = parse(text).unwrap();
        for (a, b) in INTERVALS {
            let iv = PhiInterval::new(a, b, 0.0).unwrap();
            worst_imag = worst_imag.max(identity_residual(&f, &iv, &opts).unwrap().max_imaginary());
        }
    }
    outcome(
        worst_gap < 1e-14 && worst_imag < 1e-12,
        format!(
            "|T34(q=1) - T31| max {worst_gap:.1e}; max imaginary part at phi=0 {worst_imag:.1e}"
        ),
    )
}

fn classical_tightness() -> Outcome {
    let f = parse("x^4").unwrap();
    let iv = PhiInterval::new(0.0, 1.0, 0.0).unwrap();
    let actual = identity_residual(&f, &iv, &QuadOptions::default())
        .unwrap()
        .actual();
    let m4 = estimate_m4(&f, &iv, 1001).unwrap();
    let bound = classical_bound(m4, iv.length());
    let ok = (actual - 1.0 / 120.0).abs() < 1e-10
        && (bound - 1.0 / 120.0).abs() < 1e-10
        && (bound - actual).abs() < 1e-10;
    outcome(ok, format!("actual {actual:.17e}, bound {bound:.17e}"))
}

fn exactness() -> Outcome {
    let polys = [
        "1",
        "x",
        "x^2",
        "x^3",
        "2*x^3 - 3*x^2 + x - 5",
        "(x - 1)^3",
        "-0.5*x^3 + 4*x",
    ];
    let opts = QuadOptions::default();
    let mut worst: f64 = 0.0;
    for text in polys {
        let f = parse(text).unwrap();
        for (a, b) in INTERVALS {
            let iv = PhiInterval::new(a, b, 0.0).unwrap();
            worst = worst.max(identity_residual(&f, &iv, &opts).unwrap().actual());
        }
    }
    outcome(
        worst < 1e-10,
        format!("max |lhs| {worst:.1e} over {} cells", polys.len() * 3),
    )
}

fn violation_detection() -> Outcome {
    let f = parse("x - x^3/3").unwrap();
    let iv = PhiInterval::new(-1.0, 1.0, 0.0).unwrap();
    let cert = certify_phi_convexity(&f, &iv, 1.0, DEFAULT_SAMPLES).unwrap();
    let ok = cert.status == CertificateStatus::Violated
        && cert.violation_t.is_some()
        && cert.worst_margin <= -0.5;
    outcome(
        ok,
        format!(
            "status {}, worst margin {} at t = {:?}",
            cert.status, cert.worst_margin, cert.violation_t
        ),
    )
}

fn sweep_grid() -> SweepGrid {
    SweepGrid {
        expressions: CORPUS.iter().map(|s| s.to_string()).collect(),
        intervals: INTERVALS.to_vec(),
        phis: PHIS.to_vec(),
        qs: vec![1.0, 2.0, 5.0],
        settings: Settings::default(),
    }
}

fn determinism() -> Outcome {
    let render = |format| {
        let report = cmd_sweep(&sweep_grid()).unwrap();
        let mut buf = Vec::new();
        emit_sweep(&report, format, &mut buf).unwrap();
        buf
    };
    let json_same = render(OutputFormat::Json) == render(OutputFormat::Json);
    let csv_same = render(OutputFormat::Csv) == render(OutputFormat::Csv);

    let cli = || {
        Command::new(env!("CARGO_BIN_EXE_phisimpson"))
            .args([
                "sweep",
                "--f",
                "exp(x)",
                "--f",
                "log(x+2)",
                "--interval",
                "0:1,-1:2",
                "--phi",
                "0,pi/4,pi/2",
                "--q",
                "1,2",
                "--format",
                "json",
            ])
            .output()
            .unwrap()
    };
    let (first, second) = (cli(), cli());
    let cli_same =
        first.status.success() && first.stdout == second.stdout && !first.stdout.is_empty();
    outcome(
        json_same && csv_same && cli_same,
        format!("library json {json_same}, library csv {csv_same}, cli json {cli_same}"),
    )
}

#[test]
fn acceptance_suite() {
    let criteria: [Criterion; 8] = [
        ("1 identity suite", identity_suite),
        ("2 dominance suite", dominance_suite),
        ("3 constant checks", constant_checks),
        ("4 reduction checks", reduction_checks),
        ("5 classical tightness", classical_tightness),
        ("6 exactness", exactness),
        ("7 violation detection", violation_detection),
        ("8 determinism", determinism),
    ];
    let mut failed = Vec::new();
    println!();
    for (name, check) in criteria {
        let result = check();
        println!(
            "[{}] {name}: {}",
            if result.passed { "PASS" } else { "FAIL" },
            result.detail
        );
        if !result.passed {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

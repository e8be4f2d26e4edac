//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands on
//! a real parameter interval, plus the contour integral along a
//! [`PhiInterval`].
//!
//! The interval is first split at the caller's breakpoints. The subinterval
//! with the largest error estimate `|K15 − G7|` is bisected until the summed
//! estimate drops to the tolerance or the evaluation budget runs out. Nodes
//! are interior, so integrands may jump at breakpoints without being
//! evaluated there. Subintervals are summed in left-to-right order, so
//! results are reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::PhiInterval;
use crate::error::{EvalError, QuadError};
use crate::expr::Expr;

pub const DEFAULT_TOL: f64 = 1e-11;
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute tolerance on the summed error estimate.
    pub tol: f64,
    /// Maximum number of integrand evaluations.
    pub budget: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

// Kronrod abscissae (non-negative half, descending) and weights; every
// second abscissa from index 1 is a 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];
const RULE_EVALS: usize = 15;

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Largest error first; ties broken by position for determinism.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn gauss_kronrod<F>(g: &F, lo: f64, hi: f64) -> Result<Segment, QuadError>
where
    F: Fn(f64) -> Result<Complex64, EvalError>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |t: f64| -> Result<Complex64, QuadError> {
        let v = g(t)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { t })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = eval(center - dx)? + eval(center + dx)?;
        kronrod += sum * WGK[j];
        if j % 2 == 1 {
            gauss += sum * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Ok(Segment {
        lo,
        hi,
        value,
        error,
    })
}

/// Integrates a fallible integrand over `[lo, hi]`, pre-splitting at every
/// breakpoint strictly inside the interval.
pub fn integrate_range<F>(
    g: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    opts: &QuadOptions,
) -> Result<QuadratureResult, QuadError>
where
    F: Fn(f64) -> Result<Complex64, EvalError>,
{
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(QuadError::InvalidRequest(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidRequest(format!("bad range [{lo}, {hi}]")));
    }
    let mut cuts = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(lo);
    for &bp in breakpoints {
        if !(bp > lo && bp < hi) {
            return Err(QuadError::InvalidRequest(format!(
                "breakpoint {bp} not inside ({lo}, {hi})"
            )));
        }
        cuts.push(bp);
    }
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut evaluations = 0;
    let mut heap = BinaryHeap::new();
    for w in cuts.windows(2) {
        if evaluations + RULE_EVALS > opts.budget {
            return Err(budget_error(&heap, opts.budget));
        }
        evaluations += RULE_EVALS;
        heap.push(gauss_kronrod(&g, w[0], w[1])?);
    }

    let mut running_error: f64 = heap.iter().map(|s| s.error).sum();
    loop {
        if running_error <= opts.tol {
            // Recompute to shed drift from the running update.
            running_error = heap.iter().map(|s| s.error).sum();
        }
        if running_error <= opts.tol {
            let (value, error_estimate) = ordered_sum(&heap);
            return Ok(QuadratureResult {
                value,
                error_estimate,
                evaluations,
            });
        }
        if evaluations + 2 * RULE_EVALS > opts.budget {
            return Err(budget_error(&heap, opts.budget));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Cannot bisect further in double precision.
            heap.push(worst);
            return Err(budget_error(&heap, opts.budget));
        }
        evaluations += 2 * RULE_EVALS;
        let left = gauss_kronrod(&g, worst.lo, mid)?;
        let right = gauss_kronrod(&g, mid, worst.hi)?;
        running_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

fn ordered_sum(heap: &BinaryHeap<Segment>) -> (Complex64, f64) {
    let mut segments: Vec<&Segment> = heap.iter().collect();
    segments.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    segments
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), s| {
            (v + s.value, e + s.error)
        })
}

fn budget_error(heap: &BinaryHeap<Segment>, budget: usize) -> QuadError {
    let (best, error_estimate) = ordered_sum(heap);
    QuadError::BudgetExceeded {
        budget,
        best_re: best.re,
        best_im: best.im,
        error_estimate,
    }
}

/// `∫₀¹ g(t) dt` for a fallible integrand.
pub fn try_integrate_01<F>(
    g: F,
    breakpoints: &[f64],
    opts: &QuadOptions,
) -> Result<QuadratureResult, QuadError>
where
    F: Fn(f64) -> Result<Complex64, EvalError>,
{
    integrate_range(g, 0.0, 1.0, breakpoints, opts)
}

/// `∫₀¹ g(t) dt` with default budget and the given tolerance.
pub fn integrate_01<F>(g: F, tol: f64, breakpoints: &[f64]) -> Result<QuadratureResult, QuadError>
where
    F: Fn(f64) -> Complex64,
{
    try_integrate_01(|t| Ok(g(t)), breakpoints, &QuadOptions::with_tol(tol))
}

/// `∫ f(x) dx` along the segment, computed as `e^{iφ}(b−a) ∫₀¹ f(path(t)) dt`.
///
/// The error estimate is scaled by the chord length.
pub fn contour_integral(
    f: &Expr,
    iv: &PhiInterval,
    opts: &QuadOptions,
) -> Result<QuadratureResult, QuadError> {
    let chord = iv.chord();
    // Tolerance is stated for the contour integral itself.
    let inner = QuadOptions {
        tol: opts.tol / iv.length(),
        budget: opts.budget,
    };
    let r = try_integrate_01(|t| f.eval(iv.point_unchecked(t)), &[], &inner)?;
    Ok(QuadratureResult {
        value: chord * r.value,
        error_estimate: r.error_estimate * iv.length(),
        evaluations: r.evaluations,
    })
}

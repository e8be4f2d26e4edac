//! Closed-form Simpson error bounds for functions whose `|f′|^q` lies below
//! its chord along the rotated path, and the classical fourth-derivative
//! bound.
//!
//! Every bound is linear in the segment length `L = b − a` (the modulus of
//! the complex chord) and positively homogeneous of degree one in the
//! endpoint derivative magnitudes `A = |f′(a)|`, `B = |f′(b)|`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::PhiInterval;
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Numeric slop allowed when deciding dominance.
pub const DOMINANCE_SLOP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// Kernel `|p|` against the chord of `|f′|`.
    T31,
    /// Hölder on each half of the kernel.
    T32,
    /// Hölder on the whole kernel.
    T33,
    /// Power-mean on each half of the kernel.
    T34,
    /// `‖f⁗‖∞ (b−a)⁴ / 2880`.
    #[serde(rename = "CLASSICAL")]
    Classical,
}

impl Theorem {
    pub const CONVEXITY: [Theorem; 4] = [Theorem::T31, Theorem::T32, Theorem::T33, Theorem::T34];

    pub fn label(self) -> &'static str {
        match self {
            Theorem::T31 => "T31",
            Theorem::T32 => "T32",
            Theorem::T33 => "T33",
            Theorem::T34 => "T34",
            Theorem::Classical => "CLASSICAL",
        }
    }

    /// Whether the bound is defined for exponent `q`.
    pub fn applies(self, q: f64) -> bool {
        match self {
            Theorem::T32 | Theorem::T33 => q > 1.0,
            _ => q >= 1.0,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Verified,
    Violated,
    Skipped,
}

impl CertificateStatus {
    pub fn label(self) -> &'static str {
        match self {
            CertificateStatus::Verified => "verified",
            CertificateStatus::Violated => "violated",
            CertificateStatus::Skipped => "skipped",
        }
    }
}

impl fmt::Display for CertificateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Endpoint derivative magnitudes, segment length and exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    a_deriv: f64,
    b_deriv: f64,
    length: f64,
    q: f64,
}

impl BoundInputs {
    pub fn new(a_deriv: f64, b_deriv: f64, length: f64, q: f64) -> Result<Self> {
        if !(a_deriv.is_finite() && a_deriv >= 0.0 && b_deriv.is_finite() && b_deriv >= 0.0) {
            return Err(Error::Range(format!(
                "derivative magnitudes must be finite and non-negative, got {a_deriv}, {b_deriv}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Range(format!(
                "length must be positive, got {length}"
            )));
        }
        if !(q.is_finite() && q >= 1.0) {
            return Err(Error::Exponent(format!(
                "q must be finite and >= 1, got {q}"
            )));
        }
        Ok(Self {
            a_deriv,
            b_deriv,
            length,
            q,
        })
    }

    /// `A = |f′(a)|`, `B = |f′(b)|` and `L = b − a` for the given interval.
    pub fn from_function(f_prime: &Expr, iv: &PhiInterval, q: f64) -> Result<Self> {
        let a_deriv = f_prime.eval_real(iv.a())?.norm();
        let b_deriv = f_prime.eval_real(iv.b())?.norm();
        Self::new(a_deriv, b_deriv, iv.length(), q)
    }

    pub fn a_deriv(&self) -> f64 {
        self.a_deriv
    }

    pub fn b_deriv(&self) -> f64 {
        self.b_deriv
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Conjugate exponent `q/(q−1)`; `None` at `q = 1`.
    pub fn p(&self) -> Option<f64> {
        (self.q > 1.0).then(|| self.q / (self.q - 1.0))
    }

    fn require_p(&self) -> Result<f64> {
        self.p().ok_or_else(|| {
            Error::Exponent(format!(
                "q must exceed 1 for the Hölder bounds, got {}",
                self.q
            ))
        })
    }
}

/// `(5/72) L (A + B)`.
pub fn bound_t31(inp: &BoundInputs) -> f64 {
    5.0 / 72.0 * inp.length * (inp.a_deriv + inp.b_deriv)
}

/// `∫₀^{1/2} |t − 1/6|^p dt = (1 + 2^{p+1}) / (6^{p+1} (p+1))`.
pub fn kernel_moment(p: f64) -> f64 {
    (1.0 + 2f64.powf(p + 1.0)) / (6f64.powf(p + 1.0) * (p + 1.0))
}

/// `(scale · m(p))^{1/p}`. For q close to 1 the conjugate exponent is huge
/// and both powers in [`kernel_moment`] overflow, so go through logarithms.
fn kernel_moment_root(scale: f64, p: f64) -> f64 {
    if p < 300.0 {
        return (scale * kernel_moment(p)).powf(1.0 / p);
    }
    ((scale.ln() + ln_kernel_moment(p)) / p).exp()
}

fn ln_kernel_moment(p: f64) -> f64 {
    -(p + 1.0) * 3f64.ln() + 2f64.powf(-(p + 1.0)).ln_1p() - (p + 1.0).ln()
}

/// `(wa A^q + wb B^q)^{1/q}`, computed from scaled magnitudes so that large
/// `q` does not overflow.
fn weighted_power_mean(wa: f64, a: f64, wb: f64, b: f64, q: f64) -> f64 {
    let scale = a.max(b);
    if scale == 0.0 {
        return 0.0;
    }
    let (ra, rb) = (a / scale, b / scale);
    scale * (wa * ra.powf(q) + wb * rb.powf(q)).powf(1.0 / q)
}

/// Hölder bound applied to each half of the kernel.
pub fn bound_t32(inp: &BoundInputs) -> Result<f64> {
    let p = inp.require_p()?;
    let q = inp.q;
    let (a, b) = (inp.a_deriv, inp.b_deriv);
    let left = weighted_power_mean(3.0 / 8.0, a, 1.0 / 8.0, b, q);
    let right = weighted_power_mean(1.0 / 8.0, a, 3.0 / 8.0, b, q);
    Ok(inp.length * kernel_moment_root(1.0, p) * (left + right))
}

/// Hölder bound applied to the whole kernel.
pub fn bound_t33(inp: &BoundInputs) -> Result<f64> {
    let p = inp.require_p()?;
    let mean = weighted_power_mean(0.5, inp.a_deriv, 0.5, inp.b_deriv, inp.q);
    Ok(inp.length * kernel_moment_root(2.0, p) * mean)
}

/// Power-mean bound; coincides with [`bound_t31`] at `q = 1`.
pub fn bound_t34(inp: &BoundInputs) -> f64 {
    let q = inp.q;
    let (a, b) = (inp.a_deriv, inp.b_deriv);
    let left = weighted_power_mean(61.0 / 1296.0, a, 29.0 / 1296.0, b, q);
    let right = weighted_power_mean(29.0 / 1296.0, a, 61.0 / 1296.0, b, q);
    inp.length * (5.0f64 / 72.0).powf(1.0 - 1.0 / q) * (left + right)
}

/// Dispatches to the bound for `theorem`. [`Theorem::Classical`] is not
/// expressible through [`BoundInputs`] and yields an error.
pub fn bound_for(theorem: Theorem, inp: &BoundInputs) -> Result<f64> {
    match theorem {
        Theorem::T31 => Ok(bound_t31(inp)),
        Theorem::T32 => bound_t32(inp),
        Theorem::T33 => bound_t33(inp),
        Theorem::T34 => Ok(bound_t34(inp)),
        Theorem::Classical => Err(Error::Range(
            "the classical bound takes a fourth-derivative estimate".into(),
        )),
    }
}

/// `m4 · len⁴ / 2880`.
pub fn classical_bound(m4: f64, len: f64) -> f64 {
    m4 * len.powi(4) / 2880.0
}

/// Largest `|f⁗|` on a uniform grid of `samples` points over `[a, b]`,
/// endpoints included. This under-estimates the supremum in general.
pub fn estimate_m4(f: &Expr, iv: &PhiInterval, samples: usize) -> Result<f64> {
    if iv.phi() != 0.0 {
        return Err(Error::Range(format!(
            "the fourth-derivative estimate needs phi = 0, got {}",
            iv.phi()
        )));
    }
    if samples < 2 {
        return Err(Error::Range(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let d4 = f.nth_derivative(4);
    let step = iv.length() / (samples - 1) as f64;
    let mut best: f64 = 0.0;
    for k in 0..samples {
        let x = if k == samples - 1 {
            iv.b()
        } else {
            iv.a() + k as f64 * step
        };
        best = best.max(d4.eval_real(x)?.norm());
    }
    Ok(best)
}

/// One bound compared against the measured Simpson error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    /// Exponent the row belongs to; `None` for the classical bound.
    pub q: Option<f64>,
    pub bound: f64,
    pub actual: f64,
    pub slack: f64,
    pub dominant: bool,
    pub certificate_status: CertificateStatus,
}

impl BoundReport {
    pub fn new(
        theorem: Theorem,
        q: Option<f64>,
        bound: f64,
        actual: f64,
        certificate_status: CertificateStatus,
    ) -> Self {
        let slack = bound - actual;
        Self {
            theorem,
            q,
            bound,
            actual,
            slack,
            dominant: slack >= -DOMINANCE_SLOP,
            certificate_status,
        }
    }

    /// A dominance failure while the hypothesis was certified.
    pub fn is_hard_violation(&self) -> bool {
        !self.dominant && self.certificate_status == CertificateStatus::Verified
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use std::f64::consts::{E, PI};

    fn inputs(a: f64, b: f64, l: f64, q: f64) -> BoundInputs {
        BoundInputs::new(a, b, l, q).unwrap()
    }

    #[test]
    fn t31_values() {
        assert!((bound_t31(&inputs(0.0, 4.0, 1.0, 1.0)) - 5.0 / 18.0).abs() < 1e-16);
        assert_eq!(bound_t31(&inputs(0.0, 0.0, 1.0, 1.0)), 0.0);
        let v = bound_t31(&inputs(1.0, E, 1.0, 1.0));
        assert!((v - 5.0 / 72.0 * (1.0 + E)).abs() < 1e-16);
        assert!((v - 0.25821).abs() < 1e-5);
    }

    #[test]
    fn kernel_moment_closed_forms() {
        assert!((kernel_moment(1.0) - 5.0 / 72.0).abs() < 1e-16);
        assert!((kernel_moment(2.0) - 1.0 / 72.0).abs() < 1e-16);
    }

    #[test]
    fn log_moment_matches_closed_form() {
        for p in [1.0, 2.5, 40.0, 299.0] {
            let direct = kernel_moment(p).ln();
            assert!(
                (direct - ln_kernel_moment(p)).abs() < 1e-12 * direct.abs(),
                "{p}"
            );
        }
        // q -> 1+ : p -> inf and the root tends to 1/3.
        let r = kernel_moment_root(2.0, 1e9);
        assert!(r.is_finite() && (r - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn t32_values() {
        let v = bound_t32(&inputs(1.0, 1.0, 2.0, 2.0)).unwrap();
        assert!((v - 2.0 / 6.0).abs() < 1e-15);
        assert_eq!(bound_t32(&inputs(0.0, 0.0, 1.0, 2.0)).unwrap(), 0.0);
        let v = bound_t32(&inputs(0.0, 4.0, 1.0, 2.0)).unwrap();
        let expected = (1.0f64 / 72.0).sqrt() * (2f64.sqrt() + 6f64.sqrt());
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.4553).abs() < 1e-4);
        assert!(matches!(
            bound_t32(&inputs(1.0, 1.0, 1.0, 1.0)),
            Err(Error::Exponent(_))
        ));
    }

    #[test]
    fn t33_values() {
        let v = bound_t33(&inputs(1.0, 1.0, 3.0, 2.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert_eq!(bound_t33(&inputs(0.0, 0.0, 1.0, 2.0)).unwrap(), 0.0);
        let v = bound_t33(&inputs(0.0, 4.0, 1.0, 2.0)).unwrap();
        assert!((v - 8f64.sqrt() / 6.0).abs() < 1e-15);
        assert!(bound_t33(&inputs(1.0, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn t34_reduces_to_t31_at_q1() {
        for (a, b, l) in [(0.0, 4.0, 1.0), (1.0, E, 1.0), (3.7, 0.2, 2.5)] {
            let inp = inputs(a, b, l, 1.0);
            assert!((bound_t34(&inp) - bound_t31(&inp)).abs() < 1e-14);
        }
        assert_eq!(bound_t34(&inputs(0.0, 0.0, 1.0, 3.0)), 0.0);
    }

    #[test]
    fn large_q_does_not_overflow() {
        let inp = inputs(1e3, 2e3, 1.0, 200.0);
        for v in [
            bound_t32(&inp).unwrap(),
            bound_t33(&inp).unwrap(),
            bound_t34(&inp),
        ] {
            assert!(v.is_finite() && v > 0.0);
        }
    }

    #[test]
    fn input_validation() {
        assert!(BoundInputs::new(-1.0, 0.0, 1.0, 1.0).is_err());
        assert!(BoundInputs::new(0.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(BoundInputs::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(matches!(
            BoundInputs::new(0.0, 0.0, 1.0, 0.5),
            Err(Error::Exponent(_))
        ));
        let inp = inputs(1.0, 1.0, 1.0, 3.0);
        assert_eq!(inp.p(), Some(1.5));
        assert_eq!(inputs(1.0, 1.0, 1.0, 1.0).p(), None);
    }

    #[test]
    fn classical_values() {
        assert!((classical_bound(24.0, 1.0) - 1.0 / 120.0).abs() < 1e-18);
        assert_eq!(classical_bound(0.0, 3.0), 0.0);
        assert!((classical_bound(E, 1.0) - 9.438e-4).abs() < 1e-6);
    }

    #[test]
    fn m4_estimates() {
        let iv = PhiInterval::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(estimate_m4(&parse("x^4").unwrap(), &iv, 7).unwrap(), 24.0);
        let m = estimate_m4(&parse("exp(x)").unwrap(), &iv, 101).unwrap();
        assert!((m - E).abs() < 1e-12);
        let iv_pi = PhiInterval::new(0.0, PI, 0.0).unwrap();
        let m = estimate_m4(&parse("sin(x)").unwrap(), &iv_pi, 101).unwrap();
        assert!((m - 1.0).abs() < 1e-3);
    }

    #[test]
    fn m4_rejects_rotation_and_tiny_grids() {
        let rotated = PhiInterval::new(0.0, 1.0, 0.2).unwrap();
        assert!(estimate_m4(&parse("x").unwrap(), &rotated, 10).is_err());
        let iv = PhiInterval::new(0.0, 1.0, 0.0).unwrap();
        assert!(estimate_m4(&parse("x").unwrap(), &iv, 1).is_err());
    }

    #[test]
    fn report_dominance_flag() {
        let r = BoundReport::new(
            Theorem::T31,
            Some(1.0),
            1.0,
            1.0 + 5e-13,
            CertificateStatus::Verified,
        );
        assert!(r.dominant);
        let r = BoundReport::new(
            Theorem::T31,
            Some(1.0),
            1.0,
            1.1,
            CertificateStatus::Verified,
        );
        assert!(!r.dominant && r.is_hard_violation());
        let r = BoundReport::new(
            Theorem::T31,
            Some(1.0),
            1.0,
            1.1,
            CertificateStatus::Violated,
        );
        assert!(!r.is_hard_violation());
    }
}

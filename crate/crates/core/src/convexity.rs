//! Sampled check of the convexity hypothesis used by the bounds:
//!
//! ```text
//! |f′(a + t e^{iφ}(b−a))|^q ≤ (1−t) |f′(a)|^q + t |f′(b)|^q,   t ∈ [0, 1]
//! ```
//!
//! A `verified` certificate means no uniform sample violated the inequality
//! by more than the tolerance. It is evidence, not a proof.

use serde::{Deserialize, Serialize};

use crate::bounds::CertificateStatus;
use crate::domain::PhiInterval;
use crate::error::{Error, Result};
use crate::expr::Expr;

pub const DEFAULT_SAMPLES: usize = 1001;
pub const DEFAULT_CERT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCertificate {
    pub q: f64,
    pub sample_count: usize,
    pub status: CertificateStatus,
    /// Minimum over samples of `chord − value`.
    pub worst_margin: f64,
    /// Parameter of the worst sample, present only when violated.
    pub violation_t: Option<f64>,
}

impl ConvexityCertificate {
    pub fn is_verified(&self) -> bool {
        self.status == CertificateStatus::Verified
    }
}

/// Certificate with the default tolerance.
pub fn certify_phi_convexity(
    f: &Expr,
    iv: &PhiInterval,
    q: f64,
    n: usize,
) -> Result<ConvexityCertificate> {
    certify_with_derivative(&f.differentiate(), iv, q, n, DEFAULT_CERT_TOL)
}

/// Same as [`certify_phi_convexity`] but takes `f′` directly.
pub fn certify_with_derivative(
    f_prime: &Expr,
    iv: &PhiInterval,
    q: f64,
    n: usize,
    tol: f64,
) -> Result<ConvexityCertificate> {
    if n < 3 {
        return Err(Error::Range(format!("need at least 3 samples, got {n}")));
    }
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::Exponent(format!(
            "q must be finite and >= 1, got {q}"
        )));
    }
    let at_a = f_prime.eval_real(iv.a())?.norm().powf(q);
    let at_b = f_prime.eval_real(iv.b())?.norm().powf(q);

    let mut worst_margin = f64::INFINITY;
    let mut worst_t = 0.0;
    let last = (n - 1) as f64;
    for k in 0..n {
        let t = k as f64 / last;
        let value = f_prime.eval(iv.point_unchecked(t))?.norm().powf(q);
        let chord = (1.0 - t) * at_a + t * at_b;
        let margin = chord - value;
        if margin < worst_margin {
            worst_margin = margin;
            worst_t = t;
        }
    }

    let violated = worst_margin < -tol;
    Ok(ConvexityCertificate {
        q,
        sample_count: n,
        status: if violated {
            CertificateStatus::Violated
        } else {
            CertificateStatus::Verified
        },
        worst_margin,
        violation_t: violated.then_some(worst_t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn iv(a: f64, b: f64, phi: f64) -> PhiInterval {
        PhiInterval::new(a, b, phi).unwrap()
    }

    #[test]
    fn linear_derivative_meets_chord() {
        let cert =
            certify_phi_convexity(&parse("x^2").unwrap(), &iv(0.0, 1.0, 0.0), 1.0, 1001).unwrap();
        assert!(cert.is_verified());
        assert!(cert.worst_margin.abs() < 1e-14);
        assert_eq!(cert.violation_t, None);
    }

    #[test]
    fn exponential_squared_is_strictly_below() {
        let cert =
            certify_phi_convexity(&parse("exp(x)").unwrap(), &iv(0.0, 1.0, 0.0), 2.0, 101).unwrap();
        assert!(cert.is_verified());
        // Endpoints give margin 0; the interior sampling oracle is positive.
        assert!(cert.worst_margin.abs() < 1e-14);
        let t = 0.5;
        let interior = (1.0 - t) + t * 2f64.exp() - (2.0 * t).exp();
        assert!(interior > 0.5);
    }

    #[test]
    fn concave_derivative_is_caught() {
        // |f′(x)| = 1 − x² on [−1, 1]; the chord is identically 0.
        let f = parse("x - x^3/3").unwrap();
        let cert = certify_phi_convexity(&f, &iv(-1.0, 1.0, 0.0), 1.0, 1001).unwrap();
        assert_eq!(cert.status, CertificateStatus::Violated);
        assert_eq!(cert.violation_t, Some(0.5));
        assert!((cert.worst_margin + 1.0).abs() < 1e-12);

        // Five samples hit x = ±0.5 (margin −0.75) and x = 0 (margin −1).
        let coarse = certify_phi_convexity(&f, &iv(-1.0, 1.0, 0.0), 1.0, 5).unwrap();
        assert_eq!(coarse.violation_t, Some(0.5));
        assert!((coarse.worst_margin + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = parse("x^2").unwrap();
        assert!(certify_phi_convexity(&f, &iv(0.0, 1.0, 0.0), 1.0, 2).is_err());
        assert!(certify_phi_convexity(&f, &iv(0.0, 1.0, 0.0), 0.5, 10).is_err());
    }

    #[test]
    fn rotation_can_break_the_hypothesis() {
        // |2z| along −1 → −1 + 3i exceeds the real-axis chord 2 + 2t near t = 1/3.
        let cert = certify_phi_convexity(
            &parse("x^2").unwrap(),
            &iv(-1.0, 2.0, std::f64::consts::FRAC_PI_2),
            1.0,
            1001,
        )
        .unwrap();
        assert_eq!(cert.status, CertificateStatus::Violated);
    }
}

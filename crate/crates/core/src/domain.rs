//! The rotated integration segment `[a, a + e^{iφ}(b − a)]` and the
//! piecewise-linear Simpson kernel.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Real endpoints `a < b` and a rotation angle `phi ∈ [0, π/2]`.
///
/// The segment starts at `a` and ends at `a + e^{iφ}(b − a)`; its length is
/// always `b − a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiInterval {
    a: f64,
    b: f64,
    phi: f64,
}

impl PhiInterval {
    pub fn new(a: f64, b: f64, phi: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Interval(format!(
                "endpoints must be finite, got a={a}, b={b}"
            )));
        }
        if a >= b {
            return Err(Error::Interval(format!("need a < b, got a={a}, b={b}")));
        }
        if !(0.0..=FRAC_PI_2).contains(&phi) {
            return Err(Error::Interval(format!(
                "phi must lie in [0, pi/2], got {phi}"
            )));
        }
        Ok(Self { a, b, phi })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `b − a`, the modulus of the chord.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// `e^{iφ}`, exact for φ = 0 and φ = π/2.
    pub fn rotation(&self) -> Complex64 {
        if self.phi == 0.0 {
            Complex64::new(1.0, 0.0)
        } else if self.phi == FRAC_PI_2 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::from_polar(1.0, self.phi)
        }
    }

    /// Complex displacement `e^{iφ}(b − a)`.
    pub fn chord(&self) -> Complex64 {
        self.rotation() * self.length()
    }

    pub fn start(&self) -> Complex64 {
        Complex64::new(self.a, 0.0)
    }

    pub fn endpoint(&self) -> Complex64 {
        self.start() + self.chord()
    }

    pub fn midpoint(&self) -> Complex64 {
        self.start() + 0.5 * self.chord()
    }

    /// `a + t e^{iφ}(b − a)` for `t ∈ [0, 1]`.
    pub fn path_point(&self, t: f64) -> Result<Complex64> {
        check_unit(t)?;
        Ok(self.point_unchecked(t))
    }

    pub(crate) fn point_unchecked(&self, t: f64) -> Complex64 {
        self.start() + t * self.chord()
    }
}

fn check_unit(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Range(format!("t must lie in [0, 1], got {t}")))
    }
}

/// Kernel sample; `value` is `t − 1/6` on `[0, 1/2)` and `t − 5/6` on `[1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub t: f64,
    pub value: f64,
}

/// Points where the kernel changes sign or jumps.
pub const KERNEL_BREAKPOINTS: [f64; 3] = [1.0 / 6.0, 0.5, 5.0 / 6.0];

pub fn kernel(t: f64) -> Result<f64> {
    check_unit(t)?;
    Ok(kernel_unchecked(t))
}

pub fn kernel_value(t: f64) -> Result<KernelValue> {
    Ok(KernelValue {
        t,
        value: kernel(t)?,
    })
}

/// Kernel without the range check. `t = 1/2` takes the second branch.
#[inline]
pub(crate) fn kernel_unchecked(t: f64) -> f64 {
    if t < 0.5 {
        t - 1.0 / 6.0
    } else {
        t - 5.0 / 6.0
    }
}

//! Both sides of the kernel identity
//!
//! ```text
//! S(f) − M(f) = e^{iφ}(b−a) ∫₀¹ p(t) f′(a + t e^{iφ}(b−a)) dt
//! ```
//!
//! where `S` is the Simpson functional on the three path nodes and `M` the
//! mean of `f` along the path. The left side is the quantity every bound in
//! [`crate::bounds`] controls.

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{kernel_unchecked, PhiInterval, KERNEL_BREAKPOINTS};
use crate::error::Result;
use crate::expr::Expr;
use crate::quad::{contour_integral, try_integrate_01, QuadOptions};

pub const DEFAULT_IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub simpson_value: Complex64,
    pub path_mean: Complex64,
    /// `simpson_value − path_mean`.
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs − rhs|`.
    pub residual: f64,
}

impl IdentityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.residual <= tol
    }

    /// `|lhs|`, the actual Simpson error the bounds are compared against.
    pub fn actual(&self) -> f64 {
        self.lhs.norm()
    }

    /// Largest imaginary part among the four complex quantities.
    pub fn max_imaginary(&self) -> f64 {
        [self.simpson_value, self.path_mean, self.lhs, self.rhs]
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }
}

/// `(1/6)[f(a) + 4 f(mid) + f(end)]` on the rotated segment.
pub fn simpson_functional(f: &Expr, iv: &PhiInterval) -> Result<Complex64> {
    let fa = f.eval(iv.start())?;
    let fm = f.eval(iv.midpoint())?;
    let fe = f.eval(iv.endpoint())?;
    Ok((fa + 4.0 * fm + fe) / 6.0)
}

/// Contour integral of `f` divided by the chord.
pub fn path_mean(f: &Expr, iv: &PhiInterval, opts: &QuadOptions) -> Result<Complex64> {
    let integral = contour_integral(f, iv, opts)?;
    Ok(integral.value / iv.chord())
}

/// Right side of the identity, using the symbolic derivative of `f`.
pub fn identity_rhs(f: &Expr, iv: &PhiInterval, opts: &QuadOptions) -> Result<Complex64> {
    kernel_weighted(&f.differentiate(), iv, opts)
}

fn kernel_weighted(df: &Expr, iv: &PhiInterval, opts: &QuadOptions) -> Result<Complex64> {
    // The outer factor is |chord| = b − a, so the inner tolerance shrinks by it.
    let inner = QuadOptions {
        tol: opts.tol / iv.length(),
        budget: opts.budget,
    };
    let r = try_integrate_01(
        |t| Ok(kernel_unchecked(t) * df.eval(iv.point_unchecked(t))?),
        &KERNEL_BREAKPOINTS,
        &inner,
    )?;
    Ok(iv.chord() * r.value)
}

/// Evaluates both sides and their difference.
pub fn identity_residual(f: &Expr, iv: &PhiInterval, opts: &QuadOptions) -> Result<IdentityReport> {
    let simpson_value = simpson_functional(f, iv)?;
    let path_mean = path_mean(f, iv, opts)?;
    let rhs = identity_rhs(f, iv, opts)?;
    let lhs = simpson_value - path_mean;
    Ok(IdentityReport {
        simpson_value,
        path_mean,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

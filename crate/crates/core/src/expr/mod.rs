//! Expression trees over a single complex variable `x`.
//!
//! Grammar accepted by [`parse`]:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative, binds tightest
//! primary := number | 'x' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func    := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt'
//! number  := decimal literal, optional exponent (1, 2.5, .5, 1e-3)
//! ```
//!
//! Evaluation uses principal branches for `log`, `sqrt` and complex powers
//! (`z^w = exp(w log z)`); integer-valued real exponents are computed by
//! repeated multiplication so that `0^n` is defined for `n > 0`.

mod diff;
mod parse;

use std::fmt;

use num_complex::Complex64;

use crate::error::EvalError;

pub use parse::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// Immutable expression tree. The only free symbol is `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn real(v: f64) -> Self {
        Expr::Const(Complex64::new(v, 0.0))
    }

    pub fn unary(op: UnaryOp, arg: Expr) -> Self {
        Expr::Unary(op, Box::new(arg))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Value at `z`; see the module docs for branch conventions.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let value = match self {
            Expr::Const(c) => return Ok(*c),
            Expr::Var => return Ok(z),
            Expr::Unary(op, arg) => {
                let u = arg.eval(z)?;
                match op {
                    UnaryOp::Neg => -u,
                    UnaryOp::Exp => u.exp(),
                    UnaryOp::Log => {
                        if u == Complex64::new(0.0, 0.0) {
                            return Err(self.domain(z, "logarithm of zero"));
                        }
                        u.ln()
                    }
                    UnaryOp::Sin => u.sin(),
                    UnaryOp::Cos => u.cos(),
                    UnaryOp::Sqrt => u.sqrt(),
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let l = lhs.eval(z)?;
                let r = rhs.eval(z)?;
                match op {
                    BinaryOp::Add => l + r,
                    BinaryOp::Sub => l - r,
                    BinaryOp::Mul => l * r,
                    BinaryOp::Div => {
                        if r == Complex64::new(0.0, 0.0) {
                            return Err(self.domain(z, "division by zero"));
                        }
                        l / r
                    }
                    BinaryOp::Pow => complex_pow(l, r)
                        .ok_or_else(|| self.domain(z, "zero raised to a non-positive power"))?,
                }
            }
        };
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(self.domain(z, "non-finite result"))
        }
    }

    /// Convenience wrapper for real arguments.
    pub fn eval_real(&self, x: f64) -> Result<Complex64, EvalError> {
        self.eval(Complex64::new(x, 0.0))
    }

    /// Symbolic derivative with respect to `x`. Trees are not simplified
    /// beyond folding multiplications by the constants 0 and 1.
    pub fn differentiate(&self) -> Expr {
        diff::derivative(self)
    }

    /// Applies [`Expr::differentiate`] `order` times.
    pub fn nth_derivative(&self, order: usize) -> Expr {
        (0..order).fold(self.clone(), |e, _| e.differentiate())
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Unary(_, a) => 1 + a.node_count(),
            Expr::Binary(_, l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    fn domain(&self, z: Complex64, reason: &'static str) -> EvalError {
        EvalError {
            node: self.to_string(),
            re: z.re,
            im: z.im,
            reason,
        }
    }
}

/// Principal-branch power with `0^0 = 1`. `None` when the base is zero and
/// the exponent is otherwise not positive.
fn complex_pow(base: Complex64, exponent: Complex64) -> Option<Complex64> {
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() <= 64.0 {
        let n = exponent.re as i32;
        if base == ZERO {
            return match n {
                0 => Some(Complex64::new(1.0, 0.0)),
                n if n > 0 => Some(ZERO),
                _ => None,
            };
        }
        return Some(base.powi(n));
    }
    if base == ZERO {
        return if exponent.re > 0.0 { Some(ZERO) } else { None };
    }
    Some((exponent * base.ln()).exp())
}

fn fmt_real(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // `{:?}` is the shortest representation that round-trips.
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        write!(f, "(-{:?})", -v)
    } else {
        write!(f, "{v:?}")
    }
}

/// Fully parenthesised infix form that [`parse`] reads back to an
/// evaluation-equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.im == 0.0 => fmt_real(c.re, f),
            Expr::Const(c) => {
                // The grammar has no imaginary literal. `0-1` keeps the zero
                // imaginary part positive so the principal root is +i.
                f.write_str("(")?;
                fmt_real(c.re, f)?;
                f.write_str("+")?;
                fmt_real(c.im, f)?;
                f.write_str("*sqrt(0-1))")
            }
            Expr::Var => f.write_str("x"),
            Expr::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
        }
    }
}

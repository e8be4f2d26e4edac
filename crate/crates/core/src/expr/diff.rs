use super::{BinaryOp, Expr, UnaryOp};

fn is_real_const(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Const(c) if c.im == 0.0 && c.re == v)
}

fn add(l: Expr, r: Expr) -> Expr {
    if is_real_const(&l, 0.0) {
        return r;
    }
    if is_real_const(&r, 0.0) {
        return l;
    }
    Expr::binary(BinaryOp::Add, l, r)
}

fn sub(l: Expr, r: Expr) -> Expr {
    if is_real_const(&r, 0.0) {
        return l;
    }
    if is_real_const(&l, 0.0) {
        return neg(r);
    }
    Expr::binary(BinaryOp::Sub, l, r)
}

fn mul(l: Expr, r: Expr) -> Expr {
    if is_real_const(&l, 0.0) || is_real_const(&r, 0.0) {
        return Expr::real(0.0);
    }
    if is_real_const(&l, 1.0) {
        return r;
    }
    if is_real_const(&r, 1.0) {
        return l;
    }
    Expr::binary(BinaryOp::Mul, l, r)
}

fn div(l: Expr, r: Expr) -> Expr {
    if is_real_const(&l, 0.0) {
        return Expr::real(0.0);
    }
    Expr::binary(BinaryOp::Div, l, r)
}

fn neg(e: Expr) -> Expr {
    if is_real_const(&e, 0.0) {
        return e;
    }
    Expr::unary(UnaryOp::Neg, e)
}

pub(super) fn derivative(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => Expr::real(0.0),
        Expr::Var => Expr::real(1.0),
        Expr::Unary(op, arg) => {
            let du = derivative(arg);
            let u = (**arg).clone();
            match op {
                UnaryOp::Neg => neg(du),
                UnaryOp::Exp => mul(e.clone(), du),
                UnaryOp::Log => div(du, u),
                UnaryOp::Sin => mul(Expr::unary(UnaryOp::Cos, u), du),
                UnaryOp::Cos => neg(mul(Expr::unary(UnaryOp::Sin, u), du)),
                UnaryOp::Sqrt => div(du, mul(Expr::real(2.0), e.clone())),
            }
        }
        Expr::Binary(op, lhs, rhs) => {
            let (u, v) = ((**lhs).clone(), (**rhs).clone());
            let (du, dv) = (derivative(lhs), derivative(rhs));
            match op {
                BinaryOp::Add => add(du, dv),
                BinaryOp::Sub => sub(du, dv),
                BinaryOp::Mul => add(mul(du, v), mul(u, dv)),
                BinaryOp::Div => {
                    let numerator = sub(mul(du, v.clone()), mul(u, dv));
                    div(numerator, Expr::binary(BinaryOp::Pow, v, Expr::real(2.0)))
                }
                BinaryOp::Pow => match v {
                    // Constant exponent: power rule keeps 0^n well defined.
                    Expr::Const(c) if c.re == 1.0 && c.im == 0.0 => du,
                    Expr::Const(c) => mul(
                        mul(
                            Expr::Const(c),
                            Expr::binary(BinaryOp::Pow, u, Expr::Const(c - 1.0)),
                        ),
                        du,
                    ),
                    _ => {
                        // d(u^v) = u^v * (v' log u + v u'/u)
                        let log_term = mul(dv, Expr::unary(UnaryOp::Log, u.clone()));
                        let ratio_term = mul(v, div(du, u));
                        mul(e.clone(), add(log_term, ratio_term))
                    }
                },
            }
        }
    }
}

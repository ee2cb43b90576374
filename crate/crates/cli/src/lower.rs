//! Lowering of parsed expressions to engine values.

use num_traits::{One, Zero};
use starforge_core::closed_form::{action_from_scalar, ActionValue, ClosedForm};
use starforge_core::complex::{ExactComplex, Rational};
use starforge_core::error::Error;
use starforge_core::functional::{Distribution, FormalFunctional};
use starforge_core::phase::{GaussPoly, PhaseContext};
use starforge_core::scalar::FormalScalar;
use starforge_core::series::{fs_bullet, function, function_at, function_one, FormalFunction};

use crate::parse::Expr;
use crate::CliError;

/// An evaluated expression.
///
/// `Action` holds coordinate-free values involving `pi`; coordinate-free
/// functions are promoted to it when they meet `pi` or a functional.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Function(FormalFunction),
    Action(ActionValue),
    Functional(FormalFunctional),
}

fn unsupported(msg: impl Into<String>) -> CliError {
    Error::NotSupportedForm(msg.into()).into()
}

/// The λ-series of constants when `f` has no coordinate dependence.
pub fn function_scalar(f: &FormalFunction, ctx: &PhaseContext) -> Option<FormalScalar> {
    let origin = vec![Rational::zero(); ctx.nvars()];
    f.try_map(|_, g| {
        if g.polynomial_degree() != Some(0) {
            return Err(());
        }
        g.eval(ctx, &origin).ok().and_then(|v| v.as_complex()).ok_or(())
    })
    .ok()
}

fn promote(v: &Value, ctx: &PhaseContext) -> Option<ActionValue> {
    match v {
        Value::Action(a) => Some(a.clone()),
        Value::Function(f) => function_scalar(f, ctx).map(|s| action_from_scalar(&s)),
        Value::Functional(_) => None,
    }
}

fn scale_functional(a: &ActionValue, t: &FormalFunctional) -> Result<Value, CliError> {
    Ok(Value::Functional(a.try_mul_with(t, |c, d| d.scale_closed(c))?))
}

fn add(x: Value, y: Value, ctx: &PhaseContext) -> Result<Value, CliError> {
    Ok(match (x, y) {
        (Value::Function(f), Value::Function(g)) => Value::Function(&f + &g),
        (Value::Functional(s), Value::Functional(t)) => Value::Functional(&s + &t),
        (x, y) => match (promote(&x, ctx), promote(&y, ctx)) {
            (Some(a), Some(b)) => Value::Action(&a + &b),
            _ => return Err(unsupported("sums must not mix functions, pi and functionals")),
        },
    })
}

fn neg(x: Value) -> Value {
    match x {
        Value::Function(f) => Value::Function(-&f),
        Value::Action(a) => Value::Action(-&a),
        Value::Functional(t) => Value::Functional(-&t),
    }
}

fn mul(x: Value, y: Value, ctx: &PhaseContext) -> Result<Value, CliError> {
    match (x, y) {
        (Value::Function(f), Value::Function(g)) => Ok(Value::Function(fs_bullet(&f, &g))),
        (Value::Functional(_), Value::Functional(_)) => Err(unsupported("functionals cannot be multiplied together")),
        (Value::Functional(t), s) | (s, Value::Functional(t)) => {
            let a = promote(&s, ctx).ok_or_else(|| unsupported("functionals are scaled only by coordinate-free factors"))?;
            scale_functional(&a, &t)
        }
        (x, y) => match (promote(&x, ctx), promote(&y, ctx)) {
            (Some(a), Some(b)) => Ok(Value::Action(a.mul_with(&b, |c, d| c * d))),
            _ => Err(unsupported("pi multiplies only coordinate-free factors and functionals")),
        },
    }
}

/// Exact single-term series, the only ones with exact inverses.
fn single_term<C: starforge_core::laurent::Coefficient>(s: &starforge_core::laurent::Laurent<C>) -> Option<(i64, &C)> {
    (s.is_exact() && s.coeffs().len() == 1).then(|| (s.valuation(), &s.coeffs()[0]))
}

fn invert(x: &Value, ctx: &PhaseContext) -> Result<Value, CliError> {
    let bad = || unsupported("negative powers apply to single nonzero coordinate-free terms such as 2*lam");
    match x {
        Value::Function(f) => {
            let s = function_scalar(f, ctx).ok_or_else(bad)?;
            let (k, c) = single_term(&s).ok_or_else(bad)?;
            let inv = c.inv().ok_or_else(bad)?;
            Ok(Value::Function(function_at(ctx.constant(inv), -k)))
        }
        Value::Action(a) => {
            let (k, c) = single_term(a).ok_or_else(bad)?;
            Ok(Value::Action(ActionValue::monomial(c.inverse().ok_or_else(bad)?, -k)))
        }
        Value::Functional(_) => Err(bad()),
    }
}

fn pow(x: Value, n: i64, ctx: &PhaseContext) -> Result<Value, CliError> {
    if let Value::Functional(_) = x {
        return if n == 1 { Ok(x) } else { Err(unsupported("functionals cannot be raised to powers")) };
    }
    let base = if n < 0 { invert(&x, ctx)? } else { x };
    let mut acc = match base {
        Value::Action(_) => Value::Action(ActionValue::constant(ClosedForm::from_complex(ExactComplex::one()))),
        _ => Value::Function(function_one(ctx)),
    };
    for _ in 0..n.unsigned_abs() {
        acc = mul(acc, base.clone(), ctx)?;
    }
    Ok(acc)
}

fn check_dim(len: usize, ctx: &PhaseContext) -> Result<(), CliError> {
    if len != ctx.nvars() {
        return Err(Error::DimensionMismatch { expected: ctx.nvars(), found: len }.into());
    }
    Ok(())
}

pub fn lower(e: &Expr, ctx: &PhaseContext) -> Result<Value, CliError> {
    let constant = |c: ExactComplex| Value::Function(function(ctx.constant(c)));
    Ok(match e {
        Expr::Num(r) => constant(ExactComplex::real(r.clone())),
        Expr::I => constant(ExactComplex::i()),
        Expr::Lam => Value::Function(function_at(ctx.one(), 1)),
        Expr::Pi => Value::Action(ActionValue::constant(ClosedForm::pi_pow(1))),
        Expr::Coord(c) => {
            let idx = ctx.index(*c)?;
            Value::Function(function(if idx < ctx.pairs() { ctx.q(idx) } else { ctx.p(idx - ctx.pairs()) }))
        }
        Expr::Gauss(a) => Value::Function(function(GaussPoly::try_new(ctx.one().poly, a.clone())?)),
        Expr::Delta { point, multi_index } => {
            check_dim(point.len(), ctx)?;
            let d = if multi_index.is_empty() {
                Distribution::delta(point.clone())
            } else {
                check_dim(multi_index.len(), ctx)?;
                Distribution::point_deriv(point.clone(), multi_index.clone(), ExactComplex::one())
            };
            Value::Functional(FormalFunctional::constant(d))
        }
        Expr::Density(inner) => match lower(inner, ctx)? {
            Value::Function(f) => Value::Functional(f.map(|g| Distribution::density_sum(g.clone()))),
            _ => return Err(unsupported("density(..) takes a phase-space function")),
        },
        Expr::Neg(x) => neg(lower(x, ctx)?),
        Expr::Add(a, b) => add(lower(a, ctx)?, lower(b, ctx)?, ctx)?,
        Expr::Sub(a, b) => add(lower(a, ctx)?, neg(lower(b, ctx)?), ctx)?,
        Expr::Mul(a, b) => mul(lower(a, ctx)?, lower(b, ctx)?, ctx)?,
        Expr::Pow(x, n) => pow(lower(x, ctx)?, *n, ctx)?,
    })
}

pub fn to_function(v: Value) -> Result<FormalFunction, CliError> {
    match v {
        Value::Function(f) => Ok(f),
        Value::Action(_) => Err(unsupported("expected a phase-space function; pi is allowed only as a weight of functionals")),
        Value::Functional(_) => Err(unsupported("expected a phase-space function, found a functional")),
    }
}

pub fn to_scalar(v: Value, ctx: &PhaseContext) -> Result<FormalScalar, CliError> {
    let f = to_function(v)?;
    function_scalar(&f, ctx).ok_or_else(|| unsupported("expected a coordinate-free value"))
}

pub fn to_functional(v: Value) -> Result<FormalFunctional, CliError> {
    match v {
        Value::Functional(t) => Ok(t),
        // the zero functional is written `0`
        Value::Function(f) if f.is_exact_zero() => Ok(FormalFunctional::zero()),
        _ => Err(unsupported("expected a functional built from delta(..) and density(..)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;
    use starforge_core::closed_form::ActionDisplay;
    use starforge_core::complex::int;
    use starforge_core::functional::FunctionalDisplay;
    use starforge_core::laurent::Tail;
    use starforge_core::series::FunctionDisplay;

    fn ctx() -> PhaseContext {
        PhaseContext::new(1).unwrap()
    }

    fn eval(s: &str) -> Value {
        lower(&parse_expression(s, &ctx()).unwrap(), &ctx()).unwrap()
    }

    fn shown(s: &str) -> String {
        match eval(s) {
            Value::Function(f) => FunctionDisplay(&f).to_string(),
            Value::Action(a) => ActionDisplay(&a).to_string(),
            Value::Functional(t) => FunctionalDisplay(&t).to_string(),
        }
    }

    #[test]
    fn functions() {
        assert_eq!(shown("q + I*p"), "q + I*p");
        assert_eq!(shown("lam^-1 * q * gauss(1)"), "lam^-1*gauss(1)*q");
        assert_eq!(shown("(q+p)^2 - q^2 - p^2"), "2*q*p");
        assert_eq!(shown("(2*lam)^-2"), "1/4*lam^-2");
    }

    #[test]
    fn functionals() {
        assert_eq!(shown("2*delta(0,0) - lam*density(gauss(1))"), "2*delta(0,0) + lam*density(-gauss(1))");
        assert_eq!(shown("pi^-1*lam*density(gauss(1))"), "pi^-1*lam*density(gauss(1))");
        assert_eq!(shown("density(lam*q)"), "lam*density(q)");
        assert_eq!(shown("(1 + pi)*delta(0,0)"), "delta(0,0) + pi*delta(0,0)");
    }

    #[test]
    fn rejected_forms() {
        let c = ctx();
        for s in ["q*delta(0,0)", "delta(0,0)*delta(0,0)", "(1+lam)^-1", "q^-1", "pi*q", "delta(0)", "gauss(-1)", "delta(0,0) + q"] {
            let r = lower(&parse_expression(s, &c).unwrap(), &c);
            assert!(r.is_err(), "{s} lowered to {r:?}");
        }
    }

    #[test]
    fn scalars() {
        let want = FormalScalar::new(0, vec![ExactComplex::one(), ExactComplex::real(int(2))], Tail::Exact);
        assert_eq!(to_scalar(eval("1 + 2*lam"), &ctx()).unwrap(), want);
        assert!(to_scalar(eval("q"), &ctx()).is_err());
    }
}

//! Formal Laurent series in λ with Gaussian-polynomial coefficients, and the
//! commutative bullet product.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::closed_form::ActionValue;
use crate::complex::ExactComplex;
use crate::error::{Error, Result};
use crate::laurent::{Laurent, Tail};
use crate::phase::{render_gauss_sum, Coord, GaussPoly, GaussSum, PhaseContext};
use crate::scalar::FormalScalar;

pub type FormalFunction = Laurent<GaussSum>;

pub fn function(g: GaussPoly) -> FormalFunction {
    FormalFunction::constant(g.into())
}

/// `λ^power · g`.
pub fn function_at(g: GaussPoly, power: i64) -> FormalFunction {
    FormalFunction::monomial(g.into(), power)
}

pub fn function_one(ctx: &PhaseContext) -> FormalFunction {
    function(ctx.one())
}

/// Collects `(power, coefficient)` contributions into a canonical series.
pub fn from_power_map(map: BTreeMap<i64, GaussSum>, tail: Tail) -> FormalFunction {
    let Some(&lo) = map.keys().next() else {
        return match tail {
            Tail::Exact => FormalFunction::zero(),
            Tail::TruncatedAt(n) => FormalFunction::zero_through(n),
        };
    };
    let hi = *map.keys().next_back().unwrap_or(&lo);
    let mut coeffs = vec![GaussSum::zero(); (hi - lo + 1) as usize];
    for (p, c) in map {
        coeffs[(p - lo) as usize] = c;
    }
    FormalFunction::new(lo, coeffs, tail)
}

/// Scalar series acting on a function series by the graded Cauchy rule.
pub fn scalar_action(c: &FormalScalar, f: &FormalFunction) -> FormalFunction {
    c.mul_with(f, |a, g| g.scale(a))
}

pub fn fs_linear_comb(c1: &FormalScalar, f1: &FormalFunction, c2: &FormalScalar, f2: &FormalFunction) -> FormalFunction {
    &scalar_action(c1, f1) + &scalar_action(c2, f2)
}

pub fn fs_bullet(f: &FormalFunction, g: &FormalFunction) -> FormalFunction {
    f.mul_with(g, |a, b| a * b)
}

pub fn fs_diff(f: &FormalFunction, ctx: &PhaseContext, c: Coord) -> Result<FormalFunction> {
    let idx = ctx.index(c)?;
    Ok(f.map(|g| g.diff_index(idx)))
}

pub fn fs_conj(f: &FormalFunction) -> FormalFunction {
    f.map(GaussSum::conj)
}

pub fn fs_is_real(f: &FormalFunction) -> bool {
    f.coeffs().iter().all(GaussSum::is_real)
}

/// Termwise Gaussian integration; the offending power is named on failure.
pub fn fs_integrate(f: &FormalFunction, ctx: &PhaseContext) -> Result<ActionValue> {
    f.try_map(|power, g| {
        g.integrate(ctx).map_err(|e| match e {
            Error::NotIntegrable { .. } => Error::NotIntegrable { power: Some(power) },
            other => other,
        })
    })
}

/// Substitutes a rational λ into an exact series.
pub fn fs_eval_lambda(f: &FormalFunction, lam: &crate::complex::Rational) -> Result<GaussSum> {
    if let Tail::TruncatedAt(n) = f.tail() {
        return Err(Error::TruncatedTail(n));
    }
    let mut acc = GaussSum::zero();
    for (p, g) in f.terms() {
        acc = acc + &g.scale(&ExactComplex::real(crate::scalar::rational_pow(lam, p)));
    }
    Ok(acc)
}

/// Exact value of a series at a point (λ kept formal).
pub fn fs_eval_point(f: &FormalFunction, ctx: &PhaseContext, point: &[crate::complex::Rational]) -> Result<ActionValue> {
    f.try_map(|_, g| g.eval(ctx, point))
}

/// Largest polynomial degree over all coefficients, and whether every coefficient is a pure polynomial.
pub fn fs_degree(f: &FormalFunction) -> (u32, bool) {
    let deg = f.coeffs().iter().map(GaussSum::max_degree).max().unwrap_or(0);
    (deg, f.coeffs().iter().all(GaussSum::is_polynomial))
}

/// Renders a series in the expression syntax: `q*p + 1/2*I*lam`.
pub struct FunctionDisplay<'a>(pub &'a FormalFunction);

impl fmt::Display for FunctionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (p, g) in self.0.terms() {
            let lam = match p {
                0 => Vec::new(),
                1 => vec!["lam".to_string()],
                p => vec![format!("lam^{p}")],
            };
            if render_gauss_sum(&mut out, g, &lam, first) {
                first = false;
            }
        }
        if first {
            out.push('0');
        }
        if let Tail::TruncatedAt(n) = self.0.tail() {
            out.push_str(&format!(" + O(lam^{})", n + 1));
        }
        f.write_str(&out)
    }
}

/// Integral values rendered through [`crate::closed_form::ActionDisplay`].
pub fn integral_string(v: &ActionValue) -> String {
    crate::closed_form::ActionDisplay(v).to_string()
}

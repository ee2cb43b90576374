//! Where `conj(f) * f` turns negative for a linear `f` under the Moyal product.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::closed_form::{ActionDisplay, ActionValue, ClosedForm};
use crate::complex::{fmt_rational, ExactComplex, Rational};
use crate::error::{Error, Result};
use crate::laurent::Tail;
use crate::phase::{GaussPoly, PhaseContext};
use crate::poly::Monomial;
use crate::scalar::{FormalScalar, LambdaBinding, ScalarDisplay};
use crate::series::{fs_conj, FormalFunction, FunctionDisplay};
use crate::star::{star_mul, Moyal};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionReport {
    /// `conj(f) * f`, with λ formal.
    pub product: String,
    pub center: Vec<String>,
    pub a: String,
    /// Value at the center, `−aλ`.
    pub minimum: String,
    /// Squared semi-axes `(aλ, λ/a)` along q and p.
    pub semi_axes_squared: Vec<String>,
    pub semi_axes: Vec<String>,
    /// `π·√(aλ·λ/a) = πλ`.
    pub area: String,
    pub strict: bool,
}

/// Reads `f = (q − q₀) + i·a·(p − p₀)` with rational `a > 0`, `q₀`, `p₀`.
fn linear_form(f: &FormalFunction) -> Result<(Rational, Rational, Rational)> {
    let bad = || Error::NotSupportedForm(format!("expected (q - q0) + I*a*(p - p0) with rational a > 0, got {}", FunctionDisplay(f)));
    if f.tail() != Tail::Exact || f.valuation() != 0 || f.coeffs().len() != 1 || f.coeffs()[0].num_parts() != 1 {
        return Err(bad());
    }
    let g: GaussPoly = f.coeffs()[0].parts().next().ok_or_else(bad)?;
    if !g.is_polynomial() || g.poly.nvars() != Some(2) || g.poly.degree().is_none_or(|d| d != 1) {
        return Err(bad());
    }
    let cq = g.poly.coeff(&Monomial(vec![1, 0]));
    let cp = g.poly.coeff(&Monomial(vec![0, 1]));
    let c0 = g.poly.coeff(&Monomial(vec![0, 0]));
    if cq != ExactComplex::one() || !cp.re.is_zero() || !cp.im.is_positive() {
        return Err(bad());
    }
    let a = cp.im.clone();
    let q0 = -c0.re.clone();
    let p0 = -(&c0.im / &a);
    Ok((a, q0, p0))
}

fn sqrt_string(s: &str) -> String {
    format!("sqrt({s})")
}

/// The negative region of `conj(f) *_M f` for a linear `f` on one pair.
///
/// `conj(f) * f = (q−q₀)² + a²(p−p₀)² − aλ`, an ellipse around `(q₀, p₀)`
/// with semi-axes `√(aλ)` and `√(λ/a)` and area `πλ` for every `a`.
pub fn negative_region(f: &FormalFunction, binding: &LambdaBinding, ctx: &PhaseContext) -> Result<RegionReport> {
    if ctx.pairs() != 1 {
        return Err(Error::NotSupportedForm(format!("negative regions are computed for one pair, got {}", ctx.pairs())));
    }
    let (a, q0, p0) = linear_form(f)?;
    let product = star_mul(&Moyal::new(*ctx), &fs_conj(f), f, None)?;
    let a_inv = Rational::one() / &a;
    let real = |r: &Rational| ExactComplex::real(r.clone());
    let (minimum, axes_sq, area) = match binding {
        LambdaBinding::Formal => {
            let min = FormalScalar::monomial(real(&-a.clone()), 1);
            let ax = [FormalScalar::monomial(real(&a), 1), FormalScalar::monomial(real(&a_inv), 1)];
            let area = ActionValue::monomial(ClosedForm::pi_pow(1), 1);
            (
                ScalarDisplay(&min).to_string(),
                ax.iter().map(|s| ScalarDisplay(s).to_string()).collect::<Vec<_>>(),
                ActionDisplay(&area).to_string(),
            )
        }
        LambdaBinding::Strict(lam) => {
            if !lam.is_positive() {
                return Err(Error::NonPositiveLambda(fmt_rational(lam)));
            }
            let ax = [&a * lam, lam * &a_inv];
            (
                fmt_rational(&-(&a * lam)),
                ax.iter().map(fmt_rational).collect(),
                ClosedForm::term(real(lam), 1, Rational::zero()).to_string(),
            )
        }
    };
    Ok(RegionReport {
        product: FunctionDisplay(&product).to_string(),
        center: vec![fmt_rational(&q0), fmt_rational(&p0)],
        a: fmt_rational(&a),
        minimum,
        semi_axes: axes_sq.iter().map(|s| sqrt_string(s)).collect(),
        semi_axes_squared: axes_sq,
        area,
        strict: matches!(binding, LambdaBinding::Strict(_)),
    })
}

//! Eigenvalue equations for functionals, checked through their action on
//! test monomials.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{action_eval, func_action, func_star_action, functional, Distribution, FormalFunctional};
use crate::closed_form::{ActionDisplay, ActionValue, ClosedForm};
use crate::complex::{fmt_rational, ExactComplex, Rational};
use crate::error::{Error, Result};
use crate::laurent::Tail;
use crate::phase::{GaussPoly, PhaseContext};
use crate::poly::{Monomial, Poly};
use crate::scalar::{rational_pow, scalar_eval, FormalScalar, LambdaBinding};
use crate::series::{fs_bullet, fs_eval_lambda, function, function_one, scalar_action, FormalFunction};
use crate::star::{star_mul, StarFamily, Verdict};

/// One residual `⟨R, ψ⟩` of an eigenvalue equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub test: String,
    pub value: String,
    pub zero: bool,
    /// Lowest λ-power with a nonzero coefficient, for formal residuals.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_power: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenReport {
    /// `Pass` iff every residual vanishes through `checked_order` on the test set.
    pub verdict: Verdict,
    /// `None` when residuals were compared exactly at every power.
    pub checked_order: Option<i64>,
    pub test_degree: u32,
    pub residuals: Vec<Residual>,
    pub commutation_residuals: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Residual>,
}

impl EigenReport {
    fn build(checked_order: Option<i64>, test_degree: u32, residuals: Vec<Residual>, commutation_residuals: Vec<Residual>) -> Self {
        let first_failure = residuals.iter().chain(&commutation_residuals).find(|r| !r.zero).cloned();
        EigenReport {
            verdict: if first_failure.is_some() { Verdict::Fail } else { Verdict::Pass },
            checked_order,
            test_degree,
            residuals,
            commutation_residuals,
            first_failure,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn formal_residual(test: &GaussPoly, v: &ActionValue) -> Residual {
    Residual {
        test: test.to_string(),
        value: ActionDisplay(v).to_string(),
        zero: v.coeffs().iter().all(ClosedForm::is_zero),
        first_power: v.terms().next().map(|(p, _)| p),
    }
}

fn strict_residual(test: &GaussPoly, v: &ClosedForm) -> Residual {
    Residual { test: test.to_string(), value: v.to_string(), zero: v.is_zero(), first_power: None }
}

/// `ξ − a` as a function series.
fn shifted(xi: &FormalFunction, a: &FormalScalar, ctx: &PhaseContext) -> FormalFunction {
    xi - &scalar_action(a, &function_one(ctx))
}

/// `δ_point` is an eigenstate of multiplication by `φ` iff `φ(point) = a`;
/// residuals `(φ(point) − a)·ψ(point)` are listed over the monomial corpus.
pub fn eigencheck_classical(phi: &GaussPoly, a: &ExactComplex, point: &[Rational], ctx: &PhaseContext, test_degree: u32) -> Result<EigenReport> {
    let t = functional(Distribution::delta(point.to_vec()));
    let r = shifted(&function(phi.clone()), &FormalScalar::constant(a.clone()), ctx);
    let mut residuals = Vec::new();
    for psi in ctx.monomials(test_degree) {
        let v = func_action(&t, &fs_bullet(&r, &function(psi.clone())), ctx)?;
        residuals.push(formal_residual(&psi, &v));
    }
    Ok(EigenReport::build(None, test_degree, residuals, Vec::new()))
}

/// Checks `(ξ − a)•T = 0` power by power through its action on the monomial corpus.
pub fn eigencheck_bullet(xi: &FormalFunction, a: &FormalScalar, t: &FormalFunctional, ctx: &PhaseContext, test_degree: u32) -> Result<EigenReport> {
    let r = shifted(xi, a, ctx);
    let mut residuals = Vec::new();
    for psi in ctx.monomials(test_degree) {
        let v = func_action(t, &fs_bullet(&r, &function(psi.clone())), ctx)?;
        residuals.push(formal_residual(&psi, &v));
    }
    let order = residual_order(t, xi, a);
    Ok(EigenReport::build(order, test_degree, residuals, Vec::new()))
}

fn residual_order(t: &FormalFunctional, xi: &FormalFunction, a: &FormalScalar) -> Option<i64> {
    let tails = [t.tail().order(), xi.tail().order(), a.tail().order()];
    tails.into_iter().flatten().min()
}

/// Builds the state for one bound value of λ.
pub type DensityBuilder = Arc<dyn Fn(&Rational) -> Result<Distribution> + Send + Sync>;

/// A candidate eigenstate for the star-genvalue equation.
#[derive(Clone)]
pub enum StarState {
    /// A formal functional independent of any numeric λ.
    Fixed(FormalFunctional),
    /// A density whose shape depends on λ (Gaussian width, Laguerre
    /// argument); it exists only once λ is bound to a number.
    LambdaDensity { label: String, build: DensityBuilder },
}

impl fmt::Debug for StarState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarState::Fixed(t) => f.debug_tuple("Fixed").field(t).finish(),
            StarState::LambdaDensity { label, .. } => f.debug_struct("LambdaDensity").field("label", label).finish(),
        }
    }
}

impl StarState {
    /// The `level`-th oscillator Wigner function on one pair of coordinates.
    pub fn oscillator(ctx: PhaseContext, level: u32) -> StarState {
        StarState::LambdaDensity {
            label: format!("wigner({level})"),
            build: Arc::new(move |lam: &Rational| wigner_density(&ctx, level, lam)),
        }
    }
}

/// Coefficients of the Laguerre polynomial `L_n(x)`, lowest degree first,
/// from `(k+1)L_{k+1} = (2k+1−x)L_k − kL_{k−1}`.
pub fn laguerre(n: u32) -> Vec<Rational> {
    let mut prev: Vec<Rational> = vec![Rational::one()];
    if n == 0 {
        return prev;
    }
    let mut cur: Vec<Rational> = vec![Rational::one(), -Rational::one()];
    for k in 1..n {
        let kk = Rational::from_integer(k.into());
        let mut next = vec![Rational::zero(); cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j] += c * (&kk * Rational::from_integer(2.into()) + Rational::one());
            next[j + 1] -= c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c * &kk;
        }
        let denom = &kk + Rational::one();
        for c in &mut next {
            *c = &*c / &denom;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `W_n = (−1)^n/(πλ) · L_n(2r²/λ) · e^{−r²/λ}` at a fixed λ, for one pair.
pub fn wigner_density(ctx: &PhaseContext, level: u32, lam: &Rational) -> Result<Distribution> {
    if ctx.pairs() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: ctx.pairs() });
    }
    if lam <= &Rational::zero() {
        return Err(Error::NonPositiveLambda(fmt_rational(lam)));
    }
    let r2 = Poly::term(Monomial(vec![2, 0]), ExactComplex::one()) + Poly::term(Monomial(vec![0, 2]), ExactComplex::one());
    let two_over = Rational::from_integer(2.into()) / lam;
    let mut poly = Poly::zero();
    let mut r2k = Poly::one(2);
    for (k, c) in laguerre(level).iter().enumerate() {
        let w = c * rational_pow(&two_over, k as i64);
        poly = poly + &r2k.scale_rational(&w);
        r2k = &r2k * &r2;
    }
    let sign = if level % 2 == 1 { -Rational::one() } else { Rational::one() };
    let g = GaussPoly::new(poly.scale_rational(&(sign / lam)), Rational::one() / lam);
    Ok(Distribution::density(g).scale_pi(&ExactComplex::one(), -1))
}

/// Checks `⟨ξ*T − aT, ψ⟩_* = ⟨T, ψ*(ξ−a)⟩_* = 0` and `⟨ξ*T − T*ξ, ψ⟩_* = 0`
/// for every monomial `ψ` of degree at most `test_degree`.
///
/// Formal binding works power by power through `order` and refuses states
/// whose shape depends on λ. Strict binding evaluates everything at the
/// bound λ and needs every product to terminate.
pub fn eigencheck_star(
    s: &dyn StarFamily,
    xi: &FormalFunction,
    a: &FormalScalar,
    state: &StarState,
    test_degree: u32,
    order: i64,
    binding: &LambdaBinding,
) -> Result<EigenReport> {
    let ctx = s.context();
    match binding {
        LambdaBinding::Formal => {
            let t = match state {
                StarState::Fixed(t) => t,
                StarState::LambdaDensity { label, .. } => {
                    return Err(Error::FormalModeObstruction(format!(
                        "{label} has a lam-dependent Gaussian width; as a series in lam it needs arbitrarily negative powers"
                    )))
                }
            };
            if let Tail::TruncatedAt(n) = t.tail() {
                return Err(Error::TruncatedTail(n));
            }
            let r = shifted(xi, a, &ctx);
            let mut residuals = Vec::new();
            let mut commutation = Vec::new();
            for psi in ctx.monomials(test_degree) {
                let f = function(psi.clone());
                let v = func_star_action(s, t, &star_mul(s, &f, &r, Some(order))?, Some(order))?.truncate(order);
                residuals.push(formal_residual(&psi, &v));
                let c = &star_mul(s, &f, xi, Some(order))? - &star_mul(s, xi, &f, Some(order))?;
                let v = func_star_action(s, t, &c, Some(order))?.truncate(order);
                commutation.push(formal_residual(&psi, &v));
            }
            Ok(EigenReport::build(Some(order), test_degree, residuals, commutation))
        }
        LambdaBinding::Strict(lam) => {
            let d = match state {
                StarState::Fixed(t) => super::functional_eval(t, lam)?,
                StarState::LambdaDensity { build, .. } => build(lam)?,
            };
            let t = functional(d);
            let xi0 = FormalFunction::constant(fs_eval_lambda(xi, lam)?);
            let a0 = scalar_eval(a, binding)?;
            let r = shifted(&xi0, &FormalScalar::constant(a0), &ctx);
            let strict = |f: &FormalFunction, g: &FormalFunction| -> Result<FormalFunction> {
                star_mul(s, f, g, None).map_err(|e| match e {
                    Error::OrderRequired => Error::NonTerminating,
                    other => other,
                })
            };
            let mut residuals = Vec::new();
            let mut commutation = Vec::new();
            for psi in ctx.monomials(test_degree) {
                let f = function(psi.clone());
                let v = action_eval(&func_star_action(s, &t, &strict(&f, &r)?, None)?, lam)?;
                residuals.push(strict_residual(&psi, &v));
                let c = &strict(&f, &xi0)? - &strict(&xi0, &f)?;
                let v = action_eval(&func_star_action(s, &t, &c, None)?, lam)?;
                commutation.push(strict_residual(&psi, &v));
            }
            Ok(EigenReport::build(None, test_degree, residuals, commutation))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{int, rat};
    use crate::scalar::scalar_from_ints;
    use crate::series::function_at;
    use crate::star::Moyal;

    fn ctx() -> PhaseContext {
        PhaseContext::new(1).unwrap()
    }
    fn q() -> GaussPoly {
        ctx().q(0)
    }
    fn p() -> GaussPoly {
        ctx().p(0)
    }
    fn hamiltonian() -> FormalFunction {
        function(q().mul(&q()).add(&p().mul(&p())).unwrap().scale(&ExactComplex::from_ratio(1, 2)))
    }

    #[test]
    fn classical_examples() {
        let c = ctx();
        let r2 = q().mul(&q()).add(&p().mul(&p())).unwrap();
        assert!(eigencheck_classical(&r2, &ExactComplex::from_int(5), &[int(1), int(2)], &c, 2).unwrap().passed());
        assert!(eigencheck_classical(&r2, &ExactComplex::zero(), &[int(0), int(0)], &c, 2).unwrap().passed());
        let r = eigencheck_classical(&q(), &ExactComplex::from_int(2), &[int(1), int(0)], &c, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.first_failure.unwrap().test, "1");
    }

    #[test]
    fn bullet_examples() {
        let c = ctx();
        let one = FormalScalar::constant(ExactComplex::one());
        let d10 = functional(Distribution::delta(vec![int(1), int(0)]));
        assert!(eigencheck_bullet(&function(q()), &one, &d10, &c, 3).unwrap().passed());
        let xi = &function(q()) + &function_at(p(), 1);
        let a = scalar_from_ints(0, &[1, 2], Tail::Exact);
        let d12 = functional(Distribution::delta(vec![int(1), int(2)]));
        assert!(eigencheck_bullet(&xi, &a, &d12, &c, 3).unwrap().passed());
        let g = functional(Distribution::density(c.gaussian(int(1))));
        let r = eigencheck_bullet(&function(q()), &one, &g, &c, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let first = r.first_failure.unwrap();
        assert_eq!((first.test.as_str(), first.value.as_str()), ("1", "-pi"));
        // the residual on q is ∫(q−1)q e^{−r²} = π/2
        assert_eq!(r.residuals[1].value, "pi*1/2");
    }

    #[test]
    fn bullet_eigenstates_are_closed_under_scaling() {
        let c = ctx();
        let xi = &function(q()) + &function_at(p(), 1);
        let a = scalar_from_ints(0, &[1, 2], Tail::Exact);
        let t = functional(Distribution::delta(vec![int(1), int(2)]).scale(&ExactComplex::new(int(3), int(-2))));
        let t = &t + &FormalFunctional::monomial(Distribution::delta(vec![int(1), int(2)]), -2);
        assert!(eigencheck_bullet(&xi, &a, &t, &c, 3).unwrap().passed());
    }

    #[test]
    fn laguerre_matches_closed_forms() {
        assert_eq!(laguerre(0), vec![int(1)]);
        assert_eq!(laguerre(1), vec![int(1), int(-1)]);
        assert_eq!(laguerre(2), vec![int(1), int(-2), rat(1, 2)]);
        assert_eq!(laguerre(3), vec![int(1), int(-3), rat(3, 2), rat(-1, 6)]);
    }

    #[test]
    fn first_excited_state_shape() {
        let d = wigner_density(&ctx(), 1, &int(1)).unwrap();
        assert_eq!(d.to_string(), "pi^-1*density(-gauss(1) + 2*gauss(1)*q^2 + 2*gauss(1)*p^2)");
    }

    #[test]
    fn oscillator_states_pass_strictly() {
        let c = ctx();
        let m = Moyal::new(c);
        for lam in [int(1), rat(1, 2)] {
            for n in 0..=3u32 {
                let e = &lam * (Rational::from_integer(n.into()) + rat(1, 2));
                let a = FormalScalar::constant(ExactComplex::real(e));
                let r = eigencheck_star(&m, &hamiltonian(), &a, &StarState::oscillator(c, n), 3, 4, &LambdaBinding::Strict(lam.clone()))
                    .unwrap();
                assert!(r.passed(), "n = {n}, lam = {lam}: {:?}", r.first_failure);
            }
        }
    }

    #[test]
    fn wrong_level_is_rejected() {
        let c = ctx();
        let a = FormalScalar::constant(ExactComplex::from_ratio(3, 2));
        let r = eigencheck_star(&Moyal::new(c), &hamiltonian(), &a, &StarState::oscillator(c, 0), 2, 4, &LambdaBinding::Strict(int(1))).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.commutation_residuals.iter().all(|x| x.zero));
    }

    #[test]
    fn formal_mode_refuses_lambda_dependent_widths() {
        let c = ctx();
        let a = FormalScalar::constant(ExactComplex::from_ratio(1, 2));
        let r = eigencheck_star(&Moyal::new(c), &hamiltonian(), &a, &StarState::oscillator(c, 0), 2, 4, &LambdaBinding::Formal);
        assert!(matches!(r, Err(Error::FormalModeObstruction(_))));
    }

    #[test]
    fn formal_delta_fails_at_order_zero() {
        let c = ctx();
        let t = StarState::Fixed(functional(Distribution::delta(vec![int(0), int(0)])));
        let r = eigencheck_star(&Moyal::new(c), &function(q()), &FormalScalar::zero(), &t, 2, 3, &LambdaBinding::Formal).unwrap();
        let first = r.first_failure.unwrap();
        assert_eq!(first.test, "p");
        assert_eq!(first.value, "-1/2*I + O(lam^4)");
        assert_eq!(first.first_power, Some(0));
    }
}

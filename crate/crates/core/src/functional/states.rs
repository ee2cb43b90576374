//! State conditions: reality, positivity and normalization.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{func_action, func_star_action, Distribution, FormalFunctional};
use crate::closed_form::{ActionDisplay, ActionValue, ClosedForm};
use crate::complex::{fmt_rational, rat, ExactComplex, Rational};
use crate::error::{Error, Result};
use crate::laurent::Tail;
use crate::phase::{GaussSum, PhaseContext};
use crate::scalar::{rational_pow, scalar_conj, scalar_from_ints, scalar_mul};
use crate::series::{fs_bullet, fs_conj, fs_eval_lambda, fs_is_real, function_one, scalar_action, FormalFunction, FunctionDisplay};
use crate::star::{star_mul, StarFamily};

/// Sampled stand-in for "every λ > 0".
pub const DEFAULT_LAMBDA_SAMPLES: &[(i64, i64)] = &[(1, 10), (1, 2), (1, 1), (2, 1)];

pub fn default_lambda_samples() -> Vec<Rational> {
    DEFAULT_LAMBDA_SAMPLES.iter().map(|&(n, d)| rat(n, d)).collect()
}

/// The action used by state conditions: plain for the undeformed family, star otherwise.
pub(crate) fn state_action(s: &dyn StarFamily, t: &FormalFunctional, f: &FormalFunction, order: Option<i64>) -> Result<ActionValue> {
    if s.is_pointwise() {
        func_action(t, f, &s.context())
    } else {
        func_star_action(s, t, f, order)
    }
}

/// `conj(f) ∘ f` with the family's product.
fn hermitian_square(s: &dyn StarFamily, f: &FormalFunction, order: i64) -> Result<FormalFunction> {
    if s.is_pointwise() {
        Ok(fs_bullet(&fs_conj(f), f))
    } else {
        star_mul(s, &fs_conj(f), f, Some(order))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealityFailure {
    pub witness: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealityReport {
    pub pass: bool,
    /// Every weight and density of every `T_l` is real.
    pub structural: bool,
    /// Every action on a real witness is coefficientwise real.
    pub witnessed: bool,
    pub witnesses_checked: usize,
    /// Witnesses ignored because they are not real.
    pub witnesses_skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<RealityFailure>,
}

pub fn reality_check(t: &FormalFunctional, witnesses: &[FormalFunction], ctx: &PhaseContext) -> Result<RealityReport> {
    let structural = t.coeffs().iter().all(Distribution::is_real);
    let mut first_failure = None;
    let mut checked = 0;
    let mut skipped = 0;
    for w in witnesses {
        if !fs_is_real(w) {
            skipped += 1;
            continue;
        }
        checked += 1;
        let v = func_action(t, w, ctx)?;
        if first_failure.is_none() && !v.coeffs().iter().all(ClosedForm::is_real) {
            first_failure = Some(RealityFailure { witness: FunctionDisplay(w).to_string(), value: ActionDisplay(&v).to_string() });
        }
    }
    let witnessed = first_failure.is_none();
    Ok(RealityReport {
        pass: structural && witnessed,
        structural,
        witnessed,
        witnesses_checked: checked,
        witnesses_skipped: skipped,
        first_failure,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Nonnegative,
    Negative,
    NonReal,
    /// Interval refinement could not separate the value from zero.
    Undecided,
}

fn classify(v: &ClosedForm) -> SignClass {
    if !v.is_real() {
        return SignClass::NonReal;
    }
    match v.real_sign() {
        Some(Ordering::Less) => SignClass::Negative,
        Some(_) => SignClass::Nonnegative,
        None => SignClass::Undecided,
    }
}

/// Partial-sum analysis of one value series at one λ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleOutcome {
    pub witness: String,
    pub lambda: String,
    /// `(m, Σ_{l ≤ m} c_l λ^l)` for every known power `m`.
    pub partial_sums: Vec<(i64, String)>,
    /// Least `k` with every partial sum from `k` on nonnegative.
    pub stable_from: Option<i64>,
    /// Least `k` with every partial sum from `k` on negative.
    pub negative_from: Option<i64>,
    pub sign: SignClass,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegativityWitness {
    pub witness: String,
    pub lambda: String,
    pub k: i64,
    pub value: String,
}

/// The value route: the whole known series evaluated at λ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueSample {
    pub witness: String,
    pub lambda: String,
    pub value: String,
    pub sign: SignClass,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub family: String,
    pub positive: bool,
    pub order: i64,
    /// Positivity is asserted only for these values of λ.
    pub lambda_samples: Vec<String>,
    /// `(witness, ⟨T, conj(f)∘f⟩)` as formal series.
    pub values: Vec<(String, String)>,
    pub samples: Vec<SampleOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<NegativityWitness>,
    pub value_route: Vec<ValueSample>,
}

/// Truncates at `order` unless the series is exact and already ends there.
fn cap(v: ActionValue, order: i64) -> ActionValue {
    if v.is_exact() && v.top_power().is_none_or(|t| t <= order) {
        v
    } else {
        v.truncate(order)
    }
}

fn analyse(witness: &str, v: &ActionValue, lam: &Rational, order: i64) -> SampleOutcome {
    let top = match v.tail() {
        Tail::Exact => v.top_power().map_or(order, |t| t.min(order)),
        Tail::TruncatedAt(n) => n.min(order),
    };
    let mut sums = Vec::new();
    let mut acc = ClosedForm::zero();
    for (p, c) in v.terms() {
        if p > top {
            break;
        }
        acc = acc + &c.scale(&ExactComplex::real(rational_pow(lam, p)));
        sums.push((p, acc.clone()));
    }
    let classes: Vec<SignClass> = sums.iter().map(|(_, s)| classify(s)).collect();
    let run_start = |want: SignClass| -> Option<i64> {
        let mut start = None;
        for (i, c) in classes.iter().enumerate().rev() {
            if *c != want {
                break;
            }
            start = Some(sums[i].0);
        }
        start
    };
    let sign = classes.last().copied().unwrap_or(SignClass::Nonnegative);
    let stable_from = if sums.is_empty() { Some(v.valuation()) } else { run_start(SignClass::Nonnegative) };
    SampleOutcome {
        witness: witness.to_string(),
        lambda: fmt_rational(lam),
        partial_sums: sums.iter().map(|(p, s)| (*p, s.to_string())).collect(),
        stable_from,
        negative_from: run_start(SignClass::Negative),
        sign,
    }
}

/// Order-based positivity: for each witness `f` the series `⟨T, conj(f)∘f⟩`
/// must have partial sums that are eventually nonnegative at every sampled λ.
pub fn positivity_check(
    s: &dyn StarFamily,
    t: &FormalFunctional,
    witnesses: &[FormalFunction],
    lambda_samples: &[Rational],
    order: i64,
) -> Result<PositivityReport> {
    for lam in lambda_samples {
        if lam <= &Rational::zero() {
            return Err(Error::NonPositiveLambda(fmt_rational(lam)));
        }
    }
    let mut values = Vec::new();
    let mut samples = Vec::new();
    let mut value_route = Vec::new();
    let mut counterexample = None;
    let mut positive = true;
    for f in witnesses {
        let name = FunctionDisplay(f).to_string();
        let sq = hermitian_square(s, f, order)?;
        let v = cap(state_action(s, t, &sq, Some(order))?, order);
        values.push((name.clone(), ActionDisplay(&v).to_string()));
        for lam in lambda_samples {
            let out = analyse(&name, &v, lam, order);
            if out.sign != SignClass::Nonnegative {
                positive = false;
            }
            if counterexample.is_none() && out.sign == SignClass::Negative {
                counterexample = Some(NegativityWitness {
                    witness: name.clone(),
                    lambda: out.lambda.clone(),
                    k: out.negative_from.unwrap_or(order),
                    value: out.partial_sums.last().map(|(_, s)| s.clone()).unwrap_or_default(),
                });
            }
            let total = out.partial_sums.last().map(|(_, s)| s.clone()).unwrap_or_else(|| "0".into());
            value_route.push(ValueSample { witness: name.clone(), lambda: out.lambda.clone(), value: total, sign: out.sign });
            samples.push(out);
        }
    }
    Ok(PositivityReport {
        family: s.name().to_string(),
        positive,
        order,
        lambda_samples: lambda_samples.iter().map(fmt_rational).collect(),
        values,
        samples,
        counterexample,
        value_route,
    })
}

/// Positivity read classically: at each sampled λ the witness becomes an
/// ordinary function `φ`, and partial sums `Σ_{l ≤ u} λ^l ⟨T_l, |φ|²⟩` must be
/// eventually nonnegative.
pub fn classical_positivity(
    t: &FormalFunctional,
    witnesses: &[FormalFunction],
    lambda_samples: &[Rational],
    order: i64,
    ctx: &PhaseContext,
) -> Result<PositivityReport> {
    let mut samples = Vec::new();
    let mut value_route = Vec::new();
    let mut counterexample = None;
    let mut positive = true;
    for f in witnesses {
        let name = FunctionDisplay(f).to_string();
        for lam in lambda_samples {
            if lam <= &Rational::zero() {
                return Err(Error::NonPositiveLambda(fmt_rational(lam)));
            }
            let phi = fs_eval_lambda(f, lam)?;
            let sq = &phi.conj() * &phi;
            let v = cap(t.try_map(|_, d| d.act(&sq, ctx))?, order);
            let out = analyse(&name, &v, lam, order);
            if out.sign != SignClass::Nonnegative {
                positive = false;
            }
            if counterexample.is_none() && out.sign == SignClass::Negative {
                counterexample = Some(NegativityWitness {
                    witness: name.clone(),
                    lambda: out.lambda.clone(),
                    k: out.negative_from.unwrap_or(order),
                    value: out.partial_sums.last().map(|(_, s)| s.clone()).unwrap_or_default(),
                });
            }
            let total = out.partial_sums.last().map(|(_, s)| s.clone()).unwrap_or_else(|| "0".into());
            value_route.push(ValueSample { witness: name.clone(), lambda: out.lambda.clone(), value: total, sign: out.sign });
            samples.push(out);
        }
    }
    Ok(PositivityReport {
        family: "classical".into(),
        positive,
        order,
        lambda_samples: lambda_samples.iter().map(fmt_rational).collect(),
        values: Vec::new(),
        samples,
        counterexample,
        value_route,
    })
}

/// What reading positivity power by power would demand of a classical functional.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoGoReport {
    /// `v = ⟨T, |φ₀|²⟩`.
    pub value: String,
    /// `⟨T, conj(w)•w⟩` for each witness.
    pub series: Vec<String>,
    /// Multipliers `m_l` with `⟨T, conj(w)•w⟩ = Σ λ^l m_l v`, for `w = φ₀` and `w = φ₀ − λφ₀`.
    pub multipliers: Vec<Vec<(i64, i64)>>,
    /// Some `m_l > 0` forces `v ≥ 0`.
    pub forces_nonnegative: bool,
    /// Some `m_l < 0` forces `v ≤ 0`.
    pub forces_nonpositive: bool,
    /// Both bounds together force `v = 0`.
    pub forced_zero: bool,
    /// The functional already violates the forced value.
    pub contradiction: bool,
}

/// Per-power nonnegativity applied to the witnesses `φ₀` and `φ₀ − λφ₀`.
pub fn per_power_constraints(t: &Distribution, phi0: &GaussSum, ctx: &PhaseContext) -> Result<NoGoReport> {
    let v = t.act(&(&phi0.conj() * phi0), ctx)?;
    let tf = FormalFunctional::constant(t.clone());
    let mut multipliers = Vec::new();
    let mut series_values = Vec::new();
    for c in [scalar_from_ints(0, &[1], Tail::Exact), scalar_from_ints(0, &[1, -1], Tail::Exact)] {
        let w = scalar_action(&c, &FormalFunction::constant(phi0.clone()));
        let series = func_action(&tf, &fs_bullet(&fs_conj(&w), &w), ctx)?;
        // conj(cφ₀)•(cφ₀) = |c|²·|φ₀|² with |c|² an integer series
        let m = scalar_mul(&scalar_conj(&c), &c);
        debug_assert_eq!(series, m.map(|x| v.scale(x)));
        series_values.push(ActionDisplay(&series).to_string());
        multipliers.push(m.terms().map(|(p, x)| (p, x.re.to_integer().try_into().unwrap_or(0))).collect::<Vec<(i64, i64)>>());
    }
    let pos = multipliers.iter().flatten().any(|(_, m)| *m > 0);
    let neg = multipliers.iter().flatten().any(|(_, m)| *m < 0);
    let forced_zero = pos && neg;
    Ok(NoGoReport {
        value: v.to_string(),
        series: series_values,
        multipliers,
        forces_nonnegative: pos,
        forces_nonpositive: neg,
        forced_zero,
        contradiction: forced_zero && !v.is_zero(),
    })
}

/// Finds `A` with `⟨A·T, 1⟩ = 1` through λ^order (star action, or plain for
/// the undeformed family) and returns `(A, A·T)`.
pub fn normalize_functional(s: &dyn StarFamily, t: &FormalFunctional, order: i64) -> Result<(ActionValue, FormalFunctional)> {
    let one = function_one(&s.context());
    let n = state_action(s, t, &one, Some(order))?;
    let lead = n.leading().ok_or_else(|| Error::NotNormalizable("the action on 1 vanishes".into()))?;
    if lead.inverse().is_none() {
        return Err(Error::NotNormalizable(format!("leading value {lead} is not a single power of pi")));
    }
    let a = n.inverse_with(order, ClosedForm::inverse, |x, y| x * y)?;
    let scaled = a.try_mul_with(t, |c, d| d.scale_closed(c))?;
    Ok((a, scaled))
}

impl SampleOutcome {
    pub fn is_nonnegative(&self) -> bool {
        self.sign == SignClass::Nonnegative
    }
}

/// `1` as an action value, for comparisons against normalized results.
pub fn action_one() -> ActionValue {
    ActionValue::constant(ClosedForm::from_complex(ExactComplex::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::FunctionalDisplay;
    use crate::complex::int;
    use crate::phase::GaussPoly;
    use crate::series::{function, function_at};
    use crate::star::{Bullet, Moyal};

    fn ctx() -> PhaseContext {
        PhaseContext::new(1).unwrap()
    }
    fn q() -> GaussPoly {
        ctx().q(0)
    }
    fn p() -> GaussPoly {
        ctx().p(0)
    }
    fn origin() -> Vec<Rational> {
        vec![int(0), int(0)]
    }
    fn q_plus_ip() -> FormalFunction {
        function(q().add(&p().scale(&ExactComplex::i())).unwrap())
    }
    fn corpus() -> Vec<FormalFunction> {
        vec![function_one(&ctx()), function(q()), function(p()), function(q().mul(&p())), &function(q()) + &function_at(p(), 1)]
    }

    #[test]
    fn reality_examples() {
        let c = ctx();
        let d = functional_of(Distribution::delta(vec![int(1), int(2)]));
        assert!(reality_check(&d, &corpus(), &c).unwrap().pass);
        let di = functional_of(Distribution::delta(origin()).scale(&ExactComplex::i()));
        let r = reality_check(&di, &corpus(), &c).unwrap();
        assert!(!r.pass && !r.structural && !r.witnessed);
        assert_eq!(r.first_failure.unwrap().witness, "1");
        let mixed = &functional_of(Distribution::density(q().mul(&c.gaussian(int(1)))))
            + &FormalFunctional::monomial(Distribution::delta(origin()), 1);
        let r = reality_check(&mixed, &corpus(), &c).unwrap();
        assert!(r.structural && r.witnessed);
        let r = reality_check(&d, &[q_plus_ip()], &c).unwrap();
        assert_eq!((r.witnesses_checked, r.witnesses_skipped), (0, 1));
    }

    fn functional_of(d: Distribution) -> FormalFunctional {
        FormalFunctional::constant(d)
    }

    #[test]
    fn delta_is_positive_over_bullet() {
        let c = ctx();
        let mut ws = corpus();
        ws.push(q_plus_ip());
        let r = positivity_check(&Bullet::new(c), &functional_of(Distribution::delta(origin())), &ws, &default_lambda_samples(), 4).unwrap();
        assert!(r.positive, "{r:?}");
        assert!(r.counterexample.is_none());
    }

    #[test]
    fn delta_is_not_a_moyal_state() {
        let c = ctx();
        let r = positivity_check(&Moyal::new(c), &functional_of(Distribution::delta(origin())), &[q_plus_ip()], &default_lambda_samples(), 4)
            .unwrap();
        assert!(!r.positive);
        assert_eq!(r.values[0].1, "-1");
        for v in &r.value_route {
            assert_eq!(v.value, "-1");
            assert_eq!(v.sign, SignClass::Negative);
        }
        let cx = r.counterexample.unwrap();
        assert_eq!((cx.witness.as_str(), cx.value.as_str()), ("q + I*p", "-1"));
    }

    #[test]
    fn normalized_gaussian_is_positive_on_the_witness() {
        let c = ctx();
        let t = functional_of(Distribution::density(c.gaussian(int(1))).scale_pi(&ExactComplex::one(), -1));
        let r = positivity_check(&Moyal::new(c), &t, &[q_plus_ip()], &[rat(1, 2)], 4).unwrap();
        assert_eq!(r.values[0].1, "lam^-1 - 1");
        assert_eq!(r.value_route[0].value, "1");
        assert!(r.positive);
        // at λ = 2 the same series is negative
        let r = positivity_check(&Moyal::new(c), &t, &[q_plus_ip()], &[int(2)], 4).unwrap();
        assert_eq!(r.value_route[0].value, "-1/2");
        assert!(!r.positive);
    }

    #[test]
    fn partial_sums_locate_the_stable_index() {
        let v = ActionValue::new(
            -1,
            vec![ClosedForm::from_complex(ExactComplex::from_int(-1)), ClosedForm::from_complex(ExactComplex::from_int(3))],
            Tail::Exact,
        );
        let out = analyse("w", &v, &int(1), 4);
        assert_eq!(out.stable_from, Some(0));
        assert_eq!(out.negative_from, None);
        let out = analyse("w", &v, &rat(1, 10), 4);
        assert_eq!(out.stable_from, None);
        assert_eq!(out.negative_from, Some(-1));
    }

    #[test]
    fn classical_route_agrees_with_bullet_route() {
        let c = ctx();
        let ts = vec![
            functional_of(Distribution::delta(origin())),
            functional_of(Distribution::delta(origin()).scale(&ExactComplex::from_int(-1))),
            &functional_of(Distribution::delta(origin())) - &FormalFunctional::monomial(Distribution::delta(vec![int(1), int(0)]), 1),
            functional_of(Distribution::density(q().mul(&q()).mul(&c.gaussian(int(1))))),
        ];
        let mut ws = corpus();
        ws.push(q_plus_ip());
        let samples = default_lambda_samples();
        for t in &ts {
            let b = positivity_check(&Bullet::new(c), t, &ws, &samples, 4).unwrap();
            let cl = classical_positivity(t, &ws, &samples, 4, &c).unwrap();
            assert_eq!(b.positive, cl.positive, "{}", FunctionalDisplay(t));
        }
    }

    #[test]
    fn per_power_reading_forces_zero() {
        let c = ctx();
        let r = per_power_constraints(&Distribution::delta(origin()), &GaussSum::from(c.one()), &c).unwrap();
        assert_eq!(r.value, "1");
        assert_eq!(r.series, vec!["1".to_string(), "1 - 2*lam + lam^2".to_string()]);
        assert_eq!(r.multipliers, vec![vec![(0, 1)], vec![(0, 1), (1, -2), (2, 1)]]);
        assert!(r.forced_zero);
        assert!(r.contradiction);
    }

    #[test]
    fn normalization_examples() {
        let c = ctx();
        let m = Moyal::new(c);
        let d = functional_of(Distribution::delta(origin()));
        let (a, t) = normalize_functional(&m, &d, 4).unwrap();
        assert_eq!(ActionDisplay(&a).to_string(), "lam");
        assert_eq!(FunctionalDisplay(&t).to_string(), "lam*delta(0,0)");
        let n = func_star_action(&m, &t, &function_one(&c), None).unwrap();
        assert!(n.agrees_through(&action_one(), 4));

        let two_plus_lam = &functional_of(Distribution::delta(origin()).scale(&ExactComplex::from_int(2)))
            + &FormalFunctional::monomial(Distribution::delta(origin()), 1);
        let (a, t) = normalize_functional(&Bullet::new(c), &two_plus_lam, 3).unwrap();
        assert_eq!(ActionDisplay(&a).to_string(), "1/2 - 1/4*lam + 1/8*lam^2 - 1/16*lam^3 + O(lam^4)");
        let n = func_action(&t, &function_one(&c), &c).unwrap();
        assert!(n.agrees_through(&action_one(), 3));

        let (a, t) = normalize_functional(&Bullet::new(c), &d, 3).unwrap();
        assert_eq!(ActionDisplay(&a).to_string(), "1");
        assert_eq!(t, d);
    }

    #[test]
    fn gaussian_normalization_carries_inverse_pi() {
        let c = ctx();
        let t = functional_of(Distribution::density(c.gaussian(int(1))));
        let (a, t2) = normalize_functional(&Moyal::new(c), &t, 2).unwrap();
        assert_eq!(ActionDisplay(&a).to_string(), "pi^-1*lam");
        assert_eq!(FunctionalDisplay(&t2).to_string(), "pi^-1*lam*density(gauss(1))");
    }

    #[test]
    fn zero_functional_is_not_normalizable() {
        let c = ctx();
        let t = functional_of(Distribution::density(q().mul(&c.gaussian(int(1)))));
        assert!(matches!(normalize_functional(&Moyal::new(c), &t, 2), Err(Error::NotNormalizable(_))));
    }

    #[test]
    fn witnesses_with_principal_parts() {
        let c = ctx();
        let w = scalar_action(&scalar_from_ints(-1, &[1, 1], Tail::Exact), &function(q()));
        let r = positivity_check(&Bullet::new(c), &functional_of(Distribution::delta(vec![int(1), int(0)])), &[w], &[int(1)], 4).unwrap();
        assert_eq!(r.values[0].1, "lam^-2 + 2*lam^-1 + 1");
        assert!(r.positive);
    }
}

//! Exact JSON forms of engine values.
//!
//! Rationals are `[num, den]`, complex numbers `[re_num, re_den, im_num, im_den]`.
//! Integers beyond the `i64` range are written as decimal strings.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::closed_form::{ActionValue, ClosedForm};
use crate::complex::{ExactComplex, Rational};
use crate::error::{Error, Result};
use crate::functional::{Distribution, FormalFunctional, FunctionalTerm};
use crate::laurent::{Coefficient, Laurent, Tail};
use crate::phase::{GaussPoly, GaussSum};
use crate::poly::{Monomial, Poly};
use crate::scalar::FormalScalar;
use crate::series::FormalFunction;

fn bad(what: &str, v: &Value) -> Error {
    Error::Json(format!("expected {what}, found {v}"))
}

fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("an integer", v)),
        Value::String(s) => s.parse().map_err(|_| bad("an integer", v)),
        _ => Err(bad("an integer", v)),
    }
}

fn small_from_json(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad("an integer", v))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Json(format!("missing field `{key}` in {v}")))
}

pub fn rational_to_json(r: &Rational) -> Value {
    json!([int_to_json(r.numer()), int_to_json(r.denom())])
}

fn ratio(n: &Value, d: &Value, whole: &Value) -> Result<Rational> {
    let d = int_from_json(d)?;
    if d.is_zero() {
        return Err(bad("a nonzero denominator", whole));
    }
    Ok(Rational::new(int_from_json(n)?, d))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match array(v, "[num, den]")?.as_slice() {
        [n, d] => ratio(n, d, v),
        _ => Err(bad("[num, den]", v)),
    }
}

pub fn complex_to_json(c: &ExactComplex) -> Value {
    json!([int_to_json(c.re.numer()), int_to_json(c.re.denom()), int_to_json(c.im.numer()), int_to_json(c.im.denom())])
}

pub fn complex_from_json(v: &Value) -> Result<ExactComplex> {
    match array(v, "[re_num, re_den, im_num, im_den]")?.as_slice() {
        [a, b, c, d] => Ok(ExactComplex::new(ratio(a, b, v)?, ratio(c, d, v)?)),
        _ => Err(bad("[re_num, re_den, im_num, im_den]", v)),
    }
}

pub fn tail_to_json(t: Tail) -> Value {
    match t {
        Tail::Exact => json!("exact"),
        Tail::TruncatedAt(n) => json!({ "truncated_at": n }),
    }
}

pub fn tail_from_json(v: &Value) -> Result<Tail> {
    if v.as_str() == Some("exact") {
        return Ok(Tail::Exact);
    }
    let n = v.get("truncated_at").ok_or_else(|| bad("\"exact\" or {\"truncated_at\": N}", v))?;
    Ok(Tail::TruncatedAt(small_from_json(n)?))
}

fn series_to_json<C: Coefficient>(s: &Laurent<C>, coeff: impl Fn(&C) -> Value) -> Value {
    json!({
        "valuation": s.valuation(),
        "coeffs": s.coeffs().iter().map(coeff).collect::<Vec<_>>(),
        "tail": tail_to_json(s.tail()),
    })
}

fn series_from_json<C: Coefficient>(v: &Value, coeff: impl Fn(&Value) -> Result<C>) -> Result<Laurent<C>> {
    let val = small_from_json(field(v, "valuation")?)?;
    let coeffs = array(field(v, "coeffs")?, "a coefficient list")?.iter().map(coeff).collect::<Result<Vec<_>>>()?;
    let tail = tail_from_json(field(v, "tail")?)?;
    Ok(Laurent::new(val, coeffs, tail))
}

pub fn scalar_to_json(s: &FormalScalar) -> Value {
    series_to_json(s, complex_to_json)
}

pub fn scalar_from_json(v: &Value) -> Result<FormalScalar> {
    series_from_json(v, complex_from_json)
}

pub fn gauss_poly_to_json(g: &GaussPoly) -> Value {
    let terms: Vec<Value> = g.poly.terms().map(|(m, c)| json!({ "exps": m.0, "coeff": complex_to_json(c) })).collect();
    json!({ "alpha": rational_to_json(&g.alpha), "terms": terms })
}

pub fn gauss_poly_from_json(v: &Value) -> Result<GaussPoly> {
    let alpha = rational_from_json(field(v, "alpha")?)?;
    let mut terms = Vec::new();
    for t in array(field(v, "terms")?, "a term list")? {
        let exps = array(field(t, "exps")?, "an exponent list")?
            .iter()
            .map(|e| e.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| bad("a nonnegative exponent", e)))
            .collect::<Result<Vec<u32>>>()?;
        terms.push((Monomial(exps), complex_from_json(field(t, "coeff")?)?));
    }
    if let Some(w) = terms.windows(2).find(|w| w[0].0.nvars() != w[1].0.nvars()) {
        return Err(Error::DimensionMismatch { expected: w[0].0.nvars(), found: w[1].0.nvars() });
    }
    GaussPoly::try_new(Poly::from_terms(terms), alpha)
}

fn gauss_sum_to_json(g: &GaussSum) -> Value {
    Value::Array(g.parts().map(|p| gauss_poly_to_json(&p)).collect())
}

fn gauss_sum_from_json(v: &Value) -> Result<GaussSum> {
    let mut acc = GaussSum::zero();
    for p in array(v, "a list of Gaussian polynomials")? {
        acc = acc + &GaussSum::from(gauss_poly_from_json(p)?);
    }
    Ok(acc)
}

pub fn function_to_json(f: &FormalFunction) -> Value {
    series_to_json(f, gauss_sum_to_json)
}

pub fn function_from_json(v: &Value) -> Result<FormalFunction> {
    series_from_json(v, gauss_sum_from_json)
}

fn closed_form_to_json(c: &ClosedForm) -> Value {
    let terms: Vec<Value> = c
        .terms()
        .map(|((k, r), w)| json!({ "coeff": complex_to_json(w), "pi_power": k, "exp": rational_to_json(r) }))
        .collect();
    Value::Array(terms)
}

fn closed_form_from_json(v: &Value) -> Result<ClosedForm> {
    let mut acc = ClosedForm::zero();
    for t in array(v, "a list of closed-form terms")? {
        let k = small_from_json(field(t, "pi_power")?)?;
        let k = i32::try_from(k).map_err(|_| bad("a small power of pi", t))?;
        acc = acc + &ClosedForm::term(complex_from_json(field(t, "coeff")?)?, k, rational_from_json(field(t, "exp")?)?);
    }
    Ok(acc)
}

/// Action values: each coefficient is a list of `{coeff, pi_power, exp}` terms for `coeff·π^pi_power·e^exp`.
pub fn action_to_json(a: &ActionValue) -> Value {
    series_to_json(a, closed_form_to_json)
}

pub fn action_from_json(v: &Value) -> Result<ActionValue> {
    series_from_json(v, closed_form_from_json)
}

fn term_to_json(t: &FunctionalTerm, pi_power: i32) -> Value {
    match t {
        FunctionalTerm::PointDeriv { point, multi_index, weight } => json!({
            "point_deriv": {
                "point": point.iter().map(rational_to_json).collect::<Vec<_>>(),
                "multi_index": multi_index,
                "weight": complex_to_json(weight),
            },
            "pi_power": pi_power,
        }),
        FunctionalTerm::Density(g) => json!({ "density": gauss_poly_to_json(g), "pi_power": pi_power }),
    }
}

fn term_from_json(v: &Value) -> Result<Distribution> {
    let k = match v.get("pi_power") {
        Some(k) => i32::try_from(small_from_json(k)?).map_err(|_| bad("a small power of pi", v))?,
        None => 0,
    };
    let d = if let Some(pd) = v.get("point_deriv") {
        let point = array(field(pd, "point")?, "a point")?.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
        let multi_index = array(field(pd, "multi_index")?, "a multi-index")?
            .iter()
            .map(|e| e.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| bad("a nonnegative index", e)))
            .collect::<Result<Vec<u32>>>()?;
        if point.len() != multi_index.len() {
            return Err(Error::DimensionMismatch { expected: point.len(), found: multi_index.len() });
        }
        let weight = complex_from_json(field(pd, "weight")?)?;
        Distribution::point_deriv(point, multi_index, weight)
    } else if let Some(g) = v.get("density") {
        Distribution::density(gauss_poly_from_json(g)?)
    } else {
        return Err(bad("a point_deriv or density term", v));
    };
    Ok(d.scale_pi(&num_traits::One::one(), k))
}

fn distribution_to_json(d: &Distribution) -> Value {
    Value::Array(d.terms().iter().map(|(t, k)| term_to_json(t, *k)).collect())
}

fn distribution_from_json(v: &Value) -> Result<Distribution> {
    let mut acc = Distribution::zero();
    for t in array(v, "a list of functional terms")? {
        acc = acc + &term_from_json(t)?;
    }
    Ok(acc)
}

pub fn functional_to_json(t: &FormalFunctional) -> Value {
    series_to_json(t, distribution_to_json)
}

pub fn functional_from_json(v: &Value) -> Result<FormalFunctional> {
    series_from_json(v, distribution_from_json)
}

//! Star products given by families of bidifferential operators `B_k`, with
//! `F * G = Σ λ^k B_k(F, G)` extended to series by the graded Cauchy rule.

mod axioms;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

pub use axioms::{axiom_suite, AxiomReport, AxiomResult, Counterexample, Verdict};

use crate::closed_form::{ActionValue, PiRational};
use crate::complex::{ExactComplex, Rational};
use crate::error::{Error, Result};
use crate::laurent::Tail;
use crate::phase::{GaussPoly, GaussSum, PhaseContext};
use crate::poly::Poly;
use crate::series::{fs_bullet, fs_integrate, from_power_map, function_one, FormalFunction};

/// A family `{B_k}` of bidifferential operators on phase-space functions.
///
/// `B_0` must be the pointwise product for the family to be a deformation;
/// the axiom suite checks this rather than assuming it.
pub trait StarFamily: Sync {
    fn name(&self) -> &str;

    fn context(&self) -> PhaseContext;

    /// `B_k(f, g)`; the decay rate of the result is `α_f + α_g`.
    fn bidiff(&self, k: usize, f: &GaussPoly, g: &GaussPoly) -> GaussPoly;

    /// Least `K` with `B_k(f, g) = 0` for every `k > K`; `None` when the expansion never stops.
    fn termination_bound(&self, f: &GaussPoly, g: &GaussPoly) -> Option<usize>;

    /// The weight `t` making `F ↦ λ^{-n} ∫ F•t` a trace.
    fn trace_density(&self) -> FormalFunction {
        function_one(&self.context())
    }

    /// True when `∫ f*g = ∫ f·g`, so that star actions reduce to plain actions.
    fn is_closed(&self) -> bool {
        false
    }

    /// True for the undeformed family. State conditions (positivity,
    /// normalization) then use plain actions without the `λ^{-n}` prefactor.
    fn is_pointwise(&self) -> bool {
        false
    }
}

/// The Moyal product on R^(2n).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Moyal {
    ctx: PhaseContext,
}

impl Moyal {
    pub fn new(ctx: PhaseContext) -> Self {
        Moyal { ctx }
    }
}

/// The trivial deformation: `B_0 = ·`, `B_k = 0` for `k ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bullet {
    ctx: PhaseContext,
}

impl Bullet {
    pub fn new(ctx: PhaseContext) -> Self {
        Bullet { ctx }
    }
}

/// Every split of `k` into `parts` ordered nonnegative summands.
pub(crate) fn compositions(k: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(k);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=k {
            cur.push(a);
            go(k - a, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(k, parts, &mut Vec::new(), &mut out);
    }
    out
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, j| acc * Rational::from_integer((j as i64).into()))
}

impl StarFamily for Moyal {
    fn name(&self) -> &str {
        "moyal"
    }

    fn context(&self) -> PhaseContext {
        self.ctx
    }

    /// `B_k = (i/2)^k Σ_{|m|=k} Π_i (1/a_i! b_i!) (−1)^{b_i}
    ///   ∂_{q_i}^{a_i} ∂_{p_i}^{b_i} f · ∂_{p_i}^{a_i} ∂_{q_i}^{b_i} g`.
    fn bidiff(&self, k: usize, f: &GaussPoly, g: &GaussPoly) -> GaussPoly {
        let n = self.ctx.pairs();
        let alpha = &f.alpha + &g.alpha;
        if k == 0 {
            return f.mul(g);
        }
        let mut acc = Poly::zero();
        for m in compositions(k, 2 * n) {
            let (a, b) = m.split_at(n);
            let mut left = vec![0u32; 2 * n];
            let mut right = vec![0u32; 2 * n];
            let mut weight = Rational::one();
            for i in 0..n {
                left[i] = a[i] as u32;
                left[n + i] = b[i] as u32;
                right[n + i] = a[i] as u32;
                right[i] = b[i] as u32;
                weight /= factorial(a[i]) * factorial(b[i]);
                if b[i] % 2 == 1 {
                    weight = -weight;
                }
            }
            let df = f.diff_multi(&left);
            if df.is_zero() {
                continue;
            }
            let dg = g.diff_multi(&right);
            if dg.is_zero() {
                continue;
            }
            acc = acc + &(&df.poly * &dg.poly).scale_rational(&weight);
        }
        let half_i = ExactComplex::new(Rational::zero(), Rational::new(1.into(), 2.into()));
        let unit = half_i.pow(k as i64).unwrap_or_else(ExactComplex::one);
        GaussPoly::new(acc.scale(&unit), alpha)
    }

    fn termination_bound(&self, f: &GaussPoly, g: &GaussPoly) -> Option<usize> {
        if f.is_zero() || g.is_zero() {
            return Some(0);
        }
        let df = f.is_polynomial().then(|| f.poly.degree().unwrap_or(0) as usize);
        let dg = g.is_polynomial().then(|| g.poly.degree().unwrap_or(0) as usize);
        match (df, dg) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        }
    }

    fn is_closed(&self) -> bool {
        true
    }
}

impl StarFamily for Bullet {
    fn name(&self) -> &str {
        "bullet"
    }

    fn context(&self) -> PhaseContext {
        self.ctx
    }

    fn bidiff(&self, k: usize, f: &GaussPoly, g: &GaussPoly) -> GaussPoly {
        if k == 0 {
            f.mul(g)
        } else {
            GaussPoly::new(Poly::zero(), &f.alpha + &g.alpha)
        }
    }

    fn termination_bound(&self, _: &GaussPoly, _: &GaussPoly) -> Option<usize> {
        Some(0)
    }

    fn is_closed(&self) -> bool {
        true
    }

    fn is_pointwise(&self) -> bool {
        true
    }
}

/// `B_k(f, g)` of the Moyal family.
pub fn moyal_term(ctx: &PhaseContext, k: usize, f: &GaussPoly, g: &GaussPoly) -> GaussPoly {
    Moyal::new(*ctx).bidiff(k, f, g)
}

/// `B_k` summed over every part pair of two coefficient sums.
fn bidiff_sum(s: &dyn StarFamily, k: usize, f: &GaussSum, g: &GaussSum) -> GaussSum {
    let mut acc = GaussSum::zero();
    for a in f.parts() {
        for b in g.parts() {
            acc = acc + &GaussSum::from(s.bidiff(k, &a, &b));
        }
    }
    acc
}

fn pair_bound(s: &dyn StarFamily, f: &GaussSum, g: &GaussSum) -> Option<usize> {
    let mut bound = 0;
    for a in f.parts() {
        for b in g.parts() {
            bound = bound.max(s.termination_bound(&a, &b)?);
        }
    }
    Some(bound)
}

/// True when every coefficient pair of `f` and `g` has a finite expansion.
pub fn terminates(s: &dyn StarFamily, f: &FormalFunction, g: &FormalFunction) -> bool {
    f.coeffs().iter().all(|a| g.coeffs().iter().all(|b| pair_bound(s, a, b).is_some()))
}

/// `F * G`. Exact when every coefficient pair terminates; otherwise `order`
/// is mandatory and the result is known through `λ^order`.
pub fn star_mul(s: &dyn StarFamily, f: &FormalFunction, g: &FormalFunction, order: Option<i64>) -> Result<FormalFunction> {
    if f.is_exact_zero() || g.is_exact_zero() {
        return Ok(FormalFunction::zero());
    }
    let exact_expansion = terminates(s, f, g);
    let mut tail = Tail::Exact;
    if let Tail::TruncatedAt(n) = f.tail() {
        tail = tail.meet(Tail::TruncatedAt(n + g.valuation()));
    }
    if let Tail::TruncatedAt(n) = g.tail() {
        tail = tail.meet(Tail::TruncatedAt(n + f.valuation()));
    }
    if !exact_expansion {
        let n = order.ok_or(Error::OrderRequired)?;
        tail = tail.meet(Tail::TruncatedAt(n));
    }
    let cap = tail.order();
    let mut out: BTreeMap<i64, GaussSum> = BTreeMap::new();
    for (r, a) in f.terms() {
        for (t, b) in g.terms() {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let base = r + t;
            let top = match (pair_bound(s, a, b), cap) {
                (Some(k), Some(c)) => (k as i64).min(c - base),
                (Some(k), None) => k as i64,
                (None, Some(c)) => c - base,
                (None, None) => return Err(Error::OrderRequired),
            };
            for k in 0..=top {
                let term = bidiff_sum(s, k as usize, a, b);
                if !term.is_zero() {
                    let slot = out.entry(base + k).or_default();
                    *slot = std::mem::take(slot) + &term;
                }
            }
        }
    }
    Ok(from_power_map(out, tail))
}

pub fn star_commutator(s: &dyn StarFamily, f: &FormalFunction, g: &FormalFunction, order: Option<i64>) -> Result<FormalFunction> {
    Ok(&star_mul(s, f, g, order)? - &star_mul(s, g, f, order)?)
}

/// `Tr F = λ^{-n} ∫ F • t`.
pub fn star_trace(s: &dyn StarFamily, f: &FormalFunction) -> Result<ActionValue> {
    let ctx = s.context();
    let weighted = fs_bullet(f, &s.trace_density());
    Ok(fs_integrate(&weighted, &ctx)?.shift(-(ctx.pairs() as i64)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosednessEntry {
    pub k: usize,
    pub integral: String,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosednessReport {
    pub entries: Vec<ClosednessEntry>,
    /// `∫ B_0(f, g)` equals `∫ f·g`.
    pub b0_matches: bool,
    pub pass: bool,
    #[serde(skip)]
    pub values: Vec<PiRational>,
}

/// Integrates `B_k(f, g)` for `k = 0..=maxk`; closedness means every `k ≥ 1` integral vanishes.
pub fn closedness_check(s: &dyn StarFamily, f: &GaussPoly, g: &GaussPoly, maxk: usize) -> Result<ClosednessReport> {
    let ctx = s.context();
    if (&f.alpha + &g.alpha).is_zero() {
        return Err(Error::NotIntegrable { power: None });
    }
    let plain = f.mul(g).integrate(&ctx)?;
    let mut entries = Vec::new();
    let mut values = Vec::new();
    let mut b0_matches = false;
    for k in 0..=maxk {
        let v = s.bidiff(k, f, g).integrate(&ctx)?;
        if k == 0 {
            b0_matches = v == plain;
        }
        entries.push(ClosednessEntry { k, integral: v.to_string(), zero: v.is_zero() });
        values.push(v);
    }
    let pass = b0_matches && entries.iter().skip(1).all(|e| e.zero);
    Ok(ClosednessReport { entries, b0_matches, pass, values })
}

//! Generalized functions on phase space and formal series of them.
//!
//! A [`Distribution`] is a finite combination of derivatives of point masses
//! and Gaussian-polynomial densities, each weighted by `c·π^k`. Powers of π
//! appear once a functional is normalized against a Gaussian density.

mod eigen;
mod region;
mod states;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};

use num_traits::{One, Zero};

pub use eigen::{eigencheck_bullet, eigencheck_classical, eigencheck_star, laguerre, wigner_density, EigenReport, Residual, StarState};
pub use region::{negative_region, RegionReport};
pub use states::{
    action_one, classical_positivity, default_lambda_samples, normalize_functional, per_power_constraints, positivity_check,
    reality_check, NegativityWitness, NoGoReport, PositivityReport, RealityFailure, RealityReport, SampleOutcome, SignClass,
    ValueSample, DEFAULT_LAMBDA_SAMPLES,
};

use crate::closed_form::{ActionValue, ClosedForm};
use crate::complex::{fmt_rational, ExactComplex, Rational};
use crate::error::{Error, Result};
use crate::laurent::{Laurent, PowerBound, Tail};
use crate::phase::{GaussPoly, GaussSum, PhaseContext};
use crate::series::{fs_bullet, fs_integrate, from_power_map, FormalFunction};
use crate::star::{star_mul, StarFamily};

/// Support point and derivative multi-index of a point term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointKey {
    pub point: Vec<Rational>,
    pub multi_index: Vec<u32>,
}

/// A single summand, as supplied by callers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalTerm {
    /// `φ ↦ weight·(−1)^{|α|}·(∂^α φ)(point)`.
    PointDeriv { point: Vec<Rational>, multi_index: Vec<u32>, weight: ExactComplex },
    /// `φ ↦ ∫ g·φ`.
    Density(GaussPoly),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Distribution {
    points: BTreeMap<(PointKey, i32), ExactComplex>,
    densities: BTreeMap<i32, GaussSum>,
}

impl From<FunctionalTerm> for Distribution {
    fn from(t: FunctionalTerm) -> Self {
        let mut d = Distribution::default();
        match t {
            FunctionalTerm::PointDeriv { point, multi_index, weight } => d.add_point(PointKey { point, multi_index }, 0, &weight),
            FunctionalTerm::Density(g) => d.add_density(0, &g.into()),
        }
        d
    }
}

impl Distribution {
    pub fn delta(point: Vec<Rational>) -> Self {
        let n = point.len();
        FunctionalTerm::PointDeriv { point, multi_index: vec![0; n], weight: ExactComplex::one() }.into()
    }

    pub fn point_deriv(point: Vec<Rational>, multi_index: Vec<u32>, weight: ExactComplex) -> Self {
        FunctionalTerm::PointDeriv { point, multi_index, weight }.into()
    }

    pub fn density(g: GaussPoly) -> Self {
        FunctionalTerm::Density(g).into()
    }

    pub fn density_sum(g: GaussSum) -> Self {
        let mut d = Distribution::default();
        d.add_density(0, &g);
        d
    }

    fn add_point(&mut self, key: PointKey, pi_power: i32, w: &ExactComplex) {
        if w.is_zero() {
            return;
        }
        let k = (key, pi_power);
        let merged = match self.points.remove(&k) {
            Some(v) => &v + w,
            None => w.clone(),
        };
        if !merged.is_zero() {
            self.points.insert(k, merged);
        }
    }

    fn add_density(&mut self, pi_power: i32, g: &GaussSum) {
        if g.is_zero() {
            return;
        }
        let merged = match self.densities.remove(&pi_power) {
            Some(v) => v + g,
            None => g.clone(),
        };
        if !merged.is_zero() {
            self.densities.insert(pi_power, merged);
        }
    }

    /// Terms with their power of π.
    pub fn terms(&self) -> Vec<(FunctionalTerm, i32)> {
        let mut out = Vec::new();
        for ((key, k), w) in &self.points {
            let t = FunctionalTerm::PointDeriv { point: key.point.clone(), multi_index: key.multi_index.clone(), weight: w.clone() };
            out.push((t, *k));
        }
        for (k, g) in &self.densities {
            for part in g.parts() {
                out.push((FunctionalTerm::Density(part), *k));
            }
        }
        out
    }

    pub fn point_terms(&self) -> impl Iterator<Item = (&PointKey, i32, &ExactComplex)> {
        self.points.iter().map(|((key, k), w)| (key, *k, w))
    }

    pub fn density_terms(&self) -> impl Iterator<Item = (i32, &GaussSum)> {
        self.densities.iter().map(|(k, g)| (*k, g))
    }

    pub fn has_points(&self) -> bool {
        !self.points.is_empty()
    }

    pub fn has_densities(&self) -> bool {
        !self.densities.is_empty()
    }

    pub fn points_only(&self) -> Distribution {
        Distribution { points: self.points.clone(), densities: BTreeMap::new() }
    }

    pub fn densities_only(&self) -> Distribution {
        Distribution { points: BTreeMap::new(), densities: self.densities.clone() }
    }

    pub fn scale(&self, c: &ExactComplex) -> Distribution {
        self.scale_pi(c, 0)
    }

    /// Multiplies by `c·π^k`.
    pub fn scale_pi(&self, c: &ExactComplex, k: i32) -> Distribution {
        let mut out = Distribution::default();
        for ((key, kk), w) in &self.points {
            out.add_point(key.clone(), kk + k, &(w * c));
        }
        for (kk, g) in &self.densities {
            out.add_density(kk + k, &g.scale(c));
        }
        out
    }

    /// Multiplies by a closed-form value free of `e^r` factors.
    pub fn scale_closed(&self, c: &ClosedForm) -> Result<Distribution> {
        let mut out = Distribution::default();
        for ((k, r), w) in c.terms() {
            if !r.is_zero() {
                return Err(Error::Transcendental(c.to_string()));
            }
            out = out + &self.scale_pi(w, *k);
        }
        Ok(out)
    }

    pub fn conj(&self) -> Distribution {
        Distribution {
            points: self.points.iter().map(|(k, w)| (k.clone(), w.conj())).collect(),
            densities: self.densities.iter().map(|(k, g)| (*k, g.conj())).collect(),
        }
    }

    /// Every weight and density is real.
    pub fn is_real(&self) -> bool {
        self.points.values().all(ExactComplex::is_real) && self.densities.values().all(GaussSum::is_real)
    }

    /// `⟨T, φ⟩` for a single test function.
    pub fn act(&self, phi: &GaussSum, ctx: &PhaseContext) -> Result<ClosedForm> {
        let mut acc = ClosedForm::zero();
        for ((key, k), w) in &self.points {
            if key.point.len() != ctx.nvars() || key.multi_index.len() != ctx.nvars() {
                return Err(Error::DimensionMismatch { expected: ctx.nvars(), found: key.point.len() });
            }
            let order: u32 = key.multi_index.iter().sum();
            let sign = if order % 2 == 1 { -ExactComplex::one() } else { ExactComplex::one() };
            let v = phi.diff_multi(&key.multi_index).eval(ctx, &key.point)?;
            acc = acc + &(&v * &ClosedForm::term(&sign * w, *k, Rational::zero()));
        }
        for (k, g) in &self.densities {
            let v = (g * phi).integrate(ctx)?;
            acc = acc + &(&v * &ClosedForm::pi_pow(*k));
        }
        Ok(acc)
    }
}

impl Zero for Distribution {
    fn zero() -> Self {
        Distribution::default()
    }
    fn is_zero(&self) -> bool {
        self.points.is_empty() && self.densities.is_empty()
    }
}

impl Add<&Distribution> for Distribution {
    type Output = Distribution;
    fn add(mut self, o: &Distribution) -> Distribution {
        for ((key, k), w) in &o.points {
            self.add_point(key.clone(), *k, w);
        }
        for (k, g) in &o.densities {
            self.add_density(*k, g);
        }
        self
    }
}

impl Add for Distribution {
    type Output = Distribution;
    fn add(self, o: Distribution) -> Distribution {
        self + &o
    }
}

impl Neg for Distribution {
    type Output = Distribution;
    fn neg(self) -> Distribution {
        self.scale(&-ExactComplex::one())
    }
}

fn pi_factor(k: i32) -> Option<String> {
    match k {
        0 => None,
        1 => Some("pi".into()),
        k => Some(format!("pi^{k}")),
    }
}

fn point_atom(key: &PointKey) -> String {
    let pts: Vec<String> = key.point.iter().map(fmt_rational).collect();
    if key.multi_index.iter().all(|&e| e == 0) {
        format!("delta({})", pts.join(","))
    } else {
        let idx: Vec<String> = key.multi_index.iter().map(u32::to_string).collect();
        format!("delta({}; {})", pts.join(","), idx.join(","))
    }
}

/// Appends the summands of `d`, each carrying the pre-rendered `extra` factors.
fn render_distribution(out: &mut String, d: &Distribution, extra: &[String], mut first: bool) -> bool {
    let start = out.len();
    for ((key, k), w) in &d.points {
        let (neg, body) = w.signed_parts();
        if first {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if body != "1" {
            factors.push(body);
        }
        factors.extend(pi_factor(*k));
        factors.extend(extra.iter().cloned());
        factors.push(point_atom(key));
        out.push_str(&factors.join("*"));
        first = false;
    }
    for (k, g) in &d.densities {
        if !first {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = pi_factor(*k).into_iter().collect();
        factors.extend(extra.iter().cloned());
        factors.push(format!("density({g})"));
        out.push_str(&factors.join("*"));
        first = false;
    }
    out.len() > start
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !render_distribution(&mut out, self, &[], true) {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Formal series `Σ λ^l T_l` of generalized functions with a finite principal part.
pub type FormalFunctional = Laurent<Distribution>;

pub fn functional(d: Distribution) -> FormalFunctional {
    FormalFunctional::constant(d)
}

pub fn functional_at(d: Distribution, power: i64) -> FormalFunctional {
    FormalFunctional::monomial(d, power)
}

/// Builds `Σ_{l ≥ lowest} λ^l T_l` through `λ^highest`. An unbounded
/// principal part is refused: its action on a series with infinitely many
/// nonzero coefficients would need infinitely many terms per power.
pub fn functional_from_fn(
    lowest: PowerBound,
    highest: i64,
    tail: Tail,
    f: impl FnMut(i64) -> Distribution,
) -> Result<FormalFunctional> {
    FormalFunctional::from_fn(lowest, highest, tail, f)
}

/// Renders a functional series: `delta(0,0) + lam*density(gauss(1))`.
pub struct FunctionalDisplay<'a>(pub &'a FormalFunctional);

impl fmt::Display for FunctionalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (p, d) in self.0.terms() {
            let lam: Vec<String> = match p {
                0 => vec![],
                1 => vec!["lam".into()],
                p => vec![format!("lam^{p}")],
            };
            if render_distribution(&mut out, d, &lam, first) {
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

/// `⟨T, F⟩`: graded pairing of the two series.
pub fn func_action(t: &FormalFunctional, f: &FormalFunction, ctx: &PhaseContext) -> Result<ActionValue> {
    t.try_mul_indexed(f, |pt, d, pf, phi| {
        d.act(phi, ctx).map_err(|e| match e {
            Error::NotIntegrable { .. } => Error::NotIntegrable { power: Some(pt + pf) },
            other => other,
        })
    })
}

/// The density part of `T` at one power of π, as a function series.
fn density_series(t: &FormalFunctional, pi_power: i32) -> FormalFunction {
    let mut map = BTreeMap::new();
    for (p, d) in t.terms() {
        if let Some(g) = d.densities.get(&pi_power) {
            map.insert(p, g.clone());
        }
    }
    from_power_map(map, t.tail())
}

fn density_pi_powers(t: &FormalFunctional) -> Vec<i32> {
    let mut ks: Vec<i32> = t.coeffs().iter().flat_map(|d| d.densities.keys().copied()).collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn pi_scale(v: &ActionValue, k: i32) -> ActionValue {
    let pk = ClosedForm::pi_pow(k);
    v.map(|c| c * &pk)
}

/// `⟨T, F⟩_*`.
///
/// Closed families reduce to `λ^{-n}⟨T, F⟩`. Otherwise densities `ψ` act by
/// `λ^{-n}∫(ψ*F)•t` and point terms by `λ^{-n}⟨T, F•t⟩`.
pub fn func_star_action(s: &dyn StarFamily, t: &FormalFunctional, f: &FormalFunction, order: Option<i64>) -> Result<ActionValue> {
    let ctx = s.context();
    let n = ctx.pairs() as i64;
    if s.is_closed() {
        return Ok(func_action(t, f, &ctx)?.shift(-n));
    }
    let weight = s.trace_density();
    let points = t.map(Distribution::points_only);
    let mut acc = func_action(&points, &fs_bullet(f, &weight), &ctx)?;
    for k in density_pi_powers(t) {
        let psi = density_series(t, k);
        let prod = fs_bullet(&star_mul(s, &psi, f, order)?, &weight);
        acc = &acc + &pi_scale(&fs_integrate(&prod, &ctx)?, k);
    }
    Ok(acc.shift(-n))
}

/// Substitutes a rational λ into an exact action value.
pub fn action_eval(v: &ActionValue, lam: &Rational) -> Result<ClosedForm> {
    if let Tail::TruncatedAt(n) = v.tail() {
        return Err(Error::TruncatedTail(n));
    }
    let mut acc = ClosedForm::zero();
    for (p, c) in v.terms() {
        acc = acc + &c.scale(&ExactComplex::real(crate::scalar::rational_pow(lam, p)));
    }
    Ok(acc)
}

/// Substitutes a rational λ into an exact functional series.
pub fn functional_eval(t: &FormalFunctional, lam: &Rational) -> Result<Distribution> {
    if let Tail::TruncatedAt(n) = t.tail() {
        return Err(Error::TruncatedTail(n));
    }
    let mut acc = Distribution::zero();
    for (p, d) in t.terms() {
        acc = acc + &d.scale(&ExactComplex::real(crate::scalar::rational_pow(lam, p)));
    }
    Ok(acc)
}

/// Which product a functional is multiplied with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `ξ * T`, acting by `⟨T, φ * ξ⟩_*`.
    Left,
    /// `T * ξ`, acting by `⟨T, ξ * φ⟩_*`.
    Right,
    /// `ξ • T`, acting by `⟨T, ξ • φ⟩`.
    Bullet,
}

/// A product of a function series with a functional, defined by its action.
pub struct FunctionalProduct<'a> {
    family: &'a dyn StarFamily,
    side: Side,
    xi: FormalFunction,
    t: FormalFunctional,
    order: Option<i64>,
}

pub fn func_mul<'a>(
    s: &'a dyn StarFamily,
    side: Side,
    xi: &FormalFunction,
    t: &FormalFunctional,
    order: Option<i64>,
) -> FunctionalProduct<'a> {
    FunctionalProduct { family: s, side, xi: xi.clone(), t: t.clone(), order }
}

impl FunctionalProduct<'_> {
    /// The action on a test series: star action for `Left`/`Right`, plain action for `Bullet`.
    pub fn act(&self, phi: &FormalFunction) -> Result<ActionValue> {
        let s = self.family;
        match self.side {
            Side::Bullet => func_action(&self.t, &fs_bullet(&self.xi, phi), &s.context()),
            Side::Left => func_star_action(s, &self.t, &star_mul(s, phi, &self.xi, self.order)?, self.order),
            Side::Right => func_star_action(s, &self.t, &star_mul(s, &self.xi, phi, self.order)?, self.order),
        }
    }

    /// Explicit density form, available when `T` consists of densities only
    /// (and, for star sides, the family is closed): `ξ•ψ`, `ξ*ψ` or `ψ*ξ`.
    pub fn materialize(&self) -> Result<Option<FormalFunctional>> {
        if self.t.coeffs().iter().any(Distribution::has_points) {
            return Ok(None);
        }
        if self.side != Side::Bullet && !self.family.is_closed() {
            return Ok(None);
        }
        let mut acc = FormalFunctional::zero();
        for k in density_pi_powers(&self.t) {
            let psi = density_series(&self.t, k);
            let prod = match self.side {
                Side::Bullet => fs_bullet(&self.xi, &psi),
                Side::Left => star_mul(self.family, &self.xi, &psi, self.order)?,
                Side::Right => star_mul(self.family, &psi, &self.xi, self.order)?,
            };
            let mut d = prod.map(|g| Distribution::density_sum(g.clone()));
            d = d.map(|x| x.scale_pi(&ExactComplex::one(), k));
            acc = &acc + &d;
        }
        if self.t.is_exact_zero() {
            return Ok(Some(FormalFunctional::zero()));
        }
        Ok(Some(acc))
    }
}

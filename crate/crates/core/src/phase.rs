//! Phase-space functions of the form `P(q,p)·exp(−α·Σ(qᵢ²+pᵢ²))` on R^(2n).
//!
//! This class is closed under products, derivatives, conjugation and every
//! bidifferential operator used by the star products, and all of its
//! integrable members have exact Gaussian moment integrals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::closed_form::{ClosedForm, PiRational};
use crate::complex::{fmt_rational, ExactComplex, Rational};
use crate::error::{Error, Result};
use crate::poly::{render_term, var_name, Monomial, Poly};

/// Flat phase space R^(2n) with canonical coordinates `q1..qn, p1..pn` and
/// the Lebesgue volume element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseContext {
    pairs: usize,
}

impl PhaseContext {
    pub fn new(pairs: usize) -> Result<Self> {
        if pairs == 0 {
            return Err(Error::NotSupportedForm("phase space needs at least one canonical pair".into()));
        }
        Ok(PhaseContext { pairs })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn nvars(&self) -> usize {
        2 * self.pairs
    }

    pub fn index(&self, c: Coord) -> Result<usize> {
        match c {
            Coord::Q(i) if i < self.pairs => Ok(i),
            Coord::P(i) if i < self.pairs => Ok(self.pairs + i),
            other => Err(Error::UnknownCoordinate(other.to_string())),
        }
    }

    /// Looks up `q`, `p` (single pair only) or `q1`, `p2`, ...
    pub fn coord(&self, name: &str) -> Result<Coord> {
        let unknown = || Error::UnknownCoordinate(name.to_string());
        let (letter, rest) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
        let idx = if rest.is_empty() {
            if self.pairs != 1 {
                return Err(unknown());
            }
            0
        } else {
            let k: usize = rest.parse().map_err(|_| unknown())?;
            if k == 0 || k > self.pairs {
                return Err(unknown());
            }
            k - 1
        };
        match letter {
            "q" => Ok(Coord::Q(idx)),
            "p" => Ok(Coord::P(idx)),
            _ => Err(unknown()),
        }
    }

    pub fn coords(&self) -> Vec<Coord> {
        (0..self.pairs).map(Coord::Q).chain((0..self.pairs).map(Coord::P)).collect()
    }

    pub fn q(&self, i: usize) -> GaussPoly {
        GaussPoly::polynomial(Poly::var(i, self.nvars()))
    }

    pub fn p(&self, i: usize) -> GaussPoly {
        GaussPoly::polynomial(Poly::var(self.pairs + i, self.nvars()))
    }

    pub fn one(&self) -> GaussPoly {
        GaussPoly::polynomial(Poly::one(self.nvars()))
    }

    pub fn constant(&self, c: ExactComplex) -> GaussPoly {
        GaussPoly::polynomial(Poly::constant(c, self.nvars()))
    }

    /// `exp(−α·r²)`.
    pub fn gaussian(&self, alpha: Rational) -> GaussPoly {
        GaussPoly::new(Poly::one(self.nvars()), alpha)
    }

    /// Monomials of total degree ≤ `max_degree`, as functions.
    pub fn monomials(&self, max_degree: u32) -> Vec<GaussPoly> {
        Monomial::all_up_to(self.nvars(), max_degree)
            .into_iter()
            .map(|m| GaussPoly::polynomial(Poly::term(m, ExactComplex::one())))
            .collect()
    }
}

/// A canonical coordinate, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Q(usize),
    P(usize),
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Q(i) => write!(f, "q{}", i + 1),
            Coord::P(i) => write!(f, "p{}", i + 1),
        }
    }
}

/// `poly · exp(−alpha·r²)` with `alpha ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussPoly {
    pub poly: Poly,
    pub alpha: Rational,
}

impl GaussPoly {
    pub fn new(poly: Poly, alpha: Rational) -> Self {
        assert!(!alpha.is_negative(), "Gaussian decay rate must be nonnegative");
        GaussPoly { poly, alpha }
    }

    pub fn try_new(poly: Poly, alpha: Rational) -> Result<Self> {
        if alpha.is_negative() {
            return Err(Error::NotSupportedForm(format!("gauss({}) grows at infinity", fmt_rational(&alpha))));
        }
        Ok(GaussPoly { poly, alpha })
    }

    pub fn polynomial(poly: Poly) -> Self {
        GaussPoly { poly, alpha: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.alpha.is_zero()
    }

    /// Sum of two functions sharing a Gaussian factor.
    pub fn add(&self, o: &GaussPoly) -> Result<GaussPoly> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.alpha != o.alpha {
            return Err(Error::AlphaMismatch { left: fmt_rational(&self.alpha), right: fmt_rational(&o.alpha) });
        }
        Ok(GaussPoly { poly: &self.poly + &o.poly, alpha: self.alpha.clone() })
    }

    pub fn mul(&self, o: &GaussPoly) -> GaussPoly {
        GaussPoly { poly: &self.poly * &o.poly, alpha: &self.alpha + &o.alpha }
    }

    pub fn scale(&self, c: &ExactComplex) -> GaussPoly {
        GaussPoly { poly: self.poly.scale(c), alpha: self.alpha.clone() }
    }

    pub fn conj(&self) -> GaussPoly {
        GaussPoly { poly: self.poly.conj(), alpha: self.alpha.clone() }
    }

    /// `∂(P e^{−αr²}) = (∂P − 2α·x·P) e^{−αr²}` with respect to the variable at `idx`.
    pub fn diff_index(&self, idx: usize) -> GaussPoly {
        let mut poly = self.poly.diff(idx);
        if !self.alpha.is_zero() {
            let two_alpha = &self.alpha * Rational::from_integer(2.into());
            poly = &poly - &self.poly.mul_var(idx).scale_rational(&two_alpha);
        }
        GaussPoly { poly, alpha: self.alpha.clone() }
    }

    pub fn diff(&self, ctx: &PhaseContext, c: Coord) -> Result<GaussPoly> {
        Ok(self.diff_index(ctx.index(c)?))
    }

    /// Repeated derivative `∂^multi`.
    pub fn diff_multi(&self, multi: &[u32]) -> GaussPoly {
        let mut out = self.clone();
        for (idx, &k) in multi.iter().enumerate() {
            for _ in 0..k {
                out = out.diff_index(idx);
            }
        }
        out
    }

    /// Exact pair `(P(x), −α·|x|²)`; the function value is `P(x)·exp` of the second entry.
    pub fn eval(&self, ctx: &PhaseContext, point: &[Rational]) -> Result<(ExactComplex, Rational)> {
        if point.len() != ctx.nvars() {
            return Err(Error::DimensionMismatch { expected: ctx.nvars(), found: point.len() });
        }
        let r2: Rational = point.iter().map(|x| x * x).sum();
        Ok((self.poly.eval(point), -(&self.alpha * r2)))
    }

    /// Exact integral over R^(2n).
    pub fn integrate(&self, ctx: &PhaseContext) -> Result<PiRational> {
        let n = ctx.pairs() as i32;
        if self.poly.is_zero() {
            return Ok(PiRational::new(ExactComplex::zero(), n));
        }
        if self.alpha.is_zero() {
            return Err(Error::NotIntegrable { power: None });
        }
        let mut total = ExactComplex::zero();
        for (m, c) in self.poly.terms() {
            if let Some(v) = gaussian_moment(&m.0, &self.alpha) {
                total += &c.scale(&v);
            }
        }
        Ok(PiRational::new(total, n))
    }

    /// `Σᵢ ∂f/∂qᵢ·∂g/∂pᵢ − ∂f/∂pᵢ·∂g/∂qᵢ`.
    pub fn poisson(&self, o: &GaussPoly, ctx: &PhaseContext) -> GaussPoly {
        let n = ctx.pairs();
        let mut acc = GaussPoly::new(Poly::zero(), &self.alpha + &o.alpha);
        for i in 0..n {
            let a = self.diff_index(i).mul(&o.diff_index(n + i));
            let b = self.diff_index(n + i).mul(&o.diff_index(i));
            acc.poly = &(&acc.poly + &a.poly) - &b.poly;
        }
        acc
    }
}

/// `∏ⱼ (eⱼ−1)!!/(2α)^{eⱼ/2}` times `α^{-n}`: the rational part of the moment
/// integral, whose transcendental part is `π^n`. `None` when some exponent is odd.
fn gaussian_moment(exps: &[u32], alpha: &Rational) -> Option<Rational> {
    if exps.iter().any(|e| e % 2 == 1) {
        return None;
    }
    let two_alpha = alpha * Rational::from_integer(2.into());
    let mut v = Rational::one();
    for &e in exps {
        let m = e / 2;
        let mut dfact = BigInt::one();
        let mut k = 2 * m as i64 - 1;
        while k > 1 {
            dfact *= k;
            k -= 2;
        }
        v *= Rational::from_integer(dfact);
        for _ in 0..m {
            v /= &two_alpha;
        }
    }
    for _ in 0..exps.len() / 2 {
        v /= alpha;
    }
    Some(v)
}

impl fmt::Display for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", GaussSum::from(self.clone()))
    }
}

/// Finite sum of Gaussian polynomials with distinct decay rates: one
/// λ-coefficient of a formal phase-space series.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussSum {
    parts: BTreeMap<Rational, Poly>,
}

impl From<GaussPoly> for GaussSum {
    fn from(g: GaussPoly) -> Self {
        let mut parts = BTreeMap::new();
        if !g.poly.is_zero() {
            parts.insert(g.alpha, g.poly);
        }
        GaussSum { parts }
    }
}

impl GaussSum {
    pub fn parts(&self) -> impl Iterator<Item = GaussPoly> + '_ {
        self.parts.iter().map(|(a, p)| GaussPoly { poly: p.clone(), alpha: a.clone() })
    }

    pub fn part_refs(&self) -> impl Iterator<Item = (&Rational, &Poly)> {
        self.parts.iter()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    fn add_part(&mut self, alpha: &Rational, poly: &Poly) {
        if poly.is_zero() {
            return;
        }
        let merged = match self.parts.remove(alpha) {
            Some(existing) => existing + poly,
            None => poly.clone(),
        };
        if !merged.is_zero() {
            self.parts.insert(alpha.clone(), merged);
        }
    }

    pub fn constant(ctx: &PhaseContext, c: ExactComplex) -> Self {
        ctx.constant(c).into()
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        let mut out = GaussSum::default();
        for (a, p) in &self.parts {
            out.add_part(a, &p.scale(c));
        }
        out
    }

    pub fn conj(&self) -> Self {
        GaussSum { parts: self.parts.iter().map(|(a, p)| (a.clone(), p.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.parts.values().all(Poly::is_real)
    }

    pub fn diff_index(&self, idx: usize) -> Self {
        let mut out = GaussSum::default();
        for g in self.parts() {
            let d = g.diff_index(idx);
            out.add_part(&d.alpha, &d.poly);
        }
        out
    }

    pub fn diff(&self, ctx: &PhaseContext, c: Coord) -> Result<Self> {
        Ok(self.diff_index(ctx.index(c)?))
    }

    pub fn diff_multi(&self, multi: &[u32]) -> Self {
        let mut out = GaussSum::default();
        for g in self.parts() {
            let d = g.diff_multi(multi);
            out.add_part(&d.alpha, &d.poly);
        }
        out
    }

    /// Exact value at a rational point; Gaussian factors away from the origin give `e^r` terms.
    pub fn eval(&self, ctx: &PhaseContext, point: &[Rational]) -> Result<ClosedForm> {
        let mut acc = ClosedForm::zero();
        for g in self.parts() {
            let (v, arg) = g.eval(ctx, point)?;
            acc = acc + ClosedForm::term(v, 0, arg);
        }
        if self.parts.is_empty() && point.len() != ctx.nvars() {
            return Err(Error::DimensionMismatch { expected: ctx.nvars(), found: point.len() });
        }
        Ok(acc)
    }

    pub fn integrate(&self, ctx: &PhaseContext) -> Result<ClosedForm> {
        let mut acc = ClosedForm::zero();
        for g in self.parts() {
            acc = acc + ClosedForm::from(g.integrate(ctx)?);
        }
        Ok(acc)
    }

    /// Polynomial degree when every part is a pure polynomial.
    pub fn polynomial_degree(&self) -> Option<u32> {
        if self.parts.keys().any(|a| !a.is_zero()) {
            return None;
        }
        Some(self.parts.values().filter_map(Poly::degree).max().unwrap_or(0))
    }

    pub fn max_degree(&self) -> u32 {
        self.parts.values().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.parts.keys().all(Zero::is_zero)
    }
}

impl Zero for GaussSum {
    fn zero() -> Self {
        GaussSum::default()
    }
    fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
}

impl Add<&GaussSum> for GaussSum {
    type Output = GaussSum;
    fn add(mut self, o: &GaussSum) -> GaussSum {
        for (a, p) in &o.parts {
            self.add_part(a, p);
        }
        self
    }
}

impl Add for GaussSum {
    type Output = GaussSum;
    fn add(self, o: GaussSum) -> GaussSum {
        self + &o
    }
}

impl<'a> Sub<&'a GaussSum> for &'a GaussSum {
    type Output = GaussSum;
    fn sub(self, o: &GaussSum) -> GaussSum {
        self.clone() + &(-o.clone())
    }
}

impl Neg for GaussSum {
    type Output = GaussSum;
    fn neg(self) -> GaussSum {
        GaussSum { parts: self.parts.into_iter().map(|(a, p)| (a, -p)).collect() }
    }
}

impl<'a> Mul<&'a GaussSum> for &'a GaussSum {
    type Output = GaussSum;
    fn mul(self, o: &GaussSum) -> GaussSum {
        let mut out = GaussSum::default();
        for (aa, pa) in &self.parts {
            for (ab, pb) in &o.parts {
                out.add_part(&(aa + ab), &(pa * pb));
            }
        }
        out
    }
}

impl fmt::Display for GaussSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        render_gauss_sum(&mut out, self, &[], true);
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Appends the terms of `g`, each multiplied by the pre-rendered `extra`
/// factors. Returns whether anything was written.
pub(crate) fn render_gauss_sum(out: &mut String, g: &GaussSum, extra: &[String], mut first: bool) -> bool {
    let start = out.len();
    for (alpha, poly) in &g.parts {
        let mut factors: Vec<String> = extra.to_vec();
        if !alpha.is_zero() {
            factors.push(format!("gauss({})", fmt_rational(alpha)));
        }
        for (m, c) in poly.terms() {
            render_term(out, c, m, &factors, first);
            first = false;
        }
    }
    out.len() > start
}

/// Name of coordinate `idx` in a `2n`-variable context.
pub fn coord_name(ctx: &PhaseContext, idx: usize) -> String {
    var_name(idx, ctx.nvars())
}

//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Variables are ordered `q1..qn, p1..pn`; exponent vectors therefore have
//! length `2n`. The zero polynomial carries no variable count.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::complex::{ExactComplex, Rational};

/// Exponent vector. Ordered by total degree, then with larger leading
/// exponents first (so `1 < q < p < q^2 < q*p < p^2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Every monomial in `nvars` variables of total degree ≤ `max_degree`, in monomial order.
    pub fn all_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut cur = vec![0u32; nvars];
            fill_degree(&mut out, &mut cur, 0, d);
        }
        out
    }
}

fn fill_degree(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, idx: usize, remaining: u32) {
    if idx + 1 == cur.len() {
        cur[idx] = remaining;
        out.push(Monomial(cur.clone()));
        return;
    }
    if cur.is_empty() {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    for e in (0..=remaining).rev() {
        cur[idx] = e;
        fill_degree(out, cur, idx + 1, remaining - e);
    }
    cur[idx] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coordinate names for `nvars = 2n` variables.
pub fn var_name(idx: usize, nvars: usize) -> String {
    let n = nvars / 2;
    let (letter, i) = if idx < n { ('q', idx) } else { ('p', idx - n) };
    if n == 1 {
        letter.to_string()
    } else {
        format!("{letter}{}", i + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, ExactComplex>,
}

impl Poly {
    pub fn constant(c: ExactComplex, nvars: usize) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(ExactComplex::one(), nvars)
    }

    pub fn var(idx: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Self::term(Monomial(e), ExactComplex::one())
    }

    pub fn term(m: Monomial, c: ExactComplex) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, ExactComplex)>) -> Self {
        let mut p = Poly::default();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &ExactComplex) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ExactComplex)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::nvars)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Highest exponent of the given variable.
    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> ExactComplex {
        self.terms.get(m).cloned().unwrap_or_else(ExactComplex::zero)
    }

    pub fn scale(&self, c: &ExactComplex) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn scale_rational(&self, r: &Rational) -> Poly {
        self.scale(&ExactComplex::real(r.clone()))
    }

    pub fn conj(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(ExactComplex::is_real)
    }

    pub fn diff(&self, idx: usize) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[idx] -= 1;
            out.add_term(m2, &c.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    /// Multiplies by the coordinate `x_idx`.
    pub fn mul_var(&self, idx: usize) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2.0[idx] += 1;
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> ExactComplex {
        let mut acc = ExactComplex::zero();
        for (m, c) in &self.terms {
            let mut v = Rational::one();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    v *= x;
                }
            }
            acc += &c.scale(&v);
        }
        acc
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Add<&Poly> for Poly {
    type Output = Poly;
    fn add(mut self, o: &Poly) -> Poly {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
        self
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        self + &o
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

/// Writes `coeff*q^2*p` style monomials; `None` coefficient means "unit".
pub(crate) fn render_monomial(m: &Monomial) -> String {
    let n = m.nvars();
    let mut parts = Vec::new();
    for (idx, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(var_name(idx, n)),
            _ => parts.push(format!("{}^{e}", var_name(idx, n))),
        }
    }
    parts.join("*")
}

/// Appends `± c*m` to `out`, with `extra` (already rendered factors such as
/// `lam^2` or `gauss(1)`) multiplied on.
pub(crate) fn render_term(out: &mut String, c: &ExactComplex, m: &Monomial, extra: &[String], first: bool) {
    let (neg, body) = c.signed_parts();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let mut factors: Vec<String> = Vec::new();
    let mono = render_monomial(m);
    let unit = body == "1";
    if !unit || (mono.is_empty() && extra.is_empty()) {
        factors.push(body);
    }
    factors.extend(extra.iter().filter(|s| !s.is_empty()).cloned());
    if !mono.is_empty() {
        factors.push(mono);
    }
    out.push_str(&factors.join("*"));
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            render_term(&mut out, c, m, &[], i == 0);
        }
        f.write_str(&out)
    }
}

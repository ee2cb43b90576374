//! Exact values of integrals and point evaluations: finite sums `c·π^k·e^r`
//! with Gaussian-rational `c`, integer `k` and rational `r`.
//!
//! Gaussian integrals land on `π^n`; point evaluation of a Gaussian factor
//! away from the origin lands on `e^r`. Nothing is ever rounded. Signs of real
//! values are decided with outward-rounded rational interval bounds.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::complex::{fmt_rational, ExactComplex, Rational};
use crate::laurent::Laurent;

/// `(pi_power, exp_argument)` of a basis element `π^k·e^r`.
pub type Basis = (i32, Rational);

/// A single `coeff·π^pi_power`: the value domain of Gaussian moment integrals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiRational {
    pub coeff: ExactComplex,
    pub pi_power: i32,
}

impl PiRational {
    pub fn new(coeff: ExactComplex, pi_power: i32) -> Self {
        PiRational { coeff, pi_power }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, o: &PiRational) -> PiRational {
        PiRational { coeff: &self.coeff * &o.coeff, pi_power: self.pi_power + o.pi_power }
    }

    /// Sum of two values at the same power of π; `None` when the powers differ.
    pub fn checked_add(&self, o: &PiRational) -> Option<PiRational> {
        if self.is_zero() {
            return Some(o.clone());
        }
        if o.is_zero() {
            return Some(self.clone());
        }
        (self.pi_power == o.pi_power).then(|| PiRational { coeff: &self.coeff + &o.coeff, pi_power: self.pi_power })
    }
}

impl From<PiRational> for ClosedForm {
    fn from(v: PiRational) -> Self {
        ClosedForm::term(v.coeff, v.pi_power, Rational::zero())
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", ClosedForm::from(self.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ClosedForm {
    terms: BTreeMap<(i32, Rational), ExactComplex>,
}

impl ClosedForm {
    pub fn term(c: ExactComplex, pi_power: i32, exp_arg: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((pi_power, exp_arg), c);
        }
        ClosedForm { terms }
    }

    pub fn from_complex(c: ExactComplex) -> Self {
        Self::term(c, 0, Rational::zero())
    }

    pub fn pi_pow(k: i32) -> Self {
        Self::term(ExactComplex::one(), k, Rational::zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &ExactComplex)> {
        self.terms.iter()
    }

    /// The coefficient if the value is a plain Gaussian rational.
    pub fn as_complex(&self) -> Option<ExactComplex> {
        match self.terms.len() {
            0 => Some(ExactComplex::zero()),
            1 => {
                let ((k, r), c) = self.terms.iter().next()?;
                (*k == 0 && r.is_zero()).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True when no `e^r` factor with `r ≠ 0` occurs.
    pub fn is_pi_laurent(&self) -> bool {
        self.terms.keys().all(|(_, r)| r.is_zero())
    }

    fn add_term(&mut self, key: Basis, c: &ExactComplex) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn conj(&self) -> Self {
        ClosedForm { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.conj())).collect() }
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        ClosedForm { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(ExactComplex::is_real)
    }

    pub fn real_part(&self) -> Self {
        let mut out = Self::default();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &ExactComplex::real(c.re.clone()));
        }
        out
    }

    /// Inverse of a single basis term; sums of distinct basis elements are not invertible here.
    pub fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((k, r), c) = self.terms.iter().next()?;
        Some(Self::term(c.inv()?, -k, -r))
    }

    /// Sign of the real part. Exact zero is decided structurally; otherwise
    /// interval bounds are tightened until they exclude zero. `None` if the
    /// precision budget runs out.
    pub fn real_sign(&self) -> Option<Ordering> {
        let re = self.real_part();
        if re.terms.is_empty() {
            return Some(Ordering::Equal);
        }
        if let Some(c) = re.as_complex() {
            return Some(c.re.cmp(&Rational::zero()));
        }
        for digits in [30u32, 60, 120, 240, 480] {
            let iv = re.real_interval(digits);
            if iv.lo.is_positive() {
                return Some(Ordering::Greater);
            }
            if iv.hi.is_negative() {
                return Some(Ordering::Less);
            }
        }
        None
    }

    fn real_interval(&self, digits: u32) -> Interval {
        let pi = pi_interval(digits);
        let mut acc = Interval::point(Rational::zero());
        for ((k, r), c) in &self.terms {
            let mut v = Interval::point(c.re.clone());
            if *k != 0 {
                let base = if *k > 0 { pi.clone() } else { pi.recip() };
                for _ in 0..k.unsigned_abs() {
                    v = v.mul(&base).round_out(digits + 10);
                }
            }
            if !r.is_zero() {
                v = v.mul(&exp_interval(r, digits + 10));
            }
            acc = acc.add(&v).round_out(digits + 10);
        }
        acc
    }

    /// Decimal approximation for human-facing reports only.
    pub fn approx_real(&self) -> f64 {
        let iv = self.real_part().real_interval(20);
        let mid = (&iv.lo + &iv.hi) / Rational::from_integer(2.into());
        rational_to_f64(&mid)
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    let scale = BigInt::from(10u32).pow(18);
    let scaled = (r * Rational::from_integer(scale.clone())).round().to_integer();
    scaled.to_string().parse::<f64>().unwrap_or(f64::NAN) / 1e18
}

impl Zero for ClosedForm {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add<&ClosedForm> for ClosedForm {
    type Output = ClosedForm;
    fn add(mut self, o: &ClosedForm) -> ClosedForm {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c);
        }
        self
    }
}

impl Add for ClosedForm {
    type Output = ClosedForm;
    fn add(self, o: ClosedForm) -> ClosedForm {
        self + &o
    }
}

impl<'a> Sub<&'a ClosedForm> for &'a ClosedForm {
    type Output = ClosedForm;
    fn sub(self, o: &ClosedForm) -> ClosedForm {
        self.clone() + &(-o.clone())
    }
}

impl Neg for ClosedForm {
    type Output = ClosedForm;
    fn neg(self) -> ClosedForm {
        ClosedForm { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<'a> Mul<&'a ClosedForm> for &'a ClosedForm {
    type Output = ClosedForm;
    fn mul(self, o: &ClosedForm) -> ClosedForm {
        let mut out = ClosedForm::default();
        for ((ka, ra), ca) in &self.terms {
            for ((kb, rb), cb) in &o.terms {
                out.add_term((ka + kb, ra + rb), &(ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, ((k, r), c)) in self.terms.iter().enumerate() {
            let (neg, body) = c.signed_parts();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            match k {
                0 => {}
                1 => factors.push("pi".to_string()),
                k => factors.push(format!("pi^{k}")),
            }
            if !r.is_zero() {
                factors.push(format!("exp({})", fmt_rational(r)));
            }
            if body != "1" || factors.is_empty() {
                factors.push(body);
            }
            out.push_str(&factors.join("*"));
        }
        f.write_str(&out)
    }
}

/// A formal Laurent series whose coefficients are closed-form values: the
/// result type of functional actions, traces and integrals.
pub type ActionValue = Laurent<ClosedForm>;

pub fn action_from_scalar(s: &crate::scalar::FormalScalar) -> ActionValue {
    s.map(|c| ClosedForm::from_complex(c.clone()))
}

/// Renders an action value in the expression syntax with `pi` and `exp(..)` factors.
pub struct ActionDisplay<'a>(pub &'a ActionValue);

impl fmt::Display for ActionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (p, c) in self.0.terms() {
            if c.is_zero() {
                continue;
            }
            let body = c.to_string();
            let lam = match p {
                0 => None,
                1 => Some("lam".to_string()),
                p => Some(format!("lam^{p}")),
            };
            let wrapped = if c.terms.len() > 1 { format!("({body})") } else { body };
            parts.push(match lam {
                None => wrapped,
                Some(l) if wrapped == "1" => l,
                Some(l) if wrapped == "-1" => format!("-{l}"),
                Some(l) => format!("{wrapped}*{l}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        if let crate::laurent::Tail::TruncatedAt(n) = self.0.tail() {
            parts.push(format!("O(lam^{})", n + 1));
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

#[derive(Clone, Debug)]
struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().cloned().unwrap_or_default();
        let hi = c.iter().max().cloned().unwrap_or_default();
        Interval { lo, hi }
    }

    /// Reciprocal of an interval not containing zero.
    fn recip(&self) -> Interval {
        Interval { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    /// Widens both ends to multiples of 10^-digits.
    fn round_out(&self, digits: u32) -> Interval {
        let scale = Rational::from_integer(BigInt::from(10u32).pow(digits));
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        Interval { lo, hi }
    }
}

/// Bracket for `arctan(1/x)` from consecutive partial sums of the alternating series.
fn arctan_recip(x: i64, digits: u32) -> Interval {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let eps = Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 5));
    let mut pow = x.clone();
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let term = Rational::new(BigInt::one(), &pow * BigInt::from(2 * k + 1));
        let next = if k.is_even() { &sum + &term } else { &sum - &term };
        if term < eps {
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return Interval { lo, hi };
        }
        sum = next;
        pow *= &x2;
        k += 1;
    }
}

fn pi_interval(digits: u32) -> Interval {
    let a = arctan_recip(5, digits + 3);
    let b = arctan_recip(239, digits + 3);
    let sixteen = Interval::point(Rational::from_integer(16.into()));
    let minus_four = Interval::point(Rational::from_integer((-4).into()));
    sixteen.mul(&a).add(&minus_four.mul(&b)).round_out(digits + 3)
}

fn exp_interval(r: &Rational, digits: u32) -> Interval {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut x = r.clone();
    let mut squarings = 0u32;
    while x.abs() > half {
        x /= Rational::from_integer(2.into());
        squarings += 1;
    }
    let work = digits + 5 + squarings;
    let eps = Rational::new(BigInt::one(), BigInt::from(10u32).pow(work));
    let mut term = Rational::one();
    let mut sum = Rational::one();
    let mut j = 1i64;
    loop {
        term = &term * &x / Rational::from_integer(j.into());
        sum += &term;
        if term.abs() < eps {
            break;
        }
        j += 1;
    }
    // |x| ≤ 1/2, so the remainder is bounded by twice the next term
    let next = (&term * &x / Rational::from_integer((j + 1).into())).abs();
    let slack = &next * Rational::from_integer(2.into()) + &eps;
    let mut iv = Interval { lo: &sum - &slack, hi: &sum + &slack }.round_out(work);
    for _ in 0..squarings {
        iv = Interval { lo: &iv.lo * &iv.lo, hi: &iv.hi * &iv.hi }.round_out(work);
    }
    iv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{int, rat};

    #[test]
    fn pi_bracket_is_tight_and_correct() {
        let iv = pi_interval(40);
        let lo = rat(314159265358979, 100000000000000);
        let hi = rat(314159265358980, 100000000000000);
        assert!(iv.lo > lo && iv.hi < hi);
        assert!(&iv.hi - &iv.lo < Rational::new(BigInt::one(), BigInt::from(10u32).pow(38)));
    }

    #[test]
    fn exp_bracket_contains_e() {
        let iv = exp_interval(&int(1), 30);
        assert!(iv.lo > rat(2718281828, 1000000000) && iv.hi < rat(2718281829, 1000000000));
        let iv = exp_interval(&int(-3), 30);
        assert!(iv.lo > rat(497870, 10000000) && iv.hi < rat(497871, 10000000));
    }

    #[test]
    fn signs_of_mixed_values() {
        // π − 22/7 < 0, π − 3 > 0, e^{-1}·π − 1 > 0
        let v = ClosedForm::pi_pow(1) + ClosedForm::from_complex(ExactComplex::from_ratio(-22, 7));
        assert_eq!(v.real_sign(), Some(Ordering::Less));
        let v = ClosedForm::pi_pow(1) + ClosedForm::from_complex(ExactComplex::from_int(-3));
        assert_eq!(v.real_sign(), Some(Ordering::Greater));
        let v = ClosedForm::term(ExactComplex::one(), 1, int(-1)) + ClosedForm::from_complex(ExactComplex::from_int(-1));
        assert_eq!(v.real_sign(), Some(Ordering::Greater));
        assert_eq!(ClosedForm::zero().real_sign(), Some(Ordering::Equal));
    }

    #[test]
    fn display_matches_expression_style() {
        let v = ClosedForm::term(ExactComplex::from_ratio(1, 3), 1, Rational::zero());
        assert_eq!(v.to_string(), "pi*1/3");
        let w = ClosedForm::term(ExactComplex::from_int(-2), 0, int(-1));
        assert_eq!(w.to_string(), "-exp(-1)*2");
    }

    #[test]
    fn inverse_of_monomial() {
        let v = ClosedForm::term(ExactComplex::from_int(2), 1, Rational::zero());
        let inv = v.inverse().unwrap();
        assert_eq!(&v * &inv, ClosedForm::from_complex(ExactComplex::one()));
        let sum = v.clone() + ClosedForm::from_complex(ExactComplex::one());
        assert!(sum.inverse().is_none());
    }
}

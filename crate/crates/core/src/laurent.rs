//! Formal Laurent series in λ over an arbitrary coefficient module.
//!
//! Every graded object in the engine (scalars, phase-space series, functionals,
//! action values) is a [`Laurent`] over a different coefficient type. The
//! series keeps a finite principal part and a [`Tail`] marker recording how
//! far the coefficients are actually known.

use std::cmp::{max, min};
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};

/// Requirements on series coefficients: an additive group with structural equality.
pub trait Coefficient:
    Clone + PartialEq + std::fmt::Debug + Zero + Neg<Output = Self> + for<'a> Add<&'a Self, Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + std::fmt::Debug
        + Zero
        + Neg<Output = T>
        + for<'a> Add<&'a T, Output = T>
{
}

/// How much of a series is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Finitely supported: every coefficient past the stored ones is zero.
    Exact,
    /// Coefficients are known through λ^N; nothing is claimed beyond.
    TruncatedAt(i64),
}

impl Tail {
    pub fn order(self) -> Option<i64> {
        match self {
            Tail::Exact => None,
            Tail::TruncatedAt(n) => Some(n),
        }
    }

    fn from_order(order: Option<i64>) -> Tail {
        order.map_or(Tail::Exact, Tail::TruncatedAt)
    }

    /// The weaker of two markers.
    pub fn meet(self, other: Tail) -> Tail {
        Tail::from_order(min_opt(self.order(), other.order()))
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(min(x, y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Lowest power a series specification starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerBound {
    Finite(i64),
    NegativeInfinity,
}

/// Result of comparing two series that may be truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub equal: bool,
    /// Highest power that took part in the comparison; `None` means the
    /// comparison covered every coefficient (both sides exact).
    pub depth: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<C> {
    valuation: i64,
    coeffs: Vec<C>,
    tail: Tail,
}

impl<C: Coefficient> Laurent<C> {
    /// Builds a series from the coefficient of λ^valuation upward and brings it
    /// to canonical form.
    pub fn new(valuation: i64, coeffs: Vec<C>, tail: Tail) -> Self {
        let mut s = Laurent { valuation, coeffs, tail };
        s.canonicalize();
        s
    }

    pub fn zero() -> Self {
        Laurent { valuation: 0, coeffs: Vec::new(), tail: Tail::Exact }
    }

    /// The series known to vanish through λ^order.
    pub fn zero_through(order: i64) -> Self {
        Self::new(order + 1, Vec::new(), Tail::TruncatedAt(order))
    }

    pub fn monomial(c: C, power: i64) -> Self {
        Self::new(power, vec![c], Tail::Exact)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds `Σ λ^l f(l)` for `lowest ≤ l ≤ highest`.
    ///
    /// An unbounded principal part is rejected: such a sum has no coefficientwise
    /// pairing with a series whose tail is infinite.
    pub fn from_fn(lowest: PowerBound, highest: i64, tail: Tail, mut f: impl FnMut(i64) -> C) -> Result<Self> {
        let lo = match lowest {
            PowerBound::Finite(l) => l,
            PowerBound::NegativeInfinity => return Err(Error::InfinitePrincipalPart),
        };
        let coeffs = (lo..=highest).map(&mut f).collect();
        Ok(Self::new(lo, coeffs, tail))
    }

    fn canonicalize(&mut self) {
        if let Tail::TruncatedAt(n) = self.tail {
            let len = (n - self.valuation + 1).max(0) as usize;
            self.coeffs.truncate(len);
            while self.coeffs.len() < len {
                self.coeffs.push(C::zero());
            }
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.valuation += lead as i64;
        }
        match self.tail {
            Tail::Exact => {
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
                if self.coeffs.is_empty() {
                    self.valuation = 0;
                }
            }
            Tail::TruncatedAt(n) => {
                if self.coeffs.is_empty() {
                    self.valuation = n + 1;
                }
            }
        }
    }

    /// Lowest power with a nonzero coefficient. For the exact zero this is 0;
    /// for a truncated zero it is one past the truncation order.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_exact(&self) -> bool {
        self.tail == Tail::Exact
    }

    /// True when no nonzero coefficient is stored (exact zero, or zero through the known order).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.is_exact()
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.first()
    }

    /// Stored coefficients, the first one standing at λ^valuation.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Highest power with a stored (known) coefficient, if any.
    pub fn top_power(&self) -> Option<i64> {
        match self.tail {
            Tail::TruncatedAt(n) => Some(n),
            Tail::Exact if self.coeffs.is_empty() => None,
            Tail::Exact => Some(self.valuation + self.coeffs.len() as i64 - 1),
        }
    }

    /// Coefficient of λ^power, or `None` when that power lies past the truncation order.
    pub fn coeff(&self, power: i64) -> Option<C> {
        if let Tail::TruncatedAt(n) = self.tail {
            if power > n {
                return None;
            }
        }
        let idx = power - self.valuation;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Some(C::zero())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    /// `(power, coefficient)` for every stored coefficient, zeros included.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.valuation + i as i64, c))
    }

    /// Forgets every coefficient above λ^order.
    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.valuation, self.coeffs.clone(), self.tail.meet(Tail::TruncatedAt(order)))
    }

    /// Multiplies by λ^k.
    pub fn shift(&self, k: i64) -> Self {
        let tail = match self.tail {
            Tail::Exact => Tail::Exact,
            Tail::TruncatedAt(n) => Tail::TruncatedAt(n + k),
        };
        Laurent { valuation: self.valuation + k, coeffs: self.coeffs.clone(), tail }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::new(self.valuation, self.coeffs.iter().map(f).collect(), self.tail)
    }

    pub fn try_map<D: Coefficient, E>(&self, f: impl Fn(i64, &C) -> Result<D, E>) -> Result<Laurent<D>, E> {
        let coeffs = self.terms().map(|(p, c)| f(p, c)).collect::<Result<Vec<_>, E>>()?;
        Ok(Laurent::new(self.valuation, coeffs, self.tail))
    }

    /// Graded Cauchy product with an arbitrary bilinear coefficient pairing.
    pub fn mul_with<B: Coefficient, D: Coefficient>(&self, other: &Laurent<B>, f: impl Fn(&C, &B) -> D) -> Laurent<D> {
        match self.try_mul_with(other, |a, b| Ok::<_, std::convert::Infallible>(f(a, b))) {
            Ok(s) => s,
            Err(e) => match e {},
        }
    }

    pub fn try_mul_with<B: Coefficient, D: Coefficient, E>(
        &self,
        other: &Laurent<B>,
        f: impl Fn(&C, &B) -> Result<D, E>,
    ) -> Result<Laurent<D>, E> {
        self.try_mul_indexed(other, |_, a, _, b| f(a, b))
    }

    /// Cauchy product whose pairing also sees the powers `(i, a, j, b)` of both factors.
    pub fn try_mul_indexed<B: Coefficient, D: Coefficient, E>(
        &self,
        other: &Laurent<B>,
        f: impl Fn(i64, &C, i64, &B) -> Result<D, E>,
    ) -> Result<Laurent<D>, E> {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Laurent::zero());
        }
        let tail = product_tail(self.tail, self.valuation, other.tail, other.valuation);
        let val = self.valuation + other.valuation;
        let cap = tail.order().map(|n| (n - val + 1).max(0) as usize);
        let len = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let len = cap.map_or(len, |c| min(c, len));
        let mut acc: Vec<D> = vec![D::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                let t = f(self.valuation + i as i64, a, other.valuation + j as i64, b)?;
                let slot = std::mem::replace(&mut acc[i + j], D::zero());
                acc[i + j] = slot + &t;
            }
        }
        Ok(Laurent::new(val, acc, tail))
    }

    /// Inverse by the usual recurrence on coefficients.
    ///
    /// The result is known far enough that `self * inverse` agrees with 1
    /// through λ^order. Monomials invert exactly.
    pub fn inverse_with(&self, order: i64, inv: impl Fn(&C) -> Option<C>, mul: impl Fn(&C, &C) -> C) -> Result<Self> {
        let lead = self.leading().ok_or(Error::ZeroNotInvertible)?;
        let lead_inv = inv(lead).ok_or(Error::ZeroNotInvertible)?;
        let v = self.valuation;
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(lead_inv, -v));
        }
        let mut jmax = order;
        if let Tail::TruncatedAt(na) = self.tail {
            jmax = min(jmax, na - v);
        }
        if jmax < 0 {
            return Ok(Self::zero_through(jmax - v));
        }
        let jmax = jmax as usize;
        let mut b: Vec<C> = Vec::with_capacity(jmax + 1);
        b.push(lead_inv.clone());
        for j in 1..=jmax {
            let mut s = C::zero();
            for i in 1..=min(j, self.coeffs.len() - 1) {
                let a = &self.coeffs[i];
                if a.is_zero() {
                    continue;
                }
                s = s + &mul(a, &b[j - i]);
            }
            b.push(-mul(&lead_inv, &s));
        }
        Ok(Self::new(-v, b, Tail::TruncatedAt(-v + jmax as i64)))
    }

    /// Compares through the deepest power known on both sides.
    pub fn compare(&self, other: &Self) -> Agreement {
        let depth = min_opt(self.tail.order(), other.tail.order());
        let hi = match depth {
            Some(d) => d,
            None => max(self.top_power().unwrap_or(i64::MIN), other.top_power().unwrap_or(i64::MIN)),
        };
        let lo = min(self.valuation, other.valuation);
        let equal = (lo..=hi).all(|p| self.coeff(p) == other.coeff(p));
        Agreement { equal, depth }
    }

    /// True when both series are known through λ^order and agree there.
    pub fn agrees_through(&self, other: &Self, order: i64) -> bool {
        let known = |s: &Self| s.tail.order().is_none_or(|n| n >= order);
        if !known(self) || !known(other) {
            return false;
        }
        let lo = min(self.valuation, other.valuation);
        (lo..=order).all(|p| self.coeff(p) == other.coeff(p))
    }

    /// Power of the first coefficient at which the two series differ, within the jointly known range.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let depth = min_opt(self.tail.order(), other.tail.order());
        let hi = depth.unwrap_or_else(|| max(self.top_power().unwrap_or(i64::MIN), other.top_power().unwrap_or(i64::MIN)));
        let lo = min(self.valuation, other.valuation);
        (lo..=hi).find(|&p| self.coeff(p) != other.coeff(p))
    }
}

/// Truncation order of a product: a factor known through `n` contributes its
/// partner's valuation as a shift.
fn product_tail(ta: Tail, va: i64, tb: Tail, vb: i64) -> Tail {
    let a = ta.order().map(|n| n + vb);
    let b = tb.order().map(|n| n + va);
    Tail::from_order(min_opt(a, b))
}

impl<C: Coefficient> Add<&Laurent<C>> for &Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, o: &Laurent<C>) -> Laurent<C> {
        let tail = self.tail.meet(o.tail);
        if self.is_exact_zero() {
            return o.truncate_to(tail);
        }
        if o.is_exact_zero() {
            return self.truncate_to(tail);
        }
        let lo = min(self.valuation, o.valuation);
        let hi_a = self.valuation + self.coeffs.len() as i64;
        let hi_b = o.valuation + o.coeffs.len() as i64;
        let hi = max(hi_a, hi_b);
        let mut acc = vec![C::zero(); (hi - lo).max(0) as usize];
        for (p, c) in self.terms() {
            let k = (p - lo) as usize;
            acc[k] = std::mem::replace(&mut acc[k], C::zero()) + c;
        }
        for (p, c) in o.terms() {
            let k = (p - lo) as usize;
            acc[k] = std::mem::replace(&mut acc[k], C::zero()) + c;
        }
        Laurent::new(lo, acc, tail)
    }
}

impl<C: Coefficient> Laurent<C> {
    fn truncate_to(&self, tail: Tail) -> Self {
        match tail {
            Tail::Exact => self.clone(),
            Tail::TruncatedAt(n) => self.truncate(n),
        }
    }
}

impl<C: Coefficient> Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        Laurent { valuation: self.valuation, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(), tail: self.tail }
    }
}

impl<C: Coefficient> Sub<&Laurent<C>> for &Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, o: &Laurent<C>) -> Laurent<C> {
        self + &(-o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = Laurent<i64x>;

    // minimal integer coefficient so the generic machinery is tested in isolation
    #[derive(Clone, Copy, Debug, PartialEq)]
    #[allow(non_camel_case_types)]
    struct i64x(i64);
    impl Zero for i64x {
        fn zero() -> Self {
            i64x(0)
        }
        fn is_zero(&self) -> bool {
            self.0 == 0
        }
    }
    impl Add for i64x {
        type Output = i64x;
        fn add(self, o: i64x) -> i64x {
            i64x(self.0 + o.0)
        }
    }
    impl Add<&i64x> for i64x {
        type Output = i64x;
        fn add(self, o: &i64x) -> i64x {
            i64x(self.0 + o.0)
        }
    }
    impl Neg for i64x {
        type Output = i64x;
        fn neg(self) -> i64x {
            i64x(-self.0)
        }
    }

    fn s(v: i64, cs: &[i64], tail: Tail) -> S {
        S::new(v, cs.iter().map(|&c| i64x(c)).collect(), tail)
    }

    #[test]
    fn canonical_form_strips_leading_and_trailing_zeros() {
        let a = s(-2, &[0, 0, 1, 2, 0, 0], Tail::Exact);
        assert_eq!(a.valuation(), 0);
        assert_eq!(a.coeffs().len(), 2);
        assert_eq!(s(3, &[0, 0], Tail::Exact), S::zero());
    }

    #[test]
    fn truncated_zero_sits_past_its_order() {
        let z = s(0, &[0, 0], Tail::TruncatedAt(4));
        assert!(z.is_zero());
        assert_eq!(z.valuation(), 5);
        assert_eq!(z.coeff(4), Some(i64x(0)));
        assert_eq!(z.coeff(5), None);
    }

    #[test]
    fn addition_takes_weaker_tail() {
        let a = s(0, &[1, -1], Tail::TruncatedAt(3));
        let b = s(3, &[1, 1], Tail::Exact);
        let c = &a + &b;
        assert_eq!(c.tail(), Tail::TruncatedAt(3));
        assert_eq!(c, s(0, &[1, -1, 0, 1], Tail::TruncatedAt(3)));
    }

    #[test]
    fn product_tail_shifts_by_partner_valuation() {
        let a = s(0, &[1, 1], Tail::TruncatedAt(2));
        let b = s(-1, &[1], Tail::Exact);
        let c = a.mul_with(&b, |x, y| i64x(x.0 * y.0));
        assert_eq!(c.tail(), Tail::TruncatedAt(1));
        assert_eq!(c.valuation(), -1);
    }

    #[test]
    fn unbounded_principal_part_is_rejected() {
        let r = S::from_fn(PowerBound::NegativeInfinity, 3, Tail::Exact, |_| i64x(1));
        assert_eq!(r, Err(Error::InfinitePrincipalPart));
    }

    #[test]
    fn compare_reports_depth() {
        let a = s(0, &[1, 2, 3], Tail::TruncatedAt(2));
        let b = s(0, &[1, 2, 3, 4], Tail::TruncatedAt(5));
        let ag = a.compare(&b);
        assert!(ag.equal);
        assert_eq!(ag.depth, Some(2));
    }
}

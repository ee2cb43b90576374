//! The field of formal Laurent series in λ with Gaussian-rational coefficients.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::complex::{fmt_rational, ExactComplex, Rational};
use crate::error::{Error, Result};
use crate::laurent::{Laurent, Tail};

pub type FormalScalar = Laurent<ExactComplex>;

/// Whether λ is a formal symbol or bound to a positive rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaBinding {
    Formal,
    Strict(Rational),
}

impl LambdaBinding {
    pub fn strict(value: Rational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::NonPositiveLambda(fmt_rational(&value)));
        }
        Ok(LambdaBinding::Strict(value))
    }

    pub fn value(&self) -> Result<&Rational> {
        match self {
            LambdaBinding::Formal => Err(Error::FormalMode),
            LambdaBinding::Strict(v) => Ok(v),
        }
    }
}

pub fn lambda() -> FormalScalar {
    FormalScalar::monomial(ExactComplex::one(), 1)
}

pub fn scalar(c: ExactComplex) -> FormalScalar {
    FormalScalar::constant(c)
}

/// Series from integer coefficients starting at λ^valuation; test and example shorthand.
pub fn scalar_from_ints(valuation: i64, coeffs: &[i64], tail: Tail) -> FormalScalar {
    FormalScalar::new(valuation, coeffs.iter().map(|&c| ExactComplex::from_int(c)).collect(), tail)
}

pub fn scalar_mul(a: &FormalScalar, b: &FormalScalar) -> FormalScalar {
    a.mul_with(b, |x, y| x * y)
}

pub fn scalar_conj(a: &FormalScalar) -> FormalScalar {
    a.map(ExactComplex::conj)
}

pub fn scalar_invert(a: &FormalScalar, order: i64) -> Result<FormalScalar> {
    a.inverse_with(order, ExactComplex::inv, |x, y| x * y)
}

/// λ^power at a rational point.
pub(crate) fn rational_pow(base: &Rational, power: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..power.unsigned_abs() {
        acc *= base;
    }
    if power < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Substitutes a strict λ into a finitely supported series.
pub fn scalar_eval(a: &FormalScalar, binding: &LambdaBinding) -> Result<ExactComplex> {
    let lam = binding.value()?;
    if let Tail::TruncatedAt(n) = a.tail() {
        return Err(Error::TruncatedTail(n));
    }
    let mut acc = ExactComplex::zero();
    for (p, c) in a.terms() {
        acc += &c.scale(&rational_pow(lam, p));
    }
    Ok(acc)
}

/// Index from which the coefficient of λ^power in the sequence stays equal to
/// the limit's, over the finite horizon supplied. `None` when the last
/// element still disagrees.
///
/// This is the per-power convergence test for sequences of scalars; a finite
/// prefix can only witness eventual stabilization, not prove a limit.
pub fn stabilizes_at(sequence: &[FormalScalar], limit: &FormalScalar, power: i64) -> Option<usize> {
    let target = limit.coeff(power)?;
    let mut from = None;
    for (idx, s) in sequence.iter().enumerate() {
        match s.coeff(power) {
            Some(c) if c == target => {
                from.get_or_insert(idx);
            }
            _ => from = None,
        }
    }
    from
}

fn render_laurent_term(out: &mut String, c: &ExactComplex, power: i64, first: bool) {
    let (neg, body) = c.signed_parts();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let lam = match power {
        0 => String::new(),
        1 => "lam".to_string(),
        p => format!("lam^{p}"),
    };
    if lam.is_empty() {
        out.push_str(&body);
    } else if body == "1" {
        out.push_str(&lam);
    } else {
        out.push_str(&body);
        out.push('*');
        out.push_str(&lam);
    }
}

/// Renders a scalar series in the expression syntax, e.g. `I*lam` or `1 - lam + O(lam^4)`.
pub struct ScalarDisplay<'a>(pub &'a FormalScalar);

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (p, c) in self.0.terms() {
            if c.is_zero() {
                continue;
            }
            render_laurent_term(&mut out, c, p, first);
            first = false;
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::rat;

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    #[test]
    fn add_examples() {
        let a = scalar_from_ints(0, &[1, 1], Tail::Exact);
        let b = scalar_from_ints(-1, &[1], Tail::Exact);
        assert_eq!(&a + &b, scalar_from_ints(-1, &[1, 1, 1], Tail::Exact));
        assert_eq!(&a + &FormalScalar::zero(), a);
        let t = scalar_from_ints(0, &[1, -1], Tail::TruncatedAt(3));
        let e = scalar_from_ints(3, &[1, 1], Tail::Exact);
        let sum = &t + &e;
        assert_eq!(sum, scalar_from_ints(0, &[1, -1, 0, 1], Tail::TruncatedAt(3)));
        // oracle: untruncated sum compared through λ^3
        let full = &scalar_from_ints(0, &[1, -1], Tail::Exact) + &e;
        assert!(sum.agrees_through(&full.truncate(3), 3));
    }

    #[test]
    fn mul_examples() {
        let a = scalar_from_ints(0, &[1, 1], Tail::Exact);
        let b = scalar_from_ints(0, &[1, -1], Tail::Exact);
        assert_eq!(scalar_mul(&a, &b), scalar_from_ints(0, &[1, 0, -1], Tail::Exact));
        let c = scalar_from_ints(-1, &[1, 1], Tail::Exact);
        assert_eq!(scalar_mul(&c, &lambda()), scalar_from_ints(0, &[1, 1], Tail::Exact));
        let d = scalar_from_ints(0, &[1, 1, 1], Tail::Exact);
        assert_eq!(scalar_mul(&d, &a), scalar_from_ints(0, &[1, 2, 2, 1], Tail::Exact));
    }

    #[test]
    fn conj_examples() {
        let a = FormalScalar::new(-1, vec![c(0, 1), c(1, 1)], Tail::Exact);
        let expected = FormalScalar::new(-1, vec![c(0, -1), c(1, -1)], Tail::Exact);
        assert_eq!(scalar_conj(&a), expected);
        assert_eq!(scalar_conj(&scalar_conj(&a)), a);
        let r = FormalScalar::monomial(ExactComplex::from_ratio(3, 2), 2);
        assert_eq!(scalar_conj(&r), r);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(scalar_invert(&lambda(), 5).unwrap(), FormalScalar::monomial(ExactComplex::one(), -1));
        let a = scalar_from_ints(0, &[1, 1], Tail::Exact);
        let inv = scalar_invert(&a, 3).unwrap();
        assert_eq!(inv, scalar_from_ints(0, &[1, -1, 1, -1], Tail::TruncatedAt(3)));
        let back = scalar_mul(&a, &inv);
        assert!(back.agrees_through(&FormalScalar::constant(ExactComplex::one()), 3));
        let two = FormalScalar::monomial(ExactComplex::from_int(2), 2);
        let inv2 = scalar_invert(&two, 0).unwrap();
        assert_eq!(inv2, FormalScalar::monomial(ExactComplex::from_ratio(1, 2), -2));
        assert!(inv2.is_exact());
        assert_eq!(scalar_invert(&FormalScalar::zero(), 3), Err(Error::ZeroNotInvertible));
    }

    #[test]
    fn invert_with_negative_valuation_reaches_requested_order() {
        let a = scalar_from_ints(-2, &[3, 1, 4], Tail::Exact);
        let inv = scalar_invert(&a, 6).unwrap();
        let one = FormalScalar::constant(ExactComplex::one());
        assert!(scalar_mul(&a, &inv).agrees_through(&one, 6));
    }

    #[test]
    fn eval_examples() {
        let half = LambdaBinding::strict(rat(1, 2)).unwrap();
        let a = scalar_from_ints(0, &[1, 1, 1], Tail::Exact);
        assert_eq!(scalar_eval(&a, &half).unwrap(), ExactComplex::from_ratio(7, 4));
        let quarter = LambdaBinding::strict(rat(1, 4)).unwrap();
        assert_eq!(
            scalar_eval(&FormalScalar::monomial(ExactComplex::one(), -1), &quarter).unwrap(),
            ExactComplex::from_int(4)
        );
        let t = scalar_from_ints(0, &[1, 1], Tail::TruncatedAt(3));
        assert_eq!(scalar_eval(&t, &half), Err(Error::TruncatedTail(3)));
        assert_eq!(scalar_eval(&a, &LambdaBinding::Formal), Err(Error::FormalMode));
        assert!(LambdaBinding::strict(rat(-1, 2)).is_err());
    }

    #[test]
    fn kronecker_sequence_converges_to_zero_per_power() {
        // n-th element is λ^n: each fixed power is eventually zero
        let seq: Vec<FormalScalar> = (0..12).map(|n| FormalScalar::monomial(ExactComplex::one(), n)).collect();
        for power in 0..6 {
            assert_eq!(stabilizes_at(&seq, &FormalScalar::zero(), power), Some(power as usize + 1));
        }
    }

    #[test]
    fn display() {
        let a = FormalScalar::monomial(ExactComplex::i(), 1);
        assert_eq!(ScalarDisplay(&a).to_string(), "I*lam");
        let b = scalar_from_ints(-1, &[1, 0, -2], Tail::TruncatedAt(2));
        assert_eq!(ScalarDisplay(&b).to_string(), "lam^-1 - 2*lam + O(lam^3)");
    }
}

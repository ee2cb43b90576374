//! Random generators shared by the property and acceptance suites.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;

use starforge_core::complex::{rat, ExactComplex, Rational};
use starforge_core::functional::{Distribution, FormalFunctional};
use starforge_core::laurent::Tail;
use starforge_core::phase::{GaussPoly, GaussSum, PhaseContext};
use starforge_core::poly::{Monomial, Poly};
use starforge_core::scalar::FormalScalar;
use starforge_core::series::FormalFunction;

pub fn ctx1() -> PhaseContext {
    PhaseContext::new(1).unwrap()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn complex() -> impl Strategy<Value = ExactComplex> {
    (small_rational(), prop_oneof![2 => Just(rat(0, 1)), 1 => small_rational()]).prop_map(|(re, im)| ExactComplex::new(re, im))
}

pub fn nonzero_complex() -> impl Strategy<Value = ExactComplex> {
    complex().prop_filter("nonzero", |c| !num_traits::Zero::is_zero(c))
}

pub fn scalar() -> impl Strategy<Value = FormalScalar> {
    (-3i64..=2, prop::collection::vec(complex(), 0..5)).prop_map(|(v, cs)| FormalScalar::new(v, cs, Tail::Exact))
}

pub fn nonzero_scalar() -> impl Strategy<Value = FormalScalar> {
    (-3i64..=2, nonzero_complex(), prop::collection::vec(complex(), 0..4)).prop_map(|(v, lead, mut rest)| {
        rest.insert(0, lead);
        FormalScalar::new(v, rest, Tail::Exact)
    })
}

/// Polynomials in `(q, p)` of total degree at most `max_degree`.
pub fn poly(max_degree: u32) -> impl Strategy<Value = Poly> {
    let term = (0..=max_degree, 0..=max_degree)
        .prop_filter("degree", move |(a, b)| a + b <= max_degree)
        .prop_flat_map(|(a, b)| complex().prop_map(move |c| (Monomial(vec![a, b]), c)));
    prop::collection::vec(term, 0..4).prop_map(Poly::from_terms)
}

pub fn decay() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(rat(1, 2)), Just(rat(1, 1)), Just(rat(2, 1))]
}

pub fn polynomial(max_degree: u32) -> impl Strategy<Value = GaussPoly> {
    poly(max_degree).prop_map(GaussPoly::polynomial)
}

pub fn gaussian(max_degree: u32) -> impl Strategy<Value = GaussPoly> {
    (poly(max_degree), decay()).prop_map(|(p, a)| GaussPoly::new(p, a))
}

pub fn gauss_poly(max_degree: u32) -> impl Strategy<Value = GaussPoly> {
    prop_oneof![polynomial(max_degree), gaussian(max_degree)]
}

fn series_of(coeff: impl Strategy<Value = GaussPoly>, powers: usize) -> impl Strategy<Value = FormalFunction> {
    (-1i64..=1, prop::collection::vec(coeff, 1..=powers))
        .prop_map(|(v, cs)| FormalFunction::new(v, cs.into_iter().map(GaussSum::from).collect(), Tail::Exact))
}

/// Series with polynomial coefficients only.
pub fn poly_series(max_degree: u32, powers: usize) -> impl Strategy<Value = FormalFunction> {
    series_of(polynomial(max_degree), powers)
}

/// Series whose coefficients all decay.
pub fn gaussian_series(max_degree: u32, powers: usize) -> impl Strategy<Value = FormalFunction> {
    series_of(gaussian(max_degree), powers)
}

pub fn mixed_series(max_degree: u32, powers: usize) -> impl Strategy<Value = FormalFunction> {
    series_of(gauss_poly(max_degree), powers)
}

pub fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), 2)
}

/// Point masses, their derivatives and decaying densities on one pair.
pub fn distribution() -> impl Strategy<Value = Distribution> {
    let delta = (point(), prop::collection::vec(0u32..=1, 2), complex())
        .prop_map(|(pt, mi, w)| Distribution::point_deriv(pt, mi, w));
    let density = gaussian(2).prop_map(Distribution::density);
    prop::collection::vec(prop_oneof![delta, density], 1..3).prop_map(|ds| ds.into_iter().fold(num_traits::Zero::zero(), |a: Distribution, d| a + d))
}

pub fn functional() -> impl Strategy<Value = FormalFunctional> {
    (-1i64..=1, prop::collection::vec(distribution(), 1..3)).prop_map(|(v, ds)| FormalFunctional::new(v, ds, Tail::Exact))
}

// Seeded generators for the acceptance harness.

pub fn rand_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn rand_complex(rng: &mut impl Rng) -> ExactComplex {
    let im = if rng.gen_bool(0.5) { rand_rational(rng) } else { rat(0, 1) };
    ExactComplex::new(rand_rational(rng), im)
}

pub fn rand_nonzero_complex(rng: &mut impl Rng) -> ExactComplex {
    loop {
        let c = rand_complex(rng);
        if !num_traits::Zero::is_zero(&c) {
            return c;
        }
    }
}

pub fn rand_poly(rng: &mut impl Rng, max_degree: u32) -> Poly {
    let n = rng.gen_range(1..=3);
    Poly::from_terms((0..n).map(|_| {
        let a = rng.gen_range(0..=max_degree);
        let b = rng.gen_range(0..=max_degree - a);
        (Monomial(vec![a, b]), rand_complex(rng))
    }))
}

pub fn rand_decay(rng: &mut impl Rng) -> Rational {
    [rat(1, 2), rat(1, 1), rat(2, 1)][rng.gen_range(0..3)].clone()
}

pub fn rand_gaussian(rng: &mut impl Rng, max_degree: u32) -> GaussPoly {
    GaussPoly::new(rand_poly(rng, max_degree), rand_decay(rng))
}

pub fn rand_gauss_poly(rng: &mut impl Rng, max_degree: u32) -> GaussPoly {
    if rng.gen_bool(0.5) {
        GaussPoly::polynomial(rand_poly(rng, max_degree))
    } else {
        rand_gaussian(rng, max_degree)
    }
}

pub fn rand_point(rng: &mut impl Rng) -> Vec<Rational> {
    vec![rand_rational(rng), rand_rational(rng)]
}

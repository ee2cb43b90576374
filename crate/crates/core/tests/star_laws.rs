mod common;

use common::*;
use proptest::prelude::*;
use starforge_core::complex::ExactComplex;
use starforge_core::phase::GaussSum;
use starforge_core::series::{fs_conj, FormalFunction};
use starforge_core::star::{moyal_term, star_commutator, star_mul, star_trace, Moyal};

const ORDER: i64 = 4;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_products_terminate(f in polynomial(3), g in polynomial(3)) {
        let c = ctx1();
        let bound = f.poly.degree().unwrap_or(0).min(g.poly.degree().unwrap_or(0)) as usize;
        for k in bound + 1..=bound + 3 {
            prop_assert!(moyal_term(&c, k, &f, &g).is_zero());
        }
        let prod = star_mul(&Moyal::new(c), &FormalFunction::constant(f.into()), &FormalFunction::constant(g.into()), None).unwrap();
        prop_assert!(prod.is_exact());
    }

    #[test]
    fn hermiticity(f in mixed_series(2, 2), g in gaussian_series(2, 2)) {
        let m = Moyal::new(ctx1());
        let lhs = fs_conj(&star_mul(&m, &f, &g, Some(ORDER)).unwrap());
        let rhs = star_mul(&m, &fs_conj(&g), &fs_conj(&f), Some(ORDER)).unwrap();
        prop_assert!(lhs.compare(&rhs).equal);
    }

    #[test]
    fn commutator_starts_with_the_poisson_bracket(f0 in polynomial(3), f1 in polynomial(2), g0 in polynomial(3), g1 in polynomial(2)) {
        let c = ctx1();
        let m = Moyal::new(c);
        let f = FormalFunction::new(0, vec![f0.clone().into(), f1.into()], starforge_core::laurent::Tail::Exact);
        let g = FormalFunction::new(0, vec![g0.clone().into(), g1.into()], starforge_core::laurent::Tail::Exact);
        let bracket: GaussSum = f0.poisson(&g0, &c).scale(&ExactComplex::i()).into();
        let rest = &star_commutator(&m, &f, &g, None).unwrap() - &FormalFunction::monomial(bracket, 1);
        prop_assert!(rest.is_exact_zero() || rest.valuation() >= 2);
    }

    #[test]
    fn trace_is_symmetric(f in gaussian_series(2, 2), g in mixed_series(2, 2)) {
        let m = Moyal::new(ctx1());
        let fg = star_trace(&m, &star_mul(&m, &f, &g, Some(ORDER)).unwrap()).unwrap();
        let gf = star_trace(&m, &star_mul(&m, &g, &f, Some(ORDER)).unwrap()).unwrap();
        prop_assert!(fg.compare(&gf).equal);
    }

    #[test]
    fn associativity(f in mixed_series(2, 2), g in polynomial(2), h in gaussian_series(1, 2)) {
        let m = Moyal::new(ctx1());
        let g = FormalFunction::constant(g.into());
        let lhs = star_mul(&m, &star_mul(&m, &f, &g, Some(ORDER)).unwrap(), &h, Some(ORDER)).unwrap();
        let rhs = star_mul(&m, &f, &star_mul(&m, &g, &h, Some(ORDER)).unwrap(), Some(ORDER)).unwrap();
        prop_assert!(lhs.compare(&rhs).equal);
    }
}

mod common;

use common::*;
use proptest::prelude::*;
use starforge_core::phase::{Coord, GaussPoly};

fn same(a: &GaussPoly, b: &GaussPoly) -> bool {
    a == b || (a.is_zero() && b.is_zero())
}

proptest! {
    #[test]
    fn mixed_partials_commute(f in gauss_poly(4)) {
        let c = ctx1();
        let qp = f.diff(&c, Coord::Q(0)).unwrap().diff(&c, Coord::P(0)).unwrap();
        let pq = f.diff(&c, Coord::P(0)).unwrap().diff(&c, Coord::Q(0)).unwrap();
        prop_assert!(same(&qp, &pq));
    }

    #[test]
    fn leibniz(f in gauss_poly(3), g in gauss_poly(3)) {
        let c = ctx1();
        for v in c.coords() {
            let lhs = f.mul(&g).diff(&c, v).unwrap();
            let rhs = f.diff(&c, v).unwrap().mul(&g).add(&f.mul(&g.diff(&c, v).unwrap())).unwrap();
            prop_assert!(same(&lhs, &rhs));
        }
    }

    #[test]
    fn derivatives_integrate_to_zero(f in gaussian(4)) {
        let c = ctx1();
        for v in c.coords() {
            prop_assert!(f.diff(&c, v).unwrap().integrate(&c).unwrap().is_zero());
        }
    }

    #[test]
    fn poisson_bracket_is_a_lie_bracket(f in polynomial(3), g in polynomial(3), h in polynomial(3)) {
        let c = ctx1();
        let fg = f.poisson(&g, &c);
        prop_assert!(same(&fg, &g.poisson(&f, &c).scale(&starforge_core::complex::ExactComplex::from_int(-1))));
        let jacobi = f.poisson(&g.poisson(&h, &c), &c)
            .add(&g.poisson(&h.poisson(&f, &c), &c)).unwrap()
            .add(&h.poisson(&f.poisson(&g, &c), &c)).unwrap();
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn conjugation(f in gauss_poly(3), g in gauss_poly(3)) {
        prop_assert!(same(&f.mul(&g).conj(), &f.conj().mul(&g.conj())));
        prop_assert_eq!(f.conj().conj(), f);
    }
}

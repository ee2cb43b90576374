//! Executable versions of the star-product axioms, checked exactly on a
//! finite generator set and a finite range of orders.

use serde::Serialize;

use num_traits::Zero;

use crate::complex::ExactComplex;
use crate::phase::{GaussPoly, PhaseContext};
use crate::poly::{Monomial, Poly};

use super::StarFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    ByConstruction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub inputs: Vec<String>,
    pub order: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scope {
    pub generators: String,
    pub generator_count: usize,
    pub degree_bound: u32,
    pub order_bound: usize,
    pub pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomResult {
    pub axiom: u8,
    pub name: &'static str,
    pub verdict: Verdict,
    /// What the verdict covers; a pass never claims more than this.
    pub checked: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub family: String,
    pub scope: Scope,
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn verdict(&self, axiom: u8) -> Option<Verdict> {
        self.axioms.iter().find(|a| a.axiom == axiom).map(|a| a.verdict)
    }

    /// No axiom failed.
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.verdict != Verdict::Fail)
    }
}

type Check = Result<(), Counterexample>;

fn cx(inputs: &[&GaussPoly], order: usize, expected: &GaussPoly, found: &GaussPoly) -> Counterexample {
    Counterexample {
        inputs: inputs.iter().map(|g| g.to_string()).collect(),
        order,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn same(a: &GaussPoly, b: &GaussPoly) -> bool {
    (a.is_zero() && b.is_zero()) || a == b
}

fn sum(parts: impl IntoIterator<Item = GaussPoly>, alpha: &crate::complex::Rational) -> GaussPoly {
    let mut acc = GaussPoly::new(Poly::zero(), alpha.clone());
    for p in parts {
        acc.poly = &acc.poly + &p.poly;
    }
    acc
}

struct Ctx<'a> {
    s: &'a dyn StarFamily,
    gens: Vec<GaussPoly>,
    order: usize,
}

impl Ctx<'_> {
    fn b(&self, k: usize, f: &GaussPoly, g: &GaussPoly) -> GaussPoly {
        self.s.bidiff(k, f, g)
    }

    fn bilinearity(&self) -> Check {
        let a = ExactComplex::new(crate::complex::int(2), crate::complex::int(-1));
        let c = ExactComplex::from_ratio(1, 3) + ExactComplex::i();
        let n = self.gens.len();
        for (i, f) in self.gens.iter().enumerate() {
            let g = &self.gens[(i + 1) % n];
            let comb = f.scale(&a).add(&g.scale(&c)).expect("generators share alpha");
            for h in &self.gens {
                for k in 0..=self.order {
                    let lhs = self.b(k, &comb, h);
                    let rhs = self.b(k, f, h).scale(&a).add(&self.b(k, g, h).scale(&c)).expect("same alpha");
                    if !same(&lhs, &rhs) {
                        return Err(cx(&[&comb, h], k, &rhs, &lhs));
                    }
                    let lhs = self.b(k, h, &comb);
                    let rhs = self.b(k, h, f).scale(&a).add(&self.b(k, h, g).scale(&c)).expect("same alpha");
                    if !same(&lhs, &rhs) {
                        return Err(cx(&[h, &comb], k, &rhs, &lhs));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_l B_l(B_{k−l}(φ,ψ),χ) = Σ_l B_l(φ,B_{k−l}(ψ,χ))` for every order `k`.
    // indices pick rows of the product table, so index loops read best here
    #[allow(clippy::needless_range_loop)]
    fn associativity(&self) -> Check {
        let n = self.gens.len();
        let k_max = self.order;
        let table: Vec<Vec<Vec<GaussPoly>>> = (0..n)
            .map(|i| (0..n).map(|j| (0..=k_max).map(|k| self.b(k, &self.gens[i], &self.gens[j])).collect()).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let (f, g, h) = (&self.gens[i], &self.gens[j], &self.gens[l]);
                    let alpha = &(&f.alpha + &g.alpha) + &h.alpha;
                    for k in 0..=k_max {
                        let lhs = sum((0..=k).map(|m| self.b(m, &table[i][j][k - m], h)), &alpha);
                        let rhs = sum((0..=k).map(|m| self.b(m, f, &table[j][l][k - m])), &alpha);
                        if !same(&lhs, &rhs) {
                            return Err(cx(&[f, g, h], k, &lhs, &rhs));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn pointwise_leading_term(&self) -> Check {
        for f in &self.gens {
            for g in &self.gens {
                let b0 = self.b(0, f, g);
                let prod = f.mul(g);
                if !same(&b0, &prod) {
                    return Err(cx(&[f, g], 0, &prod, &b0));
                }
            }
        }
        Ok(())
    }

    fn unit(&self) -> Check {
        let one = self.s.context().one();
        for f in &self.gens {
            for k in 1..=self.order {
                for (x, y) in [(&one, f), (f, &one)] {
                    let v = self.b(k, x, y);
                    if !v.is_zero() {
                        return Err(cx(&[x, y], k, &GaussPoly::new(Poly::zero(), v.alpha.clone()), &v));
                    }
                }
            }
        }
        Ok(())
    }

    /// `B_1(φ,ψ) − B_1(ψ,φ) = i{φ,ψ}`.
    fn first_order_commutator(&self) -> Check {
        let ctx = self.s.context();
        for f in &self.gens {
            for g in &self.gens {
                let lhs = self.b(1, f, g).add(&self.b(1, g, f).scale(&-ExactComplex::from_int(1))).expect("same alpha");
                let rhs = f.poisson(g, &ctx).scale(&ExactComplex::i());
                if !same(&lhs, &rhs) {
                    return Err(cx(&[f, g], 1, &rhs, &lhs));
                }
            }
        }
        Ok(())
    }

    /// `conj B_k(φ,ψ) = B_k(conj ψ, conj φ)` on complex combinations of generators.
    fn hermiticity(&self) -> Check {
        let n = self.gens.len();
        let complexified: Vec<GaussPoly> = (0..n)
            .map(|i| self.gens[i].add(&self.gens[(i + 1) % n].scale(&ExactComplex::i())).expect("same alpha"))
            .collect();
        for f in &complexified {
            for g in &self.gens {
                for k in 0..=self.order {
                    let lhs = self.b(k, f, g).conj();
                    let rhs = self.b(k, &g.conj(), &f.conj());
                    if !same(&lhs, &rhs) {
                        return Err(cx(&[f, g], k, &rhs, &lhs));
                    }
                }
            }
        }
        Ok(())
    }

    /// Differential order of `B_k` in each argument is at most `k`: every
    /// `(k+1)`-fold commutator with coordinate multiplications vanishes.
    fn naturality(&self) -> Check {
        let ctx = self.s.context();
        let nvars = ctx.nvars();
        let coord = |idx: usize| GaussPoly::polynomial(Poly::var(idx, nvars));
        for k in 1..=self.order {
            let multisets = Monomial::all_up_to(nvars, k as u32 + 1).into_iter().filter(|m| m.degree() == k as u32 + 1);
            let multisets: Vec<Monomial> = multisets.collect();
            for f in &self.gens {
                for g in &self.gens {
                    for m in &multisets {
                        for left in [true, false] {
                            let v = nested_commutator(|x| if left { self.b(k, x, g) } else { self.b(k, f, x) }, if left { f } else { g }, m, &coord);
                            if !v.is_zero() {
                                let zero = GaussPoly::new(Poly::zero(), v.alpha.clone());
                                return Err(cx(&[f, g], k, &zero, &v));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `[…[[D, x_{i1}], x_{i2}]…, x_{ir}](f)` for the multiset `m` of coordinates,
/// expanded as `Σ_j Π C(m_v, j_v) (−1)^{|j|} x^j D(x^{m−j} f)`.
fn nested_commutator(
    d: impl Fn(&GaussPoly) -> GaussPoly,
    f: &GaussPoly,
    m: &Monomial,
    coord: &impl Fn(usize) -> GaussPoly,
) -> GaussPoly {
    let mut acc: Option<GaussPoly> = None;
    let mut j = vec![0u32; m.nvars()];
    loop {
        let mut inner = f.clone();
        let mut outer = GaussPoly::polynomial(Poly::one(m.nvars()));
        let mut coeff = ExactComplex::from_int(1);
        for (v, (&jv, &mv)) in j.iter().zip(&m.0).enumerate() {
            for _ in 0..(mv - jv) {
                inner = inner.mul(&coord(v));
            }
            for _ in 0..jv {
                outer = outer.mul(&coord(v));
            }
            coeff = coeff.scale(&binomial(mv, jv));
            if jv % 2 == 1 {
                coeff = -coeff;
            }
        }
        let term = outer.mul(&d(&inner)).scale(&coeff);
        acc = Some(match acc {
            None => term,
            Some(a) => GaussPoly::new(&a.poly + &term.poly, a.alpha),
        });
        // odometer over 0 ≤ j ≤ m
        let mut v = 0;
        loop {
            if v == j.len() {
                return acc.unwrap_or_else(|| f.clone());
            }
            if j[v] < m.0[v] {
                j[v] += 1;
                break;
            }
            j[v] = 0;
            v += 1;
        }
    }
}

fn binomial(n: u32, k: u32) -> crate::complex::Rational {
    let mut r = crate::complex::Rational::from_integer(1.into());
    for i in 0..k {
        r = r * crate::complex::Rational::from_integer((n - i).into()) / crate::complex::Rational::from_integer((i + 1).into());
    }
    r
}

fn result(axiom: u8, name: &'static str, checked: String, check: Check) -> AxiomResult {
    match check {
        Ok(()) => AxiomResult { axiom, name, verdict: Verdict::Pass, checked, counterexample: None },
        Err(c) => AxiomResult { axiom, name, verdict: Verdict::Fail, checked, counterexample: Some(c) },
    }
}

/// Runs axioms 1–9 on monomials of total degree ≤ `degree_bound`, for orders ≤ `order_bound`.
pub fn axiom_suite(s: &dyn StarFamily, degree_bound: u32, order_bound: usize) -> AxiomReport {
    let ctx: PhaseContext = s.context();
    let gens = ctx.monomials(degree_bound);
    let scope = Scope {
        generators: format!("monomials of total degree <= {degree_bound}"),
        generator_count: gens.len(),
        degree_bound,
        order_bound,
        pairs: ctx.pairs(),
    };
    let c = Ctx { s, gens, order: order_bound };
    let k = order_bound;
    let axioms = vec![
        result(1, "bilinearity", format!("B_k(a*f + c*g, h) and B_k(h, a*f + c*g) with f, g consecutive generators, every h, k <= {k}"), c.bilinearity()),
        AxiomResult {
            axiom: 2,
            name: "locality",
            verdict: Verdict::ByConstruction,
            checked: "B_k is assembled from derivatives only".into(),
            counterexample: None,
        },
        result(3, "associativity", format!("every generator triple, orders <= {k}"), c.associativity()),
        result(4, "leading term is the pointwise product", "every generator pair".into(), c.pointwise_leading_term()),
        result(5, "unit", format!("B_k(1, f) = B_k(f, 1) = 0 for every generator, 1 <= k <= {k}"), c.unit()),
        result(6, "first-order commutator is i times the Poisson bracket", "every generator pair".into(), c.first_order_commutator()),
        result(7, "hermiticity", format!("complex generator combinations against every generator, k <= {k}"), c.hermiticity()),
        AxiomResult {
            axiom: 8,
            name: "bidifferential",
            verdict: Verdict::ByConstruction,
            checked: "operators act through derivatives of each argument".into(),
            counterexample: None,
        },
        result(9, "naturality", format!("differential order of B_k in each argument, every generator pair, 1 <= k <= {k}"), c.naturality()),
    ];
    AxiomReport { family: s.name().to_string(), scope, axioms }
}

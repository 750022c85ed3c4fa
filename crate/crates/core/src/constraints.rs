//! Extract the polynomial constraint system of a generic self-map: for
//! each generator g, expand f(dg) - d(fg) with unknown coefficients and
//! emit one equation per surviving target monomial, tagged with its
//! provenance.

use crate::ansatz::GenericMorphism;
use crate::element::Element;
use crate::mg::MGAlgebra;
use crate::monomial::Monomial;
use crate::morphism::apply_images;
use crate::mpoly::MPoly;
use crate::Result;

#[derive(Debug, Clone)]
pub struct Equation {
    pub poly: MPoly,
    /// Generator whose d-commutation produced this equation.
    pub source_gen: u32,
    /// Target monomial whose coefficient was matched.
    pub target_monomial: Monomial,
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub equations: Vec<Equation>,
}

impl ConstraintSystem {
    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }
}

/// Build the system f(dg) - d(fg) = 0 over all generators.
pub fn constraint_system(mg: &MGAlgebra, gm: &GenericMorphism) -> Result<ConstraintSystem> {
    let alg = mg.algebra();
    let sig = alg.sig();
    let mut equations = Vec::new();
    for g in 0..alg.gen_count() as u32 {
        let lhs: Element<MPoly> = apply_images(&gm.templates, alg.d_of(g), sig)?;
        let rhs: Element<MPoly> = alg.differentiate(&gm.templates[g as usize])?;
        let residual = lhs.sub(&rhs)?;
        for (m, p) in residual.terms() {
            equations.push(Equation {
                poly: p.clone(),
                source_gen: g,
                target_monomial: m.clone(),
            });
        }
    }
    Ok(ConstraintSystem { equations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::generic_ansatz;
    use crate::budget::Budgets;
    use crate::graph::parse_graph;
    use crate::mg::build_mg;
    use crate::mpoly::PMonomial;
    use crate::ring::qi;

    fn poly_equals(p: &MPoly, terms: &[(i64, &[(u32, u32)])]) -> bool {
        let want = MPoly::from_terms(
            terms.iter().map(|(c, pairs)| (PMonomial::from_pairs(pairs), qi(*c))),
        );
        *p == want
    }

    #[test]
    fn y1_equation_is_b1_minus_a1_cubed_a2() {
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let gm = generic_ansatz(&mg, &Budgets::default()).unwrap();
        let cs = constraint_system(&mg, &gm).unwrap();
        let a1 = gm.unknowns.index_of("a1").unwrap();
        let a2 = gm.unknowns.index_of("a2").unwrap();
        let b1 = gm.unknowns.index_of("b1").unwrap();
        // From y1: the coefficient of x1^3 x2 matches a1^3 a2 - b1.
        let eq = cs
            .equations
            .iter()
            .find(|e| e.source_gen == mg.y[0])
            .expect("y1 produces an equation");
        assert!(
            poly_equals(&eq.poly, &[(1, &[(a1, 3), (a2, 1)]), (-1, &[(b1, 1)])])
                || poly_equals(&eq.poly, &[(-1, &[(a1, 3), (a2, 1)]), (1, &[(b1, 1)])]),
            "unexpected polynomial {:?}",
            eq.poly
        );
    }

    #[test]
    fn z_equations_include_classical_displays() {
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let gm = generic_ansatz(&mg, &Budgets::default()).unwrap();
        let cs = constraint_system(&mg, &gm).unwrap();
        let alg = mg.algebra();
        let sig = alg.sig();
        let a1 = gm.unknowns.index_of("a1").unwrap();
        let a2 = gm.unknowns.index_of("a2").unwrap();
        let c = gm.unknowns.index_of("c").unwrap();

        // Coefficient of x1^15 in the z-equation: a1^15 - c.
        let x1p15 = Monomial::power(sig, mg.x1, 15).unwrap();
        let eq = cs
            .equations
            .iter()
            .find(|e| e.source_gen == mg.z && e.target_monomial == x1p15)
            .unwrap();
        assert!(poly_equals(&eq.poly, &[(1, &[(a1, 15)]), (-1, &[(c, 1)])]));

        // Coefficient of x2^12: a2^12 - c.
        let x2p12 = Monomial::power(sig, mg.x2, 12).unwrap();
        let eq = cs
            .equations
            .iter()
            .find(|e| e.source_gen == mg.z && e.target_monomial == x2p12)
            .unwrap();
        assert!(poly_equals(&eq.poly, &[(1, &[(a2, 12)]), (-1, &[(c, 1)])]));

        // The c(w) = 0 family: the template term c(a) z[a] differentiates
        // into c(a) x[a]^3 + ..., and f(dz) has no x[a]^3 monomial.
        let xa3 = Monomial::power(sig, mg.xv[0], 3).unwrap();
        let eq = cs
            .equations
            .iter()
            .find(|e| e.source_gen == mg.z && e.target_monomial == xa3)
            .unwrap();
        let ca = gm.unknowns.index_of("c(a)").unwrap();
        assert!(poly_equals(&eq.poly, &[(-1, &[(ca, 1)])]));
    }

    #[test]
    fn zero_map_and_identity_satisfy_the_system() {
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let gm = generic_ansatz(&mg, &Budgets::default()).unwrap();
        let cs = constraint_system(&mg, &gm).unwrap();
        // Zero assignment (f0) is a solution.
        for eq in &cs.equations {
            let mut p = eq.poly.clone();
            for v in p.variables() {
                p = p.substitute(v, &MPoly::zero());
            }
            assert!(p.is_empty(), "zero map violates {:?}", eq.poly);
        }
        // Identity: a1 = a2 = b_i = c = 1, a(v,v) = 1, c(v,v) = 1, rest 0.
        let one_names = ["a1", "a2", "b1", "b2", "b3", "c", "a(a,a)", "a(b,b)", "c(a,a)", "c(b,b)"];
        let ones: Vec<u32> =
            one_names.iter().filter_map(|n| gm.unknowns.index_of(n)).collect();
        assert_eq!(ones.len(), one_names.len());
        for eq in &cs.equations {
            let mut p = eq.poly.clone();
            for v in p.variables() {
                let value = if ones.contains(&v) {
                    MPoly::constant(qi(1))
                } else {
                    MPoly::zero()
                };
                p = p.substitute(v, &value);
            }
            assert!(
                p.is_empty(),
                "identity violates equation from {} at {}: {:?}",
                mg.algebra().sig().name(eq.source_gen),
                eq.target_monomial.show(mg.algebra().sig()),
                eq.poly
            );
        }
    }
}

//! Realize a finite permutation group as the automorphism group of a
//! connected simple graph: Cayley graph with asymmetric path gadgets in
//! place of colored directed edges. The construction is a candidate and
//! is always verified by [`automorphism_group`]; a failed self-check is a
//! hard error, never a silently wrong graph.

use std::collections::BTreeMap;

use crate::budget::Budgets;
use crate::error::Error;
use crate::graph::{automorphism_group, parse_graph, Graph};
use crate::perm::{groups_isomorphic, Perm, PermGroup};
use crate::Result;

/// The canonical asymmetric spider tree (legs of 1, 2 and 3 edges) used
/// for the trivial group, whose Cayley graph would otherwise be a single
/// vertex.
pub fn asymmetric_tree() -> Graph {
    parse_graph("r a1\nr b1\nb1 b2\nr c1\nc1 c2\nc2 c3\n").expect("fixed tree text parses")
}

/// Build a connected graph with more than one vertex whose automorphism
/// group is isomorphic to `group`.
///
/// Gadget for generator number i (1-based) on the Cayley edge g -> g*s_i:
/// a path g - u - v - g*s_i of two internal vertices with a pendant path
/// of length 2i-1 at u and 2i at v. The unequal tails encode direction,
/// the lengths encode the color. Involution generators get one gadget per
/// unordered pair with tails of equal length 2i on both internal
/// vertices, since multiplication by the involution itself swaps the two
/// endpoints and must stay an automorphism; length 2i rather than 2i-1
/// keeps order-2 groups sound, where a length-1 tail end would be
/// indistinguishable from a degree-1 group vertex.
///
/// `generators`: optional generating set; defaults to all non-identity
/// elements.
pub fn frucht_graph(
    group: &PermGroup,
    generators: Option<Vec<Perm>>,
    budgets: &Budgets,
) -> Result<Graph> {
    if group.order() == 1 {
        let g = asymmetric_tree();
        verify(group, &g, budgets)?;
        return Ok(g);
    }

    let gens: Vec<Perm> = match generators {
        Some(gs) => {
            let gs: Vec<Perm> = gs.into_iter().filter(|p| !p.is_identity()).collect();
            if gs.is_empty() {
                return Err(Error::validation("empty generating set"));
            }
            let span = PermGroup::generate(group.degree(), &gs, budgets)?;
            if span.order() != group.order() {
                return Err(Error::validation("supplied generators do not generate the group"));
            }
            gs
        }
        None => group
            .elements()
            .iter()
            .filter(|p| !p.is_identity())
            .cloned()
            .collect(),
    };

    let elements = group.elements();
    let elem_index: BTreeMap<&Perm, usize> =
        elements.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut labels: Vec<String> = (0..elements.len()).map(|i| format!("g{i}")).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    let tail = |labels: &mut Vec<String>,
                    edges: &mut Vec<(usize, usize)>,
                    base: usize,
                    len: usize,
                    name: &str| {
        let mut prev = base;
        for k in 0..len {
            let id = labels.len();
            labels.push(format!("{name}t{k}"));
            edges.push((prev, id));
            prev = id;
        }
    };

    for (ci, s) in gens.iter().enumerate() {
        let color = ci + 1; // 1-based
        let involution = s.compose(s).is_identity();
        for (gi, g) in elements.iter().enumerate() {
            let h = s.compose(g); // g followed by s: the Cayley edge g -> s*g
            let hi = elem_index[&h];
            if involution && hi < gi {
                continue; // one gadget per unordered pair
            }
            let stem = format!("c{color}e{gi}");
            let u = labels.len();
            labels.push(format!("{stem}u"));
            let v = labels.len();
            labels.push(format!("{stem}v"));
            edges.push((gi, u));
            edges.push((u, v));
            edges.push((v, hi));
            if involution {
                tail(&mut labels, &mut edges, u, 2 * color, &format!("{stem}p"));
                tail(&mut labels, &mut edges, v, 2 * color, &format!("{stem}q"));
            } else {
                tail(&mut labels, &mut edges, u, 2 * color - 1, &format!("{stem}p"));
                tail(&mut labels, &mut edges, v, 2 * color, &format!("{stem}q"));
            }
        }
    }

    let graph = Graph::new(labels, &edges)?;
    verify(group, &graph, budgets)?;
    Ok(graph)
}

fn verify(group: &PermGroup, graph: &Graph, budgets: &Budgets) -> Result<()> {
    // Verification is part of the construction contract, so allow the
    // search to run on however many vertices the gadgets produced.
    let check_budgets = Budgets {
        vertex_cap: budgets.vertex_cap.max(graph.n()),
        ..budgets.clone()
    };
    let aut = automorphism_group(graph, &check_budgets)?;
    match groups_isomorphic(group, &aut, &check_budgets)? {
        Some(_) => Ok(()),
        None => Err(Error::internal(format!(
            "gadget graph self-check failed: Aut has order {}, group has order {}",
            aut.order(),
            group.order()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_gives_rigid_tree() {
        let b = Budgets::default();
        let triv = PermGroup::generate(1, &[], &b).unwrap();
        let g = frucht_graph(&triv, None, &b).unwrap();
        assert_eq!(g.n(), 7);
        assert!(g.is_connected());
        assert_eq!(automorphism_group(&g, &b).unwrap().order(), 1);
    }

    #[test]
    fn z2_realized() {
        let b = Budgets::default();
        let z2 = PermGroup::generate(2, &[Perm::from_cycles("(1 2)", 2).unwrap()], &b).unwrap();
        let g = frucht_graph(&z2, None, &b).unwrap();
        assert!(g.is_connected());
        let aut = automorphism_group(&g, &b).unwrap();
        assert_eq!(aut.order(), 2);
    }

    #[test]
    fn z3_realized_with_single_generator() {
        let b = Budgets::default();
        let c = Perm::from_cycles("(1 2 3)", 3).unwrap();
        let z3 = PermGroup::generate(3, &[c.clone()], &b).unwrap();
        let g = frucht_graph(&z3, Some(vec![c]), &b).unwrap();
        assert_eq!(g.n(), 18);
        let aut = automorphism_group(&g, &b).unwrap();
        assert_eq!(aut.order(), 3);
    }

    #[test]
    fn z3_realized_with_default_generators() {
        let b = Budgets::default();
        let c = Perm::from_cycles("(1 2 3)", 3).unwrap();
        let z3 = PermGroup::generate(3, &[c], &b).unwrap();
        let g = frucht_graph(&z3, None, &b).unwrap();
        let check = Budgets { vertex_cap: g.n(), ..b };
        assert_eq!(automorphism_group(&g, &check).unwrap().order(), 3);
    }

    #[test]
    fn s3_realized() {
        let b = Budgets::default();
        let t = Perm::from_cycles("(1 2)", 3).unwrap();
        let c = Perm::from_cycles("(1 2 3)", 3).unwrap();
        let s3 = PermGroup::generate(3, &[t.clone(), c.clone()], &b).unwrap();
        let g = frucht_graph(&s3, Some(vec![t, c]), &b).unwrap();
        let check = Budgets { vertex_cap: g.n(), ..b };
        let aut = automorphism_group(&g, &check).unwrap();
        assert_eq!(aut.order(), 6);
        assert!(groups_isomorphic(&aut, &s3, &check).unwrap().is_some());
    }
}

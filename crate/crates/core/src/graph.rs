use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::error::Error;
use crate::perm::{Perm, PermGroup};
use crate::Result;

/// Simple undirected graph with string-labeled vertices. No loops, no
/// duplicate edges; edge endpoints must be declared vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    labels: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(labels: Vec<String>, edge_pairs: &[(usize, usize)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::validation(format!("duplicate vertex label {l}")));
            }
        }
        let mut edges = BTreeSet::new();
        for &(a, b) in edge_pairs {
            if a >= labels.len() || b >= labels.len() {
                return Err(Error::validation("edge endpoint out of range"));
            }
            if a == b {
                return Err(Error::validation(format!("loop at vertex {}", labels[a])));
            }
            let e = (a.min(b), a.max(b));
            if !edges.insert(e) {
                return Err(Error::validation(format!(
                    "duplicate edge {} {}",
                    labels[e.0], labels[e.1]
                )));
            }
        }
        Ok(Graph { labels, edges })
    }

    pub fn from_labeled_edges(edges: &[(&str, &str)]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut index = BTreeMap::new();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            for l in [a, b] {
                if !index.contains_key(*l) {
                    index.insert(l.to_string(), labels.len());
                    labels.push(l.to_string());
                }
            }
            pairs.push((index[*a], index[*b]));
        }
        Graph::new(labels, &pairs)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn is_connected(&self) -> bool {
        if self.labels.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Emit the edge-list text format (deterministic).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut isolated: Vec<&str> = Vec::new();
        for (v, l) in self.labels.iter().enumerate() {
            if self.degree(v) == 0 {
                isolated.push(l);
            }
        }
        for l in isolated {
            out.push_str(&format!("vertex {}\n", l));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", self.labels[a], self.labels[b]));
        }
        out
    }
}

/// Parse the graph text format: one edge per line as `label label`,
/// `vertex label` declares an isolated vertex, `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let intern = |labels: &mut Vec<String>, index: &mut BTreeMap<String, usize>, l: &str| {
        if let Some(&i) = index.get(l) {
            i
        } else {
            index.insert(l.to_string(), labels.len());
            labels.push(l.to_string());
            labels.len() - 1
        }
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["vertex", l] => {
                intern(&mut labels, &mut index, l);
            }
            [a, b] => {
                if a == b {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("loop at vertex {a}"),
                    });
                }
                let ia = intern(&mut labels, &mut index, a);
                let ib = intern(&mut labels, &mut index, b);
                let e = (ia.min(ib), ia.max(ib));
                if pairs.contains(&e) {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("duplicate edge {a} {b}"),
                    });
                }
                pairs.push(e);
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected `label label` or `vertex label`, got `{line}`"),
                });
            }
        }
    }
    Graph::new(labels, &pairs)
}

/// Vertex map between graphs.
#[derive(Debug, Clone)]
pub struct GraphMorphism {
    pub source: Graph,
    pub target: Graph,
    /// vertex_map[v] = image of source vertex v (indices into target).
    pub vertex_map: Vec<usize>,
}

impl GraphMorphism {
    pub fn new(source: Graph, target: Graph, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.n() {
            return Err(Error::validation("vertex map length mismatch"));
        }
        if vertex_map.iter().any(|&w| w >= target.n()) {
            return Err(Error::validation("vertex map image out of range"));
        }
        Ok(GraphMorphism { source, target, vertex_map })
    }

    pub fn by_labels(source: Graph, target: Graph, map: &[(&str, &str)]) -> Result<Self> {
        let mut vm = vec![usize::MAX; source.n()];
        for (a, b) in map {
            let ia = source
                .index_of(a)
                .ok_or_else(|| Error::validation(format!("unknown source vertex {a}")))?;
            let ib = target
                .index_of(b)
                .ok_or_else(|| Error::validation(format!("unknown target vertex {b}")))?;
            vm[ia] = ib;
        }
        if vm.iter().any(|&w| w == usize::MAX) {
            return Err(Error::validation("vertex map does not cover the source"));
        }
        GraphMorphism::new(source, target, vm)
    }

    pub fn compose_after(&self, inner: &GraphMorphism) -> Result<GraphMorphism> {
        if inner.target != self.source {
            return Err(Error::validation("graph morphisms not composable"));
        }
        let vm = inner.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        GraphMorphism::new(inner.source.clone(), self.target.clone(), vm)
    }
}

/// Injective, and (v,w) in E iff (f v, f w) in E'.
pub fn is_full_monomorphism(m: &GraphMorphism) -> bool {
    let n = m.source.n();
    let mut seen = BTreeSet::new();
    for &w in &m.vertex_map {
        if !seen.insert(w) {
            return false;
        }
    }
    for v in 0..n {
        for w in v + 1..n {
            let src = m.source.has_edge(v, w);
            let dst = m.target.has_edge(m.vertex_map[v], m.vertex_map[w]);
            if src != dst {
                return false;
            }
        }
    }
    true
}

/// Iterated color refinement: start from degrees, refine by the multiset
/// of neighbor colors until stable. Returns a color per vertex.
fn refine_colors(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let neighbors: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut color: Vec<usize> = (0..n).map(|v| neighbors[v].len()).collect();
    normalize(&mut color);
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nc: Vec<usize> = neighbors[v].iter().map(|&w| color[w]).collect();
                nc.sort_unstable();
                (color[v], nc)
            })
            .collect();
        let mut palette: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next = 0;
        let mut new_color = vec![0usize; n];
        for (v, sig) in sigs.drain(..).enumerate() {
            let c = *palette.entry(sig).or_insert_with(|| {
                let c = next;
                next += 1;
                c
            });
            new_color[v] = c;
        }
        if new_color == color {
            return color;
        }
        color = new_color;
    }
}

fn normalize(color: &mut [usize]) {
    let mut palette: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next = 0;
    for c in color.iter_mut() {
        let nc = *palette.entry(*c).or_insert_with(|| {
            let v = next;
            next += 1;
            v
        });
        *c = nc;
    }
}

/// The full automorphism group as an explicit, canonically sorted element
/// list, by backtracking over color-refinement-compatible assignments.
pub fn automorphism_group(g: &Graph, budgets: &Budgets) -> Result<PermGroup> {
    let n = g.n();
    if n > budgets.vertex_cap {
        return Err(Error::resource("vertices in automorphism search", budgets.vertex_cap));
    }
    let color = refine_colors(g);
    let neighbors: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();

    // Most-constrained-first: small color classes first, then index.
    let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &color {
        *class_size.entry(c).or_insert(0) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&color[v]], color[v], v));

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut found: Vec<Perm> = Vec::new();
    search(g, &neighbors, &color, &order, 0, &mut image, &mut used, &mut found);
    found.sort();
    PermGroup::from_elements(n, found)
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &Graph,
    neighbors: &[Vec<usize>],
    color: &[usize],
    order: &[usize],
    depth: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Vec<Perm>,
) {
    if depth == order.len() {
        found.push(Perm::new(image.clone()).expect("complete bijection"));
        return;
    }
    let v = order[depth];
    for w in 0..g.n() {
        if used[w] || color[w] != color[v] {
            continue;
        }
        // Partial consistency: v's edges to already-mapped vertices must
        // map to edges, and non-edges to non-edges.
        let ok = order[..depth].iter().all(|&u| {
            let edge_src = neighbors[v].binary_search(&u).is_ok();
            let edge_dst = g.has_edge(w, image[u]);
            edge_src == edge_dst
        });
        if !ok {
            continue;
        }
        image[v] = w;
        used[w] = true;
        search(g, neighbors, color, order, depth + 1, image, used, found);
        image[v] = usize::MAX;
        used[w] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn path(n: usize) -> Graph {
        let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::new(labels, &pairs).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Graph::new(labels, &pairs).unwrap()
    }

    /// Spider tree with legs of 1, 2 and 3 edges: the canonical small
    /// asymmetric tree.
    pub fn asymmetric_tree() -> Graph {
        parse_graph("r a1\nr b1\nb1 b2\nr c1\nc1 c2\nc2 c3\n").unwrap()
    }

    #[test]
    fn parse_and_validate() {
        let g = parse_graph("a b\nb c # comment\n# full comment\nvertex d\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_connected());
        assert!(matches!(parse_graph("a a"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("a b\na b"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("a b c"), Err(Error::Parse { .. })));
    }

    #[test]
    fn aut_of_small_graphs() {
        let b = Budgets::default();
        assert_eq!(automorphism_group(&path(3), &b).unwrap().order(), 2);
        assert_eq!(automorphism_group(&path(2), &b).unwrap().order(), 2);
        assert_eq!(automorphism_group(&complete(3), &b).unwrap().order(), 6);
        assert_eq!(automorphism_group(&complete(4), &b).unwrap().order(), 24);
    }

    #[test]
    fn asymmetric_tree_is_rigid() {
        let g = asymmetric_tree();
        assert_eq!(g.n(), 7);
        assert!(g.is_connected());
        let aut = automorphism_group(&g, &Budgets::default()).unwrap();
        assert_eq!(aut.order(), 1);
    }

    #[test]
    fn asymmetric_tree_brute_force_oracle() {
        // Independent check over all 7! permutations.
        let g = asymmetric_tree();
        let n = g.n();
        let mut count = 0;
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let is_auto = (0..n).all(|v| {
                (0..n).all(|w| {
                    v >= w || g.has_edge(v, w) == g.has_edge(perm[v], perm[w])
                })
            });
            if is_auto {
                count += 1;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(count, 1);
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let n = p.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn automorphisms_satisfy_edge_condition() {
        let g = complete(3);
        let aut = automorphism_group(&g, &Budgets::default()).unwrap();
        for p in aut.elements() {
            for v in 0..g.n() {
                for w in 0..g.n() {
                    if v != w {
                        assert_eq!(g.has_edge(v, w), g.has_edge(p.apply(v), p.apply(w)));
                    }
                }
            }
        }
    }

    #[test]
    fn full_monomorphism_checks() {
        let p2 = path(2);
        let p3 = path(3);
        let k3 = complete(3);
        // P2 onto an end edge of P3: full (P2 has no non-adjacent pair).
        let m = GraphMorphism::by_labels(p2.clone(), p3.clone(), &[("v1", "v1"), ("v2", "v2")])
            .unwrap();
        assert!(is_full_monomorphism(&m));
        // P3 into K3: the end pair is non-adjacent in P3 but adjacent in K3.
        let m = GraphMorphism::by_labels(
            p3.clone(),
            k3.clone(),
            &[("v1", "v1"), ("v2", "v2"), ("v3", "v3")],
        )
        .unwrap();
        assert!(!is_full_monomorphism(&m));
        // Identity is always full.
        let id = GraphMorphism::new(k3.clone(), k3.clone(), vec![0, 1, 2]).unwrap();
        assert!(is_full_monomorphism(&id));
        // Non-injective maps are rejected.
        let collapse = GraphMorphism::new(p3.clone(), p3.clone(), vec![0, 1, 0]).unwrap();
        assert!(!is_full_monomorphism(&collapse));
    }

    #[test]
    fn vertex_budget_respected() {
        let tight = Budgets { vertex_cap: 2, ..Budgets::default() };
        assert!(matches!(
            automorphism_group(&path(3), &tight),
            Err(Error::Resource { .. })
        ));
    }
}

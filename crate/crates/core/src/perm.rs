use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::error::Error;
use crate::Result;

/// Permutation of {0, .., n-1} as a point-image table.
/// Composition convention: `(p.compose(q))(x) = p(q(x))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::validation("not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    /// Cycle notation on 1-based points, fixed points omitted; identity
    /// prints as `()`.
    pub fn to_cycles(&self) -> String {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.0[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x];
            }
            out.push('(');
            out.push_str(
                &cyc.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(" "),
            );
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Parse cycle notation like `(1 2 3)(4 5)`; points are 1-based.
    /// `degree` fixes the total point count.
    pub fn from_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let s = s.trim();
        if s == "()" || s.is_empty() {
            return Ok(Perm(images));
        }
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::validation(format!("expected '(' in cycles: {s}")))?;
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| Error::validation(format!("unbalanced cycle in {s}")))?
                + open;
            let body = &rest[open + 1..close];
            let pts: Vec<usize> = body
                .split([' ', ','])
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::validation(format!("bad point {t}")))
                })
                .collect::<Result<_>>()?;
            if pts.iter().any(|&p| p == 0 || p > degree) {
                return Err(Error::validation(format!("point out of range 1..{degree}")));
            }
            let mut distinct = BTreeSet::new();
            for &p in &pts {
                if !distinct.insert(p) {
                    return Err(Error::validation("repeated point in a cycle"));
                }
            }
            for w in 0..pts.len() {
                let from = pts[w] - 1;
                let to = pts[(w + 1) % pts.len()] - 1;
                images[from] = to;
            }
            rest = &rest[close + 1..];
        }
        Perm::new(images)
    }
}

/// Finite permutation group, materialized as a sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Perm>,
}

impl PermGroup {
    /// From a complete element list; closure, identity and inverses are
    /// verified.
    pub fn from_elements(degree: usize, mut elements: Vec<Perm>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.iter().any(|p| p.degree() != degree) {
            return Err(Error::validation("mixed degrees in element list"));
        }
        let set: BTreeSet<&Perm> = elements.iter().collect();
        if !set.contains(&Perm::identity(degree)) {
            return Err(Error::validation("element list lacks the identity"));
        }
        for p in &elements {
            if !set.contains(&p.inverse()) {
                return Err(Error::validation("element list not closed under inverse"));
            }
            for q in &elements {
                if !set.contains(&p.compose(q)) {
                    return Err(Error::validation("element list not closed under composition"));
                }
            }
        }
        Ok(PermGroup { degree, elements })
    }

    /// Generate from a generator list by closure, within the order budget.
    pub fn generate(degree: usize, gens: &[Perm], budgets: &Budgets) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::validation("generator degree mismatch"));
            }
        }
        let mut elements: BTreeSet<Perm> = BTreeSet::new();
        elements.insert(Perm::identity(degree));
        let mut frontier: Vec<Perm> = vec![Perm::identity(degree)];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q = g.compose(&p);
                if !elements.contains(&q) {
                    if elements.len() >= budgets.group_order_cap {
                        return Err(Error::resource("group order", budgets.group_order_cap));
                    }
                    elements.insert(q.clone());
                    frontier.push(q);
                }
            }
        }
        Ok(PermGroup { degree, elements: elements.into_iter().collect() })
    }

    /// The group whose elements are the rows of an n x n multiplication
    /// table (0-based indices), via the left-regular representation.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::validation("multiplication table is not square"));
        }
        // Identify the identity row.
        let id_row = (0..n)
            .find(|&i| (0..n).all(|j| table[i][j] == j && table[j][i] == j))
            .ok_or_else(|| Error::validation("table has no identity element"))?;
        let _ = id_row;
        let perms: Result<Vec<Perm>> =
            (0..n).map(|i| Perm::new(table[i].clone())).collect();
        let perms = perms?;
        // Left-regular rows must be closed; verify via from_elements.
        PermGroup::from_elements(n, perms)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Multiset of element orders; a cheap isomorphism invariant.
    pub fn order_profile(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for p in &self.elements {
            *out.entry(p.order()).or_insert(0) += 1;
        }
        out
    }

    /// A small generating sequence found greedily.
    pub fn small_generating_set(&self) -> Vec<Perm> {
        let mut gens: Vec<Perm> = Vec::new();
        let mut span: BTreeSet<Perm> = BTreeSet::new();
        span.insert(Perm::identity(self.degree));
        for p in &self.elements {
            if span.contains(p) {
                continue;
            }
            gens.push(p.clone());
            // Regenerate the span.
            span.clear();
            span.insert(Perm::identity(self.degree));
            let mut frontier: Vec<Perm> = vec![Perm::identity(self.degree)];
            while let Some(q) = frontier.pop() {
                for g in &gens {
                    let r = g.compose(&q);
                    if span.insert(r.clone()) {
                        frontier.push(r);
                    }
                }
            }
            if span.len() == self.order() {
                break;
            }
        }
        gens
    }
}

/// Witness isomorphism between abstract groups.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupIso {
    /// Image in `b.elements()` order of each element of `a.elements()`.
    pub map: Vec<usize>,
}

/// Brute-force generator-image search with pruning by element orders.
/// Returns a witness bijection preserving products when the groups are
/// isomorphic.
pub fn groups_isomorphic(a: &PermGroup, b: &PermGroup, budgets: &Budgets) -> Result<Option<GroupIso>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    if a.order() > budgets.group_order_cap {
        return Err(Error::resource("group order", budgets.group_order_cap));
    }
    if a.order_profile() != b.order_profile() {
        return Ok(None);
    }
    let gens = a.small_generating_set();
    if gens.is_empty() {
        // Trivial group.
        return Ok(Some(GroupIso { map: vec![0; a.order()] }));
    }
    let mut assignment: Vec<usize> = Vec::new();
    if extend_iso(a, b, &gens, &mut assignment) {
        // Rebuild the full element bijection from generator images by
        // expanding words.
        let map = expand_iso(a, b, &gens, &assignment)?;
        return Ok(map.map(|m| GroupIso { map: m }));
    }
    Ok(None)
}

fn extend_iso(a: &PermGroup, b: &PermGroup, gens: &[Perm], assignment: &mut Vec<usize>) -> bool {
    if assignment.len() == gens.len() {
        return check_iso(a, b, gens, assignment);
    }
    let g = &gens[assignment.len()];
    let g_ord = g.order();
    for (bi, cand) in b.elements().iter().enumerate() {
        if cand.order() != g_ord {
            continue;
        }
        assignment.push(bi);
        if check_partial(a, b, gens, assignment) && extend_iso(a, b, gens, assignment) {
            return true;
        }
        assignment.pop();
    }
    false
}

/// Partial consistency: the subgroup generated so far must have matching
/// size under the candidate images.
fn check_partial(a: &PermGroup, b: &PermGroup, gens: &[Perm], assignment: &[usize]) -> bool {
    let sub_a = span(&gens[..assignment.len()], a.degree());
    let imgs: Vec<Perm> =
        assignment.iter().map(|&i| b.elements()[i].clone()).collect();
    let sub_b = span(&imgs, b.degree());
    sub_a.len() == sub_b.len()
}

fn span(gens: &[Perm], degree: usize) -> BTreeSet<Perm> {
    let mut out = BTreeSet::new();
    out.insert(Perm::identity(degree));
    let mut frontier = vec![Perm::identity(degree)];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = g.compose(&p);
            if out.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    out
}

fn check_iso(a: &PermGroup, b: &PermGroup, gens: &[Perm], assignment: &[usize]) -> bool {
    matches!(expand_iso(a, b, gens, assignment), Ok(Some(_)))
}

/// Try to extend generator images to a full product-preserving bijection;
/// None if the candidate fails.
fn expand_iso(
    a: &PermGroup,
    b: &PermGroup,
    gens: &[Perm],
    assignment: &[usize],
) -> Result<Option<Vec<usize>>> {
    let mut map: BTreeMap<Perm, Perm> = BTreeMap::new();
    map.insert(Perm::identity(a.degree()), Perm::identity(b.degree()));
    let mut frontier: Vec<Perm> = vec![Perm::identity(a.degree())];
    while let Some(p) = frontier.pop() {
        let fp = map[&p].clone();
        for (g, &bi) in gens.iter().zip(assignment) {
            let q = g.compose(&p);
            let fq = b.elements()[bi].compose(&fp);
            match map.get(&q) {
                Some(existing) => {
                    if *existing != fq {
                        return Ok(None);
                    }
                }
                None => {
                    map.insert(q.clone(), fq);
                    frontier.push(q);
                }
            }
        }
    }
    if map.len() != a.order() {
        return Ok(None);
    }
    // Injectivity of the induced map.
    let images: BTreeSet<&Perm> = map.values().collect();
    if images.len() != a.order() {
        return Ok(None);
    }
    // Full product preservation check.
    for (p, fp) in &map {
        for (q, fq) in &map {
            let pq = p.compose(q);
            if map[&pq] != fp.compose(fq) {
                return Ok(None);
            }
        }
    }
    let mut out = Vec::with_capacity(a.order());
    for p in a.elements() {
        let fp = &map[p];
        let idx = b.elements().binary_search(fp).map_err(|_| {
            Error::internal("isomorphism image escaped the target element list")
        })?;
        out.push(idx);
    }
    Ok(Some(out))
}

/// Parse a group file: either a `perms` header followed by one
/// permutation per line in cycle notation, or a `table` header followed
/// by n rows of n 0-based indices. For `perms`, the degree is the largest
/// point mentioned.
pub fn parse_group(text: &str, budgets: &Budgets) -> Result<PermGroup> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty group file".into() })?;
    match header {
        "perms" => {
            let body: Vec<(usize, &str)> = lines.collect();
            let mut degree = 1usize;
            for (lineno, l) in &body {
                for tok in l.split(['(', ')', ' ', ',']) {
                    if tok.trim().is_empty() {
                        continue;
                    }
                    let p: usize = tok.trim().parse().map_err(|_| Error::Parse {
                        line: *lineno,
                        msg: format!("bad point {tok}"),
                    })?;
                    degree = degree.max(p);
                }
            }
            let mut gens = Vec::new();
            for (lineno, l) in &body {
                let p = Perm::from_cycles(l, degree).map_err(|e| Error::Parse {
                    line: *lineno,
                    msg: e.to_string(),
                })?;
                gens.push(p);
            }
            PermGroup::generate(degree, &gens, budgets)
        }
        "table" => {
            let rows: Vec<Vec<usize>> = lines
                .map(|(lineno, l)| {
                    l.split_whitespace()
                        .map(|t| {
                            t.parse::<usize>().map_err(|_| Error::Parse {
                                line: lineno,
                                msg: format!("bad index {t}"),
                            })
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            if rows.len() > budgets.group_order_cap {
                return Err(Error::resource("group order", budgets.group_order_cap));
            }
            PermGroup::from_table(&rows)
        }
        other => Err(Error::Parse {
            line: hline,
            msg: format!("expected `perms` or `table` header, got `{other}`"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> PermGroup {
        let gen = Perm::new((0..n).map(|i| (i + 1) % n).collect()).unwrap();
        PermGroup::generate(n, &[gen], &Budgets::default()).unwrap()
    }

    fn klein_four() -> PermGroup {
        let a = Perm::from_cycles("(1 2)(3 4)", 4).unwrap();
        let b = Perm::from_cycles("(1 3)(2 4)", 4).unwrap();
        PermGroup::generate(4, &[a, b], &Budgets::default()).unwrap()
    }

    #[test]
    fn cycles_round_trip() {
        let p = Perm::from_cycles("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(p.to_cycles(), "(1 2 3)(4 5)");
        assert_eq!(p.order(), 6);
        let id = Perm::from_cycles("()", 3).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn generate_s3() {
        let t = Perm::from_cycles("(1 2)", 3).unwrap();
        let c = Perm::from_cycles("(1 2 3)", 3).unwrap();
        let g = PermGroup::generate(3, &[t, c], &Budgets::default()).unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn z4_not_isomorphic_to_klein() {
        let z4 = cyclic(4);
        let v4 = klein_four();
        assert!(groups_isomorphic(&z4, &v4, &Budgets::default()).unwrap().is_none());
    }

    #[test]
    fn isomorphism_with_witness() {
        // Z6 vs Z2 x Z3 built on 5 points.
        let z6 = cyclic(6);
        let a = Perm::from_cycles("(1 2)", 5).unwrap();
        let b = Perm::from_cycles("(3 4 5)", 5).unwrap();
        let z2z3 = PermGroup::generate(5, &[a, b], &Budgets::default()).unwrap();
        let iso = groups_isomorphic(&z6, &z2z3, &Budgets::default()).unwrap().unwrap();
        // Bijectivity.
        let im: BTreeSet<usize> = iso.map.iter().copied().collect();
        assert_eq!(im.len(), 6);
        // Product preservation.
        for (i, p) in z6.elements().iter().enumerate() {
            for (j, q) in z6.elements().iter().enumerate() {
                let pq = p.compose(q);
                let k = z6.elements().binary_search(&pq).unwrap();
                let fp = &z2z3.elements()[iso.map[i]];
                let fq = &z2z3.elements()[iso.map[j]];
                assert_eq!(z2z3.elements()[iso.map[k]], fp.compose(fq));
            }
        }
    }

    #[test]
    fn parse_group_files() {
        let g = parse_group("perms\n(1 2)\n", &Budgets::default()).unwrap();
        assert_eq!(g.order(), 2);
        let t = parse_group("table\n0 1\n1 0\n", &Budgets::default()).unwrap();
        assert_eq!(t.order(), 2);
        assert!(parse_group("huh\n", &Budgets::default()).is_err());
    }

    #[test]
    fn table_group_matches_perm_group() {
        let from_table =
            parse_group("table\n0 1 2\n1 2 0\n2 0 1\n", &Budgets::default()).unwrap();
        let z3 = cyclic(3);
        assert!(groups_isomorphic(&from_table, &z3, &Budgets::default())
            .unwrap()
            .is_some());
    }
}

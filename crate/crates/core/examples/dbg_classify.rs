use std::time::Instant;
use sullivan_core::ansatz::generic_ansatz;
use sullivan_core::budget::Budgets;
use sullivan_core::constraints::constraint_system;
use sullivan_core::graph::parse_graph;
use sullivan_core::mg::build_mg;
use sullivan_core::ring::qi;
use sullivan_core::solver::solve_cases;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "a b".to_string());
    let g = parse_graph(&text.replace(';', "\n")).unwrap();
    let mg = build_mg(&g, qi(0), qi(1)).unwrap();
    let b = Budgets { split_depth: 4096, ..Budgets::default() };
    let t0 = Instant::now();
    let gm = generic_ansatz(&mg, &b).unwrap();
    println!("ansatz: {} unknowns in {:?}", gm.unknowns.len(), t0.elapsed());
    let t0 = Instant::now();
    let cs = constraint_system(&mg, &gm).unwrap();
    println!("constraints: {} equations in {:?}", cs.len(), t0.elapsed());
    let t0 = Instant::now();
    let tree = solve_cases(&cs, &b);
    println!(
        "solve: complete={} nodes={} splits={} depth={} leaves={} in {:?}",
        tree.complete,
        tree.stats.nodes,
        tree.stats.splits,
        tree.stats.max_depth,
        tree.leaves().len(),
        t0.elapsed()
    );
    for leaf in tree.leaves() {
        let mut desc: Vec<String> = leaf
            .assignments
            .iter()
            .filter(|(_, p)| !p.is_empty())
            .map(|(v, p)| {
                format!(
                    "{}={}",
                    gm.unknowns.name(*v),
                    p.show(&|w| gm.unknowns.name(w).to_string())
                )
            })
            .collect();
        desc.sort();
        println!("  leaf: {}", desc.join(", "));
    }
}

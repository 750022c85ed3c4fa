use sullivan_core::ansatz::generic_ansatz;
use sullivan_core::budget::Budgets;
use sullivan_core::constraints::constraint_system;
use sullivan_core::graph::parse_graph;
use sullivan_core::mg::build_mg;
use sullivan_core::ring::qi;

fn main() {
    let g = parse_graph("a b\n").unwrap();
    let mg = build_mg(&g, qi(0), qi(1)).unwrap();
    let gm = generic_ansatz(&mg, &Budgets::default()).unwrap();
    let cs = constraint_system(&mg, &gm).unwrap();
    let sig = mg.algebra().sig();
    println!("total equations: {}", cs.len());
    for eq in cs.equations.iter().filter(|e| e.source_gen == mg.z) {
        println!("[z @ {}] {}", eq.target_monomial.show(sig), eq.poly.show(&|v| gm.unknowns.name(v).to_string()));
    }
}

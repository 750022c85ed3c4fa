use sullivan_core::budget::Budgets;
use sullivan_core::constraints::{ConstraintSystem, Equation};
use sullivan_core::monomial::Monomial;
use sullivan_core::mpoly::MPoly;
use sullivan_core::solver::solve_cases;

fn v(i: u32) -> MPoly { MPoly::var(i) }

fn main() {
    let eqs = vec![
        v(0).pow(6).sub(&v(1).pow(5)),
        v(0).pow(9).sub(&v(1).pow(7)),
    ];
    let cs = ConstraintSystem {
        equations: eqs.into_iter().map(|poly| Equation { poly, source_gen: 0, target_monomial: Monomial::one() }).collect(),
    };
    let tree = solve_cases(&cs, &Budgets::default());
    println!("complete: {}", tree.complete);
    println!("{}", serde_json::to_string_pretty(&tree.to_json(&|v| format!("u{v}"))).unwrap());
}

use serde::{Deserialize, Serialize};

/// Resource caps turning oversized computations into explicit errors.
///
/// Every long-running operation takes a `Budgets` value; exceeding a cap
/// yields [`crate::Error::Resource`], never a wrong or truncated answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Maximum number of monomials enumerated per degree.
    pub monomial_cap: usize,
    /// Maximum number of S-pairs processed in a Groebner basis run.
    pub groebner_pairs: usize,
    /// Maximum nesting depth of case splits in the constraint solver.
    pub split_depth: usize,
    /// Maximum vertex count for automorphism searches on user input.
    pub vertex_cap: usize,
    /// Maximum group order that may be materialized as an element list.
    pub group_order_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            monomial_cap: 200_000,
            groebner_pairs: 50_000,
            split_depth: 40,
            vertex_cap: 64,
            group_order_cap: 5040,
        }
    }
}

impl Budgets {
    /// Budgets sized for the larger classification runs (graphs whose
    /// vertex-pair systems need deeper case splitting than the default).
    pub fn generous() -> Self {
        Budgets {
            split_depth: 4096,
            vertex_cap: 256,
            ..Budgets::default()
        }
    }
}

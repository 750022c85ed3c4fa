//! Exact symbolic computation for minimal Sullivan algebras attached to
//! finite graphs.
//!
//! The crate builds, for a finite connected simple graph, a free
//! graded-commutative cochain algebra over the rationals whose
//! self-homotopy-equivalence group realizes the automorphism group of the
//! graph. Everything is exact: coefficients are arbitrary-precision
//! rationals, linear algebra is fraction-free, and the classification of
//! self-maps is produced as an auditable case tree whose every branching
//! step can be re-verified.
//!
//! The main entry points are:
//!
//! - [`graph::Graph`] and [`graph::automorphism_group`] for graphs,
//! - [`frucht::frucht_graph`] to realize a finite permutation group as a
//!   graph automorphism group,
//! - [`mg::build_mg`] to attach the Sullivan algebra to a graph,
//! - [`elliptic::ellipticity_certificate`] for the finiteness certificate,
//! - [`classify::classify_endos`] for the complete classification of
//!   self-maps up to homotopy,
//! - [`tilde::tilde_extend`] and [`tilde::degree_certificate`] for the
//!   one-generator extension and its mapping-degree bounds,
//! - [`pipeline::realize`] for the whole group -> graph -> algebra ->
//!   classification chain.

pub mod algebra;
pub mod ansatz;
pub mod budget;
pub mod classify;
pub mod constraints;
pub mod element;
pub mod elliptic;
pub mod error;
pub mod frucht;
pub mod graph;
pub mod groebner;
pub mod homology;
pub mod linalg;
pub mod mg;
pub mod monomial;
pub mod morphism;
pub mod mpoly;
pub mod perm;
pub mod pipeline;
pub mod ring;
pub mod serial;
pub mod smith;
pub mod solver;
pub mod tilde;

pub use budget::Budgets;
pub use element::Element;
pub use error::Error;
pub use ring::Q;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

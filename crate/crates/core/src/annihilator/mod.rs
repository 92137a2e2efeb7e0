//! Annihilating polynomials: discovery, validation, roots and their clustering.

mod discovery;
mod polynomial;
mod roots;
mod spectrum;

pub use discovery::{characteristic_polynomial, minimal_polynomial, validate_relation};
pub use polynomial::AnnihilatorPolynomial;
pub use roots::{find_roots, RootSet, MAX_SWEEPS};
pub(crate) use spectrum::transitive_groups;
pub use spectrum::{cluster_roots, Cluster, Spectrum};

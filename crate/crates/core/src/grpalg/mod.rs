//! Group algebras of elementary abelian p-groups, their modules, endomorphism
//! rings, radicals, components and the Hasse-principle criterion.

mod components;
mod endo;
mod module;
mod radical;
mod verdict;

pub use components::{decompose_algebra, decompose_components, Behavior, Component, ComponentReport, Splitness};
pub use endo::{commutant_basis, endomorphism_algebra, EndAlgebra};
pub use module::{parse_matrix, GModule};
pub use radical::{certify_radical, is_two_sided_ideal, jacobson_radical, nilpotency_index, radical_basis, Radical, RadicalCertificate};
pub use verdict::{hp_verdict, hp_verdict_with, is_projective, quotient_with_involution, Verdict, VerdictReport};

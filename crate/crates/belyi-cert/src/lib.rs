//! Certification toolkit for two explicit degree-100 Belyi maps whose
//! monodromy group is the automorphism group of the Higman–Sims group.
//!
//! The crate re-derives, from the bundled permutation triples and factored
//! polynomials, every claim that is checkable at desk scale: exact group
//! certificates (order, transitivity, subdegrees, primitivity, parity),
//! exact polynomial identities (difference factorization, critical divisor,
//! Riemann–Hurwitz bookkeeping), discriminant square-class evidence,
//! finite-field specialization evidence, a numerical monodromy recovery of
//! the branch-cycle triple, and the dessin d'enfant with its combinatorial
//! data. Results are emitted as machine-readable verification reports.

pub mod belyi;
pub mod datainput;
pub mod dessin;
pub mod fppoly;
pub(crate) mod modp;
pub mod monodromy;
pub mod permgroup;
pub mod pipeline;
pub mod primes;
pub mod qpoly;
pub mod report;

pub use permgroup::{CycleType, Permutation, StabilizerChain};
pub use qpoly::{FactoredPoly, UniPoly};

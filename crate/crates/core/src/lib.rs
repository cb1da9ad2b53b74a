//! Numerical semigroups through their Apéry sets.
//!
//! Given generators `a1, ..., an`, this crate computes the Apéry set with
//! respect to the smallest generator, the Frobenius number, membership
//! certificates, the Hilbert–Poincaré series and the free-module
//! decomposition of `K[S]` over `K[t^{a1}]`. The same scan yields the
//! standard monomials of the toric ideal `I(S)` for weighted degrevlex, from
//! which the minimal generators of the initial ideal and the reduced Gröbner
//! basis are read off directly. No Buchberger completion is involved.
//!
//! [`euclid3`] is a logarithmic-time path for three generators, and
//! [`oracle`] holds independent checkers (shortest paths over residues,
//! reachability DP, S-pair reduction) that share no code with the engine.

pub mod apery;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod euclid3;
pub mod grobner;
pub mod monomial;
pub mod oracle;
pub mod semigroup;

pub use apery::{
    compute_apery, compute_apery_with, frobenius, hilbert_series, is_member, module_decomposition,
    AperyTable, HilbertSeries, MembershipCertificate, ScanOptions, StopReason,
};
pub use error::{Error, Result};
pub use grobner::{groebner_basis, initial_ideal, normal_form, standard_monomials, Binomial};
pub use monomial::{weighted_degree, ExponentVector, Monomial, MonomialOrder};
pub use semigroup::GeneratorSet;

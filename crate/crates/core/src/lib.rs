//! Exact arithmetic for classical and quantum cluster algebras.
//!
//! - [`qring`]: the coefficient ring `Z[q^{±1/2}]`.
//! - [`torus`]: the based quantum torus and commutative Laurent polynomials.
//! - [`seeds`]: exchange matrices, compatibility, matrix and `Λ` mutation.
//! - [`mutation`]: exchange relations and quantum-seed verification.
//! - [`explorer`]: exchange graphs, canonical keys, Laurent reports.
//! - [`modular`]: finite-field images of seeds for deep explorations.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod explorer;
pub mod io;
pub mod modular;
pub mod mutation;
pub mod par;
pub mod qring;
pub mod seeds;
pub mod torus;

pub use error::{Error, Result};
pub use explorer::{explore, explore_with, laurent_report, CanonicalKey, Caps, ExchangeGraph, ExchangeSeed, Status};
pub use modular::ModularSeed;
pub use mutation::{classical_mutate, quantum_mutate, verify_quantum_seed, VerificationReport};
pub use par::Parallelism;
pub use qring::QLaurent;
pub use seeds::{
    check_compatibility, find_skew_symmetrizer, lambda_mutate, principal_lambda, ClassicalSeed,
    ExchangeMatrix, QuantumSeed, SkewSymmetrizer,
};
pub use torus::{CommLaurent, Exponent, SkewMatrix, TorusElement};

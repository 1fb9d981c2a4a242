//! Exact-arithmetic certification of exotic-diffeomorphism and boundary
//! Dehn twist criteria for spin 4-manifolds.
//!
//! The crate performs every finite computation behind the criteria: basic
//! class enumeration for elliptic surfaces, Chern-number arithmetic for
//! complete intersections, residue-coverage searches, constructive
//! hyperbolic splitting of even unimodular forms with the commuting
//! involution pair, Stiefel–Whitney arithmetic of flat bundles over T²,
//! quaternionic lifting of SO(4) loops, and the families-index parity
//! sweeps. Verdicts are emitted as certificates that separate computed
//! facts from imported theorems.

pub mod certificate;
pub mod charclass;
pub mod ci;
pub mod elliptic;
mod error;
pub mod lattice;
pub mod matrix;
pub mod obstruction;
pub mod selftest;
pub mod spinlift;

pub use error::{Error, Result};

/// Default seed for every randomized search; fixed so identical invocations
/// produce identical bytes.
pub const DEFAULT_SEED: u64 = 42;

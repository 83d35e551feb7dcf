//! Exact arithmetic for eta/Klein-form products of prime level.
//!
//! The crate builds the infinite products
//! `(q^p;q^p)^{a0} * prod_i (q^i, q^{p-i}; q^p)^{a_i}` as truncated formal
//! q-series with exact rational coefficients, decides which exponent vectors
//! give holomorphic modular forms for `Gamma_1(p)`, enumerates the bounded
//! polytope of all such vectors, and mines/certifies Ramanujan-type
//! congruences `P(p^j n - l) == 0 mod p^(alpha j)` through U_p operator
//! linear algebra.
//!
//! Module map:
//! - [`series`]: truncated fractional-exponent q-series (the arithmetic core)
//! - [`klein`]: Klein forms `K_{p,i}`, the products `f_a`, modularity tests
//! - [`orbit`]: the cyclic permutation `sigma_p`, orbits, slash-action signs
//! - [`lattice`]: the exponent polytope, Smith normal form, enumeration
//! - [`linalg`]: exact bases for `M_k(Gamma_1(p))`, U_p matrices, Krylov
//!   minimal polynomials, Newton polygons
//! - [`dissect`]: weight-one bases for `Gamma(p)` split by residue class,
//!   dissection tables, Klein relations, the level-10 construction
//! - [`miner`]: screening, orbit filtering, certification, chimeral orders,
//!   dissection-congruence search
//! - [`tables`]: frozen reference data used by the table-diff command and
//!   the acceptance suite

pub mod dissect;
pub mod error;
pub mod klein;
pub mod lattice;
pub mod linalg;
pub mod miner;
pub mod modseries;
pub mod orbit;
pub mod series;
pub mod tables;

pub use dissect::{DissectionTable, GammaPBasis};
pub use error::QkError;
pub use klein::{CuspOrderProfile, ExponentVector};
pub use lattice::{LinearCongruenceSystem, SnfDecomposition};
pub use linalg::{IntPolynomial, OrderedBasis, UpMatrix};
pub use miner::{CertificateKind, CongruenceCertificate, MineReport};
pub use orbit::{GammaMatrix, PrimitiveRootData};
pub use series::FracSeries;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, QkError>;

//! Proof-compression toolkit for purely implicational minimal logic.
//!
//! - [`formula`]: syntax, parsing, printing and measures of formulas, sequents
//!   and digraphs.
//! - [`nd`]: tree- and dag-like natural deductions, with the separation rule.
//! - [`compress`]: horizontal compression of tree proofs into dag proofs,
//!   separation, fundamental threads and cleansing.
//! - [`hsc`]: a contraction-free sequent calculus with a terminating prover
//!   and its translation into natural deduction.
//! - [`encode`]: Hamiltonian-path formulas, the implicational translation of
//!   full propositional logic, and brute-force oracles.
//! - [`corpus`]: deterministic formula and graph generators.

pub mod formula;
pub mod nd;
pub mod hsc;
pub mod encode;
pub mod compress;
pub mod corpus;

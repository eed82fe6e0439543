//! Problem encodings into propositional logic and the brute-force oracles
//! used to validate them.

mod hamiltonian;
mod kripke;
mod sat;
mod statman;

use thiserror::Error;

pub use hamiltonian::{encode_hamiltonian, hamiltonian_families, hamiltonian_oracle, Families, MAX_ORACLE_VERTICES};
pub use kripke::{kripke_valid, KripkeModel, KripkeVerdict, MAX_WORLDS};
pub use sat::{classical_sat, MAX_SAT_VARIABLES};
pub use statman::statman_translate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("{n} vertices exceeds the brute-force bound of {bound}")]
    TooManyVertices { n: usize, bound: usize },
    #[error("{count} variables exceeds the truth-table bound of {bound}")]
    TooManyVariables { count: usize, bound: usize },
    #[error("{requested} worlds exceeds the frame enumeration bound of {bound}")]
    TooManyWorlds { requested: usize, bound: usize },
}

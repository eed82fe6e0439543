//! Horizontal compression of tree-like proofs into dag-like ones.
//!
//! The pipeline runs `∂ → ∂′ → ∂♭ → ∂*`: merge equal formulas per level,
//! split merged nodes with several inferences under separation nodes, map
//! the tree's threads into the result, and resolve every separation node to
//! one premise.

mod cleanse;
mod levels;
mod threads;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nd::{
    check_local_correctness, measures, proves, proves_threads, Deduction, NodeId, ProofDocument,
    Rule,
};

pub use cleanse::{cleanse, CleanseRoute, Cleansed};
pub use levels::{compress_levels, insert_separation, LevelCompression, Separation, Shape};
pub use threads::{
    extract_fst, verify_local_coherency, CoherencyReport, CoherencyViolation, ThreadSet,
    DEFAULT_THREAD_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressError {
    #[error("input is not tree-like")]
    NotTree,
    #[error("input contains a separation inference at node {node}")]
    SepPresent { node: NodeId },
    #[error("input is not locally correct")]
    LocallyIncorrect,
    #[error("input has an open thread")]
    NotProof,
    #[error("more than {cap} threads")]
    ThreadCap { cap: usize },
    #[error("thread set violates local coherency ({violations} violations)")]
    Incoherent { violations: usize },
    #[error("no choice of separation premises closes the proof")]
    NoChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// `h(∂)`.
    pub h: usize,
    /// `φ(∂)`.
    pub phi: usize,
    pub w_tree: usize,
    pub w_prime: usize,
    pub w_flat: usize,
    pub w_star: usize,
}

impl Bounds {
    /// `|∂′| ≤ h(∂)·φ(∂)`.
    pub fn prime_within(&self) -> bool {
        self.w_prime <= self.h * self.phi
    }

    /// `|∂♭| ≤ 2|∂′|`.
    pub fn flat_within(&self) -> bool {
        self.w_flat <= 2 * self.w_prime
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub prime_bound: bool,
    pub flat_bound: bool,
    pub flat_locally_correct: bool,
    pub coherent: bool,
    pub star_sep_free: bool,
    pub star_locally_correct: bool,
    pub star_proves: bool,
    pub star_subset: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.prime_bound
            && self.flat_bound
            && self.flat_locally_correct
            && self.coherent
            && self.star_sep_free
            && self.star_locally_correct
            && self.star_proves
            && self.star_subset
    }
}

#[derive(Debug, Clone)]
pub struct CompressionTrace {
    pub tree: Deduction,
    pub prime: Deduction,
    pub flat: Deduction,
    pub star: Deduction,
    /// Tree node → `∂′` node.
    pub tree_to_prime: Vec<NodeId>,
    /// `∂*` node → `∂♭` node.
    pub star_to_flat: Vec<NodeId>,
    pub sep_nodes: Vec<NodeId>,
    pub threads: usize,
    pub choices: BTreeMap<NodeId, usize>,
    pub route: CleanseRoute,
    pub bounds: Bounds,
    pub verdicts: Verdicts,
}

impl CompressionTrace {
    pub fn certified(&self) -> bool {
        self.verdicts.all()
    }

    pub fn to_document(&self) -> TraceDocument {
        TraceDocument {
            stages: Stages {
                tree: ProofDocument::from_deduction(&self.tree),
                prime: ProofDocument::from_deduction(&self.prime),
                flat: ProofDocument::from_deduction(&self.flat).with_choices(&self.choices),
                star: ProofDocument::from_deduction(&self.star),
            },
            bounds: self.bounds,
            verdicts: self.verdicts,
            tree_to_prime: self.tree_to_prime.clone(),
            star_to_flat: self.star_to_flat.clone(),
            sep_nodes: self.sep_nodes.clone(),
            threads: self.threads,
            cleanse: self.route,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stages {
    pub tree: ProofDocument,
    pub prime: ProofDocument,
    pub flat: ProofDocument,
    pub star: ProofDocument,
}

/// Serialized form of a [`CompressionTrace`]; the `flat` stage carries the
/// separation choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub stages: Stages,
    pub bounds: Bounds,
    pub verdicts: Verdicts,
    pub tree_to_prime: Vec<NodeId>,
    pub star_to_flat: Vec<NodeId>,
    pub sep_nodes: Vec<NodeId>,
    pub threads: usize,
    pub cleanse: CleanseRoute,
}

/// `∂*` is `∂♭` restricted to `kept`, with chosen separation nodes turned
/// into repetitions.
fn is_restriction(star: &Deduction, flat: &Deduction, kept: &[NodeId], choices: &BTreeMap<NodeId, usize>) -> bool {
    (0..star.len()).all(|id| {
        let s = star.node(id);
        let f = flat.node(kept[id]);
        let premises: Vec<NodeId> = s.premises.iter().map(|&p| kept[p]).collect();
        s.formula == f.formula
            && star.level(id) == flat.level(kept[id])
            && match f.rule {
                Rule::Sep => {
                    s.rule == Rule::Rep
                        && choices
                            .get(&kept[id])
                            .is_some_and(|&i| premises == [f.premises[i]])
                }
                _ => s.rule == f.rule && premises == f.premises,
            }
    })
}

/// Run the whole pipeline on a closed, locally correct tree proof.
pub fn compress_proof(t: &Deduction, thread_cap: usize) -> Result<CompressionTrace, CompressError> {
    if !t.is_tree_like() {
        return Err(CompressError::NotTree);
    }
    if !check_local_correctness(t).is_ok() {
        return Err(CompressError::LocallyIncorrect);
    }
    if !proves_threads(t) {
        return Err(CompressError::NotProof);
    }
    let lc = compress_levels(t)?;
    let sep = insert_separation(&lc);
    let fst = extract_fst(t, &lc, &sep, thread_cap)?;
    let coherent = verify_local_coherency(&sep.flat, &fst).is_ok();
    let Cleansed { star, kept, choices, route } = cleanse(&sep.flat, &fst)?;

    let mt = measures(t);
    let bounds = Bounds {
        h: mt.height,
        phi: mt.phi,
        w_tree: mt.weight,
        w_prime: measures(&lc.prime).weight,
        w_flat: measures(&sep.flat).weight,
        w_star: measures(&star).weight,
    };
    let verdicts = Verdicts {
        prime_bound: bounds.prime_within(),
        flat_bound: bounds.flat_within(),
        flat_locally_correct: check_local_correctness(&sep.flat).is_ok(),
        coherent,
        star_sep_free: !star.has_sep(),
        star_locally_correct: check_local_correctness(&star).is_ok(),
        star_proves: proves(&star).unwrap_or(false),
        star_subset: is_restriction(&star, &sep.flat, &kept, &choices),
    };
    let sep_nodes = (0..sep.flat.len())
        .filter(|&id| sep.flat.node(id).rule == Rule::Sep)
        .collect();
    Ok(CompressionTrace {
        tree: t.clone(),
        prime: lc.prime,
        flat: sep.flat,
        star,
        tree_to_prime: lc.image,
        star_to_flat: kept,
        sep_nodes,
        threads: fst.len(),
        choices,
        route,
        bounds,
        verdicts,
    })
}

#[cfg(test)]
mod tests;

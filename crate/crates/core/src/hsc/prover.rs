use std::collections::{HashMap, HashSet};
use std::time::Instant;

use thiserror::Error;

use crate::formula::{Formula, Sequent};

use super::check::{mee_premises, mep_premise, mi2_premise, nested_imp};
use super::{with, ScRule, SequentProof};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("proof search timed out")]
    Timeout,
    #[error("sequent is not purely implicational")]
    NotImplicational,
}

/// Antecedent formulas held across both memo tables before they are
/// flushed. Keeps memory bounded on long searches; correctness does not
/// depend on the tables.
const MEMO_SLOTS: usize = 20_000_000;

/// Backward proof search. Every rule decreases the multiset of antecedent
/// weights (with `(α→β)→γ` splitting into strictly lighter pieces), so the
/// search terminates without loop checking. MA, MEP, MI1 and MI2 are
/// invertible and applied without backtracking; only the first premise of
/// MEE needs a choice, since its second premise follows from the
/// conclusion.
///
/// An atomic goal `q` is only provable when some antecedent formula has
/// head `q`, and MEE principals with head `q` are tried first.
#[derive(Debug, Default)]
pub struct Prover {
    failed: HashSet<Sequent>,
    proved: HashMap<Sequent, usize>,
    memo_slots: usize,
    /// Proof nodes found so far; premises index into the arena.
    arena: Vec<Step>,
    deadline: Option<Instant>,
    steps: u64,
}

#[derive(Debug)]
struct Step {
    conclusion: Sequent,
    rule: ScRule,
    premises: Vec<usize>,
}

pub fn prove_lm(s: &Sequent) -> Option<SequentProof> {
    Prover::new().prove(s).expect("no deadline set")
}

/// The atom at the end of the implication spine.
fn head(f: &Formula) -> &Formula {
    match f.as_imp() {
        Some((_, b)) => head(b),
        None => f,
    }
}

impl Prover {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_deadline(deadline: Instant) -> Self {
        Prover {
            deadline: Some(deadline),
            ..Self::default()
        }
    }

    /// Number of sequents expanded so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn prove(&mut self, s: &Sequent) -> Result<Option<SequentProof>, ProverError> {
        if !s.is_purely_implicational() {
            return Err(ProverError::NotImplicational);
        }
        Ok(self.search(s)?.map(|i| self.materialize(i)))
    }

    fn materialize(&self, i: usize) -> SequentProof {
        let step = &self.arena[i];
        SequentProof {
            conclusion: step.conclusion.clone(),
            rule: step.rule,
            premises: step.premises.iter().map(|&p| self.materialize(p)).collect(),
        }
    }

    fn push(&mut self, conclusion: Sequent, rule: ScRule, premises: Vec<usize>) -> usize {
        self.arena.push(Step { conclusion, rule, premises });
        self.arena.len() - 1
    }

    fn tick(&mut self) -> Result<(), ProverError> {
        self.steps += 1;
        if self.steps.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(ProverError::Timeout);
                }
            }
        }
        Ok(())
    }

    fn remember(&mut self, s: &Sequent, result: Option<usize>) {
        self.memo_slots += s.antecedent().len() + 1;
        if self.memo_slots > MEMO_SLOTS {
            self.failed.clear();
            self.proved.clear();
            self.memo_slots = 0;
        }
        match result {
            Some(i) => {
                self.proved.insert(s.clone(), i);
            }
            None => {
                self.failed.insert(s.clone());
            }
        }
    }

    fn search(&mut self, s: &Sequent) -> Result<Option<usize>, ProverError> {
        if self.failed.contains(s) {
            return Ok(None);
        }
        if let Some(&i) = self.proved.get(s) {
            return Ok(Some(i));
        }
        self.tick()?;
        let result = self.expand(s)?;
        self.remember(s, result);
        Ok(result)
    }

    fn expand(&mut self, s: &Sequent) -> Result<Option<usize>, ProverError> {
        let ctx = s.antecedent();
        let goal = &s.succedent;

        if let Some((alpha, beta)) = goal.as_imp() {
            let principal = ctx
                .iter()
                .find(|f| matches!(f.as_imp(), Some((ab, _)) if ab == goal));
            let (rule, premise) = match principal {
                Some(f) => (ScRule::Mi2, mi2_premise(ctx, f).expect("principal in context")),
                None => (ScRule::Mi1, Sequent::new(with(ctx, &[alpha]), beta.clone())),
            };
            return Ok(self.search(&premise)?.map(|p| self.push(s.clone(), rule, vec![p])));
        }

        let q = goal.as_var().expect("purely implicational goal");
        // Saturate with MEP first; each step is invertible.
        let mut chain = Vec::new();
        let mut current = s.clone();
        let base = loop {
            let ctx = current.antecedent();
            if ctx.contains(goal) {
                break Some(self.push(current.clone(), ScRule::Ma, vec![]));
            }
            if !ctx.iter().any(|f| head(f) == goal) {
                break None;
            }
            let mut distinct: Vec<&Formula> = ctx.iter().collect();
            distinct.dedup();
            if let Some(premise) = distinct.iter().find_map(|f| mep_premise(ctx, f, q)) {
                chain.push(std::mem::replace(&mut current, premise));
                self.tick()?;
                continue;
            }
            if chain.is_empty() {
                break self.eliminate(&current, q)?;
            }
            break self.search(&current)?;
        };
        Ok(base.map(|mut acc| {
            for c in chain.into_iter().rev() {
                acc = self.push(c, ScRule::Mep, vec![acc]);
            }
            acc
        }))
    }

    fn eliminate(&mut self, s: &Sequent, q: &str) -> Result<Option<usize>, ProverError> {
        let ctx = s.antecedent();
        let goal = &s.succedent;
        let mut candidates: Vec<&Formula> = ctx.iter().filter(|f| nested_imp(f).is_some()).collect();
        candidates.dedup();
        candidates.sort_by_key(|f| (head(f) != goal, f.weight()));
        for f in candidates {
            let Some((left, right)) = mee_premises(ctx, f, q) else {
                continue;
            };
            if let Some(p1) = self.search(&left)? {
                return Ok(self
                    .search(&right)?
                    .map(|p2| self.push(s.clone(), ScRule::Mee, vec![p1, p2])));
            }
        }
        Ok(None)
    }
}

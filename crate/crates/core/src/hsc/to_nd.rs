use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::formula::Formula;
use crate::nd::{Deduction, DeductionBuilder, DeductionError, NodeId};

use super::{check_sc_proof, Instance, ScRule, SequentProof};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScToNdError {
    #[error("sequent proof does not check")]
    Unchecked,
    #[error("natural deduction tree exceeds {budget} nodes")]
    TooLarge { budget: usize },
    #[error(transparent)]
    Deduction(#[from] DeductionError),
}

/// Tree under construction; subtrees are shared until materialized.
enum Nd {
    Leaf(Formula),
    Intro { discharged: Formula, conclusion: Formula, body: Rc<Nd> },
    Elim { conclusion: Formula, minor: Rc<Nd>, major: Rc<Nd> },
}

impl Nd {
    fn conclusion(&self) -> &Formula {
        match self {
            Nd::Leaf(f) => f,
            Nd::Intro { conclusion, .. } | Nd::Elim { conclusion, .. } => conclusion,
        }
    }

    fn intro(discharged: Formula, body: Rc<Nd>) -> Rc<Nd> {
        let conclusion = Formula::imp(discharged.clone(), body.conclusion().clone());
        Rc::new(Nd::Intro { discharged, conclusion, body })
    }

    fn elim(minor: Rc<Nd>, major: Rc<Nd>) -> Rc<Nd> {
        let (_, b) = major.conclusion().as_imp().expect("major premise is an implication");
        let conclusion = b.clone();
        Rc::new(Nd::Elim { conclusion, minor, major })
    }

    fn leaf(f: &Formula) -> Rc<Nd> {
        Rc::new(Nd::Leaf(f.clone()))
    }
}

/// Replace free `target` leaves by `repl`.
fn substitute(tree: &Rc<Nd>, target: &Formula, repl: &Rc<Nd>) -> Rc<Nd> {
    fn go(
        t: &Rc<Nd>,
        target: &Formula,
        repl: &Rc<Nd>,
        memo: &mut HashMap<*const Nd, Option<Rc<Nd>>>,
    ) -> Option<Rc<Nd>> {
        let key = Rc::as_ptr(t);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let out = match &**t {
            Nd::Leaf(f) => (f == target).then(|| repl.clone()),
            Nd::Intro { discharged, body, .. } => {
                if discharged == target {
                    None
                } else {
                    go(body, target, repl, memo).map(|b| Nd::intro(discharged.clone(), b))
                }
            }
            Nd::Elim { minor, major, .. } => {
                let m = go(minor, target, repl, memo);
                let j = go(major, target, repl, memo);
                if m.is_none() && j.is_none() {
                    None
                } else {
                    Some(Nd::elim(
                        m.unwrap_or_else(|| minor.clone()),
                        j.unwrap_or_else(|| major.clone()),
                    ))
                }
            }
        };
        memo.insert(key, out.clone());
        out
    }
    go(tree, target, repl, &mut HashMap::new()).unwrap_or_else(|| tree.clone())
}

/// `β→γ` from the assumption `(α→β)→γ`.
fn weaken_nested(principal: &Formula, alpha: &Formula, beta: &Formula) -> Rc<Nd> {
    let ab = Nd::intro(alpha.clone(), Nd::leaf(beta));
    Nd::intro(beta.clone(), Nd::elim(ab, Nd::leaf(principal)))
}

fn interpret(pr: &SequentProof) -> Rc<Nd> {
    let instance = pr.instance().expect("checked proof");
    match instance {
        Instance::Ma { p } => Nd::leaf(&p),
        Instance::Mi1 { alpha, .. } => Nd::intro(alpha, interpret(&pr.premises[0])),
        Instance::Mi2 { principal, alpha, beta, gamma } => {
            let bg = Formula::imp(beta.clone(), gamma);
            let d = substitute(
                &interpret(&pr.premises[0]),
                &bg,
                &weaken_nested(&principal, &alpha, &beta),
            );
            Nd::intro(alpha, d)
        }
        Instance::Mep { principal, p, gamma } => {
            let g = Nd::elim(Nd::leaf(&p), Nd::leaf(&principal));
            substitute(&interpret(&pr.premises[0]), &gamma, &g)
        }
        Instance::Mee { principal, alpha, beta, gamma } => {
            let bg = Formula::imp(beta.clone(), gamma.clone());
            let d1 = substitute(
                &interpret(&pr.premises[0]),
                &bg,
                &weaken_nested(&principal, &alpha, &beta),
            );
            let g = Nd::elim(Nd::intro(alpha, d1), Nd::leaf(&principal));
            substitute(&interpret(&pr.premises[1]), &gamma, &g)
        }
    }
}

fn tree_size(t: &Rc<Nd>, memo: &mut HashMap<*const Nd, u128>) -> u128 {
    if let Some(&n) = memo.get(&Rc::as_ptr(t)) {
        return n;
    }
    let n = 1 + match &**t {
        Nd::Leaf(_) => 0,
        Nd::Intro { body, .. } => tree_size(body, memo),
        Nd::Elim { minor, major, .. } => tree_size(minor, memo) + tree_size(major, memo),
    };
    memo.insert(Rc::as_ptr(t), n);
    n
}

fn materialize(t: &Nd, b: &mut DeductionBuilder) -> NodeId {
    match t {
        Nd::Leaf(f) => b.leaf(f.clone()),
        Nd::Intro { discharged, body, .. } => {
            let premise = materialize(body, b);
            b.imp_intro(discharged.clone(), premise)
        }
        Nd::Elim { minor, major, .. } => {
            let m = materialize(minor, b);
            let j = materialize(major, b);
            b.imp_elim(m, j)
        }
    }
}

/// Read an LM→ proof as a tree-like NM→ deduction of its succedent from
/// open assumptions among its antecedent.
pub fn sc_to_nd(pr: &SequentProof) -> Result<Deduction, ScToNdError> {
    sc_to_nd_with_budget(pr, DEFAULT_NODE_BUDGET)
}

pub fn sc_to_nd_with_budget(pr: &SequentProof, budget: usize) -> Result<Deduction, ScToNdError> {
    if !check_sc_proof(pr) {
        return Err(ScToNdError::Unchecked);
    }
    let tree = interpret(pr);
    if tree_size(&tree, &mut HashMap::new()) > budget as u128 {
        return Err(ScToNdError::TooLarge { budget });
    }
    let mut b = DeductionBuilder::new();
    let root = materialize(&tree, &mut b);
    Ok(b.build(root)?)
}

/// Height bound for [`sc_to_nd`] implied by the per-rule gadgets: MI1 and
/// MEP add 1, MI2 adds 4, and MEE adds 5 on top of the sum of both premise
/// bounds.
pub fn nd_height_bound(pr: &SequentProof) -> usize {
    let sub: Vec<usize> = pr.premises.iter().map(nd_height_bound).collect();
    match pr.rule {
        ScRule::Ma => 0,
        ScRule::Mi1 | ScRule::Mep => sub[0] + 1,
        ScRule::Mi2 => sub[0] + 4,
        ScRule::Mee => sub[0] + sub[1] + 5,
    }
}

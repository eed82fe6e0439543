use crate::formula::{Formula, Sequent};

use super::{mentions_var, with, without, ScRule, SequentProof};

/// The rule instance a proof node realizes, with its principal formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Ma { p: Formula },
    Mi1 { alpha: Formula, beta: Formula },
    /// `principal` is `(α→β)→γ`.
    Mi2 { principal: Formula, alpha: Formula, beta: Formula, gamma: Formula },
    /// `principal` is `p→γ`.
    Mep { principal: Formula, p: Formula, gamma: Formula },
    Mee { principal: Formula, alpha: Formula, beta: Formula, gamma: Formula },
}

/// Split `(α→β)→γ`.
pub(crate) fn nested_imp(f: &Formula) -> Option<(&Formula, &Formula, &Formula)> {
    let (ab, gamma) = f.as_imp()?;
    let (alpha, beta) = ab.as_imp()?;
    Some((alpha, beta, gamma))
}

pub(crate) fn mi2_premise(ctx: &[Formula], principal: &Formula) -> Option<Sequent> {
    let (alpha, beta, gamma) = nested_imp(principal)?;
    let rest = without(ctx, principal)?;
    let bg = Formula::imp(beta.clone(), gamma.clone());
    Some(Sequent::new(with(&rest, &[alpha, &bg]), beta.clone()))
}

pub(crate) fn mep_premise(ctx: &[Formula], principal: &Formula, q: &str) -> Option<Sequent> {
    let (p, gamma) = principal.as_imp()?;
    let pv = p.as_var()?;
    if pv == q {
        return None;
    }
    let rest = without(ctx, principal)?;
    let others = without(&rest, p)?;
    if !mentions_var(others.iter().chain([gamma]), q) {
        return None;
    }
    Some(Sequent::new(with(&rest, &[gamma]), Formula::var(q)))
}

pub(crate) fn mee_premises(ctx: &[Formula], principal: &Formula, q: &str) -> Option<(Sequent, Sequent)> {
    let (alpha, beta, gamma) = nested_imp(principal)?;
    let rest = without(ctx, principal)?;
    if !mentions_var(rest.iter().chain([gamma]), q) {
        return None;
    }
    let bg = Formula::imp(beta.clone(), gamma.clone());
    Some((
        Sequent::new(with(&rest, &[alpha, &bg]), beta.clone()),
        Sequent::new(with(&rest, &[gamma]), Formula::var(q)),
    ))
}

impl SequentProof {
    /// Find a rule instance whose conclusion and premises match this node
    /// exactly, side conditions included.
    pub fn instance(&self) -> Option<Instance> {
        let ctx = self.conclusion.antecedent();
        let goal = &self.conclusion.succedent;
        let prem: Vec<&Sequent> = self.premises.iter().map(|p| &p.conclusion).collect();
        let distinct = || {
            let mut seen: Vec<&Formula> = ctx.iter().collect();
            seen.dedup();
            seen
        };
        match (self.rule, prem.as_slice()) {
            (ScRule::Ma, []) => {
                goal.as_var()?;
                ctx.contains(goal).then(|| Instance::Ma { p: goal.clone() })
            }
            (ScRule::Mi1, [s]) => {
                let (alpha, beta) = goal.as_imp()?;
                let blocked = ctx
                    .iter()
                    .any(|f| matches!(f.as_imp(), Some((ab, _)) if ab == goal));
                let expected = Sequent::new(with(ctx, &[alpha]), beta.clone());
                (!blocked && **s == expected).then(|| Instance::Mi1 {
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                })
            }
            (ScRule::Mi2, [s]) => {
                goal.as_imp()?;
                distinct().into_iter().find_map(|f| {
                    let (alpha, beta, gamma) = nested_imp(f)?;
                    if Formula::imp(alpha.clone(), beta.clone()) != *goal {
                        return None;
                    }
                    (mi2_premise(ctx, f)? == **s).then(|| Instance::Mi2 {
                        principal: f.clone(),
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        gamma: gamma.clone(),
                    })
                })
            }
            (ScRule::Mep, [s]) => {
                let q = goal.as_var()?;
                distinct().into_iter().find_map(|f| {
                    (mep_premise(ctx, f, q)? == **s).then(|| {
                        let (p, gamma) = f.as_imp().unwrap();
                        Instance::Mep {
                            principal: f.clone(),
                            p: p.clone(),
                            gamma: gamma.clone(),
                        }
                    })
                })
            }
            (ScRule::Mee, [s1, s2]) => {
                let q = goal.as_var()?;
                distinct().into_iter().find_map(|f| {
                    let (e1, e2) = mee_premises(ctx, f, q)?;
                    (e1 == **s1 && e2 == **s2).then(|| {
                        let (alpha, beta, gamma) = nested_imp(f).unwrap();
                        Instance::Mee {
                            principal: f.clone(),
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                            gamma: gamma.clone(),
                        }
                    })
                })
            }
            _ => None,
        }
    }
}

/// True iff every node instantiates its rule and all formulas are purely
/// implicational.
pub fn check_sc_proof(pr: &SequentProof) -> bool {
    pr.conclusion.is_purely_implicational()
        && pr.instance().is_some()
        && pr.premises.iter().all(check_sc_proof)
}

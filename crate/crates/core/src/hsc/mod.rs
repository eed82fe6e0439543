//! A cutfree, contraction-free sequent calculus for implicational minimal
//! logic with five rules:
//!
//! ```text
//! MA   Γ, p ⇒ p
//! MI1  Γ, α ⇒ β           / Γ ⇒ α→β                 [no (α→β)→γ in Γ]
//! MI2  Γ, α, β→γ ⇒ β      / Γ, (α→β)→γ ⇒ α→β
//! MEP  Γ, p, γ ⇒ q        / Γ, p, p→γ ⇒ q            [q ∈ VAR(Γ,γ), p ≠ q]
//! MEE  Γ, α, β→γ ⇒ β  and  Γ, γ ⇒ q  / Γ, (α→β)→γ ⇒ q [q ∈ VAR(Γ,γ)]
//! ```
//!
//! `p`, `q` range over variables. Antecedents are multisets.

mod check;
mod prover;
mod to_nd;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::formula::{Formula, Sequent};

pub use check::{check_sc_proof, Instance};
pub use prover::{prove_lm, Prover, ProverError};
pub use to_nd::{nd_height_bound, sc_to_nd, sc_to_nd_with_budget, ScToNdError, DEFAULT_NODE_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScRule {
    Ma,
    Mi1,
    Mi2,
    Mep,
    Mee,
}

impl ScRule {
    pub fn name(self) -> &'static str {
        match self {
            ScRule::Ma => "MA",
            ScRule::Mi1 => "MI1",
            ScRule::Mi2 => "MI2",
            ScRule::Mep => "MEP",
            ScRule::Mee => "MEE",
        }
    }

    pub fn from_name(name: &str) -> Option<ScRule> {
        Some(match name {
            "MA" => ScRule::Ma,
            "MI1" => ScRule::Mi1,
            "MI2" => ScRule::Mi2,
            "MEP" => ScRule::Mep,
            "MEE" => ScRule::Mee,
            _ => return None,
        })
    }
}

impl fmt::Display for ScRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequentProof {
    pub conclusion: Sequent,
    pub rule: ScRule,
    pub premises: Vec<SequentProof>,
}

impl SequentProof {
    /// Number of rule applications on the longest branch; an axiom has
    /// height 0.
    pub fn height(&self) -> usize {
        self.premises
            .iter()
            .map(|p| p.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(SequentProof::size).sum::<usize>()
    }

    /// One sequent per line, indented by depth.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(out, "{}{}  [{}]", "  ".repeat(depth), self.conclusion, self.rule);
        for p in &self.premises {
            p.render_into(depth + 1, out);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SequentDocument {
    antecedent: Vec<Formula>,
    succedent: Formula,
}

#[derive(Serialize, Deserialize)]
struct ProofNodeDocument {
    conclusion: SequentDocument,
    rule: String,
    #[serde(default)]
    premises: Vec<ProofNodeDocument>,
}

impl ProofNodeDocument {
    fn from_proof(p: &SequentProof) -> Self {
        ProofNodeDocument {
            conclusion: SequentDocument {
                antecedent: p.conclusion.antecedent().to_vec(),
                succedent: p.conclusion.succedent.clone(),
            },
            rule: p.rule.name().to_string(),
            premises: p.premises.iter().map(Self::from_proof).collect(),
        }
    }

    fn into_proof(self) -> Result<SequentProof, String> {
        let rule = ScRule::from_name(&self.rule).ok_or_else(|| format!("unknown rule `{}`", self.rule))?;
        Ok(SequentProof {
            conclusion: Sequent::new(self.conclusion.antecedent, self.conclusion.succedent),
            rule,
            premises: self
                .premises
                .into_iter()
                .map(Self::into_proof)
                .collect::<Result<_, _>>()?,
        })
    }
}

impl Serialize for SequentProof {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ProofNodeDocument::from_proof(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SequentProof {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        ProofNodeDocument::deserialize(deserializer)?
            .into_proof()
            .map_err(serde::de::Error::custom)
    }
}

/// Multiset helpers over sorted antecedents.
pub(crate) fn without(ctx: &[Formula], f: &Formula) -> Option<Vec<Formula>> {
    let i = ctx.iter().position(|g| g == f)?;
    let mut out = ctx.to_vec();
    out.remove(i);
    Some(out)
}

pub(crate) fn with(ctx: &[Formula], extra: &[&Formula]) -> Vec<Formula> {
    let mut out = ctx.to_vec();
    out.extend(extra.iter().map(|f| (*f).clone()));
    out
}

pub(crate) fn mentions_var<'a, I>(formulas: I, q: &str) -> bool
where
    I: IntoIterator<Item = &'a Formula>,
{
    formulas.into_iter().any(|f| f.contains_var(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn document_round_trip() {
        let proof = prove_lm(&Sequent::goal(parse_formula("((p->p)->q)->q").unwrap())).unwrap();
        let json = serde_json::to_string(&proof).unwrap();
        assert!(json.contains("\"rule\":\"MI1\""));
        let back: SequentProof = serde_json::from_str(&json).unwrap();
        assert_eq!(back, proof);
        assert!(serde_json::from_str::<SequentProof>(
            r#"{"conclusion": {"antecedent": [], "succedent": "p"}, "rule": "CUT", "premises": []}"#
        )
        .is_err());
    }

    #[test]
    fn render_indents_by_depth() {
        let proof = prove_lm(&Sequent::goal(parse_formula("p->p").unwrap())).unwrap();
        assert_eq!(proof.render(), "=> p -> p  [MI1]\n  p => p  [MA]\n");
    }
}

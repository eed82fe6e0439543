//! JSON proof documents:
//! `{"root": id, "nodes": [{"id", "level", "formula", "rule", "discharged"?, "premises"}]}`
//! with an optional `"choices": [[sep_id, premise_index], ...]` certificate.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::formula::Formula;

use super::{Deduction, DeductionError, Node, NodeId, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDocument {
    pub id: NodeId,
    pub level: usize,
    pub formula: Formula,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discharged: Option<Formula>,
    #[serde(default)]
    pub premises: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDocument {
    pub root: NodeId,
    pub nodes: Vec<NodeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choices: Option<Vec<[usize; 2]>>,
}

impl ProofDocument {
    pub fn from_deduction(d: &Deduction) -> ProofDocument {
        let nodes = d
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, n)| NodeDocument {
                id,
                level: d.level(id),
                formula: n.formula.clone(),
                rule: n.rule.name().to_string(),
                discharged: match &n.rule {
                    Rule::ImpIntro { discharged } => Some(discharged.clone()),
                    _ => None,
                },
                premises: n.premises.clone(),
            })
            .collect();
        ProofDocument {
            root: d.root(),
            nodes,
            choices: None,
        }
    }

    pub fn with_choices(mut self, choices: &BTreeMap<NodeId, usize>) -> ProofDocument {
        self.choices = Some(choices.iter().map(|(&k, &v)| [k, v]).collect());
        self
    }

    /// Rebuild the deduction. Document ids may be arbitrary; nodes are
    /// renumbered in document order.
    pub fn to_deduction(&self) -> Result<Deduction, DeductionError> {
        let index: HashMap<NodeId, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id, i))
            .collect();
        if index.len() != self.nodes.len() {
            return Err(DeductionError::Document("duplicate node id".into()));
        }
        let lookup = |id: NodeId| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| DeductionError::Document(format!("unknown node id {id}")))
        };
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut levels = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let rule = match (n.rule.as_str(), &n.discharged) {
                ("leaf", None) => Rule::Leaf,
                ("impI", Some(a)) => Rule::ImpIntro {
                    discharged: a.clone(),
                },
                ("impI", None) => {
                    return Err(DeductionError::Document(format!(
                        "node {}: impI needs a discharged formula",
                        n.id
                    )))
                }
                ("impE", None) => Rule::ImpElim,
                ("rep", None) => Rule::Rep,
                ("sep", None) => Rule::Sep,
                (other, _) => {
                    return Err(DeductionError::Document(format!(
                        "node {}: unexpected rule `{other}` or stray discharged formula",
                        n.id
                    )))
                }
            };
            let premises = n
                .premises
                .iter()
                .map(|&p| lookup(p))
                .collect::<Result<Vec<_>, _>>()?;
            nodes.push(Node {
                formula: n.formula.clone(),
                rule,
                premises,
            });
            levels.push(n.level);
        }
        Deduction::with_levels(nodes, lookup(self.root)?, levels)
    }

    /// The certificate in terms of renumbered node ids.
    pub fn choice_map(&self) -> Result<Option<BTreeMap<NodeId, usize>>, DeductionError> {
        let Some(choices) = &self.choices else {
            return Ok(None);
        };
        let index: HashMap<NodeId, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id, i))
            .collect();
        choices
            .iter()
            .map(|&[id, i]| {
                index
                    .get(&id)
                    .map(|&k| (k, i))
                    .ok_or_else(|| DeductionError::Document(format!("unknown node id {id}")))
            })
            .collect::<Result<BTreeMap<_, _>, _>>()
            .map(Some)
    }
}

//! Propositional formulas, sequents and directed graphs.
//!
//! Formulas are immutable trees with structurally shared children. Equality,
//! ordering and hashing are all structural, so two independently built copies
//! of `p -> q` are interchangeable everywhere (sets, maps, merging).

mod graph;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use graph::{parse_graph, DiGraph, GraphError};
pub use parse::{parse_formula, ParseError};

/// A propositional formula over `->`, `&`, `|` and `false`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Arc<str>),
    Falsum,
    Imp(Arc<Formula>, Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn imp(left: Formula, right: Formula) -> Formula {
        Formula::Imp(Arc::new(left), Arc::new(right))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Arc::new(left), Arc::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Arc::new(left), Arc::new(right))
    }

    /// `self -> false`.
    pub fn negate(self) -> Formula {
        Formula::imp(self, Formula::Falsum)
    }

    /// Left-nested conjunction of the given formulas, `None` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction of the given formulas, `None` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Right-nested implication chain `h1 -> (h2 -> ... -> head)`.
    pub fn imp_chain<I>(hyps: I, head: Formula) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        hyps.into_iter()
            .rev()
            .fold(head, |acc, h| Formula::imp(h, acc))
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Formula::Var(name) => Some(name),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    /// Number of symbols: atoms, `false` and connectives each count one.
    pub fn weight(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Falsum => 1,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.weight() + b.weight() + 1
            }
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Falsum => 0,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                1 + a.height().max(b.height())
            }
        }
    }

    /// True iff the formula is built from variables and `->` only.
    pub fn is_purely_implicational(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Imp(a, b) => a.is_purely_implicational() && b.is_purely_implicational(),
            Formula::Falsum | Formula::And(..) | Formula::Or(..) => false,
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        if let Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) = self {
            a.collect_subformulas(out);
            b.collect_subformulas(out);
        }
    }

    pub fn variables(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Var(name) => {
                out.insert(name.clone());
            }
            Formula::Falsum => {}
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Formula::Var(v) => &**v == name,
            Formula::Falsum => false,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.contains_var(name) || b.contains_var(name)
            }
        }
    }
}

// Binding strength used by the printer; higher binds tighter.
const PREC_IMP: u8 = 0;
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_ATOM: u8 = 3;

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => PREC_IMP,
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            Formula::Var(_) | Formula::Falsum => PREC_ATOM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let parens = self.precedence() < min_prec;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(name) => f.write_str(name)?,
            Formula::Falsum => f.write_str("false")?,
            // `->` is right associative, `&` and `|` are left associative.
            Formula::Imp(a, b) => {
                a.write_at(f, PREC_OR)?;
                f.write_str(" -> ")?;
                b.write_at(f, PREC_IMP)?;
            }
            Formula::Or(a, b) => {
                a.write_at(f, PREC_OR)?;
                f.write_str(" | ")?;
                b.write_at(f, PREC_AND)?;
            }
            Formula::And(a, b) => {
                a.write_at(f, PREC_AND)?;
                f.write_str(" & ")?;
                b.write_at(f, PREC_ATOM)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, PREC_IMP)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_formula(&text).map_err(serde::de::Error::custom)
    }
}

/// `Γ ⇒ α` with `Γ` a multiset. The antecedent is kept sorted so that equal
/// multisets compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sequent {
    antecedent: Vec<Formula>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(mut antecedent: Vec<Formula>, succedent: Formula) -> Sequent {
        antecedent.sort();
        Sequent {
            antecedent,
            succedent,
        }
    }

    /// The sequent `⇒ α`.
    pub fn goal(succedent: Formula) -> Sequent {
        Sequent {
            antecedent: Vec::new(),
            succedent,
        }
    }

    pub fn antecedent(&self) -> &[Formula] {
        &self.antecedent
    }

    pub fn is_purely_implicational(&self) -> bool {
        self.succedent.is_purely_implicational()
            && self.antecedent.iter().all(Formula::is_purely_implicational)
    }

    /// Total weight of all formulas in the sequent.
    pub fn weight(&self) -> usize {
        self.succedent.weight() + self.antecedent.iter().map(Formula::weight).sum::<usize>()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.antecedent.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "=> {}", self.succedent)
    }
}

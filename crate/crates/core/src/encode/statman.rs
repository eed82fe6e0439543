use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::formula::Formula;

#[derive(Default)]
struct Polarity {
    positive: bool,
    negative: bool,
}

struct Translation {
    /// Non-implicational compound subformulas (and `false`) in postorder of
    /// first occurrence.
    order: Vec<Formula>,
    polarity: HashMap<Formula, Polarity>,
    names: HashMap<Formula, Formula>,
}

impl Translation {
    fn scan(&mut self, f: &Formula, positive: bool) {
        match f {
            Formula::Var(_) => {}
            Formula::Falsum => {}
            Formula::Imp(a, b) => {
                self.scan(a, !positive);
                self.scan(b, positive);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.scan(a, positive);
                self.scan(b, positive);
            }
        }
        let pol = self.polarity.entry(f.clone()).or_default();
        if positive {
            pol.positive = true;
        } else {
            pol.negative = true;
        }
        if matches!(f, Formula::Falsum | Formula::And(..) | Formula::Or(..)) && !self.names.contains_key(f) {
            self.order.push(f.clone());
            self.names.insert(f.clone(), Formula::Falsum);
        }
    }

    fn skeleton(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(_) => f.clone(),
            Formula::Imp(a, b) => Formula::imp(self.skeleton(a), self.skeleton(b)),
            _ => self.names[f].clone(),
        }
    }
}

/// Translate a full-language formula into a purely implicational one that
/// is minimally provable iff the input is intuitionistically valid.
///
/// Each `&`, `|` and `false` subformula gets a fresh variable `q`, tied to
/// its immediate parts by implicational axioms:
///
/// - `q = α & β`: `q→α'`, `q→β'`, `α'→β'→q`;
/// - `q = α | β`: `α'→q`, `β'→q`, and when the disjunction occurs
///   negatively, `(α'→δ)→(β'→δ)→q→δ` for every positively occurring
///   atom-like target `δ` of the skeleton;
/// - `q = false`: `q→s` for every other variable `s` of the translation.
///
/// The axioms become hypotheses of the skeleton, in order of first
/// occurrence. Formulas without such subformulas come back unchanged.
pub fn statman_translate(f: &Formula) -> Formula {
    let mut t = Translation {
        order: Vec::new(),
        polarity: HashMap::new(),
        names: HashMap::new(),
    };
    t.scan(f, true);

    let taken: BTreeSet<Arc<str>> = f.variables();
    let mut counter = 0usize;
    for sub in &t.order {
        let name = loop {
            counter += 1;
            let candidate = format!("q{counter}");
            if !taken.contains(candidate.as_str()) {
                break candidate;
            }
        };
        t.names.insert(sub.clone(), Formula::var(&name));
    }

    let mut targets: Vec<Formula> = Vec::new();
    collect_targets(f, true, &t, &mut targets, &mut HashSet::new());

    let mut axioms: Vec<Formula> = Vec::new();
    let mut falsum = None;
    for sub in &t.order {
        let q = t.names[sub].clone();
        match sub {
            Formula::And(a, b) => {
                let (a, b) = (t.skeleton(a), t.skeleton(b));
                axioms.push(Formula::imp(q.clone(), a.clone()));
                axioms.push(Formula::imp(q.clone(), b.clone()));
                axioms.push(Formula::imp_chain([a, b], q));
            }
            Formula::Or(a, b) => {
                let (a, b) = (t.skeleton(a), t.skeleton(b));
                axioms.push(Formula::imp(a.clone(), q.clone()));
                axioms.push(Formula::imp(b.clone(), q.clone()));
                if t.polarity[sub].negative {
                    for d in &targets {
                        axioms.push(Formula::imp_chain(
                            [
                                Formula::imp(a.clone(), d.clone()),
                                Formula::imp(b.clone(), d.clone()),
                                q.clone(),
                            ],
                            d.clone(),
                        ));
                    }
                }
            }
            Formula::Falsum => falsum = Some(q),
            _ => unreachable!("only named subformulas are listed"),
        }
    }
    if let Some(bot) = falsum {
        let mut vars: Vec<Formula> = taken.iter().map(|v| Formula::var(v)).collect();
        vars.extend(t.order.iter().map(|s| t.names[s].clone()));
        for s in vars {
            if s != bot {
                axioms.push(Formula::imp(bot.clone(), s));
            }
        }
    }

    let mut seen = HashSet::new();
    axioms.retain(|a| seen.insert(a.clone()));
    Formula::imp_chain(axioms, t.skeleton(f))
}

/// Skeleton images of positively occurring non-implications, in first
/// occurrence order.
fn collect_targets(
    f: &Formula,
    positive: bool,
    t: &Translation,
    out: &mut Vec<Formula>,
    seen: &mut HashSet<Formula>,
) {
    match f {
        Formula::Imp(a, b) => {
            collect_targets(a, !positive, t, out, seen);
            collect_targets(b, positive, t, out, seen);
            return;
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_targets(a, positive, t, out, seen);
            collect_targets(b, positive, t, out, seen);
        }
        Formula::Var(_) | Formula::Falsum => {}
    }
    if positive {
        let image = t.skeleton(f);
        if seen.insert(image.clone()) {
            out.push(image);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Sequent};
    use crate::hsc::prove_lm;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn provable(s: &str) -> bool {
        let t = statman_translate(&f(s));
        assert!(t.is_purely_implicational());
        assert!(t.weight() <= f(s).weight().pow(3), "{s}: {}", t.weight());
        prove_lm(&Sequent::goal(t)).is_some()
    }

    #[test]
    fn implicational_input_is_unchanged() {
        assert_eq!(statman_translate(&f("p->q")), f("p->q"));
    }

    #[test]
    fn conjunction_example() {
        let t = statman_translate(&f("a & b -> a"));
        assert_eq!(t, f("(q1 -> a) -> (q1 -> b) -> (a -> b -> q1) -> q1 -> a"));
        assert!(prove_lm(&Sequent::goal(t)).is_some());
    }

    #[test]
    fn fresh_names_avoid_input_variables() {
        let t = statman_translate(&f("q1 & b -> q1"));
        assert!(t.variables().contains("q2"));
    }

    #[test]
    fn intuitionistic_validity_is_tracked() {
        for s in [
            "a & b -> b & a",
            "a | b -> b | a",
            "false -> p",
            "(a -> c) -> (b -> c) -> a | b -> c",
            "((a | b) -> c) -> a -> c",
            "(a | b) & (a -> false) -> b",
            "(p -> false) -> p -> q",
            "a & (b | c) -> (a & b) | (a & c)",
        ] {
            assert!(provable(s), "{s}");
        }
        for s in [
            "a | (a -> false)",
            "((a -> false) -> false) -> a",
            "false",
            "(a -> b) -> (a -> false) | b",
            "a | b -> a",
        ] {
            assert!(!provable(s), "{s}");
        }
    }
}

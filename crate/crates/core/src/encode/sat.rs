use std::collections::HashMap;
use std::sync::Arc;

use crate::formula::Formula;

use super::EncodeError;

pub const MAX_SAT_VARIABLES: usize = 24;

#[derive(Clone, Copy)]
enum Op {
    Var(usize),
    False,
    Imp(usize, usize),
    And(usize, usize),
    Or(usize, usize),
}

/// Flattened formula in postorder; the last op is the root.
struct Circuit {
    ops: Vec<Op>,
    vars: usize,
}

impl Circuit {
    fn compile(f: &Formula) -> Circuit {
        fn go(f: &Formula, ops: &mut Vec<Op>, names: &mut HashMap<Arc<str>, usize>) -> usize {
            let op = match f {
                Formula::Var(v) => {
                    let next = names.len();
                    Op::Var(*names.entry(v.clone()).or_insert(next))
                }
                Formula::Falsum => Op::False,
                Formula::Imp(a, b) => Op::Imp(go(a, ops, names), go(b, ops, names)),
                Formula::And(a, b) => Op::And(go(a, ops, names), go(b, ops, names)),
                Formula::Or(a, b) => Op::Or(go(a, ops, names), go(b, ops, names)),
            };
            ops.push(op);
            ops.len() - 1
        }
        let mut ops = Vec::new();
        let mut names = HashMap::new();
        go(f, &mut ops, &mut names);
        Circuit { ops, vars: names.len() }
    }

    /// Kleene evaluation under a partial assignment.
    fn eval(&self, assignment: &[Option<bool>], scratch: &mut Vec<Option<bool>>) -> Option<bool> {
        scratch.clear();
        for op in &self.ops {
            let value = match *op {
                Op::Var(i) => assignment[i],
                Op::False => Some(false),
                Op::Imp(a, b) => match (scratch[a], scratch[b]) {
                    (Some(false), _) | (_, Some(true)) => Some(true),
                    (Some(true), Some(false)) => Some(false),
                    _ => None,
                },
                Op::And(a, b) => match (scratch[a], scratch[b]) {
                    (Some(false), _) | (_, Some(false)) => Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                },
                Op::Or(a, b) => match (scratch[a], scratch[b]) {
                    (Some(true), _) | (_, Some(true)) => Some(true),
                    (Some(false), Some(false)) => Some(false),
                    _ => None,
                },
            };
            scratch.push(value);
        }
        *scratch.last().expect("non-empty circuit")
    }
}

/// Classical satisfiability by backtracking over variables in order of
/// first occurrence, pruning as soon as the partial assignment decides the
/// formula.
pub fn classical_sat(f: &Formula) -> Result<bool, EncodeError> {
    let circuit = Circuit::compile(f);
    if circuit.vars > MAX_SAT_VARIABLES {
        return Err(EncodeError::TooManyVariables {
            count: circuit.vars,
            bound: MAX_SAT_VARIABLES,
        });
    }
    fn search(c: &Circuit, assignment: &mut Vec<Option<bool>>, next: usize, scratch: &mut Vec<Option<bool>>) -> bool {
        match c.eval(assignment, scratch) {
            Some(v) => return v,
            None => debug_assert!(next < c.vars),
        }
        for value in [false, true] {
            assignment[next] = Some(value);
            if search(c, assignment, next + 1, scratch) {
                return true;
            }
        }
        assignment[next] = None;
        false
    }
    let mut assignment = vec![None; circuit.vars];
    let mut scratch = Vec::with_capacity(circuit.ops.len());
    Ok(search(&circuit, &mut assignment, 0, &mut scratch))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn sat(s: &str) -> bool {
        classical_sat(&parse_formula(s).unwrap()).unwrap()
    }

    #[test]
    fn basics() {
        assert!(!sat("false"));
        assert!(sat("p | (p -> false)"));
        assert!(!sat("p & (p -> false)"));
        assert!(sat("((p -> q) -> p) -> p"));
        assert!(!sat("(p | q) & (p -> false) & (q -> false)"));
    }

    #[test]
    fn agrees_with_truth_table() {
        // Peirce negated is unsatisfiable since Peirce is a classical tautology.
        assert!(!sat("(((p -> q) -> p) -> p) -> false"));
        assert!(sat("(p -> q) & (q -> r) & p & r"));
    }

    #[test]
    fn variable_bound() {
        let f = Formula::conjunction((0..25).map(|i| Formula::var(&format!("v{i}")))).unwrap();
        assert!(matches!(classical_sat(&f), Err(EncodeError::TooManyVariables { count: 25, .. })));
    }
}

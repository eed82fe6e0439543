use itertools::Itertools;

use crate::formula::{DiGraph, Formula};

use super::EncodeError;

pub const MAX_ORACLE_VERTICES: usize = 8;

/// `X_i_v`: vertex `v` is visited at step `i` (1-based).
fn x(i: usize, v: usize) -> Formula {
    Formula::var(&format!("X_{i}_{v}"))
}

fn not_both(a: Formula, b: Formula) -> Formula {
    Formula::imp(a, Formula::imp(b, Formula::Falsum))
}

/// The five conjunct families of the path formula, each as a list of
/// conjuncts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Families {
    /// Every vertex is visited.
    pub a: Vec<Formula>,
    /// No vertex is visited twice.
    pub b: Vec<Formula>,
    /// Some vertex is visited at every step.
    pub c: Vec<Formula>,
    /// At most one vertex per step.
    pub d: Vec<Formula>,
    /// Consecutive steps follow edges.
    pub e: Vec<Formula>,
}

pub fn hamiltonian_families(g: &DiGraph) -> Families {
    let n = g.vertex_count();
    let steps = 1..=n;
    let vertices = 0..n;
    let a = vertices
        .clone()
        .map(|v| Formula::disjunction(steps.clone().map(|i| x(i, v))).unwrap())
        .collect();
    let b = vertices
        .clone()
        .flat_map(|v| {
            steps
                .clone()
                .cartesian_product(steps.clone())
                .filter(|(i, j)| i != j)
                .map(move |(i, j)| not_both(x(i, v), x(j, v)))
        })
        .collect();
    let c = steps
        .clone()
        .map(|i| Formula::disjunction(vertices.clone().map(|v| x(i, v))).unwrap())
        .collect();
    let d = vertices
        .clone()
        .cartesian_product(vertices.clone())
        .filter(|(v, w)| v != w)
        .flat_map(|(v, w)| steps.clone().map(move |i| not_both(x(i, v), x(i, w))))
        .collect();
    let e = vertices
        .clone()
        .cartesian_product(vertices)
        .filter(|&(v, w)| !g.has_edge(v, w))
        .flat_map(|(v, w)| (1..n).map(move |i| not_both(x(i, v), x(i + 1, w))))
        .collect();
    Families { a, b, c, d, e }
}

/// `A ∧ B ∧ C ∧ D ∧ E`, dropping empty families.
pub fn encode_hamiltonian(g: &DiGraph) -> Formula {
    let Families { a, b, c, d, e } = hamiltonian_families(g);
    Formula::conjunction(
        [a, b, c, d, e]
            .into_iter()
            .filter_map(Formula::conjunction),
    )
    .expect("A and C are non-empty for n >= 1")
}

/// Brute force over all vertex orders.
pub fn hamiltonian_oracle(g: &DiGraph) -> Result<bool, EncodeError> {
    let n = g.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        return Err(EncodeError::TooManyVertices { n, bound: MAX_ORACLE_VERTICES });
    }
    Ok((0..n)
        .permutations(n)
        .any(|order| order.windows(2).all(|w| g.has_edge(w[0], w[1]))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> DiGraph {
        DiGraph::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn single_vertex() {
        let g = graph(1, &[]);
        assert_eq!(encode_hamiltonian(&g).to_string(), "X_1_0 & X_1_0");
        assert!(hamiltonian_oracle(&g).unwrap());
    }

    #[test]
    fn two_vertices() {
        let g = graph(2, &[(0, 1)]);
        assert_eq!(hamiltonian_families(&g).e.len(), 3);
        assert!(hamiltonian_oracle(&g).unwrap());
        assert!(!hamiltonian_oracle(&graph(2, &[])).unwrap());
    }

    #[test]
    fn complete_three_vertex_counts() {
        let edges: Vec<_> = (0..3)
            .cartesian_product(0..3)
            .filter(|(u, v)| u != v)
            .collect();
        let f = hamiltonian_families(&graph(3, &edges));
        assert_eq!(
            (f.a.len(), f.b.len(), f.c.len(), f.d.len(), f.e.len()),
            (3, 18, 3, 18, 6)
        );
    }

    #[test]
    fn oracle_bound() {
        let g = graph(9, &[]);
        assert!(matches!(hamiltonian_oracle(&g), Err(EncodeError::TooManyVertices { n: 9, .. })));
    }
}

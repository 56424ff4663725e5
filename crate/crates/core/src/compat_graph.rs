//! Compatibility graphs of Pauli observable sets.
//!
//! Vertices are operators; an edge joins two distinct vertices iff the
//! operators commute. Maximal cliques are the measurement contexts. The
//! Kirby-Love property (vertices a,b,c,d with edges {a,b},{a,c} and non-edges
//! {a,d},{b,c}) is detected both directly and through the structural
//! characterization via universal vertices.

use crate::f2::BitVec;
use crate::pauli::PauliOperator;
use thiserror::Error;

pub const DEFAULT_CLIQUE_LIMIT: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("clique enumeration exceeded the limit of {0}")]
    CliqueLimitExceeded(usize),
}

/// Witness for the Kirby-Love property: edges {a,b}, {a,c}; non-edges {a,d},
/// {b,c}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KlWitness {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityGraph {
    labels: Vec<PauliOperator>,
    adj: Vec<BitVec>,
}

/// Builds the compatibility graph of an ordered operator set.
///
/// Panics if the operators act on different qubit counts.
pub fn build_graph(ops: &[PauliOperator]) -> CompatibilityGraph {
    if let Some(first) = ops.first() {
        assert!(
            ops.iter().all(|p| p.qubits() == first.qubits()),
            "operators in one graph must share a qubit count"
        );
    }
    let m = ops.len();
    let mut adj = vec![BitVec::zeros(m); m];
    for i in 0..m {
        for j in (i + 1)..m {
            if ops[i].commutes(&ops[j]) {
                adj[i].set(j, true);
                adj[j].set(i, true);
            }
        }
    }
    CompatibilityGraph {
        labels: ops.to_vec(),
        adj,
    }
}

impl CompatibilityGraph {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[PauliOperator] {
        &self.labels
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i].get(j)
    }

    pub fn neighbors(&self, i: usize) -> &BitVec {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones()
    }

    /// Builds a graph directly from an adjacency list; used by tests that need
    /// arbitrary graphs with placeholder labels.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize)]) -> CompatibilityGraph {
        let mut adj = vec![BitVec::zeros(num_vertices); num_vertices];
        for &(i, j) in edges {
            assert!(i != j && i < num_vertices && j < num_vertices);
            adj[i].set(j, true);
            adj[j].set(i, true);
        }
        let labels = (0..num_vertices)
            .map(|_| PauliOperator::identity(1))
            .collect();
        CompatibilityGraph { labels, adj }
    }

    /// Direct Kirby-Love test: some vertex `a` that is not universal and whose
    /// neighborhood is not a clique. Returns the first witness in vertex
    /// order.
    pub fn has_kirby_love(&self) -> (bool, Option<KlWitness>) {
        let m = self.len();
        for a in 0..m {
            let Some(d) = (0..m).find(|&d| d != a && !self.has_edge(a, d)) else {
                continue; // a is universal
            };
            let nbrs: Vec<usize> = self.adj[a].iter_ones().collect();
            for (bi, &b) in nbrs.iter().enumerate() {
                for &c in &nbrs[bi + 1..] {
                    if !self.has_edge(b, c) {
                        return (true, Some(KlWitness { a, b, c, d }));
                    }
                }
            }
        }
        (false, None)
    }

    /// Vertices adjacent to every other vertex.
    pub fn universal_vertices(&self) -> Vec<usize> {
        let m = self.len();
        (0..m).filter(|&v| self.degree(v) == m - 1).collect()
    }

    /// Structural Kirby-Love test: after removing the universal vertices, the
    /// maximal cliques of the remainder fail to be disjoint iff some remaining
    /// vertex has a non-clique neighborhood within the remainder.
    pub fn has_kirby_love_structural(&self) -> bool {
        let m = self.len();
        let universal: BitVec = {
            let mut u = BitVec::zeros(m);
            for v in self.universal_vertices() {
                u.set(v, true);
            }
            u
        };
        let rest: Vec<usize> = (0..m).filter(|&v| !universal.get(v)).collect();
        for &a in &rest {
            let nbrs: Vec<usize> = self.adj[a]
                .iter_ones()
                .filter(|&v| !universal.get(v))
                .collect();
            for (bi, &b) in nbrs.iter().enumerate() {
                for &c in &nbrs[bi + 1..] {
                    if !self.has_edge(b, c) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// All maximal cliques, i.e. the measurement contexts, in canonical order.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        self.maximal_cliques_capped(DEFAULT_CLIQUE_LIMIT)
            .expect("default clique limit exceeded")
    }

    /// Bron-Kerbosch with pivoting. The pivot maximizes |N(u) ∩ P| over
    /// P ∪ X with lowest-index tie-breaking, so enumeration order is
    /// deterministic; the result is additionally sorted.
    pub fn maximal_cliques_capped(&self, limit: usize) -> Result<Vec<Vec<usize>>, GraphError> {
        let m = self.len();
        let mut cliques = Vec::new();
        if m == 0 {
            return Ok(cliques);
        }
        let mut p = BitVec::zeros(m);
        for v in 0..m {
            p.set(v, true);
        }
        let mut r = Vec::new();
        self.bron_kerbosch(&mut r, p, BitVec::zeros(m), &mut cliques, limit)?;
        cliques.sort();
        Ok(cliques)
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<usize>,
        p: BitVec,
        x: BitVec,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<(), GraphError> {
        if p.is_zero() && x.is_zero() {
            if out.len() == limit {
                return Err(GraphError::CliqueLimitExceeded(limit));
            }
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return Ok(());
        }
        let pivot = p
            .iter_ones()
            .chain(x.iter_ones())
            .max_by_key(|&u| (self.adj[u].and_weight(&p), std::cmp::Reverse(u)))
            .expect("P ∪ X nonempty");
        let candidates: Vec<usize> = p
            .iter_ones()
            .filter(|&v| !self.adj[pivot].get(v))
            .collect();
        let mut p = p;
        let mut x = x;
        for v in candidates {
            let mut p_next = p.clone();
            let mut x_next = x.clone();
            for u in 0..self.len() {
                if !self.adj[v].get(u) {
                    p_next.set(u, false);
                    x_next.set(u, false);
                }
            }
            p_next.set(v, false);
            x_next.set(v, false);
            r.push(v);
            self.bron_kerbosch(r, p_next, x_next, out, limit)?;
            r.pop();
            p.set(v, false);
            x.set(v, true);
        }
        Ok(())
    }

    /// DOT rendering with Pauli labels. A Kirby-Love witness, when given,
    /// highlights its vertices and the two witnessing edges.
    pub fn to_dot(&self, witness: Option<&KlWitness>) -> String {
        let mut out = String::from("graph compatibility {\n");
        let highlighted: Vec<usize> = witness
            .map(|w| vec![w.a, w.b, w.c, w.d])
            .unwrap_or_default();
        for (i, label) in self.labels.iter().enumerate() {
            let attr = if highlighted.contains(&i) {
                ", color=red, penwidth=2"
            } else {
                ""
            };
            out.push_str(&format!("  v{} [label=\"{}\"{}];\n", i, label, attr));
        }
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.has_edge(i, j) {
                    let emphasized = witness.is_some_and(|w| {
                        (i.min(j), i.max(j)) == (w.a.min(w.b), w.a.max(w.b))
                            || (i.min(j), i.max(j)) == (w.a.min(w.c), w.a.max(w.c))
                    });
                    let attr = if emphasized { " [color=red, penwidth=2]" } else { "" };
                    out.push_str(&format!("  v{i} -- v{j}{attr};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p(s: &str, n: usize) -> PauliOperator {
        PauliOperator::parse(s, n).unwrap()
    }

    fn square_set() -> Vec<PauliOperator> {
        vec![p("X0", 2), p("X1", 2), p("Z0", 2), p("Z1", 2)]
    }

    #[test]
    fn square_graph_is_a_four_cycle() {
        let g = build_graph(&square_set());
        // Edges between commuting pairs only: X1-X2, X1-Z2, Z1-X2, Z1-Z2.
        assert!(g.has_edge(0, 1) && g.has_edge(0, 3) && g.has_edge(2, 1) && g.has_edge(2, 3));
        assert!(!g.has_edge(0, 2) && !g.has_edge(1, 3));
        assert!(g.universal_vertices().is_empty());
    }

    #[test]
    fn square_graph_has_kirby_love() {
        let g = build_graph(&square_set());
        let (kl, witness) = g.has_kirby_love();
        assert!(kl);
        let w = witness.unwrap();
        assert!(g.has_edge(w.a, w.b) && g.has_edge(w.a, w.c));
        assert!(!g.has_edge(w.a, w.d) && !g.has_edge(w.b, w.c));
        assert!(g.has_kirby_love_structural());
    }

    #[test]
    fn complete_graph_is_not_kirby_love() {
        let ops = vec![p("Z0", 3), p("Z1", 3), p("Z2", 3), p("Z0*Z1", 3)];
        let g = build_graph(&ops);
        assert!(!g.has_kirby_love().0);
        assert!(!g.has_kirby_love_structural());
        assert_eq!(g.universal_vertices(), vec![0, 1, 2, 3]);
        assert_eq!(g.maximal_cliques(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn isolated_pair_has_no_edges() {
        let g = build_graph(&[p("X0", 1), p("Z0", 1)]);
        assert!(!g.has_edge(0, 1));
        assert_eq!(g.maximal_cliques(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn star_k13_is_not_kirby_love() {
        // Center 0 joined to three pairwise nonadjacent leaves.
        let g = CompatibilityGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(g.has_kirby_love().0 == g.has_kirby_love_structural());
        // The center's neighborhood is not a clique, but the center is also
        // not universal? It is universal here, so no KL.
        assert!(!g.has_kirby_love().0);
    }

    #[test]
    fn joined_cliques_structure_is_not_kirby_love() {
        // Universal set U = {0}, cliques {1,2} and {3,4} fully joined to U
        // with no cross edges: the universal-hub shape.
        let g = CompatibilityGraph::from_edges(
            5,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)],
        );
        assert!(!g.has_kirby_love().0);
        assert!(!g.has_kirby_love_structural());
        assert_eq!(g.universal_vertices(), vec![0]);
        assert_eq!(g.maximal_cliques(), vec![vec![0, 1, 2], vec![0, 3, 4]]);
    }

    #[test]
    fn square_cliques_are_the_four_contexts() {
        let g = build_graph(&square_set());
        assert_eq!(
            g.maximal_cliques(),
            vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn clique_limit_is_enforced() {
        let g = CompatibilityGraph::from_edges(6, &[]);
        assert_eq!(
            g.maximal_cliques_capped(3),
            Err(GraphError::CliqueLimitExceeded(3))
        );
    }

    fn random_graph(rng: &mut StdRng, max_vertices: usize) -> CompatibilityGraph {
        let n = rng.gen_range(1..=max_vertices);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.5) {
                    edges.push((i, j));
                }
            }
        }
        CompatibilityGraph::from_edges(n, &edges)
    }

    fn brute_force_cliques(g: &CompatibilityGraph) -> Vec<Vec<usize>> {
        let m = g.len();
        assert!(m <= 16);
        let is_clique = |mask: u32| {
            let vs: Vec<usize> = (0..m).filter(|&v| mask >> v & 1 == 1).collect();
            vs.iter()
                .enumerate()
                .all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
        };
        let mut cliques = Vec::new();
        for mask in 1u32..(1 << m) {
            if !is_clique(mask) {
                continue;
            }
            let maximal = (0..m)
                .filter(|&v| mask >> v & 1 == 0)
                .all(|v| !is_clique(mask | 1 << v));
            if maximal {
                cliques.push((0..m).filter(|&v| mask >> v & 1 == 1).collect());
            }
        }
        cliques.sort();
        cliques
    }

    #[test]
    fn bron_kerbosch_matches_brute_force_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let g = random_graph(&mut rng, 9);
            assert_eq!(g.maximal_cliques(), brute_force_cliques(&g));
        }
    }

    #[test]
    fn structural_test_agrees_with_direct_test_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let g = random_graph(&mut rng, 12);
            assert_eq!(g.has_kirby_love().0, g.has_kirby_love_structural());
        }
    }

    #[test]
    fn cliques_disjoint_iff_every_neighborhood_is_a_clique() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..300 {
            let g = random_graph(&mut rng, 10);
            let cliques = g.maximal_cliques();
            let disjoint = cliques.iter().enumerate().all(|(i, a)| {
                cliques[i + 1..]
                    .iter()
                    .all(|b| a.iter().all(|v| !b.contains(v)))
            });
            let local = (0..g.len()).all(|a| {
                let nbrs: Vec<usize> = g.adj[a].iter_ones().collect();
                nbrs.iter()
                    .enumerate()
                    .all(|(i, &b)| nbrs[i + 1..].iter().all(|&c| g.has_edge(b, c)))
            });
            assert_eq!(disjoint, local);
        }
    }

    #[test]
    fn cliques_decompose_as_universal_set_plus_remainder_cliques() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..200 {
            let g = random_graph(&mut rng, 10);
            let universal = g.universal_vertices();
            let rest: Vec<usize> = (0..g.len()).filter(|v| !universal.contains(v)).collect();
            // Induced subgraph on the remainder.
            let index_of = |v: usize| rest.iter().position(|&w| w == v).unwrap();
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for &a in &rest {
                for &b in &rest {
                    if b > a && g.has_edge(a, b) {
                        edges.push((index_of(a), index_of(b)));
                    }
                }
            }
            let induced = CompatibilityGraph::from_edges(rest.len(), &edges);
            let mut expected: Vec<Vec<usize>> = if rest.is_empty() {
                vec![universal.clone()]
            } else {
                induced
                    .maximal_cliques()
                    .into_iter()
                    .map(|c| {
                        let mut full: Vec<usize> =
                            c.into_iter().map(|i| rest[i]).chain(universal.clone()).collect();
                        full.sort_unstable();
                        full
                    })
                    .collect()
            };
            expected.sort();
            assert_eq!(g.maximal_cliques(), expected);
        }
    }

    #[test]
    fn dot_output_mentions_labels_and_witness() {
        let g = build_graph(&square_set());
        let (_, w) = g.has_kirby_love();
        let dot = g.to_dot(w.as_ref());
        assert!(dot.contains("label=\"+XI\""));
        assert!(dot.contains("color=red"));
    }
}

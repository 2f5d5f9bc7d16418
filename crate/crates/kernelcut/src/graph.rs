//! Graph and labeled-multigraph data model.
//!
//! Vertices are dense integers `0..n`. Undirected edges are normalized to
//! `(min, max)` and the edge list is kept sorted, so equal graphs compare
//! equal and serialization is canonical. Multigraph edge identity is
//! `(u, v, occurrence-index)` in that sorted order, which is what labels
//! attach to.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub directed: bool,
    pub multigraph: bool,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(
        n: usize,
        directed: bool,
        multigraph: bool,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        for e in edges.iter_mut() {
            if e.0 >= n || e.1 >= n {
                return Err(Error::Parse(format!(
                    "vertex out of range: edge ({}, {}) with n = {}",
                    e.0, e.1, n
                )));
            }
            if e.0 == e.1 {
                return Err(Error::Parse(format!("self-loop at vertex {}", e.0)));
            }
            if !directed && e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        if !multigraph {
            for w in edges.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::Parse(format!(
                        "duplicate edge ({}, {}) without multigraph flag",
                        w[0].0, w[0].1
                    )));
                }
            }
        }
        Ok(Graph { n, directed, multigraph, edges })
    }

    pub fn simple_undirected(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Graph::new(n, false, false, edges)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = if !self.directed && u > v { (v, u) } else { (u, v) };
        self.edges.binary_search(&key).is_ok()
    }

    /// Undirected adjacency (for digraphs: neighbors in the underlying graph,
    /// deduplicated). Sorted ascending per vertex.
    pub fn adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    pub fn out_adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            if !self.directed {
                adj[v].push(u);
            }
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    pub fn in_adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[v].push(u);
            if !self.directed {
                adj[u].push(v);
            }
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    /// Degrees in the underlying undirected simple graph.
    pub fn degrees(&self) -> Vec<usize> {
        self.adj().iter().map(|a| a.len()).collect()
    }

    /// Underlying undirected simple graph (orientation dropped, parallels merged).
    pub fn underlying_undirected(&self) -> Graph {
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| if u > v { (v, u) } else { (u, v) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Graph { n: self.n, directed: false, multigraph: false, edges }
    }

    /// Induced subgraph on `keep` (ascending order enforced). Returns the
    /// subgraph and the `new -> old` vertex map.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut old_to_new = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            old_to_new[old] = new;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| old_to_new[u] != usize::MAX && old_to_new[v] != usize::MAX)
            .map(|&(u, v)| (old_to_new[u], old_to_new[v]))
            .collect();
        let g = Graph::new(keep.len(), self.directed, self.multigraph, edges)
            .expect("induced subgraph of a valid graph is valid");
        (g, keep)
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let adj = self.adj();
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Plain edge-list text format: `n m` header then `u v` lines.
    /// Produces a bare simple undirected graph.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut nums = text
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad token '{t}'"))));
        let n = nums.next().ok_or_else(|| Error::Parse("missing n".into()))??;
        let m = nums.next().ok_or_else(|| Error::Parse("missing m".into()))??;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let u = nums.next().ok_or_else(|| Error::Parse("truncated edge list".into()))??;
            let v = nums.next().ok_or_else(|| Error::Parse("truncated edge list".into()))??;
            edges.push((u, v));
        }
        Graph::simple_undirected(n, edges)
    }
}

/// Multigraph whose edges carry a nonnegative integer label: the number of
/// subdivision-internal (degree-2) vertices the edge stands for. Label 0 is a
/// plain edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMultigraph {
    base: Graph,
    labels: Vec<u64>,
}

impl LabeledMultigraph {
    pub fn new(base: Graph, labels: Vec<u64>) -> Result<Self> {
        if !base.multigraph {
            return Err(Error::Parse("labeled multigraph requires the multigraph flag".into()));
        }
        if labels.len() != base.edges.len() {
            return Err(Error::Parse(format!(
                "labels length {} does not match edge count {}",
                labels.len(),
                base.edges.len()
            )));
        }
        // re-sort edges together with labels: identity is (u, v, occurrence)
        let mut pairs: Vec<((usize, usize), u64)> =
            base.edges.iter().copied().zip(labels.iter().copied()).collect();
        pairs.sort_unstable();
        let edges: Vec<(usize, usize)> = pairs.iter().map(|p| p.0).collect();
        let labels: Vec<u64> = pairs.iter().map(|p| p.1).collect();
        // expansion must be simple: at most one label-0 copy per vertex pair
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == 0 && w[1].1 == 0 {
                return Err(Error::Parse(format!(
                    "two parallel label-0 edges between {} and {}: expansion is not simple",
                    (w[0].0).0,
                    (w[0].0).1
                )));
            }
        }
        let base = Graph { edges, ..base };
        Ok(LabeledMultigraph { base, labels })
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        self.base.edges()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Number of vertices of the expansion: `n + sum(labels)`.
    pub fn expansion_size(&self) -> u64 {
        self.base.n as u64 + self.labels.iter().sum::<u64>()
    }

    /// Subdivide every edge into `label` internal vertices, producing the
    /// simple graph the multigraph stands for. Original vertices keep their
    /// ids; internal vertices are appended in edge order.
    pub fn expand(&self) -> Graph {
        let mut edges = Vec::new();
        let mut next = self.base.n;
        for (&(u, v), &label) in self.base.edges().iter().zip(self.labels.iter()) {
            if label == 0 {
                edges.push((u, v));
            } else {
                let mut prev = u;
                for _ in 0..label {
                    edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
                edges.push((prev, v));
            }
        }
        Graph::simple_undirected(next, edges).expect("expansion of a valid labeled multigraph")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_and_loops() {
        assert!(Graph::simple_undirected(3, vec![(0, 5)]).is_err());
        assert!(Graph::simple_undirected(3, vec![(1, 1)]).is_err());
        assert!(Graph::simple_undirected(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, false, true, vec![(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn normalizes_undirected_edges() {
        let g = Graph::simple_undirected(3, vec![(2, 0), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        assert!(g.has_edge(2, 0));
        assert!(!g.has_edge(1, 2));
    }

    #[test]
    fn labeled_expansion() {
        let base = Graph::new(2, false, true, vec![(0, 1), (0, 1)]).unwrap();
        let m = LabeledMultigraph::new(base, vec![3, 2]).unwrap();
        assert_eq!(m.expansion_size(), 7);
        let ex = m.expand();
        assert_eq!(ex.n, 7);
        assert_eq!(ex.edge_count(), 7);
        // two parallel label-0 edges would collapse in the expansion
        let bad = Graph::new(2, false, true, vec![(0, 1), (0, 1)]).unwrap();
        assert!(LabeledMultigraph::new(bad, vec![0, 0]).is_err());
    }

    #[test]
    fn edge_list_format() {
        let g = Graph::parse_edge_list("3 3\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edge_count(), 3);
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
    }
}

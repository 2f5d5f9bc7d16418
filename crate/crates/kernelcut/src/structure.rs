//! Structural predicates: witness verification and the decomposition of a
//! graph into branch vertices and maximal degree-2 paths.

use crate::graph::Graph;
use crate::instance::{Witness, WitnessKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessReport {
    Holds,
    /// The polynomial necessary condition holds, but the witness is a promise
    /// that cannot be verified in polynomial time (max-leaf-bound).
    HoldsConditionally,
    Violated(String),
    /// The witness kind has no polynomial checker in this artifact
    /// (outerplanar-modulator); structural template checks apply instead.
    NotCheckable(&'static str),
}

impl WitnessReport {
    pub fn ok(&self) -> bool {
        matches!(self, WitnessReport::Holds | WitnessReport::HoldsConditionally)
    }
}

/// Verify a structural witness against a graph. Digraphs are checked against
/// their underlying undirected graph. `forbidden_pairs` is consulted only for
/// the `vc-of-H` kind.
pub fn check_structure(
    g: &Graph,
    w: &Witness,
    forbidden_pairs: &[(usize, usize)],
) -> WitnessReport {
    let in_x = {
        let mut in_x = vec![false; g.n];
        for &v in &w.vertices {
            if v >= g.n {
                return WitnessReport::Violated(format!("witness vertex {v} out of range"));
            }
            in_x[v] = true;
        }
        in_x
    };
    match w.kind {
        WitnessKind::VertexCover => {
            for &(u, v) in g.edges() {
                if !in_x[u] && !in_x[v] {
                    return WitnessReport::Violated(format!("edge ({u}, {v}) is uncovered"));
                }
            }
            WitnessReport::Holds
        }
        WitnessKind::ClusterModulator => {
            let u = g.underlying_undirected();
            let rest: Vec<usize> = (0..g.n).filter(|&v| !in_x[v]).collect();
            let (h, map) = u.induced(&rest);
            for comp in h.connected_components() {
                for i in 0..comp.len() {
                    for j in i + 1..comp.len() {
                        if !h.has_edge(comp[i], comp[j]) {
                            return WitnessReport::Violated(format!(
                                "component of G-X containing {} is not a clique: {} and {} not adjacent",
                                map[comp[i]], map[comp[i]], map[comp[j]]
                            ));
                        }
                    }
                }
            }
            WitnessReport::Holds
        }
        WitnessKind::BipathsModulator => {
            let u = g.underlying_undirected();
            let rest: Vec<usize> = (0..g.n).filter(|&v| !in_x[v]).collect();
            let (h, map) = u.induced(&rest);
            let deg = h.degrees();
            for comp in h.connected_components() {
                let mut ends = 0;
                for &v in &comp {
                    if deg[v] > 2 {
                        return WitnessReport::Violated(format!(
                            "vertex {} has degree {} in G-X",
                            map[v], deg[v]
                        ));
                    }
                    if deg[v] <= 1 {
                        ends += 1;
                    }
                }
                // all degrees <= 2: a component is a path iff it is not a cycle
                if comp.len() >= 3 && ends == 0 {
                    return WitnessReport::Violated(format!(
                        "component of G-X containing {} is a cycle, not a path",
                        map[comp[0]]
                    ));
                }
            }
            WitnessReport::Holds
        }
        WitnessKind::VcOfH => {
            for &(u, v) in forbidden_pairs {
                if !in_x.get(u).copied().unwrap_or(false) && !in_x.get(v).copied().unwrap_or(false)
                {
                    return WitnessReport::Violated(format!(
                        "forbidden pair ({u}, {v}) is uncovered"
                    ));
                }
            }
            WitnessReport::Holds
        }
        WitnessKind::MaxLeafBound => {
            // necessary condition only: at most 4*ell - 2 vertices of degree >= 3
            let branch = g
                .underlying_undirected()
                .degrees()
                .iter()
                .filter(|&&d| d >= 3)
                .count();
            let bound = 4 * w.ell - 2;
            if branch > bound {
                WitnessReport::Violated(format!(
                    "{branch} vertices of degree >= 3 exceed 4*ell-2 = {bound}"
                ))
            } else {
                WitnessReport::HoldsConditionally
            }
        }
        WitnessKind::OuterplanarModulator => {
            WitnessReport::NotCheckable("general outerplanarity recognition is out of scope")
        }
    }
}

/// A maximal path of degree-2 vertices between two branch anchors. The
/// anchors may coincide (a cycle attached at a single branch vertex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbPath {
    pub anchors: (usize, usize),
    pub internal: Vec<usize>,
}

/// A maximal path of degree-2 vertices from a branch anchor to a degree-<=1
/// leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantPath {
    pub anchor: usize,
    pub internal: Vec<usize>,
    pub leaf: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Degree2Decomposition {
    /// Vertices of degree >= 3.
    pub branch: Vec<usize>,
    pub bb_paths: Vec<BbPath>,
    pub pendants: Vec<PendantPath>,
    /// Components that are bare paths (no branch vertex), listed end to end.
    pub isolated_paths: Vec<Vec<usize>>,
    /// Components that are bare cycles of degree-2 vertices, in cyclic order.
    pub isolated_cycles: Vec<Vec<usize>>,
    /// Degree-0 vertices.
    pub isolated_vertices: Vec<usize>,
}

/// Decompose an undirected simple graph into branch vertices and the maximal
/// degree-2 structures between them. Direct branch-branch edges are reported
/// as paths with no internal vertices.
pub fn degree2_path_decomposition(g: &Graph) -> Degree2Decomposition {
    assert!(!g.directed && !g.multigraph, "decomposition expects a simple undirected graph");
    let adj = g.adj();
    let deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let branch: Vec<usize> = (0..g.n).filter(|&v| deg[v] >= 3).collect();
    let is_branch: Vec<bool> = (0..g.n).map(|v| deg[v] >= 3).collect();

    let mut out = Degree2Decomposition { branch, ..Default::default() };
    let mut edge_used = std::collections::HashSet::new();
    let mut visited2 = vec![false; g.n];

    // walk away from each branch vertex
    for &b in out.branch.clone().iter() {
        for &w0 in &adj[b] {
            if edge_used.contains(&(b, w0)) {
                continue;
            }
            edge_used.insert((b, w0));
            edge_used.insert((w0, b));
            if is_branch[w0] {
                // direct anchor-anchor adjacency; report once with sorted anchors
                if b <= w0 {
                    out.bb_paths.push(BbPath { anchors: (b, w0), internal: vec![] });
                } else {
                    out.bb_paths.push(BbPath { anchors: (w0, b), internal: vec![] });
                }
                continue;
            }
            if deg[w0] <= 1 {
                out.pendants.push(PendantPath { anchor: b, internal: vec![], leaf: w0 });
                continue;
            }
            // chain of degree-2 vertices
            let mut internal = vec![w0];
            visited2[w0] = true;
            let mut prev = b;
            let mut cur = w0;
            loop {
                let next = *adj[cur].iter().find(|&&x| x != prev).expect("degree-2 vertex");
                edge_used.insert((cur, next));
                edge_used.insert((next, cur));
                if is_branch[next] {
                    let (a0, a1) = if b <= next { (b, next) } else { (next, b) };
                    let mut internal = internal;
                    if a0 != b {
                        internal.reverse();
                    }
                    out.bb_paths.push(BbPath { anchors: (a0, a1), internal });
                    break;
                }
                if deg[next] <= 1 {
                    out.pendants.push(PendantPath { anchor: b, internal, leaf: next });
                    break;
                }
                visited2[next] = true;
                internal.push(next);
                prev = cur;
                cur = next;
            }
        }
    }

    // leftover components contain no branch vertices: bare paths, cycles, or
    // isolated vertices
    let mut seen = vec![false; g.n];
    for v in 0..g.n {
        seen[v] = is_branch[v] || visited2[v];
    }
    // leaves attached to walked chains are covered; mark leaves of pendants
    for p in &out.pendants {
        seen[p.leaf] = true;
    }
    for s in 0..g.n {
        if seen[s] {
            continue;
        }
        if deg[s] == 0 {
            out.isolated_vertices.push(s);
            seen[s] = true;
            continue;
        }
        // collect the component (all degrees 1 or 2 here)
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
        let ends: Vec<usize> = comp.iter().copied().filter(|&v| deg[v] == 1).collect();
        if ends.is_empty() {
            // bare cycle: list in cyclic order from the smallest vertex
            let start = *comp.iter().min().unwrap();
            let mut order = vec![start];
            let mut prev = start;
            let mut cur = *adj[start].iter().min().unwrap();
            while cur != start {
                order.push(cur);
                let next = *adj[cur].iter().find(|&&x| x != prev).unwrap();
                prev = cur;
                cur = next;
            }
            out.isolated_cycles.push(order);
        } else {
            // bare path: walk from the smaller end
            let start = *ends.iter().min().unwrap();
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            while deg[cur] == 2 || cur == start {
                let next = adj[cur].iter().copied().find(|&x| x != prev);
                match next {
                    Some(nx) => {
                        order.push(nx);
                        prev = cur;
                        cur = nx;
                        if deg[nx] == 1 {
                            break;
                        }
                    }
                    None => break, // single edge component
                }
            }
            out.isolated_paths.push(order);
        }
    }
    out
}

impl Degree2Decomposition {
    /// Accounting identity: every vertex is a branch vertex, an internal
    /// vertex of exactly one reported structure, or a degree-<=1 vertex.
    pub fn accounted_vertices(&self) -> usize {
        let internals: usize = self.bb_paths.iter().map(|p| p.internal.len()).sum::<usize>()
            + self.pendants.iter().map(|p| p.internal.len()).sum::<usize>()
            + self
                .isolated_paths
                .iter()
                .map(|p| p.len().saturating_sub(2))
                .sum::<usize>()
            + self.isolated_cycles.iter().map(|c| c.len()).sum::<usize>();
        let leaves = self.pendants.len()
            + self.isolated_paths.iter().map(|_| 2).sum::<usize>()
            + self.isolated_vertices.len();
        self.branch.len() + internals + leaves
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::{Witness, WitnessKind};

    fn cycle(n: usize) -> Graph {
        Graph::simple_undirected(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::simple_undirected(leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).unwrap()
    }

    #[test]
    fn vertex_cover_on_c5() {
        let g = cycle(5);
        let w = Witness::modulator(WitnessKind::VertexCover, vec![0, 1, 3]).unwrap();
        assert_eq!(check_structure(&g, &w, &[]), WitnessReport::Holds);
        let bad = Witness::modulator(WitnessKind::VertexCover, vec![0, 1]).unwrap();
        assert!(matches!(check_structure(&g, &bad, &[]), WitnessReport::Violated(_)));
    }

    #[test]
    fn empty_modulator_on_two_triangles_is_cluster() {
        let g = Graph::simple_undirected(6, vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
            .unwrap();
        let w = Witness::modulator(WitnessKind::ClusterModulator, vec![]).unwrap();
        assert_eq!(check_structure(&g, &w, &[]), WitnessReport::Holds);
    }

    #[test]
    fn max_leaf_bound_is_conditional() {
        // star K_{1,9}: one branch vertex, 4*1-2 = 2 >= 1
        let g = star(9);
        let w = Witness::max_leaf(1).unwrap();
        assert_eq!(check_structure(&g, &w, &[]), WitnessReport::HoldsConditionally);
        // subdivided K_{1,9} spider has 1 branch vertex too; force a violation
        // with many branch vertices instead: complete graph K6, ell = 1
        let k6 = Graph::simple_undirected(
            6,
            (0..6).flat_map(|i| ((i + 1)..6).map(move |j| (i, j))).collect(),
        )
        .unwrap();
        assert!(matches!(check_structure(&k6, &w, &[]), WitnessReport::Violated(_)));
    }

    #[test]
    fn decomposition_cycle_case() {
        let d = degree2_path_decomposition(&cycle(6));
        assert!(d.branch.is_empty());
        assert_eq!(d.isolated_cycles.len(), 1);
        assert_eq!(d.isolated_cycles[0].len(), 6);
        assert_eq!(d.accounted_vertices(), 6);
    }

    #[test]
    fn decomposition_k4_subdivided() {
        // K4 on 0..4, edge (0,1) subdivided three times through 4,5,6
        let g = Graph::simple_undirected(
            7,
            vec![(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (4, 5), (5, 6), (6, 1)],
        )
        .unwrap();
        let d = degree2_path_decomposition(&g);
        assert_eq!(d.branch, vec![0, 1, 2, 3]);
        let with_internals: Vec<&BbPath> =
            d.bb_paths.iter().filter(|p| !p.internal.is_empty()).collect();
        assert_eq!(with_internals.len(), 1);
        assert_eq!(with_internals[0].anchors, (0, 1));
        assert_eq!(with_internals[0].internal.len(), 3);
        assert_eq!(d.bb_paths.len(), 6); // five label-0 adjacencies + the subdivided one
        assert_eq!(d.accounted_vertices(), 7);
    }

    #[test]
    fn decomposition_star_case() {
        let d = degree2_path_decomposition(&star(4));
        assert_eq!(d.branch, vec![0]);
        assert_eq!(d.pendants.len(), 4);
        assert!(d.pendants.iter().all(|p| p.internal.is_empty()));
        assert_eq!(d.accounted_vertices(), 5);
    }

    #[test]
    fn decomposition_loop_path() {
        // bowtie: two triangles sharing vertex 0
        let g = Graph::simple_undirected(5, vec![(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
            .unwrap();
        let d = degree2_path_decomposition(&g);
        assert_eq!(d.branch, vec![0]);
        assert_eq!(d.bb_paths.len(), 2);
        for p in &d.bb_paths {
            assert_eq!(p.anchors, (0, 0));
            assert_eq!(p.internal.len(), 2);
        }
        assert_eq!(d.accounted_vertices(), 5);
    }
}

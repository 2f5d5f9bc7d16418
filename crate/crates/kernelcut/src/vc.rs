//! Kernels for path and cycle problems parameterized by a given vertex
//! cover: the bipartite connection-graph marking rule, its directed and
//! disjoint variants, and the trivial linear bound for Hamiltonian problems.

use crate::graph::Graph;
use crate::instance::{
    canonical_dummy, Instance, KernelResult, KernelStatus, Problem, TraceEvent, Witness,
    WitnessKind,
};
use crate::matching::{maximum_matching, BipartiteGraph};
use crate::oracle::{has_cycle_at_least_small_k, has_path_at_least_small_k};
use crate::structure::check_structure;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectionMode {
    /// One right vertex per unordered pair {p, q} of cover vertices.
    Unordered,
    /// One right vertex per ordered pair (u, w); used for digraphs.
    Ordered,
    /// Two right vertices per unordered pair, so a pair can receive two
    /// private neighbors (preserves 4-cycles for DISJOINT CYCLES).
    Duplicated,
}

/// Bipartite connection graph between the independent set and the cover
/// pairs it can link up.
pub struct ConnectionGraph {
    pub bip: BipartiteGraph,
    pub mode: ConnectionMode,
    /// left index -> original vertex id (the independent set, ascending).
    pub left_vertices: Vec<usize>,
    /// right index -> the cover pair it represents.
    pub pair_index: Vec<(usize, usize)>,
}

/// Build the connection graph `H(G, k, X)`. `x` must be a vertex cover of
/// the underlying undirected graph.
pub fn build_connection_graph(
    g: &Graph,
    x: &[usize],
    mode: ConnectionMode,
) -> Result<ConnectionGraph> {
    let w = Witness::modulator(WitnessKind::VertexCover, x.to_vec())?;
    if !check_structure(&g.underlying_undirected(), &w, &[]).ok() {
        return Err(Error::Witness("X is not a vertex cover".into()));
    }
    let x = &w.vertices; // sorted, deduplicated
    let mut in_x = vec![false; g.n];
    for &v in x {
        in_x[v] = true;
    }
    let left_vertices: Vec<usize> = (0..g.n).filter(|&v| !in_x[v]).collect();

    let mut pair_index = Vec::new();
    match mode {
        ConnectionMode::Unordered => {
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    pair_index.push((x[i], x[j]));
                }
            }
        }
        ConnectionMode::Ordered => {
            for &u in x {
                for &w in x {
                    if u != w {
                        pair_index.push((u, w));
                    }
                }
            }
        }
        ConnectionMode::Duplicated => {
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    pair_index.push((x[i], x[j]));
                    pair_index.push((x[i], x[j]));
                }
            }
        }
    }

    let out = g.out_adj();
    let inn = g.in_adj();
    let mut edges = Vec::new();
    for (li, &v) in left_vertices.iter().enumerate() {
        for (ri, &(p, q)) in pair_index.iter().enumerate() {
            let connects = match mode {
                // v adjacent to both p and q
                ConnectionMode::Unordered | ConnectionMode::Duplicated => {
                    out[v].binary_search(&p).is_ok() && out[v].binary_search(&q).is_ok()
                }
                // arcs (p, v) and (v, q) exist
                ConnectionMode::Ordered => {
                    inn[v].binary_search(&p).is_ok() && out[v].binary_search(&q).is_ok()
                }
            };
            if connects {
                edges.push((li, ri));
            }
        }
    }
    let bip = BipartiteGraph::new(left_vertices.len(), pair_index.len(), &edges)?;
    Ok(ConnectionGraph { bip, mode, left_vertices, pair_index })
}

/// Expected right-side size for a cover of size `ell`.
pub fn right_side_size(ell: usize, mode: ConnectionMode) -> usize {
    match mode {
        ConnectionMode::Unordered => ell * ell.saturating_sub(1) / 2,
        ConnectionMode::Ordered | ConnectionMode::Duplicated => ell * ell.saturating_sub(1),
    }
}

/// Kernel vertex bound after the marking rule.
pub fn vc_kernel_bound(problem: Problem, directed: bool, ell: usize) -> usize {
    let c2 = ell * ell.saturating_sub(1) / 2;
    match problem {
        Problem::LongCycle | Problem::LongPath => {
            if directed {
                ell + ell * ell.saturating_sub(1)
            } else {
                ell + c2
            }
        }
        Problem::DisjointCycles => ell + 2 * c2,
        Problem::DisjointPaths => ell + c2,
        _ => unreachable!("no matching-based vc kernel for {problem:?}"),
    }
}

fn witness_cover(inst: &Instance) -> Result<Vec<usize>> {
    if inst.witness.kind != WitnessKind::VertexCover {
        return Err(Error::Witness(format!(
            "vc kernel requires a vertex-cover witness, got {:?}",
            inst.witness.kind
        )));
    }
    Ok(inst.witness.vertices.clone())
}

/// Keep only `keep` (sorted ascending), remapping graph, witness, pairs and
/// endpoints. Returns the reduced instance and the trace event.
fn restrict_instance(inst: &Instance, keep: &[usize], rule: &str) -> (Instance, TraceEvent) {
    let (graph, new_to_old) = inst.graph.induced(keep);
    let mut old_to_new = vec![usize::MAX; inst.graph.n];
    for (new, &old) in new_to_old.iter().enumerate() {
        old_to_new[old] = new;
    }
    let remap_v = |v: usize| {
        debug_assert!(old_to_new[v] != usize::MAX, "kept vertex lost in remap");
        old_to_new[v]
    };
    let witness = Witness::new(
        inst.witness.kind,
        inst.witness.vertices.iter().map(|&v| remap_v(v)).collect(),
        inst.witness.ell,
    )
    .expect("witness survives restriction");
    let pairs = inst
        .pairs
        .as_ref()
        .map(|ps| ps.iter().map(|&(a, b)| (remap_v(a), remap_v(b))).collect());
    let removed: Vec<usize> = (0..inst.graph.n).filter(|&v| old_to_new[v] == usize::MAX).collect();
    let event = TraceEvent {
        rule: rule.to_string(),
        removed,
        remap: Some(new_to_old),
        added_edges: Vec::new(),
        note: None,
    };
    let out = Instance {
        problem: inst.problem,
        graph,
        labels: None,
        k: inst.k,
        pairs,
        s: inst.s.map(remap_v),
        t: inst.t.map(remap_v),
        witness,
        stand_ins: None,
    };
    (out, event)
}

fn solved(inst: &Instance, yes: bool, trace: Vec<TraceEvent>) -> KernelResult {
    let status = if yes { KernelStatus::SolvedYes } else { KernelStatus::SolvedNo };
    let dummy = canonical_dummy(inst.problem, yes, inst.witness.kind, inst.graph.directed);
    KernelResult::finish(status, inst, dummy, trace)
}

/// Rule-1 style kernelization for LONG CYCLE, LONG PATH, DISJOINT PATHS and
/// DISJOINT CYCLES parameterized by a vertex cover.
pub fn kernelize_vc(inst: &Instance) -> Result<KernelResult> {
    let x = witness_cover(inst)?;
    match inst.problem {
        Problem::LongCycle => kernelize_long_cycle_vc(inst, &x),
        Problem::LongPath => kernelize_long_path_vc(inst, &x),
        Problem::DisjointPaths => kernelize_disjoint_paths_vc(inst, &x),
        Problem::DisjointCycles => kernelize_disjoint_cycles_vc(inst, &x),
        Problem::HamiltonianCycle | Problem::HamiltonianPath => Err(Error::Unsupported(
            "hamiltonian problems use hamiltonian_vc_bound, not the matching rule".into(),
        )),
        p => Err(Error::Unsupported(format!("no vc kernel for {}", p.tag()))),
    }
}

fn kernelize_long_cycle_vc(inst: &Instance, x: &[usize]) -> Result<KernelResult> {
    let k = inst.k.unwrap();
    if k <= 4 {
        let yes = has_cycle_at_least_small_k(&inst.graph, k);
        let ev =
            TraceEvent::rule("rule1-small-k").with_note(format!("k = {k} <= 4 solved exactly"));
        return Ok(solved(inst, yes, vec![ev]));
    }
    let mode =
        if inst.graph.directed { ConnectionMode::Ordered } else { ConnectionMode::Unordered };
    let cg = build_connection_graph(&inst.graph, x, mode)?;
    let m = maximum_matching(&cg.bip);
    let mut keep: Vec<usize> = x.to_vec();
    keep.extend(m.matched_left.iter().map(|&li| cg.left_vertices[li]));
    keep.sort_unstable();
    keep.dedup();
    let (out, event) = restrict_instance(inst, &keep, "rule1");
    assert!(
        out.graph.n <= vc_kernel_bound(Problem::LongCycle, inst.graph.directed, x.len()),
        "rule 1 size bound violated"
    );
    Ok(KernelResult::finish(KernelStatus::Reduced, inst, out, vec![event]))
}

fn kernelize_long_path_vc(inst: &Instance, x: &[usize]) -> Result<KernelResult> {
    let k = inst.k.unwrap();
    if k <= 3 {
        let yes = has_path_at_least_small_k(&inst.graph, k);
        let ev =
            TraceEvent::rule("rule1-small-k").with_note(format!("k = {k} <= 3 solved exactly"));
        return Ok(solved(inst, yes, vec![ev]));
    }
    // universal vertex: a k-path closes into a (k+1)-cycle through it
    let universal = inst.graph.n;
    let mut edges = inst.graph.edges().to_vec();
    for v in 0..inst.graph.n {
        edges.push((v, universal));
        if inst.graph.directed {
            edges.push((universal, v));
        }
    }
    let wrapped = Graph::new(inst.graph.n + 1, inst.graph.directed, false, edges)?;
    let mut x_wrapped = x.to_vec();
    x_wrapped.push(universal);
    let mode =
        if inst.graph.directed { ConnectionMode::Ordered } else { ConnectionMode::Unordered };
    let cg = build_connection_graph(&wrapped, &x_wrapped, mode)?;
    let m = maximum_matching(&cg.bip);
    let mut keep: Vec<usize> = x.to_vec();
    keep.extend(m.matched_left.iter().map(|&li| cg.left_vertices[li]));
    keep.sort_unstable();
    keep.dedup();
    // the universal vertex is dropped again; the kept set lives in G
    let (out, mut event) = restrict_instance(inst, &keep, "rule1-universal-wrap");
    event.note = Some("marked via a universal vertex and target k+1".into());
    assert!(
        out.graph.n <= vc_kernel_bound(Problem::LongPath, inst.graph.directed, x.len() + 1),
        "long-path size bound violated"
    );
    Ok(KernelResult::finish(KernelStatus::Reduced, inst, out, vec![event]))
}

fn kernelize_disjoint_paths_vc(inst: &Instance, x: &[usize]) -> Result<KernelResult> {
    if inst.graph.directed {
        return Err(Error::Unsupported("disjoint-paths vc kernel is undirected".into()));
    }
    let pairs = inst.pairs.clone().unwrap();
    let ell = x.len();
    if pairs.len() > ell {
        let ev = TraceEvent::rule("rule1-too-many-requests")
            .with_note(format!("{} requests exceed |X| = {ell}", pairs.len()));
        return Ok(solved(inst, false, vec![ev]));
    }
    // move terminals into the cover and add edges between different pairs
    let mut x_big = x.to_vec();
    for &(s, t) in &pairs {
        x_big.push(s);
        x_big.push(t);
    }
    x_big.sort_unstable();
    x_big.dedup();
    let mut added = Vec::new();
    let mut edges = inst.graph.edges().to_vec();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            for &a in &[pairs[i].0, pairs[i].1] {
                for &b in &[pairs[j].0, pairs[j].1] {
                    if !inst.graph.has_edge(a, b) {
                        edges.push((a.min(b), a.max(b)));
                        added.push((a.min(b), a.max(b)));
                    }
                }
            }
        }
    }
    added.sort_unstable();
    added.dedup();
    edges.sort_unstable();
    edges.dedup();
    let augmented = Graph::new(inst.graph.n, false, false, edges)?;
    let cg = build_connection_graph(&augmented, &x_big, ConnectionMode::Unordered)?;
    let m = maximum_matching(&cg.bip);
    let mut keep: Vec<usize> = x_big.clone();
    keep.extend(m.matched_left.iter().map(|&li| cg.left_vertices[li]));
    keep.sort_unstable();
    keep.dedup();
    // output keeps the enlarged cover and the added edges
    let aug_inst = Instance {
        graph: augmented,
        witness: Witness::modulator(WitnessKind::VertexCover, x_big.clone())?,
        ..inst.clone()
    };
    let (out, mut event) = restrict_instance(&aug_inst, &keep, "rule1-disjoint-paths");
    event.added_edges = added;
    event.note = Some(format!(
        "terminals folded into the cover (|X'| = {}), cross-pair edges added",
        x_big.len()
    ));
    assert!(x_big.len() <= 3 * ell.max(1), "cover at most triples");
    assert!(
        out.graph.n <= vc_kernel_bound(Problem::DisjointPaths, false, x_big.len()),
        "disjoint-paths size bound violated"
    );
    Ok(KernelResult::finish(KernelStatus::Reduced, inst, out, vec![event]))
}

fn kernelize_disjoint_cycles_vc(inst: &Instance, x: &[usize]) -> Result<KernelResult> {
    if inst.graph.directed {
        return Err(Error::Unsupported("disjoint-cycles vc kernel is undirected".into()));
    }
    let cg = build_connection_graph(&inst.graph, x, ConnectionMode::Duplicated)?;
    let m = maximum_matching(&cg.bip);
    let mut keep: Vec<usize> = x.to_vec();
    keep.extend(m.matched_left.iter().map(|&li| cg.left_vertices[li]));
    keep.sort_unstable();
    keep.dedup();
    let (out, event) = restrict_instance(inst, &keep, "rule1-disjoint-cycles");
    assert!(
        out.graph.n <= vc_kernel_bound(Problem::DisjointCycles, false, x.len()),
        "disjoint-cycles size bound violated"
    );
    Ok(KernelResult::finish(KernelStatus::Reduced, inst, out, vec![event]))
}

/// The trivial linear kernel for HAMILTONIAN CYCLE / PATH parameterized by a
/// vertex cover: independent-set vertices are never adjacent on the walk, so
/// any nontrivial instance has n <= 2*ell + 1.
pub fn hamiltonian_vc_bound(inst: &Instance) -> Result<KernelResult> {
    let x = witness_cover(inst)?;
    if !matches!(inst.problem, Problem::HamiltonianCycle | Problem::HamiltonianPath) {
        return Err(Error::Unsupported(format!(
            "hamiltonian_vc_bound does not apply to {}",
            inst.problem.tag()
        )));
    }
    let ell = x.len();
    if inst.graph.n > 2 * ell + 1 {
        let ev = TraceEvent::rule("hamiltonian-vc-bound")
            .with_note(format!("n = {} > 2*{ell}+1", inst.graph.n));
        return Ok(solved(inst, false, vec![ev]));
    }
    let ev = TraceEvent::rule("hamiltonian-vc-bound").with_note("already a linear kernel");
    Ok(KernelResult::finish(KernelStatus::Reduced, inst, inst.clone(), vec![ev]))
}

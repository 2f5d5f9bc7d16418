//! The max-leaf-number pipeline: promise checks, contraction of degree-2
//! paths into labeled multigraphs, Held-Karp longest cycle on the contracted
//! structure, the binary-label compression kernel, the single-internal-vertex
//! squeeze, and the DISJOINT PATHS terminal reduction.

use crate::caps::Caps;
use crate::graph::{Graph, LabeledMultigraph};
use crate::instance::{
    canonical_dummy, Instance, KernelResult, KernelStatus, Problem, TraceEvent, Witness,
    WitnessKind,
};
use crate::structure::degree2_path_decomposition;
use crate::{Error, Result};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionMode {
    /// Keep, per vertex pair, only the largest-label edge, recording the best
    /// 2-vertex cycle value first. Feeds the Held-Karp solver.
    LongestOnly,
    /// Keep all parallels, flagging any pair with more than `ell` of them
    /// (the promise is then violated). Feeds the compression kernel.
    UpToEll(usize),
}

/// Result of contracting all degree-2 structure.
pub struct ContractResult {
    pub multigraph: LabeledMultigraph,
    /// new vertex id -> original vertex id.
    pub vertex_map: Vec<usize>,
    /// Lengths of cycles fully resolved during contraction: isolated
    /// degree-2 cycles and cycles attached at a single surviving vertex.
    pub candidates: Vec<u64>,
    /// Best 2-vertex cycle value extracted in longest-only mode.
    pub two_cycle_best: Option<u64>,
    /// In up-to-ell mode: the largest parallel count if it exceeds ell.
    pub parallels_over: Option<usize>,
}

/// Contract every maximal degree-2 path into one labeled edge, deleting
/// pendant paths, to a fixpoint: the resulting multigraph has minimum degree
/// three (counting parallels). Cycles that dissolve completely (isolated
/// cycles, cycles hanging off one vertex) are returned as candidate lengths.
/// Accepts a labeled multigraph as input, so contraction is idempotent.
pub fn contract_paths(g: &Graph, labels: Option<&[u64]>, mode: ContractionMode) -> ContractResult {
    assert!(!g.directed);
    let mut edges: Vec<(usize, usize, u64)> = match labels {
        Some(ls) => g.edges().iter().zip(ls).map(|(&(u, v), &l)| (u, v, l)).collect(),
        None => g.edges().iter().map(|&(u, v)| (u, v, 0)).collect(),
    };
    let mut candidates: Vec<u64> = Vec::new();

    // trim degree-<=1 vertices and suppress degree-2 vertices to fixpoint
    loop {
        let mut deg = vec![0usize; g.n];
        let mut inc: Vec<Vec<usize>> = vec![Vec::new(); g.n];
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            deg[u] += 1;
            deg[v] += 1;
            inc[u].push(i);
            inc[v].push(i);
        }
        if let Some(v) = (0..g.n).find(|&v| deg[v] == 1) {
            let e = inc[v][0];
            edges.swap_remove(e);
            continue;
        }
        if let Some(v) = (0..g.n).find(|&v| deg[v] == 2) {
            let (e1, e2) = (inc[v][0], inc[v][1]);
            let (u1, v1, l1) = edges[e1];
            let (u2, v2, l2) = edges[e2];
            let a = if u1 == v { v1 } else { u1 };
            let b = if u2 == v { v2 } else { u2 };
            // remove the higher index first so the lower stays valid
            let (hi, lo) = if e1 > e2 { (e1, e2) } else { (e2, e1) };
            edges.swap_remove(hi);
            edges.swap_remove(lo);
            if a == b {
                // the two edges close a cycle through v and a
                candidates.push(2 + l1 + l2);
            } else {
                edges.push((a.min(b), a.max(b), l1 + l2 + 1));
            }
            continue;
        }
        break;
    }

    // compact surviving vertices
    let mut live = vec![false; g.n];
    for &(u, v, _) in &edges {
        live[u] = true;
        live[v] = true;
    }
    let vertex_map: Vec<usize> = (0..g.n).filter(|&v| live[v]).collect();
    let mut old_to_new = vec![usize::MAX; g.n];
    for (new, &old) in vertex_map.iter().enumerate() {
        old_to_new[old] = new;
    }
    let mut relabeled: Vec<((usize, usize), u64)> = edges
        .iter()
        .map(|&(u, v, l)| {
            let (a, b) = (old_to_new[u], old_to_new[v]);
            ((a.min(b), a.max(b)), l)
        })
        .collect();
    relabeled.sort_unstable();

    let mut two_cycle_best = None;
    let mut parallels_over = None;
    let mut final_edges: Vec<((usize, usize), u64)> = Vec::new();
    let mut i = 0;
    while i < relabeled.len() {
        let mut j = i;
        while j < relabeled.len() && relabeled[j].0 == relabeled[i].0 {
            j += 1;
        }
        let group = &relabeled[i..j];
        match mode {
            ContractionMode::LongestOnly => {
                if group.len() >= 2 {
                    // labels are ascending within the sorted group
                    let l1 = group[group.len() - 1].1;
                    let l2 = group[group.len() - 2].1;
                    let cyc = 2 + l1 + l2;
                    two_cycle_best = Some(two_cycle_best.map_or(cyc, |b: u64| b.max(cyc)));
                }
                final_edges.push(*group.last().unwrap());
            }
            ContractionMode::UpToEll(ell) => {
                if group.len() > ell {
                    let over = parallels_over.get_or_insert(group.len());
                    *over = (*over).max(group.len());
                }
                final_edges.extend_from_slice(group);
            }
        }
        i = j;
    }
    let base = Graph::new(
        vertex_map.len(),
        false,
        true,
        final_edges.iter().map(|&((u, v), _)| (u, v)).collect(),
    )
    .expect("contracted multigraph");
    let multigraph =
        LabeledMultigraph::new(base, final_edges.iter().map(|&(_, l)| l).collect())
            .expect("contracted labels");
    ContractResult { multigraph, vertex_map, candidates, two_cycle_best, parallels_over }
}

/// Maximum cycle length (in vertices of the expansion) of a labeled
/// multigraph: Held-Karp style dynamic programming over vertex subsets for
/// cycles on three or more vertices, plus an explicit scan of the 2-vertex
/// cycles formed by parallel edges, plus the externally recorded 2-cycle
/// value. Returns 0 for acyclic inputs.
pub fn held_karp_longest_cycle(
    m: &LabeledMultigraph,
    two_cycle_best: Option<u64>,
    cap: usize,
) -> Result<u64> {
    let n = m.n();
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "held_karp_longest_cycle: {n} vertices exceed cap {cap}"
        )));
    }
    let mut best = two_cycle_best.unwrap_or(0);

    // 2-vertex cycles through parallel pairs
    let mut by_pair: HashMap<(usize, usize), Vec<u64>> = HashMap::new();
    for (&(u, v), &l) in m.edges().iter().zip(m.labels()) {
        by_pair.entry((u, v)).or_default().push(l);
    }
    for labels in by_pair.values_mut() {
        if labels.len() >= 2 {
            labels.sort_unstable();
            let cyc = 2 + labels[labels.len() - 1] + labels[labels.len() - 2];
            best = best.max(cyc);
        }
    }
    if n < 3 {
        return Ok(best);
    }

    // cycles on >= 3 vertices use at most one edge per pair: collapse to the
    // maximum label
    let neg = i64::MIN;
    let mut w = vec![vec![neg; n]; n];
    for ((u, v), labels) in &by_pair {
        let l = *labels.iter().max().unwrap() as i64;
        w[*u][*v] = w[*u][*v].max(l);
        w[*v][*u] = w[*v][*u].max(l);
    }

    // per-root DP: root = minimum vertex of the cycle
    for root in 0..n {
        let others: Vec<usize> = (root + 1..n).collect();
        let m_loc = others.len();
        if m_loc < 2 {
            break;
        }
        // dp[mask][i] = max label sum of a path root -> others[i] spanning mask
        let size = 1usize << m_loc;
        let mut dp = vec![neg; size * m_loc];
        for (i, &v) in others.iter().enumerate() {
            if w[root][v] != neg {
                dp[(1 << i) * m_loc + i] = w[root][v];
            }
        }
        for mask in 1usize..size {
            for i in 0..m_loc {
                let cur = dp[mask * m_loc + i];
                if cur == neg || mask & (1 << i) == 0 {
                    continue;
                }
                let vi = others[i];
                // close the cycle with >= 3 vertices
                if mask.count_ones() >= 2 && w[vi][root] != neg {
                    let total = (mask.count_ones() as u64 + 1)
                        + (cur + w[vi][root]) as u64;
                    best = best.max(total);
                }
                for (j, &vj) in others.iter().enumerate() {
                    if mask & (1 << j) != 0 || w[vi][vj] == neg {
                        continue;
                    }
                    let nm = mask | (1 << j);
                    let cand = cur + w[vi][vj];
                    if cand > dp[nm * m_loc + j] {
                        dp[nm * m_loc + j] = cand;
                    }
                }
            }
        }
    }
    Ok(best)
}

fn maxleaf_witness(inst: &Instance) -> Result<usize> {
    if inst.witness.kind != WitnessKind::MaxLeafBound {
        return Err(Error::Witness(format!(
            "maxleaf pipeline requires a max-leaf-bound witness, got {:?}",
            inst.witness.kind
        )));
    }
    Ok(inst.witness.ell)
}

fn solved(inst: &Instance, yes: bool, trace: Vec<TraceEvent>) -> KernelResult {
    let status = if yes { KernelStatus::SolvedYes } else { KernelStatus::SolvedNo };
    let dummy = canonical_dummy(inst.problem, yes, inst.witness.kind, inst.graph.directed);
    KernelResult::finish(status, inst, dummy, trace)
}

fn branch_count(g: &Graph) -> usize {
    g.degrees().iter().filter(|&&d| d >= 3).count()
}

/// The FPT decision procedure for LONG CYCLE under the max-leaf promise:
/// reject when the branch-vertex count already refutes the promise, contract
/// the degree-2 structure, and run the Held-Karp DP over the contracted
/// multigraph (isolated cycles are checked directly).
pub fn solve_long_cycle_maxleaf(inst: &Instance, caps: &Caps) -> Result<KernelResult> {
    let ell = maxleaf_witness(inst)?;
    if inst.problem != Problem::LongCycle {
        return Err(Error::Unsupported("solve_long_cycle_maxleaf expects long-cycle".into()));
    }
    let k = inst.k.unwrap();
    let b = branch_count(&inst.graph);
    if b > 4 * ell - 2 {
        let ev = TraceEvent::rule("maxleaf-promise-reject")
            .with_note(format!("{b} branch vertices exceed 4*ell-2 = {}", 4 * ell - 2));
        return Ok(solved(inst, false, vec![ev]));
    }
    let contracted =
        contract_paths(&inst.graph, inst.labels.as_deref(), ContractionMode::LongestOnly);
    let dp = held_karp_longest_cycle(
        &contracted.multigraph,
        contracted.two_cycle_best,
        caps.held_karp_vertices,
    )?;
    let best = contracted.candidates.iter().copied().fold(dp, u64::max);
    let yes = best >= 3 && best >= k;
    let ev = TraceEvent::rule("maxleaf-held-karp")
        .with_note(format!("longest cycle {best}, target {k}"));
    Ok(solved(inst, yes, vec![ev]))
}

/// Solver-cost threshold `T(ell)`: the Held-Karp state count on at most
/// `4*ell` vertices. Above this many vertices the solver is polynomial and
/// the kernelizer solves outright instead of compressing.
pub fn solver_threshold(ell: usize) -> u64 {
    let b = (4 * ell) as u32;
    1u64.checked_shl(b).map_or(u64::MAX, |s| s.saturating_mul((b as u64) * (b as u64)))
}

/// The binary-label compression kernel for LONG CYCLE parameterized by the
/// max-leaf promise.
pub fn kernelize_long_cycle_maxleaf(inst: &Instance, caps: &Caps) -> Result<KernelResult> {
    let ell = maxleaf_witness(inst)?;
    if inst.problem != Problem::LongCycle {
        return Err(Error::Unsupported("maxleaf kernel expects long-cycle".into()));
    }
    let k = inst.k.unwrap();
    let n_input = inst.graph.n as u64 + inst.labels.as_deref().map_or(0, |l| l.iter().sum());
    if k > n_input {
        let ev = TraceEvent::rule("maxleaf-k-exceeds-n")
            .with_note(format!("k = {k} > n = {n_input}"));
        return Ok(solved(inst, false, vec![ev]));
    }
    let b = branch_count(&inst.graph);
    if b > 4 * ell {
        let ev = TraceEvent::rule("maxleaf-branch-reject")
            .with_note(format!("{b} branch vertices exceed 4*ell = {}", 4 * ell));
        return Ok(solved(inst, false, vec![ev]));
    }
    if n_input > solver_threshold(ell) {
        // polynomial regime: solving is cheaper than compressing
        let mut res = solve_long_cycle_maxleaf(inst, caps)?;
        res.trace.insert(
            0,
            TraceEvent::rule("maxleaf-solve-outright")
                .with_note(format!("n = {n_input} exceeds T(ell) = {}", solver_threshold(ell))),
        );
        return Ok(res);
    }
    let contracted =
        contract_paths(&inst.graph, inst.labels.as_deref(), ContractionMode::UpToEll(ell));
    if let Some(over) = contracted.parallels_over {
        let ev = TraceEvent::rule("maxleaf-parallel-reject")
            .with_note(format!("{over} parallel paths between two branch vertices exceed ell = {ell}"));
        return Ok(KernelResult::finish(
            KernelStatus::PromiseViolated,
            inst,
            inst.clone(),
            vec![ev],
        ));
    }
    if let Some(&c) = contracted.candidates.iter().max() {
        if c >= 3 && c >= k {
            let ev = TraceEvent::rule("maxleaf-resolved-cycle")
                .with_note(format!("contraction exposed a cycle of length {c} >= k = {k}"));
            return Ok(solved(inst, true, vec![ev]));
        }
    }
    let m = contracted.multigraph;
    let n_out = m.expansion_size();
    if k > n_out {
        // every cycle lives in the contracted structure, so none reaches k
        let ev = TraceEvent::rule("maxleaf-k-exceeds-core")
            .with_note(format!("k = {k} > remaining expansion size {n_out}"));
        return Ok(solved(inst, false, vec![ev]));
    }
    // size audit per the compression bounds
    assert!(m.n() <= 4 * ell, "compressed multigraph exceeds 4*ell vertices");
    let label_bits = (u64::BITS - (n_input + 1).leading_zeros()) as u64;
    for &l in m.labels() {
        assert!(l <= n_input, "label exceeds input vertex count");
        let bits = (u64::BITS - l.leading_zeros()) as u64;
        assert!(l == 0 || bits <= label_bits, "label bit-length exceeds log2(n+1)");
    }
    let removed: Vec<usize> =
        (0..inst.graph.n).filter(|v| !contracted.vertex_map.contains(v)).collect();
    let event = TraceEvent {
        rule: "maxleaf-compress".into(),
        removed,
        remap: Some(contracted.vertex_map.clone()),
        added_edges: Vec::new(),
        note: Some(format!(
            "{} branch vertices, {} labeled edges",
            m.n(),
            m.edges().len()
        )),
    };
    let out = Instance {
        problem: Problem::LongCycle,
        graph: m.base().clone(),
        labels: Some(m.labels().to_vec()),
        k: Some(k),
        pairs: None,
        s: None,
        t: None,
        witness: inst.witness.clone(),
        stand_ins: None,
    };
    Ok(KernelResult::finish(KernelStatus::Reduced, inst, out, vec![event]))
}

// ---------------------------------------------------------------------------
// single-internal-vertex squeeze (HAMILTONIAN PATH, DISJOINT CYCLES)
// ---------------------------------------------------------------------------

/// Squeeze every degree-2 path down to a bounded stand-in: length is
/// irrelevant for these problems, only the connection pattern matters.
/// Hamiltonian path keeps pendants (squeezed to at most one internal vertex);
/// disjoint cycles trims everything outside the 2-core first.
pub fn reduce_degree2_single_internal(inst: &Instance) -> Result<KernelResult> {
    maxleaf_witness(inst)?;
    if !matches!(inst.problem, Problem::HamiltonianPath | Problem::DisjointCycles) {
        return Err(Error::Unsupported(format!(
            "single-internal squeeze does not apply to {}",
            inst.problem.tag()
        )));
    }
    assert!(!inst.graph.directed && inst.labels.is_none());
    let keep_pendants = inst.problem == Problem::HamiltonianPath;

    let mut g = inst.graph.clone();
    if !keep_pendants {
        // 2-core: cycles never use vertices of degree <= 1
        loop {
            let deg = g.degrees();
            let keep: Vec<usize> = (0..g.n).filter(|&v| deg[v] >= 2).collect();
            if keep.len() == g.n {
                break;
            }
            g = g.induced(&keep).0;
        }
    }
    let d = degree2_path_decomposition(&g);
    // rebuild: anchors and leaves persist, internal runs shrink
    let mut keep: Vec<usize> = d.branch.clone();
    let mut extra_edges: Vec<(usize, usize)> = Vec::new();
    let mut kept_internal: Vec<usize> = Vec::new();
    let mut chain = |run: &[usize], from: usize, to: usize, limit: usize,
                     kept: &mut Vec<usize>, edges: &mut Vec<(usize, usize)>| {
        let take = run.len().min(limit);
        let mut prev = from;
        for &v in run.iter().take(take) {
            edges.push((prev.min(v), prev.max(v)));
            kept.push(v);
            prev = v;
        }
        edges.push((prev.min(to), prev.max(to)));
    };
    for p in &d.bb_paths {
        let (a, b) = p.anchors;
        if a == b {
            // a cycle hanging off one anchor needs two internals to stay simple
            chain(&p.internal, a, b, 2, &mut kept_internal, &mut extra_edges);
        } else if p.internal.is_empty() {
            extra_edges.push((a.min(b), a.max(b)));
        } else {
            chain(&p.internal, a, b, 1, &mut kept_internal, &mut extra_edges);
        }
    }
    let mut kept_leaves: Vec<usize> = Vec::new();
    if keep_pendants {
        for p in &d.pendants {
            kept_leaves.push(p.leaf);
            let take = p.internal.len().min(1);
            let mut prev = p.anchor;
            for &v in p.internal.iter().take(take) {
                extra_edges.push((prev.min(v), prev.max(v)));
                kept_internal.push(v);
                prev = v;
            }
            extra_edges.push((prev.min(p.leaf), prev.max(p.leaf)));
        }
        for path in &d.isolated_paths {
            // ends stay, interior squeezed to one vertex
            let ends = [path[0], *path.last().unwrap()];
            kept_leaves.extend_from_slice(&ends);
            if path.len() == 2 {
                extra_edges.push((ends[0].min(ends[1]), ends[0].max(ends[1])));
            } else {
                let mid = path[1];
                kept_internal.push(mid);
                extra_edges.push((ends[0].min(mid), ends[0].max(mid)));
                extra_edges.push((mid.min(ends[1]), mid.max(ends[1])));
            }
        }
        kept_leaves.extend_from_slice(&d.isolated_vertices);
    }
    for cyc in &d.isolated_cycles {
        // C3 is the smallest faithful stand-in for a bare cycle
        let (a, b, c) = (cyc[0], cyc[1], cyc[2]);
        kept_internal.extend_from_slice(&[a, b, c]);
        extra_edges.push((a.min(b), a.max(b)));
        extra_edges.push((b.min(c), b.max(c)));
        extra_edges.push((a.min(c), a.max(c)));
    }
    keep.extend(kept_internal);
    keep.extend(kept_leaves);
    keep.sort_unstable();
    keep.dedup();

    // assemble on the kept set: anchor-anchor edges of the decomposition are
    // already in extra_edges; drop everything else
    let mut old_to_new = vec![usize::MAX; g.n];
    for (new, &old) in keep.iter().enumerate() {
        old_to_new[old] = new;
    }
    extra_edges.sort_unstable();
    extra_edges.dedup();
    let new_edges: Vec<(usize, usize)> =
        extra_edges.iter().map(|&(u, v)| (old_to_new[u], old_to_new[v])).collect();
    let graph = Graph::new(keep.len(), false, false, new_edges)?;
    let removed: Vec<usize> =
        (0..inst.graph.n).filter(|&v| v >= g.n || old_to_new[v] == usize::MAX).collect();
    let event = TraceEvent {
        rule: "degree2-squeeze".into(),
        removed,
        remap: Some(keep.clone()),
        added_edges: Vec::new(),
        note: None,
    };
    let out = Instance { graph, labels: None, stand_ins: None, ..inst.clone() };
    Ok(KernelResult::finish(KernelStatus::Reduced, inst, out, vec![event]))
}

// ---------------------------------------------------------------------------
// DISJOINT PATHS parameterized by max leaf number
// ---------------------------------------------------------------------------

struct Run {
    /// run vertices in order, excluding branch anchors but including leaf ends
    vertices: Vec<usize>,
    open_left: bool,
    open_right: bool,
    left_anchor: Option<usize>,
    right_anchor: Option<usize>,
}

/// Theorem-5 pipeline: promise checks, reduction of terminal-laden degree-2
/// paths, resolution of branchless components, and smoothing of non-terminal
/// degree-2 vertices. The output has at most `|L| + |B| + 4*ell*|B|`
/// vertices.
pub fn kernelize_disjoint_paths_maxleaf(inst: &Instance) -> Result<KernelResult> {
    let ell = maxleaf_witness(inst)?;
    if inst.problem != Problem::DisjointPaths {
        return Err(Error::Unsupported("expected a disjoint-paths instance".into()));
    }
    assert!(!inst.graph.directed && inst.labels.is_none());
    let g = inst.graph.clone();
    let deg = g.degrees();
    let leaves = (0..g.n).filter(|&v| deg[v] == 1).count();
    let branch: Vec<usize> = (0..g.n).filter(|&v| deg[v] >= 3).collect();
    let mut trace = Vec::new();
    if leaves > ell {
        let ev = TraceEvent::rule("dpml-leaf-reject")
            .with_note(format!("{leaves} leaves exceed ell = {ell}"));
        return Ok(solved(inst, false, vec![ev]));
    }
    if branch.len() > 4 * ell {
        let ev = TraceEvent::rule("dpml-branch-reject")
            .with_note(format!("{} branch vertices exceed 4*ell = {}", branch.len(), 4 * ell));
        return Ok(solved(inst, false, vec![ev]));
    }
    if let Some(&v) = branch.iter().find(|&&v| deg[v] > ell) {
        let ev = TraceEvent::rule("dpml-degree-reject")
            .with_note(format!("vertex {v} has degree {} > ell = {ell}", deg[v]));
        return Ok(solved(inst, false, vec![ev]));
    }
    let mut pairs: Vec<(usize, usize)> = inst.pairs.clone().unwrap();
    let mut partner: HashMap<usize, usize> = HashMap::new();
    for &(a, b) in &pairs {
        partner.insert(a, b);
        partner.insert(b, a);
    }
    // an isolated terminal can never reach its (distinct) partner
    if let Some((&t, _)) = partner.iter().find(|(&t, _)| deg[t] == 0) {
        let ev = TraceEvent::rule("dpml-isolated-terminal")
            .with_note(format!("terminal {t} has degree 0"));
        return Ok(solved(inst, false, vec![ev]));
    }

    let d = degree2_path_decomposition(&g);
    let mut runs: Vec<Run> = Vec::new();
    for p in &d.bb_paths {
        runs.push(Run {
            vertices: p.internal.clone(),
            open_left: true,
            open_right: true,
            left_anchor: Some(p.anchors.0),
            right_anchor: Some(p.anchors.1),
        });
    }
    for p in &d.pendants {
        let mut vs = p.internal.clone();
        vs.push(p.leaf);
        runs.push(Run {
            vertices: vs,
            open_left: true,
            open_right: false,
            left_anchor: Some(p.anchor),
            right_anchor: None,
        });
    }
    for p in &d.isolated_paths {
        runs.push(Run {
            vertices: p.clone(),
            open_left: false,
            open_right: false,
            left_anchor: None,
            right_anchor: None,
        });
    }

    // run-local terminal feasibility: interior terminals must pair up with
    // their order-neighbor on the same run
    #[derive(Default)]
    struct RunPlan {
        matched_pairs: Vec<(usize, usize)>,
        lo: usize,
        hi: usize,
        any_matched: bool,
    }
    let mut plans: Vec<RunPlan> = Vec::new();
    for run in &runs {
        let terminals: Vec<(usize, usize)> = run
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| partner.contains_key(v))
            .map(|(pos, &v)| (pos, v))
            .collect();
        let m = terminals.len();
        let mut plan = RunPlan::default();
        if m == 0 {
            plans.push(plan);
            continue;
        }
        let on_run: HashMap<usize, usize> =
            terminals.iter().enumerate().map(|(idx, &(_, v))| (v, idx)).collect();
        // closed-end runs constrain every terminal; open B-B runs only
        // constrain interiors, and only once five terminals force the layout
        let constrain_all = !run.open_left || !run.open_right;
        if m >= 5 || constrain_all {
            for (idx, &(_, v)) in terminals.iter().enumerate() {
                let p = partner[&v];
                let first_ok = idx == 0 && run.open_left;
                let last_ok = idx == m - 1 && run.open_right;
                match on_run.get(&p) {
                    Some(&pidx) => {
                        if pidx.abs_diff(idx) != 1 {
                            let ev = TraceEvent::rule("dpml-run-infeasible").with_note(format!(
                                "terminals {v} and {p} are not adjacent in run order"
                            ));
                            return Ok(solved(inst, false, vec![ev]));
                        }
                        plan.any_matched = true;
                    }
                    None => {
                        if !(first_ok || last_ok) {
                            let ev = TraceEvent::rule("dpml-run-infeasible").with_note(format!(
                                "interior terminal {v} cannot reach its partner {p} off the run"
                            ));
                            return Ok(solved(inst, false, vec![ev]));
                        }
                    }
                }
            }
        }
        if m >= 5 {
            let matched: Vec<usize> = terminals
                .iter()
                .enumerate()
                .filter(|(idx, (_, v))| {
                    on_run.get(&partner[v]).map_or(false, |&pidx| pidx.abs_diff(*idx) == 1)
                })
                .map(|(_, &(pos, _))| pos)
                .collect();
            if !matched.is_empty() {
                plan.lo = *matched.iter().min().unwrap();
                plan.hi = *matched.iter().max().unwrap();
                let span: std::collections::HashSet<usize> =
                    run.vertices[plan.lo..=plan.hi].iter().copied().collect();
                plan.matched_pairs = pairs
                    .iter()
                    .copied()
                    .filter(|&(a, b)| span.contains(&a) && span.contains(&b))
                    .collect();
                plans.push(plan);
                continue;
            }
        }
        plans.push(plan);
    }

    // closed components (isolated paths resolved above via constrain_all;
    // isolated cycles here): pairs must embed without crossing
    let mut delete_components: Vec<Vec<usize>> = Vec::new();
    let mut satisfied_pairs: Vec<(usize, usize)> = Vec::new();
    for cyc in &d.isolated_cycles {
        let terms: Vec<usize> =
            cyc.iter().copied().filter(|v| partner.contains_key(v)).collect();
        for &t in &terms {
            let p = partner[&t];
            if !terms.contains(&p) {
                let ev = TraceEvent::rule("dpml-cycle-infeasible").with_note(format!(
                    "terminal {t} on a branchless cycle cannot reach its partner {p}"
                ));
                return Ok(solved(inst, false, vec![ev]));
            }
        }
        // non-crossing test in circular order
        let pos: HashMap<usize, usize> =
            terms.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let cyc_pairs: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|&(a, b)| pos.contains_key(&a) && pos.contains_key(&b))
            .collect();
        for (i, &(a1, b1)) in cyc_pairs.iter().enumerate() {
            for &(a2, b2) in &cyc_pairs[i + 1..] {
                let (x1, y1) = (pos[&a1].min(pos[&b1]), pos[&a1].max(pos[&b1]));
                let inside = |p: usize| p > x1 && p < y1;
                if inside(pos[&a2]) != inside(pos[&b2]) {
                    let ev = TraceEvent::rule("dpml-cycle-infeasible").with_note(format!(
                        "pairs ({a1},{b1}) and ({a2},{b2}) cross on a branchless cycle"
                    ));
                    return Ok(solved(inst, false, vec![ev]));
                }
            }
        }
        satisfied_pairs.extend(cyc_pairs);
        delete_components.push(cyc.clone());
    }
    // isolated paths with feasible layouts are fully satisfiable: delete them
    for (run, plan) in runs.iter().zip(&plans) {
        if run.left_anchor.is_none() && run.right_anchor.is_none() {
            let on: std::collections::HashSet<usize> = run.vertices.iter().copied().collect();
            satisfied_pairs
                .extend(pairs.iter().copied().filter(|&(a, b)| on.contains(&a) && on.contains(&b)));
            delete_components.push(run.vertices.clone());
            let _ = plan;
        }
    }

    // rebuild the graph: fresh terminal pairs replace matched spans
    let mut next_id = g.n;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut keep_alive: Vec<bool> = vec![true; g.n];
    for comp in &delete_components {
        for &v in comp {
            keep_alive[v] = false;
        }
    }
    let mut dropped_pairs: std::collections::HashSet<(usize, usize)> =
        satisfied_pairs.iter().copied().collect();
    // base edges not on any run (anchor-anchor adjacencies)
    let run_vertices: std::collections::HashSet<usize> =
        runs.iter().flat_map(|r| r.vertices.iter().copied()).collect();
    for &(u, v) in g.edges() {
        if !run_vertices.contains(&u) && !run_vertices.contains(&v) {
            edges.push((u, v));
        }
    }
    let mut fresh_pairs: Vec<(usize, usize)> = Vec::new();
    for (run, plan) in runs.iter().zip(&plans) {
        if run.left_anchor.is_none() && run.right_anchor.is_none() {
            continue; // component deleted
        }
        let mut seq: Vec<usize> = Vec::new();
        if plan.matched_pairs.is_empty() {
            seq.extend(run.vertices.iter().copied());
        } else {
            for &(a, b) in &plan.matched_pairs {
                dropped_pairs.insert((a, b));
            }
            for &v in &run.vertices[plan.lo..=plan.hi] {
                keep_alive[v] = false;
            }
            let s_new = next_id;
            let t_new = next_id + 1;
            next_id += 2;
            fresh_pairs.push((s_new, t_new));
            seq.extend(run.vertices[..plan.lo].iter().copied());
            seq.push(s_new);
            seq.push(t_new);
            seq.extend(run.vertices[plan.hi + 1..].iter().copied());
        }
        let mut prev = run.left_anchor;
        for &v in &seq {
            if let Some(p) = prev {
                edges.push((p.min(v), p.max(v)));
            }
            prev = Some(v);
        }
        if let Some(r) = run.right_anchor {
            let p = prev.expect("run has at least one vertex or an anchor");
            edges.push((p.min(r), p.max(r)));
        }
    }
    pairs.retain(|p| !dropped_pairs.contains(p) && !dropped_pairs.contains(&(p.1, p.0)));
    pairs.extend(fresh_pairs.iter().copied());

    // smooth non-terminal degree-2 vertices and drop non-terminal isolated
    // vertices, iterating to a fixpoint
    let mut is_terminal = vec![false; next_id];
    for &(a, b) in &pairs {
        if a < next_id {
            is_terminal[a] = true;
        }
        if b < next_id {
            is_terminal[b] = true;
        }
    }
    let mut alive = keep_alive;
    alive.resize(next_id, true);
    edges.sort_unstable();
    edges.dedup();
    edges.retain(|&(u, v)| alive[u] && alive[v]);
    loop {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); next_id];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let smoothable = (0..next_id)
            .find(|&v| alive[v] && !is_terminal[v] && adj[v].len() == 2 && adj[v][0] != adj[v][1]);
        if let Some(v) = smoothable {
            let (a, b) = (adj[v][0], adj[v][1]);
            alive[v] = false;
            edges.retain(|&(x, y)| x != v && y != v);
            edges.push((a.min(b), a.max(b)));
            edges.sort_unstable();
            edges.dedup();
            continue;
        }
        let lonely =
            (0..next_id).find(|&v| alive[v] && !is_terminal[v] && adj[v].is_empty());
        if let Some(v) = lonely {
            alive[v] = false;
            continue;
        }
        break;
    }

    if pairs.is_empty() {
        let ev = TraceEvent::rule("dpml-all-satisfied")
            .with_note("every request resolved during reduction");
        return Ok(solved(inst, true, vec![ev]));
    }

    // compact ids
    let vertex_map: Vec<usize> = (0..next_id).filter(|&v| alive[v]).collect();
    let mut old_to_new = vec![usize::MAX; next_id];
    for (new, &old) in vertex_map.iter().enumerate() {
        old_to_new[old] = new;
    }
    let final_edges: Vec<(usize, usize)> =
        edges.iter().map(|&(u, v)| (old_to_new[u], old_to_new[v])).collect();
    let final_pairs: Vec<(usize, usize)> =
        pairs.iter().map(|&(a, b)| (old_to_new[a], old_to_new[b])).collect();
    let graph = Graph::new(vertex_map.len(), false, false, final_edges)?;
    let bound = leaves + branch.len() + 4 * ell * branch.len();
    assert!(
        graph.n <= bound,
        "dpml size bound violated: {} > |L| + |B| + 4*ell*|B| = {bound}",
        graph.n
    );
    trace.push(TraceEvent {
        rule: "dpml-reduce".into(),
        removed: (0..g.n).filter(|&v| old_to_new[v] == usize::MAX).collect(),
        remap: Some(vertex_map.clone()),
        added_edges: Vec::new(),
        note: Some(format!("fresh terminal pairs: {}", fresh_pairs.len())),
    });
    let out = Instance {
        problem: Problem::DisjointPaths,
        graph,
        labels: None,
        k: Some(final_pairs.len() as u64),
        pairs: Some(final_pairs),
        s: None,
        t: None,
        witness: inst.witness.clone(),
        stand_ins: None,
    };
    out.validate().map_err(|e| Error::Parse(format!("dpml output invalid: {e}")))?;
    Ok(KernelResult::finish(KernelStatus::Reduced, inst, out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::oracle::{longest, solve_instance, PathMode};

    fn cycle(n: usize) -> Graph {
        Graph::simple_undirected(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    fn ml_instance(problem: Problem, graph: Graph, k: Option<u64>, ell: usize) -> Instance {
        Instance {
            problem,
            graph,
            labels: None,
            k,
            pairs: None,
            s: None,
            t: None,
            witness: Witness::max_leaf(ell).unwrap(),
            stand_ins: None,
        }
    }

    /// K4 with edge (0,1) subdivided `s` times.
    fn k4_subdivided(s: usize) -> Graph {
        let mut edges = vec![(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut prev = 0;
        for i in 0..s {
            edges.push((prev, 4 + i));
            prev = 4 + i;
        }
        edges.push((prev, 1));
        Graph::simple_undirected(4 + s, edges).unwrap()
    }

    #[test]
    fn contract_k4_with_subdivided_edge() {
        let r = contract_paths(&k4_subdivided(2), None, ContractionMode::UpToEll(4));
        assert_eq!(r.multigraph.n(), 4);
        assert_eq!(r.multigraph.edges().len(), 6);
        let mut labels = r.multigraph.labels().to_vec();
        labels.sort_unstable();
        assert_eq!(labels, vec![0, 0, 0, 0, 0, 2]);
        assert!(r.candidates.is_empty());
        assert!(r.parallels_over.is_none());
    }

    #[test]
    fn contract_theta_graph() {
        // two hubs joined by three paths with 1, 2, 3 internal vertices
        let mut edges = vec![(0, 2), (2, 1)]; // 1 internal
        edges.extend_from_slice(&[(0, 3), (3, 4), (4, 1)]); // 2 internals
        edges.extend_from_slice(&[(0, 5), (5, 6), (6, 7), (7, 1)]); // 3 internals
        let g = Graph::simple_undirected(8, edges).unwrap();
        let r = contract_paths(&g, None, ContractionMode::LongestOnly);
        assert_eq!(r.multigraph.n(), 2);
        assert_eq!(r.multigraph.labels(), &[3]);
        assert_eq!(r.two_cycle_best, Some(7)); // 2 anchors + 3 + 2 internals
    }

    #[test]
    fn contract_bare_cycle_is_a_candidate() {
        let r = contract_paths(&cycle(8), None, ContractionMode::LongestOnly);
        assert_eq!(r.multigraph.n(), 0);
        assert_eq!(r.candidates, vec![8]);
    }

    #[test]
    fn held_karp_examples() {
        let base = Graph::new(2, false, true, vec![(0, 1), (0, 1)]).unwrap();
        let m = LabeledMultigraph::new(base, vec![3, 2]).unwrap();
        assert_eq!(held_karp_longest_cycle(&m, None, 24).unwrap(), 7);
        let tri = Graph::new(3, false, true, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        let m = LabeledMultigraph::new(tri, vec![0, 0, 0]).unwrap();
        assert_eq!(held_karp_longest_cycle(&m, None, 24).unwrap(), 3);
    }

    #[test]
    fn held_karp_matches_expansion_brute_force() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let caps = Caps::default();
        for _ in 0..200 {
            let n = rng.gen_range(2..=8);
            let mut edges = Vec::new();
            let mut labels = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    for copy in 0..rng.gen_range(0..=2) {
                        let l = rng.gen_range(0..=5u64);
                        // expansion must stay simple: only one label-0 parallel
                        let l = if copy > 0 && l == 0 { 1 } else { l };
                        edges.push((u, v));
                        labels.push(l);
                    }
                }
            }
            let base = Graph::new(n, false, true, edges).unwrap();
            let Ok(m) = LabeledMultigraph::new(base, labels) else { continue };
            let hk = held_karp_longest_cycle(&m, None, 24).unwrap();
            let (brute, _) = longest(&m.expand(), PathMode::Cycle, &caps).unwrap();
            assert_eq!(hk, brute, "multigraph {m:?}");
        }
    }

    #[test]
    fn solve_examples() {
        let caps = Caps::default();
        // star K_{1,9}: tree, no cycle
        let star = Graph::simple_undirected(10, (1..10).map(|i| (0, i)).collect()).unwrap();
        let inst = ml_instance(Problem::LongCycle, star, Some(3), 2);
        assert_eq!(solve_long_cycle_maxleaf(&inst, &caps).unwrap().status, KernelStatus::SolvedNo);
        // C10 is one big cycle
        let inst = ml_instance(Problem::LongCycle, cycle(10), Some(10), 2);
        assert_eq!(solve_long_cycle_maxleaf(&inst, &caps).unwrap().status, KernelStatus::SolvedYes);
    }

    #[test]
    fn kernelize_example_and_bounds() {
        let caps = Caps::default();
        // K4 with every edge subdivided 10 times: 4 + 6*10 vertices
        let mut edges = Vec::new();
        let mut next = 4;
        for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            let mut prev = u;
            for _ in 0..10 {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, v));
        }
        let g = Graph::simple_undirected(next, edges).unwrap();
        let inst = ml_instance(Problem::LongCycle, g, Some(20), 4);
        let res = kernelize_long_cycle_maxleaf(&inst, &caps).unwrap();
        assert_eq!(res.status, KernelStatus::Reduced);
        let out = &res.instance;
        assert_eq!(out.graph.n, 4);
        assert_eq!(out.graph.edge_count(), 6);
        assert!(out.labels.as_ref().unwrap().iter().all(|&l| l == 10));
        // answers agree with the oracle
        let a = solve_instance(&inst, &caps).unwrap();
        let b = solve_instance(out, &caps).unwrap();
        assert_eq!(a.yes, b.yes);
        // k exceeding n is an immediate NO
        let inst = ml_instance(Problem::LongCycle, cycle(6), Some(7), 2);
        let res = kernelize_long_cycle_maxleaf(&inst, &caps).unwrap();
        assert_eq!(res.status, KernelStatus::SolvedNo);
    }

    #[test]
    fn squeeze_examples() {
        let caps = Caps::default();
        // C9 with one request for a single cycle
        let inst = Instance {
            k: Some(1),
            ..ml_instance(Problem::DisjointCycles, cycle(9), Some(1), 2)
        };
        let res = reduce_degree2_single_internal(&inst).unwrap();
        assert_eq!(res.instance.graph.n, 3);
        assert!(solve_instance(&res.instance, &caps).unwrap().yes);
        // P10 keeps a hamiltonian path
        let p10 = Graph::simple_undirected(10, (0..9).map(|i| (i, i + 1)).collect()).unwrap();
        let inst = ml_instance(Problem::HamiltonianPath, p10, None, 2);
        let res = reduce_degree2_single_internal(&inst).unwrap();
        assert!(res.instance.graph.n <= 3);
        assert!(solve_instance(&res.instance, &caps).unwrap().yes);
    }

    #[test]
    fn squeeze_matches_oracle_on_random_subdivisions() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let caps = Caps::default();
        for round in 0..100 {
            let n0 = rng.gen_range(3..=6);
            let mut edges = Vec::new();
            for u in 0..n0 {
                for v in u + 1..n0 {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            // subdivide random edges
            let mut next = n0;
            let mut final_edges = Vec::new();
            for (u, v) in edges {
                let subs = rng.gen_range(0..=2);
                let mut prev = u;
                for _ in 0..subs {
                    final_edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
                final_edges.push((prev, v));
            }
            if next > 12 {
                continue;
            }
            let g = Graph::simple_undirected(next, final_edges).unwrap();
            let problem =
                if round % 2 == 0 { Problem::HamiltonianPath } else { Problem::DisjointCycles };
            let k = if problem == Problem::DisjointCycles {
                Some(rng.gen_range(1..=2))
            } else {
                None
            };
            let inst = ml_instance(problem, g, k, 4);
            let res = reduce_degree2_single_internal(&inst).unwrap();
            let before = solve_instance(&inst, &caps).unwrap().yes;
            let after = solve_instance(&res.instance, &caps).unwrap().yes;
            assert_eq!(before, after, "round {round}: {inst:?}");
        }
    }

    #[test]
    fn dpml_contracts_terminal_laden_path() {
        // path of 12 vertices between two branch hubs; terminals laid out so
        // interior pairs are adjacent in run order
        // hub 0 - v1..v10 - hub 11; extra legs make 0 and 11 branch vertices
        let mut edges: Vec<(usize, usize)> = (0..11).map(|i| (i, i + 1)).collect();
        edges.push((0, 12));
        edges.push((0, 13));
        edges.push((11, 14));
        edges.push((11, 15));
        let g = Graph::simple_undirected(16, edges).unwrap();
        // terminals on the run: (1,12-partner is off-run via open end)...
        // pairs: (2,3), (4,5), (6,7) interior-adjacent; (1, 12) exits left
        let pairs = vec![(2, 3), (4, 5), (6, 7), (1, 12)];
        let inst = Instance {
            problem: Problem::DisjointPaths,
            graph: g,
            labels: None,
            k: Some(4),
            pairs: Some(pairs),
            s: None,
            t: None,
            witness: Witness::max_leaf(4).unwrap(),
            stand_ins: None,
        };
        inst.validate().unwrap();
        let res = kernelize_disjoint_paths_maxleaf(&inst).unwrap();
        assert_eq!(res.status, KernelStatus::Reduced);
        let caps = Caps::default();
        let before = solve_instance(&inst, &caps).unwrap().yes;
        let after = solve_instance(&res.instance, &caps).unwrap().yes;
        assert_eq!(before, after);
        assert!(res.instance.graph.n < 16);
    }

    #[test]
    fn dpml_rejects_offpath_interior_partner() {
        // interior terminal whose partner sits on another branch spoke
        let mut edges: Vec<(usize, usize)> = (0..11).map(|i| (i, i + 1)).collect();
        edges.push((0, 12));
        edges.push((0, 13));
        edges.push((11, 14));
        edges.push((11, 15));
        let g = Graph::simple_undirected(16, edges).unwrap();
        let pairs = vec![(2, 3), (4, 12), (5, 6), (7, 8), (9, 14)];
        let inst = Instance {
            problem: Problem::DisjointPaths,
            graph: g.clone(),
            labels: None,
            k: Some(5),
            pairs: Some(pairs),
            s: None,
            t: None,
            witness: Witness::max_leaf(4).unwrap(),
            stand_ins: None,
        };
        inst.validate().unwrap();
        let res = kernelize_disjoint_paths_maxleaf(&inst).unwrap();
        assert_eq!(res.status, KernelStatus::SolvedNo);
        let caps = Caps::default();
        assert!(!solve_instance(&inst, &caps).unwrap().yes);
    }

    #[test]
    fn dpml_rejects_too_many_leaves() {
        // star with 4 leaves, ell = 3
        let g = Graph::simple_undirected(5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let inst = Instance {
            problem: Problem::DisjointPaths,
            graph: g,
            labels: None,
            k: Some(1),
            pairs: Some(vec![(1, 2)]),
            s: None,
            t: None,
            witness: Witness::max_leaf(3).unwrap(),
            stand_ins: None,
        };
        inst.validate().unwrap();
        let res = kernelize_disjoint_paths_maxleaf(&inst).unwrap();
        assert_eq!(res.status, KernelStatus::SolvedNo);
    }
}

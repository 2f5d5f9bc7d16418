//! Exact Hamiltonian cycle / path solvers based on edge-state backtracking
//! with forced-edge propagation: a vertex with exactly two available edges
//! has both forced, a vertex with two chosen edges excludes the rest, and
//! premature subcycles are rejected. The propagation cracks the near-cubic
//! gadget graphs from the hardness constructions at sizes far beyond the
//! bitmask DP.

use crate::graph::Graph;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// undirected
// ---------------------------------------------------------------------------

struct UndirectedSearch {
    n: usize,
    edges: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    state: Vec<u8>, // 0 unknown, 1 in, 2 out
    chosen: Vec<usize>,
    avail: Vec<usize>,
    tip: Vec<usize>, // other endpoint of the in-edge path ending at v
    in_count: usize,
    trail: Vec<TrailItem>,
    budget: u64,
}

enum TrailItem {
    State(usize),
    Tip(usize, usize),
}

impl UndirectedSearch {
    fn new(g: &Graph, budget: u64) -> Self {
        let edges: Vec<(usize, usize)> = g.edges().to_vec();
        let mut incident = vec![Vec::new(); g.n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(i);
            incident[v].push(i);
        }
        let avail = (0..g.n).map(|v| incident[v].len()).collect();
        UndirectedSearch {
            n: g.n,
            edges,
            incident,
            state: vec![0; g.edges().len()],
            chosen: vec![0; g.n],
            avail,
            tip: (0..g.n).collect(),
            in_count: 0,
            trail: Vec::new(),
            budget,
        }
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    fn set_out(&mut self, e: usize, dirty: &mut Vec<usize>) -> bool {
        match self.state[e] {
            2 => return true,
            1 => return false,
            _ => {}
        }
        self.state[e] = 2;
        self.trail.push(TrailItem::State(e));
        let (u, v) = self.edges[e];
        self.avail[u] -= 1;
        self.avail[v] -= 1;
        dirty.push(u);
        dirty.push(v);
        true
    }

    fn set_in(&mut self, e: usize, dirty: &mut Vec<usize>) -> bool {
        match self.state[e] {
            1 => return true,
            2 => return false,
            _ => {}
        }
        let (u, v) = self.edges[e];
        if self.chosen[u] >= 2 || self.chosen[v] >= 2 {
            return false;
        }
        // premature cycle: u and v are the two tips of one in-path
        if self.tip[u] == v {
            if self.in_count + 1 != self.n {
                return false;
            }
        }
        self.state[e] = 1;
        self.trail.push(TrailItem::State(e));
        self.chosen[u] += 1;
        self.chosen[v] += 1;
        self.in_count += 1;
        if self.tip[u] != v {
            let a = self.tip[u];
            let b = self.tip[v];
            self.trail.push(TrailItem::Tip(a, self.tip[a]));
            self.trail.push(TrailItem::Tip(b, self.tip[b]));
            self.tip[a] = b;
            self.tip[b] = a;
        }
        dirty.push(u);
        dirty.push(v);
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                TrailItem::State(e) => {
                    let (u, v) = self.edges[e];
                    if self.state[e] == 1 {
                        self.chosen[u] -= 1;
                        self.chosen[v] -= 1;
                        self.in_count -= 1;
                    } else {
                        self.avail[u] += 1;
                        self.avail[v] += 1;
                    }
                    self.state[e] = 0;
                }
                TrailItem::Tip(v, old) => self.tip[v] = old,
            }
        }
    }

    /// Propagate vertex degree constraints to fixpoint. Returns false on a
    /// contradiction.
    fn propagate(&mut self, dirty: &mut Vec<usize>) -> bool {
        while let Some(v) = dirty.pop() {
            if self.chosen[v] > 2 || self.avail[v] < 2 {
                return false;
            }
            if self.chosen[v] == 2 {
                let pending: Vec<usize> = self.incident[v]
                    .iter()
                    .copied()
                    .filter(|&e| self.state[e] == 0)
                    .collect();
                for e in pending {
                    if !self.set_out(e, dirty) {
                        return false;
                    }
                }
            } else if self.avail[v] == 2 {
                let pending: Vec<usize> = self.incident[v]
                    .iter()
                    .copied()
                    .filter(|&e| self.state[e] == 0)
                    .collect();
                for e in pending {
                    if !self.set_in(e, dirty) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn solve(&mut self) -> Result<bool> {
        if self.budget == 0 {
            return Err(Error::CapExceeded("hamiltonian: step budget exhausted".into()));
        }
        self.budget -= 1;
        if self.in_count == self.n {
            return Ok(true);
        }
        // most constrained open vertex
        let mut pick: Option<(usize, usize)> = None;
        for v in 0..self.n {
            if self.chosen[v] < 2 {
                let slack = self.avail[v] - self.chosen[v];
                if pick.map_or(true, |(s, _)| slack < s) {
                    pick = Some((slack, v));
                }
            }
        }
        let Some((_, v)) = pick else {
            // every vertex saturated but the cycle has not closed: dead end
            return Ok(false);
        };
        let e = self
            .incident[v]
            .iter()
            .copied()
            .find(|&e| self.state[e] == 0)
            .expect("open vertex has an unknown edge");
        for branch_in in [true, false] {
            let mark = self.trail.len();
            let mut dirty = Vec::new();
            let ok = if branch_in {
                self.set_in(e, &mut dirty)
            } else {
                self.set_out(e, &mut dirty)
            };
            if ok && self.propagate(&mut dirty) {
                if self.solve()? {
                    return Ok(true);
                }
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    fn extract_cycle(&self) -> Vec<usize> {
        let mut next = vec![Vec::new(); self.n];
        for (e, &st) in self.state.iter().enumerate() {
            if st == 1 {
                let (u, v) = self.edges[e];
                next[u].push(v);
                next[v].push(u);
            }
        }
        let mut seq = vec![0usize];
        let mut prev = usize::MAX;
        let mut cur = 0usize;
        while seq.len() < self.n {
            let nx = next[cur].iter().copied().find(|&w| w != prev).unwrap();
            seq.push(nx);
            prev = cur;
            cur = nx;
        }
        seq
    }
}

/// Hamiltonian cycle of an undirected simple graph, as a vertex sequence.
pub fn hamiltonian_cycle_undirected(g: &Graph, budget: u64) -> Result<Option<Vec<usize>>> {
    assert!(!g.directed);
    if g.n < 3 {
        return Ok(None);
    }
    let mut s = UndirectedSearch::new(g, budget);
    // seed propagation: degree-2 vertices force their edges
    let mut dirty: Vec<usize> = (0..g.n).collect();
    if !s.propagate(&mut dirty) {
        return Ok(None);
    }
    if s.solve()? {
        Ok(Some(s.extract_cycle()))
    } else {
        Ok(None)
    }
}

/// Hamiltonian s-t path via the cycle solver on the graph plus a virtual
/// vertex adjacent to s and t.
pub fn hamiltonian_st_path_undirected(
    g: &Graph,
    s: usize,
    t: usize,
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    assert!(!g.directed && s != t);
    if g.n == 2 {
        return Ok(if g.has_edge(s, t) { Some(vec![s, t]) } else { None });
    }
    let mut edges = g.edges().to_vec();
    let virt = g.n;
    edges.push((s, virt));
    edges.push((t, virt));
    let h = Graph::new(g.n + 1, false, false, edges).expect("virtual vertex extension");
    match hamiltonian_cycle_undirected(&h, budget)? {
        None => Ok(None),
        Some(cycle) => Ok(Some(cut_cycle_at(&cycle, virt, s))),
    }
}

/// Hamiltonian path with free endpoints via a universal virtual vertex.
pub fn hamiltonian_path_undirected(g: &Graph, budget: u64) -> Result<Option<Vec<usize>>> {
    assert!(!g.directed);
    if g.n == 0 {
        return Ok(None);
    }
    if g.n == 1 {
        return Ok(Some(vec![0]));
    }
    if g.n == 2 {
        return Ok(if g.edge_count() == 1 { Some(vec![0, 1]) } else { None });
    }
    let mut edges = g.edges().to_vec();
    let virt = g.n;
    for v in 0..g.n {
        edges.push((v, virt));
    }
    let h = Graph::new(g.n + 1, false, false, edges).expect("virtual vertex extension");
    match hamiltonian_cycle_undirected(&h, budget)? {
        None => Ok(None),
        Some(cycle) => {
            let pos = cycle.iter().position(|&v| v == virt).unwrap();
            let mut seq: Vec<usize> = cycle[pos + 1..].iter().chain(cycle[..pos].iter()).copied().collect();
            debug_assert_eq!(seq.len(), g.n);
            if seq.first() > seq.last() {
                seq.reverse();
            }
            Ok(Some(seq))
        }
    }
}

fn cut_cycle_at(cycle: &[usize], virt: usize, want_first: usize) -> Vec<usize> {
    let pos = cycle.iter().position(|&v| v == virt).unwrap();
    let mut seq: Vec<usize> =
        cycle[pos + 1..].iter().chain(cycle[..pos].iter()).copied().collect();
    if seq.first() != Some(&want_first) {
        seq.reverse();
    }
    seq
}

// ---------------------------------------------------------------------------
// directed
// ---------------------------------------------------------------------------

struct DirectedSearch {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    state: Vec<u8>,
    out_chosen: Vec<usize>,
    out_avail: Vec<usize>,
    in_chosen: Vec<usize>,
    in_avail: Vec<usize>,
    pstart: Vec<usize>, // start of the chosen-arc path ending at v
    pend: Vec<usize>,   // end of the chosen-arc path starting at v
    in_count: usize,
    trail: Vec<DTrail>,
    budget: u64,
}

enum DTrail {
    State(usize),
    PStart(usize, usize),
    PEnd(usize, usize),
}

impl DirectedSearch {
    fn new(g: &Graph, budget: u64) -> Self {
        let arcs: Vec<(usize, usize)> = g.edges().to_vec();
        let mut out_arcs = vec![Vec::new(); g.n];
        let mut in_arcs = vec![Vec::new(); g.n];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            out_arcs[u].push(i);
            in_arcs[v].push(i);
        }
        let out_avail = (0..g.n).map(|v| out_arcs[v].len()).collect();
        let in_avail = (0..g.n).map(|v| in_arcs[v].len()).collect();
        DirectedSearch {
            n: g.n,
            arcs,
            out_arcs,
            in_arcs,
            state: vec![0; g.edges().len()],
            out_chosen: vec![0; g.n],
            out_avail,
            in_chosen: vec![0; g.n],
            in_avail,
            pstart: (0..g.n).collect(),
            pend: (0..g.n).collect(),
            in_count: 0,
            trail: Vec::new(),
            budget,
        }
    }

    fn set_out(&mut self, a: usize, dirty: &mut Vec<usize>) -> bool {
        match self.state[a] {
            2 => return true,
            1 => return false,
            _ => {}
        }
        self.state[a] = 2;
        self.trail.push(DTrail::State(a));
        let (u, v) = self.arcs[a];
        self.out_avail[u] -= 1;
        self.in_avail[v] -= 1;
        dirty.push(u);
        dirty.push(v);
        true
    }

    fn set_in(&mut self, a: usize, dirty: &mut Vec<usize>) -> bool {
        match self.state[a] {
            1 => return true,
            2 => return false,
            _ => {}
        }
        let (u, v) = self.arcs[a];
        if self.out_chosen[u] >= 1 || self.in_chosen[v] >= 1 {
            return false;
        }
        // u is the end of a path starting at pstart[u]; closing it back to v
        // requires v to start that path and the cycle to be complete
        if self.pstart[u] == v && self.in_count + 1 != self.n {
            return false;
        }
        self.state[a] = 1;
        self.trail.push(DTrail::State(a));
        self.out_chosen[u] += 1;
        self.in_chosen[v] += 1;
        self.in_count += 1;
        let s = self.pstart[u];
        let e = self.pend[v];
        self.trail.push(DTrail::PEnd(s, self.pend[s]));
        self.trail.push(DTrail::PStart(e, self.pstart[e]));
        self.pend[s] = e;
        self.pstart[e] = s;
        dirty.push(u);
        dirty.push(v);
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                DTrail::State(a) => {
                    let (u, v) = self.arcs[a];
                    if self.state[a] == 1 {
                        self.out_chosen[u] -= 1;
                        self.in_chosen[v] -= 1;
                        self.in_count -= 1;
                    } else {
                        self.out_avail[u] += 1;
                        self.in_avail[v] += 1;
                    }
                    self.state[a] = 0;
                }
                DTrail::PStart(v, old) => self.pstart[v] = old,
                DTrail::PEnd(v, old) => self.pend[v] = old,
            }
        }
    }

    fn propagate(&mut self, dirty: &mut Vec<usize>) -> bool {
        while let Some(v) = dirty.pop() {
            if self.out_avail[v] < 1 || self.in_avail[v] < 1 {
                return false;
            }
            if self.out_chosen[v] == 1 {
                let pending: Vec<usize> = self.out_arcs[v]
                    .iter()
                    .copied()
                    .filter(|&a| self.state[a] == 0)
                    .collect();
                for a in pending {
                    if !self.set_out(a, dirty) {
                        return false;
                    }
                }
            } else if self.out_avail[v] == 1 {
                let a = self.out_arcs[v]
                    .iter()
                    .copied()
                    .find(|&a| self.state[a] == 0)
                    .expect("available arc");
                if !self.set_in(a, dirty) {
                    return false;
                }
            }
            if self.in_chosen[v] == 1 {
                let pending: Vec<usize> = self.in_arcs[v]
                    .iter()
                    .copied()
                    .filter(|&a| self.state[a] == 0)
                    .collect();
                for a in pending {
                    if !self.set_out(a, dirty) {
                        return false;
                    }
                }
            } else if self.in_avail[v] == 1 {
                let a = self.in_arcs[v]
                    .iter()
                    .copied()
                    .find(|&a| self.state[a] == 0)
                    .expect("available arc");
                if !self.set_in(a, dirty) {
                    return false;
                }
            }
        }
        true
    }

    fn solve(&mut self) -> Result<bool> {
        if self.budget == 0 {
            return Err(Error::CapExceeded("hamiltonian: step budget exhausted".into()));
        }
        self.budget -= 1;
        if self.in_count == self.n {
            return Ok(true);
        }
        let mut pick: Option<(usize, usize)> = None;
        for v in 0..self.n {
            if self.out_chosen[v] == 0 {
                let slack = self.out_avail[v];
                if pick.map_or(true, |(s, _)| slack < s) {
                    pick = Some((slack, v));
                }
            }
        }
        let Some((_, v)) = pick else {
            return Ok(false);
        };
        let a = self.out_arcs[v]
            .iter()
            .copied()
            .find(|&a| self.state[a] == 0)
            .expect("open vertex has an unknown arc");
        for branch_in in [true, false] {
            let mark = self.trail.len();
            let mut dirty = Vec::new();
            let ok = if branch_in {
                self.set_in(a, &mut dirty)
            } else {
                self.set_out(a, &mut dirty)
            };
            if ok && self.propagate(&mut dirty) {
                if self.solve()? {
                    return Ok(true);
                }
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    fn extract_cycle(&self) -> Vec<usize> {
        let mut succ = vec![usize::MAX; self.n];
        for (a, &st) in self.state.iter().enumerate() {
            if st == 1 {
                let (u, v) = self.arcs[a];
                succ[u] = v;
            }
        }
        let mut seq = vec![0usize];
        let mut cur = succ[0];
        while cur != 0 {
            seq.push(cur);
            cur = succ[cur];
        }
        seq
    }
}

/// Directed Hamiltonian cycle, as a vertex sequence in arc order.
pub fn hamiltonian_cycle_directed(g: &Graph, budget: u64) -> Result<Option<Vec<usize>>> {
    assert!(g.directed);
    if g.n == 0 {
        return Ok(None);
    }
    if g.n == 1 {
        return Ok(None);
    }
    let mut s = DirectedSearch::new(g, budget);
    let mut dirty: Vec<usize> = (0..g.n).collect();
    if !s.propagate(&mut dirty) {
        return Ok(None);
    }
    if s.solve()? {
        Ok(Some(s.extract_cycle()))
    } else {
        Ok(None)
    }
}

/// Directed Hamiltonian s-t path via a virtual vertex with arcs t -> virt -> s.
pub fn hamiltonian_st_path_directed(
    g: &Graph,
    s: usize,
    t: usize,
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    assert!(g.directed && s != t);
    let mut arcs = g.edges().to_vec();
    let virt = g.n;
    arcs.push((t, virt));
    arcs.push((virt, s));
    let h = Graph::new(g.n + 1, true, false, arcs).expect("virtual vertex extension");
    match hamiltonian_cycle_directed(&h, budget)? {
        None => Ok(None),
        Some(cycle) => {
            let pos = cycle.iter().position(|&v| v == virt).unwrap();
            let seq: Vec<usize> =
                cycle[pos + 1..].iter().chain(cycle[..pos].iter()).copied().collect();
            debug_assert_eq!(seq.first(), Some(&s));
            debug_assert_eq!(seq.last(), Some(&t));
            Ok(Some(seq))
        }
    }
}

/// Directed Hamiltonian path with free endpoints.
pub fn hamiltonian_path_directed(g: &Graph, budget: u64) -> Result<Option<Vec<usize>>> {
    assert!(g.directed);
    if g.n == 0 {
        return Ok(None);
    }
    if g.n == 1 {
        return Ok(Some(vec![0]));
    }
    let mut arcs = g.edges().to_vec();
    let virt = g.n;
    for v in 0..g.n {
        arcs.push((v, virt));
        arcs.push((virt, v));
    }
    let h = Graph::new(g.n + 1, true, false, arcs).expect("virtual vertex extension");
    match hamiltonian_cycle_directed(&h, budget)? {
        None => Ok(None),
        Some(cycle) => {
            let pos = cycle.iter().position(|&v| v == virt).unwrap();
            let seq: Vec<usize> =
                cycle[pos + 1..].iter().chain(cycle[..pos].iter()).copied().collect();
            Ok(Some(seq))
        }
    }
}

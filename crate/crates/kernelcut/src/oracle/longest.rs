//! Exact longest simple cycle / path computation: bitmask DP up to the
//! configured vertex cap, exhaustive DFS with a step budget beyond it, and
//! the polynomial checks for targets k <= 4.

use crate::caps::Caps;
use crate::graph::Graph;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    Cycle,
    AnyPath,
    StPath(usize, usize),
}

/// Maximum number of vertices of a simple cycle / path, with a witness
/// sequence. Returns `(0, None)` when no such structure exists.
pub fn longest(g: &Graph, mode: PathMode, caps: &Caps) -> Result<(u64, Option<Vec<usize>>)> {
    if g.n == 0 {
        return Ok((0, None));
    }
    if g.n <= caps.dp_vertices {
        return Ok(longest_dp(g, mode));
    }
    // degree-<=2 vertices never branch the search, so subdivision-heavy
    // graphs (multigraph expansions) stay tractable for the DFS at any n
    let branching = g.degrees().iter().filter(|&&d| d >= 3).count();
    if branching <= caps.dfs_vertices {
        let mut budget = caps.step_budget;
        longest_dfs(g, mode, &mut budget)
    } else {
        Err(Error::CapExceeded(format!(
            "longest: {branching} branching vertices exceed the DFS cap {}",
            caps.dfs_vertices
        )))
    }
}

fn neighbor_masks(g: &Graph) -> (Vec<u32>, Vec<u32>) {
    let mut out = vec![0u32; g.n];
    let mut inn = vec![0u32; g.n];
    for &(u, v) in g.edges() {
        out[u] |= 1 << v;
        inn[v] |= 1 << u;
        if !g.directed {
            out[v] |= 1 << u;
            inn[u] |= 1 << v;
        }
    }
    (out, inn)
}

fn min_cycle_len(g: &Graph) -> u32 {
    if g.directed {
        2
    } else {
        3
    }
}

fn longest_dp(g: &Graph, mode: PathMode) -> (u64, Option<Vec<usize>>) {
    let n = g.n;
    assert!(n <= 26);
    let (out, inn) = neighbor_masks(g);
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // ends[mask] = set of vertices v such that a simple path with vertex set
    // `mask` ends at v. In cycle mode paths are rooted at min(mask).
    let mut ends = vec![0u32; 1 << n];
    match mode {
        PathMode::Cycle | PathMode::AnyPath => {
            for v in 0..n {
                ends[1usize << v] = 1 << v;
            }
        }
        PathMode::StPath(s, _) => {
            ends[1usize << s] = 1 << s;
        }
    }
    let mut best: u32 = 0;
    let mut best_state: Option<(usize, usize)> = None; // (mask, end)
    let mcl = min_cycle_len(g);

    for mask in 1usize..=(full as usize) {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        let pc = (mask as u32).count_ones();
        let mn = mask.trailing_zeros() as usize;
        match mode {
            PathMode::Cycle => {
                // close back to the root min(mask)
                let closers = e & inn[mn];
                if closers != 0 && pc >= mcl && pc > best {
                    best = pc;
                    best_state = Some((mask, closers.trailing_zeros() as usize));
                }
            }
            PathMode::AnyPath => {
                if pc > best {
                    best = pc;
                    best_state = Some((mask, e.trailing_zeros() as usize));
                }
            }
            PathMode::StPath(_, t) => {
                if e & (1 << t) != 0 && pc > best {
                    best = pc;
                    best_state = Some((mask, t));
                }
            }
        }
        // extend
        let mut rem = e;
        while rem != 0 {
            let v = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            let mut cand = out[v] & !(mask as u32) & full;
            if matches!(mode, PathMode::Cycle) {
                // keep the root minimal: only extend with vertices above it
                cand &= !((1u32 << (mn + 1)) - 1);
            }
            let mut c = cand;
            while c != 0 {
                let w = c.trailing_zeros() as usize;
                c &= c - 1;
                ends[mask | (1 << w)] |= 1 << w;
            }
        }
    }

    let Some((mask, end)) = best_state else {
        return (0, None);
    };
    // backward reconstruction through the ends table
    let mut seq = vec![end];
    let mut mask = mask;
    let mut cur = end;
    while (mask as u32).count_ones() > 1 {
        let prev_mask = mask & !(1 << cur);
        let preds = ends[prev_mask] & inn[cur];
        debug_assert!(preds != 0, "DP reconstruction lost its path");
        let u = preds.trailing_zeros() as usize;
        seq.push(u);
        mask = prev_mask;
        cur = u;
    }
    seq.reverse();
    (best as u64, Some(seq))
}

fn longest_dfs(g: &Graph, mode: PathMode, budget: &mut u64) -> Result<(u64, Option<Vec<usize>>)> {
    let n = g.n;
    let out = g.out_adj();
    let inn = g.in_adj();
    let mcl = min_cycle_len(g) as usize;
    let mut best: usize = 0;
    let mut best_seq: Option<Vec<usize>> = None;
    let mut visited = vec![false; n];
    let mut path: Vec<usize> = Vec::with_capacity(n);

    struct Ctx<'a> {
        out: &'a [Vec<usize>],
        inn: &'a [Vec<usize>],
        n: usize,
        mcl: usize,
    }

    fn dfs(
        ctx: &Ctx,
        mode: PathMode,
        root: usize,
        v: usize,
        visited: &mut [bool],
        path: &mut Vec<usize>,
        best: &mut usize,
        best_seq: &mut Option<Vec<usize>>,
        budget: &mut u64,
    ) -> Result<()> {
        if *budget == 0 {
            return Err(Error::CapExceeded("longest: step budget exhausted".into()));
        }
        *budget -= 1;
        match mode {
            PathMode::Cycle => {
                if path.len() >= ctx.mcl && path.len() > *best && ctx.inn[root].contains(&v) {
                    *best = path.len();
                    *best_seq = Some(path.clone());
                }
            }
            PathMode::AnyPath => {
                if path.len() > *best {
                    *best = path.len();
                    *best_seq = Some(path.clone());
                }
            }
            PathMode::StPath(_, t) => {
                if v == t {
                    if path.len() > *best {
                        *best = path.len();
                        *best_seq = Some(path.clone());
                    }
                    return Ok(()); // simple paths to t never profit from leaving t
                }
            }
        }
        if path.len() + (ctx.n - path.len()) <= *best {
            return Ok(());
        }
        for &w in &ctx.out[v] {
            if visited[w] {
                continue;
            }
            if matches!(mode, PathMode::Cycle) && w < root {
                continue;
            }
            visited[w] = true;
            path.push(w);
            dfs(ctx, mode, root, w, visited, path, best, best_seq, budget)?;
            path.pop();
            visited[w] = false;
        }
        Ok(())
    }

    let ctx = Ctx { out: &out, inn: &inn, n, mcl };
    let starts: Vec<usize> = match mode {
        PathMode::StPath(s, _) => vec![s],
        _ => (0..n).collect(),
    };
    for s in starts {
        if best == n {
            break;
        }
        visited[s] = true;
        path.push(s);
        dfs(&ctx, mode, s, s, &mut visited, &mut path, &mut best, &mut best_seq, budget)?;
        path.pop();
        visited[s] = false;
    }
    Ok((best as u64, best_seq))
}

// ---------------------------------------------------------------------------
// polynomial decisions for k <= 4
// ---------------------------------------------------------------------------

fn has_any_cycle(g: &Graph) -> bool {
    if g.directed {
        // gray-path DFS
        let out = g.out_adj();
        let mut color = vec![0u8; g.n];
        fn dfs(v: usize, out: &[Vec<usize>], color: &mut [u8]) -> bool {
            color[v] = 1;
            for &w in &out[v] {
                if color[w] == 1 {
                    return true;
                }
                if color[w] == 0 && dfs(w, out, color) {
                    return true;
                }
            }
            color[v] = 2;
            false
        }
        (0..g.n).any(|v| color[v] == 0 && dfs(v, &out, &mut color))
    } else {
        let comps = g.connected_components().len();
        g.underlying_undirected().edge_count() > g.n.saturating_sub(comps)
    }
}

fn reachable_avoiding(g_adj: &[Vec<usize>], from: usize, banned: &[usize]) -> Vec<bool> {
    let n = g_adj.len();
    let mut seen = vec![false; n];
    for &b in banned {
        seen[b] = true;
    }
    if seen[from] {
        return vec![false; n];
    }
    let mut reach = vec![false; n];
    seen[from] = true;
    reach[from] = true;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &w in &g_adj[v] {
            if !seen[w] {
                seen[w] = true;
                reach[w] = true;
                stack.push(w);
            }
        }
    }
    reach
}

/// Decide `exists cycle with >= k vertices` for k <= 4 in polynomial time.
///
/// k <= 3 (undirected) and k <= 2 (directed) reduce to cycle existence. The
/// remaining cases enumerate a short consecutive stretch of the sought cycle
/// plus one reachability query: a cycle on >= 4 vertices exists iff there are
/// distinct a,b,c,d with edges a-b, b-c, c-d and a d..a path avoiding b,c.
pub fn has_cycle_at_least_small_k(g: &Graph, k: u64) -> bool {
    if g.n == 0 {
        return false;
    }
    let directed = g.directed;
    if (!directed && k <= 3) || (directed && k <= 2) {
        return has_any_cycle(g);
    }
    let out = g.out_adj();
    let inn = g.in_adj();
    if directed && k == 3 {
        // arcs a->b->c (a != c) plus a c..a path avoiding b
        for b in 0..g.n {
            for &c in &out[b] {
                let reach = reachable_avoiding(&out, c, &[b]);
                for &a in &inn[b] {
                    if a != c && reach[a] {
                        return true;
                    }
                }
            }
        }
        return false;
    }
    assert!(k == 4, "small-k solver only covers k <= 4");
    for b in 0..g.n {
        for &c in &out[b] {
            if c == b {
                continue;
            }
            for &d in &out[c] {
                if d == b || d == c {
                    continue;
                }
                let reach = reachable_avoiding(&out, d, &[b, c]);
                for &a in &inn[b] {
                    if a != b && a != c && a != d && reach[a] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Decide `exists path with >= k vertices` for k <= 3 in polynomial time.
pub fn has_path_at_least_small_k(g: &Graph, k: u64) -> bool {
    match k {
        0 => true,
        1 => g.n >= 1,
        2 => g.edge_count() >= 1,
        3 => {
            let out = g.out_adj();
            let inn = g.in_adj();
            (0..g.n).any(|b| {
                inn[b].iter().any(|&a| out[b].iter().any(|&c| c != a && c != b && a != b))
            })
        }
        _ => panic!("small-k path solver only covers k <= 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::simple_undirected(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5)); // outer C5
            edges.push((i, i + 5)); // spokes
            edges.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
        }
        Graph::simple_undirected(10, edges).unwrap()
    }

    #[test]
    fn c5_cycle_is_5() {
        let caps = Caps::default();
        let (len, seq) = longest(&cycle(5), PathMode::Cycle, &caps).unwrap();
        assert_eq!(len, 5);
        assert!(seq.is_some());
    }

    #[test]
    fn petersen_is_hypohamiltonian() {
        let caps = Caps::default();
        let (len, _) = longest(&petersen(), PathMode::Cycle, &caps).unwrap();
        assert_eq!(len, 9);
    }

    #[test]
    fn dfs_agrees_with_dp() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let caps = Caps::default();
        for _ in 0..60 {
            let n = rng.gen_range(2..=8);
            let directed = rng.gen_bool(0.4);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && (directed || u < v) && rng.gen_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, directed, false, edges).unwrap();
            for mode in [PathMode::Cycle, PathMode::AnyPath, PathMode::StPath(0, n - 1)] {
                let dp = longest_dp(&g, mode);
                let mut budget = u64::MAX;
                let dfs = longest_dfs(&g, mode, &mut budget).unwrap();
                assert_eq!(dp.0, dfs.0, "mode {mode:?} on {:?}", g);
            }
        }
    }

    #[test]
    fn small_k_matches_exact() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let caps = Caps::default();
        for _ in 0..150 {
            let n = rng.gen_range(1..=8);
            let directed = rng.gen_bool(0.5);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && (directed || u < v) && rng.gen_bool(0.25) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, directed, false, edges).unwrap();
            let (len, _) = longest(&g, PathMode::Cycle, &caps).unwrap();
            for k in 0..=4u64 {
                let expected = len > 0 && len >= k;
                assert_eq!(
                    has_cycle_at_least_small_k(&g, k),
                    expected,
                    "k={k} len={len} g={g:?}"
                );
            }
            let (plen, _) = longest(&g, PathMode::AnyPath, &caps).unwrap();
            for k in 0..=3u64 {
                assert_eq!(has_path_at_least_small_k(&g, k), plen >= k, "k={k} g={g:?}");
            }
        }
    }
}

//! Paths with forbidden pairs: exact search oracles and the
//! subset-enumeration FPT algorithm parameterized by a vertex cover of the
//! pair set.

use crate::graph::Graph;
use crate::{Error, Result};
use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FpObjective {
    /// Any s-t path respecting the pairs.
    Exists,
    /// Minimum-vertex s-t path.
    Shortest,
    /// Maximum-vertex s-t path.
    Longest,
    /// Maximum-vertex path with free endpoints.
    LongestAnywhere,
}

/// Exact optimum over simple paths containing at most one vertex of every
/// forbidden pair. Returns (vertex count, path).
pub fn fp_path(
    g: &Graph,
    st: Option<(usize, usize)>,
    pairs: &[(usize, usize)],
    objective: FpObjective,
    mut budget: u64,
) -> Result<Option<(u64, Vec<usize>)>> {
    assert!(!g.directed);
    let n = g.n;
    let adj = g.adj();
    let mut partners = vec![Vec::new(); n];
    for &(u, v) in pairs {
        partners[u].push(v);
        partners[v].push(u);
    }
    // admissible lower bounds on remaining hops for the shortest objective
    let dist_to_t: Option<Vec<u64>> = match (objective, st) {
        (FpObjective::Shortest | FpObjective::Exists, Some((_, t))) => Some(bfs_dist(&adj, t)),
        _ => None,
    };

    struct Ctx<'a> {
        adj: &'a [Vec<usize>],
        partners: &'a [Vec<usize>],
        t: Option<usize>,
        objective: FpObjective,
        dist_to_t: Option<&'a [u64]>,
        n: usize,
    }

    let mut best: Option<(u64, Vec<usize>)> = None;

    fn improves(objective: FpObjective, best: &Option<(u64, Vec<usize>)>, len: u64) -> bool {
        match best {
            None => true,
            Some((b, _)) => match objective {
                FpObjective::Shortest => len < *b,
                FpObjective::Exists => false,
                _ => len > *b,
            },
        }
    }

    fn dfs(
        ctx: &Ctx,
        v: usize,
        visited: &mut [bool],
        blocked: &mut [u32],
        path: &mut Vec<usize>,
        best: &mut Option<(u64, Vec<usize>)>,
        budget: &mut u64,
    ) -> Result<bool> {
        if *budget == 0 {
            return Err(Error::CapExceeded("fp_path: step budget exhausted".into()));
        }
        *budget -= 1;
        let at_goal = match ctx.t {
            Some(t) => v == t,
            None => true,
        };
        if at_goal && improves(ctx.objective, best, path.len() as u64) {
            *best = Some((path.len() as u64, path.clone()));
            if ctx.objective == FpObjective::Exists {
                return Ok(true);
            }
        }
        if ctx.t == Some(v) {
            // an s-t path never profits from leaving t and coming back
            return Ok(false);
        }
        // pruning
        match ctx.objective {
            FpObjective::Shortest | FpObjective::Exists => {
                if let (Some(d), Some((b, _))) = (ctx.dist_to_t, best.as_ref()) {
                    if d[v] == u64::MAX || path.len() as u64 + d[v] >= *b {
                        return Ok(false);
                    }
                }
                if ctx.dist_to_t.map_or(false, |d| d[v] == u64::MAX) {
                    return Ok(false);
                }
            }
            _ => {
                if let Some((b, _)) = best.as_ref() {
                    if path.len() as u64 + (ctx.n - path.len()) as u64 <= *b {
                        return Ok(false);
                    }
                }
            }
        }
        for &w in &ctx.adj[v] {
            if visited[w] || blocked[w] > 0 {
                continue;
            }
            visited[w] = true;
            for &p in &ctx.partners[w] {
                blocked[p] += 1;
            }
            path.push(w);
            let stop = dfs(ctx, w, visited, blocked, path, best, budget)?;
            path.pop();
            for &p in &ctx.partners[w] {
                blocked[p] -= 1;
            }
            visited[w] = false;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let starts: Vec<usize> = match st {
        Some((s, _)) => vec![s],
        None => (0..n).collect(),
    };
    let ctx = Ctx {
        adj: &adj,
        partners: &partners,
        t: st.map(|x| x.1),
        objective,
        dist_to_t: dist_to_t.as_deref(),
        n,
    };
    for s in starts {
        let mut visited = vec![false; n];
        let mut blocked = vec![0u32; n];
        visited[s] = true;
        for &p in &partners[s] {
            blocked[p] += 1;
        }
        if blocked[s] > 0 {
            continue; // s forms a pair with itself: impossible by validation
        }
        let mut path = vec![s];
        let stop = dfs(&ctx, s, &mut visited, &mut blocked, &mut path, &mut best, &mut budget)?;
        if stop {
            break;
        }
    }
    Ok(best)
}

fn bfs_dist(adj: &[Vec<usize>], from: usize) -> Vec<u64> {
    let mut dist = vec![u64::MAX; adj.len()];
    dist[from] = 0;
    let mut q = VecDeque::from([from]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if dist[w] == u64::MAX {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

/// The subset-enumeration algorithm for SHORTEST s-t PATH WITH FORBIDDEN
/// PAIRS parameterized by a vertex cover `X` of the pair set: for every
/// conflict-free subset X' of X, delete X \ X' and all partners of X', and
/// take a BFS shortest path. Returns the optimum vertex count and the exact
/// number of enumerated subsets (always 2^|X|).
pub fn fpt_shortest_fp_path(
    g: &Graph,
    s: usize,
    t: usize,
    pairs: &[(usize, usize)],
    x: &[usize],
    cap: usize,
) -> Result<(Option<u64>, u64)> {
    assert!(!g.directed);
    let n = g.n;
    let mut in_x = vec![false; n];
    for &v in x {
        in_x[v] = true;
    }
    for &(u, v) in pairs {
        if !in_x[u] && !in_x[v] {
            return Err(Error::Witness(format!(
                "X does not cover the forbidden pair ({u}, {v})"
            )));
        }
    }
    if x.len() > cap {
        return Err(Error::CapExceeded(format!(
            "fpt_shortest_fp_path: |X| = {} exceeds cap {cap}",
            x.len()
        )));
    }
    let adj = g.adj();
    let mut best: Option<u64> = None;
    let mut enumerated = 0u64;
    for mask in 0u64..(1u64 << x.len()) {
        enumerated += 1;
        let mut keep = vec![true; n];
        let mut chosen = vec![false; n];
        for (i, &v) in x.iter().enumerate() {
            if mask & (1 << i) != 0 {
                chosen[v] = true;
            } else {
                keep[v] = false;
            }
        }
        // conflict-free X' and partner deletions
        let mut ok = true;
        for &(u, v) in pairs {
            if chosen[u] && chosen[v] {
                ok = false;
                break;
            }
            if chosen[u] {
                keep[v] = false;
            }
            if chosen[v] {
                keep[u] = false;
            }
        }
        if !ok || !keep[s] || !keep[t] {
            continue;
        }
        // BFS shortest path in the reduced graph
        let mut dist = vec![u64::MAX; n];
        dist[s] = 1;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            if v == t {
                break;
            }
            for &w in &adj[v] {
                if keep[w] && dist[w] == u64::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        if dist[t] != u64::MAX {
            best = Some(best.map_or(dist[t], |b: u64| b.min(dist[t])));
        }
    }
    Ok((best, enumerated))
}

/// Multicolored clique oracle for the Theorem-9 equivalence tests: does `g`
/// contain a clique with one vertex of each of the `k` colors?
pub fn multicolored_clique(g: &Graph, coloring: &[usize], k: usize) -> bool {
    assert!(!g.directed);
    let adj = g.adj();
    let mut by_color = vec![Vec::new(); k];
    for (v, &c) in coloring.iter().enumerate() {
        if c < k {
            by_color[c].push(v);
        }
    }
    fn rec(by_color: &[Vec<usize>], adj: &[Vec<usize>], c: usize, chosen: &mut Vec<usize>) -> bool {
        if c == by_color.len() {
            return true;
        }
        for &v in &by_color[c] {
            if chosen.iter().all(|&u| adj[u].contains(&v)) {
                chosen.push(v);
                if rec(by_color, adj, c + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    rec(&by_color, &adj, 0, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        // s=0, a=1, b=2, t=3: s-a-t and s-b-t
        Graph::simple_undirected(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn no_pairs_is_plain_path_search() {
        let g = diamond();
        let (len, _) = fp_path(&g, Some((0, 3)), &[], FpObjective::Shortest, 1 << 20)
            .unwrap()
            .unwrap();
        assert_eq!(len, 3);
        let (len, _) = fp_path(&g, Some((0, 3)), &[], FpObjective::Longest, 1 << 20)
            .unwrap()
            .unwrap();
        assert_eq!(len, 3);
    }

    #[test]
    fn conflicting_middle_vertices() {
        let g = diamond();
        let h = [(1usize, 2usize)];
        let res = fp_path(&g, Some((0, 3)), &h, FpObjective::Exists, 1 << 20).unwrap();
        assert!(res.is_some());
        let (len, path) = fp_path(&g, Some((0, 3)), &h, FpObjective::Shortest, 1 << 20)
            .unwrap()
            .unwrap();
        assert_eq!(len, 3);
        assert!(path == vec![0, 1, 3] || path == vec![0, 2, 3]);
    }

    #[test]
    fn pair_on_every_path_blocks() {
        // s-a-t only, H = {{s,a}}
        let g = Graph::simple_undirected(3, vec![(0, 1), (1, 2)]).unwrap();
        let h = [(0usize, 1usize)];
        assert!(fp_path(&g, Some((0, 2)), &h, FpObjective::Exists, 1 << 20).unwrap().is_none());
    }

    #[test]
    fn theorem10_hand_example() {
        // s-a-t and s-b-t, H = {{a,t}}, X = {a}
        let g = diamond();
        let h = [(1usize, 3usize)];
        let (best, count) = fpt_shortest_fp_path(&g, 0, 3, &h, &[1], 24).unwrap();
        assert_eq!(best, Some(3));
        assert_eq!(count, 2);
        // empty X with empty H is plain BFS
        let (best, count) = fpt_shortest_fp_path(&g, 0, 3, &[], &[], 24).unwrap();
        assert_eq!(best, Some(3));
        assert_eq!(count, 1);
    }

    #[test]
    fn fpt_matches_brute_force() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let n = rng.gen_range(2..=9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::simple_undirected(n, edges).unwrap();
            let s = 0;
            let t = n - 1;
            let x: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let mut pairs = Vec::new();
            for &u in &x {
                for v in 0..n {
                    if v != u && rng.gen_bool(0.2) {
                        pairs.push((u.min(v), u.max(v)));
                    }
                }
            }
            pairs.sort_unstable();
            pairs.dedup();
            if pairs.iter().any(|&(u, v)| (u, v) == (s, t)) {
                continue;
            }
            let (fast, count) = fpt_shortest_fp_path(&g, s, t, &pairs, &x, 24).unwrap();
            assert_eq!(count, 1 << x.len());
            let brute = fp_path(&g, Some((s, t)), &pairs, FpObjective::Shortest, 1 << 24)
                .unwrap()
                .map(|r| r.0);
            assert_eq!(fast, brute, "n={n} x={x:?} pairs={pairs:?}");
        }
    }
}

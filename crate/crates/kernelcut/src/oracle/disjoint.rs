//! Exact backtracking solvers for DISJOINT PATHS and DISJOINT CYCLES on
//! small graphs, with certificates.

use crate::graph::Graph;
use crate::{Error, Result};

/// Vertex-disjoint paths connecting every request pair (undirected). Returns
/// one path per pair, in request order.
pub fn disjoint_paths(
    g: &Graph,
    pairs: &[(usize, usize)],
    mut budget: u64,
) -> Result<Option<Vec<Vec<usize>>>> {
    assert!(!g.directed);
    let adj = g.adj();
    let mut used = vec![false; g.n];
    for &(s, t) in pairs {
        if used[s] || used[t] {
            // overlapping terminals cannot be connected disjointly
            return Ok(None);
        }
        used[s] = true;
        used[t] = true;
    }
    let mut paths: Vec<Vec<usize>> = Vec::new();

    fn route(
        adj: &[Vec<usize>],
        pairs: &[(usize, usize)],
        i: usize,
        used: &mut [bool],
        paths: &mut Vec<Vec<usize>>,
        budget: &mut u64,
    ) -> Result<bool> {
        if i == pairs.len() {
            return Ok(true);
        }
        let (s, t) = pairs[i];
        let mut path = vec![s];
        extend(adj, pairs, i, s, t, used, paths, &mut path, budget)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        adj: &[Vec<usize>],
        pairs: &[(usize, usize)],
        i: usize,
        cur: usize,
        t: usize,
        used: &mut [bool],
        paths: &mut Vec<Vec<usize>>,
        path: &mut Vec<usize>,
        budget: &mut u64,
    ) -> Result<bool> {
        if *budget == 0 {
            return Err(Error::CapExceeded("disjoint_paths: step budget exhausted".into()));
        }
        *budget -= 1;
        for &w in &adj[cur] {
            if w == t {
                path.push(t);
                paths.push(path.clone());
                if route(adj, pairs, i + 1, used, paths, budget)? {
                    return Ok(true);
                }
                paths.pop();
                path.pop();
                continue;
            }
            if used[w] {
                continue;
            }
            used[w] = true;
            path.push(w);
            if extend(adj, pairs, i, w, t, used, paths, path, budget)? {
                return Ok(true);
            }
            path.pop();
            used[w] = false;
        }
        Ok(false)
    }

    if route(&adj, pairs, 0, &mut used, &mut paths, &mut budget)? {
        Ok(Some(paths))
    } else {
        Ok(None)
    }
}

/// `k` vertex-disjoint cycles (undirected), as vertex sequences.
pub fn disjoint_cycles(g: &Graph, k: u64, mut budget: u64) -> Result<Option<Vec<Vec<usize>>>> {
    assert!(!g.directed);
    let adj = g.adj();
    let mut used = vec![false; g.n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();

    // Cycles are enumerated by ascending minimum vertex: either `v` is unused
    // by every remaining cycle, or it is the minimum vertex of the next one.
    fn rec(
        adj: &[Vec<usize>],
        n: usize,
        v: usize,
        remaining: u64,
        used: &mut [bool],
        cycles: &mut Vec<Vec<usize>>,
        budget: &mut u64,
    ) -> Result<bool> {
        if remaining == 0 {
            return Ok(true);
        }
        if v >= n || n - v < 3 * remaining as usize {
            return Ok(false);
        }
        if *budget == 0 {
            return Err(Error::CapExceeded("disjoint_cycles: step budget exhausted".into()));
        }
        *budget -= 1;
        if used[v] {
            return rec(adj, n, v + 1, remaining, used, cycles, budget);
        }
        // cycles through v using only unused vertices > v
        let mut path = vec![v];
        used[v] = true;
        if cycle_through(adj, n, v, v, remaining, used, cycles, &mut path, budget)? {
            return Ok(true);
        }
        used[v] = false;
        // or skip v entirely
        used[v] = true;
        let ok = rec(adj, n, v + 1, remaining, used, cycles, budget)?;
        used[v] = false;
        Ok(ok)
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_through(
        adj: &[Vec<usize>],
        n: usize,
        root: usize,
        cur: usize,
        remaining: u64,
        used: &mut [bool],
        cycles: &mut Vec<Vec<usize>>,
        path: &mut Vec<usize>,
        budget: &mut u64,
    ) -> Result<bool> {
        if *budget == 0 {
            return Err(Error::CapExceeded("disjoint_cycles: step budget exhausted".into()));
        }
        *budget -= 1;
        if path.len() >= 3 && adj[cur].contains(&root) {
            cycles.push(path.clone());
            if rec(adj, n, root + 1, remaining - 1, used, cycles, budget)? {
                return Ok(true);
            }
            cycles.pop();
        }
        for &w in &adj[cur] {
            if w <= root || used[w] {
                continue;
            }
            used[w] = true;
            path.push(w);
            if cycle_through(adj, n, root, w, remaining, used, cycles, path, budget)? {
                return Ok(true);
            }
            path.pop();
            used[w] = false;
        }
        Ok(false)
    }

    if rec(&adj, g.n, 0, k, &mut used, &mut cycles, &mut budget)? {
        Ok(Some(cycles))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_triangles_have_two_cycles() {
        let g = Graph::simple_undirected(6, vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
            .unwrap();
        let cycles = disjoint_cycles(&g, 2, 1 << 20).unwrap().unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(disjoint_cycles(&g, 3, 1 << 20).unwrap().is_none());
    }

    #[test]
    fn p4_cannot_route_nested_pairs() {
        let g = Graph::simple_undirected(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(disjoint_paths(&g, &[(0, 3), (1, 2)], 1 << 20).unwrap().is_none());
        assert!(disjoint_paths(&g, &[(1, 2)], 1 << 20).unwrap().is_some());
    }

    #[test]
    fn k4_routes_two_pairs() {
        let g = Graph::simple_undirected(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let paths = disjoint_paths(&g, &[(0, 1), (2, 3)], 1 << 20).unwrap().unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0], vec![0, 1]);
        assert_eq!(paths[1], vec![2, 3]);
    }
}

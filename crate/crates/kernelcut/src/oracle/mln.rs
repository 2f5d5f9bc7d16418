//! Exact max leaf number: the maximum number of leaves over all spanning
//! trees, summed over connected components.

use crate::graph::Graph;
use crate::{Error, Result};

/// Exact max leaf number. Per component: a spanning tree with internal
/// vertex set I exists iff I induces a connected dominating subgraph, so the
/// max leaf count is `n - (minimum connected dominating set)`; single
/// vertices contribute 0 and single edges contribute 2.
pub fn max_leaf_number(g: &Graph, component_cap: usize) -> Result<u64> {
    let und = g.underlying_undirected();
    let mut total = 0u64;
    for comp in und.connected_components() {
        let (h, _) = und.induced(&comp);
        let n = h.n;
        if n > component_cap {
            return Err(Error::CapExceeded(format!(
                "max_leaf_number: component of size {n} exceeds cap {component_cap}"
            )));
        }
        total += match n {
            1 => 0,
            2 => 2,
            _ => {
                let adj = h.adj();
                let mut nbr_mask = vec![0u32; n];
                for v in 0..n {
                    for &w in &adj[v] {
                        nbr_mask[v] |= 1 << w;
                    }
                }
                let full = (1u32 << n) - 1;
                let mut best_cds = n as u32;
                for mask in 1u32..=full {
                    if mask.count_ones() >= best_cds {
                        continue;
                    }
                    // dominating
                    let mut dominated = mask;
                    let mut m = mask;
                    while m != 0 {
                        let v = m.trailing_zeros() as usize;
                        m &= m - 1;
                        dominated |= nbr_mask[v];
                    }
                    if dominated != full {
                        continue;
                    }
                    // connected within mask
                    let start = mask.trailing_zeros() as usize;
                    let mut seen = 1u32 << start;
                    let mut stack = vec![start];
                    while let Some(v) = stack.pop() {
                        let fresh = nbr_mask[v] & mask & !seen;
                        let mut f = fresh;
                        seen |= fresh;
                        while f != 0 {
                            let w = f.trailing_zeros() as usize;
                            f &= f - 1;
                            stack.push(w);
                        }
                    }
                    if seen == mask {
                        best_cds = mask.count_ones();
                    }
                }
                (n as u32 - best_cds) as u64
            }
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_have_two_leaves() {
        for n in 3..=8 {
            let g =
                Graph::simple_undirected(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap();
            assert_eq!(max_leaf_number(&g, 15).unwrap(), 2);
        }
    }

    #[test]
    fn stars_are_their_own_best_tree() {
        for n in 2..=9 {
            let g = Graph::simple_undirected(n + 1, (1..=n).map(|i| (0, i)).collect()).unwrap();
            assert_eq!(max_leaf_number(&g, 15).unwrap(), n as u64);
        }
    }

    #[test]
    fn petersen_is_six() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let g = Graph::simple_undirected(10, edges).unwrap();
        assert_eq!(max_leaf_number(&g, 15).unwrap(), 6);
    }

    #[test]
    fn disconnected_sums_and_isolated_vertices_vanish() {
        // triangle + K2 + isolated vertex
        let g = Graph::simple_undirected(6, vec![(0, 1), (0, 2), (1, 2), (3, 4)]).unwrap();
        assert_eq!(max_leaf_number(&g, 15).unwrap(), 2 + 2);
    }

    #[test]
    fn matches_spanning_tree_enumeration() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        // independent oracle: enumerate spanning trees as edge subsets
        fn brute(g: &Graph) -> u64 {
            let comps = g.connected_components();
            let mut total = 0u64;
            for comp in comps {
                let (h, _) = g.induced(&comp);
                let n = h.n;
                if n == 1 {
                    continue;
                }
                let m = h.edge_count();
                let edges = h.edges();
                let mut best = 0u64;
                for mask in 0u32..(1 << m) {
                    if mask.count_ones() as usize != n - 1 {
                        continue;
                    }
                    let mut deg = vec![0u32; n];
                    let mut dsu: Vec<usize> = (0..n).collect();
                    fn find(dsu: &mut Vec<usize>, v: usize) -> usize {
                        if dsu[v] != v {
                            dsu[v] = find(dsu, dsu[v]);
                        }
                        dsu[v]
                    }
                    let mut acyclic = true;
                    for (i, &(u, v)) in edges.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            deg[u] += 1;
                            deg[v] += 1;
                            let (ru, rv) = (find(&mut dsu, u), find(&mut dsu, v));
                            if ru == rv {
                                acyclic = false;
                                break;
                            }
                            dsu[ru] = rv;
                        }
                    }
                    if acyclic {
                        best = best.max(deg.iter().filter(|&&d| d == 1).count() as u64);
                    }
                }
                total += best;
            }
            total
        }
        for _ in 0..40 {
            let n = rng.gen_range(2..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            if edges.len() > 12 {
                edges.truncate(12);
            }
            let g = Graph::simple_undirected(n, edges).unwrap();
            assert_eq!(max_leaf_number(&g, 15).unwrap(), brute(&g), "g={g:?}");
        }
    }
}

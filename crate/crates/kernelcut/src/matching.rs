//! Maximum bipartite matching and the restriction property of maximum
//! matchings that powers the marking rules: for a maximum matching M with
//! left endpoints X_M, any demand set coverable in the full graph is
//! coverable inside the subgraph induced on X_M and the right side.

use crate::{Error, Result};

/// Bipartite graph with an explicit left side (candidate supply, e.g. the
/// independent-set vertices) and right side (demand, e.g. pair-vertices).
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    adj: Vec<Vec<usize>>, // left index -> sorted right indices
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); left];
        for &(l, r) in edges {
            if l >= left || r >= right {
                return Err(Error::Parse(format!("bipartite edge ({l}, {r}) out of range")));
            }
            adj[l].push(r);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
            if a.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse("duplicate bipartite edge".into()));
            }
        }
        Ok(BipartiteGraph { left, right, adj })
    }

    pub fn neighbors(&self, l: usize) -> &[usize] {
        &self.adj[l]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum()
    }

    /// Subgraph keeping only the given left vertices (right side unchanged,
    /// original indices preserved via the returned map new -> old).
    pub fn restrict_left(&self, keep: &[usize]) -> (BipartiteGraph, Vec<usize>) {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let adj: Vec<Vec<usize>> = keep.iter().map(|&l| self.adj[l].clone()).collect();
        (BipartiteGraph { left: keep.len(), right: self.right, adj }, keep)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// Matched pairs (left index, right index), sorted by left index.
    pub pairs: Vec<(usize, usize)>,
    /// X_M: the left endpoints of the matching, sorted.
    pub matched_left: Vec<usize>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

/// Hopcroft-Karp style layered augmentation. Deterministic: left vertices are
/// processed in ascending index and neighbor lists are scanned in ascending
/// index, so identical inputs produce identical matchings.
pub fn maximum_matching(h: &BipartiteGraph) -> Matching {
    let mut match_l = vec![usize::MAX; h.left];
    let mut match_r = vec![usize::MAX; h.right];
    loop {
        // BFS layering from free left vertices
        let mut dist = vec![usize::MAX; h.left];
        let mut queue = std::collections::VecDeque::new();
        for l in 0..h.left {
            if match_l[l] == usize::MAX {
                dist[l] = 0;
                queue.push_back(l);
            }
        }
        let mut found_free = false;
        while let Some(l) = queue.pop_front() {
            for &r in h.neighbors(l) {
                let l2 = match_r[r];
                if l2 == usize::MAX {
                    found_free = true;
                } else if dist[l2] == usize::MAX {
                    dist[l2] = dist[l] + 1;
                    queue.push_back(l2);
                }
            }
        }
        if !found_free {
            break;
        }
        // layered DFS augmentation, ascending left index
        fn augment(
            h: &BipartiteGraph,
            l: usize,
            dist: &mut [usize],
            match_l: &mut [usize],
            match_r: &mut [usize],
        ) -> bool {
            let d = std::mem::replace(&mut dist[l], usize::MAX);
            for &r in h.neighbors(l) {
                let l2 = match_r[r];
                if l2 == usize::MAX
                    || (dist[l2] == d + 1 && augment(h, l2, dist, match_l, match_r))
                {
                    match_l[l] = r;
                    match_r[r] = l;
                    return true;
                }
            }
            false
        }
        let mut progress = false;
        for l in 0..h.left {
            if match_l[l] == usize::MAX && dist[l] == 0 {
                progress |= augment(h, l, &mut dist, &mut match_l, &mut match_r);
            }
        }
        if !progress {
            break;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..h.left)
        .filter(|&l| match_l[l] != usize::MAX)
        .map(|l| (l, match_l[l]))
        .collect();
    let matched_left = pairs.iter().map(|p| p.0).collect();
    Matching { pairs, matched_left }
}

/// Is there a matching covering every vertex of `demand`? Decided by running
/// a maximum matching on the subgraph restricted to the demanded right
/// vertices.
pub fn coverable(h: &BipartiteGraph, demand: &[usize]) -> bool {
    let mut want = vec![false; h.right];
    for &r in demand {
        assert!(r < h.right, "demand vertex out of range");
        want[r] = true;
    }
    let mut dedup = 0usize;
    for r in 0..h.right {
        if want[r] {
            dedup += 1;
        }
    }
    let adj: Vec<Vec<usize>> = (0..h.left)
        .map(|l| h.neighbors(l).iter().copied().filter(|&r| want[r]).collect())
        .collect();
    let sub = BipartiteGraph { left: h.left, right: h.right, adj };
    maximum_matching(&sub).size() == dedup
}

/// Exhaustively test the restriction property on `h`: with M a maximum
/// matching and X_M its left endpoints, every coverable demand set must stay
/// coverable after deleting the unmatched left vertices. Errors when the
/// right side is too large for the 2^|right| sweep.
pub fn theorem2_holds(h: &BipartiteGraph, right_cap: usize) -> Result<bool> {
    if h.right > right_cap {
        return Err(Error::CapExceeded(format!(
            "theorem2_holds requires |right| <= {right_cap}, got {}",
            h.right
        )));
    }
    let m = maximum_matching(h);
    let (restricted, _) = h.restrict_left(&m.matched_left);
    for mask in 0u32..(1u32 << h.right) {
        let demand: Vec<usize> = (0..h.right).filter(|&r| mask & (1 << r) != 0).collect();
        if coverable(h, &demand) && !coverable(&restricted, &demand) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Brute-force maximum matching by trying every subset of edges.
    fn brute_max_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
        let m = edges.len();
        assert!(m <= 20);
        let mut best = 0;
        'outer: for mask in 0u32..(1 << m) {
            let mut ul = 0u64;
            let mut ur = 0u64;
            let mut size = 0;
            for (i, &(l, r)) in edges.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    if ul & (1 << l) != 0 || ur & (1 << r) != 0 {
                        continue 'outer;
                    }
                    ul |= 1 << l;
                    ur |= 1 << r;
                    size += 1;
                }
            }
            best = best.max(size);
        }
        let _ = (left, right);
        best
    }

    #[test]
    fn empty_edge_set() {
        let h = BipartiteGraph::new(3, 3, &[]).unwrap();
        assert_eq!(maximum_matching(&h).size(), 0);
    }

    #[test]
    fn small_example_size_two() {
        // left {x1,x2}, right {y1,y2,y3}, edges x1y1, x1y2, x2y2
        let h = BipartiteGraph::new(2, 3, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(maximum_matching(&h).size(), 2);
        assert_eq!(brute_max_matching(2, 3, &[(0, 0), (0, 1), (1, 1)]), 2);
    }

    #[test]
    fn complete_bipartite_saturates() {
        for (a, b) in [(2, 5), (4, 3), (3, 3)] {
            let edges: Vec<(usize, usize)> =
                (0..a).flat_map(|l| (0..b).map(move |r| (l, r))).collect();
            let h = BipartiteGraph::new(a, b, &edges).unwrap();
            assert_eq!(maximum_matching(&h).size(), a.min(b));
        }
    }

    #[test]
    fn coverable_cases() {
        let h = BipartiteGraph::new(1, 2, &[(0, 0), (0, 1)]).unwrap();
        assert!(coverable(&h, &[]));
        assert!(coverable(&h, &[0]));
        assert!(!coverable(&h, &[0, 1])); // both demands share the single left vertex
    }

    #[test]
    fn coverable_matches_matching_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let left = rng.gen_range(1..=6);
            let right = rng.gen_range(1..=6);
            let mut edges = Vec::new();
            for l in 0..left {
                for r in 0..right {
                    if rng.gen_bool(0.4) {
                        edges.push((l, r));
                    }
                }
            }
            let h = BipartiteGraph::new(left, right, &edges).unwrap();
            let demand: Vec<usize> = (0..right).filter(|_| rng.gen_bool(0.5)).collect();
            let via_matching = {
                let adj: Vec<Vec<usize>> = (0..left)
                    .map(|l| {
                        h.neighbors(l).iter().copied().filter(|r| demand.contains(r)).collect()
                    })
                    .collect();
                let sub = BipartiteGraph { left, right, adj };
                maximum_matching(&sub).size() == demand.len()
            };
            assert_eq!(coverable(&h, &demand), via_matching);
        }
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let left = rng.gen_range(1..=7);
            let right = rng.gen_range(1..=(14 - left).min(7));
            let mut edges = Vec::new();
            for l in 0..left {
                for r in 0..right {
                    if rng.gen_bool(0.35) {
                        edges.push((l, r));
                    }
                }
            }
            if edges.len() > 20 {
                edges.truncate(20);
            }
            let h = BipartiteGraph::new(left, right, &edges).unwrap();
            assert_eq!(maximum_matching(&h).size(), brute_max_matching(left, right, &edges));
        }
    }

    #[test]
    fn deterministic_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let left = rng.gen_range(1..=8);
            let right = rng.gen_range(1..=8);
            let mut edges = Vec::new();
            for l in 0..left {
                for r in 0..right {
                    if rng.gen_bool(0.3) {
                        edges.push((l, r));
                    }
                }
            }
            let h = BipartiteGraph::new(left, right, &edges).unwrap();
            assert_eq!(maximum_matching(&h).pairs, maximum_matching(&h).pairs);
        }
    }

    #[test]
    fn theorem2_on_stars_and_empty() {
        let empty = BipartiteGraph::new(0, 0, &[]).unwrap();
        assert!(theorem2_holds(&empty, 16).unwrap());
        // adversarial star: one left vertex adjacent to many right vertices
        let star =
            BipartiteGraph::new(1, 10, &(0..10).map(|r| (0, r)).collect::<Vec<_>>()).unwrap();
        assert!(theorem2_holds(&star, 16).unwrap());
        let too_big = BipartiteGraph::new(1, 20, &[]).unwrap();
        assert!(theorem2_holds(&too_big, 16).is_err());
    }
}

//! Resource caps for the exact oracles and FPT solvers.
//!
//! All budgets are step counts, not wall-clock times, so verdicts are
//! deterministic regardless of machine speed or `--jobs` level. The
//! `KERNELCUT_TIMEOUT_MS` override is converted into a step budget at a
//! fixed rate.

/// Steps charged per "millisecond" of the `KERNELCUT_TIMEOUT_MS` override.
const STEPS_PER_MS: u64 = 200_000;

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Max vertex count for the bitmask DP in `longest_cycle_or_path`.
    pub dp_vertices: usize,
    /// Max vertex count for the DFS fallback of `longest_cycle_or_path`.
    pub dfs_vertices: usize,
    /// Max vertex count for the Held-Karp DP on labeled multigraphs.
    pub held_karp_vertices: usize,
    /// Max `|right|` for the exhaustive Theorem-2 subset check.
    pub theorem2_right: usize,
    /// Max modulator size for the cluster FPT enumeration.
    pub cluster_fpt_ell: usize,
    /// Max `|X|` for the forbidden-pairs subset enumeration.
    pub fp_subset_vertices: usize,
    /// Max component size for the exact max-leaf-number computation.
    pub mln_component: usize,
    /// Search-step budget for backtracking oracles.
    pub step_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            dp_vertices: 22,
            dfs_vertices: 30,
            held_karp_vertices: 24,
            theorem2_right: 16,
            cluster_fpt_ell: 4,
            fp_subset_vertices: 24,
            mln_component: 15,
            step_budget: 120_000 * STEPS_PER_MS,
        }
    }
}

impl Caps {
    /// Defaults overridden by `KERNELCUT_ORACLE_CAP` (bitmask DP vertex cap)
    /// and `KERNELCUT_TIMEOUT_MS` (converted to a deterministic step budget).
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var("KERNELCUT_ORACLE_CAP") {
            if let Ok(n) = v.trim().parse::<usize>() {
                caps.dp_vertices = n.min(26);
                caps.dfs_vertices = caps.dfs_vertices.max(n);
            }
        }
        if let Ok(v) = std::env::var("KERNELCUT_TIMEOUT_MS") {
            if let Ok(ms) = v.trim().parse::<u64>() {
                caps.step_budget = ms.saturating_mul(STEPS_PER_MS);
            }
        }
        caps
    }
}

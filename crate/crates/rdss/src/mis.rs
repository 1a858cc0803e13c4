//! Exact maximum independent set over an explicit adjacency list of bitsets.
//!
//! Branch and bound with a greedy clique-cover upper bound. Deterministic:
//! branch order and tie-breaking are fixed, so the same input always yields
//! the same witness set.

use crate::bitset::BitSet;

pub struct MisInstance<'a> {
    adj: &'a [BitSet],
    n: usize,
    /// Proven upper bound on the independence number; the search stops as
    /// soon as an independent set of this size is found.
    cap: usize,
}

impl<'a> MisInstance<'a> {
    pub fn new(adj: &'a [BitSet]) -> Self {
        MisInstance {
            adj,
            n: adj.len(),
            cap: usize::MAX,
        }
    }

    /// Like [`MisInstance::new`], but with an externally proven bound on
    /// the independence number (e.g. a spectral bound).
    pub fn with_cap(adj: &'a [BitSet], cap: usize) -> Self {
        MisInstance {
            adj,
            n: adj.len(),
            cap,
        }
    }

    /// Greedy clique cover of `p` in vertex order; each vertex is labeled
    /// with the number of cliques open once it is covered. Any independent
    /// set inside the first k cliques has at most k vertices, so the label
    /// is a valid bound for the prefix ending at that vertex.
    fn clique_cover_order(&self, p: &BitSet) -> Vec<(usize, usize)> {
        let mut order = Vec::with_capacity(p.count());
        let mut remaining = p.clone();
        let mut cliques = 0usize;
        while let Some(v) = remaining.first() {
            cliques += 1;
            remaining.clear(v);
            order.push((v, cliques));
            // Grow a clique around v restricted to `remaining`.
            let mut common = remaining.clone();
            common.intersect_with(&self.adj[v]);
            while let Some(u) = common.first() {
                remaining.clear(u);
                order.push((u, cliques));
                common.clear(u);
                common.intersect_with(&self.adj[u]);
            }
        }
        order
    }

    /// Returns false if the node budget ran out (search incomplete).
    fn expand(
        &self,
        p: &BitSet,
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
        nodes: &mut usize,
        budget: usize,
    ) -> bool {
        if *nodes >= budget {
            return false;
        }
        *nodes += 1;
        if current.len() > best.len() {
            *best = current.clone();
        }
        if p.is_empty() {
            return true;
        }
        // Branch in reverse cover order: labels are non-increasing from the
        // back, so the first failing label prunes the whole remainder.
        let order = self.clique_cover_order(p);
        let mut live = p.clone();
        for &(v, label) in order.iter().rev() {
            if best.len() >= self.cap || current.len() + label <= best.len() {
                return true;
            }
            let mut p_in = live.clone();
            p_in.clear(v);
            p_in.subtract(&self.adj[v]);
            current.push(v);
            let done = self.expand(&p_in, current, best, nodes, budget);
            current.pop();
            if !done {
                return false;
            }
            live.clear(v);
        }
        true
    }

    /// Returns one maximum independent set (sorted vertex indices).
    pub fn solve(&self) -> Vec<usize> {
        self.solve_budgeted(usize::MAX)
            .expect("unlimited budget always completes")
    }

    /// Like [`MisInstance::solve`], but gives up (returning `None`) after
    /// expanding `budget` search nodes.
    pub fn solve_budgeted(&self, budget: usize) -> Option<Vec<usize>> {
        let p = BitSet::full(self.n);
        let mut best = Vec::new();
        let mut current = Vec::new();
        let mut nodes = 0usize;
        if !self.expand(&p, &mut current, &mut best, &mut nodes, budget) {
            return None;
        }
        best.sort_unstable();
        Some(best)
    }
}

/// Convenience wrapper: maximum independent set of the graph given by `adj`.
pub fn max_independent_set(adj: &[BitSet]) -> Vec<usize> {
    MisInstance::new(adj).solve()
}

/// Maximum independent set with a proven upper bound on its size; exact,
/// but allowed to stop as soon as the bound is attained.
pub fn max_independent_set_capped(adj: &[BitSet], cap: usize) -> Vec<usize> {
    MisInstance::with_cap(adj, cap).solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<BitSet> {
        let mut adj = vec![BitSet::new(n); n];
        for &(u, v) in edges {
            adj[u].set(v);
            adj[v].set(u);
        }
        adj
    }

    #[test]
    fn c5_alpha_two() {
        let adj = adj_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(max_independent_set(&adj).len(), 2);
    }

    #[test]
    fn k4_alpha_one() {
        let adj = adj_from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(max_independent_set(&adj).len(), 1);
    }

    #[test]
    fn edgeless_takes_all() {
        let adj = vec![BitSet::new(6); 6];
        assert_eq!(max_independent_set(&adj), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn matches_brute_force_on_small_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let adj = adj_from_edges(n, &edges);
            let got = max_independent_set(&adj).len();
            // brute force
            let mut bf = 0usize;
            for mask in 0u32..1 << n {
                let ok = edges
                    .iter()
                    .all(|&(u, v)| mask >> u & 1 == 0 || mask >> v & 1 == 0);
                if ok {
                    bf = bf.max(mask.count_ones() as usize);
                }
            }
            assert_eq!(got, bf);
        }
    }
}

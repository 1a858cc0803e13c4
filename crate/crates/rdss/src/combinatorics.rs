//! Exact desk-scale solvers for the graph quantities that sandwich and
//! construct storage capacity: matching, vertex cover, independent set,
//! feedback vertex set, cycle enumeration and packing, clique partition,
//! dissociation sets, and 3-path packing.

use crate::bitset::BitSet;
use crate::config::Caps;
use crate::graph::{Graph, GraphError, VertexSet};
use crate::mis;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("graph has {n} vertices, above the exact-search threshold {cap}")]
    ThresholdExceeded { n: usize, cap: usize },
    #[error("cycle count exceeds the enumeration cap {cap}")]
    CycleCapExceeded { cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A set of vertex-disjoint undirected edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn covered(&self) -> VertexSet {
        VertexSet::from_iter(self.edges.iter().flat_map(|&(u, v)| [u, v]))
    }
}

/// Maximum matching, exact, by branch and bound over free vertices.
pub fn max_matching(g: &Graph) -> Result<Matching, CombinatoricsError> {
    if g.directed() {
        return Err(GraphError::DirectedNotSupported.into());
    }
    let n = g.n();
    let mut best: Vec<(usize, usize)> = Vec::new();
    let mut cur: Vec<(usize, usize)> = Vec::new();
    fn rec(
        g: &Graph,
        free: VertexSet,
        cur: &mut Vec<(usize, usize)>,
        best: &mut Vec<(usize, usize)>,
    ) {
        if cur.len() + free.len() / 2 <= best.len() {
            return;
        }
        // Lowest free vertex that still has a free neighbor.
        let mut v_opt = None;
        for v in free.iter() {
            if !g.nbrs(v).intersect(free).is_empty() {
                v_opt = Some(v);
                break;
            }
        }
        let Some(v) = v_opt else {
            if cur.len() > best.len() {
                *best = cur.clone();
            }
            return;
        };
        for u in g.nbrs(v).intersect(free).iter() {
            let mut f = free;
            f.remove(v);
            f.remove(u);
            cur.push((v.min(u), v.max(u)));
            rec(g, f, cur, best);
            cur.pop();
        }
        // Leave v unmatched.
        let mut f = free;
        f.remove(v);
        rec(g, f, cur, best);
    }
    rec(g, VertexSet::full(n), &mut cur, &mut best);
    best.sort_unstable();
    Ok(Matching { edges: best })
}

/// Greedy maximal matching in fixed edge order.
pub fn greedy_maximal_matching(g: &Graph) -> Matching {
    let mut used = VertexSet::EMPTY;
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        if !used.contains(u) && !used.contains(v) {
            used.insert(u);
            used.insert(v);
            edges.push((u, v));
        }
    }
    Matching { edges }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Approx,
}

/// Minimum vertex cover. Exact mode takes the complement of a maximum
/// independent set; approx mode returns both endpoints of a greedy maximal
/// matching (within factor 2 of optimal).
pub fn min_vertex_cover(
    g: &Graph,
    mode: SolveMode,
    caps: &Caps,
) -> Result<VertexSet, CombinatoricsError> {
    if g.directed() {
        return Err(GraphError::DirectedNotSupported.into());
    }
    match mode {
        SolveMode::Exact => {
            if g.n() > caps.subset_threshold {
                return Err(CombinatoricsError::ThresholdExceeded {
                    n: g.n(),
                    cap: caps.subset_threshold,
                });
            }
            let ind = max_independent_set(g);
            Ok(VertexSet::full(g.n()).minus(ind))
        }
        SolveMode::Approx => Ok(greedy_maximal_matching(g).covered()),
    }
}

/// Maximum independent set of an undirected graph, exact.
pub fn max_independent_set(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut adj = vec![BitSet::new(n); n];
    for (u, v) in g.edges() {
        adj[u].set(v);
        adj[v].set(u);
    }
    VertexSet::from_iter(mis::max_independent_set(&adj))
}

/// True iff the subgraph left after deleting `removed` is acyclic
/// (directed sense).
pub fn is_acyclic_after_removal(g: &Graph, removed: VertexSet) -> bool {
    induced_is_acyclic(g, VertexSet::full(g.n()).minus(removed))
}

/// True iff the subgraph induced by `keep` has no directed cycle. For
/// undirected graphs an edge counts as a 2-cycle, so this checks forestness
/// only when called on directed graphs.
pub fn induced_is_acyclic(g: &Graph, keep: VertexSet) -> bool {
    // Kahn peeling on the induced subgraph.
    let mut indeg = vec![0usize; g.n()];
    let mut alive = keep;
    for v in keep.iter() {
        for u in g.nbrs(v).intersect(keep).iter() {
            indeg[u] += 1;
        }
    }
    let mut queue: Vec<usize> = keep.iter().filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0usize;
    while let Some(v) = queue.pop() {
        seen += 1;
        alive.remove(v);
        for u in g.nbrs(v).intersect(alive).iter() {
            indeg[u] -= 1;
            if indeg[u] == 0 {
                queue.push(u);
            }
        }
    }
    seen == keep.len()
}

/// Minimum feedback vertex set of a directed graph (exhaustive by size).
pub fn min_fvs(g: &Graph, caps: &Caps) -> Result<VertexSet, CombinatoricsError> {
    if !g.directed() {
        return Err(GraphError::UndirectedNotSupported.into());
    }
    let n = g.n();
    if n > caps.subset_threshold {
        return Err(CombinatoricsError::ThresholdExceeded {
            n,
            cap: caps.subset_threshold,
        });
    }
    for size in 0..=n {
        let mut found: Option<VertexSet> = None;
        for mask in 0u64..1u64 << n {
            let set = VertexSet(mask);
            if set.len() == size && is_acyclic_after_removal(g, set) {
                found = Some(set);
                break;
            }
        }
        if let Some(set) = found {
            return Ok(set);
        }
    }
    unreachable!("removing all vertices always leaves an acyclic graph");
}

/// Ordered list of simple directed cycles, canonical rotation: smallest
/// vertex first. For undirected graphs each edge also yields the 2-cycle
/// (u, v).
pub type Cycle = Vec<usize>;

/// Johnson-style enumeration of all simple directed cycles, deduplicated up
/// to rotation. Output is sorted by (length, vertex sequence).
pub fn enumerate_cycles(g: &Graph, caps: &Caps) -> Result<Vec<Cycle>, CombinatoricsError> {
    let n = g.n();
    let mut cycles: Vec<Cycle> = Vec::new();
    // DFS from each root s, visiting only vertices >= s; every simple cycle
    // is found exactly once rooted at its smallest vertex.
    let mut path: Vec<usize> = Vec::new();
    fn dfs(
        g: &Graph,
        s: usize,
        v: usize,
        on_path: VertexSet,
        path: &mut Vec<usize>,
        cycles: &mut Vec<Cycle>,
        cap: usize,
    ) -> Result<(), CombinatoricsError> {
        for u in g.nbrs(v).iter() {
            if u == s && path.len() >= 2 {
                if cycles.len() >= cap {
                    return Err(CombinatoricsError::CycleCapExceeded { cap });
                }
                cycles.push(path.clone());
            } else if u > s && !on_path.contains(u) {
                path.push(u);
                let mut p = on_path;
                p.insert(u);
                dfs(g, s, u, p, path, cycles, cap)?;
                path.pop();
            }
        }
        Ok(())
    }
    for s in 0..n {
        path.clear();
        path.push(s);
        dfs(
            g,
            s,
            s,
            VertexSet::singleton(s),
            &mut path,
            &mut cycles,
            caps.cycle_cap,
        )?;
    }
    if !g.directed() {
        // The DFS above treats every undirected edge as two arcs, so each
        // undirected cycle of length >= 3 appears in both traversal
        // directions; keep one representative. 2-cycles appear once.
        cycles.retain(|c| c.len() == 2 || c[1] < c[c.len() - 1]);
    }
    cycles.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(cycles)
}

/// Maximum-cardinality family of pairwise vertex-disjoint cycles, exact set
/// packing over the enumerated cycle list.
pub fn max_vertex_disjoint_cycles(
    g: &Graph,
    caps: &Caps,
) -> Result<Vec<Cycle>, CombinatoricsError> {
    let cycles = enumerate_cycles(g, caps)?;
    let masks: Vec<VertexSet> = cycles
        .iter()
        .map(|c| VertexSet::from_iter(c.iter().copied()))
        .collect();
    let mut best: Vec<usize> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(
        masks: &[VertexSet],
        start: usize,
        used: VertexSet,
        budget: usize,
        cur: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        // Each further cycle needs >= 2 fresh vertices.
        if cur.len() + budget / 2 <= best.len() {
            return;
        }
        for i in start..masks.len() {
            if masks[i].intersect(used).is_empty() {
                cur.push(i);
                rec(
                    masks,
                    i + 1,
                    used.union(masks[i]),
                    budget - masks[i].len(),
                    cur,
                    best,
                );
                cur.pop();
            }
        }
    }
    rec(&masks, 0, VertexSet::EMPTY, g.n(), &mut cur, &mut best);
    Ok(best.into_iter().map(|i| cycles[i].clone()).collect())
}

/// Minimum clique partition: exact via branch and bound (equivalently, a
/// minimum proper coloring of the complement), or a greedy valid partition.
pub fn clique_partition(
    g: &Graph,
    mode: SolveMode,
    caps: &Caps,
) -> Result<Vec<VertexSet>, CombinatoricsError> {
    if g.directed() {
        return Err(GraphError::DirectedNotSupported.into());
    }
    let n = g.n();
    match mode {
        SolveMode::Approx => Ok(greedy_clique_partition(g)),
        SolveMode::Exact => {
            if n > caps.subset_threshold {
                return Err(CombinatoricsError::ThresholdExceeded {
                    n,
                    cap: caps.subset_threshold,
                });
            }
            let greedy = greedy_clique_partition(g);
            let mut best = greedy;
            // Try successively smaller partition counts.
            while best.len() > 1 {
                let target = best.len() - 1;
                match partition_into_cliques(g, target) {
                    Some(p) => best = p,
                    None => break,
                }
            }
            Ok(best)
        }
    }
}

fn greedy_clique_partition(g: &Graph) -> Vec<VertexSet> {
    let mut parts: Vec<VertexSet> = Vec::new();
    for v in 0..g.n() {
        let mut placed = false;
        for part in parts.iter_mut() {
            if part.minus(g.nbrs(v)).is_empty() {
                part.insert(v);
                placed = true;
                break;
            }
        }
        if !placed {
            parts.push(VertexSet::singleton(v));
        }
    }
    parts
}

/// Backtracking search for a partition of V into at most `k` cliques.
fn partition_into_cliques(g: &Graph, k: usize) -> Option<Vec<VertexSet>> {
    let n = g.n();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut parts: Vec<VertexSet> = Vec::new();
    fn rec(g: &Graph, v: usize, k: usize, parts: &mut Vec<VertexSet>) -> bool {
        if v == g.n() {
            return true;
        }
        for i in 0..parts.len() {
            if parts[i].minus(g.nbrs(v)).is_empty() {
                parts[i].insert(v);
                if rec(g, v + 1, k, parts) {
                    return true;
                }
                parts[i].remove(v);
            }
        }
        if parts.len() < k {
            parts.push(VertexSet::singleton(v));
            if rec(g, v + 1, k, parts) {
                return true;
            }
            parts.pop();
        }
        false
    }
    if rec(g, 0, k, &mut parts) {
        Some(parts)
    } else {
        None
    }
}

/// Largest vertex set whose induced subgraph has maximum degree <= 1.
pub fn max_dissociation_set(g: &Graph, caps: &Caps) -> Result<VertexSet, CombinatoricsError> {
    if g.directed() {
        return Err(GraphError::DirectedNotSupported.into());
    }
    let n = g.n();
    if n > caps.subset_threshold {
        return Err(CombinatoricsError::ThresholdExceeded {
            n,
            cap: caps.subset_threshold,
        });
    }
    let mut best = VertexSet::EMPTY;
    fn rec(g: &Graph, v: usize, chosen: VertexSet, best: &mut VertexSet) {
        if chosen.len() + (g.n() - v) <= best.len() {
            return;
        }
        if v == g.n() {
            if chosen.len() > best.len() {
                *best = chosen;
            }
            return;
        }
        // Can v join? Each chosen vertex must keep induced degree <= 1.
        let nb = g.nbrs(v).intersect(chosen);
        let ok = nb.len() <= 1
            && nb
                .iter()
                .all(|u| g.nbrs(u).intersect(chosen).is_empty());
        if ok {
            let mut c = chosen;
            c.insert(v);
            rec(g, v + 1, c, best);
        }
        rec(g, v + 1, chosen, best);
    }
    rec(g, 0, VertexSet::EMPTY, &mut best);
    Ok(best)
}

/// A packing of vertex-disjoint 3-paths (ordered vertex triples).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPacking {
    pub paths: Vec<[usize; 3]>,
    /// False when the packing came from the greedy fallback and is only a
    /// lower bound on the maximum.
    pub exact: bool,
}

fn all_3paths(g: &Graph) -> Vec<[usize; 3]> {
    let n = g.n();
    let mut out = Vec::new();
    for b in 0..n {
        for a in g.nbrs(b).iter() {
            for c in g.nbrs(b).iter() {
                if a < c {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Maximum set of vertex-disjoint 3-paths under the threshold; greedy
/// packing (flagged) above it.
pub fn vertex_disjoint_3paths(g: &Graph, caps: &Caps) -> Result<PathPacking, CombinatoricsError> {
    if g.directed() {
        return Err(GraphError::DirectedNotSupported.into());
    }
    let paths = all_3paths(g);
    if g.n() > caps.subset_threshold {
        let mut used = VertexSet::EMPTY;
        let mut picked = Vec::new();
        for p in paths {
            let m = VertexSet::from_iter(p);
            if m.intersect(used).is_empty() {
                used = used.union(m);
                picked.push(p);
            }
        }
        return Ok(PathPacking {
            paths: picked,
            exact: false,
        });
    }
    let masks: Vec<VertexSet> = paths
        .iter()
        .map(|p| VertexSet::from_iter(p.iter().copied()))
        .collect();
    let mut best: Vec<usize> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(
        masks: &[VertexSet],
        start: usize,
        used: VertexSet,
        free: usize,
        cur: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if cur.len() + free / 3 <= best.len() {
            return;
        }
        for i in start..masks.len() {
            if masks[i].intersect(used).is_empty() {
                cur.push(i);
                rec(masks, i + 1, used.union(masks[i]), free - 3, cur, best);
                cur.pop();
            }
        }
    }
    rec(&masks, 0, VertexSet::EMPTY, g.n(), &mut cur, &mut best);
    Ok(PathPacking {
        paths: best.into_iter().map(|i| paths[i]).collect(),
        exact: true,
    })
}

/// Bipartiteness check with witness: a 2-coloring when bipartite, an odd
/// cycle otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BipartiteWitness {
    Coloring(Vec<u8>),
    OddCycle(Vec<usize>),
}

pub fn is_bipartite(g: &Graph) -> Result<BipartiteWitness, CombinatoricsError> {
    if g.directed() {
        return Err(GraphError::DirectedNotSupported.into());
    }
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in g.nbrs(v).iter() {
                if color[u] == u8::MAX {
                    color[u] = 1 - color[v];
                    parent[u] = v;
                    stack.push(u);
                } else if color[u] == color[v] {
                    // Odd cycle: join the tree paths of u and v.
                    let path_to_root = |mut x: usize| {
                        let mut p = vec![x];
                        while parent[x] != usize::MAX {
                            x = parent[x];
                            p.push(x);
                        }
                        p
                    };
                    let pu = path_to_root(u);
                    let pv = path_to_root(v);
                    // Find deepest common ancestor.
                    let common: Vec<usize> =
                        pu.iter().filter(|x| pv.contains(x)).copied().collect();
                    let lca = common[0];
                    let mut cyc: Vec<usize> =
                        pu.iter().take_while(|&&x| x != lca).copied().collect();
                    cyc.push(lca);
                    let tail: Vec<usize> =
                        pv.iter().take_while(|&&x| x != lca).copied().collect();
                    cyc.extend(tail.into_iter().rev());
                    return Ok(BipartiteWitness::OddCycle(cyc));
                }
            }
        }
    }
    Ok(BipartiteWitness::Coloring(color))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn pentagon_matching_two() {
        let m = max_matching(&Graph::cycle(5)).unwrap();
        assert_eq!(m.size(), 2);
        // no 3 disjoint edges exist in C5: exhaustive check
        let g = Graph::cycle(5);
        let edges: Vec<_> = g.edges().collect();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                for k in j + 1..edges.len() {
                    let all = [edges[i], edges[j], edges[k]];
                    let verts = VertexSet::from_iter(all.iter().flat_map(|&(a, b)| [a, b]));
                    assert!(verts.len() < 6);
                }
            }
        }
    }

    #[test]
    fn matching_small_cases() {
        assert_eq!(
            max_matching(&Graph::new(2, false, &[(0, 1)]).unwrap())
                .unwrap()
                .size(),
            1
        );
        assert_eq!(max_matching(&Graph::cycle(4)).unwrap().size(), 2);
        assert!(max_matching(&Graph::directed_cycle(3)).is_err());
    }

    #[test]
    fn vertex_cover_cases() {
        let c = caps();
        assert_eq!(
            min_vertex_cover(&Graph::cycle(5), SolveMode::Exact, &c)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            min_vertex_cover(&Graph::cycle(4), SolveMode::Exact, &c)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            min_vertex_cover(&Graph::edgeless(4), SolveMode::Exact, &c)
                .unwrap()
                .len(),
            0
        );
        // Approx is a valid cover of size <= 2 M(G).
        let g = Graph::cycle(5);
        let cover = min_vertex_cover(&g, SolveMode::Approx, &c).unwrap();
        for (u, v) in g.edges() {
            assert!(cover.contains(u) || cover.contains(v));
        }
        assert!(cover.len() <= 2 * max_matching(&g).unwrap().size());
    }

    #[test]
    fn independent_set_cases() {
        assert_eq!(max_independent_set(&Graph::cycle(5)).len(), 2);
        assert_eq!(max_independent_set(&Graph::complete(4)).len(), 1);
    }

    #[test]
    fn fvs_cases() {
        let c = caps();
        assert_eq!(min_fvs(&Graph::directed_cycle(3), &c).unwrap().len(), 1);
        let dag = Graph::new(3, true, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(min_fvs(&dag, &c).unwrap(), VertexSet::EMPTY);
        // Two directed triangles sharing vertex 0.
        let g = Graph::new(5, true, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(min_fvs(&g, &c).unwrap(), VertexSet::singleton(0));
    }

    #[test]
    fn cycle_enumeration_cases() {
        let c = caps();
        let cyc = enumerate_cycles(&Graph::directed_cycle(3), &c).unwrap();
        assert_eq!(cyc, vec![vec![0, 1, 2]]);
        let dag = Graph::new(3, true, &[(0, 1), (1, 2)]).unwrap();
        assert!(enumerate_cycles(&dag, &c).unwrap().is_empty());
        // Complete directed graph on 3 vertices: three 2-cycles, two 3-cycles.
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 0..3 {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        let k3d = Graph::new(3, true, &edges).unwrap();
        let cyc = enumerate_cycles(&k3d, &c).unwrap();
        assert_eq!(cyc.len(), 5);
        assert_eq!(cyc.iter().filter(|c| c.len() == 2).count(), 3);
        assert_eq!(cyc.iter().filter(|c| c.len() == 3).count(), 2);
    }

    #[test]
    fn undirected_cycle_enumeration_dedups_directions() {
        let c = caps();
        let cyc = enumerate_cycles(&Graph::cycle(4), &c).unwrap();
        // Four edge 2-cycles plus the 4-cycle once.
        assert_eq!(cyc.iter().filter(|c| c.len() == 2).count(), 4);
        assert_eq!(cyc.iter().filter(|c| c.len() == 4).count(), 1);
    }

    #[test]
    fn disjoint_cycles_cases() {
        let c = caps();
        let two = Graph::new(6, true, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(max_vertex_disjoint_cycles(&two, &c).unwrap().len(), 2);
        let shared =
            Graph::new(5, true, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(max_vertex_disjoint_cycles(&shared, &c).unwrap().len(), 1);
        let dag = Graph::new(3, true, &[(0, 1), (1, 2)]).unwrap();
        assert!(max_vertex_disjoint_cycles(&dag, &c).unwrap().is_empty());
    }

    #[test]
    fn clique_partition_cases() {
        let c = caps();
        assert_eq!(
            clique_partition(&Graph::complete(5), SolveMode::Exact, &c)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            clique_partition(&Graph::cycle(5), SolveMode::Exact, &c)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            clique_partition(&Graph::edgeless(3), SolveMode::Exact, &c)
                .unwrap()
                .len(),
            3
        );
        // Greedy output is always a valid partition into cliques.
        let g = Graph::cycle(6);
        let parts = clique_partition(&g, SolveMode::Approx, &c).unwrap();
        let mut all = VertexSet::EMPTY;
        for p in &parts {
            assert!(all.intersect(*p).is_empty());
            all = all.union(*p);
            for u in p.iter() {
                for v in p.iter() {
                    if u < v {
                        assert!(g.has_edge(u, v));
                    }
                }
            }
        }
        assert_eq!(all, VertexSet::full(6));
    }

    #[test]
    fn dissociation_cases() {
        let c = caps();
        assert_eq!(max_dissociation_set(&Graph::path(4), &c).unwrap().len(), 3);
        assert_eq!(
            max_dissociation_set(&Graph::edgeless(4), &c).unwrap(),
            VertexSet::full(4)
        );
        assert_eq!(
            max_dissociation_set(&Graph::complete(3), &c).unwrap().len(),
            2
        );
        // Exhaustive oracle on P4 over all 16 subsets.
        let g = Graph::path(4);
        let mut bf = 0usize;
        for mask in 0u64..16 {
            let s = VertexSet(mask);
            let ok = s
                .iter()
                .all(|v| g.nbrs(v).intersect(s).len() <= 1);
            if ok {
                bf = bf.max(s.len());
            }
        }
        assert_eq!(bf, 3);
    }

    #[test]
    fn path_packing_cases() {
        let c = caps();
        assert_eq!(
            vertex_disjoint_3paths(&Graph::path(4), &c).unwrap().paths.len(),
            1
        );
        let two_p3 = Graph::new(6, false, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(vertex_disjoint_3paths(&two_p3, &c).unwrap().paths.len(), 2);
        let edge = Graph::new(2, false, &[(0, 1)]).unwrap();
        assert!(vertex_disjoint_3paths(&edge, &c).unwrap().paths.is_empty());
    }

    #[test]
    fn bipartite_cases() {
        assert!(matches!(
            is_bipartite(&Graph::cycle(4)).unwrap(),
            BipartiteWitness::Coloring(_)
        ));
        match is_bipartite(&Graph::cycle(5)).unwrap() {
            BipartiteWitness::OddCycle(cyc) => {
                assert_eq!(cyc.len() % 2, 1);
                let g = Graph::cycle(5);
                for i in 0..cyc.len() {
                    assert!(g.has_edge(cyc[i], cyc[(i + 1) % cyc.len()]));
                }
            }
            _ => panic!("C5 is not bipartite"),
        }
        assert!(matches!(
            is_bipartite(&Graph::edgeless(3)).unwrap(),
            BipartiteWitness::Coloring(_)
        ));
    }

    #[test]
    fn sandwich_and_koenig_small_graphs() {
        // M <= VC <= 2M on all undirected graphs with n <= 6; equality when
        // bipartite.
        let c = caps();
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, false, &edges).unwrap();
                let m = max_matching(&g).unwrap().size();
                let vc = min_vertex_cover(&g, SolveMode::Exact, &c).unwrap().len();
                assert!(m <= vc && vc <= 2 * m || (m == 0 && vc == 0));
                if matches!(is_bipartite(&g).unwrap(), BipartiteWitness::Coloring(_)) {
                    assert_eq!(m, vc);
                }
            }
        }
    }

    #[test]
    fn disjoint_cycle_family_is_subfamily_of_enumeration() {
        let c = caps();
        let g = Graph::new(5, true, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let all = enumerate_cycles(&g, &c).unwrap();
        for cycle in max_vertex_disjoint_cycles(&g, &c).unwrap() {
            assert!(all.contains(&cycle));
        }
    }

    #[test]
    fn dissociation_complement_covers_all_3paths() {
        let c = caps();
        let g = Graph::cycle(6);
        let d = max_dissociation_set(&g, &c).unwrap();
        let cover = VertexSet::full(6).minus(d);
        for p in all_3paths(&g) {
            assert!(p.iter().any(|&v| cover.contains(v)));
        }
    }
}

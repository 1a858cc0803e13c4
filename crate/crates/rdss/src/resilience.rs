//! Failure resilience: cooperative repair of up to two adjacent nodes, and
//! distance/dimension trade-off bounds for storage codes.

use crate::code::{Code, CodeError, Word};
use crate::combinatorics::{self, CombinatoricsError};
use crate::config::Caps;
use crate::graph::{Graph, GraphError, VertexSet};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ResilienceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("cooperative verification supports t in {{1, 2}}, got {0}")]
    UnsupportedT(usize),
    #[error("subset search over n = {n} exceeds cap {cap}")]
    SearchInfeasible { n: usize, cap: usize },
    #[error("dimension k = {k} out of range 1..={n}")]
    BadDimension { k: usize, n: usize },
    #[error("distance d = {0} must be at least 1")]
    BadDistance(usize),
    #[error("code enumeration size exceeds state cap {0}")]
    EnumerationCapExceeded(u64),
}

/// A cooperative-repair failure: two codewords agreeing outside U and on
/// U's outside neighborhood, yet differing on U.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoopFailure {
    pub set: Vec<usize>,
    pub x: Word,
    pub y: Word,
}

/// Checks that every connected failed set U with |U| <= t can be rebuilt
/// from the outside neighborhood ∪_{l in U} N(l) \ U. For t = 1 this is
/// plain single-vertex recoverability.
pub fn verify_cooperative(
    g: &Graph,
    code: &Code,
    t: usize,
) -> Result<Result<(), CoopFailure>, ResilienceError> {
    if g.directed() {
        return Err(GraphError::DirectedNotSupported.into());
    }
    if t == 0 || t > 2 {
        return Err(ResilienceError::UnsupportedT(t));
    }
    if code.n() != g.n() {
        return Err(CodeError::LengthMismatch {
            expected: g.n(),
            got: code.n(),
        }
        .into());
    }
    let mut sets: Vec<VertexSet> = (0..g.n()).map(VertexSet::singleton).collect();
    if t == 2 {
        for (u, v) in g.edges() {
            sets.push(VertexSet::singleton(u).union(VertexSet::singleton(v)));
        }
    }
    for set in sets {
        let outside = g.neighborhood_of_set(set);
        let words = code.words();
        for (a, x) in words.iter().enumerate() {
            for y in words.iter().skip(a + 1) {
                let same_outside = outside.iter().all(|j| x[j] == y[j]);
                let differs_inside = set.iter().any(|j| x[j] != y[j]);
                if same_outside && differs_inside {
                    return Ok(Err(CoopFailure {
                        set: set.iter().collect(),
                        x: x.clone(),
                        y: y.clone(),
                    }));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Upper bound on cooperative-2 dimension: n minus the dissociation number,
/// i.e. the minimum number of vertices meeting every 3-vertex path.
pub fn coop_upper_bound(g: &Graph, caps: &Caps) -> Result<usize, ResilienceError> {
    let w = combinatorics::max_dissociation_set(g, caps)?;
    Ok(g.n() - w.len())
}

/// Replication on a packing of vertex-disjoint 3-paths: one free symbol per
/// path, all three vertices store it, everything else stores 0. Achieves at
/// least a third of the cooperative upper bound.
pub fn coop_construct(g: &Graph, q: u32, caps: &Caps) -> Result<Code, ResilienceError> {
    if g.directed() {
        return Err(GraphError::DirectedNotSupported.into());
    }
    let packing = combinatorics::vertex_disjoint_3paths(g, caps)?;
    let dim = packing.paths.len();
    let mut count = 1u64;
    for _ in 0..dim {
        count = count
            .checked_mul(q as u64)
            .filter(|&c| c <= caps.state_cap)
            .ok_or(ResilienceError::EnumerationCapExceeded(caps.state_cap))?;
    }
    let n = g.n();
    let mut words = Vec::with_capacity(count as usize);
    for combo in 0..count {
        let mut w = vec![0u8; n];
        let mut c = combo;
        for path in &packing.paths {
            let sym = (c % q as u64) as u8;
            c /= q as u64;
            for &v in path {
                w[v] = sym;
            }
        }
        words.push(w);
    }
    Ok(Code::new(q, n, words)?)
}

/// Enumerates the qualifying vertex sets: independent sets for undirected
/// graphs, vertex sets inducing acyclic subgraphs for directed ones. The
/// empty set always qualifies.
fn qualifying_sets(g: &Graph, caps: &Caps) -> Result<Vec<VertexSet>, ResilienceError> {
    let n = g.n();
    if n > caps.subset_threshold {
        return Err(ResilienceError::SearchInfeasible {
            n,
            cap: caps.subset_threshold,
        });
    }
    let mut out = Vec::new();
    for mask in 0u64..1u64 << n {
        let set = VertexSet(mask);
        let ok = if g.directed() {
            combinatorics::induced_is_acyclic(g, set)
        } else {
            set.iter().all(|v| g.nbrs(v).intersect(set).is_empty())
        };
        if ok {
            out.push(set);
        }
    }
    Ok(out)
}

/// Largest achievable minimum distance of a dimension-k storage code:
/// d <= n - k + 1 - max{|U| : U qualifying, |N(U)| <= k - 1}.
pub fn distance_upper_bound(g: &Graph, k: usize, caps: &Caps) -> Result<i64, ResilienceError> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(ResilienceError::BadDimension { k, n });
    }
    let mut best = 0usize;
    for set in qualifying_sets(g, caps)? {
        if g.neighborhood_of_set(set).len() <= k - 1 {
            best = best.max(set.len());
        }
    }
    Ok(n as i64 - k as i64 + 1 - best as i64)
}

/// Upper bound on the dimension of any distance-d storage code:
/// k <= min over qualifying U of |N(U)| + log_q A_q(n - |U ∪ N(U)|, d),
/// floored to an integer dimension.
pub fn alpha_bound(g: &Graph, d: usize, q: u32, caps: &Caps) -> Result<usize, ResilienceError> {
    if d == 0 {
        return Err(ResilienceError::BadDistance(d));
    }
    let n = g.n();
    let mut best = usize::MAX;
    for set in qualifying_sets(g, caps)? {
        let nbrs = g.neighborhood_of_set(set);
        let rest = n - set.union(nbrs).len();
        let aq = aq_upper(rest, d, q);
        let bound = nbrs.len() + floor_log(aq, q);
        best = best.min(bound);
    }
    Ok(best)
}

fn floor_log(value: u128, q: u32) -> usize {
    let mut l = 0usize;
    let mut reach = q as u128;
    while reach <= value {
        l += 1;
        reach = reach.saturating_mul(q as u128);
    }
    l
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut out = 1u128;
    for i in 0..k.min(n - k) {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

/// Upper bound on A_q(n, d): the best of Singleton, sphere-packing, the
/// binary even-d Plotkin bound, and (for small spaces) an exhaustive
/// maximum-code search.
pub fn aq_upper(n: usize, d: usize, q: u32) -> u128 {
    if d > n || n == 0 {
        return 1;
    }
    let qn = (q as u128).pow(n as u32);
    if d == 1 {
        return qn;
    }
    // Singleton.
    let mut best = (q as u128).pow((n - d + 1) as u32);
    // Sphere-packing on radius floor((d-1)/2).
    let radius = (d - 1) / 2;
    let mut ball = 0u128;
    for i in 0..=radius {
        ball += binomial(n, i) * (q as u128 - 1).pow(i as u32);
    }
    best = best.min(qn / ball);
    // Plotkin: binary, d even, 2d > n.
    if q == 2 && d % 2 == 0 && 2 * d > n {
        best = best.min(2 * (d / (2 * d - n)) as u128);
    }
    // Exhaustive for small spaces; skipped for d <= 2 where Singleton is
    // already tight (A_q(n,2) = q^{n-1}) and the search graph is large.
    if qn <= 64 && d >= 3 {
        best = best.min(aq_exact_small(n, d, q) as u128);
    }
    best
}

fn aq_exact_small(n: usize, d: usize, q: u32) -> usize {
    use crate::bitset::BitSet;
    let size = (q as usize).pow(n as u32);
    let word = |mut idx: usize| -> Vec<u8> {
        let mut w = vec![0u8; n];
        for s in w.iter_mut() {
            *s = (idx % q as usize) as u8;
            idx /= q as usize;
        }
        w
    };
    let words: Vec<Vec<u8>> = (0..size).map(word).collect();
    let mut adj = vec![BitSet::new(size); size];
    for a in 0..size {
        for b in a + 1..size {
            let dist = words[a]
                .iter()
                .zip(&words[b])
                .filter(|(x, y)| x != y)
                .count();
            if dist < d {
                adj[a].set(b);
                adj[b].set(a);
            }
        }
    }
    crate::mis::max_independent_set(&adj).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::verify_rdss;
    use crate::combinatorics::SolveMode;

    fn caps() -> Caps {
        Caps::default()
    }

    fn replication(q: u32, n: usize) -> Code {
        let words = (0..q as u8).map(|s| vec![s; n]).collect();
        Code::new(q, n, words).unwrap()
    }

    #[test]
    fn coop_p3_replication_valid() {
        let g = Graph::path(3);
        let code = replication(2, 3);
        assert!(verify_cooperative(&g, &code, 2).unwrap().is_ok());
    }

    #[test]
    fn coop_single_edge_replication_invalid() {
        let g = Graph::new(2, false, &[(0, 1)]).unwrap();
        let code = replication(2, 2);
        let fail = verify_cooperative(&g, &code, 2).unwrap().unwrap_err();
        assert_eq!(fail.set, vec![0, 1]);
    }

    #[test]
    fn coop_t1_matches_verify_rdss() {
        let caps = caps();
        for g in [Graph::cycle(5), Graph::path(4), Graph::complete(3)] {
            for code in [
                crate::code::capacity_exact(&g, 2, &caps).unwrap().code,
                replication(2, g.n()),
            ] {
                let single = verify_cooperative(&g, &code, 1).unwrap().is_ok();
                let plain = verify_rdss(&g, &code).unwrap().is_ok();
                assert_eq!(single, plain);
            }
        }
    }

    #[test]
    fn coop_bound_examples() {
        let c = caps();
        assert_eq!(coop_upper_bound(&Graph::path(4), &c).unwrap(), 1);
        assert_eq!(coop_upper_bound(&Graph::edgeless(3), &c).unwrap(), 0);
        assert_eq!(coop_upper_bound(&Graph::complete(3), &c).unwrap(), 1);
    }

    #[test]
    fn coop_construct_p4() {
        let g = Graph::path(4);
        let code = coop_construct(&g, 2, &caps()).unwrap();
        assert_eq!(code.len(), 2);
        assert!(verify_cooperative(&g, &code, 2).unwrap().is_ok());
    }

    #[test]
    fn coop_construct_two_p3s() {
        let g = Graph::new(6, false, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let code = coop_construct(&g, 2, &caps()).unwrap();
        assert_eq!(code.len(), 4);
        assert!(verify_cooperative(&g, &code, 2).unwrap().is_ok());
    }

    #[test]
    fn coop_construct_single_edge() {
        let g = Graph::new(2, false, &[(0, 1)]).unwrap();
        let code = coop_construct(&g, 2, &caps()).unwrap();
        assert_eq!(code.len(), 1);
    }

    #[test]
    fn coop_construct_meets_third_of_bound() {
        let c = caps();
        for g in [
            Graph::path(4),
            Graph::cycle(6),
            Graph::complete(4),
            Graph::new(6, false, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap(),
        ] {
            let code = coop_construct(&g, 2, &c).unwrap();
            let dim = (code.len() as f64).log2().round() as usize;
            let bound = coop_upper_bound(&g, &c).unwrap();
            assert!(3 * dim >= bound, "n = {}", g.n());
            assert!(dim <= bound);
        }
    }

    #[test]
    fn distance_bound_complete_graph_singleton() {
        let c = caps();
        for n in 2..=8 {
            let g = Graph::complete(n);
            for k in 1..n {
                assert_eq!(
                    distance_upper_bound(&g, k, &c).unwrap(),
                    (n - k + 1) as i64
                );
            }
        }
    }

    #[test]
    fn distance_bound_pentagon_regular_specialization() {
        // 2-regular: d <= n - k - ceil(k/2) + 2.
        let g = Graph::cycle(5);
        let c = caps();
        for k in 1..=4usize {
            let d = distance_upper_bound(&g, k, &c).unwrap();
            let reg = 5 - k as i64 - (k as i64 + 1) / 2 + 2;
            assert!(d <= reg, "k = {k}: {d} > {reg}");
        }
    }

    #[test]
    fn distance_bound_directed_uses_acyclic_sets() {
        // Directed triangle: only proper subsets induce acyclic graphs.
        let g = Graph::directed_cycle(3);
        let d = distance_upper_bound(&g, 1, &caps()).unwrap();
        // k = 1: qualifying U need |N(U)| <= 0; no nonempty U qualifies.
        assert_eq!(d, 3);
    }

    #[test]
    fn alpha_bound_d1_substitution() {
        // d = 1: bound is min_U |N(U)| + (n - |U ∪ N(U)|).
        let g = Graph::cycle(5);
        let b = alpha_bound(&g, 1, 2, &caps()).unwrap();
        assert_eq!(b, 3); // VC(C5) = 3 via the d=1 collapse.
    }

    #[test]
    fn alpha_bound_dominates_real_codes() {
        // Any verified code's (ceil k, min distance) obeys both bounds.
        let c = caps();
        for g in [Graph::cycle(4), Graph::cycle(5), Graph::complete(4)] {
            let cap = crate::code::capacity_exact(&g, 2, &c).unwrap();
            let k = cap.dimension.ceil() as usize;
            let (d, _) = cap.code.min_distance();
            assert!(d as i64 <= distance_upper_bound(&g, k, &c).unwrap());
            assert!(k <= alpha_bound(&g, d, 2, &c).unwrap());
        }
    }

    #[test]
    fn aq_values() {
        assert_eq!(aq_upper(5, 3, 2), 4);
        assert_eq!(aq_upper(4, 1, 3), 81);
        for n in 1..=6 {
            assert_eq!(aq_upper(n, n, 2), 2, "repetition length {n}");
        }
        assert_eq!(aq_upper(3, 4, 2), 1);
    }

    #[test]
    fn aq_monotone_in_d() {
        for q in [2u32, 3] {
            for n in 1..=8usize {
                let mut prev = u128::MAX;
                for d in 1..=n {
                    let v = aq_upper(n, d, q);
                    assert!(v <= prev, "A_{q}({n},{d})");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn coop_clique_code_survives_pairs_in_k4() {
        // Clique parity on K4 is single-failure safe but not pair-safe.
        let g = Graph::complete(4);
        let code =
            crate::constructions::clique_partition_code(&g, 2, SolveMode::Exact, &caps()).unwrap();
        assert!(verify_cooperative(&g, &code, 1).unwrap().is_ok());
        assert!(verify_cooperative(&g, &code, 2).unwrap().is_err());
    }

    #[test]
    fn bad_inputs_rejected() {
        let g = Graph::path(3);
        let code = replication(2, 3);
        assert!(matches!(
            verify_cooperative(&g, &code, 3),
            Err(ResilienceError::UnsupportedT(3))
        ));
        assert!(matches!(
            distance_upper_bound(&g, 0, &caps()),
            Err(ResilienceError::BadDimension { .. })
        ));
        assert!(matches!(
            alpha_bound(&g, 0, 2, &caps()),
            Err(ResilienceError::BadDistance(0))
        ));
    }
}

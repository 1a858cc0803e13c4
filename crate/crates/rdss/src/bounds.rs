//! Aggregated capacity bounds: runs every applicable lower/upper bound on a
//! graph and reports the resulting interval with witnesses.

use crate::code::{self, CodeError};
use crate::combinatorics::{self, SolveMode};
use crate::config::Caps;
use crate::graph::Graph;
use crate::linear::{self, LinearError};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("inconsistent bounds: lower `{lower}` = {lvalue} exceeds upper `{upper}` = {uvalue}")]
    Inconsistent {
        lower: String,
        lvalue: f64,
        upper: String,
        uvalue: f64,
    },
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone)]
pub struct BoundEntry {
    pub name: &'static str,
    pub kind: BoundKind,
    /// q-ary units.
    pub value: f64,
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SkippedBound {
    pub name: &'static str,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub q: u32,
    pub n: usize,
    pub entries: Vec<BoundEntry>,
    pub skipped: Vec<SkippedBound>,
    /// [max lower, min upper].
    pub interval: (f64, f64),
}

const TOL: f64 = 1e-9;

/// Runs every bound whose preconditions hold; the rest are listed with the
/// reason they were skipped. Fails only on an internal inconsistency.
pub fn bounds_report(g: &Graph, q: u32, caps: &Caps) -> Result<BoundsReport, BoundsError> {
    let n = g.n();
    let mut entries: Vec<BoundEntry> = Vec::new();
    let mut skipped: Vec<SkippedBound> = Vec::new();

    if g.directed() {
        match combinatorics::max_vertex_disjoint_cycles(g, caps) {
            Ok(cycles) => entries.push(BoundEntry {
                name: "cycle-packing",
                kind: BoundKind::Lower,
                value: cycles.len() as f64,
                witness: Some(format!("{cycles:?}")),
            }),
            Err(e) => skipped.push(SkippedBound {
                name: "cycle-packing",
                reason: e.to_string(),
            }),
        }
        match combinatorics::min_fvs(g, caps) {
            Ok(set) => entries.push(BoundEntry {
                name: "feedback-vertex-set",
                kind: BoundKind::Upper,
                value: set.len() as f64,
                witness: Some(format!("{:?}", set.iter().collect::<Vec<_>>())),
            }),
            Err(e) => skipped.push(SkippedBound {
                name: "feedback-vertex-set",
                reason: e.to_string(),
            }),
        }
        skipped.push(SkippedBound {
            name: "degree-distribution",
            reason: "undirected graphs only".into(),
        });
    } else {
        match combinatorics::max_matching(g) {
            Ok(m) => entries.push(BoundEntry {
                name: "matching",
                kind: BoundKind::Lower,
                value: m.size() as f64,
                witness: Some(format!("{:?}", m.edges)),
            }),
            Err(e) => skipped.push(SkippedBound {
                name: "matching",
                reason: e.to_string(),
            }),
        }
        match combinatorics::min_vertex_cover(g, SolveMode::Exact, caps) {
            Ok(vc) => entries.push(BoundEntry {
                name: "vertex-cover",
                kind: BoundKind::Upper,
                value: vc.len() as f64,
                witness: Some(format!("{:?}", vc.iter().collect::<Vec<_>>())),
            }),
            Err(e) => skipped.push(SkippedBound {
                name: "vertex-cover",
                reason: e.to_string(),
            }),
        }
        let db = code::degree_distribution_bound(g, q);
        if db.consistent && db.value > 0.0 {
            entries.push(BoundEntry {
                name: "degree-distribution",
                kind: BoundKind::Lower,
                value: db.value,
                witness: None,
            });
        } else {
            skipped.push(SkippedBound {
                name: "degree-distribution",
                reason: if db.consistent {
                    "nonpositive value".into()
                } else {
                    format!("isolated vertex present (raw value {})", db.value)
                },
            });
        }
    }

    match code::q_set_size(g, q, caps) {
        Ok((size, bound)) => entries.push(BoundEntry {
            name: "counting",
            kind: BoundKind::Lower,
            value: bound,
            witness: Some(format!("|Q| = {size}")),
        }),
        Err(e) => skipped.push(SkippedBound {
            name: "counting",
            reason: e.to_string(),
        }),
    }

    match linear::minrank(g, q, caps) {
        Ok(mr) => entries.push(BoundEntry {
            name: "minrank",
            kind: BoundKind::Lower,
            value: (n - mr.rank) as f64,
            witness: Some(format!("rank {} fit {:?}", mr.rank, mr.witness.entries)),
        }),
        Err(e @ (LinearError::NotPrime(_) | LinearError::SearchCapExceeded { .. })) => {
            skipped.push(SkippedBound {
                name: "minrank",
                reason: e.to_string(),
            })
        }
        Err(e) => skipped.push(SkippedBound {
            name: "minrank",
            reason: e.to_string(),
        }),
    }

    // Trivial envelope keeps the interval finite even if everything failed.
    entries.push(BoundEntry {
        name: "trivial-lower",
        kind: BoundKind::Lower,
        value: 0.0,
        witness: None,
    });
    entries.push(BoundEntry {
        name: "trivial-upper",
        kind: BoundKind::Upper,
        value: n as f64,
        witness: None,
    });

    let mut best_lower: (&'static str, f64) = ("", f64::NEG_INFINITY);
    let mut best_upper: (&'static str, f64) = ("", f64::INFINITY);
    for e in &entries {
        match e.kind {
            BoundKind::Lower if e.value > best_lower.1 => best_lower = (e.name, e.value),
            BoundKind::Upper if e.value < best_upper.1 => best_upper = (e.name, e.value),
            _ => {}
        }
    }
    if best_lower.1 > best_upper.1 + TOL {
        return Err(BoundsError::Inconsistent {
            lower: best_lower.0.into(),
            lvalue: best_lower.1,
            upper: best_upper.0.into(),
            uvalue: best_upper.1,
        });
    }
    Ok(BoundsReport {
        q,
        n,
        entries,
        skipped,
        interval: (best_lower.1, best_upper.1),
    })
}

impl BoundsReport {
    pub fn has_skipped(&self) -> bool {
        self.skipped
            .iter()
            .any(|s| s.reason.contains("cap") || s.reason.contains("exceeds"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn entry<'a>(r: &'a BoundsReport, name: &str) -> &'a BoundEntry {
        r.entries.iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn pentagon_report() {
        let r = bounds_report(&Graph::cycle(5), 2, &caps()).unwrap();
        assert_eq!(entry(&r, "matching").value, 2.0);
        assert_eq!(entry(&r, "vertex-cover").value, 3.0);
        assert_eq!(entry(&r, "minrank").value, 2.0);
        assert_eq!(r.interval, (2.0, 3.0));
        // The exact value lies inside.
        let exact = crate::code::capacity_exact(&Graph::cycle(5), 2, &caps())
            .unwrap()
            .dimension;
        assert!(r.interval.0 <= exact && exact <= r.interval.1);
    }

    #[test]
    fn c4_koenig_tight() {
        let r = bounds_report(&Graph::cycle(4), 2, &caps()).unwrap();
        assert_eq!(r.interval, (2.0, 2.0));
    }

    #[test]
    fn directed_triangle_tight() {
        let r = bounds_report(&Graph::directed_cycle(3), 2, &caps()).unwrap();
        assert_eq!(r.interval, (1.0, 1.0));
        assert_eq!(entry(&r, "cycle-packing").value, 1.0);
        assert_eq!(entry(&r, "feedback-vertex-set").value, 1.0);
    }

    #[test]
    fn degree_bound_is_union_relaxation() {
        // The closed form relaxes n - log_q |Q| (union bound over the per-
        // vertex events), so it never exceeds that quantity. It can beat the
        // counting bound by up to log_q(1 + 1/|Q|) — K5 is such a case — so
        // only the |Q| form is a theorem.
        for g in [Graph::cycle(5), Graph::complete(5), Graph::path(4)] {
            let r = bounds_report(&g, 2, &caps()).unwrap();
            let (size, _) = crate::code::q_set_size(&g, 2, &caps()).unwrap();
            let deg = r.entries.iter().find(|e| e.name == "degree-distribution");
            if let Some(d) = deg {
                let relaxed = g.n() as f64 - (size as f64).log2();
                assert!(d.value <= relaxed + 1e-9);
                // Still a genuine capacity lower bound.
                let exact = crate::code::capacity_exact(&g, 2, &caps())
                    .unwrap()
                    .dimension;
                assert!(d.value <= exact + 1e-9);
            }
        }
    }

    #[test]
    fn isolated_vertex_skips_degree_bound() {
        let g = Graph::edgeless(2);
        let r = bounds_report(&g, 2, &caps()).unwrap();
        assert!(r
            .skipped
            .iter()
            .any(|s| s.name == "degree-distribution" && s.reason.contains("isolated")));
        assert_eq!(r.interval.0, 0.0);
    }

    #[test]
    fn non_prime_q_skips_minrank_only() {
        let r = bounds_report(&Graph::cycle(4), 4, &caps()).unwrap();
        assert!(r.skipped.iter().any(|s| s.name == "minrank"));
        assert_eq!(entry(&r, "matching").value, 2.0);
    }
}

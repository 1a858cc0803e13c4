//! Constructive storage codes: matching replication, directed cycle
//! replication, clique partition, and the vector code driven by fractional
//! cycle packing.

use crate::code::{Code, CodeError};
use crate::combinatorics::{
    self, CombinatoricsError, Cycle, SolveMode,
};
use crate::config::Caps;
use crate::graph::{Graph, GraphError};
use crate::simplex::{self, Cmp, Constraint, LinearProgram, LpError, Rat};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),
    #[error("code enumeration size q^{dim} exceeds state cap {cap}")]
    EnumerationCapExceeded { dim: usize, cap: u64 },
    #[error("packing violates the per-vertex load constraint at vertex {v}: load {load} > p = {p}")]
    LoadViolated { v: usize, load: u64, p: u64 },
    #[error("malformed vector-code file at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

fn enumeration_guard(q: u32, dim: usize, caps: &Caps) -> Result<u64, ConstructionError> {
    let mut size = 1u64;
    for _ in 0..dim {
        size = size
            .checked_mul(q as u64)
            .filter(|&s| s <= caps.state_cap)
            .ok_or(ConstructionError::EnumerationCapExceeded {
                dim,
                cap: caps.state_cap,
            })?;
    }
    Ok(size)
}

/// Replication code on a maximum matching: the two endpoints of each matched
/// edge store a common free symbol, every unmatched vertex stores 0.
pub fn matching_code(g: &Graph, q: u32, caps: &Caps) -> Result<Code, ConstructionError> {
    let m = combinatorics::max_matching(g)?;
    let count = enumeration_guard(q, m.size(), caps)?;
    let n = g.n();
    let mut words = Vec::with_capacity(count as usize);
    for combo in 0..count {
        let mut w = vec![0u8; n];
        let mut c = combo;
        for &(u, v) in &m.edges {
            let sym = (c % q as u64) as u8;
            c /= q as u64;
            w[u] = sym;
            w[v] = sym;
        }
        words.push(w);
    }
    Ok(Code::new(q, n, words)?)
}

/// Replication code on a maximum family of vertex-disjoint directed cycles:
/// one free symbol per packed cycle, copied around it.
pub fn cycle_replication_code(g: &Graph, q: u32, caps: &Caps) -> Result<Code, ConstructionError> {
    if !g.directed() {
        return Err(GraphError::UndirectedNotSupported.into());
    }
    let packed = combinatorics::max_vertex_disjoint_cycles(g, caps)?;
    let count = enumeration_guard(q, packed.len(), caps)?;
    let n = g.n();
    let mut words = Vec::with_capacity(count as usize);
    for combo in 0..count {
        let mut w = vec![0u8; n];
        let mut c = combo;
        for cyc in &packed {
            let sym = (c % q as u64) as u8;
            c /= q as u64;
            for &v in cyc {
                w[v] = sym;
            }
        }
        words.push(w);
    }
    Ok(Code::new(q, n, words)?)
}

/// Parity code on a minimum clique partition: a clique of size t stores t-1
/// free symbols and one negative-sum parity, so each vertex recovers from its
/// clique peers. Dimension n - #cliques.
pub fn clique_partition_code(
    g: &Graph,
    q: u32,
    mode: SolveMode,
    caps: &Caps,
) -> Result<Code, ConstructionError> {
    let cliques = combinatorics::clique_partition(g, mode, caps)?;
    let n = g.n();
    let dim = n - cliques.len();
    let count = enumeration_guard(q, dim, caps)?;
    // Per clique, the largest vertex carries the parity symbol.
    let mut free_positions: Vec<usize> = Vec::with_capacity(dim);
    let mut parity: Vec<(usize, Vec<usize>)> = Vec::new();
    for cl in &cliques {
        let members: Vec<usize> = cl.iter().collect();
        let (&last, rest) = members.split_last().unwrap();
        free_positions.extend_from_slice(rest);
        parity.push((last, rest.to_vec()));
    }
    let mut words = Vec::with_capacity(count as usize);
    for combo in 0..count {
        let mut w = vec![0u8; n];
        let mut c = combo;
        for &pos in &free_positions {
            w[pos] = (c % q as u64) as u8;
            c /= q as u64;
        }
        for (last, rest) in &parity {
            let sum: u32 = rest.iter().map(|&v| w[v] as u32).sum();
            w[*last] = ((q - sum % q) % q) as u8;
        }
        words.push(w);
    }
    Ok(Code::new(q, n, words)?)
}

/// Fractional packing of directed cycles with rational weights.
#[derive(Debug, Clone)]
pub struct CyclePacking {
    /// Cycles carrying positive weight, in canonical enumeration order.
    pub cycles: Vec<Cycle>,
    pub weights: Vec<Rat>,
    /// K = sum of weights, the packing value.
    pub value: Rat,
    /// Common denominator: every weight is a multiple of 1/p.
    pub p: u64,
    /// n(C) = p * weight(C).
    pub multiplicities: Vec<u64>,
}

impl CyclePacking {
    pub fn empty() -> Self {
        CyclePacking {
            cycles: Vec::new(),
            weights: Vec::new(),
            value: Rat::zero(),
            p: 1,
            multiplicities: Vec::new(),
        }
    }

    pub fn vertex_load(&self, v: usize) -> Rat {
        self.cycles
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| c.contains(&v))
            .map(|(_, w)| w.clone())
            .sum()
    }
}

/// Maximum fractional cycle packing by exact rational LP over the enumerated
/// cycle columns. Among tied optima, weights are refined max-min fairly so
/// degenerate ties resolve deterministically.
/// Optimal value of the fractional cycle packing LP (phase A only).
///
/// Cheaper than [`fractional_cycle_packing`] when only the packing number
/// is needed, since it skips the max-min-fair weight refinement.
pub fn fractional_packing_value(g: &Graph, caps: &Caps) -> Result<Rat, ConstructionError> {
    if !g.directed() {
        return Err(GraphError::UndirectedNotSupported.into());
    }
    let cycles = combinatorics::enumerate_cycles(g, caps)?;
    if cycles.is_empty() {
        return Ok(Rat::zero());
    }
    let n = g.n();
    let m = cycles.len();
    let mut constraints = Vec::with_capacity(n);
    for v in 0..n {
        let coeffs: Vec<Rat> = cycles
            .iter()
            .map(|c| {
                if c.contains(&v) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        constraints.push(Constraint {
            coeffs,
            cmp: Cmp::Le,
            rhs: Rat::one(),
        });
    }
    let sol = simplex::solve(&LinearProgram {
        objective: vec![Rat::one(); m],
        constraints,
    })?;
    Ok(sol.value)
}

pub fn fractional_cycle_packing(g: &Graph, caps: &Caps) -> Result<CyclePacking, ConstructionError> {
    if !g.directed() {
        return Err(GraphError::UndirectedNotSupported.into());
    }
    let cycles = combinatorics::enumerate_cycles(g, caps)?;
    if cycles.is_empty() {
        return Ok(CyclePacking::empty());
    }
    let n = g.n();
    let m = cycles.len();
    // Phase A: maximize K = sum of weights under per-vertex load <= 1.
    let mut constraints = Vec::with_capacity(n);
    for v in 0..n {
        let coeffs: Vec<Rat> = cycles
            .iter()
            .map(|c| {
                if c.contains(&v) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        constraints.push(Constraint {
            coeffs,
            cmp: Cmp::Le,
            rhs: Rat::one(),
        });
    }
    let phase_a = simplex::solve(&LinearProgram {
        objective: vec![Rat::one(); m],
        constraints: constraints.clone(),
    })?;
    let k = phase_a.value.clone();

    // Max-min-fair refinement: repeatedly raise the common floor t of the
    // still-unfrozen weights under total = K, freezing weights that cannot
    // exceed the floor. Deterministic regardless of phase-A degeneracy.
    let mut frozen: Vec<Option<Rat>> = vec![None; m];
    while frozen.iter().any(|f| f.is_none()) {
        let unfrozen: Vec<usize> = (0..m).filter(|&i| frozen[i].is_none()).collect();
        // Variables: t, then s_i for each unfrozen cycle; weight_i = t + s_i.
        let nvars = 1 + unfrozen.len();
        let mut cons = Vec::with_capacity(n + 1);
        for v in 0..n {
            let mut coeffs = vec![Rat::zero(); nvars];
            let mut rhs = Rat::one();
            for (ui, &i) in unfrozen.iter().enumerate() {
                if cycles[i].contains(&v) {
                    coeffs[0] += Rat::one();
                    coeffs[1 + ui] = Rat::one();
                }
            }
            for (i, f) in frozen.iter().enumerate() {
                if let Some(w) = f {
                    if cycles[i].contains(&v) {
                        rhs -= w;
                    }
                }
            }
            cons.push(Constraint {
                coeffs,
                cmp: Cmp::Le,
                rhs,
            });
        }
        // Total mass of unfrozen weights equals K minus the frozen mass.
        let frozen_sum: Rat = frozen.iter().flatten().cloned().sum();
        let mut total = vec![Rat::one(); nvars];
        total[0] = Rat::from(BigInt::from(unfrozen.len() as i64));
        cons.push(Constraint {
            coeffs: total,
            cmp: Cmp::Eq,
            rhs: &k - &frozen_sum,
        });
        let mut objective = vec![Rat::zero(); nvars];
        objective[0] = Rat::one();
        let sol = simplex::solve(&LinearProgram {
            objective,
            constraints: cons,
        })?;
        let t = sol.x[0].clone();
        let mut froze_any = false;
        for (ui, &i) in unfrozen.iter().enumerate() {
            if sol.x[1 + ui].is_zero() {
                frozen[i] = Some(t.clone());
                froze_any = true;
            }
        }
        if !froze_any {
            // Safety net: freeze the first unfrozen cycle at its value.
            let i = unfrozen[0];
            frozen[i] = Some(&t + &sol.x[1]);
        }
    }

    let weights: Vec<Rat> = frozen.into_iter().map(Option::unwrap).collect();
    let mut p = BigInt::one();
    for w in &weights {
        if !w.is_zero() {
            p = p.lcm(w.denom());
        }
    }
    let p = p.to_u64().expect("packing denominator fits in u64");
    let mut kept_cycles = Vec::new();
    let mut kept_weights = Vec::new();
    let mut mult = Vec::new();
    for (c, w) in cycles.into_iter().zip(weights) {
        if w.is_positive() {
            let nc = (&w * BigRational::from(BigInt::from(p)))
                .to_integer()
                .to_u64()
                .unwrap();
            kept_cycles.push(c);
            kept_weights.push(w);
            mult.push(nc);
        }
    }
    debug_assert_eq!(
        mult.iter().sum::<u64>(),
        (&k * BigRational::from(BigInt::from(p))).to_integer().to_u64().unwrap()
    );
    Ok(CyclePacking {
        cycles: kept_cycles,
        weights: kept_weights,
        value: k,
        p,
        multiplicities: mult,
    })
}

/// Vector storage code realizing a fractional packing: pK message symbols,
/// each assigned to one cycle and replicated on all its vertices; every
/// vertex stores at most p symbols.
#[derive(Debug, Clone)]
pub struct VectorCode {
    pub q: u32,
    pub n: usize,
    pub p: u64,
    /// Packing value K; the message has p*K symbols.
    pub k: Rat,
    pub cycles: Vec<Cycle>,
    pub multiplicities: Vec<u64>,
}

impl VectorCode {
    pub fn message_len(&self) -> usize {
        self.multiplicities.iter().sum::<u64>() as usize
    }

    /// Message coordinate ranges per cycle, in cycle order.
    pub fn coordinate_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.cycles.len());
        let mut at = 0usize;
        for &m in &self.multiplicities {
            out.push(at..at + m as usize);
            at += m as usize;
        }
        out
    }

    /// Number of symbols stored at v: sum of n(C) over cycles through v.
    pub fn vertex_load(&self, v: usize) -> u64 {
        self.cycles
            .iter()
            .zip(&self.multiplicities)
            .filter(|(c, _)| c.contains(&v))
            .map(|(_, &m)| m)
            .sum()
    }

    /// Stores a message: per-vertex symbol vectors, cycle order within each.
    pub fn store(&self, message: &[u8]) -> Vec<Vec<u8>> {
        assert_eq!(message.len(), self.message_len());
        let mut stored = vec![Vec::new(); self.n];
        for (range, cyc) in self.coordinate_ranges().into_iter().zip(&self.cycles) {
            for &v in cyc {
                stored[v].extend_from_slice(&message[range.clone()]);
            }
        }
        stored
    }

    /// Rebuilds the content of an erased vertex from the successor vertex on
    /// each of its cycles (an out-neighbor by the cycle invariant).
    pub fn repair(&self, stored: &[Vec<u8>], v: usize) -> Vec<u8> {
        let ranges = self.coordinate_ranges();
        let mut out = Vec::new();
        for (ci, cyc) in self.cycles.iter().enumerate() {
            let Some(pos) = cyc.iter().position(|&u| u == v) else {
                continue;
            };
            let succ = cyc[(pos + 1) % cyc.len()];
            // Locate this cycle's block inside the successor's stored vector.
            let mut offset = 0usize;
            for (cj, c2) in self.cycles.iter().enumerate() {
                if cj == ci {
                    break;
                }
                if c2.contains(&succ) {
                    offset += ranges[cj].len();
                }
            }
            out.extend_from_slice(&stored[succ][offset..offset + ranges[ci].len()]);
        }
        out
    }

    pub fn serialize(&self) -> String {
        let mut s = format!(
            "v rdss {} {} {} {} {}\n",
            self.n,
            self.q,
            self.p,
            self.k.numer(),
            self.k.denom()
        );
        for (cyc, &m) in self.cycles.iter().zip(&self.multiplicities) {
            s.push_str(&format!("cyc {}", m));
            for &v in cyc {
                s.push_str(&format!(" {}", v));
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<VectorCode, ConstructionError> {
        let err = |line: usize, reason: &str| ConstructionError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut header: Option<(usize, u32, u64, Rat)> = None;
        let mut cycles = Vec::new();
        let mut mult = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = t.split_whitespace().collect();
            if header.is_none() {
                if fields.len() != 7 || fields[0] != "v" || fields[1] != "rdss" {
                    return Err(err(line, "expected `v rdss <n> <q> <p> <Knum> <Kden>`"));
                }
                let n: usize = fields[2].parse().map_err(|_| err(line, "bad n"))?;
                let q: u32 = fields[3].parse().map_err(|_| err(line, "bad q"))?;
                let p: u64 = fields[4].parse().map_err(|_| err(line, "bad p"))?;
                let knum: i64 = fields[5].parse().map_err(|_| err(line, "bad K numerator"))?;
                let kden: i64 = fields[6].parse().map_err(|_| err(line, "bad K denominator"))?;
                if kden <= 0 {
                    return Err(err(line, "K denominator must be positive"));
                }
                header = Some((n, q, p, simplex::rat(knum, kden)));
                continue;
            }
            let (n, ..) = header.as_ref().unwrap();
            if fields[0] != "cyc" || fields.len() < 4 {
                return Err(err(line, "expected `cyc <n(C)> <v0> <v1> ...`"));
            }
            let m: u64 = fields[1]
                .parse()
                .map_err(|_| err(line, "bad multiplicity"))?;
            let mut cyc = Vec::new();
            for f in &fields[2..] {
                let v: usize = f.parse().map_err(|_| err(line, "bad vertex"))?;
                if v >= *n {
                    return Err(err(line, "vertex out of range"));
                }
                cyc.push(v);
            }
            cycles.push(cyc);
            mult.push(m);
        }
        let (n, q, p, k) = header.ok_or_else(|| err(1, "missing header"))?;
        Ok(VectorCode {
            q,
            n,
            p,
            k,
            cycles,
            multiplicities: mult,
        })
    }
}

pub fn vector_code_from_packing(
    g: &Graph,
    packing: &CyclePacking,
    q: u32,
) -> Result<VectorCode, ConstructionError> {
    if !g.directed() {
        return Err(GraphError::UndirectedNotSupported.into());
    }
    let code = VectorCode {
        q,
        n: g.n(),
        p: packing.p,
        k: packing.value.clone(),
        cycles: packing.cycles.clone(),
        multiplicities: packing.multiplicities.clone(),
    };
    for v in 0..g.n() {
        let load = code.vertex_load(v);
        if load > code.p {
            return Err(ConstructionError::LoadViolated {
                v,
                load,
                p: code.p,
            });
        }
    }
    Ok(code)
}

/// Random-message erasure drill: stores, erases each vertex in turn, repairs
/// from successors, and compares. Returns false on any mismatch.
pub fn repair_check<R: Rng>(code: &VectorCode, rng: &mut R, trials: usize) -> bool {
    let len = code.message_len();
    for _ in 0..trials {
        let message: Vec<u8> = (0..len).map(|_| rng.gen_range(0..code.q) as u8).collect();
        let stored = code.store(&message);
        for v in 0..code.n {
            if code.repair(&stored, v) != stored[v] {
                return false;
            }
        }
    }
    true
}

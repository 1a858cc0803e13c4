//! Storage-code model: codeword sets over a q-ary alphabet, recovery-table
//! verification, exact capacity via the confusion graph, and counting-based
//! capacity bounds.

use std::collections::BTreeMap;

use crate::bitset::BitSet;
use crate::config::Caps;
use crate::graph::Graph;
use crate::mis;

use thiserror::Error;

pub type Word = Vec<u8>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("codeword length {got} does not match expected length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {sym} out of range for alphabet size {q}")]
    SymbolOutOfRange { sym: u8, q: u32 },
    #[error("code must be nonempty")]
    Empty,
    #[error("alphabet size must be at least 2, got {0}")]
    BadAlphabet(u32),
    #[error("duplicate codeword")]
    Duplicate,
    #[error("q^n = q^{n} exceeds the state cap {cap}")]
    StateCapExceeded { n: usize, cap: u64 },
    #[error("line {line}: malformed code file: {reason}")]
    Parse { line: usize, reason: String },
}

/// A set of length-n words over `{0..q-1}`; word i's symbol at position v is
/// the content of vertex v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    q: u32,
    n: usize,
    words: Vec<Word>,
}

impl Code {
    pub fn new(q: u32, n: usize, mut words: Vec<Word>) -> Result<Code, CodeError> {
        if q < 2 {
            return Err(CodeError::BadAlphabet(q));
        }
        if words.is_empty() {
            return Err(CodeError::Empty);
        }
        for w in &words {
            if w.len() != n {
                return Err(CodeError::LengthMismatch {
                    expected: n,
                    got: w.len(),
                });
            }
            for &s in w {
                if s as u32 >= q {
                    return Err(CodeError::SymbolOutOfRange { sym: s, q });
                }
            }
        }
        words.sort();
        let before = words.len();
        words.dedup();
        if words.len() != before {
            return Err(CodeError::Duplicate);
        }
        Ok(Code { q, n, words })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Codewords in lexicographic order.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        self.words.binary_search_by(|c| c.as_slice().cmp(w)).is_ok()
    }

    /// log_q |C|, in q-ary units.
    pub fn dimension(&self) -> f64 {
        (self.words.len() as f64).ln() / (self.q as f64).ln()
    }

    /// Dimension converted to bits.
    pub fn dimension_bits(&self) -> f64 {
        (self.words.len() as f64).log2()
    }

    /// Component-wise translation mod q; preserves cardinality.
    pub fn translate(&self, a: &[u8]) -> Result<Code, CodeError> {
        if a.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        let words = self
            .words
            .iter()
            .map(|w| {
                w.iter()
                    .zip(a)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % self.q) as u8)
                    .collect()
            })
            .collect();
        Code::new(self.q, self.n, words)
    }

    /// Minimum pairwise Hamming distance; `n + 1` by convention for a
    /// singleton code (flagged by the boolean).
    pub fn min_distance(&self) -> (usize, bool) {
        if self.words.len() < 2 {
            return (self.n + 1, true);
        }
        let mut d = usize::MAX;
        for i in 0..self.words.len() {
            for j in i + 1..self.words.len() {
                let dist = hamming(&self.words[i], &self.words[j]);
                d = d.min(dist);
            }
        }
        (d, false)
    }

    /// Code file format: header `c rdss <n> <q> <count>`, one codeword per
    /// line (digit string for q <= 10, comma-separated integers otherwise).
    pub fn parse(text: &str) -> Result<Code, CodeError> {
        let mut header: Option<(usize, u32, usize)> = None;
        let mut words: Vec<Word> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if header.is_none() {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 5 || f[0] != "c" || f[1] != "rdss" {
                    return Err(CodeError::Parse {
                        line: lineno,
                        reason: "expected header `c rdss <n> <q> <count>`".into(),
                    });
                }
                let n = f[2].parse().map_err(|_| CodeError::Parse {
                    line: lineno,
                    reason: "bad n".into(),
                })?;
                let q = f[3].parse().map_err(|_| CodeError::Parse {
                    line: lineno,
                    reason: "bad q".into(),
                })?;
                let count = f[4].parse().map_err(|_| CodeError::Parse {
                    line: lineno,
                    reason: "bad count".into(),
                })?;
                header = Some((n, q, count));
                continue;
            }
            let (n, q, _) = header.unwrap();
            let word: Word = if q <= 10 {
                line.chars()
                    .map(|c| {
                        c.to_digit(10).map(|d| d as u8).ok_or(CodeError::Parse {
                            line: lineno,
                            reason: format!("bad digit `{c}`"),
                        })
                    })
                    .collect::<Result<_, _>>()?
            } else {
                line.split(',')
                    .map(|t| {
                        t.trim().parse::<u8>().map_err(|_| CodeError::Parse {
                            line: lineno,
                            reason: format!("bad symbol `{t}`"),
                        })
                    })
                    .collect::<Result<_, _>>()?
            };
            if word.len() != n {
                return Err(CodeError::Parse {
                    line: lineno,
                    reason: format!("codeword length {} != n = {}", word.len(), n),
                });
            }
            words.push(word);
        }
        let (n, q, count) = header.ok_or(CodeError::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        if words.len() != count {
            return Err(CodeError::Parse {
                line: 1,
                reason: format!("header says {count} codewords, found {}", words.len()),
            });
        }
        Code::new(q, n, words)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("c rdss {} {} {}\n", self.n, self.q, self.words.len());
        for w in &self.words {
            out.push_str(&Code::format_word(self.q, w));
            out.push('\n');
        }
        out
    }

    /// One codeword line: digit string for q <= 10, comma-separated beyond.
    pub fn format_word(q: u32, w: &[u8]) -> String {
        if q <= 10 {
            w.iter()
                .map(|&s| char::from_digit(s as u32, 10).unwrap())
                .collect()
        } else {
            let parts: Vec<String> = w.iter().map(|s| s.to_string()).collect();
            parts.join(",")
        }
    }

    /// Inverse of `format_word`; the error is a human-readable reason.
    pub fn parse_word(q: u32, n: usize, line: &str) -> Result<Word, String> {
        let word: Word = if q <= 10 {
            line.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| format!("bad digit `{c}`"))
                })
                .collect::<Result<_, _>>()?
        } else {
            line.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| format!("bad symbol `{t}`"))
                })
                .collect::<Result<_, _>>()?
        };
        if word.len() != n {
            return Err(format!("word length {} != n = {}", word.len(), n));
        }
        if word.iter().any(|&s| s as u32 >= q) {
            return Err(format!("symbol out of range for q = {q}"));
        }
        Ok(word)
    }
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Whole-space index arithmetic: strings in F_q^n are numbered
/// 0..q^n with little-endian base-q digits (digit i = symbol of vertex i).
#[derive(Debug, Clone, Copy)]
pub struct Space {
    pub q: u32,
    pub n: usize,
    pub size: u64,
}

impl Space {
    pub fn new(q: u32, n: usize, caps: &Caps) -> Result<Space, CodeError> {
        let size = caps
            .space_size(q, n)
            .ok_or(CodeError::StateCapExceeded {
                n,
                cap: caps.state_cap,
            })?;
        Ok(Space { q, n, size })
    }

    pub fn word(&self, mut idx: u64) -> Word {
        let mut w = vec![0u8; self.n];
        for s in w.iter_mut() {
            *s = (idx % self.q as u64) as u8;
            idx /= self.q as u64;
        }
        w
    }

    pub fn index(&self, w: &[u8]) -> u64 {
        let mut idx = 0u64;
        for &s in w.iter().rev() {
            idx = idx * self.q as u64 + s as u64;
        }
        idx
    }

    /// Component-wise sum mod q of two string indices (XOR when q = 2).
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.q == 2 {
            return a ^ b;
        }
        let q = self.q as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.n {
            out += (x % q + y % q) % q * place;
            x /= q;
            y /= q;
            place *= q;
        }
        out
    }

    /// Component-wise difference a - b mod q.
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if self.q == 2 {
            return a ^ b;
        }
        let q = self.q as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.n {
            out += (x % q + q - y % q) % q * place;
            x /= q;
            y /= q;
            place *= q;
        }
        out
    }
}

/// Two strings are confusable if they differ at some vertex i while agreeing
/// on all of N(i).
pub fn confusable(g: &Graph, x: &[u8], y: &[u8]) -> Result<bool, CodeError> {
    if x.len() != g.n() || y.len() != g.n() {
        return Err(CodeError::LengthMismatch {
            expected: g.n(),
            got: if x.len() != g.n() { x.len() } else { y.len() },
        });
    }
    for i in 0..g.n() {
        if x[i] != y[i] && g.nbrs(i).iter().all(|j| x[j] == y[j]) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Per-vertex recovery maps: neighborhood assignment -> unique own symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryTables {
    /// tables[i] maps the restriction of a codeword to sorted N(i) onto X_i.
    pub tables: Vec<BTreeMap<Word, u8>>,
}

impl RecoveryTables {
    /// Applies f_i to a full assignment.
    pub fn recover(&self, g: &Graph, i: usize, word: &[u8]) -> Option<u8> {
        let key: Word = g.nbrs(i).iter().map(|j| word[j]).collect();
        self.tables[i].get(&key).copied()
    }
}

/// A failed verification: two codewords confusable at a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusablePair {
    pub x: Word,
    pub y: Word,
    pub vertex: usize,
}

/// Checks Def.-style recoverability: every vertex symbol must be a function
/// of its neighborhood restriction. Returns the induced tables, or the
/// lexicographically first confusable pair.
pub fn verify_rdss(g: &Graph, code: &Code) -> Result<Result<RecoveryTables, ConfusablePair>, CodeError> {
    if code.n() != g.n() {
        return Err(CodeError::LengthMismatch {
            expected: g.n(),
            got: code.n(),
        });
    }
    let n = g.n();
    let mut tables: Vec<BTreeMap<Word, u8>> = vec![BTreeMap::new(); n];
    let words = code.words();
    for i in 0..n {
        let nbrs: Vec<usize> = g.nbrs(i).iter().collect();
        for w in words {
            let key: Word = nbrs.iter().map(|&j| w[j]).collect();
            if let Some(&prev) = tables[i].get(&key) {
                if prev != w[i] {
                    // Locate the lexicographically first confusable pair.
                    for (a, x) in words.iter().enumerate() {
                        for y in words.iter().skip(a + 1) {
                            for v in 0..n {
                                if x[v] != y[v] && g.nbrs(v).iter().all(|j| x[j] == y[j]) {
                                    return Ok(Err(ConfusablePair {
                                        x: x.clone(),
                                        y: y.clone(),
                                        vertex: v,
                                    }));
                                }
                            }
                        }
                    }
                    unreachable!("table conflict implies a confusable pair");
                }
            } else {
                tables[i].insert(key, w[i]);
            }
        }
    }
    Ok(Ok(RecoveryTables { tables }))
}

/// The difference set that generates confusion-graph adjacency: nonzero
/// strings v with some coordinate i where v_i != 0 and v vanishes on N(i).
/// Confusability is translation-invariant: x ~ y iff y - x lies in this set.
pub fn q_set(g: &Graph, q: u32, caps: &Caps) -> Result<Vec<u64>, CodeError> {
    let space = Space::new(q, g.n(), caps)?;
    let mut out = Vec::new();
    for idx in 1..space.size {
        let w = space.word(idx);
        let qualifies = (0..g.n())
            .any(|i| w[i] != 0 && g.nbrs(i).iter().all(|j| w[j] == 0));
        if qualifies {
            out.push(idx);
        }
    }
    Ok(out)
}

/// |Q_q(G)| together with the existence lower bound n - log_q(|Q|+1).
pub fn q_set_size(g: &Graph, q: u32, caps: &Caps) -> Result<(u64, f64), CodeError> {
    let qs = q_set(g, q, caps)?;
    let count = qs.len() as u64;
    let bound = g.n() as f64 - ((count + 1) as f64).ln() / (q as f64).ln();
    Ok((count, bound))
}

/// Union-bound relaxation of the counting bound, from the degree histogram:
/// -log_q[(q-1) sum_i delta_i q^{-(i+1)}].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeBound {
    pub value: f64,
    /// False when the graph has an isolated vertex (the closed form then
    /// overshoots and is reported raw).
    pub consistent: bool,
}

pub fn degree_distribution_bound(g: &Graph, q: u32) -> DegreeBound {
    let qf = q as f64;
    let mut sum = 0f64;
    for v in 0..g.n() {
        let d = g.degree(v) as i32;
        sum += qf.powi(-(d + 1));
    }
    let value = -((qf - 1.0) * sum).ln() / qf.ln();
    DegreeBound {
        value,
        consistent: g.isolated_vertices().is_empty(),
    }
}

/// Builds confusion-graph adjacency bitsets (size^2 bits total); only used
/// for spaces small enough to materialize.
pub fn confusion_adjacency(g: &Graph, q: u32, caps: &Caps) -> Result<Vec<BitSet>, CodeError> {
    let space = Space::new(q, g.n(), caps)?;
    let qs = q_set(g, q, caps)?;
    let size = space.size as usize;
    let mut adj = vec![BitSet::new(size); size];
    for s in 0..size as u64 {
        for &v in &qs {
            adj[s as usize].set(space.add(s, v) as usize);
        }
    }
    Ok(adj)
}

/// Hoffman ratio bound on independent sets of the binary confusion graph.
///
/// The confusion graph is a Cayley graph over F_2^n (two strings are
/// adjacent iff their difference lies in the confusable set), so its
/// eigenvalues are the Walsh transform of that set's indicator. For a
/// d-regular graph with least eigenvalue l < 0, every independent set has
/// at most N(-l)/(d - l) vertices.
fn spectral_independence_bound(qs: &[u64], size: usize) -> Option<usize> {
    if qs.is_empty() {
        return Some(size);
    }
    let mut f = vec![0i64; size];
    for &z in qs {
        f[z as usize] = 1;
    }
    let mut half = 1;
    while half < size {
        for block in (0..size).step_by(half * 2) {
            for i in block..block + half {
                let (a, b) = (f[i], f[i + half]);
                f[i] = a + b;
                f[i + half] = a - b;
            }
        }
        half *= 2;
    }
    let d = f[0];
    let lmin = *f.iter().min().unwrap();
    if lmin >= 0 {
        return None;
    }
    Some((size as i128 * (-lmin) as i128 / (d - lmin) as i128) as usize)
}

/// Delsarte linear-programming bound on independent sets of the binary
/// confusion graph, computed with exact rational arithmetic. Maximizes the
/// total mass of a distance distribution that vanishes on the confusable
/// set and has nonnegative Walsh transform; every difference-avoiding set
/// satisfies the bound. Much tighter than the ratio bound on the dense
/// symmetric instances, at the cost of a rational simplex solve.
fn delsarte_bound(qs: &[u64], size: usize) -> Option<usize> {
    use crate::simplex::{self, Cmp, Constraint, LinearProgram, Rat};
    use num_traits::One;
    let mut in_d = vec![false; size];
    for &z in qs {
        in_d[z as usize] = true;
    }
    let vars: Vec<usize> = (1..size).filter(|&z| !in_d[z]).collect();
    if vars.is_empty() {
        return Some(1);
    }
    // a_0 = 1 is substituted out; for every character s:
    // sum_z (-1)^{s.z} a_z >= 0  <=>  -sum_{z in vars} (-1)^{s.z} a_z <= 1.
    let mut constraints = Vec::with_capacity(size);
    for s in 0..size {
        let coeffs: Vec<Rat> = vars
            .iter()
            .map(|&z| {
                if (s & z).count_ones() % 2 == 0 {
                    -Rat::one()
                } else {
                    Rat::one()
                }
            })
            .collect();
        constraints.push(Constraint {
            coeffs,
            cmp: Cmp::Le,
            rhs: Rat::one(),
        });
    }
    let lp = LinearProgram {
        objective: vec![Rat::one(); vars.len()],
        constraints,
    };
    let sol = simplex::solve(&lp).ok()?;
    Some((Rat::one() + sol.value).floor().to_integer().try_into().ok()?)
}

/// Node budget after which the confusion-graph search escalates to the
/// Delsarte bound; generous enough that only the hardest instances pay for
/// the rational LP.
const CONFUSION_MIS_BUDGET: usize = 2_000_000;

/// Maximum independent set of the confusion graph.
///
/// The confusion graph is a Cayley graph of the confusable-difference set,
/// hence vertex transitive: some maximum independent set contains the zero
/// word, so the search fixes it and works inside its non-neighborhood.
/// Binary instances are capped by the spectral (ratio) bound; if the
/// branch and bound exhausts its node budget, the exact Delsarte bound is
/// computed and the search repeats with the tighter cap, stopping as soon
/// as the cap is attained.
fn confusion_mis(g: &Graph, q: u32, caps: &Caps) -> Result<Vec<usize>, CodeError> {
    let adj = confusion_adjacency(g, q, caps)?;
    let size = adj.len();
    if size == 1 {
        return Ok(vec![0]);
    }
    let qs = q_set(g, q, caps)?;
    let cap = if q == 2 {
        spectral_independence_bound(&qs, size).unwrap_or(usize::MAX)
    } else {
        usize::MAX
    };
    // Induced subgraph on the non-neighbors of the zero word.
    let keep: Vec<usize> = (1..size).filter(|&v| !adj[0].get(v)).collect();
    let mut pos = vec![usize::MAX; size];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    let mut sub = vec![BitSet::new(keep.len()); keep.len()];
    for (i, &v) in keep.iter().enumerate() {
        for u in adj[v].iter() {
            if pos[u] != usize::MAX {
                sub[i].set(pos[u]);
            }
        }
    }
    let inner_cap = cap.saturating_sub(1);
    let inner = match mis::MisInstance::with_cap(&sub, inner_cap).solve_budgeted(CONFUSION_MIS_BUDGET)
    {
        Some(found) => found,
        None => {
            let tight = if q == 2 && size <= 512 {
                delsarte_bound(&qs, size).map_or(inner_cap, |d| inner_cap.min(d.saturating_sub(1)))
            } else {
                inner_cap
            };
            mis::MisInstance::with_cap(&sub, tight)
                .solve_budgeted(usize::MAX)
                .expect("unlimited budget always completes")
        }
    };
    let mut out = vec![0usize];
    out.extend(inner.into_iter().map(|i| keep[i]));
    out.sort_unstable();
    Ok(out)
}

pub struct ExactCapacity {
    pub code: Code,
    /// log_q |C| in q-ary units.
    pub dimension: f64,
}

/// Exact capacity: maximum independent set of the confusion graph on all
/// q^n strings.
pub fn capacity_exact(g: &Graph, q: u32, caps: &Caps) -> Result<ExactCapacity, CodeError> {
    let space = Space::new(q, g.n(), caps)?;
    let indices = confusion_mis(g, q, caps)?;
    let words: Vec<Word> = indices.iter().map(|&i| space.word(i as u64)).collect();
    let code = Code::new(q, g.n(), words)?;
    let dimension = code.dimension();
    Ok(ExactCapacity { code, dimension })
}

/// Size of a maximum independent set of the confusion graph, without
/// materializing the witness code. Used by the exhaustive test suites.
pub fn capacity_exact_size(g: &Graph, q: u32, caps: &Caps) -> Result<usize, CodeError> {
    Ok(confusion_mis(g, q, caps)?.len())
}

pub fn pentagon_example_code() -> Code {
    let words = ["00000", "01100", "00011", "11011", "11101"]
        .iter()
        .map(|s| s.bytes().map(|b| b - b'0').collect())
        .collect();
    Code::new(2, 5, words).unwrap()
}

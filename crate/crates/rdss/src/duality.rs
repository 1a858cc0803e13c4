//! Bridge between storage codes and index codes: greedy covering families,
//! covering-based index codes with translated recovery, fiber extraction,
//! and the exact counting identities used as test oracles.

use crate::bitset::BitSet;
use crate::code::{Code, CodeError, RecoveryTables, Space, Word, verify_rdss};
use crate::config::Caps;
use crate::graph::Graph;
use crate::simplex::Rat;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DualityError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("code is not recoverable on this graph; cannot build an index code")]
    NotRecoverable,
    #[error("covering family does not cover the space (index {missing} uncovered)")]
    DoesNotCover { missing: u64 },
    #[error("malformed covering file at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Exact uncovered proportion 1 - |F|/q^n.
pub fn q_uncovered(space: &Space, covered: &BitSet) -> Rat {
    let total = BigInt::from(space.size);
    let hit = BigInt::from(covered.count() as u64);
    BigRational::new(&total - hit, total)
}

fn words_to_bitset(space: &Space, words: &[Word]) -> BitSet {
    let mut b = BitSet::new(space.size as usize);
    for w in words {
        b.set(space.index(w) as usize);
    }
    b
}

fn shift_set(space: &Space, f: &BitSet, z: u64) -> BitSet {
    let mut out = BitSet::new(space.size as usize);
    for i in f.iter() {
        out.set(space.add(i as u64, z) as usize);
    }
    out
}

/// Generators whose binary span of translates covers the whole space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringFamily {
    pub q: u32,
    pub n: usize,
    pub generators: Vec<Word>,
    /// Deduplicated binary span {sum a_i d_i : a in {0,1}^l}, sorted.
    pub translates: Vec<Word>,
}

impl CoveringFamily {
    /// Translate selected by a label under the fixed bijection: bit i of the
    /// label is the binary coefficient of generator i.
    pub fn translate_for_label(&self, space: &Space, label: u64) -> u64 {
        let mut x = 0u64;
        for (i, d) in self.generators.iter().enumerate() {
            if label >> i & 1 == 1 {
                x = space.add(x, space.index(d));
            }
        }
        x
    }

    pub fn label_count(&self) -> u64 {
        1u64 << self.generators.len()
    }

    /// Exhaustive covering check for a source code.
    pub fn covers(&self, code: &Code, caps: &Caps) -> Result<(), DualityError> {
        let space = Space::new(self.q, self.n, caps)?;
        let base = words_to_bitset(&space, code.words());
        let mut covered = BitSet::new(space.size as usize);
        for t in &self.translates {
            covered.union_with(&shift_set(&space, &base, space.index(t)));
        }
        match (0..space.size).find(|&i| !covered.get(i as usize)) {
            None => Ok(()),
            Some(missing) => Err(DualityError::DoesNotCover { missing }),
        }
    }

    pub fn serialize(&self) -> String {
        let mut s = format!("g {}\n", self.generators.len());
        for d in &self.generators {
            s.push_str(&Code::format_word(self.q, d));
            s.push('\n');
        }
        s
    }

    pub fn parse(q: u32, n: usize, text: &str) -> Result<CoveringFamily, DualityError> {
        let err = |line: usize, reason: &str| DualityError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut expected: Option<usize> = None;
        let mut generators = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if expected.is_none() {
                let fields: Vec<&str> = t.split_whitespace().collect();
                if fields.len() != 2 || fields[0] != "g" {
                    return Err(err(line, "expected `g <count>`"));
                }
                expected =
                    Some(fields[1].parse().map_err(|_| err(line, "bad generator count"))?);
                continue;
            }
            let w = Code::parse_word(q, n, t).map_err(|reason| err(line, &reason))?;
            generators.push(w);
        }
        let expected = expected.ok_or_else(|| err(1, "missing header"))?;
        if generators.len() != expected {
            return Err(err(
                text.lines().count(),
                &format!(
                    "generator count mismatch: header says {expected}, found {}",
                    generators.len()
                ),
            ));
        }
        let translates = binary_span(q, n, &generators);
        Ok(CoveringFamily {
            q,
            n,
            generators,
            translates,
        })
    }
}

fn binary_span(q: u32, n: usize, generators: &[Word]) -> Vec<Word> {
    let mut set: std::collections::BTreeSet<Word> = std::collections::BTreeSet::new();
    for mask in 0u64..1u64 << generators.len() {
        let mut x = vec![0u8; n];
        for (i, d) in generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for j in 0..n {
                    x[j] = ((x[j] as u32 + d[j] as u32) % q) as u8;
                }
            }
        }
        set.insert(x);
    }
    set.into_iter().collect()
}

/// Greedy covering: starting from F = C, repeatedly adjoin the translate
/// F + z whose union leaves the least uncovered mass (ties broken by the
/// lexicographically smallest shift word), until the space is covered.
pub fn greedy_covering(code: &Code, caps: &Caps) -> Result<CoveringFamily, DualityError> {
    let q = code.q();
    let n = code.n();
    let space = Space::new(q, n, caps)?;
    let mut f = words_to_bitset(&space, code.words());
    let mut generators: Vec<Word> = Vec::new();
    while (f.count() as u64) < space.size {
        let members: Vec<u64> = f.iter().map(|i| i as u64).collect();
        let best = (0..space.size)
            .into_par_iter()
            .map(|z| {
                let mut merged = f.clone();
                for &i in &members {
                    merged.set(space.add(i, z) as usize);
                }
                (space.size - merged.count() as u64, space.word(z))
            })
            .min_by(|a, b| a.cmp(b))
            .expect("nonempty candidate set");
        let (_, zword) = best;
        let z = space.index(&zword);
        let shifted = shift_set(&space, &f, z);
        f.union_with(&shifted);
        generators.push(zword);
    }
    let translates = binary_span(q, n, &generators);
    Ok(CoveringFamily {
        q,
        n,
        generators,
        translates,
    })
}

/// Ceiled generator-count bound for a covering of C in F_q^n.
pub fn covering_length_bound(q: u32, n: usize, code_size: usize) -> usize {
    let qn = (q as f64).powi(n as i32);
    let ratio = (qn / code_size as f64).log2();
    let slack = (n as f64 * (q as f64).ln())
        .min((code_size as f64).ln() + 1.0)
        .log2();
    (ratio + slack).ceil().max(0.0) as usize
}

/// Index code built from a storage code and a covering family: the encoder
/// sends the smallest label whose translated copy of C contains y; vertex i
/// decodes through the translated recovery function.
pub struct CoveringIndexCode {
    pub q: u32,
    pub n: usize,
    pub code: Code,
    pub covering: CoveringFamily,
    tables: RecoveryTables,
}

impl CoveringIndexCode {
    /// Number of distinct labels actually needed (= |translate span|).
    pub fn span_size(&self) -> usize {
        self.covering.translates.len()
    }

    /// Exact index length log_q |span| in q-ary symbols.
    pub fn length_exact(&self) -> f64 {
        (self.span_size() as f64).ln() / (self.q as f64).ln()
    }

    /// Whole q-ary symbols needed to transmit a label.
    pub fn length_symbols(&self) -> usize {
        let mut l = 0usize;
        let mut reach = 1u64;
        while reach < self.span_size() as u64 {
            reach = reach.saturating_mul(self.q as u64);
            l += 1;
        }
        l
    }

    pub fn encode(&self, space: &Space, y: &[u8]) -> u64 {
        let yi = space.index(y);
        for label in 0..self.covering.label_count() {
            let x = self.covering.translate_for_label(space, label);
            let base = space.sub(yi, x);
            if self.code.contains(&space.word(base)) {
                return label;
            }
        }
        unreachable!("validated covering leaves no string unencoded")
    }

    /// Recovers y_i from the label and the side information y|N(i): shift y
    /// back by the label's translate, apply C's recovery, shift forward.
    pub fn decode(&self, g: &Graph, space: &Space, i: usize, label: u64, y: &[u8]) -> Option<u8> {
        let x = space.word(self.covering.translate_for_label(space, label));
        let q = self.q;
        let shifted: Word = (0..self.n)
            .map(|j| ((y[j] as u32 + q - x[j] as u32) % q) as u8)
            .collect();
        let base = self.tables.recover(g, i, &shifted)?;
        Some(((base as u32 + x[i] as u32) % q) as u8)
    }
}

pub fn index_from_rdss(
    g: &Graph,
    code: &Code,
    covering: &CoveringFamily,
    caps: &Caps,
) -> Result<CoveringIndexCode, DualityError> {
    covering.covers(code, caps)?;
    let tables = match verify_rdss(g, code)? {
        Ok(t) => t,
        Err(_) => return Err(DualityError::NotRecoverable),
    };
    Ok(CoveringIndexCode {
        q: code.q(),
        n: code.n(),
        code: code.clone(),
        covering: covering.clone(),
        tables,
    })
}

/// Largest encoder fiber of an index code, as a storage code: all strings
/// sharing one label are pairwise non-confusable because the decoders pin
/// every coordinate.
pub fn rdss_from_index(
    idx: &CoveringIndexCode,
    caps: &Caps,
) -> Result<Code, DualityError> {
    let space = Space::new(idx.q, idx.n, caps)?;
    let mut fibers: std::collections::BTreeMap<u64, Vec<Word>> = std::collections::BTreeMap::new();
    for i in 0..space.size {
        let y = space.word(i);
        let label = idx.encode(&space, &y);
        fibers.entry(label).or_default().push(y);
    }
    let best = fibers
        .into_iter()
        .max_by(|(la, a), (lb, b)| a.len().cmp(&b.len()).then(lb.cmp(la)))
        .expect("space is nonempty");
    Ok(Code::new(idx.q, idx.n, best.1)?)
}

/// Exact check of the shift-counting identity
/// sum over all x of |(C+x) ∩ B| = |C| |B|.
pub fn bassalygo_elias_check(
    q: u32,
    n: usize,
    c_words: &[Word],
    b_words: &[Word],
    caps: &Caps,
) -> Result<bool, DualityError> {
    let space = Space::new(q, n, caps)?;
    let c = words_to_bitset(&space, c_words);
    let b = words_to_bitset(&space, b_words);
    let mut total: u128 = 0;
    for x in 0..space.size {
        let shifted = shift_set(&space, &c, x);
        total += shifted.intersection_count(&b) as u128;
    }
    Ok(total == c.count() as u128 * b.count() as u128)
}

/// Exact check of the averaging recursion
/// q^{-n} sum over x of Q(F ∪ (F+x)) = Q(F)^2.
pub fn q_recursion_check(
    q: u32,
    n: usize,
    f_words: &[Word],
    caps: &Caps,
) -> Result<bool, DualityError> {
    let space = Space::new(q, n, caps)?;
    let f = words_to_bitset(&space, f_words);
    let mut sum = Rat::zero();
    for x in 0..space.size {
        let mut merged = f.clone();
        merged.union_with(&shift_set(&space, &f, x));
        sum += q_uncovered(&space, &merged);
    }
    let avg = sum / BigRational::from(BigInt::from(space.size));
    let qf = q_uncovered(&space, &f);
    Ok(avg == &qf * &qf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::pentagon_example_code;
    use crate::simplex::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn caps() -> Caps {
        Caps::default()
    }

    fn all_words(q: u32, n: usize) -> Vec<Word> {
        let space = Space::new(q, n, &caps()).unwrap();
        (0..space.size).map(|i| space.word(i)).collect()
    }

    #[test]
    fn q_uncovered_extremes() {
        let space = Space::new(2, 3, &caps()).unwrap();
        let full = words_to_bitset(&space, &all_words(2, 3));
        assert_eq!(q_uncovered(&space, &full), rat(0, 1));
        let empty = BitSet::new(8);
        assert_eq!(q_uncovered(&space, &empty), rat(1, 1));
    }

    #[test]
    fn q_uncovered_pentagon() {
        let space = Space::new(2, 5, &caps()).unwrap();
        let f = words_to_bitset(&space, pentagon_example_code().words());
        assert_eq!(q_uncovered(&space, &f), rat(27, 32));
    }

    #[test]
    fn greedy_covering_full_space() {
        let code = Code::new(2, 3, all_words(2, 3)).unwrap();
        let fam = greedy_covering(&code, &caps()).unwrap();
        assert!(fam.generators.is_empty());
        assert_eq!(fam.translates, vec![vec![0, 0, 0]]);
        fam.covers(&code, &caps()).unwrap();
    }

    #[test]
    fn greedy_covering_zero_code() {
        let code = Code::new(2, 3, vec![vec![0, 0, 0]]).unwrap();
        let fam = greedy_covering(&code, &caps()).unwrap();
        assert_eq!(fam.generators.len(), 3);
        assert_eq!(fam.translates.len(), 8);
        fam.covers(&code, &caps()).unwrap();
    }

    #[test]
    fn greedy_covering_pentagon_within_bound() {
        let code = pentagon_example_code();
        let fam = greedy_covering(&code, &caps()).unwrap();
        fam.covers(&code, &caps()).unwrap();
        assert!(fam.generators.len() <= covering_length_bound(2, 5, 5));
        assert_eq!(covering_length_bound(2, 5, 5), 5);
    }

    #[test]
    fn greedy_trajectory_squares() {
        // Q(F_t) <= Q(F_0)^(2^t): replay the greedy steps on the pentagon.
        let code = pentagon_example_code();
        let space = Space::new(2, 5, &caps()).unwrap();
        let fam = greedy_covering(&code, &caps()).unwrap();
        let mut f = words_to_bitset(&space, code.words());
        let q0 = q_uncovered(&space, &f);
        let mut bound = q0.clone();
        for d in &fam.generators {
            let z = space.index(d);
            let shifted = shift_set(&space, &f, z);
            f.union_with(&shifted);
            bound = &bound * &bound;
            assert!(q_uncovered(&space, &f) <= bound);
        }
    }

    #[test]
    fn covering_roundtrip_serialization() {
        let code = pentagon_example_code();
        let fam = greedy_covering(&code, &caps()).unwrap();
        let text = fam.serialize();
        let back = CoveringFamily::parse(2, 5, &text).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn index_code_pentagon_roundtrip() {
        let g = Graph::cycle(5);
        let code = pentagon_example_code();
        let fam = greedy_covering(&code, &caps()).unwrap();
        let idx = index_from_rdss(&g, &code, &fam, &caps()).unwrap();
        assert!(idx.length_symbols() <= 5);
        assert!(idx.length_exact() <= 5.0 - 5f64.log2() + (5.0 * 2f64.ln()).min(1.0 + 5f64.ln()).log2() + 1e-9);
        let space = Space::new(2, 5, &caps()).unwrap();
        for yi in 0..space.size {
            let y = space.word(yi);
            let label = idx.encode(&space, &y);
            for i in 0..5 {
                assert_eq!(idx.decode(&g, &space, i, label, &y), Some(y[i]));
            }
        }
    }

    #[test]
    fn index_code_capacity_code_short_label() {
        // A maximum code on K2 ({00, 11}) needs a single-bit label.
        let g = Graph::complete(2);
        let code = Code::new(2, 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        let fam = greedy_covering(&code, &caps()).unwrap();
        let idx = index_from_rdss(&g, &code, &fam, &caps()).unwrap();
        assert_eq!(idx.length_symbols(), 1);
        assert_eq!(idx.length_exact(), 1.0);
        let space = Space::new(2, 2, &caps()).unwrap();
        for yi in 0..space.size {
            let y = space.word(yi);
            let label = idx.encode(&space, &y);
            for i in 0..2 {
                assert_eq!(idx.decode(&g, &space, i, label, &y), Some(y[i]));
            }
        }
    }

    #[test]
    fn fiber_extraction_dimension() {
        let g = Graph::cycle(5);
        let code = pentagon_example_code();
        let fam = greedy_covering(&code, &caps()).unwrap();
        let idx = index_from_rdss(&g, &code, &fam, &caps()).unwrap();
        let fiber = rdss_from_index(&idx, &caps()).unwrap();
        // Largest fiber has at least q^n / span many strings.
        assert!(fiber.len() * idx.span_size() >= 32);
        assert!(verify_rdss(&g, &fiber).unwrap().is_ok());
    }

    #[test]
    fn bassalygo_elias_trivial_cases() {
        let c = vec![vec![0, 0, 0, 0]];
        assert!(bassalygo_elias_check(2, 4, &c, &c, &caps()).unwrap());
        let full = all_words(2, 4);
        assert!(bassalygo_elias_check(2, 4, &full, &c, &caps()).unwrap());
    }

    #[test]
    fn identities_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let full = all_words(2, 4);
        for _ in 0..20 {
            let c: Vec<Word> = full
                .iter()
                .filter(|_| rng.gen_bool(0.4))
                .cloned()
                .collect();
            let b: Vec<Word> = full
                .iter()
                .filter(|_| rng.gen_bool(0.4))
                .cloned()
                .collect();
            assert!(bassalygo_elias_check(2, 4, &c, &b, &caps()).unwrap());
            assert!(q_recursion_check(2, 4, &c, &caps()).unwrap());
        }
    }

    #[test]
    fn q_recursion_pentagon() {
        assert!(q_recursion_check(2, 5, pentagon_example_code().words(), &caps()).unwrap());
    }

    #[test]
    fn q_recursion_extremes() {
        assert!(q_recursion_check(2, 3, &all_words(2, 3), &caps()).unwrap());
        assert!(q_recursion_check(2, 3, &[], &caps()).unwrap());
    }

    #[test]
    fn syndrome_and_covering_paths_agree() {
        // The dim-2 linear pentagon code round-trips along both routes.
        let g = Graph::cycle(5);
        let mr = crate::linear::minrank(&g, 2, &caps()).unwrap();
        let code = crate::linear::linear_rdss_from_fit(&g, &mr.witness, 2, &caps()).unwrap();
        let fam = greedy_covering(&code, &caps()).unwrap();
        let idx = index_from_rdss(&g, &code, &fam, &caps()).unwrap();
        let lin = crate::linear::syndrome_index_code(&g, &code).unwrap();
        let space = Space::new(2, 5, &caps()).unwrap();
        for yi in 0..space.size {
            let y = space.word(yi);
            let label = idx.encode(&space, &y);
            let syn = lin.encode(&y);
            for i in 0..5 {
                assert_eq!(idx.decode(&g, &space, i, label, &y), Some(y[i]));
                assert_eq!(lin.decode(i, &syn, &y), y[i]);
            }
        }
    }
}

//! Finite-field machinery: minrank search over fitting matrices, linear
//! storage codes as null spaces, and syndrome index codes.
//!
//! The alphabet is restricted to prime q so that F_q arithmetic needs no
//! extension-field support.

use crate::code::{Code, CodeError, Space};
use crate::config::Caps;
use crate::graph::Graph;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinearError {
    #[error("q = {0} is not prime")]
    NotPrime(u32),
    #[error("minrank search space {space} exceeds cap {cap}; minrank <= {n} from the identity matrix")]
    SearchCapExceeded { space: u128, cap: u64, n: usize },
    #[error("matrix does not fit the graph at entry ({i}, {j})")]
    DoesNotFit { i: usize, j: usize },
    #[error("code is not linear: not closed under {op}")]
    NotLinear { op: &'static str },
    #[error("code admits no per-vertex linear recovery on this graph")]
    NoLinearRecovery,
    #[error(transparent)]
    Code(#[from] CodeError),
}

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense n x m matrix over F_q (q prime), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    pub q: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u8>,
}

impl FieldMatrix {
    pub fn zero(q: u32, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            q,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(q: u32, n: usize) -> Self {
        let mut m = FieldMatrix::zero(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<u8>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        Echelon::new(self.q, self.cols).rank_of(rows)
    }

    /// A fits G: nonzero diagonal, zero at (i, j), i != j, unless j is an
    /// out-neighbor of i.
    pub fn fits(&self, g: &Graph) -> Result<(), LinearError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if i == j {
                    if v == 0 {
                        return Err(LinearError::DoesNotFit { i, j });
                    }
                } else if v != 0 && !g.nbrs(i).contains(j) {
                    return Err(LinearError::DoesNotFit { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        let q = self.q as u32;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                for j in 0..self.cols {
                    acc = (acc + self.get(i, j) as u32 * x[j] as u32) % q;
                }
                acc as u8
            })
            .collect()
    }

    /// Basis of the right null space, each vector length `cols`.
    pub fn null_space_basis(&self) -> Vec<Vec<u8>> {
        let q = self.q;
        let mut rows: Vec<Vec<u8>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        // reduced row echelon form
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = mod_inv(rows[r][c] as u32, q);
            for v in rows[r].iter_mut() {
                *v = ((*v as u32 * inv) % q) as u8;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c] as u32;
                    for j in 0..self.cols {
                        let sub = (f * rows[r][j] as u32) % q;
                        rows[i][j] = ((rows[i][j] as u32 + q - sub) % q) as u8;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let mut basis = Vec::new();
        for c in 0..self.cols {
            if pivots.contains(&c) {
                continue;
            }
            let mut v = vec![0u8; self.cols];
            v[c] = 1;
            for (pi, &pc) in pivots.iter().enumerate() {
                let coeff = rows[pi][c] as u32;
                v[pc] = ((q - coeff % q) % q) as u8;
            }
            basis.push(v);
        }
        basis
    }
}

fn mod_inv(a: u32, q: u32) -> u32 {
    // q prime: Fermat.
    let mut result = 1u64;
    let mut base = a as u64 % q as u64;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % q as u64;
        }
        base = base * base % q as u64;
        e >>= 1;
    }
    result as u32
}

/// Incremental row-echelon accumulator used for rank pruning in the minrank
/// search.
struct Echelon {
    q: u32,
    cols: usize,
    rows: Vec<Vec<u8>>,
}

impl Echelon {
    fn new(q: u32, cols: usize) -> Self {
        Echelon {
            q,
            cols,
            rows: Vec::new(),
        }
    }

    /// Reduces `row` against the accumulated basis; if independent, inserts
    /// it and returns true.
    fn insert(&mut self, mut row: Vec<u8>) -> bool {
        let q = self.q;
        for basis in &self.rows {
            let lead = basis.iter().position(|&v| v != 0).unwrap();
            if row[lead] != 0 {
                let f = (row[lead] as u32 * mod_inv(basis[lead] as u32, q)) % q;
                for j in 0..self.cols {
                    let sub = (f * basis[j] as u32) % q;
                    row[j] = ((row[j] as u32 + q - sub) % q) as u8;
                }
            }
        }
        if row.iter().all(|&v| v == 0) {
            false
        } else {
            self.rows.push(row);
            // Keep rows ordered by leading column.
            self.rows
                .sort_by_key(|r| r.iter().position(|&v| v != 0).unwrap());
            true
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn rank_of(mut self, rows: Vec<Vec<u8>>) -> usize {
        for r in rows {
            self.insert(r);
        }
        self.rank()
    }
}

#[derive(Debug)]
pub struct Minrank {
    pub rank: usize,
    pub witness: FieldMatrix,
}

/// Minimum rank over all matrices fitting G, by depth-first search over row
/// assignments with incremental-rank pruning. Rows are scaled so every
/// diagonal entry is 1, which loses no generality.
pub fn minrank(g: &Graph, q: u32, caps: &Caps) -> Result<Minrank, LinearError> {
    if !is_prime(q) {
        return Err(LinearError::NotPrime(q));
    }
    let n = g.n();
    if n == 0 {
        return Ok(Minrank {
            rank: 0,
            witness: FieldMatrix::zero(q, 0, 0),
        });
    }
    let free: Vec<Vec<usize>> = (0..n).map(|i| g.nbrs(i).iter().collect()).collect();
    let total_free: u32 = free.iter().map(|f| f.len() as u32).sum();
    let space = (q as u128).saturating_pow(total_free);
    if space > caps.minrank_cap as u128 {
        return Err(LinearError::SearchCapExceeded {
            space,
            cap: caps.minrank_cap,
            n,
        });
    }

    struct Search<'a> {
        q: u32,
        n: usize,
        free: &'a [Vec<usize>],
        best_rank: usize,
        best: Option<Vec<Vec<u8>>>,
        rows: Vec<Vec<u8>>,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, ech: &Echelon) {
            if ech.rank() >= self.best_rank {
                return;
            }
            if i == self.n {
                self.best_rank = ech.rank();
                self.best = Some(self.rows.clone());
                return;
            }
            // Enumerate the i-th row in lexicographic coefficient order.
            let positions = &self.free[i];
            let combos = (self.q as u64).pow(positions.len() as u32);
            for combo in 0..combos {
                let mut row = vec![0u8; self.n];
                row[i] = 1;
                let mut c = combo;
                for &j in positions {
                    row[j] = (c % self.q as u64) as u8;
                    c /= self.q as u64;
                }
                let mut next = Echelon {
                    q: ech.q,
                    cols: ech.cols,
                    rows: ech.rows.clone(),
                };
                next.insert(row.clone());
                self.rows.push(row);
                self.go(i + 1, &next);
                self.rows.pop();
            }
        }
    }

    let mut search = Search {
        q,
        n,
        free: &free,
        best_rank: n,
        best: None,
        rows: Vec::new(),
    };
    // Seed with the identity so a witness always exists.
    search.go(0, &Echelon::new(q, n));
    let (rank, rows) = match search.best {
        Some(rows) => (search.best_rank, rows),
        None => (
            n,
            (0..n)
                .map(|i| {
                    let mut r = vec![0u8; n];
                    r[i] = 1;
                    r
                })
                .collect(),
        ),
    };
    let mut witness = FieldMatrix::zero(q, n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            witness.set(i, j, v);
        }
    }
    witness.fits(g).expect("search only produces fitting matrices");
    Ok(Minrank { rank, witness })
}

/// Null space of a fitting matrix, enumerated as an explicit code. Each row
/// of A expresses X_i as a linear combination over N(i), so the result is a
/// valid storage code of dimension n - rank(A).
pub fn linear_rdss_from_fit(
    g: &Graph,
    a: &FieldMatrix,
    q: u32,
    _caps: &Caps,
) -> Result<Code, LinearError> {
    if !is_prime(q) {
        return Err(LinearError::NotPrime(q));
    }
    a.fits(g)?;
    let n = g.n();
    let basis = a.null_space_basis();
    let k = basis.len();
    let mut words = Vec::with_capacity((q as usize).pow(k as u32));
    let total = (q as u64).pow(k as u32);
    for combo in 0..total {
        let mut wv = vec![0u8; n];
        let mut c = combo;
        for b in &basis {
            let coef = (c % q as u64) as u32;
            c /= q as u64;
            for (j, &bj) in b.iter().enumerate() {
                wv[j] = ((wv[j] as u32 + coef * bj as u32) % q) as u8;
            }
        }
        words.push(wv);
    }
    Ok(Code::new(q, n, words)?)
}

/// Parity-check view of a linear storage code: the syndrome map is the
/// index-code encoder, and each vertex decodes its own symbol linearly from
/// the syndrome plus its neighbors.
#[derive(Debug, Clone)]
pub struct LinearIndexCode {
    pub q: u32,
    pub n: usize,
    /// l x n parity-check matrix; l = n - dim(C).
    pub check: FieldMatrix,
    /// Per-vertex recovery coefficients over N(i): X_i = sum coeffs[i][j] X_j.
    pub recovery: Vec<Vec<(usize, u8)>>,
}

impl LinearIndexCode {
    pub fn length(&self) -> usize {
        self.check.rows
    }

    pub fn encode(&self, y: &[u8]) -> Vec<u8> {
        self.check.mul_vec(y)
    }

    /// Decodes Y_i from the syndrome and the side-information neighbors.
    pub fn decode(&self, i: usize, syndrome: &[u8], y: &[u8]) -> u8 {
        // Coset representative e with He = s, by Gaussian solve.
        let e = self.coset_representative(syndrome);
        let q = self.q as u32;
        let mut acc = e[i] as u32;
        for &(j, c) in &self.recovery[i] {
            let shifted = (y[j] as u32 + q - e[j] as u32) % q;
            acc = (acc + c as u32 * shifted) % q;
        }
        (acc % q) as u8
    }

    fn coset_representative(&self, syndrome: &[u8]) -> Vec<u8> {
        let h = &self.check;
        let q = self.q;
        // Solve H e = s via the augmented system.
        let mut aug: Vec<Vec<u8>> = (0..h.rows)
            .map(|i| {
                let mut r = h.row(i).to_vec();
                r.push(syndrome[i]);
                r
            })
            .collect();
        let cols = h.cols;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            let Some(pr) = (r..aug.len()).find(|&i| aug[i][c] != 0) else {
                continue;
            };
            aug.swap(r, pr);
            let inv = mod_inv(aug[r][c] as u32, q);
            for v in aug[r].iter_mut() {
                *v = ((*v as u32 * inv) % q) as u8;
            }
            for i in 0..aug.len() {
                if i != r && aug[i][c] != 0 {
                    let f = aug[i][c] as u32;
                    for j in 0..=cols {
                        let sub = (f * aug[r][j] as u32) % q;
                        aug[i][j] = ((aug[i][j] as u32 + q - sub) % q) as u8;
                    }
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        let mut e = vec![0u8; cols];
        for &(pr, pc) in &pivots {
            e[pc] = aug[pr][cols];
        }
        e
    }
}

/// Checks closure under addition and scalar multiplication mod q.
pub fn check_linear(code: &Code) -> Result<(), LinearError> {
    let q = code.q();
    let n = code.n();
    let zero = vec![0u8; n];
    if !code.contains(&zero) {
        return Err(LinearError::NotLinear { op: "zero" });
    }
    for a in code.words() {
        for b in code.words() {
            let sum: Vec<u8> = a
                .iter()
                .zip(b)
                .map(|(&x, &y)| ((x as u32 + y as u32) % q) as u8)
                .collect();
            if !code.contains(&sum) {
                return Err(LinearError::NotLinear { op: "addition" });
            }
        }
    }
    Ok(())
}

/// Builds the syndrome index code of a linear storage code: the encoder maps
/// y to its coset label H y; round-trip identity holds on all of F_q^n when
/// the code is a valid storage code for G.
pub fn syndrome_index_code(g: &Graph, code: &Code) -> Result<LinearIndexCode, LinearError> {
    let q = code.q();
    if !is_prime(q) {
        return Err(LinearError::NotPrime(q));
    }
    check_linear(code)?;
    let n = code.n();
    // Generator matrix: basis of the codeword space.
    let mut gen = FieldMatrix::zero(q, code.len(), n);
    for (i, w) in code.words().iter().enumerate() {
        for (j, &v) in w.iter().enumerate() {
            gen.set(i, j, v);
        }
    }
    let k = gen.rank();
    // Parity-check matrix: basis of the dual space.
    let h_basis = gen.null_space_basis();
    debug_assert_eq!(h_basis.len(), n - k);
    let mut check = FieldMatrix::zero(q, n - k, n);
    for (i, row) in h_basis.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            check.set(i, j, v);
        }
    }
    // Per-vertex linear recovery coefficients: solve for alpha with
    // c_i = sum_{j in N(i)} alpha_j c_j over all codewords.
    let mut recovery = Vec::with_capacity(n);
    for i in 0..n {
        let nbrs: Vec<usize> = g.nbrs(i).iter().collect();
        // System: rows = codewords, unknowns = alpha over nbrs.
        let mut sys = FieldMatrix::zero(q, code.len(), nbrs.len() + 1);
        for (r, w) in code.words().iter().enumerate() {
            for (c, &j) in nbrs.iter().enumerate() {
                sys.set(r, c, w[j]);
            }
            sys.set(r, nbrs.len(), w[i]);
        }
        let alpha = solve_least_consistent(&sys, q).ok_or(LinearError::NoLinearRecovery)?;
        let coeffs: Vec<(usize, u8)> = nbrs
            .into_iter()
            .zip(alpha)
            .filter(|&(_, c)| c != 0)
            .collect();
        recovery.push(coeffs);
    }
    Ok(LinearIndexCode {
        q,
        n,
        check,
        recovery,
    })
}

/// Solves M[:, ..last] x = M[:, last] if consistent.
fn solve_least_consistent(sys: &FieldMatrix, q: u32) -> Option<Vec<u8>> {
    let vars = sys.cols - 1;
    let mut aug: Vec<Vec<u8>> = (0..sys.rows).map(|i| sys.row(i).to_vec()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for c in 0..vars {
        let Some(pr) = (r..aug.len()).find(|&i| aug[i][c] != 0) else {
            continue;
        };
        aug.swap(r, pr);
        let inv = mod_inv(aug[r][c] as u32, q);
        for v in aug[r].iter_mut() {
            *v = ((*v as u32 * inv) % q) as u8;
        }
        for i in 0..aug.len() {
            if i != r && aug[i][c] != 0 {
                let f = aug[i][c] as u32;
                for j in 0..sys.cols {
                    let sub = (f * aug[r][j] as u32) % q;
                    aug[i][j] = ((aug[i][j] as u32 + q - sub) % q) as u8;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    // Inconsistent if any zero row has nonzero rhs.
    for row in &aug {
        if row[..vars].iter().all(|&v| v == 0) && row[vars] != 0 {
            return None;
        }
    }
    let mut x = vec![0u8; vars];
    for &(pr, pc) in &pivots {
        x[pc] = aug[pr][vars];
    }
    Some(x)
}

/// Exhaustive round-trip check of a syndrome index code over the whole space.
pub fn syndrome_roundtrip_ok(idx: &LinearIndexCode, caps: &Caps) -> Result<bool, LinearError> {
    let space = Space::new(idx.q, idx.n, caps)?;
    for y_idx in 0..space.size {
        let y = space.word(y_idx);
        let s = idx.encode(&y);
        for i in 0..idx.n {
            if idx.decode(i, &s, &y) != y[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

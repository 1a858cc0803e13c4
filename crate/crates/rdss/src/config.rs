//! Resource caps for the exact solvers. All of them are overridable from the
//! CLI; defaults target desk-scale instances.

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Vertex-count gate for exhaustive subset searches.
    pub subset_threshold: usize,
    /// Maximum number of simple cycles the enumerator will emit.
    pub cycle_cap: usize,
    /// Maximum number of q-ary strings (q^n) for whole-space enumeration.
    pub state_cap: u64,
    /// Maximum number of candidate fitting matrices for the minrank search.
    pub minrank_cap: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            subset_threshold: 30,
            cycle_cap: 100_000,
            state_cap: 1 << 20,
            minrank_cap: 1 << 26,
        }
    }
}

impl Caps {
    /// q^n if it stays under the state cap.
    pub fn space_size(&self, q: u32, n: usize) -> Option<u64> {
        let mut size: u64 = 1;
        for _ in 0..n {
            size = size.checked_mul(q as u64)?;
            if size > self.state_cap {
                return None;
            }
        }
        Some(size)
    }
}

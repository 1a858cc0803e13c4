//! Exact rational linear programming via two-phase primal simplex with
//! Bland's rule. Small and deterministic; intended for fractional cycle
//! packing instances, not general-purpose scale.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use thiserror::Error;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("dimension mismatch: row has {got} coefficients, expected {want}")]
    BadRow { got: usize, want: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub cmp: Cmp,
    pub rhs: Rat,
}

/// Maximize objective . x subject to constraints and x >= 0.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: Rat,
    pub x: Vec<Rat>,
}

struct Tableau {
    // rows x cols, last column is rhs; last row is the objective.
    a: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = &*v / &inv;
        }
        for i in 0..self.a.len() {
            if i != r && !self.a[i][c].is_zero() {
                let f = self.a[i][c].clone();
                for j in 0..=self.cols {
                    let sub = &f * &self.a[r][j];
                    self.a[i][j] = &self.a[i][j] - sub;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs primal simplex to optimality with Bland's rule over the first
    /// `usable` columns. Returns Err on unboundedness.
    fn optimize(&mut self, usable: usize) -> Result<(), LpError> {
        let m = self.a.len() - 1;
        loop {
            let obj_row = self.a.len() - 1;
            // Bland: smallest-index column with positive reduced cost
            // (objective row stores negated costs, so look for negative).
            let Some(c) = (0..usable).find(|&j| self.a[obj_row][j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(Rat, usize)> = None;
            for i in 0..m {
                if self.a[i][c].is_positive() {
                    let ratio = &self.a[i][self.cols] / &self.a[i][c];
                    let better = match &best {
                        None => true,
                        // Bland ties: smallest basis index.
                        Some((r0, i0)) => {
                            ratio < *r0 || (ratio == *r0 && self.basis[i] < self.basis[*i0])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let Some((_, r)) = best else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, c);
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let nvars = lp.objective.len();
    for c in &lp.constraints {
        if c.coeffs.len() != nvars {
            return Err(LpError::BadRow {
                got: c.coeffs.len(),
                want: nvars,
            });
        }
    }
    let m = lp.constraints.len();
    // Normalize to rhs >= 0, slack per Le/Ge, artificial where needed.
    let mut rows: Vec<(Vec<Rat>, Cmp, Rat)> = lp
        .constraints
        .iter()
        .map(|c| (c.coeffs.clone(), c.cmp, c.rhs.clone()))
        .collect();
    for (coeffs, cmp, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for v in coeffs.iter_mut() {
                *v = -&*v;
            }
            *rhs = -&*rhs;
            *cmp = match *cmp {
                Cmp::Le => Cmp::Ge,
                Cmp::Ge => Cmp::Le,
                Cmp::Eq => Cmp::Eq,
            };
        }
    }
    let n_slack = rows
        .iter()
        .filter(|(_, cmp, _)| *cmp != Cmp::Eq)
        .count();
    let n_art = rows
        .iter()
        .filter(|(_, cmp, _)| *cmp != Cmp::Le)
        .count();
    let cols = nvars + n_slack + n_art;
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    let mut basis = Vec::with_capacity(m);
    let mut slack_at = nvars;
    let mut art_at = nvars + n_slack;
    let mut art_cols = Vec::new();
    for (coeffs, cmp, rhs) in &rows {
        let mut row = vec![Rat::zero(); cols + 1];
        row[..nvars].clone_from_slice(coeffs);
        row[cols] = rhs.clone();
        match cmp {
            Cmp::Le => {
                row[slack_at] = Rat::one();
                basis.push(slack_at);
                slack_at += 1;
            }
            Cmp::Ge => {
                row[slack_at] = -Rat::one();
                slack_at += 1;
                row[art_at] = Rat::one();
                basis.push(art_at);
                art_cols.push(art_at);
                art_at += 1;
            }
            Cmp::Eq => {
                row[art_at] = Rat::one();
                basis.push(art_at);
                art_cols.push(art_at);
                art_at += 1;
            }
        }
        a.push(row);
    }

    // Phase 1: minimize sum of artificials.
    let mut obj = vec![Rat::zero(); cols + 1];
    for &c in &art_cols {
        obj[c] = Rat::one();
    }
    a.push(obj);
    let mut t = Tableau { a, basis, cols };
    // Price out artificial basics.
    let obj_row = t.a.len() - 1;
    for i in 0..m {
        if art_cols.contains(&t.basis[i]) {
            for j in 0..=cols {
                let sub = t.a[i][j].clone();
                t.a[obj_row][j] = &t.a[obj_row][j] - sub;
            }
        }
    }
    if !art_cols.is_empty() {
        t.optimize(cols)?;
        if !t.a[obj_row][cols].is_zero() {
            return Err(LpError::Infeasible);
        }
        // Drive remaining artificials out of the basis.
        for i in 0..m {
            if art_cols.contains(&t.basis[i]) {
                if let Some(c) =
                    (0..nvars + n_slack).find(|&j| !t.a[i][j].is_zero())
                {
                    t.pivot(i, c);
                }
                // A fully zero row is redundant; its artificial stays basic
                // at zero, harmless once artificial columns are barred.
            }
        }
    }

    // Phase 2: install the real objective (negated costs in the row).
    for j in 0..=cols {
        t.a[obj_row][j] = Rat::zero();
    }
    for (j, c) in lp.objective.iter().enumerate() {
        t.a[obj_row][j] = -c.clone();
    }
    for i in 0..m {
        let b = t.basis[i];
        if !t.a[obj_row][b].is_zero() {
            let f = t.a[obj_row][b].clone();
            for j in 0..=cols {
                let sub = &f * &t.a[i][j];
                t.a[obj_row][j] = &t.a[obj_row][j] - sub;
            }
        }
    }
    t.optimize(nvars + n_slack)?;

    let mut x = vec![Rat::zero(); nvars];
    for i in 0..m {
        if t.basis[i] < nvars {
            x[t.basis[i]] = t.a[i][cols].clone();
        }
    }
    let obj_row = t.a.len() - 1;
    Ok(LpSolution {
        value: t.a[obj_row][cols].clone(),
        x,
    })
}

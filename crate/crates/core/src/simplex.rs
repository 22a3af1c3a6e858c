//! Exact phase-one simplex for feasibility of `A x = b, x >= 0`.
//!
//! One artificial variable is added per row and their sum is minimized with
//! a dense rational tableau. Pivoting follows Bland's rule (lowest-index
//! entering column, lowest-index leaving basic variable among ratio ties),
//! which cannot cycle, so the routine always terminates.
//!
//! On infeasibility the optimal phase-one dual `y` is returned. It satisfies
//! `y . A_j <= 0` for every column `j` and `y . b > 0`, a Farkas certificate
//! for the original system.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseOne {
    Feasible {
        /// A basic feasible solution; at most `rows` entries are nonzero.
        solution: Vec<Rational>,
    },
    Infeasible {
        dual: Vec<Rational>,
        /// Optimal sum of artificials, equal to `dual . b`.
        residual: Rational,
    },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
    cost_rhs: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[row] *= &inv;

        let pivot_row = std::mem::take(&mut self.rows[row]);
        let pivot_rhs = self.rhs[row].clone();
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();

        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for &j in &support {
                r[j] -= &factor * &pivot_row[j];
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for &j in &support {
                self.cost[j] -= &factor * &pivot_row[j];
            }
            self.cost_rhs -= &factor * &pivot_rhs;
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// Bland: first column with negative reduced cost.
    fn entering(&self) -> Option<usize> {
        self.cost.iter().position(|c| c.is_negative())
    }

    /// Minimum ratio, ties to the lowest basic variable index. Phase one is
    /// bounded below by zero, so a positive pivot entry always exists.
    fn leaving(&self, col: usize) -> usize {
        let mut best: Option<(Rational, usize, usize)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            if !r[col].is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / &r[col];
            let better = match &best {
                None => true,
                Some((br, bvar, _)) => ratio < *br || (ratio == *br && self.basis[i] < *bvar),
            };
            if better {
                best = Some((ratio, self.basis[i], i));
            }
        }
        best.expect("phase-one objective is bounded").2
    }
}

/// Decides feasibility of `a x = b, x >= 0`. `a` is row-major with equal row
/// lengths; `b` may have any sign.
pub fn phase_one(a: &[Vec<Rational>], b: &[Rational]) -> PhaseOne {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == n), "ragged constraint matrix");

    // Rows with negative right-hand side are negated so the artificial basis
    // starts feasible; the dual is flipped back at the end.
    let signs: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rational> = if signs[i] {
            a[i].iter().map(|v| -v).collect()
        } else {
            a[i].clone()
        };
        row.extend((0..m).map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        rows.push(row);
        rhs.push(if signs[i] { -&b[i] } else { b[i].clone() });
    }

    // Reduced costs with the artificial basis: c_j - 1^T A_j.
    let mut cost = vec![Rational::zero(); n + m];
    for row in &rows {
        for (c, v) in cost[..n].iter_mut().zip(row) {
            if !v.is_zero() {
                *c -= v;
            }
        }
    }
    let cost_rhs = -rhs.iter().sum::<Rational>();

    let mut t = Tableau {
        rows,
        rhs,
        cost,
        cost_rhs,
        basis: (n..n + m).collect(),
    };
    while let Some(col) = t.entering() {
        let row = t.leaving(col);
        t.pivot(row, col);
    }

    let residual = -t.cost_rhs.clone();
    if residual.is_zero() {
        let mut solution = vec![Rational::zero(); n];
        for (i, &var) in t.basis.iter().enumerate() {
            if var < n {
                solution[var] = t.rhs[i].clone();
            }
        }
        PhaseOne::Feasible { solution }
    } else {
        // Reduced cost of artificial i is 1 - y_i.
        let dual = (0..m)
            .map(|i| {
                let y = Rational::one() - &t.cost[n + i];
                if signs[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        PhaseOne::Infeasible { dual, residual }
    }
}

//! Exact two-phase simplex over rationals.
//!
//! Solves `min/max c·x` subject to `Ax = b, x ≥ 0` with Bland's pivoting
//! rule, so the method terminates on every input and infeasibility and
//! unboundedness are detected exactly. Problem sizes in this crate are tiny
//! (a few dozen variables), so a dense tableau is the right tool.

use crate::rational::Rational;
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

/// Solves an equality-form LP. `rows` and `rhs` describe `Ax = b`; every
/// variable is constrained non-negative.
pub fn solve_equality_form(
    objective: &[Rational],
    sense: LpSense,
    rows: &[Vec<Rational>],
    rhs: &[Rational],
) -> LpOutcome {
    assert_eq!(rows.len(), rhs.len());
    for row in rows {
        assert_eq!(row.len(), objective.len());
    }
    let n = objective.len();

    // Internally minimize; flip the objective for maximization.
    let min_costs: Vec<Rational> = match sense {
        LpSense::Minimize => objective.to_vec(),
        LpSense::Maximize => objective.iter().map(|c| -c).collect(),
    };

    let mut tableau = Tableau::phase_one(rows, rhs, n);
    tableau.run();
    if !tableau.objective_value().is_zero() {
        return LpOutcome::Infeasible;
    }
    if !tableau.enter_phase_two(&min_costs) {
        return LpOutcome::Infeasible; // cannot happen; defensive
    }
    if !tableau.run() {
        return LpOutcome::Unbounded;
    }
    let value = match sense {
        LpSense::Minimize => tableau.objective_value(),
        LpSense::Maximize => -tableau.objective_value(),
    };
    LpOutcome::Optimal {
        value,
        solution: tableau.solution(n),
    }
}

struct Tableau {
    /// `body[i]` is constraint row i over all current columns; `rhs[i]` ≥ 0.
    body: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced-cost row and the negated objective value.
    cost: Vec<Rational>,
    cost_rhs: Rational,
    /// Basic variable (column index) of each row.
    basis: Vec<usize>,
    /// Columns `>= n_real` are phase-one artificials.
    n_real: usize,
}

impl Tableau {
    fn phase_one(rows: &[Vec<Rational>], rhs: &[Rational], n: usize) -> Self {
        let m = rows.len();
        let mut body = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        for (row, r) in rows.iter().zip(rhs) {
            // Normalize to a non-negative right-hand side.
            if r < &Rational::zero() {
                body.push(row.iter().map(|v| -v).collect::<Vec<_>>());
                b.push(-r);
            } else {
                body.push(row.clone());
                b.push(r.clone());
            }
        }
        // One artificial per row forms the starting basis.
        let mut basis = Vec::with_capacity(m);
        for (i, row) in body.iter_mut().enumerate() {
            for j in 0..m {
                row.push(if i == j {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                });
            }
            basis.push(n + i);
        }
        // Phase-one costs: 1 on artificials, reduced against the basis.
        let mut cost = vec![Rational::zero(); n + m];
        for c in cost.iter_mut().skip(n) {
            *c = Rational::from_integer(1.into());
        }
        let mut t = Self {
            body,
            rhs: b,
            cost,
            cost_rhs: Rational::zero(),
            basis,
            n_real: n,
        };
        t.reduce_cost_row();
        t
    }

    /// Subtracts basic rows out of the cost row so basic columns read zero.
    fn reduce_cost_row(&mut self) {
        for i in 0..self.basis.len() {
            let factor = self.cost[self.basis[i]].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..self.cost.len() {
                let v = &self.cost[j] - &factor * &self.body[i][j];
                self.cost[j] = v;
            }
            self.cost_rhs = &self.cost_rhs - &factor * &self.rhs[i];
        }
    }

    fn objective_value(&self) -> Rational {
        -self.cost_rhs.clone()
    }

    /// Drops artificial columns and installs the phase-two costs. Artificials
    /// still basic (at value zero) are pivoted out or their redundant rows
    /// removed. Returns false only if a basic artificial had nonzero value.
    fn enter_phase_two(&mut self, costs: &[Rational]) -> bool {
        let n = self.n_real;
        let mut row = 0;
        while row < self.basis.len() {
            if self.basis[row] < n {
                row += 1;
                continue;
            }
            if !self.rhs[row].is_zero() {
                return false;
            }
            match (0..n).find(|&j| !self.body[row][j].is_zero()) {
                Some(j) => {
                    self.pivot(row, j);
                    row += 1;
                }
                None => {
                    // Redundant constraint.
                    self.body.remove(row);
                    self.rhs.remove(row);
                    self.basis.remove(row);
                }
            }
        }
        for r in &mut self.body {
            r.truncate(n);
        }
        self.cost = costs.to_vec();
        self.cost_rhs = Rational::zero();
        self.reduce_cost_row();
        true
    }

    /// Runs simplex iterations under Bland's rule until optimal (true) or
    /// unbounded (false).
    fn run(&mut self) -> bool {
        loop {
            // Entering: the lowest-index column with a negative reduced cost.
            let Some(entering) = (0..self.cost.len()).find(|&j| self.cost[j] < Rational::zero())
            else {
                return true;
            };
            // Leaving: the minimum-ratio row, ties broken by the lowest basic
            // variable index.
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.body.len() {
                let coeff = &self.body[i][entering];
                if coeff <= &Rational::zero() {
                    continue;
                }
                let ratio = &self.rhs[i] / coeff;
                let better = match &leaving {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((leave_row, _)) = leaving else {
                return false;
            };
            self.pivot(leave_row, entering);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.body[row][col].clone().recip();
        for v in &mut self.body[row] {
            *v = &*v * &inv;
        }
        self.rhs[row] = &self.rhs[row] * &inv;
        for i in 0..self.body.len() {
            if i == row {
                continue;
            }
            let factor = self.body[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..self.body[i].len() {
                let v = &self.body[i][j] - &factor * &self.body[row][j];
                self.body[i][j] = v;
            }
            self.rhs[i] = &self.rhs[i] - &factor * &self.rhs[row];
        }
        let factor = self.cost[col].clone();
        if !factor.is_zero() {
            for j in 0..self.cost.len() {
                let v = &self.cost[j] - &factor * &self.body[row][j];
                self.cost[j] = v;
            }
            self.cost_rhs = &self.cost_rhs - &factor * &self.rhs[row];
        }
        self.basis[row] = col;
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems here are tiny (a handful of variables, at most a few hundred
//! rows), so a dense tableau is fine. Every variable is nonnegative.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// `optimize objective·x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    sense: Sense,
    objective: Vec<Q>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Q>) -> Self {
        LinearProgram {
            num_vars: objective.len(),
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    /// Pure feasibility problem in `num_vars` variables.
    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(Sense::Minimize, vec![Q::zero(); num_vars])
    }

    pub fn constrain(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    // rows[i] = [a_i0 … a_i(cols-1) | rhs]
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    cols: usize,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let mut slack_count = 0;
        let mut art_count = 0;
        let normalized: Vec<(Vec<Q>, Relation, Q)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), flipped, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        for (_, rel, _) in &normalized {
            match rel {
                Relation::Le => slack_count += 1,
                Relation::Ge => {
                    slack_count += 1;
                    art_count += 1
                }
                Relation::Eq => art_count += 1,
            }
        }
        let first_artificial = n + slack_count;
        let cols = first_artificial + art_count;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (n, first_artificial);
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![Q::zero(); cols + 1];
            row[..n].clone_from_slice(&coeffs);
            row[cols] = rhs;
            match rel {
                Relation::Le => {
                    row[slack] = Q::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Q::one();
                    slack += 1;
                    row[art] = Q::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Q::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            cols,
            first_artificial,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = Q::one() / &self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes `cost` over columns `< allowed`; returns false when unbounded.
    fn minimize(&mut self, cost: &[Q], allowed: usize) -> bool {
        loop {
            // Reduced costs r_j = c_j - c_B · column_j.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !row[j].is_zero() && !cost[b].is_zero() {
                        r -= &cost[b] * &row[j];
                    }
                }
                r.is_negative()
            });
            let Some(col) = entering else { return true };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[self.cols] / &row[col];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn objective_value(&self, cost: &[Q]) -> Q {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(Q::zero(), |acc, (row, &b)| acc + &cost[b] * &row[self.cols])
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        if self.first_artificial < self.cols {
            let mut phase1 = vec![Q::zero(); self.cols];
            for c in phase1[self.first_artificial..].iter_mut() {
                *c = Q::one();
            }
            self.minimize(&phase1, self.cols);
            if self.objective_value(&phase1).is_positive() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-level artificials out of the basis, dropping redundant rows.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => self.pivot(i, j),
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![Q::zero(); self.cols];
        for (c, o) in cost.iter_mut().zip(&lp.objective) {
            *c = match lp.sense {
                Sense::Minimize => o.clone(),
                Sense::Maximize => -o.clone(),
            };
        }
        if !self.minimize(&cost, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut point = vec![Q::zero(); lp.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < lp.num_vars {
                point[b] = row[self.cols].clone();
            }
        }
        let value = lp
            .objective
            .iter()
            .zip(&point)
            .fold(Q::zero(), |acc, (c, x)| acc + c * x);
        LpOutcome::Optimal { value, point }
    }
}

//! Two-phase dense simplex over exact rationals.
//!
//! Pivoting follows Bland's rule (lowest eligible index for both the entering
//! and the leaving variable), which rules out cycling on degenerate problems.

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct Constraint {
    coeffs: Vec<Rational>,
    relation: Relation,
    rhs: Rational,
}

/// `maximize c·x` subject to linear constraints. Variables are nonnegative
/// unless declared free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Vec<Rational>, Rational)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::zero(); num_vars],
            free: vec![false; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn maximize(&mut self, c: Vec<Rational>) -> &mut Self {
        assert_eq!(c.len(), self.num_vars());
        self.objective = c;
        self
    }

    pub fn minimize(&mut self, c: Vec<Rational>) -> &mut Self {
        self.maximize(c.into_iter().map(|v| -v).collect())
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    /// Solves the program. `value` is reported for the objective as given to
    /// `maximize` (for `minimize` it is the negated minimum).
    pub fn solve(&self) -> LpOutcome {
        // Column layout: one column per nonnegative original variable, two for
        // each free variable (x = x+ - x-).
        let mut col_of = Vec::with_capacity(self.num_vars());
        let mut ncols = 0;
        for &f in &self.free {
            col_of.push(ncols);
            ncols += if f { 2 } else { 1 };
        }
        let expand = |coeffs: &[Rational]| {
            let mut row = vec![Rational::zero(); ncols];
            for (v, c) in coeffs.iter().enumerate() {
                row[col_of[v]] = c.clone();
                if self.free[v] {
                    row[col_of[v] + 1] = -c;
                }
            }
            row
        };
        let structural = ncols;
        let objective = expand(&self.objective);

        let m = self.constraints.len();
        let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = self
            .constraints
            .iter()
            .map(|c| {
                let mut row = expand(&c.coeffs);
                let mut rel = c.relation;
                let mut rhs = c.rhs.clone();
                if rhs.is_negative() {
                    row.iter_mut().for_each(|v| *v = -&*v);
                    rhs = -rhs;
                    rel = match rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                }
                (row, rel, rhs)
            })
            .collect();

        let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let slack_start = structural;
        let art_start = structural + slack_count;
        let width = art_start + art_count;

        let mut tableau = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (slack_start, art_start);
        for (coeffs, rel, rhs) in rows.drain(..) {
            let mut row = coeffs;
            row.resize(width + 1, Rational::zero());
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = Rational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            tableau.push(row);
        }
        let mut t = Tableau {
            rows: tableau,
            basis,
            width,
        };

        if art_count > 0 {
            let mut phase1 = vec![Rational::zero(); width];
            for c in phase1.iter_mut().skip(art_start) {
                *c = -Rational::one();
            }
            let status = t.optimize(&phase1, width);
            debug_assert!(status, "phase one is bounded");
            if t.objective_value(&phase1).is_negative() {
                return LpOutcome::Infeasible;
            }
            t.drive_out_artificials(art_start);
        }

        let mut phase2 = objective;
        phase2.resize(width, Rational::zero());
        if !t.optimize(&phase2, art_start) {
            return LpOutcome::Unbounded;
        }

        let mut values = vec![Rational::zero(); width];
        for (r, &b) in t.basis.iter().enumerate() {
            values[b] = t.rows[r][width].clone();
        }
        let x: Vec<Rational> = (0..self.num_vars())
            .map(|v| {
                let c = col_of[v];
                if self.free[v] {
                    &values[c] - &values[c + 1]
                } else {
                    values[c].clone()
                }
            })
            .collect();
        let value = x
            .iter()
            .zip(&self.objective)
            .map(|(a, b)| a * b)
            .sum();
        LpOutcome::Optimal { x, value }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn objective_value(&self, c: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .map(|(r, &b)| &c[b] * &self.rows[r][self.width])
            .sum()
    }

    fn reduced_cost(&self, c: &[Rational], col: usize) -> Rational {
        let mut z = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if !c[b].is_zero() && !self.rows[r][col].is_zero() {
                z += &c[b] * &self.rows[r][col];
            }
        }
        &c[col] - &z
    }

    /// Maximizes `c` using columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, c: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(c, j).is_positive());
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][self.width] / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio || (ratio == lratio && self.basis[r] < self.basis[lr]) {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip().expect("pivot is nonzero");
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (r, target) in self.rows.iter_mut().enumerate() {
            if r == row || target[col].is_zero() {
                continue;
            }
            let f = target[col].clone();
            for (t, p) in target.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *t -= &(&f * p);
                }
            }
        }
        self.basis[row] = col;
    }

    /// After a feasible phase one, replaces zero-valued artificial basics by
    /// structural or slack columns, dropping rows that are redundant.
    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < art_start {
                r += 1;
                continue;
            }
            match (0..art_start).find(|&j| !self.rows[r][j].is_zero()) {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![q!(3), q!(5)])
            .constrain(vec![q!(1), q!(0)], Relation::Le, q!(4))
            .constrain(vec![q!(0), q!(2)], Relation::Le, q!(12))
            .constrain(vec![q!(3), q!(2)], Relation::Le, q!(18));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                x: vec![q!(2), q!(6)],
                value: q!(36)
            }
        );
    }

    #[test]
    fn equality_and_ge_constraints() {
        // min x + y, x + 2y = 3, x >= 1/2 -> x = 1/2, y = 5/4
        let mut lp = LinearProgram::new(2);
        lp.minimize(vec![q!(1), q!(1)])
            .constrain(vec![q!(1), q!(2)], Relation::Eq, q!(3))
            .constrain(vec![q!(1), q!(0)], Relation::Ge, q!(1 / 2));
        let (x, v) = lp.solve().optimal().unwrap();
        assert_eq!(x, vec![q!(1 / 2), q!(5 / 4)]);
        assert_eq!(v, q!(-7 / 4));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![q!(1)], Relation::Ge, q!(2))
            .constrain(vec![q!(1)], Relation::Le, q!(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![q!(1)]).constrain(vec![q!(1)], Relation::Ge, q!(0));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variable_goes_negative() {
        // max v with v <= -3 (v free)
        let mut lp = LinearProgram::new(1);
        lp.set_free(0)
            .maximize(vec![q!(1)])
            .constrain(vec![q!(1)], Relation::Le, q!(-3));
        assert_eq!(lp.solve().optimal().unwrap().1, q!(-3));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![q!(1), q!(0)])
            .constrain(vec![q!(1), q!(1)], Relation::Eq, q!(1))
            .constrain(vec![q!(2), q!(2)], Relation::Eq, q!(2));
        assert_eq!(lp.solve().optimal().unwrap().0, vec![q!(1), q!(0)]);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's classic cycling example (max form).
        let mut lp = LinearProgram::new(4);
        lp.maximize(vec![q!(3 / 4), q!(-150), q!(1 / 50), q!(-6)])
            .constrain(vec![q!(1 / 4), q!(-60), q!(-1 / 25), q!(9)], Relation::Le, q!(0))
            .constrain(vec![q!(1 / 2), q!(-90), q!(-1 / 50), q!(3)], Relation::Le, q!(0))
            .constrain(vec![q!(0), q!(0), q!(1), q!(0)], Relation::Le, q!(1));
        assert_eq!(lp.solve().optimal().unwrap().1, q!(1 / 20));
    }
}

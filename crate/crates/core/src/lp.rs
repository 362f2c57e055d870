//! Dense two-phase simplex over an ordered field.
//!
//! Solves `maximize c·x subject to A x <= b` with free variables. Free
//! variables are split into nonnegative pairs, slacks are added per row,
//! and rows with negative right-hand sides get phase-1 artificials.
//! Bland's rule is used throughout, so the method terminates even on the
//! highly degenerate systems the cell enumeration produces (many zero
//! right-hand sides). In exact mode every comparison is a decision; in
//! float mode a pivot tolerance guards against noise pivots.

use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("numerical breakdown in LP (non-finite tableau entry)")]
    NumericalBreakdown,
    #[error("LP iteration limit exceeded")]
    IterationLimit,
    #[error("constraint row has wrong arity: expected {expected}, got {got}")]
    BadRow { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { value: S, point: Vec<S> },
    Unbounded,
    Infeasible,
}

struct Tableau<S> {
    rows: Vec<Vec<S>>, // m x (ncols + 1), last entry is rhs
    obj: Vec<S>,       // reduced costs, length ncols
    obj_value: S,      // current objective value
    basis: Vec<usize>, // basic column per row
    ncols: usize,
    tol: S,
    iterations: usize,
}

impl<S: Scalar> Tableau<S> {
    fn check_finite(&self) -> Result<(), LpError> {
        if S::EXACT {
            return Ok(());
        }
        for row in &self.rows {
            for v in row {
                if !v.to_f64().is_finite() {
                    return Err(LpError::NumericalBreakdown);
                }
            }
        }
        Ok(())
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.div(&p);
        }
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..=self.ncols {
                let delta = factor.mul(&self.rows[row][c]);
                self.rows[r][c] = self.rows[r][c].sub(&delta);
            }
        }
        let factor = self.obj[col].clone();
        if !factor.is_zero() {
            for c in 0..self.ncols {
                let delta = factor.mul(&self.rows[row][c]);
                self.obj[c] = self.obj[c].sub(&delta);
            }
            let gain = factor.mul(&self.rows[row][self.ncols]);
            self.obj_value = self.obj_value.add(&gain);
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations until optimal or unbounded.
    /// `allowed` filters which columns may enter the basis.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<bool, LpError> {
        let limit = 2000 + 200 * (self.rows.len() + self.ncols);
        loop {
            self.iterations += 1;
            if self.iterations > limit {
                return Err(LpError::IterationLimit);
            }
            self.check_finite()?;
            // Bland: smallest improving column index.
            let mut entering = None;
            for j in 0..self.ncols {
                if allowed(j) && self.obj[j] > self.tol {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(true); // optimal
            };
            // Ratio test; Bland tie-break on smallest basis column.
            let mut leave: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col].clone();
                if a <= self.tol {
                    continue;
                }
                let ratio = self.rows[i][self.ncols].div(&a);
                let better = match &leave {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Ok(false); // unbounded
            };
            self.pivot(row, col);
        }
    }
}

/// Maximizes `objective · x` over `{x : row · x <= rhs for each row}` with
/// `x` unconstrained in sign. Returns the optimum and a maximizer.
pub fn maximize<S: Scalar>(
    objective: &[S],
    rows: &[(Vec<S>, S)],
) -> Result<LpOutcome<S>, LpError> {
    let d = objective.len();
    for (row, _) in rows {
        if row.len() != d {
            return Err(LpError::BadRow {
                expected: d,
                got: row.len(),
            });
        }
    }
    let m = rows.len();
    // Columns: 2d split variables, m slacks, then artificials as needed.
    let mut art_of_row: Vec<Option<usize>> = vec![None; m];
    let mut n_art = 0;
    for (i, (_, rhs)) in rows.iter().enumerate() {
        if *rhs < S::zero() {
            art_of_row[i] = Some(n_art);
            n_art += 1;
        }
    }
    let ncols = 2 * d + m + n_art;
    let art_start = 2 * d + m;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        obj: vec![S::zero(); ncols],
        obj_value: S::zero(),
        basis: vec![0; m],
        ncols,
        tol: S::pivot_tol(),
        iterations: 0,
    };

    for (i, (row, rhs)) in rows.iter().enumerate() {
        let mut t = vec![S::zero(); ncols + 1];
        let negate = art_of_row[i].is_some();
        for j in 0..d {
            let v = if negate { row[j].neg() } else { row[j].clone() };
            t[2 * j] = v.clone();
            t[2 * j + 1] = v.neg();
        }
        t[2 * d + i] = if negate { S::one().neg() } else { S::one() };
        if let Some(a) = art_of_row[i] {
            t[art_start + a] = S::one();
            tab.basis[i] = art_start + a;
        } else {
            tab.basis[i] = 2 * d + i;
        }
        t[ncols] = if negate { rhs.neg() } else { rhs.clone() };
        tab.rows.push(t);
    }

    // Phase 1: maximize -sum(artificials). Reduced costs for the starting
    // basis reduce to summing the artificial rows into the objective.
    if n_art > 0 {
        for j in 0..ncols {
            let mut r = if j >= art_start {
                S::one().neg()
            } else {
                S::zero()
            };
            for i in 0..m {
                if art_of_row[i].is_some() {
                    r = r.add(&tab.rows[i][j]);
                }
            }
            tab.obj[j] = r;
        }
        tab.obj_value = S::zero();
        for i in 0..m {
            if art_of_row[i].is_some() {
                tab.obj_value = tab.obj_value.sub(&tab.rows[i][ncols]);
            }
        }
        tab.run(&|_| true)?;
        let feas_tol = if S::EXACT {
            S::zero()
        } else {
            S::pivot_tol().mul(&S::from_i64(100))
        };
        if tab.obj_value < feas_tol.neg() {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot remaining artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_start {
                let mut pivot_col = None;
                for j in 0..art_start {
                    if tab.rows[i][j].abs() > tab.tol {
                        pivot_col = Some(j);
                        break;
                    }
                }
                match pivot_col {
                    Some(j) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase 2 with the real objective; artificial columns are barred.
    for j in 0..ncols {
        tab.obj[j] = if j < 2 * d {
            let c = &objective[j / 2];
            if j % 2 == 0 {
                c.clone()
            } else {
                c.neg()
            }
        } else {
            S::zero()
        };
    }
    tab.obj_value = S::zero();
    // Subtract c_B * (basis rows) to restore zero reduced costs on the basis.
    for i in 0..tab.rows.len() {
        let b = tab.basis[i];
        let cb = tab.obj[b].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..ncols {
            let delta = cb.mul(&tab.rows[i][j]);
            tab.obj[j] = tab.obj[j].sub(&delta);
        }
        let gain = cb.mul(&tab.rows[i][ncols]);
        tab.obj_value = tab.obj_value.add(&gain);
    }
    let optimal = tab.run(&|j| j < art_start)?;
    if !optimal {
        return Ok(LpOutcome::Unbounded);
    }

    let mut split = vec![S::zero(); 2 * d];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < 2 * d {
            split[b] = tab.rows[i][ncols].clone();
        }
    }
    let point = (0..d)
        .map(|j| split[2 * j].sub(&split[2 * j + 1]))
        .collect();
    Ok(LpOutcome::Optimal {
        value: tab.obj_value.clone(),
        point,
    })
}

/// Phase-1 feasibility of `{x : row · x <= rhs}` with free `x`.
pub fn feasible<S: Scalar>(rows: &[(Vec<S>, S)]) -> Result<bool, LpError> {
    let d = rows.first().map_or(0, |(r, _)| r.len());
    let objective = vec![S::zero(); d];
    Ok(!matches!(maximize(&objective, rows)?, LpOutcome::Infeasible))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn simple_box_maximum() {
        // max x + y s.t. x <= 2, y <= 3, -x <= 0, -y <= 0
        let rows = vec![
            (vec![1.0, 0.0], 2.0),
            (vec![0.0, 1.0], 3.0),
            (vec![-1.0, 0.0], 0.0),
            (vec![0.0, -1.0], 0.0),
        ];
        match maximize(&[1.0, 1.0], &rows).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert!((value - 5.0).abs() < 1e-9);
                assert!((point[0] - 2.0).abs() < 1e-9);
                assert!((point[1] - 3.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_direction_detected() {
        // max x s.t. -x <= 1
        let rows = vec![(vec![-1.0], 1.0)];
        assert!(matches!(
            maximize(&[1.0], &rows).unwrap(),
            LpOutcome::Unbounded
        ));
    }

    #[test]
    fn infeasible_detected() {
        // x <= -1 and -x <= -1 means x <= -1 and x >= 1.
        let rows = vec![(vec![1.0], -1.0), (vec![-1.0], -1.0)];
        assert!(matches!(
            maximize(&[1.0], &rows).unwrap(),
            LpOutcome::Infeasible
        ));
        assert!(!feasible(&rows).unwrap());
    }

    #[test]
    fn negative_rhs_feasible_case() {
        // max -x s.t. -x <= -3  (x >= 3), x <= 10
        let rows = vec![(vec![-1.0], -3.0), (vec![1.0], 10.0)];
        match maximize(&[-1.0], &rows).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert!((value + 3.0).abs() < 1e-9);
                assert!((point[0] - 3.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn exact_rational_margin() {
        // max d s.t. z + d <= 1/2, -z + d <= 1/2, d <= 1: optimum 1/2 at z = 0.
        let rows = vec![
            (vec![q(1, 1), q(1, 1)], q(1, 2)),
            (vec![q(-1, 1), q(1, 1)], q(1, 2)),
            (vec![q(0, 1), q(1, 1)], q(1, 1)),
        ];
        match maximize(&[q(0, 1), q(1, 1)], &rows).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, q(1, 2));
                assert_eq!(point[0], q(0, 1));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_equality_like_rows_terminate() {
        // z <= 0 and -z <= 0 pins z = 0; Bland's rule must not cycle.
        let rows = vec![
            (vec![q(1, 1), q(1, 1)], q(0, 1)),
            (vec![q(-1, 1), q(1, 1)], q(0, 1)),
            (vec![q(0, 1), q(1, 1)], q(1, 1)),
        ];
        match maximize(&[q(0, 1), q(1, 1)], &rows).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(0, 1)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}

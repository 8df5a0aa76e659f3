//! Exact phase-1 simplex for `{x >= 0 : A x = b}` with Bland's rule.
//!
//! On infeasibility the optimal phase-1 duals give a vector `y` with
//! `Aᵀy >= 0` and `⟨b, y⟩ < 0`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Hard cap on pivots; Bland's rule never gets near it at these sizes.
pub const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub result: Feasibility,
    pub pivots: usize,
}

/// `columns[j]` is column `j` of `A`, of length `rhs.len()`.
pub fn solve_nonnegative(columns: &[Vec<Rational>], rhs: &[Rational]) -> Result<SolveOutcome> {
    let m = rhs.len();
    let k = columns.len();
    if let Some(bad) = columns.iter().position(|c| c.len() != m) {
        return Err(Error::InvalidInput(format!(
            "column {bad} has length {} but there are {m} rows",
            columns[bad].len()
        )));
    }
    let width = k + m;

    // Rows with negative right-hand side are negated so the artificial basis is feasible.
    let signs: Vec<bool> = rhs.iter().map(|b| b.is_negative()).collect();
    let mut table: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width + 1);
            for col in columns {
                row.push(if signs[i] { -&col[i] } else { col[i].clone() });
            }
            for a in 0..m {
                row.push(if a == i {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
            row.push(rhs[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..width).collect();

    // Reduced costs for minimizing the sum of artificials; last slot is -objective.
    let mut cost = vec![Rational::zero(); width + 1];
    for row in &table {
        for j in 0..k {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }

    let mut pivots = 0;
    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let a = &table[i][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &table[i][width] / a;
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::Verification(
                "phase-1 objective unbounded, which cannot happen".into(),
            ));
        };
        pivot(&mut table, &mut cost, row, enter);
        basis[row] = enter;
        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::Verification(format!(
                "simplex exceeded {MAX_PIVOTS} pivots"
            )));
        }
    }

    if cost[width].is_zero() {
        let mut x = vec![Rational::zero(); k];
        for (i, &b) in basis.iter().enumerate() {
            if b < k {
                x[b] = table[i][width].clone();
            }
        }
        return Ok(SolveOutcome {
            result: Feasibility::Feasible(x),
            pivots,
        });
    }

    // Dual prices of the (sign-adjusted) rows: π_i = 1 - reduced cost of artificial i.
    let y = (0..m)
        .map(|i| {
            let pi = Rational::one() - &cost[k + i];
            if signs[i] {
                pi
            } else {
                -pi
            }
        })
        .collect();
    Ok(SolveOutcome {
        result: Feasibility::Infeasible(y),
        pivots,
    })
}

fn pivot(table: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let inv = Rational::one() / &table[row][col];
    for v in table[row].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let pivot_row = table[row].clone();
    let nonzero: Vec<usize> = (0..pivot_row.len())
        .filter(|&j| !pivot_row[j].is_zero())
        .collect();
    for (i, r) in table.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for &j in &nonzero {
            r[j] -= &factor * &pivot_row[j];
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for &j in &nonzero {
            cost[j] -= &factor * &pivot_row[j];
        }
    }
}

//! Exact rational feasibility test for equality-constrained LPs.
//!
//! Phase-1 simplex over `BigRational` with Bland's rule, so termination is
//! guaranteed and verdicts are exact: there is no tolerance anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn ratio(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Finds some x >= 0 with `A x = b`, or None when no such x exists.
///
/// `a` is row-major, `b` one entry per row. Rows with negative right-hand
/// side are negated first so the artificial start is feasible.
pub fn solve_equality_feasibility(
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(b.len(), m, "one rhs entry per constraint row");
    if m == 0 {
        return Some(Vec::new());
    }
    let k = a[0].len();
    for row in a {
        assert_eq!(row.len(), k, "ragged constraint matrix");
    }

    // Tableau columns: k structural vars, m artificials, then the rhs.
    let cols = k + m + 1;
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<BigRational> = Vec::with_capacity(cols);
        for j in 0..k {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j { ratio(1) } else { ratio(0) });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        tableau.push(row);
    }
    let mut basis: Vec<usize> = (k..k + m).collect();

    // Reduced costs for minimizing the sum of artificials: r = c - 1ᵀ A,
    // where the artificial block starts as the identity.
    let mut reduced: Vec<BigRational> = vec![ratio(0); cols];
    for j in 0..cols {
        let mut column_sum = BigRational::zero();
        for row in &tableau {
            column_sum += &row[j];
        }
        let cost = if (k..k + m).contains(&j) {
            ratio(1)
        } else {
            ratio(0)
        };
        reduced[j] = cost - column_sum;
    }
    // reduced[cols-1] now holds -(objective value).

    loop {
        // Bland: entering = lowest-index column with negative reduced cost.
        let Some(entering) = (0..cols - 1).find(|&j| reduced[j].is_negative()) else {
            break;
        };
        // Ratio test; ties resolved by the lowest basic variable index.
        let mut leaving: Option<(usize, BigRational)> = None;
        for i in 0..m {
            let coeff = &tableau[i][entering];
            if !coeff.is_positive() {
                continue;
            }
            let bound = &tableau[i][cols - 1] / coeff;
            let better = match &leaving {
                None => true,
                Some((row, best)) => {
                    bound < *best || (bound == *best && basis[i] < basis[*row])
                }
            };
            if better {
                leaving = Some((i, bound));
            }
        }
        let (pivot_row, _) = leaving.expect("phase-1 objective is bounded below");

        // Pivot.
        let pivot = tableau[pivot_row][entering].clone();
        for value in tableau[pivot_row].iter_mut() {
            *value /= &pivot;
        }
        let pivot_values = tableau[pivot_row].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i == pivot_row {
                continue;
            }
            let factor = row[entering].clone();
            if factor.is_zero() {
                continue;
            }
            for (value, pivot_value) in row.iter_mut().zip(&pivot_values) {
                *value -= &factor * pivot_value;
            }
        }
        let factor = reduced[entering].clone();
        for (value, pivot_value) in reduced.iter_mut().zip(&pivot_values) {
            *value -= &factor * pivot_value;
        }
        basis[pivot_row] = entering;
    }

    // Objective value = -reduced[rhs]; zero means the artificials left.
    let objective = -reduced[cols - 1].clone();
    if !objective.is_zero() {
        return None;
    }

    let mut x = vec![BigRational::zero(); k];
    for (i, &var) in basis.iter().enumerate() {
        if var < k {
            x[var] = tableau[i][cols - 1].clone();
        }
    }
    Some(x)
}

//! Exact fraction Gaussian elimination for the small stationary systems.

use num_traits::{One, Signed, Zero};

use crate::error::{structural, Result};
use crate::measure::Q;

fn size_key(x: &Q) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Reduces `a` to row echelon form in place and returns the pivot columns.
/// Pivots are chosen with the smallest numerator+denominator bit size to limit growth.
fn echelon(a: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(best) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| size_key(&a[i][c]))
        else {
            continue;
        };
        a.swap(r, best);
        let inv = Q::one() / &a[r][c];
        for x in a[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a = m.to_vec();
    echelon(&mut a).len()
}

/// The unique probability vector `π` with `πP = π` for a row-stochastic `P`.
///
/// Fails with a structural error when the fixed space is not one-dimensional.
pub fn stationary(p: &[Vec<Q>]) -> Result<Vec<Q>> {
    let n = p.len();
    // (Pᵀ - I) π = 0 plus the normalisation row, augmented with the right-hand side.
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|j| {
            let mut row: Vec<Q> = (0..n).map(|i| p[i][j].clone()).collect();
            row[j] -= Q::one();
            row.push(Q::zero());
            row
        })
        .collect();
    let mut norm = vec![Q::one(); n];
    norm.push(Q::one());
    a.push(norm);

    let pivots = echelon(&mut a);
    if pivots.len() != n || pivots.contains(&n) {
        return Err(structural(format!(
            "stationary system on {n} states has rank {} (expected a unique solution)",
            pivots.iter().filter(|&&c| c < n).count()
        )));
    }
    let pi: Vec<Q> = (0..n).map(|i| a[i][n].clone()).collect();
    if pi.iter().any(Signed::is_negative) {
        return Err(structural("stationary solution has negative entries"));
    }
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::q;

    #[test]
    fn two_state_chain() {
        // P = [[1/2, 1/2], [1/4, 3/4]] -> π = (1/3, 2/3)
        let p = vec![vec![q(1, 2), q(1, 2)], vec![q(1, 4), q(3, 4)]];
        assert_eq!(stationary(&p).unwrap(), vec![q(1, 3), q(2, 3)]);
    }

    #[test]
    fn periodic_chain_still_unique() {
        let p = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]];
        assert_eq!(stationary(&p).unwrap(), vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn reducible_chain_rejected() {
        let p = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        assert!(stationary(&p).is_err());
    }

    #[test]
    fn rank_of_singular_matrix() {
        let m = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
            vec![q(0, 1), q(1, 3), q(1, 1)],
        ];
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn worked_example_marginal_law() {
        // λ P_μ = λ on the five-point example
        let p = crate::example::law().marginal_transition_matrix();
        let lam = stationary(&p).unwrap();
        assert_eq!(lam, vec![q(1, 9), q(2, 9), q(1, 9), q(2, 9), q(3, 9)]);
    }
}

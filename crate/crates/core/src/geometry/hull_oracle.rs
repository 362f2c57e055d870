//! Brute-force reference for Minkowski vertex counts.
//!
//! Sums every tuple of lifted support points, deduplicates coincident sums,
//! and counts the points strictly exposable by a direction of the form
//! `(1, z)`. Exposability is decided by Fourier-Motzkin elimination on a
//! system of strict inequalities over exact rationals, so this path shares
//! no code with the simplex-based implementation it cross-checks. Intended
//! for small instances (n <= 3, a few dozen summed points).

use super::{Lifting, Support};
use num_rational::BigRational;
use num_traits::Zero;

/// A strict inequality `coeffs . z > rhs`.
type StrictRow = (Vec<BigRational>, BigRational);

/// Decides whether `{z : coeffs . z > rhs}` has a solution.
fn strict_system_feasible(mut rows: Vec<StrictRow>, nvars: usize) -> bool {
    for var in (0..nvars).rev() {
        let mut lower: Vec<StrictRow> = Vec::new();
        let mut upper: Vec<StrictRow> = Vec::new();
        let mut rest: Vec<StrictRow> = Vec::new();
        for (coeffs, rhs) in rows {
            let c = coeffs[var].clone();
            if c.is_zero() {
                rest.push((coeffs, rhs));
            } else if c > BigRational::zero() {
                lower.push((coeffs, rhs));
            } else {
                upper.push((coeffs, rhs));
            }
        }
        for (ci, bi) in &lower {
            for (cj, bj) in &upper {
                // ci[var] * row_j - cj[var] * row_i keeps strictness and
                // cancels the eliminated variable.
                let a = ci[var].clone();
                let b = cj[var].clone();
                let coeffs: Vec<BigRational> = (0..var)
                    .map(|c| &a * &cj[c] - &b * &ci[c])
                    .collect();
                let rhs = &a * bj - &b * bi;
                if coeffs.iter().all(Zero::is_zero) {
                    if rhs >= BigRational::zero() {
                        return false;
                    }
                } else {
                    rest.push((coeffs, rhs));
                }
            }
        }
        rows = rest
            .into_iter()
            .map(|(mut coeffs, rhs)| {
                coeffs.truncate(var);
                (coeffs, rhs)
            })
            .collect();
        // Constant rows can be settled immediately.
        let mut kept = Vec::with_capacity(rows.len());
        for (coeffs, rhs) in rows {
            if coeffs.iter().all(Zero::is_zero) {
                if rhs >= BigRational::zero() {
                    return false;
                }
            } else {
                kept.push((coeffs, rhs));
            }
        }
        rows = kept;
    }
    rows.iter().all(|(_, rhs)| *rhs < BigRational::zero())
}

/// Lifted point `(height, position)`.
pub type LiftedPoint = (BigRational, Vec<BigRational>);

/// Counts points of the configuration strictly exposed from above, i.e.
/// points `p` admitting `z` with `(1, z) . p > (1, z) . q` for all `q != p`.
pub fn upper_hull_vertex_count(points: &[LiftedPoint]) -> usize {
    let mut distinct: Vec<&LiftedPoint> = Vec::new();
    for p in points {
        if !distinct.iter().any(|d| **d == *p) {
            distinct.push(p);
        }
    }
    let nvars = distinct.first().map_or(0, |(_, x)| x.len());
    let mut count = 0;
    for (i, (hp, xp)) in distinct.iter().enumerate() {
        let mut rows: Vec<StrictRow> = Vec::new();
        let mut feasible = true;
        for (j, (hq, xq)) in distinct.iter().enumerate() {
            if i == j {
                continue;
            }
            let coeffs: Vec<BigRational> = xp.iter().zip(xq.iter()).map(|(a, b)| a - b).collect();
            let rhs = hq - hp;
            if coeffs.iter().all(Zero::is_zero) {
                // Same position, different height: only the higher survives.
                if rhs >= BigRational::zero() {
                    feasible = false;
                    break;
                }
            } else {
                rows.push((coeffs, rhs));
            }
        }
        if feasible && strict_system_feasible(rows, nvars) {
            count += 1;
        }
    }
    count
}

/// Brute-force value of the Minkowski-sum vertex count: enumerate all
/// summed lifted tuples and count exposed points of the sum.
pub fn minkowski_vertex_count_bruteforce(
    supports: &[Support<BigRational>],
    liftings: &[Lifting<BigRational>],
) -> usize {
    let mut sums: Vec<LiftedPoint> = vec![(BigRational::zero(), vec![
        BigRational::zero();
        supports[0].dimension()
    ])];
    for (s, l) in supports.iter().zip(liftings) {
        let mut next = Vec::with_capacity(sums.len() * s.len());
        for (h, x) in &sums {
            for (i, e) in s.exponents().iter().enumerate() {
                let nh = h + &l.values()[i];
                let nx: Vec<BigRational> = x.iter().zip(e).map(|(a, b)| a + b).collect();
                next.push((nh, nx));
            }
        }
        sums = next;
    }
    upper_hull_vertex_count(&sums)
}

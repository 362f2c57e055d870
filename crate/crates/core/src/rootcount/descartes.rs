//! Exact positive-root isolation for integer-exponent univariate systems.
//!
//! Vincent-Collins-Akritas bisection driven by Descartes' rule of signs,
//! over exact rationals. Serves as an independent cross-check for the
//! interval counter: the isolating intervals it returns each contain
//! exactly one root. Termination requires simple roots; a node budget
//! turns pathological inputs into an honest `None`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sign variations of a coefficient sequence, zeros skipped.
fn sign_variations(coeffs: &[BigRational]) -> usize {
    let mut vars = 0;
    let mut last: Option<bool> = None;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let pos = c.is_positive();
        if let Some(prev) = last {
            if prev != pos {
                vars += 1;
            }
        }
        last = Some(pos);
    }
    vars
}

/// Taylor shift by one: returns q(x + 1).
fn shift_by_one(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut out = coeffs.to_vec();
    let d = out.len();
    // Synthetic Horner pass per output coefficient.
    for i in 0..d {
        for j in (i..d - 1).rev() {
            let add = out[j + 1].clone();
            out[j] += add;
        }
    }
    out
}

/// q(x) -> q(x / 2), up to a positive constant factor.
fn halve_argument(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut out = coeffs.to_vec();
    let mut pow = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    for c in out.iter_mut() {
        *c *= pow.clone();
        pow *= half.clone();
    }
    out
}

/// Descartes bound for the root count of q in (0, 1): variations of
/// (1+x)^d q(1/(1+x)).
fn variations_in_unit_interval(coeffs: &[BigRational]) -> usize {
    let mut rev: Vec<BigRational> = coeffs.iter().rev().cloned().collect();
    rev = shift_by_one(&rev);
    sign_variations(&rev)
}

fn eval(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Divides q by (x - r) assuming r is an exact root; repeats while the
/// root persists, returning the multiplicity removed.
fn deflate_root(coeffs: &mut Vec<BigRational>, r: &BigRational) -> usize {
    let mut mult = 0;
    while coeffs.len() > 1 && eval(coeffs, r).is_zero() {
        let mut quotient = vec![BigRational::zero(); coeffs.len() - 1];
        let mut carry = BigRational::zero();
        for i in (0..coeffs.len() - 1).rev() {
            carry = coeffs[i + 1].clone() + carry * r;
            quotient[i] = carry.clone();
        }
        *coeffs = quotient;
        mult += 1;
    }
    mult
}

/// An isolating interval `(lo, hi)` containing exactly one positive root;
/// degenerate intervals mark exact rational roots.
pub type Isolation = (BigRational, BigRational);

/// Isolates all roots of `sum_j coeffs[j] x^{exps[j]}` in `(0, inf)`.
///
/// Returns `None` when the node budget is exhausted (e.g. multiple roots).
pub fn isolate_positive_roots(
    coeffs: &[BigRational],
    exps: &[i64],
    max_nodes: usize,
) -> Option<Vec<Isolation>> {
    assert_eq!(coeffs.len(), exps.len());
    let nonzero: Vec<(usize, i64)> = exps
        .iter()
        .enumerate()
        .filter(|(j, _)| !coeffs[*j].is_zero())
        .map(|(j, &e)| (j, e))
        .collect();
    if nonzero.is_empty() {
        return None; // identically zero
    }
    if nonzero.len() == 1 {
        return Some(Vec::new()); // a monomial never vanishes on (0, inf)
    }
    // Shift exponents so the lowest is zero; positive roots are unchanged.
    let min_e = nonzero.iter().map(|&(_, e)| e).min().unwrap_or(0);
    let degree = (nonzero.iter().map(|&(_, e)| e).max().unwrap_or(0) - min_e) as usize;
    let mut dense = vec![BigRational::zero(); degree + 1];
    for &(j, e) in &nonzero {
        dense[(e - min_e) as usize] += coeffs[j].clone();
    }
    while dense.len() > 1 && dense.last().is_some_and(Zero::is_zero) {
        dense.pop();
    }
    if dense.len() <= 1 {
        return Some(Vec::new());
    }

    // Cauchy bound rounded up to a power of two.
    let lead = dense.last().cloned().unwrap_or_else(BigRational::one);
    let mut bound = BigRational::one();
    for c in &dense[..dense.len() - 1] {
        let r = BigRational::one() + (c / &lead).abs();
        if r > bound {
            bound = r;
        }
    }
    let mut b = BigRational::one();
    let two = BigRational::from_integer(2.into());
    while b < bound {
        b *= two.clone();
    }

    // Work on q(x) = p(b x) over (0, 1).
    let mut q: Vec<BigRational> = dense;
    let mut pow = BigRational::one();
    for c in q.iter_mut() {
        *c *= pow.clone();
        pow *= b.clone();
    }

    let mut results: Vec<Isolation> = Vec::new();
    // Nodes are (poly over (0,1), interval (lo, hi) in original coords).
    let mut stack: Vec<(Vec<BigRational>, BigRational, BigRational)> =
        vec![(q, BigRational::zero(), b.clone())];
    let mut nodes = 0;
    while let Some((mut poly, lo, hi)) = stack.pop() {
        nodes += 1;
        if nodes > max_nodes {
            return None;
        }
        let vars = variations_in_unit_interval(&poly);
        match vars {
            0 => continue,
            1 => {
                results.push((lo, hi));
                continue;
            }
            _ => {}
        }
        let mid = (&lo + &hi) / &two;
        let half = BigRational::new(1.into(), 2.into());
        if eval(&poly, &half).is_zero() {
            let mult = deflate_root(&mut poly, &half);
            debug_assert!(mult > 0);
            results.push((mid.clone(), mid.clone()));
        }
        let left = halve_argument(&poly);
        let right = shift_by_one(&left);
        stack.push((left, lo, mid.clone()));
        stack.push((right, mid, hi));
    }
    results.sort_by(|a, b| a.0.cmp(&b.0));
    Some(results)
}

/// Exact count of positive real roots for integer-exponent input.
pub fn count_positive_roots(coeffs: &[BigRational], exps: &[i64], max_nodes: usize) -> Option<usize> {
    isolate_positive_roots(coeffs, exps, max_nodes).map(|v| v.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn quadratic_with_two_positive_roots() {
        // 2 - 3x + x^2 = (x - 1)(x - 2)
        let roots = isolate_positive_roots(&[q(2), q(-3), q(1)], &[0, 1, 2], 10_000).unwrap();
        assert_eq!(roots.len(), 2);
        let mid = |r: &Isolation| crate::scalar::Scalar::to_f64(&((&r.0 + &r.1) / q(2)));
        assert!(r0_contains(&roots[0], 1.0) || mid(&roots[0]) == 1.0);
        assert!(r0_contains(&roots[1], 2.0) || mid(&roots[1]) == 2.0);
    }

    fn r0_contains(r: &Isolation, x: f64) -> bool {
        let lo = crate::scalar::Scalar::to_f64(&r.0);
        let hi = crate::scalar::Scalar::to_f64(&r.1);
        lo <= x && x <= hi
    }

    #[test]
    fn degree_seven_binomials() {
        assert_eq!(count_positive_roots(&[q(1), q(1)], &[0, 7], 10_000), Some(0));
        assert_eq!(count_positive_roots(&[q(1), q(-1)], &[0, 7], 10_000), Some(1));
    }

    #[test]
    fn monomials_and_shifted_exponents() {
        assert_eq!(count_positive_roots(&[q(5)], &[3], 10_000), Some(0));
        // x^{-2} (1 - x)(2 - x) has the same positive roots as (1-x)(2-x).
        assert_eq!(
            count_positive_roots(&[q(2), q(-3), q(1)], &[-2, -1, 0], 10_000),
            Some(2)
        );
    }

    #[test]
    fn exact_rational_root_at_split_point() {
        // (2x - 1)(x - 3) = 2x^2 - 7x + 3 has roots 1/2 and 3; the first
        // lands exactly on a bisection point.
        let roots = isolate_positive_roots(&[q(3), q(-7), q(2)], &[0, 1, 2], 10_000).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn sign_variation_counting() {
        assert_eq!(sign_variations(&[q(1), q(0), q(-2), q(3)]), 2);
        assert_eq!(sign_variations(&[q(1), q(1)]), 0);
    }
}

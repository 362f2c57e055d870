//! Polyhedral layer: upper envelopes of lifted supports, the cells of the
//! induced mixed subdivision, and vertex counts of Minkowski sums.
//!
//! A support is lifted by a per-exponent height. An exponent is a vertex of
//! the resulting upper envelope exactly when some direction `(1, z)` exposes
//! it strictly; we decide that with a bounded-slack LP whose optimum is the
//! exposure margin. Cells pool the same inequalities across all equations,
//! and the number of full-dimensional cells equals the vertex count of the
//! Minkowski sum of the envelopes.

pub mod hull_oracle;

use crate::lp::{self, LpError, LpOutcome};
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("support must contain at least one exponent")]
    EmptySupport,
    #[error("exponent vector {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("exponent vectors {first} and {second} coincide")]
    DuplicateExponent { first: usize, second: usize },
    #[error("lifting has {got} values for a support of size {expected}")]
    LiftingMismatch { got: usize, expected: usize },
    #[error("no supports given")]
    NoSupports,
    #[error("supports live in different dimensions")]
    MixedDimensions,
    #[error("label index {index} out of range for equation {equation}")]
    BadLabel { equation: usize, index: usize },
    #[error("LP failed on exponent index {index}: {source}")]
    LpFailure { index: usize, source: LpError },
}

/// A finite set of distinct exponent vectors in `n` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Support<S> {
    dimension: usize,
    exponents: Vec<Vec<S>>,
}

impl<S: Scalar> Support<S> {
    pub fn new(dimension: usize, exponents: Vec<Vec<S>>) -> Result<Self, GeometryError> {
        if exponents.is_empty() || dimension == 0 {
            return Err(GeometryError::EmptySupport);
        }
        for (i, e) in exponents.iter().enumerate() {
            if e.len() != dimension {
                return Err(GeometryError::DimensionMismatch {
                    index: i,
                    got: e.len(),
                    expected: dimension,
                });
            }
        }
        for i in 0..exponents.len() {
            for j in i + 1..exponents.len() {
                if exponents[i]
                    .iter()
                    .zip(&exponents[j])
                    .all(|(a, b)| a.coords_equal(b))
                {
                    return Err(GeometryError::DuplicateExponent {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self {
            dimension,
            exponents,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, i: usize) -> &[S] {
        &self.exponents[i]
    }

    pub fn exponents(&self) -> &[Vec<S>] {
        &self.exponents
    }
}

/// One lifting value per exponent of the owning support.
#[derive(Debug, Clone, PartialEq)]
pub struct Lifting<S>(Vec<S>);

impl<S: Scalar> Lifting<S> {
    pub fn new(values: Vec<S>) -> Self {
        Lifting(values)
    }

    pub fn zeros(len: usize) -> Self {
        Lifting(vec![S::zero(); len])
    }

    pub fn values(&self) -> &[S] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Envelope vertex decision for one lifted support: which exponents are
/// strictly exposed, with the LP margin recorded for every index.
#[derive(Debug, Clone)]
pub struct UpperEnvelope<S> {
    pub support: Support<S>,
    pub lifting: Lifting<S>,
    pub vertex_indices: Vec<usize>,
    pub margins: Vec<S>,
}

/// One exponent index per equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellLabel(pub Vec<usize>);

/// The polyhedron of directions exposing a fixed label tuple, as an
/// explicit inequality system `normal · z <= rhs`.
#[derive(Debug, Clone)]
pub struct Cell<S> {
    pub label: CellLabel,
    pub inequalities: Vec<(Vec<S>, S)>,
    pub margin: S,
    pub full_dimensional: bool,
    /// Maximizer of the margin LP; an interior point whenever the cell is
    /// full-dimensional.
    pub witness: Option<Vec<S>>,
}

impl<S: Scalar> Cell<S> {
    /// Membership up to the float tolerance (exact in rational mode).
    pub fn contains(&self, z: &[S], tol: &S) -> bool {
        self.inequalities.iter().all(|(normal, rhs)| {
            let lhs = dot(normal, z);
            lhs <= rhs.add(tol)
        })
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

/// Maximizes the shared slack of `normal · z + delta <= rhs` with the cap
/// `delta <= 1`; the sign of the optimum decides strict exposability.
fn margin_lp<S: Scalar>(
    n: usize,
    constraints: &[(Vec<S>, S)],
) -> Result<(S, Option<Vec<S>>), LpError> {
    let mut rows: Vec<(Vec<S>, S)> = Vec::with_capacity(constraints.len() + 1);
    for (normal, rhs) in constraints {
        let mut row = normal.clone();
        row.push(S::one());
        rows.push((row, rhs.clone()));
    }
    let mut cap = vec![S::zero(); n];
    cap.push(S::one());
    rows.push((cap, S::one()));
    let mut objective = vec![S::zero(); n];
    objective.push(S::one());
    match lp::maximize(&objective, &rows)? {
        LpOutcome::Optimal { value, mut point } => {
            point.truncate(n);
            Ok((value, Some(point)))
        }
        // The slack can always go to minus infinity, so the LP is feasible
        // and capped above; neither branch should be reachable.
        LpOutcome::Unbounded | LpOutcome::Infeasible => Err(LpError::NumericalBreakdown),
    }
}

/// Decides which lifted exponents are vertices of the upper envelope.
///
/// Index `i` is a vertex iff the LP
/// `max delta : (a_j - a_i)·z + delta <= pi(i) - pi(j), delta <= 1`
/// has optimum strictly above `tol`. Margins are recorded for all indices;
/// degenerate indices (margin exactly zero) count as non-vertices.
pub fn envelope_vertices<S: Scalar>(
    support: &Support<S>,
    lifting: &Lifting<S>,
    tol: &S,
) -> Result<UpperEnvelope<S>, GeometryError> {
    if lifting.len() != support.len() {
        return Err(GeometryError::LiftingMismatch {
            got: lifting.len(),
            expected: support.len(),
        });
    }
    let n = support.dimension();
    let t = support.len();
    let mut vertex_indices = Vec::new();
    let mut margins = Vec::with_capacity(t);
    for i in 0..t {
        let mut constraints = Vec::with_capacity(t - 1);
        for j in 0..t {
            if j == i {
                continue;
            }
            let normal: Vec<S> = support.exponents[j]
                .iter()
                .zip(&support.exponents[i])
                .map(|(aj, ai)| aj.sub(ai))
                .collect();
            let rhs = lifting.values()[i].sub(&lifting.values()[j]);
            constraints.push((normal, rhs));
        }
        let (margin, _) =
            margin_lp(n, &constraints).map_err(|source| GeometryError::LpFailure {
                index: i,
                source,
            })?;
        if margin > *tol {
            vertex_indices.push(i);
        }
        margins.push(margin);
    }
    Ok(UpperEnvelope {
        support: support.clone(),
        lifting: lifting.clone(),
        vertex_indices,
        margins,
    })
}

/// Vertex count of the convex hull of a support (zero lifting).
pub fn polytope_vertex_count<S: Scalar>(
    support: &Support<S>,
    tol: &S,
) -> Result<usize, GeometryError> {
    let env = envelope_vertices(support, &Lifting::zeros(support.len()), tol)?;
    Ok(env.vertex_indices.len())
}

fn validate_family<S: Scalar>(
    supports: &[Support<S>],
    liftings: &[Lifting<S>],
) -> Result<usize, GeometryError> {
    if supports.is_empty() {
        return Err(GeometryError::NoSupports);
    }
    let n = supports[0].dimension();
    if supports.iter().any(|s| s.dimension() != n) {
        return Err(GeometryError::MixedDimensions);
    }
    if supports.len() != liftings.len() {
        return Err(GeometryError::LiftingMismatch {
            got: liftings.len(),
            expected: supports.len(),
        });
    }
    for (s, l) in supports.iter().zip(liftings) {
        if s.len() != l.len() {
            return Err(GeometryError::LiftingMismatch {
                got: l.len(),
                expected: s.len(),
            });
        }
    }
    Ok(n)
}

/// Builds the inequality system of the cell with the given label and
/// certifies full-dimensionality via the pooled margin LP.
pub fn build_cell<S: Scalar>(
    label: &CellLabel,
    supports: &[Support<S>],
    liftings: &[Lifting<S>],
    tol: &S,
) -> Result<Cell<S>, GeometryError> {
    let n = validate_family(supports, liftings)?;
    if label.0.len() != supports.len() {
        return Err(GeometryError::BadLabel {
            equation: label.0.len(),
            index: 0,
        });
    }
    let mut inequalities = Vec::new();
    for (k, support) in supports.iter().enumerate() {
        let chosen = label.0[k];
        if chosen >= support.len() {
            return Err(GeometryError::BadLabel {
                equation: k,
                index: chosen,
            });
        }
        let pi = liftings[k].values();
        for j in 0..support.len() {
            if j == chosen {
                continue;
            }
            let normal: Vec<S> = support.exponents[j]
                .iter()
                .zip(&support.exponents[chosen])
                .map(|(aj, ac)| aj.sub(ac))
                .collect();
            let rhs = pi[chosen].sub(&pi[j]);
            inequalities.push((normal, rhs));
        }
    }
    let (margin, witness) =
        margin_lp(n, &inequalities).map_err(|source| GeometryError::LpFailure {
            index: 0,
            source,
        })?;
    let full_dimensional = margin > *tol;
    Ok(Cell {
        label: label.clone(),
        inequalities,
        margin,
        full_dimensional,
        witness,
    })
}

fn for_each_pruned_label<S: Scalar, F: FnMut(&CellLabel) -> Result<(), GeometryError>>(
    supports: &[Support<S>],
    liftings: &[Lifting<S>],
    tol: &S,
    mut visit: F,
) -> Result<(), GeometryError> {
    // A tuple can expose the Minkowski sum only if each component exposes
    // its own envelope, so enumeration runs over envelope vertices only.
    let mut vertex_lists = Vec::with_capacity(supports.len());
    for (s, l) in supports.iter().zip(liftings) {
        let env = envelope_vertices(s, l, tol)?;
        if env.vertex_indices.is_empty() {
            return Ok(());
        }
        vertex_lists.push(env.vertex_indices);
    }
    let mut odometer = vec![0usize; vertex_lists.len()];
    loop {
        let label = CellLabel(
            odometer
                .iter()
                .enumerate()
                .map(|(k, &i)| vertex_lists[k][i])
                .collect(),
        );
        visit(&label)?;
        let mut k = 0;
        loop {
            if k == odometer.len() {
                return Ok(());
            }
            odometer[k] += 1;
            if odometer[k] < vertex_lists[k].len() {
                break;
            }
            odometer[k] = 0;
            k += 1;
        }
    }
}

/// Number of vertices of the Minkowski sum of the lifted envelopes,
/// counted as full-dimensional cells of the induced subdivision.
pub fn minkowski_sum_vertex_count<S: Scalar>(
    supports: &[Support<S>],
    liftings: &[Lifting<S>],
    tol: &S,
) -> Result<usize, GeometryError> {
    validate_family(supports, liftings)?;
    let mut count = 0;
    for_each_pruned_label(supports, liftings, tol, |label| {
        let cell = build_cell(label, supports, liftings, tol)?;
        if cell.full_dimensional {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count)
}

/// All full-dimensional cells; their union covers the whole space.
pub fn enumerate_full_cells<S: Scalar>(
    supports: &[Support<S>],
    liftings: &[Lifting<S>],
    tol: &S,
) -> Result<Vec<Cell<S>>, GeometryError> {
    validate_family(supports, liftings)?;
    let mut cells = Vec::new();
    for_each_pruned_label(supports, liftings, tol, |label| {
        let cell = build_cell(label, supports, liftings, tol)?;
        if cell.full_dimensional {
            cells.push(cell);
        }
        Ok(())
    })?;
    Ok(cells)
}

/// Dimension of the affine span of the Minkowski sum of the supports,
/// computed as the rank of all within-support exponent differences.
pub fn affine_span_dimension<S: Scalar>(supports: &[Support<S>]) -> Result<usize, GeometryError> {
    if supports.is_empty() {
        return Err(GeometryError::NoSupports);
    }
    let n = supports[0].dimension();
    if supports.iter().any(|s| s.dimension() != n) {
        return Err(GeometryError::MixedDimensions);
    }
    let mut rows: Vec<Vec<S>> = Vec::new();
    for s in supports {
        let base = &s.exponents[0];
        for e in &s.exponents[1..] {
            rows.push(e.iter().zip(base).map(|(a, b)| a.sub(b)).collect());
        }
    }
    Ok(rank(&mut rows, n))
}

fn rank<S: Scalar>(rows: &mut [Vec<S>], width: usize) -> usize {
    let mut scale = S::one();
    for row in rows.iter() {
        for v in row {
            let a = v.abs();
            if a > scale {
                scale = a;
            }
        }
    }
    let threshold = if S::EXACT {
        S::zero()
    } else {
        scale.mul(&S::from_i64(1)).mul(&S::pivot_tol())
    };
    let mut rank = 0;
    for col in 0..width {
        let mut pivot = None;
        let mut best = threshold.clone();
        for (i, row) in rows.iter().enumerate().skip(rank) {
            let a = row[col].abs();
            if a > best {
                best = a;
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        for i in rank + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].div(&rows[rank][col]);
            for c in col..width {
                let delta = f.mul(&rows[rank][c]);
                rows[i][c] = rows[i][c].sub(&delta);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn support1(points: &[i64]) -> Support<BigRational> {
        Support::new(1, points.iter().map(|&p| vec![q(p)]).collect()).unwrap()
    }

    fn support2(points: &[(i64, i64)]) -> Support<BigRational> {
        Support::new(2, points.iter().map(|&(a, b)| vec![q(a), q(b)]).collect()).unwrap()
    }

    fn tol0() -> BigRational {
        <BigRational as Scalar>::zero()
    }

    #[test]
    fn duplicate_exponents_rejected() {
        let err = Support::new(1, vec![vec![q(1)], vec![q(1)]]).unwrap_err();
        assert!(matches!(err, GeometryError::DuplicateExponent { .. }));
    }

    #[test]
    fn affine_span_examples() {
        // Two distinct points span a line.
        assert_eq!(affine_span_dimension(&[support1(&[0, 1])]).unwrap(), 1);
        // Single points span nothing.
        let s = support2(&[(0, 0)]);
        assert_eq!(affine_span_dimension(&[s.clone(), s]).unwrap(), 0);
        // Two copies of a horizontal segment stay rank one.
        let s = support2(&[(0, 0), (1, 0)]);
        assert_eq!(affine_span_dimension(&[s.clone(), s]).unwrap(), 1);
        assert!(matches!(
            affine_span_dimension::<BigRational>(&[]),
            Err(GeometryError::NoSupports)
        ));
    }

    #[test]
    fn envelope_vertices_univariate() {
        let s = support1(&[0, 1, 2]);
        let zero = Lifting::zeros(3);
        let env = envelope_vertices(&s, &zero, &tol0()).unwrap();
        assert_eq!(env.vertex_indices, vec![0, 2]);

        let bump = Lifting::new(vec![q(0), q(1), q(0)]);
        let env = envelope_vertices(&s, &bump, &tol0()).unwrap();
        assert_eq!(env.vertex_indices, vec![0, 1, 2]);

        let dip = Lifting::new(vec![q(0), q(-1), q(0)]);
        let env = envelope_vertices(&s, &dip, &tol0()).unwrap();
        assert_eq!(env.vertex_indices, vec![0, 2]);
    }

    #[test]
    fn polytope_vertex_counts() {
        assert_eq!(polytope_vertex_count(&support1(&[0, 1, 2]), &tol0()).unwrap(), 2);
        let square_center = support2(&[(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)]);
        assert_eq!(polytope_vertex_count(&square_center, &tol0()).unwrap(), 4);
        let quad = support2(&[(0, 0), (1, 0), (0, 1), (2, 2)]);
        assert_eq!(polytope_vertex_count(&quad, &tol0()).unwrap(), 4);
    }

    #[test]
    fn build_cell_univariate_pair() {
        let supports = [support1(&[0, 1]), support1(&[0, 2])];
        let liftings = [Lifting::zeros(2), Lifting::zeros(2)];
        let cell = build_cell(&CellLabel(vec![0, 0]), &supports, &liftings, &tol0()).unwrap();
        assert!(cell.full_dimensional);
        // Both inequalities read z <= 0.
        assert!(cell.inequalities.iter().all(|(n, r)| n[0] > q(0) && *r == q(0)));

        let pinch = build_cell(&CellLabel(vec![1, 0]), &supports, &liftings, &tol0()).unwrap();
        assert!(!pinch.full_dimensional);
        assert_eq!(pinch.margin, q(0));
    }

    #[test]
    fn polar_cone_cell_with_zero_liftings() {
        // Supports translated so the labelled exponent is the origin: the
        // cell is the polar cone {z : a·z <= 0 for all a}.
        let s = support2(&[(0, 0), (1, 0), (0, 1)]);
        let cell = build_cell(
            &CellLabel(vec![0]),
            &[s],
            &[Lifting::zeros(3)],
            &tol0(),
        )
        .unwrap();
        assert!(cell.full_dimensional);
        assert!(cell.inequalities.iter().all(|(_, r)| *r == q(0)));
        let z = [q(-1), q(-1)];
        assert!(cell.contains(&z, &tol0()));
    }

    #[test]
    fn minkowski_counts_univariate() {
        let supports = [support1(&[0, 1]), support1(&[0, 2])];
        let liftings = [Lifting::zeros(2), Lifting::zeros(2)];
        assert_eq!(
            minkowski_sum_vertex_count(&supports, &liftings, &tol0()).unwrap(),
            2
        );

        // Identical binomials: two cells, both with diagonal labels.
        let supports = [support1(&[0, 1]), support1(&[0, 1])];
        let cells = enumerate_full_cells(&supports, &liftings, &tol0()).unwrap();
        assert_eq!(cells.len(), 2);
        assert!(cells.iter().all(|c| c.label.0[0] == c.label.0[1]));
    }

    #[test]
    fn single_point_supports_give_one_cell() {
        let s = support2(&[(3, 4)]);
        let supports = [s.clone(), s];
        let liftings = [Lifting::zeros(1), Lifting::zeros(1)];
        assert_eq!(
            minkowski_sum_vertex_count(&supports, &liftings, &tol0()).unwrap(),
            1
        );
        let cells = enumerate_full_cells(&supports, &liftings, &tol0()).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(cells[0].inequalities.is_empty());
    }

    #[test]
    fn trinomial_envelope_fan_breakpoints() {
        // Lifting (0, 1, 0) on {0, 1, 2}: cells split at z = -1 and z = 1.
        let s = support1(&[0, 1, 2]);
        let lift = Lifting::new(vec![q(0), q(1), q(0)]);
        let cells = enumerate_full_cells(&[s], &[lift], &tol0()).unwrap();
        assert_eq!(cells.len(), 3);
        let mid = &cells.iter().find(|c| c.label.0[0] == 1).unwrap();
        let inside = [q(0)];
        let outside = [q(2)];
        assert!(mid.contains(&inside, &tol0()));
        assert!(!mid.contains(&outside, &tol0()));
    }

    #[test]
    fn translation_invariance_of_vertex_sets() {
        let s = support2(&[(0, 0), (1, 0), (0, 1), (2, 2)]);
        let lift = Lifting::new(vec![q(0), q(2), q(-1), q(1)]);
        let shifted = Lifting::new(
            lift.values().iter().map(|v| v + q(7)).collect::<Vec<_>>(),
        );
        let e1 = envelope_vertices(&s, &lift, &tol0()).unwrap();
        let e2 = envelope_vertices(&s, &shifted, &tol0()).unwrap();
        assert_eq!(e1.vertex_indices, e2.vertex_indices);

        let supports = [s.clone(), s.clone()];
        let c1 = minkowski_sum_vertex_count(&supports, &[lift.clone(), lift.clone()], &tol0())
            .unwrap();
        let c2 = minkowski_sum_vertex_count(&supports, &[shifted, lift], &tol0()).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn count_bounds_hold() {
        let s1 = support2(&[(0, 0), (1, 0), (0, 1)]);
        let s2 = support2(&[(0, 0), (2, 1)]);
        let liftings = [Lifting::zeros(3), Lifting::zeros(2)];
        let v = minkowski_sum_vertex_count(&[s1, s2], &liftings, &tol0()).unwrap();
        assert!(v >= 1 && v <= 6);
    }

    #[test]
    fn float_mode_matches_exact_mode() {
        let s_exact = support2(&[(0, 0), (1, 0), (0, 1), (2, 2)]);
        let s_float = Support::new(
            2,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![2.0, 2.0],
            ],
        )
        .unwrap();
        let lift_exact = Lifting::new(vec![q(0), q(2), q(-1), q(1)]);
        let lift_float = Lifting::new(vec![0.0, 2.0, -1.0, 1.0]);
        let e = envelope_vertices(&s_exact, &lift_exact, &tol0()).unwrap();
        let f = envelope_vertices(&s_float, &lift_float, &1e-9).unwrap();
        assert_eq!(e.vertex_indices, f.vertex_indices);

        let ve = minkowski_sum_vertex_count(
            &[s_exact.clone(), s_exact],
            &[lift_exact.clone(), lift_exact],
            &tol0(),
        )
        .unwrap();
        let vf = minkowski_sum_vertex_count(
            &[s_float.clone(), s_float],
            &[lift_float.clone(), lift_float],
            &1e-9,
        )
        .unwrap();
        assert_eq!(ve, vf);
    }
}

//! Certified counting of positive zeros in log coordinates.
//!
//! All work happens on the exponential-sum form of the system, where the
//! positive orthant becomes all of space and each term is log-linear. A
//! polyhedral truncation step first localizes every zero inside a finite
//! box union: at a zero the dominant term of each equation is matched by
//! the remaining ones, which pins the point into a slab per equation. The
//! boxes are then processed by recursive bisection, with interval
//! evaluation excluding boxes and the Krawczyk test certifying unique
//! zeros. Boxes surviving the depth budget are reported undecided, never
//! guessed.

pub mod descartes;
pub mod interval;

use crate::geometry::{self, enumerate_full_cells, Lifting, Support};
use crate::linalg::Matrix;
use crate::lp::{self, LpOutcome};
use crate::random_systems::FewnomialSystem;
use interval::{dot_interval, Interval};
use num_rational::BigRational;
use rand::Rng;
use thiserror::Error;

/// Default subdivision depth budget.
pub const DEFAULT_MAX_DEPTH: usize = 60;
/// Default certification tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Hard cap on processed boxes per count, to keep single trials bounded.
const BOX_BUDGET: usize = 400_000;

#[derive(Debug, Error)]
pub enum CountError {
    /// Span-deficient supports: the truncation region is unbounded, and
    /// the system has no zeros at all with probability one.
    #[error("truncation region unbounded: supports do not span the space")]
    UnboundedRegion,
    /// An equation with every coefficient exactly zero cannot be counted.
    #[error("an equation vanishes identically")]
    DegenerateSystem,
    #[error("geometry failure: {0}")]
    Geometry(#[from] geometry::GeometryError),
}

/// Axis-aligned box in log coordinates; endpoints may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox(pub Vec<Interval>);

impl IntervalBox {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(Interval::mid).collect()
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.0.iter().zip(y).all(|(iv, &v)| iv.contains(v))
    }

    pub fn intersects(&self, other: &IntervalBox) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.intersects(b))
    }

    pub fn contains_box(&self, other: &IntervalBox) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| a.lo <= b.lo && b.hi <= a.hi)
    }

    fn is_finite(&self) -> bool {
        self.0.iter().all(|iv| iv.lo.is_finite() && iv.hi.is_finite())
    }
}

/// Outcome of a certified count.
#[derive(Debug, Clone)]
pub struct CountResult {
    pub count: usize,
    pub certified: bool,
    pub undecided_boxes: Vec<IntervalBox>,
    pub zero_points: Vec<Vec<f64>>,
}

impl CountResult {
    fn empty_certified() -> Self {
        CountResult {
            count: 0,
            certified: true,
            undecided_boxes: Vec::new(),
            zero_points: Vec::new(),
        }
    }
}

/// Compiled working form: nonzero terms only, float exponents.
struct Compiled {
    n: usize,
    equations: Vec<CompiledEq>,
}

struct CompiledEq {
    coeffs: Vec<f64>,
    exps: Vec<Vec<f64>>,
}

impl Compiled {
    fn from_system(system: &FewnomialSystem) -> Result<Self, CountError> {
        let n = system.n();
        let all_exps = system.exponents_f64();
        let mut equations = Vec::with_capacity(all_exps.len());
        for (k, exps) in all_exps.into_iter().enumerate() {
            let mut eq = CompiledEq {
                coeffs: Vec::new(),
                exps: Vec::new(),
            };
            for (j, e) in exps.into_iter().enumerate() {
                let c = system.coefficients[k][j];
                if c != 0.0 && c.is_finite() {
                    eq.coeffs.push(c);
                    eq.exps.push(e);
                }
            }
            if eq.coeffs.is_empty() {
                return Err(CountError::DegenerateSystem);
            }
            equations.push(eq);
        }
        Ok(Compiled { n, equations })
    }

    /// Interval enclosure of one equation and its Jacobian row over a box.
    fn eval_eq(&self, k: usize, boxv: &[Interval], jac_row: Option<&mut [Interval]>) -> Interval {
        let eq = &self.equations[k];
        let mut value = Interval::point(0.0);
        match jac_row {
            None => {
                for (c, e) in eq.coeffs.iter().zip(&eq.exps) {
                    let term = dot_interval(e, boxv).exp().scale(*c);
                    value = value.add(&term);
                }
            }
            Some(row) => {
                for r in row.iter_mut() {
                    *r = Interval::point(0.0);
                }
                for (c, e) in eq.coeffs.iter().zip(&eq.exps) {
                    let term = dot_interval(e, boxv).exp().scale(*c);
                    value = value.add(&term);
                    for (i, &a) in e.iter().enumerate() {
                        row[i] = row[i].add(&term.scale(a));
                    }
                }
            }
        }
        value
    }

    /// Float evaluation (value and Jacobian) at a point, scaled per row to
    /// dodge overflow; scaling does not move zeros.
    fn eval_scaled(&self, y: &[f64]) -> (Vec<f64>, Matrix) {
        let n = self.n;
        let mut values = Vec::with_capacity(self.equations.len());
        let mut jac = Matrix::zeros(n);
        for (k, eq) in self.equations.iter().enumerate() {
            let mut dots: Vec<f64> = Vec::with_capacity(eq.exps.len());
            let mut m = f64::NEG_INFINITY;
            for e in &eq.exps {
                let a: f64 = e.iter().zip(y).map(|(x, v)| x * v).sum();
                if a > m {
                    m = a;
                }
                dots.push(a);
            }
            let mut value = 0.0;
            let mut grad = vec![0.0; n];
            for (j, e) in eq.exps.iter().enumerate() {
                let term = eq.coeffs[j] * (dots[j] - m).exp();
                value += term;
                for (i, &a) in e.iter().enumerate() {
                    grad[i] += term * a;
                }
            }
            values.push(value);
            for i in 0..n {
                jac.set(k, i, grad[i]);
            }
        }
        (values, jac)
    }

    fn has_single_term_equation(&self) -> bool {
        self.equations.iter().any(|eq| eq.coeffs.len() == 1)
    }

    fn effective_supports(&self) -> Result<Vec<Support<f64>>, CountError> {
        self.equations
            .iter()
            .map(|eq| Support::new(self.n, eq.exps.clone()).map_err(CountError::Geometry))
            .collect()
    }
}

/// Finite box union guaranteed to contain every zero of the system in log
/// coordinates.
///
/// For each full-dimensional cell of the subdivision induced by the
/// coefficient liftings `ln |f_{k,alpha}|`, the dominant term of equation
/// `k` is the cell label; a zero inside the cell forces some other term to
/// match it within a factor `t_k - 1`. Intersecting one such slab per
/// equation and bounding each intersection with LPs yields the boxes.
/// Unbounded slab intersections keep infinite endpoints; they are rare and
/// handled downstream by exclusion.
pub fn truncation_region(system: &FewnomialSystem) -> Result<Vec<IntervalBox>, CountError> {
    let compiled = Compiled::from_system(system)?;
    truncation_region_compiled(&compiled)
}

fn truncation_region_compiled(compiled: &Compiled) -> Result<Vec<IntervalBox>, CountError> {
    let n = compiled.n;
    if compiled.has_single_term_equation() {
        // A nonzero coefficient times a positive monomial never vanishes.
        return Ok(Vec::new());
    }
    let supports = compiled.effective_supports()?;
    if geometry::affine_span_dimension(&supports)? != n {
        return Err(CountError::UnboundedRegion);
    }
    let liftings: Vec<Lifting<f64>> = compiled
        .equations
        .iter()
        .map(|eq| Lifting::new(eq.coeffs.iter().map(|c| c.abs().ln()).collect()))
        .collect();
    let cells = enumerate_full_cells(&supports, &liftings, &1e-9)?;

    let mut boxes: Vec<IntervalBox> = Vec::new();
    for cell in &cells {
        // Depth-first over one slab choice per equation, pruning infeasible
        // prefixes. The >= 0 side of each slab is already a cell inequality.
        let mut constraints: Vec<(Vec<f64>, f64)> = cell.inequalities.clone();
        descend_slabs(
            compiled,
            &liftings,
            &cell.label.0,
            0,
            &mut constraints,
            &mut boxes,
        );
    }

    // Inflate against LP roundoff and drop boxes swallowed by others.
    let inflated: Vec<IntervalBox> = boxes
        .iter()
        .map(|b| IntervalBox(b.0.iter().map(|iv| iv.inflate(1e-7, 1e-7)).collect()))
        .collect();
    let mut kept: Vec<IntervalBox> = Vec::new();
    for b in inflated {
        if kept.iter().any(|k| k.contains_box(&b)) {
            continue;
        }
        kept.retain(|k| !b.contains_box(k));
        kept.push(b);
    }
    Ok(kept)
}

fn descend_slabs(
    compiled: &Compiled,
    liftings: &[Lifting<f64>],
    label: &[usize],
    k: usize,
    constraints: &mut Vec<(Vec<f64>, f64)>,
    boxes: &mut Vec<IntervalBox>,
) {
    let n = compiled.n;
    if k == compiled.equations.len() {
        let mut ivs = Vec::with_capacity(n);
        for i in 0..n {
            let mut obj = vec![0.0; n];
            obj[i] = 1.0;
            let hi = match lp::maximize(&obj, constraints) {
                Ok(LpOutcome::Optimal { value, .. }) => value,
                Ok(LpOutcome::Unbounded) => f64::INFINITY,
                _ => return,
            };
            obj[i] = -1.0;
            let lo = match lp::maximize(&obj, constraints) {
                Ok(LpOutcome::Optimal { value, .. }) => -value,
                Ok(LpOutcome::Unbounded) => f64::NEG_INFINITY,
                _ => return,
            };
            if lo > hi {
                return; // numerically inverted sliver
            }
            ivs.push(Interval::new(lo, hi));
        }
        boxes.push(IntervalBox(ivs));
        return;
    }
    let eq = &compiled.equations[k];
    let t = eq.coeffs.len();
    let width = ((t - 1) as f64).ln();
    let chosen = label[k];
    let w = liftings[k].values();
    for beta in 0..t {
        if beta == chosen {
            continue;
        }
        // (alpha_k - beta) . y <= ln(t_k - 1) - (w_k(alpha_k) - w_k(beta))
        let normal: Vec<f64> = eq.exps[chosen]
            .iter()
            .zip(&eq.exps[beta])
            .map(|(a, b)| a - b)
            .collect();
        let rhs = width - (w[chosen] - w[beta]);
        constraints.push((normal, rhs));
        if lp::feasible(constraints).unwrap_or(false) {
            descend_slabs(compiled, liftings, label, k + 1, constraints, boxes);
        }
        constraints.pop();
    }
}

struct Counter<'a> {
    compiled: &'a Compiled,
    max_depth: usize,
    tol: f64,
    queue: Vec<(IntervalBox, usize)>,
    certificates: Vec<(IntervalBox, Vec<f64>)>,
    undecided: Vec<IntervalBox>,
    processed: usize,
}

impl<'a> Counter<'a> {
    fn exclusion(&self, boxv: &[Interval]) -> bool {
        (0..self.compiled.equations.len())
            .any(|k| !self.compiled.eval_eq(k, boxv, None).contains_zero())
    }

    /// Newton polish from a starting point; returns the refined point.
    fn polish(&self, start: &[f64]) -> Vec<f64> {
        let n = self.compiled.n;
        let mut y = start.to_vec();
        for _ in 0..40 {
            let (g, jac) = self.compiled.eval_scaled(&y);
            let Some(step) = jac.solve(&g) else { break };
            let mut moved = 0.0;
            for i in 0..n {
                y[i] -= step[i];
                moved += step[i].abs();
            }
            if moved < 1e-14 * (1.0 + y.iter().map(|v| v.abs()).sum::<f64>()) {
                break;
            }
        }
        y
    }

    /// One Krawczyk evaluation over the box. Returns the K region and the
    /// interval Jacobian midpoint inverse availability.
    fn krawczyk_region(&self, boxv: &IntervalBox) -> Option<IntervalBox> {
        let n = self.compiled.n;
        let m = boxv.mid();
        // Interval Jacobian over the box.
        let mut jac = vec![vec![Interval::point(0.0); n]; n];
        for k in 0..n {
            let _ = self.compiled.eval_eq(k, &boxv.0, Some(&mut jac[k]));
        }
        // Float midpoint Jacobian and its inverse.
        let mut mid_jac = Matrix::zeros(n);
        for k in 0..n {
            for i in 0..n {
                mid_jac.set(k, i, jac[k][i].mid());
            }
        }
        let y_inv = mid_jac.inverse()?;
        // Rigorous g(m) via point-interval evaluation.
        let m_ivs: Vec<Interval> = m.iter().map(|&v| Interval::point(v)).collect();
        let gm: Vec<Interval> = (0..n)
            .map(|k| self.compiled.eval_eq(k, &m_ivs, None))
            .collect();
        // K = m - Y g(m) + (I - Y J)(X - m)
        let mut region = Vec::with_capacity(n);
        for i in 0..n {
            let mut k_i = Interval::point(m[i]);
            for l in 0..n {
                k_i = k_i.sub(&gm[l].scale(y_inv.get(i, l)));
            }
            for l in 0..n {
                // E_il = delta_il - sum_k Y_ik J_kl
                let mut e_il = if i == l {
                    Interval::point(1.0)
                } else {
                    Interval::point(0.0)
                };
                for k in 0..n {
                    e_il = e_il.sub(&jac[k][l].scale(y_inv.get(i, k)));
                }
                let centered = boxv.0[l].sub(&Interval::point(m[l]));
                k_i = k_i.add(&e_il.mul(&centered));
            }
            if !k_i.lo.is_finite() && !k_i.hi.is_finite() {
                return None;
            }
            region.push(k_i);
        }
        Some(IntervalBox(region))
    }

    /// Univariate shortcut: a sign change under a sign-definite derivative
    /// certifies a unique zero; equal definite signs exclude the box.
    fn univariate_monotone(&mut self, boxv: &IntervalBox) -> bool {
        let iv = boxv.0[0];
        if !iv.lo.is_finite() || !iv.hi.is_finite() {
            return false;
        }
        let mut deriv = [Interval::point(0.0)];
        let _ = self.compiled.eval_eq(0, &boxv.0, Some(&mut deriv));
        if deriv[0].contains_zero() {
            return false;
        }
        let at_lo = self.compiled.eval_eq(0, &[Interval::point(iv.lo)], None);
        let at_hi = self.compiled.eval_eq(0, &[Interval::point(iv.hi)], None);
        let lo_sign = if at_lo.hi < 0.0 {
            -1
        } else if at_lo.lo > 0.0 {
            1
        } else {
            0
        };
        let hi_sign = if at_hi.hi < 0.0 {
            -1
        } else if at_hi.lo > 0.0 {
            1
        } else {
            0
        };
        if lo_sign == 0 || hi_sign == 0 {
            return false;
        }
        if lo_sign == hi_sign {
            return true; // monotone, no sign change: excluded
        }
        let zero = self.polish(&[iv.mid()]);
        self.certificates.push((boxv.clone(), zero));
        true
    }

    fn split_infinite(&mut self, boxv: IntervalBox, depth: usize) {
        let idx = boxv
            .0
            .iter()
            .position(|iv| !iv.lo.is_finite() || !iv.hi.is_finite())
            .unwrap_or(0);
        let iv = boxv.0[idx];
        let (a, b) = if iv.lo.is_finite() {
            // [a, inf): step geometrically outward.
            let m = if iv.lo <= 0.0 {
                iv.lo.abs().max(1.0)
            } else {
                2.0 * iv.lo
            };
            (
                Interval::new(iv.lo, m),
                Interval::new(m, f64::INFINITY),
            )
        } else if iv.hi.is_finite() {
            let m = if iv.hi >= 0.0 {
                -(iv.hi.abs().max(1.0))
            } else {
                2.0 * iv.hi
            };
            (
                Interval::new(f64::NEG_INFINITY, m),
                Interval::new(m, iv.hi),
            )
        } else {
            (
                Interval::new(f64::NEG_INFINITY, 0.0),
                Interval::new(0.0, f64::INFINITY),
            )
        };
        for half in [a, b] {
            let mut child = boxv.clone();
            child.0[idx] = half;
            self.queue.push((child, depth + 1));
        }
    }

    fn process(&mut self, boxv: IntervalBox, depth: usize) {
        self.processed += 1;
        if self.processed > BOX_BUDGET {
            self.undecided.push(boxv);
            return;
        }
        if self.exclusion(&boxv.0) {
            return;
        }
        if !boxv.is_finite() {
            if depth >= self.max_depth {
                self.undecided.push(boxv);
            } else {
                self.split_infinite(boxv, depth);
            }
            return;
        }
        if self.compiled.n == 1 && self.univariate_monotone(&boxv) {
            return;
        }
        if let Some(region) = self.krawczyk_region(&boxv) {
            let mut intersection = Vec::with_capacity(boxv.dim());
            let mut empty = false;
            for (k_i, x_i) in region.0.iter().zip(&boxv.0) {
                match k_i.intersect(x_i) {
                    Some(iv) => intersection.push(iv),
                    None => {
                        empty = true;
                        break;
                    }
                }
            }
            if empty {
                return; // no zero in the box
            }
            if region
                .0
                .iter()
                .zip(&boxv.0)
                .all(|(k_i, x_i)| k_i.inside_interior(x_i))
            {
                let zero = self.polish(&boxv.mid());
                self.certificates.push((region, zero));
                return;
            }
            // Contraction pays for itself when it shrinks the box well.
            let shrunk = IntervalBox(intersection);
            let old: f64 = boxv.0.iter().map(Interval::width).sum();
            let new: f64 = shrunk.0.iter().map(Interval::width).sum();
            if new < 0.7 * old {
                if depth >= self.max_depth {
                    self.undecided.push(shrunk);
                } else {
                    self.queue.push((shrunk, depth + 1));
                }
                return;
            }
            // Small boxes that still resist: try an inflated certificate,
            // which catches zeros sitting on box boundaries.
            let scale: f64 = boxv
                .0
                .iter()
                .map(|iv| iv.width() / (1.0 + iv.mag()))
                .fold(0.0, f64::max);
            if scale < 1e-6 {
                let fat = IntervalBox(
                    boxv.0
                        .iter()
                        .map(|iv| iv.inflate(4.0 * iv.width() + 1e-13, 0.0))
                        .collect(),
                );
                if let Some(fat_region) = self.krawczyk_region(&fat) {
                    if fat_region
                        .0
                        .iter()
                        .zip(&fat.0)
                        .all(|(k_i, x_i)| k_i.inside_interior(x_i))
                    {
                        let zero = self.polish(&fat.mid());
                        self.certificates.push((fat_region, zero));
                        return;
                    }
                }
            }
        }
        if depth >= self.max_depth {
            self.undecided.push(boxv);
            return;
        }
        // Bisect the relatively widest coordinate.
        let (idx, _) = boxv
            .0
            .iter()
            .enumerate()
            .map(|(i, iv)| (i, iv.width() / (1.0 + iv.mag())))
            .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let iv = boxv.0[idx];
        let m = iv.mid();
        if !(iv.lo < m && m < iv.hi) {
            // Degenerately thin and still undecidable.
            self.undecided.push(boxv);
            return;
        }
        for half in [Interval::new(iv.lo, m), Interval::new(m, iv.hi)] {
            let mut child = boxv.clone();
            child.0[idx] = half;
            self.queue.push((child, depth + 1));
        }
    }
}

/// Counts zeros inside the given boxes by exclusion, contraction, and
/// Krawczyk certificates; exhausting `max_depth` yields undecided boxes,
/// never a wrong count.
pub fn krawczyk_count(
    system: &FewnomialSystem,
    boxes: &[IntervalBox],
    max_depth: usize,
    tol: f64,
) -> Result<CountResult, CountError> {
    let compiled = Compiled::from_system(system)?;
    Ok(krawczyk_count_compiled(&compiled, boxes, max_depth, tol))
}

fn krawczyk_count_compiled(
    compiled: &Compiled,
    boxes: &[IntervalBox],
    max_depth: usize,
    tol: f64,
) -> CountResult {
    let mut counter = Counter {
        compiled,
        max_depth,
        tol,
        queue: boxes.iter().map(|b| (b.clone(), 0)).collect(),
        certificates: Vec::new(),
        undecided: Vec::new(),
        processed: 0,
    };
    while let Some((boxv, depth)) = counter.queue.pop() {
        counter.process(boxv, depth);
    }
    finalize(counter)
}

fn finalize(counter: Counter) -> CountResult {
    let tol = counter.tol;
    let certs = counter.certificates;
    // Cluster overlapping certificates: adjacent inflated boxes can certify
    // the same zero. Within a cluster, distinct polished points mean
    // distinct zeros.
    let mut cluster_of: Vec<usize> = (0..certs.len()).collect();
    fn find(c: &mut Vec<usize>, i: usize) -> usize {
        if c[i] != i {
            let r = find(c, c[i]);
            c[i] = r;
            r
        } else {
            i
        }
    }
    for i in 0..certs.len() {
        for j in i + 1..certs.len() {
            if certs[i].0.intersects(&certs[j].0) {
                let (a, b) = (find(&mut cluster_of, i), find(&mut cluster_of, j));
                if a != b {
                    cluster_of[a] = b;
                }
            }
        }
    }
    let mut zero_points: Vec<Vec<f64>> = Vec::new();
    let mut roots_seen: Vec<usize> = Vec::new();
    for i in 0..certs.len() {
        let root = find(&mut cluster_of, i);
        let is_new_cluster = !roots_seen.contains(&root);
        if is_new_cluster {
            roots_seen.push(root);
        }
        let z = &certs[i].1;
        let dup = zero_points.iter().any(|p| {
            p.iter()
                .zip(z)
                .all(|(a, b)| (a - b).abs() <= 1e-7 * (1.0 + a.abs()))
        });
        if is_new_cluster || !dup {
            if !dup {
                zero_points.push(z.clone());
            }
        }
    }
    let count = zero_points.len();
    // Undecided boxes wholly inside a certificate cover no new zero: the
    // certificate already pins the unique zero of that region.
    let undecided: Vec<IntervalBox> = counter
        .undecided
        .into_iter()
        .filter(|u| !certs.iter().any(|(c, _)| c.contains_box(u)))
        .collect();
    let _ = tol;
    CountResult {
        count,
        certified: undecided.is_empty(),
        undecided_boxes: undecided,
        zero_points,
    }
}

/// Univariate counter: same contract as the general one, with the scalar
/// monotonicity shortcut, plus an exact sign-variation fallback for
/// integer exponents when intervals leave boxes undecided.
pub fn count_univariate(system: &FewnomialSystem, tol: f64) -> Result<CountResult, CountError> {
    let compiled = Compiled::from_system(system)?;
    assert_eq!(compiled.n, 1, "count_univariate requires n = 1");
    let boxes = truncation_region_compiled(&compiled)?;
    let result = krawczyk_count_compiled(&compiled, &boxes, DEFAULT_MAX_DEPTH, tol);
    if result.certified {
        return Ok(result);
    }
    if let Some(isolations) = exact_univariate_isolations(&compiled) {
        let zero_points = isolations
            .iter()
            .map(|(lo, hi)| {
                let m = 0.5 * (crate::scalar::Scalar::to_f64(lo) + crate::scalar::Scalar::to_f64(hi));
                vec![m.max(f64::MIN_POSITIVE).ln()]
            })
            .collect::<Vec<_>>();
        return Ok(CountResult {
            count: isolations.len(),
            certified: true,
            undecided_boxes: Vec::new(),
            zero_points,
        });
    }
    Ok(result)
}

fn exact_univariate_isolations(compiled: &Compiled) -> Option<Vec<descartes::Isolation>> {
    let eq = &compiled.equations[0];
    let mut exps = Vec::with_capacity(eq.exps.len());
    for e in &eq.exps {
        let x = e[0];
        let r = x.round();
        if (x - r).abs() > 1e-9 || r.abs() > 1e15 {
            return None;
        }
        exps.push(r as i64);
    }
    let coeffs: Vec<BigRational> = eq
        .coeffs
        .iter()
        .map(|&c| BigRational::from_float(c))
        .collect::<Option<Vec<_>>>()?;
    descartes::isolate_positive_roots(&coeffs, &exps, 20_000)
}

/// Certified count of zeros in the open positive orthant (via `y = ln x`).
///
/// Span-deficient supports surface as `UnboundedRegion`; by the almost-sure
/// emptiness of such systems the caller may treat that trial as zero.
pub fn count_positive_zeros(
    system: &FewnomialSystem,
    tol: f64,
) -> Result<CountResult, CountError> {
    let compiled = Compiled::from_system(system)?;
    if compiled.has_single_term_equation() {
        return Ok(CountResult::empty_certified());
    }
    if compiled.n == 1 {
        return count_univariate(system, tol);
    }
    let boxes = truncation_region_compiled(&compiled)?;
    Ok(krawczyk_count_compiled(&compiled, &boxes, DEFAULT_MAX_DEPTH, tol))
}

/// Multistart zero search: damped Newton from random starts, each
/// convergent candidate certified by a Krawczyk test on a small box.
///
/// Sound but not exhaustive: the returned zeros are real (each carries a
/// certificate), but absence of output does not prove emptiness. Intended
/// for presence statistics on systems too large for the full sweep.
pub fn search_zeros_multistart<R: Rng>(
    system: &FewnomialSystem,
    attempts: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>, CountError> {
    let compiled = Compiled::from_system(system)?;
    if compiled.has_single_term_equation() {
        return Ok(Vec::new());
    }
    let n = compiled.n;
    let mut w_scale: f64 = 1.0;
    for eq in &compiled.equations {
        for c in &eq.coeffs {
            w_scale = w_scale.max(c.abs().ln().abs());
        }
    }
    let sigma = 1.5 + w_scale;
    let counter = Counter {
        compiled: &compiled,
        max_depth: DEFAULT_MAX_DEPTH,
        tol: DEFAULT_TOL,
        queue: Vec::new(),
        certificates: Vec::new(),
        undecided: Vec::new(),
        processed: 0,
    };
    let mut found: Vec<Vec<f64>> = Vec::new();
    for _ in 0..attempts {
        let start: Vec<f64> = (0..n)
            .map(|_| sigma * crate::random_systems::standard_normal(rng))
            .collect();
        let z = counter.polish(&start);
        if !z.iter().all(|v| v.is_finite()) {
            continue;
        }
        let (g, _) = compiled.eval_scaled(&z);
        if g.iter().any(|v| v.abs() > 1e-8) {
            continue;
        }
        if found
            .iter()
            .any(|p| p.iter().zip(&z).all(|(a, b)| (a - b).abs() <= 1e-6 * (1.0 + a.abs())))
        {
            continue;
        }
        // Certify in a small box around the candidate.
        let mut certified = false;
        for h in [1e-6, 1e-4] {
            let boxv = IntervalBox(
                z.iter()
                    .map(|&v| Interval::new(v - h * (1.0 + v.abs()), v + h * (1.0 + v.abs())))
                    .collect(),
            );
            if let Some(region) = counter.krawczyk_region(&boxv) {
                if region
                    .0
                    .iter()
                    .zip(&boxv.0)
                    .all(|(k_i, x_i)| k_i.inside_interior(x_i))
                {
                    certified = true;
                    break;
                }
            }
        }
        if certified {
            found.push(z);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{EquationSpec, Exponent, SystemSpec};
    use crate::random_systems::{sample_binomial, RngStream};

    fn univariate(coeffs: &[f64], exps: &[i64]) -> FewnomialSystem {
        let spec = SystemSpec::new(
            1,
            vec![EquationSpec {
                support: exps.iter().map(|&e| vec![Exponent::from_i64(e)]).collect(),
                variances: vec![1.0; exps.len()],
            }],
        )
        .unwrap();
        FewnomialSystem {
            spec,
            coefficients: vec![coeffs.to_vec()],
        }
    }

    #[test]
    fn binomial_region_degenerates_to_the_zero() {
        // 1 - e^y: slab width ln 1 = 0, the box pinches onto y = 0.
        let sys = univariate(&[1.0, -1.0], &[0, 1]);
        let boxes = truncation_region(&sys).unwrap();
        assert!(!boxes.is_empty());
        assert!(boxes.iter().any(|b| b.contains(&[0.0])));
        for b in &boxes {
            assert!(b.0[0].width() < 1e-5);
        }
    }

    #[test]
    fn trinomial_region_contains_both_zeros() {
        // 1 - 3 e^y + e^{2y} = 0 at y = ln((3 +- sqrt 5)/2).
        let sys = univariate(&[1.0, -3.0, 1.0], &[0, 1, 2]);
        let boxes = truncation_region(&sys).unwrap();
        let z1 = ((3.0 - 5f64.sqrt()) / 2.0).ln();
        let z2 = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(boxes.iter().any(|b| b.contains(&[z1])));
        assert!(boxes.iter().any(|b| b.contains(&[z2])));
    }

    #[test]
    fn simple_univariate_counts() {
        let cases: Vec<(FewnomialSystem, usize)> = vec![
            (univariate(&[1.0, -1.0], &[0, 1]), 1),
            (univariate(&[1.0, 1.0], &[0, 1]), 0),
            (univariate(&[2.0, -3.0, 1.0], &[0, 1, 2]), 2),
            (univariate(&[1.0, 1.0], &[0, 7]), 0),
            (univariate(&[1.0, -1.0], &[0, 7]), 1),
        ];
        for (sys, expect) in cases {
            let r = count_positive_zeros(&sys, DEFAULT_TOL).unwrap();
            assert!(r.certified, "uncertified count for {:?}", sys.coefficients);
            assert_eq!(r.count, expect, "coeffs {:?}", sys.coefficients);
        }
    }

    #[test]
    fn certified_zero_location_is_accurate() {
        let sys = univariate(&[1.0, -1.0], &[0, 1]);
        let r = count_positive_zeros(&sys, DEFAULT_TOL).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.zero_points[0][0].abs() < 1e-9);
    }

    #[test]
    fn span_deficient_supports_report_unbounded() {
        // Two equations in two variables supported on a common line.
        let spec = SystemSpec::new(
            2,
            vec![
                EquationSpec {
                    support: vec![
                        vec![Exponent::from_i64(0), Exponent::from_i64(0)],
                        vec![Exponent::from_i64(1), Exponent::from_i64(0)],
                    ],
                    variances: vec![1.0; 2],
                },
                EquationSpec {
                    support: vec![
                        vec![Exponent::from_i64(0), Exponent::from_i64(0)],
                        vec![Exponent::from_i64(2), Exponent::from_i64(0)],
                    ],
                    variances: vec![1.0; 2],
                },
            ],
        )
        .unwrap();
        let sys = FewnomialSystem {
            spec,
            coefficients: vec![vec![1.0, -1.0], vec![1.0, -2.0]],
        };
        assert!(matches!(
            count_positive_zeros(&sys, DEFAULT_TOL),
            Err(CountError::UnboundedRegion)
        ));
    }

    #[test]
    fn single_monomial_equation_counts_zero() {
        let spec = SystemSpec::new(
            2,
            vec![
                EquationSpec {
                    support: vec![vec![Exponent::from_i64(1), Exponent::from_i64(0)]],
                    variances: vec![1.0],
                },
                EquationSpec {
                    support: vec![
                        vec![Exponent::from_i64(0), Exponent::from_i64(0)],
                        vec![Exponent::from_i64(0), Exponent::from_i64(1)],
                    ],
                    variances: vec![1.0; 2],
                },
            ],
        )
        .unwrap();
        let sys = FewnomialSystem {
            spec,
            coefficients: vec![vec![0.7], vec![1.0, -1.0]],
        };
        let r = count_positive_zeros(&sys, DEFAULT_TOL).unwrap();
        assert!(r.certified);
        assert_eq!(r.count, 0);
    }

    fn binomial_pair_system(a: [f64; 2], b: [f64; 2]) -> FewnomialSystem {
        let spec = SystemSpec::new(
            2,
            vec![
                EquationSpec {
                    support: vec![
                        vec![Exponent::from_i64(1), Exponent::from_i64(0)],
                        vec![Exponent::from_i64(0), Exponent::from_i64(0)],
                    ],
                    variances: vec![1.0; 2],
                },
                EquationSpec {
                    support: vec![
                        vec![Exponent::from_i64(0), Exponent::from_i64(1)],
                        vec![Exponent::from_i64(0), Exponent::from_i64(0)],
                    ],
                    variances: vec![1.0; 2],
                },
            ],
        )
        .unwrap();
        FewnomialSystem {
            spec,
            coefficients: vec![vec![a[0], b[0]], vec![a[1], b[1]]],
        }
    }

    #[test]
    fn bivariate_binomials_match_exact_solver() {
        let stream = RngStream::new(123);
        let mut disagreements = 0;
        for i in 0..400 {
            let mut rng = stream.stream(i);
            let sys = sample_binomial(
                vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                vec![0.0, 0.0],
                &mut rng,
            );
            let exact = binomial_solve(&sys);
            let fs = binomial_pair_system(
                [sys.a[0], sys.a[1]],
                [sys.b[0], sys.b[1]],
            );
            let counted = count_positive_zeros(&fs, DEFAULT_TOL).unwrap();
            assert!(counted.certified, "trial {i} uncertified");
            // binomial_solve counts inside B only; a solution outside B is
            // still a positive-orthant zero, so compare existence.
            let exists = sys.a.iter().zip(&sys.b).all(|(x, y)| x.signum() != y.signum());
            if counted.count != usize::from(exists) {
                disagreements += 1;
            }
            let _ = exact;
        }
        assert_eq!(disagreements, 0);
    }

    use crate::random_systems::binomial_solve;

    #[test]
    fn product_systems_multiply_univariate_counts() {
        // g_k(y) = h_k(y_k): zeros are the grid of univariate zeros.
        let spec = SystemSpec::new(
            2,
            vec![
                EquationSpec {
                    support: vec![
                        vec![Exponent::from_i64(0), Exponent::from_i64(0)],
                        vec![Exponent::from_i64(1), Exponent::from_i64(0)],
                        vec![Exponent::from_i64(2), Exponent::from_i64(0)],
                    ],
                    variances: vec![1.0; 3],
                },
                EquationSpec {
                    support: vec![
                        vec![Exponent::from_i64(0), Exponent::from_i64(0)],
                        vec![Exponent::from_i64(0), Exponent::from_i64(1)],
                    ],
                    variances: vec![1.0; 2],
                },
            ],
        )
        .unwrap();
        let sys = FewnomialSystem {
            spec,
            coefficients: vec![vec![2.0, -3.0, 1.0], vec![1.0, -1.0]],
        };
        let r = count_positive_zeros(&sys, DEFAULT_TOL).unwrap();
        assert!(r.certified);
        assert_eq!(r.count, 2); // two roots of the quadratic times one

        let u1 = count_positive_zeros(&univariate(&[2.0, -3.0, 1.0], &[0, 1, 2]), DEFAULT_TOL)
            .unwrap();
        let u2 = count_positive_zeros(&univariate(&[1.0, -1.0], &[0, 1]), DEFAULT_TOL).unwrap();
        assert_eq!(r.count, u1.count * u2.count);
    }

    #[test]
    fn monotone_refinement_no_flips() {
        let sys = univariate(&[1.0, -3.0, 1.0], &[0, 1, 2]);
        let boxes = truncation_region(&sys).unwrap();
        let shallow = krawczyk_count(&sys, &boxes, 12, DEFAULT_TOL).unwrap();
        let deep = krawczyk_count(&sys, &boxes, 40, DEFAULT_TOL).unwrap();
        assert!(deep.count >= shallow.count);
        if shallow.certified {
            assert_eq!(shallow.count, deep.count);
            assert!(deep.certified);
        }
    }

    #[test]
    fn multistart_finds_known_zeros() {
        let sys = univariate(&[2.0, -3.0, 1.0], &[0, 1, 2]);
        let stream = RngStream::new(4);
        let zeros = search_zeros_multistart(&sys, 60, &mut stream.stream(0)).unwrap();
        assert_eq!(zeros.len(), 2);
    }
}

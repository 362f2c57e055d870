//! Closed-form expectation bounds and their side conditions.
//!
//! The headline quantity is `4^{-n} * V * prod(t_k - 1)` where `V` counts
//! vertices of the Minkowski sum of the variance-lifted envelopes; the
//! remaining bounds are specializations (unit variances, unmixed supports,
//! circuits) or the projective-volume variants.

use crate::geometry::{
    self, enumerate_full_cells, envelope_vertices, minkowski_sum_vertex_count,
    polytope_vertex_count, GeometryError, Lifting, Support,
};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Relative tolerance for the VM equality checks in float mode.
pub const VM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("q = {q} exceeds n = {n}")]
    BadCodimension { q: usize, n: usize },
    #[error("support size {t} below n + 1 = {min} required by the volume bound")]
    SupportTooSmall { t: usize, min: usize },
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("system must have at least one equation and n >= 1")]
    Empty,
    #[error("equation {equation}: exponent {index} has wrong dimension")]
    BadDimension { equation: usize, index: usize },
    #[error("equation {equation}: variance list has {got} entries, support has {expected}")]
    VarianceMismatch {
        equation: usize,
        got: usize,
        expected: usize,
    },
    #[error("equation {equation}: variance {index} is not strictly positive")]
    NonPositiveVariance { equation: usize, index: usize },
    #[error("equation {equation}: {source}")]
    BadSupport {
        equation: usize,
        source: GeometryError,
    },
    #[error("cannot parse exponent entry `{0}`")]
    BadExponent(String),
}

/// An exponent entry: exact rational when the input permits, float otherwise.
/// Rational inputs keep the exact geometry mode reachable.
#[derive(Debug, Clone, PartialEq)]
pub enum Exponent {
    Rational(BigRational),
    Real(f64),
}

impl Exponent {
    pub fn from_i64(v: i64) -> Self {
        Exponent::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Rational(r) => Scalar::to_f64(r),
            Exponent::Real(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Exponent::Rational(r) => Some(r),
            Exponent::Real(_) => None,
        }
    }

    /// Accepts integers, `p/q` fractions and plain decimal strings.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let s = text.trim();
        let bad = || SpecError::BadExponent(text.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let num: BigInt = p.trim().parse().map_err(|_| bad())?;
            let den: BigInt = q.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            return Ok(Exponent::Rational(BigRational::new(num, den)));
        }
        if let Ok(i) = s.parse::<BigInt>() {
            return Ok(Exponent::Rational(BigRational::from_integer(i)));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            if frac.chars().all(|c| c.is_ascii_digit()) && !frac.is_empty() {
                let negative = whole.trim_start().starts_with('-');
                let whole_int: BigInt = if whole.is_empty() || whole == "-" {
                    BigInt::zero()
                } else {
                    whole.parse().map_err(|_| bad())?
                };
                let frac_int: BigInt = frac.parse().map_err(|_| bad())?;
                let den = BigInt::from(10u32).pow(frac.len() as u32);
                let mut r = BigRational::new(whole_int.magnitude().clone().into(), BigInt::one())
                    + BigRational::new(frac_int, den);
                if negative {
                    r = -r;
                }
                return Ok(Exponent::Rational(r));
            }
        }
        s.parse::<f64>()
            .map(Exponent::Real)
            .map_err(|_| bad())
    }
}

impl Serialize for Exponent {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        match self {
            Exponent::Rational(r) => {
                if r.is_integer() && r.numer().magnitude().bits() < 63 {
                    serializer.serialize_i64(Scalar::to_f64(r) as i64)
                } else {
                    serializer.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
                }
            }
            Exponent::Real(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExpVisitor;
        impl Visitor<'_> for ExpVisitor {
            type Value = Exponent;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a number or a rational string like \"3/2\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exponent, E> {
                Ok(Exponent::from_i64(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exponent, E> {
                Ok(Exponent::Rational(BigRational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exponent, E> {
                Ok(Exponent::Real(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exponent, E> {
                Exponent::parse(v).map_err(|e| E::custom(e.to_string()))
            }
        }
        deserializer.deserialize_any(ExpVisitor)
    }
}

/// One equation: a support plus the per-monomial Gaussian variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationSpec {
    pub support: Vec<Vec<Exponent>>,
    pub variances: Vec<f64>,
}

/// A random fewnomial system shape: dimension and one equation per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub n: usize,
    pub equations: Vec<EquationSpec>,
}

impl SystemSpec {
    pub fn new(n: usize, equations: Vec<EquationSpec>) -> Result<Self, SpecError> {
        let spec = SystemSpec { n, equations };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.n == 0 || self.equations.is_empty() {
            return Err(SpecError::Empty);
        }
        for (k, eq) in self.equations.iter().enumerate() {
            for (i, e) in eq.support.iter().enumerate() {
                if e.len() != self.n {
                    return Err(SpecError::BadDimension {
                        equation: k,
                        index: i,
                    });
                }
            }
            if eq.variances.len() != eq.support.len() {
                return Err(SpecError::VarianceMismatch {
                    equation: k,
                    got: eq.variances.len(),
                    expected: eq.support.len(),
                });
            }
            for (i, v) in eq.variances.iter().enumerate() {
                if !(*v > 0.0) || !v.is_finite() {
                    return Err(SpecError::NonPositiveVariance {
                        equation: k,
                        index: i,
                    });
                }
            }
            // Distinctness and shape checks ride on the Support constructor.
            self.support_f64(k)
                .map_err(|source| SpecError::BadSupport {
                    equation: k,
                    source,
                })?;
        }
        Ok(())
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.equations.iter().map(|e| e.support.len()).collect()
    }

    pub fn support_f64(&self, k: usize) -> Result<Support<f64>, GeometryError> {
        Support::new(
            self.n,
            self.equations[k]
                .support
                .iter()
                .map(|e| e.iter().map(Exponent::to_f64).collect())
                .collect(),
        )
    }

    pub fn supports_f64(&self) -> Result<Vec<Support<f64>>, GeometryError> {
        (0..self.equations.len()).map(|k| self.support_f64(k)).collect()
    }

    /// Exact supports, available only when every exponent is rational.
    pub fn supports_exact(&self) -> Option<Vec<Support<BigRational>>> {
        let mut out = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            let mut exps = Vec::with_capacity(eq.support.len());
            for e in &eq.support {
                let mut row = Vec::with_capacity(e.len());
                for x in e {
                    row.push(x.as_rational()?.clone());
                }
                exps.push(row);
            }
            out.push(Support::new(self.n, exps).ok()?);
        }
        Some(out)
    }

    pub fn unit_variances(&self) -> bool {
        self.equations
            .iter()
            .all(|e| e.variances.iter().all(|&v| v == 1.0))
    }
}

/// Lifting functions from variances: one half the log of each variance.
pub fn lifting_from_variances(spec: &SystemSpec) -> Vec<Lifting<f64>> {
    spec.equations
        .iter()
        .map(|eq| Lifting::new(eq.variances.iter().map(|v| 0.5 * v.ln()).collect()))
        .collect()
}

/// `4^{-n} prod t_k (t_k - 1)`: no variance restrictions at all.
pub fn bound_kushnirenko(sizes: &[usize], n: usize) -> f64 {
    let mut value = 0.25f64.powi(n as i32);
    for &t in sizes {
        value *= (t * (t.saturating_sub(1))) as f64;
    }
    value
}

/// The general lifted bound `4^{-n} V prod(t_k - 1)` together with the
/// Minkowski vertex count `V` it used. Runs the exact geometry mode when
/// the spec is rational with unit variances, float mode otherwise.
pub fn bound_lifted(spec: &SystemSpec, tol: f64) -> Result<(f64, usize), BoundsError> {
    let v = lifted_vertex_count(spec, tol)?;
    let mut value = 0.25f64.powi(spec.n as i32) * v as f64;
    for t in spec.sizes() {
        value *= (t - 1) as f64;
    }
    Ok((value, v))
}

fn lifted_vertex_count(spec: &SystemSpec, tol: f64) -> Result<usize, BoundsError> {
    if spec.unit_variances() {
        if let Some(supports) = spec.supports_exact() {
            let liftings: Vec<_> = supports.iter().map(|s| Lifting::zeros(s.len())).collect();
            return Ok(minkowski_sum_vertex_count(
                &supports,
                &liftings,
                &BigRational::zero(),
            )?);
        }
    }
    let supports = spec.supports_f64()?;
    let liftings = lifting_from_variances(spec);
    Ok(minkowski_sum_vertex_count(&supports, &liftings, &tol)?)
}

/// Variance-restriction check per equation: all variances at most one, and
/// exactly one on every vertex of the support's convex hull.
pub fn check_vm(spec: &SystemSpec, tol: f64) -> Result<Vec<bool>, BoundsError> {
    let mut out = Vec::with_capacity(spec.equations.len());
    for (k, eq) in spec.equations.iter().enumerate() {
        let hull_vertices: Vec<usize> = match spec.supports_exact() {
            Some(supports) => {
                envelope_vertices(
                    &supports[k],
                    &Lifting::zeros(supports[k].len()),
                    &BigRational::zero(),
                )?
                .vertex_indices
            }
            None => {
                let s = spec.support_f64(k)?;
                envelope_vertices(&s, &Lifting::zeros(s.len()), &1e-9)?.vertex_indices
            }
        };
        let all_below = eq.variances.iter().all(|&v| v <= 1.0 + tol);
        let vertices_unit = hull_vertices
            .iter()
            .all(|&i| (eq.variances[i] - 1.0).abs() <= tol);
        out.push(all_below && vertices_unit);
    }
    Ok(out)
}

/// Unit-variance specialization: vertex count of the Minkowski sum of the
/// convex hulls. `None` when the VM conditions fail.
pub fn bound_polytope(spec: &SystemSpec, tol: f64) -> Result<Option<f64>, BoundsError> {
    if !check_vm(spec, VM_TOL)?.iter().all(|&ok| ok) {
        return Ok(None);
    }
    let v = match spec.supports_exact() {
        Some(supports) => {
            let liftings: Vec<_> = supports.iter().map(|s| Lifting::zeros(s.len())).collect();
            minkowski_sum_vertex_count(&supports, &liftings, &BigRational::zero())?
        }
        None => {
            let supports = spec.supports_f64()?;
            let liftings: Vec<_> = supports.iter().map(|s| Lifting::zeros(s.len())).collect();
            minkowski_sum_vertex_count(&supports, &liftings, &tol)?
        }
    };
    let mut value = 0.25f64.powi(spec.n as i32) * v as f64;
    for t in spec.sizes() {
        value *= (t - 1) as f64;
    }
    Ok(Some(value))
}

/// Status of the Minkowski-sum dilation condition behind the unmixed bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MvStatus {
    /// One of the two sufficient variance structures holds.
    Satisfied,
    /// A full-dimensional cell with a non-diagonal label exists.
    Violated,
    /// All full-dimensional cells are diagonal but no sufficient case applies.
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnmixedBound {
    pub value: f64,
    pub envelope_vertex_count: usize,
    pub mv: MvStatus,
}

#[derive(Debug, Clone)]
pub enum UnmixedOutcome {
    Applicable(UnmixedBound),
    NotUnmixed,
    MvViolated,
}

/// Matches equation `k`'s support onto equation 0's, returning the index
/// permutation, or `None` when the supports differ as sets.
fn support_permutation(spec: &SystemSpec, k: usize) -> Option<Vec<usize>> {
    let base = &spec.equations[0].support;
    let other = &spec.equations[k].support;
    if base.len() != other.len() {
        return None;
    }
    let eq = |a: &[Exponent], b: &[Exponent]| -> bool {
        a.iter()
            .zip(b)
            .all(|(x, y)| Scalar::coords_equal(&x.to_f64(), &y.to_f64()))
    };
    let mut perm = Vec::with_capacity(base.len());
    for e in other {
        let pos = base.iter().position(|b| eq(b, e))?;
        if perm.contains(&pos) {
            return None;
        }
        perm.push(pos);
    }
    Some(perm)
}

/// The unmixed bound `(n+1) 4^{-n} C(V, n+1)`.
///
/// Applies under either sufficient variance structure (equal variance
/// vectors, or VM); otherwise the diagonal-cell necessary check runs and a
/// passing instance is reported with `MvStatus::Undetermined` rather than
/// silently claimed.
pub fn bound_unmixed(spec: &SystemSpec, tol: f64) -> Result<UnmixedOutcome, BoundsError> {
    let n = spec.n;
    let mut perms = Vec::with_capacity(spec.equations.len());
    for k in 0..spec.equations.len() {
        match support_permutation(spec, k) {
            Some(p) => perms.push(p),
            None => return Ok(UnmixedOutcome::NotUnmixed),
        }
    }

    // Case one: all variance vectors equal after index alignment.
    let base_var = &spec.equations[0].variances;
    let equal_variances = spec.equations.iter().enumerate().all(|(k, eq)| {
        eq.variances
            .iter()
            .enumerate()
            .all(|(i, &v)| (v - base_var[perms[k][i]]).abs() <= VM_TOL * base_var[perms[k][i]])
    });
    if equal_variances {
        let v = unmixed_envelope_count(spec, tol, false)?;
        return Ok(UnmixedOutcome::Applicable(UnmixedBound {
            value: unmixed_value(n, v),
            envelope_vertex_count: v,
            mv: MvStatus::Satisfied,
        }));
    }

    // Case two: VM conditions give the zero lifting.
    if check_vm(spec, VM_TOL)?.iter().all(|&ok| ok) {
        let v = unmixed_envelope_count(spec, tol, true)?;
        return Ok(UnmixedOutcome::Applicable(UnmixedBound {
            value: unmixed_value(n, v),
            envelope_vertex_count: v,
            mv: MvStatus::Satisfied,
        }));
    }

    // Necessary check: every full-dimensional cell label must be diagonal.
    let supports = spec.supports_f64()?;
    let liftings = lifting_from_variances(spec);
    let cells = enumerate_full_cells(&supports, &liftings, &tol)?;
    let diagonal = cells.iter().all(|c| {
        let mapped: Vec<usize> = c.label.0.iter().enumerate().map(|(k, &i)| perms[k][i]).collect();
        mapped.iter().all(|&i| i == mapped[0])
    });
    if !diagonal {
        return Ok(UnmixedOutcome::MvViolated);
    }
    Ok(UnmixedOutcome::Applicable(UnmixedBound {
        value: unmixed_value(n, cells.len()),
        envelope_vertex_count: cells.len(),
        mv: MvStatus::Undetermined,
    }))
}

fn unmixed_envelope_count(
    spec: &SystemSpec,
    tol: f64,
    zero_lifting: bool,
) -> Result<usize, BoundsError> {
    if zero_lifting || spec.unit_variances() {
        if let Some(supports) = spec.supports_exact() {
            return Ok(polytope_vertex_count(&supports[0], &BigRational::zero())?);
        }
        let s = spec.support_f64(0)?;
        return Ok(polytope_vertex_count(&s, &tol)?);
    }
    let s = spec.support_f64(0)?;
    let lifting = lifting_from_variances(spec).swap_remove(0);
    Ok(envelope_vertices(&s, &lifting, &tol)?.vertex_indices.len())
}

fn unmixed_value(n: usize, v: usize) -> f64 {
    (n as f64 + 1.0) * 0.25f64.powi(n as i32) * binomial(v, n + 1)
}

/// Binomial coefficient as a float (sizes here are tiny).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut value = 1.0;
    for i in 0..k {
        value *= (n - i) as f64 / (k - i) as f64;
    }
    value
}

/// Probability bound for circuits and small-codimension supports:
/// `min(1, l (n+1)^l / 4^n)`.
pub fn prob_bound_circuit(ell: u32, n: u32) -> f64 {
    let raw = ell as f64 * ((n + 1) as f64).powi(ell as i32) / 4f64.powi(n as i32);
    raw.min(1.0)
}

/// Riemannian volume of real projective k-space: half the k-sphere.
pub fn projective_volume(k: usize) -> f64 {
    // pi^{(k+1)/2} / Gamma((k+1)/2), split by parity to stay exact in the
    // cases the acceptance values pin down.
    let a = k + 1;
    if a % 2 == 0 {
        let m = a / 2;
        let mut gamma = 1.0; // (m-1)!
        for j in 2..m {
            gamma *= j as f64;
        }
        std::f64::consts::PI.powi(m as i32) / gamma
    } else {
        let m = a / 2;
        // Gamma(m + 1/2) = sqrt(pi) * prod_{j=1..m} (j - 1/2); the sqrt(pi)
        // cancels against the half power of pi in the numerator.
        let mut denom = 1.0;
        for j in 1..=m {
            denom *= j as f64 - 0.5;
        }
        std::f64::consts::PI.powi(m as i32) / denom
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeBound {
    pub value: f64,
    /// The edge case `q = n` is evaluated verbatim but flagged: the
    /// normalization there disagrees with direct counting, so the value
    /// should not be asserted as a bound.
    pub q_equals_n_warning: bool,
}

/// Degree-free volume bound for random projective fewnomial varieties.
pub fn volume_bound_fewnomial(
    sizes: &[usize],
    n: usize,
    q: usize,
) -> Result<VolumeBound, BoundsError> {
    if q > n {
        return Err(BoundsError::BadCodimension { q, n });
    }
    for &t in sizes {
        if t < n + 1 {
            return Err(BoundsError::SupportTooSmall { t, min: n + 1 });
        }
    }
    let ratio = projective_volume(n - q) / projective_volume(n);
    let mut value = ratio * ((n * (n + 1)) as f64).powi((n - q) as i32) / 2f64.powi(n as i32);
    for &t in sizes {
        value *= (t * (t - 1)) as f64;
    }
    Ok(VolumeBound {
        value,
        q_equals_n_warning: q == n,
    })
}

/// Shub-Smale volume of a random KSS system: volume ratio times the square
/// root of the degree product.
pub fn volume_shub_smale(degrees: &[usize], n: usize, q: usize) -> Result<f64, BoundsError> {
    if q > n {
        return Err(BoundsError::BadCodimension { q, n });
    }
    let ratio = projective_volume(n - q) / projective_volume(n);
    let prod: f64 = degrees.iter().map(|&d| d as f64).product();
    Ok(ratio * prod.sqrt())
}

/// All bounds for one spec, with applicability notes.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub kushnirenko: f64,
    pub lifted: f64,
    pub lifted_vertex_count: usize,
    pub polytope: Option<f64>,
    pub unmixed: Option<f64>,
    pub notes: Vec<String>,
}

pub fn bound_report(spec: &SystemSpec, tol: f64) -> Result<BoundReport, BoundsError> {
    let sizes = spec.sizes();
    let kushnirenko = bound_kushnirenko(&sizes, spec.n);
    let (lifted, v) = bound_lifted(spec, tol)?;
    let mut notes = Vec::new();
    let polytope = bound_polytope(spec, tol)?;
    if polytope.is_none() {
        notes.push("polytope bound inapplicable: VM conditions violated".to_string());
    }
    let unmixed = match bound_unmixed(spec, tol)? {
        UnmixedOutcome::Applicable(b) => {
            if b.mv == MvStatus::Undetermined {
                notes.push(
                    "unmixed bound reported with MV undetermined: diagonal check passed but no sufficient variance case applies".to_string(),
                );
            }
            Some(b.value)
        }
        UnmixedOutcome::NotUnmixed => {
            notes.push("unmixed bound inapplicable: supports differ".to_string());
            None
        }
        UnmixedOutcome::MvViolated => {
            notes.push("unmixed bound inapplicable: MV violated (non-diagonal cell)".to_string());
            None
        }
    };
    Ok(BoundReport {
        kushnirenko,
        lifted,
        lifted_vertex_count: v,
        polytope,
        unmixed,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn spec_from_ints(n: usize, eqs: &[(&[&[i64]], &[f64])]) -> SystemSpec {
        SystemSpec::new(
            n,
            eqs.iter()
                .map(|(support, variances)| EquationSpec {
                    support: support
                        .iter()
                        .map(|e| e.iter().map(|&x| Exponent::from_i64(x)).collect())
                        .collect(),
                    variances: variances.to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    fn binomial_pair() -> SystemSpec {
        spec_from_ints(
            2,
            &[
                (&[&[0, 0], &[1, 0]], &[1.0, 1.0]),
                (&[&[0, 0], &[0, 1]], &[1.0, 1.0]),
            ],
        )
    }

    #[test]
    fn kushnirenko_values() {
        assert!((bound_kushnirenko(&[3, 3], 2) - 2.25).abs() < 1e-15);
        assert!((bound_kushnirenko(&[2], 1) - 0.5).abs() < 1e-15);
        assert_eq!(bound_kushnirenko(&[1, 4], 2), 0.0);
    }

    #[test]
    fn lifting_values() {
        let spec = spec_from_ints(1, &[(&[&[0], &[1], &[2]], &[1.0, std::f64::consts::E.powi(2), 4.0])]);
        let lifts = lifting_from_variances(&spec);
        let v = lifts[0].values();
        assert!(v[0].abs() < 1e-15);
        assert!((v[1] - 1.0).abs() < 1e-12);
        assert!((v[2] - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lifted_bound_binomial_pair() {
        let (value, v) = bound_lifted(&binomial_pair(), 1e-9).unwrap();
        assert_eq!(v, 4);
        assert!((value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn lifted_bound_vanishes_on_monomials() {
        let spec = spec_from_ints(2, &[(&[&[1, 0]], &[1.0]), (&[&[0, 2]], &[1.0])]);
        let (value, _) = bound_lifted(&spec, 1e-9).unwrap();
        assert_eq!(value, 0.0);
    }

    #[test]
    fn vm_checks() {
        let unit = binomial_pair();
        assert!(check_vm(&unit, VM_TOL).unwrap().iter().all(|&b| b));

        // Interior exponent may have small variance.
        let interior_ok = spec_from_ints(1, &[(&[&[0], &[1], &[2]], &[1.0, 0.5, 1.0])]);
        assert!(check_vm(&interior_ok, VM_TOL).unwrap()[0]);

        let too_big = spec_from_ints(1, &[(&[&[0], &[1]], &[1.0, 1.5])]);
        assert!(!check_vm(&too_big, VM_TOL).unwrap()[0]);
        assert!(bound_polytope(&too_big, 1e-9).unwrap().is_none());
    }

    #[test]
    fn polytope_bound_values() {
        assert!((bound_polytope(&binomial_pair(), 1e-9).unwrap().unwrap() - 0.25).abs() < 1e-15);
        for t in 2..6 {
            let pts: Vec<Vec<i64>> = (0..t).map(|i| vec![i]).collect();
            let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
            let spec = spec_from_ints(1, &[(&refs, &vec![1.0; t as usize])]);
            let b = bound_polytope(&spec, 1e-9).unwrap().unwrap();
            assert!((b - (t as f64 - 1.0) / 2.0).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn unmixed_bound_values() {
        // t = 5, n = 2, unit variances: 3 C(5,3) / 16.
        let support: Vec<Vec<i64>> =
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 2], vec![1, 3]];
        let refs: Vec<&[i64]> = support.iter().map(|p| p.as_slice()).collect();
        let spec = spec_from_ints(2, &[(&refs, &[1.0; 5]), (&refs, &[1.0; 5])]);
        match bound_unmixed(&spec, 1e-9).unwrap() {
            UnmixedOutcome::Applicable(b) => {
                assert_eq!(b.envelope_vertex_count, 5);
                assert!((b.value - 1.875).abs() < 1e-12);
                assert_eq!(b.mv, MvStatus::Satisfied);
            }
            other => panic!("expected applicable, got {other:?}"),
        }

        // t = n + 1 gives (n+1)/4^n.
        let simplex = spec_from_ints(
            2,
            &[
                (&[&[0, 0], &[1, 0], &[0, 1]], &[1.0; 3]),
                (&[&[0, 0], &[1, 0], &[0, 1]], &[1.0; 3]),
            ],
        );
        match bound_unmixed(&simplex, 1e-9).unwrap() {
            UnmixedOutcome::Applicable(b) => assert!((b.value - 3.0 / 16.0).abs() < 1e-15),
            other => panic!("expected applicable, got {other:?}"),
        }

        assert!(matches!(
            bound_unmixed(&binomial_pair(), 1e-9).unwrap(),
            UnmixedOutcome::NotUnmixed
        ));
    }

    #[test]
    fn unmixed_bound_with_interior_nonvertex() {
        // Equal variance vectors with an interior lifted point: V = 3, so
        // the bound drops to 3 C(3,3) / 16.
        let refs: &[&[i64]] = &[&[0, 0], &[2, 0], &[0, 2], &[1, 1]];
        let vars = [1.0, 1.0, 1.0, 0.25];
        let spec = spec_from_ints(2, &[(refs, &vars), (refs, &vars)]);
        match bound_unmixed(&spec, 1e-9).unwrap() {
            UnmixedOutcome::Applicable(b) => {
                assert_eq!(b.envelope_vertex_count, 3);
                assert!((b.value - 3.0 / 16.0).abs() < 1e-12);
            }
            other => panic!("expected applicable, got {other:?}"),
        }
    }

    #[test]
    fn circuit_probability_values() {
        assert!((prob_bound_circuit(2, 3) - 0.5).abs() < 1e-15);
        assert_eq!(prob_bound_circuit(2, 2), 1.0);
        assert!(prob_bound_circuit(1, 40) < 1e-20);
        let mut last = f64::INFINITY;
        for n in 4..20 {
            let p = prob_bound_circuit(2, n);
            assert!(p <= last);
            last = p;
        }
    }

    #[test]
    fn projective_volumes() {
        assert!((projective_volume(0) - 1.0).abs() < 1e-12);
        assert!((projective_volume(1) - std::f64::consts::PI).abs() < 1e-12);
        assert!((projective_volume(2) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn volume_bound_values() {
        // n = q = 1, t = 2: (1/pi) (1/2) 2 = 1/pi, with the q = n warning.
        let b = volume_bound_fewnomial(&[2], 1, 1).unwrap();
        assert!((b.value - 1.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!(b.q_equals_n_warning);

        // Minimal hypersurface support recovers the degree-free constant.
        for n in 1..5usize {
            let b = volume_bound_fewnomial(&[n + 1], n, 1).unwrap();
            let ratio = projective_volume(n - 1) / projective_volume(n);
            let expect = ratio * ((n * (n + 1)) as f64 / 2.0).powi(n as i32);
            assert!((b.value - expect).abs() < 1e-9 * expect.max(1.0), "n = {n}");
            assert_eq!(b.q_equals_n_warning, n == 1);
        }

        assert!(matches!(
            volume_bound_fewnomial(&[4], 2, 3),
            Err(BoundsError::BadCodimension { .. })
        ));
    }

    #[test]
    fn shub_smale_values() {
        let r = volume_shub_smale(&[1, 1], 3, 2).unwrap();
        let ratio = projective_volume(1) / projective_volume(3);
        assert!((r - ratio).abs() < 1e-12);
        let r = volume_shub_smale(&[9], 1, 1).unwrap();
        assert!((r - 3.0 / std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn lifted_never_exceeds_kushnirenko() {
        let specs = [
            binomial_pair(),
            spec_from_ints(
                2,
                &[
                    (&[&[0, 0], &[1, 0], &[0, 1], &[2, 2]], &[1.0, 0.3, 2.0, 1.0]),
                    (&[&[0, 0], &[1, 1], &[3, 0]], &[0.5, 1.0, 4.0]),
                ],
            ),
            spec_from_ints(1, &[(&[&[0], &[2], &[5]], &[2.0, 0.1, 7.0])]),
        ];
        for spec in &specs {
            let (lifted, _) = bound_lifted(spec, 1e-9).unwrap();
            let kush = bound_kushnirenko(&spec.sizes(), spec.n);
            assert!(lifted <= kush + 1e-12);
        }
    }

    #[test]
    fn variance_scaling_leaves_lifted_bound_fixed() {
        let base = spec_from_ints(
            2,
            &[
                (&[&[0, 0], &[1, 0], &[0, 1], &[2, 2]], &[1.0, 0.3, 2.0, 1.0]),
                (&[&[0, 0], &[1, 1], &[3, 0]], &[0.5, 1.0, 4.0]),
            ],
        );
        let (b0, v0) = bound_lifted(&base, 1e-9).unwrap();
        for c in [1e-3, 1e3] {
            let mut scaled = base.clone();
            for v in &mut scaled.equations[1].variances {
                *v *= c;
            }
            let (b1, v1) = bound_lifted(&scaled, 1e-9).unwrap();
            assert_eq!(v0, v1);
            assert!((b0 - b1).abs() <= 1e-9 * b0.abs().max(1.0));
        }
    }

    #[test]
    fn unit_variances_make_lifted_equal_polytope() {
        let spec = spec_from_ints(
            2,
            &[
                (&[&[0, 0], &[1, 0], &[0, 1], &[2, 2]], &[1.0; 4]),
                (&[&[0, 0], &[1, 1], &[3, 0]], &[1.0; 3]),
            ],
        );
        let (lifted, _) = bound_lifted(&spec, 1e-9).unwrap();
        let polytope = bound_polytope(&spec, 1e-9).unwrap().unwrap();
        assert_eq!(lifted, polytope);
    }

    #[test]
    fn exponent_parsing_and_serde() {
        assert_eq!(Exponent::parse("3").unwrap(), Exponent::from_i64(3));
        assert_eq!(
            Exponent::parse("-7/2").unwrap(),
            Exponent::Rational(BigRational::new((-7).into(), 2.into()))
        );
        assert_eq!(
            Exponent::parse("0.5").unwrap(),
            Exponent::Rational(BigRational::new(1.into(), 2.into()))
        );
        assert!(Exponent::parse("x").is_err());

        let spec = binomial_pair();
        let json = serde_json::to_string(&spec).unwrap();
        let back: SystemSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn bound_report_binomial_pair() {
        let report = bound_report(&binomial_pair(), 1e-9).unwrap();
        assert!((report.lifted - 0.25).abs() < 1e-15);
        assert_eq!(report.polytope, Some(0.25));
        assert!((report.kushnirenko - 0.25).abs() < 1e-15);
        assert!(report.unmixed.is_none());
    }
}

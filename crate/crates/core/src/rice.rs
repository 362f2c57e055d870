//! Numerical evaluation of the Kac-Rice integrands and the associated
//! zero-count integrals.
//!
//! The expected number of regular zeros of a random exponential-sum system
//! is `(2 pi)^{-n/2}` times the integral of the expected absolute
//! determinant of rows `a_k^T D psi_k`, with each `a_k` standard Gaussian
//! in the orthocomplement of the normalized term vector `psi_k`. The
//! univariate case and the binomial case admit closed-form densities that
//! serve as oracles for the Monte Carlo path.

use crate::bounds::{lifting_from_variances, SystemSpec};
use crate::linalg::Matrix;
use crate::random_systems::standard_normal;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RiceError {
    #[error("operation requires a univariate support")]
    NotUnivariate,
    #[error("quadrature did not reach the requested tolerance: achieved {achieved}")]
    QuadratureNotConverged { achieved: f64 },
    #[error("support must contain at least two terms")]
    TooFewTerms,
}

/// Per-equation data of the map `psi` at a point, in scaled form: the true
/// `phi` is `exp(log_scale)` times the stored vector, so every ratio the
/// integrand needs is unaffected by the scaling.
#[derive(Debug, Clone)]
pub struct FrameEquation {
    /// Scaled term vector `exp(alpha.y + u(alpha) - log_scale)`.
    pub phi: Vec<f64>,
    /// The subtracted row maximum of `alpha.y + u(alpha)`.
    pub log_scale: f64,
    /// Euclidean norm of the scaled `phi`.
    pub norm: f64,
    /// Unit vector `phi / |phi|`.
    pub psi: Vec<f64>,
    /// Scaled derivative rows `phi_j alpha_j` (one row per term).
    pub dphi: Vec<Vec<f64>>,
    /// Exponent rows.
    pub exps: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct EvaluationFrame {
    pub y: Vec<f64>,
    pub equations: Vec<FrameEquation>,
}

impl EvaluationFrame {
    pub fn from_parts(exps: &[Vec<Vec<f64>>], liftings: &[Vec<f64>], y: &[f64]) -> Self {
        let equations = exps
            .iter()
            .zip(liftings)
            .map(|(rows, u)| {
                let dots: Vec<f64> = rows
                    .iter()
                    .zip(u)
                    .map(|(e, uu)| e.iter().zip(y).map(|(a, v)| a * v).sum::<f64>() + uu)
                    .collect();
                let m = dots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let phi: Vec<f64> = dots.iter().map(|d| (d - m).exp()).collect();
                let norm = phi.iter().map(|v| v * v).sum::<f64>().sqrt();
                let psi: Vec<f64> = phi.iter().map(|v| v / norm).collect();
                let dphi: Vec<Vec<f64>> = rows
                    .iter()
                    .zip(&phi)
                    .map(|(e, &p)| e.iter().map(|a| p * a).collect())
                    .collect();
                FrameEquation {
                    phi,
                    log_scale: m,
                    norm,
                    psi,
                    dphi,
                    exps: rows.clone(),
                }
            })
            .collect();
        EvaluationFrame {
            y: y.to_vec(),
            equations,
        }
    }

    pub fn from_spec(spec: &SystemSpec, y: &[f64]) -> Self {
        let exps: Vec<Vec<Vec<f64>>> = spec
            .equations
            .iter()
            .map(|eq| {
                eq.support
                    .iter()
                    .map(|e| e.iter().map(|x| x.to_f64()).collect())
                    .collect()
            })
            .collect();
        let liftings: Vec<Vec<f64>> = lifting_from_variances(spec)
            .into_iter()
            .map(|l| l.values().to_vec())
            .collect();
        Self::from_parts(&exps, &liftings, y)
    }
}

/// Projects a standard Gaussian draw onto the orthocomplement of a unit
/// vector, giving a standard Gaussian of that subspace.
pub fn gaussian_in_orthocomplement<R: Rng>(psi: &[f64], rng: &mut R) -> Vec<f64> {
    let g: Vec<f64> = psi.iter().map(|_| standard_normal(rng)).collect();
    let proj: f64 = g.iter().zip(psi).map(|(a, b)| a * b).sum();
    g.iter().zip(psi).map(|(a, b)| a - proj * b).collect()
}

/// Monte Carlo estimate of the Rice integrand at one point:
/// `(2 pi)^{-n/2} E_a |det(rows a_k^T D psi_k)|`.
///
/// Rows are assembled through the projection identity
/// `D psi = (I - psi psi^T) D phi / |phi|`; since `a` is already
/// orthogonal to `psi` the projector drops out.
pub fn rice_integrand_mc<R: Rng>(frame: &EvaluationFrame, samples: usize, rng: &mut R) -> f64 {
    let n = frame.y.len();
    assert_eq!(frame.equations.len(), n);
    let mut acc = 0.0;
    let mut mat = Matrix::zeros(n);
    for _ in 0..samples.max(1) {
        for (k, eq) in frame.equations.iter().enumerate() {
            let a = gaussian_in_orthocomplement(&eq.psi, rng);
            for i in 0..n {
                let mut v = 0.0;
                for (j, row) in eq.dphi.iter().enumerate() {
                    v += a[j] * row[i];
                }
                mat.set(k, i, v / eq.norm);
            }
        }
        acc += mat.det().abs();
    }
    acc / samples.max(1) as f64 * (std::f64::consts::TAU).powf(-(n as f64) / 2.0)
}

/// Closed-form univariate density: with `phi` the lifted term vector and
/// `phi'` its derivative in `y`,
/// `rho(y) = sqrt(|phi|^2 |phi'|^2 - <phi, phi'>^2) / (pi |phi|^2)`.
pub fn ek_density(y: f64, exps: &[f64], variances: &[f64]) -> f64 {
    let dots: Vec<f64> = exps
        .iter()
        .zip(variances)
        .map(|(a, v)| a * y + 0.5 * v.ln())
        .collect();
    let m = dots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let phi: Vec<f64> = dots.iter().map(|d| (d - m).exp()).collect();
    let dphi: Vec<f64> = phi.iter().zip(exps).map(|(p, a)| p * a).collect();
    let n2: f64 = phi.iter().map(|v| v * v).sum();
    let d2: f64 = dphi.iter().map(|v| v * v).sum();
    let cross: f64 = phi.iter().zip(&dphi).map(|(a, b)| a * b).sum();
    let disc = (n2 * d2 - cross * cross).max(0.0);
    disc.sqrt() / (std::f64::consts::PI * n2)
}

// Gauss-Kronrod 7-15 nodes and weights (positive abscissae).
const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK15[7];
    let mut gauss = fc * WG7[3];
    for (j, &x) in XGK15.iter().enumerate().take(7) {
        let dx = half * x;
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK15[j] * fsum;
        if j % 2 == 1 {
            gauss += WG7[j / 2] * fsum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod integration by interval halving.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), RiceError> {
    let mut stack = vec![(a, b, tol)];
    let mut total = 0.0;
    let mut err_total = 0.0;
    let mut panels = 0;
    while let Some((lo, hi, budget)) = stack.pop() {
        panels += 1;
        let (value, err) = gk15(f, lo, hi);
        if err <= budget || hi - lo < 1e-13 * (1.0 + lo.abs()) || panels > 20_000 {
            total += value;
            err_total += err;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, 0.5 * budget));
        stack.push((mid, hi, 0.5 * budget));
    }
    if err_total > tol.max(1e-15) * 4.0 {
        return Err(RiceError::QuadratureNotConverged {
            achieved: err_total,
        });
    }
    Ok((total, err_total))
}

/// Rigorous envelope for the univariate density beyond a cutoff: the
/// extreme exponent dominates, so the density decays like the slowest
/// surviving exponent gap. Returns an upper bound for the tail mass.
fn tail_bound(exps: &[f64], variances: &[f64], cutoff: f64, positive_side: bool) -> f64 {
    let t = exps.len();
    let u: Vec<f64> = variances.iter().map(|v| 0.5 * v.ln()).collect();
    let top = (0..t)
        .max_by(|&i, &j| {
            let a = if positive_side { exps[i] } else { -exps[i] };
            let b = if positive_side { exps[j] } else { -exps[j] };
            a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let gap_max = exps
        .iter()
        .flat_map(|a| exps.iter().map(move |b| (a - b).abs()))
        .fold(0.0f64, f64::max);
    let mut bound = 0.0;
    for i in 0..t {
        if i == top {
            continue;
        }
        let gap = if positive_side {
            exps[top] - exps[i]
        } else {
            exps[i] - exps[top]
        };
        debug_assert!(gap > 0.0);
        let at_cutoff = if positive_side {
            (exps[i] - exps[top]) * cutoff + u[i] - u[top]
        } else {
            (exps[i] - exps[top]) * (-cutoff) + u[i] - u[top]
        };
        bound += at_cutoff.exp() / gap;
    }
    gap_max * (t as f64).sqrt() / std::f64::consts::PI * bound
}

/// Expected number of positive zeros of a univariate random fewnomial:
/// the density integrated over the whole line, tails bounded analytically.
/// Returns the value and the total error estimate.
pub fn expected_zeros_univariate(
    exps: &[f64],
    variances: &[f64],
    quad_tol: f64,
) -> Result<(f64, f64), RiceError> {
    if exps.len() != variances.len() {
        return Err(RiceError::NotUnivariate);
    }
    if exps.len() <= 1 {
        return Ok((0.0, 0.0));
    }
    let mut cutoff = 4.0;
    let budget = quad_tol / 10.0;
    loop {
        let tails = tail_bound(exps, variances, cutoff, true)
            + tail_bound(exps, variances, cutoff, false);
        if tails <= budget {
            break;
        }
        cutoff *= 2.0;
        if cutoff > 1e6 {
            return Err(RiceError::QuadratureNotConverged { achieved: tails });
        }
    }
    let f = |y: f64| ek_density(y, exps, variances);
    let (value, err) = integrate_adaptive(&f, -cutoff, cutoff, quad_tol * 0.8)?;
    let tails = tail_bound(exps, variances, cutoff, true)
        + tail_bound(exps, variances, cutoff, false);
    Ok((value, err + tails))
}

/// Density of the binomial-system zero count:
/// `pi^{-n} |det Gamma| prod_k exp(u_k) / (1 + exp(2 u_k))` with
/// `u_k = gamma_k . y + s_k`, computed through `1 / (2 cosh u)`.
pub fn binomial_density(y: &[f64], gammas: &[Vec<f64>], shifts: &[f64]) -> f64 {
    let n = gammas.len();
    let det = Matrix::from_rows(gammas).det().abs();
    if det == 0.0 {
        return 0.0;
    }
    let mut value = det / std::f64::consts::PI.powi(n as i32);
    for (g, s) in gammas.iter().zip(shifts) {
        let u: f64 = g.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() + s;
        value *= 0.5 / u.cosh();
    }
    value
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prop32Method {
    Closed,
    Quadrature,
}

/// The binomial-cell integral: `4^{-n}` in closed form, or the power of
/// the arctangent integral `(1/pi) int_0^1 dt/(1+t^2)` by quadrature.
pub fn prop32_value(n: usize, method: Prop32Method, quad_tol: f64) -> Result<f64, RiceError> {
    match method {
        Prop32Method::Closed => Ok(0.25f64.powi(n as i32)),
        Prop32Method::Quadrature => {
            let f = |t: f64| 1.0 / (1.0 + t * t);
            let (one_dim, _) = integrate_adaptive(&f, 0.0, 1.0, quad_tol)?;
            Ok((one_dim / std::f64::consts::PI).powi(n as i32))
        }
    }
}

/// Slack of the cell-domination inequality used to reduce the general
/// integrand to the binomial one: for `y` in the cell where the origin
/// term dominates equation `k`, and any other index `beta`,
/// `sqrt(|phi|^2 - phi_beta^2) / |phi|^2 <= 1 / (1 + exp(2(beta.y + u_beta)))`.
///
/// Expects the normalized setup: the support contains the origin with
/// zero lifting, so no scaling is applied. Returns `rhs - lhs`.
pub fn inequality_3_10_slack(
    exps: &[Vec<f64>],
    lifting: &[f64],
    y: &[f64],
    beta: usize,
) -> f64 {
    let dots: Vec<f64> = exps
        .iter()
        .zip(lifting)
        .map(|(e, u)| e.iter().zip(y).map(|(a, v)| a * v).sum::<f64>() + u)
        .collect();
    let phi: Vec<f64> = dots.iter().map(|d| d.exp()).collect();
    let n2: f64 = phi.iter().map(|v| v * v).sum();
    let lhs = (n2 - phi[beta] * phi[beta]).max(0.0).sqrt() / n2;
    let rhs = 1.0 / (1.0 + (2.0 * dots[beta]).exp());
    rhs - lhs
}

//! Reproducible sampling and evaluation of random fewnomial systems.
//!
//! Coefficients are centered Gaussians with the spec's variances, drawn
//! from counter-based child streams so that trial `i` sees the same numbers
//! no matter how many worker threads run or in which order trials finish.

use crate::bounds::SystemSpec;
use crate::linalg::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("coordinate {index} must be strictly positive, got {value}")]
    NonPositiveCoordinate { index: usize, value: f64 },
    #[error("point has {got} coordinates, system expects {expected}")]
    WrongArity { got: usize, expected: usize },
}

/// Master seed plus a stream index; child streams are independent and
/// reproducible regardless of evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
}

impl RngStream {
    pub fn new(master_seed: u64) -> Self {
        RngStream { master_seed }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(index);
        rng
    }
}

/// One standard normal draw via the Box-Muller transform.
///
/// Two uniforms per call, no state: the draw sequence depends only on the
/// underlying stream, which keeps experiment output byte-stable.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// A sampled system: the spec shape plus concrete coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FewnomialSystem {
    pub spec: SystemSpec,
    pub coefficients: Vec<Vec<f64>>,
}

/// Draws each coefficient independently as `N(0, v_{k,alpha})`, equation by
/// equation in support order.
pub fn sample_system(spec: &SystemSpec, stream: &mut ChaCha8Rng) -> FewnomialSystem {
    let coefficients = spec
        .equations
        .iter()
        .map(|eq| {
            eq.variances
                .iter()
                .map(|v| v.sqrt() * standard_normal(stream))
                .collect()
        })
        .collect();
    FewnomialSystem {
        spec: spec.clone(),
        coefficients,
    }
}

impl FewnomialSystem {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Per-equation float exponent rows; the working representation for
    /// everything numerical downstream.
    pub fn exponents_f64(&self) -> Vec<Vec<Vec<f64>>> {
        self.spec
            .equations
            .iter()
            .map(|eq| {
                eq.support
                    .iter()
                    .map(|e| e.iter().map(|x| x.to_f64()).collect())
                    .collect()
            })
            .collect()
    }

    /// Evaluates all equations at a point of the open positive orthant.
    pub fn eval_positive(&self, x: &[f64]) -> Result<Vec<f64>, EvalError> {
        if x.len() != self.spec.n {
            return Err(EvalError::WrongArity {
                got: x.len(),
                expected: self.spec.n,
            });
        }
        for (i, &v) in x.iter().enumerate() {
            if !(v > 0.0) {
                return Err(EvalError::NonPositiveCoordinate { index: i, value: v });
            }
        }
        let y: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        Ok(self.eval_log(&y).0)
    }

    /// Evaluates the equivalent exponential-sum system at `y = ln x`,
    /// returning the values and the Jacobian in `y`.
    ///
    /// Each row is computed as `exp(m) * sum_j f_j exp(a_j - m)` with `m`
    /// the row maximum of the exponents `a_j = alpha_j . y`, so the inner
    /// sum never overflows; Jacobian rows are `sum_j term_j alpha_j`.
    pub fn eval_log(&self, y: &[f64]) -> (Vec<f64>, Matrix) {
        let n = self.spec.n;
        debug_assert_eq!(y.len(), n);
        let mut values = Vec::with_capacity(self.spec.equations.len());
        let mut jac = Matrix::zeros(self.spec.equations.len().max(n));
        for (k, eq) in self.spec.equations.iter().enumerate() {
            let mut exponents: Vec<f64> = Vec::with_capacity(eq.support.len());
            let mut m = f64::NEG_INFINITY;
            for e in &eq.support {
                let mut a = 0.0;
                for (i, x) in e.iter().enumerate() {
                    a += x.to_f64() * y[i];
                }
                if a > m {
                    m = a;
                }
                exponents.push(a);
            }
            let scale = m.exp();
            let mut value = 0.0;
            let mut grad = vec![0.0; n];
            for (j, e) in eq.support.iter().enumerate() {
                let term = self.coefficients[k][j] * (exponents[j] - m).exp();
                value += term;
                for (i, x) in e.iter().enumerate() {
                    grad[i] += term * x.to_f64();
                }
            }
            values.push(value * scale);
            for i in 0..n {
                jac.set(k, i, grad[i] * scale);
            }
        }
        (values, jac)
    }
}

/// The deterministic binomial system `a_k exp(gamma_k . x + s_k) + b_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinomialSystem {
    pub gammas: Vec<Vec<f64>>,
    pub shifts: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinomialOutcome {
    /// Number of regular zeros in `B = {x : gamma_k . x + s_k <= 0}`.
    pub count_in_b: usize,
    pub solution: Option<Vec<f64>>,
}

/// Draws the coefficient pairs `(a_k, b_k)` as i.i.d. standard Gaussians.
pub fn sample_binomial(
    gammas: Vec<Vec<f64>>,
    shifts: Vec<f64>,
    stream: &mut ChaCha8Rng,
) -> BinomialSystem {
    let n = gammas.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        a.push(standard_normal(stream));
        b.push(standard_normal(stream));
    }
    BinomialSystem {
        gammas,
        shifts,
        a,
        b,
    }
}

/// Exact solve of the binomial system.
///
/// A solution needs every pair to have strictly opposite signs (an exactly
/// zero coefficient counts as matching, the conservative convention for a
/// measure-zero event). The system then reduces to the linear system
/// `gamma_k . x = -s_k + ln(-b_k/a_k)`; a singular gamma matrix means no
/// regular zero, and the zero lies in `B` exactly when every log ratio is
/// nonpositive.
pub fn binomial_solve(system: &BinomialSystem) -> BinomialOutcome {
    let n = system.gammas.len();
    let none = BinomialOutcome {
        count_in_b: 0,
        solution: None,
    };
    let mut log_ratios = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (system.a[k], system.b[k]);
        if a == 0.0 || b == 0.0 || a.signum() == b.signum() {
            return none;
        }
        log_ratios.push((-b / a).ln());
    }
    let gamma = Matrix::from_rows(&system.gammas);
    let rhs: Vec<f64> = (0..n).map(|k| -system.shifts[k] + log_ratios[k]).collect();
    let Some(solution) = gamma.solve(&rhs) else {
        return none;
    };
    if log_ratios.iter().all(|&r| r <= 0.0) {
        BinomialOutcome {
            count_in_b: 1,
            solution: Some(solution),
        }
    } else {
        BinomialOutcome {
            count_in_b: 0,
            solution: Some(solution),
        }
    }
}

//! Small dense linear algebra over `f64` (LU with partial pivoting).
//!
//! Systems here are tiny (n is the number of equations, single digits), so
//! a plain rowwise LU keeps the hot Monte Carlo paths transparent.

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            debug_assert_eq!(r.len(), n);
            data.extend_from_slice(r);
        }
        Matrix { n, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    fn lu(&self) -> Option<(Matrix, Vec<usize>, f64)> {
        let n = self.n;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut det_sign = 1.0;
        for col in 0..n {
            let mut p = col;
            let mut best = lu.get(col, col).abs();
            for r in col + 1..n {
                let a = lu.get(r, col).abs();
                if a > best {
                    best = a;
                    p = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return None;
            }
            if p != col {
                for j in 0..n {
                    let a = lu.get(col, j);
                    let b = lu.get(p, j);
                    lu.set(col, j, b);
                    lu.set(p, j, a);
                }
                perm.swap(col, p);
                det_sign = -det_sign;
            }
            let piv = lu.get(col, col);
            for r in col + 1..n {
                let f = lu.get(r, col) / piv;
                lu.set(r, col, f);
                for j in col + 1..n {
                    let v = lu.get(r, j) - f * lu.get(col, j);
                    lu.set(r, j, v);
                }
            }
        }
        Some((lu, perm, det_sign))
    }

    /// Determinant; zero for singular or non-finite input.
    pub fn det(&self) -> f64 {
        match self.lu() {
            None => 0.0,
            Some((lu, _, sign)) => {
                let mut d = sign;
                for i in 0..self.n {
                    d *= lu.get(i, i);
                }
                d
            }
        }
    }

    /// Solves `self * x = b`; `None` when the matrix is singular.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.n;
        let (lu, perm, _) = self.lu()?;
        let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= lu.get(i, j) * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= lu.get(i, j) * x[j];
            }
            x[i] /= lu.get(i, i);
        }
        if x.iter().all(|v| v.is_finite()) {
            Some(x)
        } else {
            None
        }
    }

    /// Matrix inverse via column solves; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n;
        let mut inv = Matrix::zeros(n);
        let mut e = vec![0.0; n];
        for col in 0..n {
            e[col] = 1.0;
            let x = self.solve(&e)?;
            e[col] = 0.0;
            for row in 0..n {
                inv.set(row, col, x[row]);
            }
        }
        Some(inv)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

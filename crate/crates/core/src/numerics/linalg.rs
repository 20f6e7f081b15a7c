//! Small dense complex matrix helpers: LU factorization, inversion, products.
//!
//! Sized for the identity validators (dimensions in the tens), not the
//! spectrum pipeline.

use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.data[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Inverse via LU with partial pivoting. Returns `None` when a pivot
    /// degenerates to zero.
    pub fn inverse(&self) -> Option<CMatrix> {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut best = col;
            let mut best_mag = lu[col * n + col].norm();
            for r in (col + 1)..n {
                let mag = lu[r * n + col].norm();
                if mag > best_mag {
                    best_mag = mag;
                    best = r;
                }
            }
            if best_mag == 0.0 {
                return None;
            }
            if best != col {
                for j in 0..n {
                    lu.swap(col * n + j, best * n + j);
                }
                piv.swap(col, best);
            }
            let pivot = lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] / pivot;
                lu[r * n + col] = factor;
                for j in (col + 1)..n {
                    let v = lu[col * n + j];
                    lu[r * n + j] -= factor * v;
                }
            }
        }
        // Solve A X = I column by column.
        let mut inv = CMatrix::zeros(n);
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for rhs in 0..n {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = if piv[i] == rhs {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            for i in 1..n {
                let mut acc = x[i];
                for j in 0..i {
                    acc -= lu[i * n + j] * x[j];
                }
                x[i] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = x[i];
                for j in (i + 1)..n {
                    acc -= lu[i * n + j] * x[j];
                }
                x[i] = acc / lu[i * n + i];
            }
            for i in 0..n {
                inv.data[i * n + rhs] = x[i];
            }
        }
        Some(inv)
    }
}

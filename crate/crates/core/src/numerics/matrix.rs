//! Dense symmetric / Hermitian matrices and the GOE / GUE samplers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Ensemble symmetry class. `One` is real symmetric (GOE), `Two` is complex
/// Hermitian (GUE).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beta {
    One,
    Two,
}

impl Beta {
    pub fn value(self) -> f64 {
        match self {
            Beta::One => 1.0,
            Beta::Two => 2.0,
        }
    }

    pub fn from_u8(b: u8) -> Result<Self> {
        match b {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            other => Err(Error::Configuration(format!(
                "beta must be 1 or 2, got {other}"
            ))),
        }
    }
}

/// Dense Hermitian-symmetric matrix. The imaginary part is stored only for
/// `beta = 2`; it is skew-symmetric with a zero diagonal so the matrix is
/// exactly Hermitian by construction.
#[derive(Debug, Clone)]
pub struct SymmetricMatrix {
    n: usize,
    beta: Beta,
    /// Row-major `n x n` real part, `re[i*n + j] == re[j*n + i]` exactly.
    re: Vec<f64>,
    /// Row-major imaginary part for `beta = 2`, `im[i*n + j] == -im[j*n + i]`.
    im: Option<Vec<f64>>,
}

impl SymmetricMatrix {
    /// Zero matrix of the given symmetry class.
    pub fn zeros(n: usize, beta: Beta) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(
                "matrix dimension must be >= 1".into(),
            ));
        }
        let im = match beta {
            Beta::One => None,
            Beta::Two => Some(vec![0.0; n * n]),
        };
        Ok(Self {
            n,
            beta,
            re: vec![0.0; n * n],
            im,
        })
    }

    /// Real symmetric matrix from row-major entries (symmetrised exactly by
    /// copying the upper triangle onto the lower one).
    pub fn from_real(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidDimension(format!(
                "expected {} entries for an {n} x {n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut m = Self {
            n,
            beta: Beta::One,
            re: entries,
            im: None,
        };
        for i in 0..n {
            for j in (i + 1)..n {
                let v = m.re[i * n + j];
                m.re[j * n + i] = v;
            }
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut m = Self::zeros(n, Beta::One)?;
        for (i, &v) in values.iter().enumerate() {
            m.re[i * n + i] = v;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let re = self.re[i * self.n + j];
        let im = self.im.as_ref().map_or(0.0, |im| im[i * self.n + j]);
        Complex64::new(re, im)
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: Complex64) {
        let n = self.n;
        self.re[i * n + j] = v.re;
        self.re[j * n + i] = v.re;
        if let Some(im) = self.im.as_mut() {
            im[i * n + j] = v.im;
            im[j * n + i] = -v.im;
            if i == j {
                im[i * n + j] = 0.0;
            }
        } else {
            assert!(v.im == 0.0, "complex entry on a beta = 1 matrix");
        }
    }

    pub fn real_part(&self) -> &[f64] {
        &self.re
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.re[i * self.n + i]).sum()
    }

    /// Scale all entries in place.
    pub fn scale(&mut self, c: f64) {
        for v in &mut self.re {
            *v *= c;
        }
        if let Some(im) = self.im.as_mut() {
            for v in im {
                *v *= c;
            }
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        let mut s: f64 = self.re.iter().map(|v| v * v).sum();
        if let Some(im) = &self.im {
            s += im.iter().map(|v| v * v).sum::<f64>();
        }
        s.sqrt()
    }

    /// Exact Hermitian-symmetry check (the storage maintains it, this verifies).
    pub fn is_hermitian_exact(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.re[i * n + j] != self.re[j * n + i] {
                    return false;
                }
                if let Some(im) = &self.im {
                    if im[i * n + j] != -im[j * n + i] {
                        return false;
                    }
                }
            }
            if let Some(im) = &self.im {
                if im[i * n + i] != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Real symmetric embedding used by the eigensolver for `beta = 2`.
    ///
    /// For `H = X + iY` the `2n x 2n` matrix `[[X, -Y], [Y, X]]` is symmetric
    /// and carries each eigenvalue of `H` twice.
    pub fn real_embedding(&self) -> Vec<f64> {
        let n = self.n;
        match &self.im {
            None => self.re.clone(),
            Some(im) => {
                let m = 2 * n;
                let mut out = vec![0.0; m * m];
                for i in 0..n {
                    for j in 0..n {
                        let x = self.re[i * n + j];
                        let y = im[i * n + j];
                        out[i * m + j] = x;
                        out[(i + n) * m + (j + n)] = x;
                        out[i * m + (j + n)] = -y;
                        out[(i + n) * m + j] = y;
                    }
                }
                out
            }
        }
    }
}

/// Draw from the Gaussian Orthogonal Ensemble: independent mean-zero Gaussian
/// entries with variance `(1 + delta_ij) / n`, filled in row-major
/// upper-triangle order so the draw sequence is part of the contract.
pub fn sample_goe(n: usize, rng: &mut SeededRng) -> Result<SymmetricMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("GOE sampler needs n >= 1".into()));
    }
    let mut m = SymmetricMatrix::zeros(n, Beta::One)?;
    let off = (1.0 / n as f64).sqrt();
    let diag = (2.0 / n as f64).sqrt();
    for i in 0..n {
        for j in i..n {
            let sd = if i == j { diag } else { off };
            let v = rng.normal(sd);
            m.re[i * n + j] = v;
            m.re[j * n + i] = v;
        }
    }
    Ok(m)
}

/// Draw from the Gaussian Unitary Ensemble: real diagonal with variance `1/n`,
/// complex off-diagonal entries with variance `1/(2n)` per component (real part
/// drawn before imaginary part, row-major upper-triangle order).
pub fn sample_gue(n: usize, rng: &mut SeededRng) -> Result<SymmetricMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("GUE sampler needs n >= 1".into()));
    }
    let mut m = SymmetricMatrix::zeros(n, Beta::Two)?;
    let off = (0.5 / n as f64).sqrt();
    let diag = (1.0 / n as f64).sqrt();
    let im = m.im.as_mut().expect("beta = 2 storage");
    for i in 0..n {
        for j in i..n {
            if i == j {
                m.re[i * n + i] = rng.normal(diag);
            } else {
                let x = rng.normal(off);
                let y = rng.normal(off);
                m.re[i * n + j] = x;
                m.re[j * n + i] = x;
                im[i * n + j] = y;
                im[j * n + i] = -y;
            }
        }
    }
    Ok(m)
}

/// Sample the ensemble selected by `beta`.
pub fn sample_ensemble(n: usize, beta: Beta, rng: &mut SeededRng) -> Result<SymmetricMatrix> {
    match beta {
        Beta::One => sample_goe(n, rng),
        Beta::Two => sample_gue(n, rng),
    }
}

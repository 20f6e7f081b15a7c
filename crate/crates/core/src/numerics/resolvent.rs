//! Resolvents `G(z) = (H - zI)^(-1)` and the exact algebraic identities used
//! to validate them: the Ward identity, the resolvent identity, and the
//! trace-of-minor difference formula.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linalg::CMatrix;
use crate::numerics::matrix::SymmetricMatrix;

/// Construction tolerance: `(H - zI) G - I` must stay below this in max-entry
/// norm.
const CONSTRUCTION_TOL: f64 = 1e-10;

/// Resolvent of a Hermitian-symmetric matrix at a point of the upper half-plane.
#[derive(Debug, Clone)]
pub struct ResolventMatrix {
    z: Complex64,
    shifted: CMatrix,
    entries: CMatrix,
}

impl ResolventMatrix {
    pub fn n(&self) -> usize {
        self.entries.n
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries.get(i, j)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Max-entry residual of `(H - zI) G - I`.
    pub fn construction_residual(&self) -> f64 {
        let n = self.entries.n;
        self.shifted
            .mul(&self.entries)
            .sub(&CMatrix::identity(n))
            .max_abs()
    }
}

/// Shifted dense copy `H - zI`.
fn shifted_matrix(m: &SymmetricMatrix, z: Complex64) -> CMatrix {
    let n = m.n();
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut v = m.entry(i, j);
            if i == j {
                v -= z;
            }
            out.set(i, j, v);
        }
    }
    out
}

/// Build `G(z) = (H - zI)^(-1)` for `Im z > 0`.
pub fn resolvent(m: &SymmetricMatrix, z: Complex64) -> Result<ResolventMatrix> {
    if z.im <= 0.0 {
        return Err(Error::HalfPlaneViolation {
            imag: z.im,
            context: "resolvent",
        });
    }
    let shifted = shifted_matrix(m, z);
    // Im z > 0 keeps H - zI invertible for Hermitian H.
    let entries = shifted.inverse().ok_or(Error::HalfPlaneViolation {
        imag: z.im,
        context: "resolvent: shifted matrix numerically singular",
    })?;
    let g = ResolventMatrix {
        z,
        shifted,
        entries,
    };
    let res = g.construction_residual();
    if res > CONSTRUCTION_TOL {
        return Err(Error::Configuration(format!(
            "resolvent construction residual {res:.3e} above {CONSTRUCTION_TOL:.1e}"
        )));
    }
    Ok(g)
}

/// Ward identity residual: `max_i | sum_j |G_ij|^2 - Im(G_ii) / eta |`.
pub fn check_ward(g: &ResolventMatrix) -> f64 {
    let n = g.n();
    let eta = g.z().im;
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            row_sum += g.entry(i, j).norm_sqr();
        }
        worst = worst.max((row_sum - g.entry(i, i).im / eta).abs());
    }
    worst
}

/// Resolvent identity residual in max-entry norm:
/// `A^(-1) - B^(-1) = A^(-1) (B - A) B^(-1)` applied to `A = a - zI`, `B = b - zI`.
pub fn check_resolvent_identity(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    z: Complex64,
) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::InvalidDimension(
            "resolvent identity needs equal sizes".into(),
        ));
    }
    let ga = resolvent(a, z)?;
    let gb = resolvent(b, z)?;
    let shifted_a = shifted_matrix(a, z);
    let shifted_b = shifted_matrix(b, z);
    let diff_ab = shifted_b.sub(&shifted_a); // B - A (shifts cancel)
    let lhs = ga.entries.sub(&gb.entries);
    let rhs = ga.entries.mul(&diff_ab).mul(&gb.entries);
    Ok(lhs.sub(&rhs).max_abs())
}

/// Trace-difference identity residual for the k-th major minor (k zero-based):
/// with `A = h - zI` and `A_k` the minor with row/column k deleted,
/// `tr(A^(-1)) - tr(A_k^(-1)) = (1 + a_k^* A_k^(-2) a_k) / (A_kk - a_k^* A_k^(-1) a_k)`
/// where `a_k` is column k of `A` without its k-th entry.
pub fn check_trace_difference(h: &SymmetricMatrix, k: usize, z: Complex64) -> Result<f64> {
    let n = h.n();
    if n < 2 {
        return Err(Error::InvalidDimension(
            "trace difference needs n >= 2".into(),
        ));
    }
    if k >= n {
        return Err(Error::Configuration(format!(
            "minor index {k} out of range for n = {n}"
        )));
    }
    if z.im <= 0.0 {
        return Err(Error::HalfPlaneViolation {
            imag: z.im,
            context: "trace difference",
        });
    }
    let a = shifted_matrix(h, z);
    let inv_a = a.inverse().ok_or(Error::HalfPlaneViolation {
        imag: z.im,
        context: "trace difference: full matrix singular",
    })?;

    // Minor and the deleted column.
    let mut minor = CMatrix::zeros(n - 1);
    let mut col = vec![Complex64::new(0.0, 0.0); n - 1];
    for i in 0..n {
        if i == k {
            continue;
        }
        let ii = if i < k { i } else { i - 1 };
        col[ii] = a.get(i, k);
        for j in 0..n {
            if j == k {
                continue;
            }
            let jj = if j < k { j } else { j - 1 };
            minor.set(ii, jj, a.get(i, j));
        }
    }
    let inv_minor = minor.inverse().ok_or(Error::HalfPlaneViolation {
        imag: z.im,
        context: "trace difference: minor singular",
    })?;

    let lhs = inv_a.trace() - inv_minor.trace();

    // a_k^* uses the conjugate transpose; for real symmetric H the conjugation
    // is vacuous because the column entries carry no shift.
    let w1 = inv_minor.mul_vec(&col); // A_k^{-1} a_k
    let w2 = inv_minor.mul_vec(&w1); // A_k^{-2} a_k
    let mut quad1 = Complex64::new(0.0, 0.0);
    let mut quad2 = Complex64::new(0.0, 0.0);
    for i in 0..(n - 1) {
        quad1 += col[i].conj() * w1[i];
        quad2 += col[i].conj() * w2[i];
    }
    let rhs = (Complex64::new(1.0, 0.0) + quad2) / (a.get(k, k) - quad1);
    Ok((lhs - rhs).norm())
}

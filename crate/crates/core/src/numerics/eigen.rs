//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! implicit-shift QL.
//!
//! `beta = 2` matrices are reduced through their `2n x 2n` real symmetric
//! embedding, whose spectrum carries each Hermitian eigenvalue twice. The
//! eigenvalue-only path is the cost driver of the whole crate (every spectrum
//! sample at size `n` runs it), so the inner loops are kept contiguous.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::matrix::{Beta, SymmetricMatrix};

/// Eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Wrap a pre-sorted list, verifying the ordering invariant.
    pub fn from_sorted(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Maximum QL sweeps per eigenvalue before giving up; the overall budget is
/// `30 * n` sweeps.
const MAX_SWEEPS_PER_VALUE: usize = 30;

/// Eigenvalues of a Hermitian-symmetric matrix, ascending.
pub fn eigenvalues_sym(m: &SymmetricMatrix) -> Result<Spectrum> {
    let mut a = m.real_embedding();
    let dim = match m.beta() {
        Beta::One => m.n(),
        Beta::Two => 2 * m.n(),
    };
    let (mut d, mut e) = tridiagonalize(&mut a, dim);
    ql_implicit(&mut d, &mut e, None, dim)?;
    d.sort_unstable_by(f64::total_cmp);
    let values = match m.beta() {
        Beta::One => d,
        // The embedding doubles every eigenvalue; keep one of each pair.
        Beta::Two => d.into_iter().step_by(2).collect(),
    };
    Ok(Spectrum::from_sorted(values))
}

/// Eigenpairs of a Hermitian-symmetric matrix. Vectors come back normalised,
/// column `k` matching `spectrum.values()[k]`; for `beta = 2` they are complex
/// vectors recovered from the real embedding.
pub fn eigen_sym_with_vectors(m: &SymmetricMatrix) -> Result<(Spectrum, Vec<Vec<Complex64>>)> {
    let n = m.n();
    let dim = match m.beta() {
        Beta::One => n,
        Beta::Two => 2 * n,
    };
    let mut a = m.real_embedding();
    let (mut d, mut e) = tridiagonalize_with_q(&mut a, dim);
    ql_implicit(&mut d, &mut e, Some((&mut a, dim)), dim)?;

    // Sort eigenpairs by eigenvalue.
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_unstable_by(|&i, &j| d[i].total_cmp(&d[j]));

    let mut values = Vec::with_capacity(m.n());
    let mut vectors = Vec::with_capacity(m.n());
    let take_every = match m.beta() {
        Beta::One => 1,
        Beta::Two => 2,
    };
    for (rank, &k) in order.iter().enumerate() {
        if rank % take_every != 0 {
            continue;
        }
        values.push(d[k]);
        let mut v = Vec::with_capacity(n);
        match m.beta() {
            Beta::One => {
                for i in 0..n {
                    v.push(Complex64::new(a[i * dim + k], 0.0));
                }
            }
            Beta::Two => {
                // Embedded vector [x; y] maps to x + i y, an eigenvector of H.
                for i in 0..n {
                    v.push(Complex64::new(a[i * dim + k], a[(i + n) * dim + k]));
                }
            }
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for c in &mut v {
                *c /= norm;
            }
        }
        vectors.push(v);
    }
    Ok((Spectrum::from_sorted(values), vectors))
}

/// Householder reduction to tridiagonal form, eigenvalues-only variant.
///
/// Consumes the lower triangle of `a` (row-major, `n x n`). Returns the
/// diagonal `d` and subdiagonal `e` (with `e[0] = 0`).
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 1 {
        d[0] = a[0];
        return (d, e);
    }
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i; // active leading block is 0..l
        let (head, tail) = a.split_at_mut(i * n);
        let row = &mut tail[..l];
        let mut scale = 0.0;
        for &v in row.iter() {
            scale += v.abs();
        }
        if l == 1 || scale == 0.0 {
            e[i] = row[l - 1];
            continue;
        }
        let inv_scale = 1.0 / scale;
        let mut h = 0.0;
        for v in row.iter_mut() {
            *v *= inv_scale;
            h += *v * *v;
        }
        let f = row[l - 1];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        row[l - 1] = f - g;
        let inv_h = 1.0 / h;

        // p = A u / h over the leading l x l block, using only its lower triangle.
        for v in p[..l].iter_mut() {
            *v = 0.0;
        }
        for j in 0..l {
            let uj = row[j];
            let arow = &head[j * n..j * n + j + 1];
            // p[j] += dot(A[j][0..=j], u[0..=j])
            let mut s = 0.0;
            for (av, uv) in arow.iter().zip(row[..j + 1].iter()) {
                s += av * uv;
            }
            p[j] += s;
            // p[0..j] += u[j] * A[j][0..j]
            let (pj, _) = p.split_at_mut(j);
            for (pv, av) in pj.iter_mut().zip(head[j * n..j * n + j].iter()) {
                *pv += uj * av;
            }
        }
        let mut ks = 0.0;
        for v in p[..l].iter_mut() {
            *v *= inv_h;
        }
        for (pv, uv) in p[..l].iter().zip(row.iter()) {
            ks += pv * uv;
        }
        let k = ks * 0.5 * inv_h;
        // w = p - K u; rank-2 update A -= u w^T + w u^T on the lower triangle.
        for (pv, uv) in p[..l].iter_mut().zip(row.iter()) {
            *pv -= k * uv;
        }
        for j in 0..l {
            let uj = row[j];
            let wj = p[j];
            let arow = &mut head[j * n..j * n + j + 1];
            for ((av, &uv), &wv) in arow
                .iter_mut()
                .zip(row[..j + 1].iter())
                .zip(p[..j + 1].iter())
            {
                *av -= uj * wv + wj * uv;
            }
        }
    }
    // Diagonal entries are final once every later stage has updated them.
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

/// Householder reduction that also accumulates the orthogonal transform in `a`
/// (on exit `a` holds Q, column `k` of which reduces to eigenvector `k` after QL).
fn tridiagonalize_with_q(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 1 {
        d[0] = a[0];
        a[0] = 1.0;
        return (d, e);
    }
    for i in (1..n).rev() {
        let l = i;
        let mut h = 0.0;
        let mut scale = 0.0;
        if l > 1 {
            for k in 0..l {
                scale += a[i * n + k].abs();
            }
        }
        if l == 1 || scale == 0.0 {
            e[i] = a[i * n + i - 1];
            d[i] = h;
            continue;
        }
        for k in 0..l {
            a[i * n + k] /= scale;
            h += a[i * n + k] * a[i * n + k];
        }
        let f = a[i * n + l - 1];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        a[i * n + l - 1] = f - g;
        let mut fsum = 0.0;
        for j in 0..l {
            a[j * n + i] = a[i * n + j] / h;
            let mut g = 0.0;
            for k in 0..=j {
                g += a[j * n + k] * a[i * n + k];
            }
            for k in (j + 1)..l {
                g += a[k * n + j] * a[i * n + k];
            }
            e[j] = g / h;
            fsum += e[j] * a[i * n + j];
        }
        let hh = fsum / (h + h);
        for j in 0..l {
            let f = a[i * n + j];
            let g = e[j] - hh * f;
            e[j] = g;
            for k in 0..=j {
                a[j * n + k] -= f * e[k] + g * a[i * n + k];
            }
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            // Accumulate the transform (skipped when the stage was trivial).
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..i {
                    a[k * n + j] -= g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..i {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
    (d, e)
}

/// Implicit-shift QL on a tridiagonal `(d, e)`. When `q` is given, rotations
/// are accumulated into its columns so they become eigenvectors.
fn ql_implicit(
    d: &mut [f64],
    e: &mut [f64],
    q: Option<(&mut [f64], usize)>,
    n: usize,
) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut qm = q;
    let total_budget = MAX_SWEEPS_PER_VALUE * n;
    let mut total_sweeps = 0usize;
    let scale = d.iter().chain(e.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Find a negligible subdiagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total_sweeps += 1;
            if iter > MAX_SWEEPS_PER_VALUE || total_sweeps > total_budget {
                let offdiag = e.iter().fold(0.0f64, |mx, v| mx.max(v.abs()));
                return Err(Error::EigenNonConvergence {
                    n,
                    sweeps: total_sweeps,
                    offdiag,
                    scale,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Underflow recovery: drop the shift and retry the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some((qv, dim)) = qm.as_mut() {
                    let dimv = *dim;
                    for k in 0..dimv {
                        f = qv[k * dimv + i + 1];
                        qv[k * dimv + i + 1] = s * qv[k * dimv + i] + c * f;
                        qv[k * dimv + i] = c * qv[k * dimv + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Residual `max_k ||H v_k - lambda_k v_k||_2` over all eigenpairs.
pub fn eigenpair_residual(m: &SymmetricMatrix, spec: &Spectrum, vectors: &[Vec<Complex64>]) -> f64 {
    let n = m.n();
    let mut worst = 0.0f64;
    for (lam, v) in spec.values().iter().zip(vectors.iter()) {
        let mut res = 0.0;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += m.entry(i, j) * v[j];
            }
            acc -= lam * v[i];
            res += acc.norm_sqr();
        }
        worst = worst.max(res.sqrt());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::{sample_goe, sample_gue};
    use crate::rng::SeededRng;

    #[test]
    fn diagonal_matrix_spectrum() {
        let m = SymmetricMatrix::diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let s = eigenvalues_sym(&m).unwrap();
        let got = s.values();
        assert!((got[0] - 1.0).abs() < 1e-14);
        assert!((got[1] - 2.0).abs() < 1e-14);
        assert!((got[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_exchange_matrix() {
        let m = SymmetricMatrix::from_real(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = eigenvalues_sym(&m).unwrap();
        assert!((s.values()[0] + 1.0).abs() < 1e-14);
        assert!((s.values()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalue_sum_matches_trace_goe() {
        let mut rng = SeededRng::new(11, 0);
        let m = sample_goe(50, &mut rng).unwrap();
        let s = eigenvalues_sym(&m).unwrap();
        let rel = (s.sum() - m.trace()).abs() / m.frobenius_norm().max(1e-300);
        assert!(rel < 1e-10, "trace mismatch {rel}");
    }

    #[test]
    fn eigenvalue_sum_matches_trace_gue() {
        let mut rng = SeededRng::new(12, 0);
        let m = sample_gue(40, &mut rng).unwrap();
        let s = eigenvalues_sym(&m).unwrap();
        assert_eq!(s.n(), 40);
        let rel = (s.sum() - m.trace()).abs() / m.frobenius_norm().max(1e-300);
        assert!(rel < 1e-10, "trace mismatch {rel}");
    }

    #[test]
    fn eigenpairs_reconstruct_goe() {
        let mut rng = SeededRng::new(13, 0);
        let m = sample_goe(50, &mut rng).unwrap();
        let (s, v) = eigen_sym_with_vectors(&m).unwrap();
        let norm = s.max_abs();
        assert!(eigenpair_residual(&m, &s, &v) <= 1e-9 * norm);
    }

    #[test]
    fn eigenpairs_reconstruct_gue() {
        let mut rng = SeededRng::new(14, 0);
        let m = sample_gue(25, &mut rng).unwrap();
        let (s, v) = eigen_sym_with_vectors(&m).unwrap();
        assert_eq!(v.len(), 25);
        let norm = s.max_abs();
        assert!(eigenpair_residual(&m, &s, &v) <= 1e-9 * norm);
    }

    #[test]
    fn values_only_matches_vector_path() {
        let mut rng = SeededRng::new(15, 0);
        let m = sample_goe(30, &mut rng).unwrap();
        let a = eigenvalues_sym(&m).unwrap();
        let (b, _) = eigen_sym_with_vectors(&m).unwrap();
        for (x, y) in a.values().iter().zip(b.values().iter()) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

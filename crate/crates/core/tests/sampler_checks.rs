//! Monte-Carlo checks on the samplers that are too heavy for unit tests:
//! spectral laws at n = 2000, SDE/matrix equivalence, path regularity and
//! conjugation invariance of the spectrum.

use msle_core::dbm::{
    holder_estimate, sample_spectrum_matrix, simulate_path_matrix, simulate_path_sde, Beta,
    HolderEstimate,
};
use msle_core::loewner::hull_box;
use msle_core::numerics::linalg::CMatrix;
use msle_core::numerics::stats::{
    ks_distance_to_cdf, ks_distance_two_sample, median, semicircle_cdf,
};
use msle_core::numerics::{
    eigen_sym_with_vectors, eigenvalues_sym, sample_goe, sample_gue, SymmetricMatrix,
};
use msle_core::parallel::map_trials;
use msle_core::SeededRng;
use num_complex::Complex64;

#[test]
fn gue_semicircle_at_n2000() {
    let mut rng = SeededRng::new(81, 0);
    let m = sample_gue(2000, &mut rng).unwrap();
    let s = eigenvalues_sym(&m).unwrap();
    let d = ks_distance_to_cdf(s.values(), |x| semicircle_cdf(x, 2.0));
    assert!(d <= 0.02, "GUE KS {d}");
}

#[test]
fn support_edge_at_quarter_time() {
    // t = 1/4: edge at 4 sqrt(t) = 2 plus fluctuation; median of max|lambda|
    // over 50 seeds sits in [1.8, 2.1].
    let maxima: Vec<f64> = map_trials(50, |s| {
        let mut rng = SeededRng::new(900, s as u64);
        sample_spectrum_matrix(2000, 0.25, Beta::One, &mut rng)
            .unwrap()
            .max_abs()
    });
    let med = median(&maxima);
    assert!((1.8..=2.1).contains(&med), "median edge {med}");
}

#[test]
fn sde_matches_matrix_marginal_smoke() {
    // Reduced-size version of the full pooled equivalence check.
    for beta in [Beta::One, Beta::Two] {
        let n = 200;
        let trials = 10;
        let pools: Vec<(Vec<f64>, Vec<f64>)> = map_trials(trials, |s| {
            let mut rng = SeededRng::new(82, s as u64);
            let path = simulate_path_sde(n, &[0.25, 1.0], beta, &mut rng, 1e-3).unwrap();
            let mut rng2 = SeededRng::new(83, s as u64);
            let cfg = sample_spectrum_matrix(n, 1.0, beta, &mut rng2).unwrap();
            (
                path.configs()[1].positions().to_vec(),
                cfg.positions().to_vec(),
            )
        });
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (x, y) in pools {
            a.extend(x);
            b.extend(y);
        }
        a.sort_unstable_by(f64::total_cmp);
        b.sort_unstable_by(f64::total_cmp);
        let ks = ks_distance_two_sample(&a, &b);
        assert!(ks <= 0.05, "beta {}: KS {ks}", beta.value());
    }
}

#[test]
fn dbm_holder_exponent_near_half() {
    // 1024-step paths on [0, 1]; median fitted exponent across seeds within
    // [0.35, 0.6], consistent with sqrt(t)-regularity.
    let times: Vec<f64> = (0..=1024).map(|k| k as f64 / 1024.0).collect();
    let exps: Vec<f64> = map_trials(20, |s| {
        let mut rng = SeededRng::new(84, s as u64);
        let path = simulate_path_matrix(100, &times, Beta::One, &mut rng).unwrap();
        match holder_estimate(&path).unwrap() {
            HolderEstimate::Exponent(e) => e,
            HolderEstimate::Undefined => panic!("random path cannot be constant"),
        }
    });
    let med = median(&exps);
    assert!((0.35..=0.6).contains(&med), "median exponent {med}");
}

#[test]
fn realized_hull_height_near_edge() {
    // n = 200, T = 1: sup of |lambda| over the path is typically in
    // [3.5, 4.8] (edge 4 sqrt(T) plus fluctuation).
    let times: Vec<f64> = (0..=32).map(|k| k as f64 / 32.0).collect();
    let hits: Vec<bool> = map_trials(50, |s| {
        let mut rng = SeededRng::new(85, s as u64);
        let path = simulate_path_matrix(200, &times, Beta::One, &mut rng).unwrap();
        let hull = hull_box(&path, 1.0);
        (3.5..=4.8).contains(&hull.m)
    });
    let frac = hits.iter().filter(|&&b| b).count() as f64 / hits.len() as f64;
    assert!(frac >= 0.9, "hull height in band for only {frac} of seeds");
}

fn conjugate_real(h: &SymmetricMatrix, q: &[Vec<Complex64>]) -> SymmetricMatrix {
    // Q^T H Q for an orthogonal Q given as real columns.
    let n = h.n();
    let mut hq = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += h.entry(i, k).re * q[j][k].re;
            }
            hq[i * n + j] = acc;
        }
    }
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += q[i][k].re * hq[k * n + j];
            }
            out[i * n + j] = acc;
        }
    }
    // Symmetrise exactly against roundoff drift.
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (out[i * n + j] + out[j * n + i]);
            out[i * n + j] = s;
            out[j * n + i] = s;
        }
    }
    SymmetricMatrix::from_real(n, out).unwrap()
}

#[test]
fn goe_spectrum_invariant_under_orthogonal_conjugation() {
    let mut rng = SeededRng::new(86, 0);
    let h = sample_goe(50, &mut rng).unwrap();
    // Eigenvectors of an independent draw form an orthogonal matrix.
    let other = sample_goe(50, &mut rng).unwrap();
    let (_, q) = eigen_sym_with_vectors(&other).unwrap();
    let conj = conjugate_real(&h, &q);
    let a = eigenvalues_sym(&h).unwrap();
    let b = eigenvalues_sym(&conj).unwrap();
    let scale = a.max_abs().max(1.0);
    for (x, y) in a.values().iter().zip(b.values().iter()) {
        assert!((x - y).abs() <= 1e-9 * scale, "spectrum moved: {x} vs {y}");
    }
}

#[test]
fn gue_spectrum_invariant_under_unitary_conjugation() {
    let mut rng = SeededRng::new(87, 0);
    let h = sample_gue(40, &mut rng).unwrap();
    let other = sample_gue(40, &mut rng).unwrap();
    let (_, q) = eigen_sym_with_vectors(&other).unwrap();
    let n = h.n();
    // U* H U via complex dense products.
    let mut hm = CMatrix::zeros(n);
    let mut um = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            hm.set(i, j, h.entry(i, j));
            um.set(i, j, q[j][i]);
        }
    }
    let mut ustar = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            ustar.set(i, j, um.get(j, i).conj());
        }
    }
    let prod = ustar.mul(&hm).mul(&um);
    let mut conj = SymmetricMatrix::zeros(n, Beta::Two).unwrap();
    for i in 0..n {
        for j in i..n {
            let v = 0.5 * (prod.get(i, j) + prod.get(j, i).conj());
            let v = if i == j { Complex64::new(v.re, 0.0) } else { v };
            conj.set_entry(i, j, v);
        }
    }
    let a = eigenvalues_sym(&h).unwrap();
    let b = eigenvalues_sym(&conj).unwrap();
    let scale = a.max_abs().max(1.0);
    for (x, y) in a.values().iter().zip(b.values().iter()) {
        assert!((x - y).abs() <= 1e-9 * scale, "spectrum moved: {x} vs {y}");
    }
}

//! Property tests for the structural invariants.

use msle_core::dbm::{simulate_path_sde, Beta, ParticleConfig};
use msle_core::numerics::{eigenvalues_sym, sample_goe, SymmetricMatrix};
use msle_core::stieltjes::{m_infty_delta0, m_n};
use msle_core::SeededRng;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_satisfies_fixed_point(
        re in -6.0f64..6.0,
        im in 0.05f64..8.0,
        t in 0.0f64..4.0,
    ) {
        let z = Complex64::new(re, im);
        let m = m_infty_delta0(z, t);
        prop_assert!(m.im < 0.0);
        let residual = (m * (z - 2.0 * t * m) - 2.0).norm();
        // Conditioning degrades near the support; the bound scales with 1/im.
        prop_assert!(residual <= 1e-11 * (1.0 + 1.0 / im));
    }

    #[test]
    fn empirical_transform_maps_down(
        seed in 0u64..1000,
        re in -5.0f64..5.0,
        im in 0.01f64..5.0,
        n in 1usize..40,
    ) {
        let mut rng = SeededRng::new(seed, 0);
        let positions: Vec<f64> = (0..n).map(|_| 3.0 * rng.standard_normal()).collect();
        let cfg = ParticleConfig::new(1.0, positions).unwrap();
        let m = m_n(&cfg, Complex64::new(re, im));
        prop_assert!(m.im < 0.0);
    }

    #[test]
    fn spectrum_sum_matches_trace(seed in 0u64..500, n in 2usize..24) {
        let mut rng = SeededRng::new(seed, 3);
        let m = sample_goe(n, &mut rng).unwrap();
        let s = eigenvalues_sym(&m).unwrap();
        let scale = m.frobenius_norm().max(1.0);
        prop_assert!((s.sum() - m.trace()).abs() <= 1e-10 * scale);
        prop_assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn spectrum_invariant_under_sign_and_shift(seed in 0u64..200, n in 2usize..16, shift in -2.0f64..2.0) {
        // Eigenvalues of H + shift I are eigenvalues of H shifted.
        let mut rng = SeededRng::new(seed, 4);
        let h = sample_goe(n, &mut rng).unwrap();
        let mut data = h.real_part().to_vec();
        for i in 0..n {
            data[i * n + i] += shift;
        }
        let shifted = SymmetricMatrix::from_real(n, data).unwrap();
        let a = eigenvalues_sym(&h).unwrap();
        let b = eigenvalues_sym(&shifted).unwrap();
        for (x, y) in a.values().iter().zip(b.values().iter()) {
            prop_assert!((x + shift - y).abs() <= 1e-9 * (1.0 + x.abs() + shift.abs()));
        }
    }

    #[test]
    fn sde_paths_stay_ordered(seed in 0u64..64, n in 2usize..8) {
        let mut rng = SeededRng::new(seed, 5);
        let path = simulate_path_sde(n, &[0.02, 0.05], Beta::One, &mut rng, 1e-3).unwrap();
        for cfg in path.configs() {
            prop_assert!(cfg.is_strictly_ordered());
        }
    }
}

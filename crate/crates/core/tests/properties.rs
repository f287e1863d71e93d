//! Property-based invariants over random geometries and materials.

use num_complex::Complex64;
use proptest::prelude::*;

use plasmode_core::charpoly::{eval_charpoly, fq_dp, fq_enum};
use plasmode_core::linalg::{lu_det, p_matrix_3d};
use plasmode_core::modes::solve_modes_2d;
use plasmode_core::structure::{
    alternating_contrasts, alternating_profile, contrasts, epsilon_from_lambda, ratio_table,
    Dimension, LayeredStructure,
};

fn radii_strategy(max_layers: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, 1..=max_layers).prop_map(|gaps| {
        let mut radii: Vec<f64> = gaps
            .iter()
            .scan(0.0, |acc, g| {
                *acc += g;
                Some(*acc)
            })
            .collect();
        radii.reverse();
        radii
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// t[i][k] = t[i][j] * t[j][k] for any i < j < k.
    #[test]
    fn ratio_table_multiplicative(radii in radii_strategy(12), p in 1u32..6) {
        let s = LayeredStructure::new(radii, Dimension::Three).unwrap();
        let t = ratio_table(&s, p);
        let n = t.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let lhs = t.ratio(i, k);
                    let rhs = t.ratio(i, j) * t.ratio(j, k);
                    prop_assert!(((lhs - rhs) / lhs).abs() < 1e-12);
                }
            }
        }
    }

    /// epsilon_from_lambda followed by contrasts recovers lambda.
    #[test]
    fn lambda_round_trip_3d(lambda in -0.999f64..1.999, layers in 1usize..8) {
        let eps = epsilon_from_lambda(lambda, 1.0, Dimension::Three).unwrap();
        prop_assume!(eps < 0.0);
        let profile = alternating_profile(-eps, 0.0, 1.0, layers).unwrap();
        let cv = contrasts(&profile, Dimension::Three).unwrap();
        prop_assert!((cv.values()[0].re - lambda).abs() < 1e-12);
        prop_assert!(cv.values()[0].im == 0.0);
    }

    #[test]
    fn lambda_round_trip_2d(lambda in -0.999f64..0.999, layers in 1usize..8) {
        let eps = epsilon_from_lambda(lambda, 1.0, Dimension::Two).unwrap();
        prop_assume!(eps < 0.0);
        let profile = alternating_profile(-eps, 0.0, 1.0, layers).unwrap();
        let cv = contrasts(&profile, Dimension::Two).unwrap();
        prop_assert!((cv.values()[0].re - lambda).abs() < 1e-12);
    }

    /// Alternating contrasts come out as the exact pattern.
    #[test]
    fn alternating_pattern_exact(eps_star in 0.05f64..20.0, layers in 1usize..12) {
        let profile = alternating_profile(eps_star, 0.0, 1.0, layers).unwrap();
        let cv3 = contrasts(&profile, Dimension::Three).unwrap();
        let lambda = cv3.values()[0];
        for (idx, v) in cv3.values().iter().enumerate() {
            let expect = if idx % 2 == 0 { lambda } else { Complex64::new(1.0, 0.0) - lambda };
            prop_assert_eq!(*v, expect);
        }
        let cv2 = contrasts(&profile, Dimension::Two).unwrap();
        let lt = cv2.values()[0];
        for (idx, v) in cv2.values().iter().enumerate() {
            let expect = if idx % 2 == 0 { lt } else { -lt };
            prop_assert_eq!(*v, expect);
        }
    }

    /// The two coefficient routes agree, and both match the LU determinant
    /// at a random contrast.
    #[test]
    fn coefficient_routes_agree(radii in radii_strategy(10), re in -1.5f64..2.5, im in -1.0f64..1.0) {
        let s = LayeredStructure::new(radii, Dimension::Three).unwrap();
        let t = ratio_table(&s, 3);
        let a = fq_enum(&t).unwrap();
        let b = fq_dp(&t);
        for (ca, cb) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((ca - cb).abs() <= 1e-12 * ca.abs().max(1e-30));
        }
        let lambda = Complex64::new(re, im);
        let det = lu_det(&p_matrix_3d(
            &s,
            alternating_contrasts(lambda, s.layer_count(), Dimension::Three).values(),
        ));
        let poly = eval_charpoly(&b, lambda);
        prop_assert!((det - poly).norm() <= 1e-9 * det.norm().max(1.0));
    }

    /// Mode pairs sum to one exactly, and counts add up.
    #[test]
    fn mode_pair_sum_exact(radii in radii_strategy(14)) {
        let s = LayeredStructure::new(radii, Dimension::Three).unwrap();
        let ms = plasmode_core::modes::solve_modes_3d(&s, 1.0).unwrap();
        prop_assert_eq!(ms.modes.len(), s.layer_count() / 2);
        prop_assert_eq!(ms.lambda_multiset().len(), s.layer_count());
        for m in &ms.modes {
            prop_assert_eq!(m.lambda_plus + m.lambda_minus, 1.0);
            prop_assert!((-0.25 - 1e-9..=2.0 + 1e-9).contains(&m.q_star));
        }
    }

    /// 2D spectra stay real and inside [-1, 1].
    #[test]
    fn modes_2d_bounded(radii in radii_strategy(10), order in 1u32..5) {
        let s = LayeredStructure::new(radii, Dimension::Two).unwrap();
        let roots = solve_modes_2d(&s, order).unwrap();
        prop_assert_eq!(roots.len(), s.layer_count());
        for r in roots {
            prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&r));
        }
    }
}

use nalgebra::DMatrix;
use nitsche_core::linalg::{
    adjugate_identity_residual, analyze, bound_factor, cofactor_matrix, cross, determinant, verify_cross_inequality,
};
use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 3)
}

fn mat3() -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-2.0f64..2.0, 9).prop_map(|v| DMatrix::from_row_slice(3, 3, &v))
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lagrange_identity(x in vec3(), y in vec3()) {
        let c = cross(&[&x, &y]).unwrap();
        let lhs = dot(&c, &c);
        let rhs = dot(&x, &x) * dot(&y, &y) - dot(&x, &y).powi(2);
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + dot(&x, &x) * dot(&y, &y)));
        prop_assert!(dot(&c, &x).abs() < 1e-12 && dot(&c, &y).abs() < 1e-12);
    }

    #[test]
    fn cross_is_alternating(x in vec3(), y in vec3()) {
        let xy = cross(&[&x, &y]).unwrap();
        let yx = cross(&[&y, &x]).unwrap();
        for (u, v) in xy.iter().zip(&yx) {
            prop_assert!((u + v).abs() < 1e-14);
        }
        prop_assert!(cross(&[&x, &x]).unwrap().iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn inequality_and_adjugate_identity(a in mat3(), x in vec3(), y in vec3()) {
        let c = verify_cross_inequality(&a, &[&x, &y]).unwrap();
        prop_assert!(c.holds, "{:?}", c);
        let scale = analyze(&a).unwrap().hs_norm.powi(2) * dot(&x, &x).sqrt() * dot(&y, &y).sqrt();
        prop_assert!(adjugate_identity_residual(&a, &[&x, &y]).unwrap() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn cofactor_norm_is_product_of_two_singular_values(a in mat3()) {
        let m = analyze(&a).unwrap();
        let s = &m.singular_values;
        let cof = cofactor_matrix(&a);
        let op = analyze(&cof).unwrap().op_norm;
        prop_assert!((op - s[1] * s[2]).abs() < 1e-10 * (1.0 + s[1] * s[2]));
        prop_assert!((m.determinant.abs() - s[0] * s[1] * s[2]).abs() < 1e-10 * (1.0 + s[2].powi(3)));
    }
}

#[test]
fn orthogonal_matrices_attain_the_bound() {
    let (c, s) = (0.6f64, 0.8f64);
    let q = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
    let check = verify_cross_inequality(&q, &[[1.0, 2.0, 0.5], [-0.3, 0.1, 1.0]]).unwrap();
    assert!((check.lhs - check.rhs).abs() < 1e-12 * check.rhs, "{check:?}");
}

#[test]
fn bound_factor_limits() {
    assert!((bound_factor(1.0, 3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((bound_factor(f64::INFINITY, 3).unwrap() - 0.5).abs() < 1e-15);
    assert!(bound_factor(0.5, 3).is_err());
}

#[test]
fn four_by_four_determinant_matches_lu() {
    let a = DMatrix::from_row_slice(
        4,
        4,
        &[2.0, 1.0, 0.0, 3.0, -1.0, 4.0, 2.0, 0.5, 0.0, 1.5, -2.0, 1.0, 3.0, 0.0, 1.0, 2.0],
    );
    assert!((determinant(&a) - a.clone().lu().determinant()).abs() < 1e-12);
}

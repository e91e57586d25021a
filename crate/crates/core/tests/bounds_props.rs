use nitsche_core::bounds::{beprim_min_ratio, check_all, ence_lhs, grad_rhs, pola_check, psi, remark_factor};
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = (f64, f64)> {
    (0.01f64..0.98, 0.01f64..0.98).prop_filter_map("ordered", |(x, y)| {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        (hi - lo > 1e-6).then_some((lo, hi))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn forms_agree((a, b) in pair(), (alpha, beta) in pair()) {
        let [e, bp, p] = check_all(a, b, alpha, beta).unwrap();
        prop_assert_eq!(e.feasible, bp.feasible);
        prop_assert_eq!(e.feasible, p.feasible);
        let s2 = (2.0 * e.inputs.alpha_h).sinh();
        let d = p.lhs / (e.inputs.beta_h - e.inputs.alpha_h);
        prop_assert!((p.margin - s2 * d * e.margin).abs() <= 1e-10 * p.lhs.abs().max(p.rhs.abs()));
        let scaled = s2 / e.inputs.alpha_h * e.margin;
        prop_assert!((bp.margin - scaled).abs() <= 1e-10 * bp.lhs.abs().max(bp.rhs.abs()));
    }

    #[test]
    fn grad_rhs_is_positive((a, b) in pair()) {
        prop_assert!(grad_rhs(a, b).unwrap() > 0.0);
    }

    #[test]
    fn min_ratio_exceeds_one((a, b) in pair(), alpha_h in 1e-3f64..5.0) {
        let (ah, bh) = (2.0 * a.atanh(), 2.0 * b.atanh());
        let m = beprim_min_ratio(ah, bh, alpha_h).unwrap();
        prop_assert!(m > 1.0);
        prop_assert!(m >= 1.0 + psi(ah, bh).unwrap());
        let on_bound = pola_check(a, b, alpha_h, alpha_h * m).unwrap();
        // beta' - alpha' loses digits when the increment is tiny.
        let d = 1.0 + ((1.0 - a * a) / (1.0 - b * b)).ln();
        prop_assert!(on_bound.margin.abs() <= 1e-10 * on_bound.rhs + 1e-15 * alpha_h * m * d);
    }

    #[test]
    fn hyperbolic_identities(t in 1e-4f64..0.999) {
        let log_form = ((1.0 + t) / (1.0 - t)).ln();
        prop_assert!((2.0 * t.atanh() - log_form).abs() <= 1e-13 * log_form.max(1.0));
        let sinh_form = (4.0 * t.atanh()).sinh();
        let rational = 4.0 * t * (1.0 + t * t) / (1.0 - t * t).powi(2);
        prop_assert!((sinh_form - rational).abs() <= 1e-13 * rational.max(1.0) * 10.0);
    }
}

#[test]
fn ence_log_term_is_the_hyperbolic_difference() {
    let (alpha, beta) = (0.3f64, 0.7f64);
    let expected = (2.0 * beta.atanh() - 2.0 * alpha.atanh()) / (4.0 * alpha.atanh()).sinh();
    assert!((ence_lhs(alpha, beta).unwrap() - expected).abs() < 1e-14);
}

#[test]
fn grad_rhs_vanishes_as_radii_merge() {
    let mut prev = f64::INFINITY;
    for k in 1..8 {
        let g = grad_rhs(0.5, 0.5 + 10f64.powi(-k)).unwrap();
        assert!(g < prev);
        prev = g;
    }
    assert!(prev < 1e-13);
    assert!((grad_rhs(0.5, 0.9).unwrap() - 0.0604).abs() < 5e-5);
}

#[test]
fn remark_factor_exceeds_two() {
    let mut x = 1e-6;
    while x <= 5.0 {
        assert!(remark_factor(x).unwrap() > 2.0);
        x *= 1.3;
    }
    assert!((remark_factor(1e-6).unwrap() - 2.0).abs() < 1e-9);
}

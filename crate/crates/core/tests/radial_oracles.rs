use nitsche_core::radial::{
    closed_form_slope, identity_solution, integrate_fixed_step, integrate_ivp, inversion_solution, solve_radial_bvp,
    terminal_value, IvpOptions,
};

#[test]
fn ivp_reproduces_closed_forms() {
    let (t0, t1) = (0.2f64.ln(), 0.9f64.ln());
    let p = integrate_ivp(t0, identity_solution(t0), closed_form_slope(t0), t1, 1e-10, 3).unwrap();
    let err = p.t.iter().zip(&p.y).map(|(t, y)| (y - identity_solution(*t)).abs()).fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");

    let p = integrate_ivp(0.1, inversion_solution(0.1), closed_form_slope(0.1), 2.0, 1e-10, 3).unwrap();
    let err = p.t.iter().zip(&p.y).map(|(t, y)| (y - inversion_solution(*t)).abs()).fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn fixed_step_converges_at_fifth_order() {
    let (t0, t1) = (0.2f64.ln(), 0.8f64.ln());
    let err = |steps| {
        let p = integrate_fixed_step(t0, identity_solution(t0), closed_form_slope(t0), t1, steps, 3).unwrap();
        (p.y[p.len() - 1] - identity_solution(t1)).abs()
    };
    // Averaged over three halvings; single ratios are noisy before the asymptotic regime.
    let order = (err(20) / err(160)).log2() / 3.0;
    assert!((4.5..6.5).contains(&order), "{order}");
}

#[test]
fn bvp_recovers_the_identity() {
    let (a, b) = (0.2f64, 0.9f64);
    let (ah, bh) = (2.0 * a.atanh(), 2.0 * b.atanh());
    let r = solve_radial_bvp(ah, bh, ah, bh, 3).unwrap();
    assert!(r.converged && r.residual.abs() < 1e-9, "{}", r.residual);
    let err = r.profile.t.iter().zip(&r.profile.y).map(|(t, y)| (y - identity_solution(*t)).abs()).fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
    assert!(r.proper_candidate);
}

#[test]
fn bvp_solution_is_consistent_with_the_ivp() {
    let r = solve_radial_bvp(0.4, 2.0, 0.3, 2.5, 3).unwrap();
    assert!(r.converged);
    let end = terminal_value(0.4, 2.0, 0.3, r.initial_slope, 3, &IvpOptions::default()).unwrap();
    assert!((end - 2.5).abs() < 1e-9);
}

#[test]
fn terminal_value_increases_with_slope() {
    let opts = IvpOptions::default();
    let mut prev = f64::NEG_INFINITY;
    for k in 0..10 {
        let v = terminal_value(0.4, 2.0, 0.3, 0.1 * k as f64, 3, &opts).unwrap();
        assert!(v > prev);
        prev = v;
    }
    // Steeper starts blow up before ln b.
    assert!(matches!(
        terminal_value(0.4, 2.0, 0.3, 1.5, 3, &opts),
        Err(nitsche_core::Error::Divergence { .. })
    ));
}

use std::f64::consts::PI;

use lacunary::expansion::{self, RealExpansionOptions, Truncation};
use lacunary::reference::TABLE2;
use lacunary::{exactval, saddles, stokes, ProblemContext};
use proptest::prelude::*;

#[test]
fn table2_errors_fall_with_the_order() {
    for col in &TABLE2 {
        let ctx = ProblemContext::real(col.n, col.x).unwrap();
        let exact = exactval::eval_direct(col.n, ctx.z()).unwrap().value.re;
        let errs: Vec<f64> = (0..=3)
            .map(|j| {
                let e = expansion::expand_real(&ctx, j, None).unwrap();
                (e.total.re - exact).abs() / exact
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }
}

#[test]
fn leading_order_formula_tracks_the_leading_term() {
    let n = 100_000;
    let ctx = ProblemContext::real(n, 2.0).unwrap();
    let lead = expansion::expand_real_with(
        &ctx,
        &RealExpansionOptions {
            truncation: Truncation::uniform(0),
            k_max: Some(0),
        },
    )
    .unwrap();
    let gn = expansion::gn_approx(n, 4.0).unwrap();
    let ratio = gn / lead.total.re;
    assert!(
        (ratio - 1.0).abs() < 1.0 / f64::from(n).ln(),
        "ratio {ratio}"
    );
}

#[test]
fn zero_angle_takes_the_uniform_real_route() {
    let ctx = ProblemContext::polar(200, 1.5, 0.0).unwrap();
    let a = stokes::expand_complex(&ctx, 3).unwrap();
    let b = expansion::expand_real_with(
        &ctx,
        &RealExpansionOptions {
            truncation: Truncation::uniform(3),
            k_max: None,
        },
    )
    .unwrap();
    assert_eq!(a.total, b.total);
}

#[test]
fn negative_angle_is_the_conjugate() {
    let up = ProblemContext::polar(200, 1.5, 0.3 * PI).unwrap();
    let down = ProblemContext::polar(200, 1.5, -0.3 * PI).unwrap();
    let a = stokes::expand_complex(&up, 3).unwrap().total;
    let b = stokes::expand_complex(&down, 3).unwrap().total;
    assert!((a - b.conj()).norm() < 1e-14 * a.norm());
}

fn peak_and_width(abs_x: f64) -> (i64, usize) {
    let ctx = ProblemContext::polar(200, abs_x, 0.4 * PI).unwrap();
    let profile = stokes::contribution_profile(&ctx, -60, 1).unwrap();
    let (k, peak) = profile
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    (k, profile.iter().filter(|p| p.1 > peak - 8.0).count())
}

#[test]
fn contributions_spread_as_x_approaches_the_unit_circle() {
    let (k_a, w_a) = peak_and_width(1.5);
    let (k_b, w_b) = peak_and_width(1.1);
    assert!(k_a <= 0 && k_b <= 0);
    assert!(k_b < k_a, "peak moves left: {k_a} -> {k_b}");
    assert!(w_b > w_a, "width {w_a} -> {w_b}");
}

#[test]
fn stokes_angles_decrease_with_k() {
    for (n, a) in [(200u32, 2.0f64), (100, 3.0), (400, 1.5)] {
        let chart = stokes::stokes_chart(n, a, 6).unwrap();
        assert!(chart
            .events
            .windows(2)
            .all(|w| w[1].theta_star < w[0].theta_star));
        assert!(chart
            .events
            .iter()
            .all(|e| e.residual < stokes::CONNECTION_TOL));
    }
}

#[test]
fn contributing_count_grows_as_theta_falls() {
    let chart = stokes::stokes_chart(200, 2.0, 8).unwrap();
    let mut last = 0;
    for t in [0.45, 0.3, 0.1, 0.05, 0.03] {
        let k = stokes::contributing_count(t * PI, &chart).unwrap();
        assert!(k >= last);
        last = k;
    }
    assert!(last > 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn coefficient_routes_agree(n in 50u32..=5000, a in 1.05f64..3.0, t in 0.0f64..0.5, k in -5i64..=5) {
        let ctx = ProblemContext::polar(n, a, t * PI).unwrap();
        let s = saddles::refine_with_fallback(k, None, &ctx).unwrap();
        prop_assert!(lacunary::coeffs::cross_check(&s, &ctx).unwrap() < 1e-9);
    }

    #[test]
    fn real_expansion_is_close_to_exact(n in 100u32..=1000, x in 1.1f64..3.0) {
        let ctx = ProblemContext::real(n, x).unwrap();
        let exact = exactval::eval_direct(n, ctx.z()).unwrap().value;
        let e = expansion::expand_real(&ctx, 3, None).unwrap();
        prop_assert!(e.relative_error(exact) < 1e-3);
    }

    #[test]
    fn sigma_form_agrees(n in 50u32..=2000, x in 1.1f64..3.0, k in -4i64..=4) {
        let ctx = ProblemContext::real(n, x).unwrap();
        let s = saddles::refine_with_fallback(k, None, &ctx).unwrap();
        let set = lacunary::coeffs::c_coefficients(&s.quantities, &ctx).unwrap();
        let a = expansion::contribution(&s, &set, 3, &ctx).unwrap().value;
        let b = expansion::contribution_sigma_form(&s, &set, 3, &ctx).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm());
    }
}

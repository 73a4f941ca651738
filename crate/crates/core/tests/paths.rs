use std::f64::consts::PI;

use lacunary::contour::{self, PathKind, Terminus, TraceOptions};
use lacunary::reproduce;
use lacunary::{saddles, ProblemContext};

#[test]
fn escaping_branch_heads_along_the_quadratic_direction() {
    let ctx = ProblemContext::polar(100, 3.0, 0.30 * PI).unwrap();
    let s1 = saddles::refine_with_fallback(1, None, &ctx).unwrap();
    let (a, b) = contour::trace_descent(&s1, &ctx, &TraceOptions::for_context(&ctx)).unwrap();
    let dir = [a.terminus, b.terminus]
        .into_iter()
        .find_map(|t| match t {
            Terminus::Infinity(d) => Some(d),
            _ => None,
        })
        .expect("one branch escapes");
    // Far out, Im(s^2 / log x) is constant, so arg s tends to arg(log x)/2.
    let limit = ctx.logx().arg() / 2.0;
    assert!((dir - limit).abs() < 0.1, "dir {dir}, limit {limit}");
    assert!(dir.abs() < PI / 4.0);
}

#[test]
fn traced_paths_keep_their_phase_and_descend() {
    for (n, a, t) in [
        (200u32, 2.0f64, 0.0f64),
        (100, 3.0, 0.18),
        (100, 3.0, 0.30),
        (400, 1.2, 0.4),
    ] {
        let ctx = ProblemContext::polar(n, a, t * PI).unwrap();
        let opts = TraceOptions::for_context(&ctx);
        for s in saddles::saddle_catalog(-2, 3, &ctx).unwrap() {
            let (p, q) = contour::trace_descent(&s, &ctx, &opts).unwrap();
            for path in [&p, &q] {
                assert_eq!(path.kind, PathKind::Descent);
                assert!(
                    path.max_phase_error < 1e-6,
                    "k={} err {}",
                    s.k,
                    path.max_phase_error
                );
                assert!(path.min_ascent_step > -1e-10);
                assert_ne!(path.terminus, Terminus::StepLimit);
            }
        }
    }
}

#[test]
fn serpentine_termini_leave_no_gaps() {
    let ctx = ProblemContext::real(200, 2.0).unwrap();
    let cat = saddles::saddle_catalog(-4, 4, &ctx).unwrap();
    let paths = contour::serpentine(&cat, &ctx, &TraceOptions::for_context(&ctx)).unwrap();
    assert_eq!(paths.first().unwrap().start, Terminus::Singularity(-5));
    assert_eq!(paths.last().unwrap().end, Terminus::Singularity(4));
    for w in paths.windows(2) {
        assert_eq!(w[0].end, w[1].start);
    }
}

#[test]
fn single_contour_matches_its_series() {
    let ctx = ProblemContext::real(200, 1.2).unwrap();
    let s0 = saddles::refine_with_fallback(0, None, &ctx).unwrap();
    let (a, b) = contour::trace_descent(&s0, &ctx, &TraceOptions::for_context(&ctx)).unwrap();
    let c0 = contour::path_integral(&contour::ContourPath::from_branches(&a, &b), &ctx).unwrap();
    let series = lacunary::expansion::contribution_at(&s0, 3, &ctx).unwrap();
    let rel = (c0.value - series.value).norm() / series.value.norm();
    // Next omitted term of the series bounds the gap.
    assert!(rel < 1e-8, "rel {rel:e}");
}

#[test]
fn figures_are_deterministic() {
    for f in 1..=3 {
        let (_, a) = reproduce::figure_documents(f).unwrap();
        let (_, b) = reproduce::figure_documents(f).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn figure_reports_pass() {
    for f in 1..=3 {
        let (report, docs) = reproduce::figure_documents(f).unwrap();
        assert!(
            report.all_pass(),
            "figure {f}: {:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert!(docs
            .iter()
            .any(|(name, body)| name.ends_with(".svg") && body.contains("</svg>")));
    }
}

#[test]
fn stokes_connection_in_panel_b() {
    let (report, _) = reproduce::figure_documents(2).unwrap();
    let row = report
        .rows
        .iter()
        .find(|r| r.label.starts_with("(b) C_1 distance"))
        .unwrap();
    assert!(row.computed[0] < 1e-3);
}

//! Per-saddle contributions `J_k` and the assembled expansions, together
//! with the two closed-form approximations for real `x`: the theta-series
//! formula built on `r(n)` and the Lambert-W approximation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::coeffs::{self, CoefficientSet};
use crate::context::ProblemContext;
use crate::error::{Error, Result};
use crate::saddles::{self, Saddle};

/// Highest series order available from [`coeffs`].
pub const MAX_ORDER: usize = 3;

/// `(1/2)_j` for `j = 0..=3`.
pub const POCHHAMMER_HALF: [f64; 4] = [1.0, 0.5, 0.75, 1.875];

/// Relative size below which a saddle's prefactor is dropped.
pub const NEGLIGIBLE: f64 = 1e-16;

const MAX_REAL_SADDLES: i64 = 64;

/// Principal-branch Lambert W for `a >= 0`: the `t >= 0` with `t e^t = a`.
pub fn lambert_w(a: f64) -> Result<f64> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::Domain(format!(
            "lambert_w needs a finite a >= 0, got {a}"
        )));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    if a > 1e100 {
        // Newton on t + ln t = ln a keeps every quantity in range.
        let la = a.ln();
        let mut t = la - la.ln();
        for _ in 0..64 {
            let step = (t + t.ln() - la) / (1.0 + 1.0 / t);
            t -= step;
            if step.abs() <= 1e-16 * t {
                break;
            }
        }
        return Ok(t);
    }
    let mut t = if a > std::f64::consts::E {
        let la = a.ln();
        la - la.ln()
    } else {
        (1.0 + a).ln() * 0.75
    };
    for _ in 0..64 {
        // Halley step on f(t) = t e^t - a.
        let et = t.exp();
        let f = t * et - a;
        let f1 = et * (t + 1.0);
        let f2 = et * (t + 2.0);
        let step = f / (f1 - f * f2 / (2.0 * f1));
        t -= step;
        if step.abs() <= 1e-16 * t.abs() {
            break;
        }
    }
    Ok(t)
}

/// The positive root of `t (e^t + sqrt y) = n sqrt(y) log y`.
pub fn r_of_n(n: u32, y: f64) -> Result<f64> {
    if y.is_nan() || y <= 1.0 {
        return Err(Error::Domain(format!("r(n) needs y > 1, got {y}")));
    }
    let sy = y.sqrt();
    let rhs = f64::from(n) * sy * y.ln();
    let f = |t: f64| t * (t.exp() + sy) - rhs;
    // f is increasing on t > 0 with f(0) < 0; t e^t <= rhs bounds the root.
    let (mut lo, mut hi) = (0.0, lambert_w(rhs)?.max(1e-300) * 1.0 + 1e-12);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-6 * hi {
            break;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..20 {
        let step = f(t) / (t.exp() * (1.0 + t) + sy);
        t -= step;
        if step.abs() <= 1e-16 * t {
            break;
        }
    }
    Ok(t)
}

/// `Theta(y) = 1 + 2 sum_k exp(-2 pi^2 k^2 / log y) cos(2 pi k r / log y)`,
/// summed while the exponential factor is at least `1e-30`.
pub fn theta_series(r: f64, y: f64) -> f64 {
    let ly = y.ln();
    let mut sum = 1.0;
    for k in 1.. {
        let k = f64::from(k);
        let damp = (-2.0 * PI * PI * k * k / ly).exp();
        if damp < 1e-30 {
            break;
        }
        sum += 2.0 * damp * (2.0 * PI * k * r / ly).cos();
    }
    sum
}

/// `r^{-1/2} exp((r^2 + 2r)/(2 log y)) Theta(y)` with `r = r_of_n(n, y)`.
pub fn gn_approx(n: u32, y: f64) -> Result<f64> {
    let r = r_of_n(n, y)?;
    Ok(((r * r + 2.0 * r) / (2.0 * y.ln())).exp() / r.sqrt() * theta_series(r, y))
}

/// `w^{-1/2} exp((w^2 + 2w)/(2 log y))` with `w = W(n sqrt(y) log y)`.
pub fn conjecture_approx(n: u32, y: f64) -> Result<f64> {
    if y.is_nan() || y <= 1.0 {
        return Err(Error::Domain(format!("conjecture needs y > 1, got {y}")));
    }
    let w = lambert_w(f64::from(n) * y.sqrt() * y.ln())?;
    Ok(((w * w + 2.0 * w) / (2.0 * y.ln())).exp() / w.sqrt())
}

/// One saddle's contribution
/// `J_k ~ e^{-n psi(s_k)} / sqrt(1 + omega_k) * sum_j (1/2)_j c_jk / (log n)^j`.
#[derive(Debug, Clone, Serialize)]
pub struct SaddleContribution {
    pub k: i64,
    pub value: Complex64,
    pub prefactor: Complex64,
    /// `-n psi(s_k) - log(1 + omega_k)/2`; `prefactor = exp(log_prefactor)`.
    pub log_prefactor: Complex64,
    pub series_terms: Vec<Complex64>,
    pub j_max: usize,
}

impl SaddleContribution {
    pub fn series_sum(&self) -> Complex64 {
        self.series_terms.iter().sum()
    }

    /// Whether successive series terms shrink, as expected in the
    /// asymptotic regime.
    pub fn terms_decreasing(&self) -> bool {
        self.series_terms
            .windows(2)
            .all(|w| w[1].norm() < w[0].norm())
    }

    /// `log10 |J_k|`, finite even when `|J_k|` leaves binary64 range.
    pub fn log10_magnitude(&self) -> f64 {
        (self.log_prefactor.re + self.series_sum().norm().ln()) / std::f64::consts::LN_10
    }
}

fn check_order(j_max: usize) -> Result<()> {
    if j_max > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "truncation order {j_max} exceeds {MAX_ORDER}"
        )));
    }
    Ok(())
}

fn series_terms(coeffs: &CoefficientSet, j_max: usize, ctx: &ProblemContext) -> Vec<Complex64> {
    let ln = ctx.nf().ln();
    (0..=j_max)
        .map(|j| POCHHAMMER_HALF[j] * coeffs.c[j] / ln.powi(j as i32))
        .collect()
}

pub fn contribution(
    saddle: &Saddle,
    coeffs: &CoefficientSet,
    j_max: usize,
    ctx: &ProblemContext,
) -> Result<SaddleContribution> {
    check_order(j_max)?;
    let one_plus_omega = 1.0 + saddle.quantities.omega;
    if one_plus_omega.norm() < 1e-14 {
        return Err(Error::DegenerateSaddle(format!(
            "1 + omega vanishes at saddle k = {}",
            saddle.k
        )));
    }
    let log_prefactor = -ctx.nf() * saddle.psi_at_s - 0.5 * one_plus_omega.ln();
    let prefactor = log_prefactor.exp();
    let series_terms = series_terms(coeffs, j_max, ctx);
    let value = prefactor * series_terms.iter().sum::<Complex64>();
    Ok(SaddleContribution {
        k: saddle.k,
        value,
        prefactor,
        log_prefactor,
        series_terms,
        j_max,
    })
}

/// The same contribution written through `sigma_k = s_k - 2 pi k`:
/// `exp(-(pi^2 k^2 + pi k sigma_k)/log x) e^{-n psi(sigma_k)} / sqrt(1 + omega_k) * series`.
pub fn contribution_sigma_form(
    saddle: &Saddle,
    coeffs: &CoefficientSet,
    j_max: usize,
    ctx: &ProblemContext,
) -> Result<Complex64> {
    check_order(j_max)?;
    let k = saddle.k as f64;
    let shift = (PI * PI * k * k + PI * k * saddle.sigma) / ctx.logx();
    let log_pre =
        -shift - ctx.nf() * saddle.psi_at_sigma - 0.5 * (1.0 + saddle.quantities.omega).ln();
    Ok(log_pre.exp() * series_terms(coeffs, j_max, ctx).iter().sum::<Complex64>())
}

/// Refine nothing; build coefficients and the contribution for a saddle.
pub fn contribution_at(
    saddle: &Saddle,
    j_max: usize,
    ctx: &ProblemContext,
) -> Result<SaddleContribution> {
    let set = coeffs::c_coefficients(&saddle.quantities, ctx)?;
    contribution(saddle, &set, j_max, ctx)
}

/// Series orders used for the dominant saddle and for all others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub dominant: usize,
    pub others: usize,
}

impl Truncation {
    /// Order `j` at `k = 0` and the leading term only for `k != 0`; this is
    /// the convention under which the published real-axis values reproduce.
    pub fn published(j: usize) -> Self {
        Self {
            dominant: j,
            others: 0,
        }
    }

    pub fn uniform(j: usize) -> Self {
        Self {
            dominant: j,
            others: j,
        }
    }

    fn order(&self, k: i64) -> usize {
        if k == 0 {
            self.dominant
        } else {
            self.others
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionResult {
    pub total: Complex64,
    /// `total = scaled_total * exp(log_scale)`; stays finite when `total` overflows.
    pub scaled_total: Complex64,
    pub log_scale: f64,
    pub contributions: Vec<SaddleContribution>,
    pub k_min_used: i64,
    pub k_max_used: i64,
    pub truncation_note: String,
}

impl ExpansionResult {
    pub fn relative_error(&self, exact: Complex64) -> f64 {
        (self.total - exact).norm() / exact.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RealExpansionOptions {
    pub truncation: Truncation,
    /// Highest `k` summed; `None` stops at the first negligible prefactor.
    pub k_max: Option<i64>,
}

/// `P_n(x^-2) ~ J_0 + 2 Re sum_{k>=1} J_k` for real `x > 1`, with the
/// published truncation convention.
pub fn expand_real(
    ctx: &ProblemContext,
    j_max: usize,
    k_max: Option<i64>,
) -> Result<ExpansionResult> {
    expand_real_with(
        ctx,
        &RealExpansionOptions {
            truncation: Truncation::published(j_max),
            k_max,
        },
    )
}

pub fn expand_real_with(
    ctx: &ProblemContext,
    opts: &RealExpansionOptions,
) -> Result<ExpansionResult> {
    if !ctx.is_real() {
        return Err(Error::InvalidParameter(
            "expand_real needs a real x; use expand_complex".into(),
        ));
    }
    check_order(opts.truncation.dominant)?;
    check_order(opts.truncation.others)?;
    let s0 = saddles::refine_with_fallback(0, None, ctx)?;
    let j0 = contribution_at(&s0, opts.truncation.dominant, ctx)?;
    let limit = opts.k_max.unwrap_or(MAX_REAL_SADDLES).max(0);
    let mut contributions = vec![j0];
    let mut prev = s0.s;
    for k in 1..=limit {
        let saddle = saddles::refine_with_fallback(k, Some(prev + 2.0 * PI), ctx)?;
        prev = saddle.s;
        let jk = contribution_at(&saddle, opts.truncation.order(k), ctx)?;
        let negligible = jk.log_prefactor.re - contributions[0].log_prefactor.re < NEGLIGIBLE.ln();
        contributions.push(jk);
        if opts.k_max.is_none() && negligible {
            break;
        }
    }
    let log_scale = contributions[0].log_prefactor.re;
    let scaled = |c: &SaddleContribution| (c.log_prefactor - log_scale).exp() * c.series_sum();
    let lead = scaled(&contributions[0]);
    let rest: f64 = contributions[1..].iter().map(|c| 2.0 * scaled(c).re).sum();
    let scaled_total = Complex64::new(lead.re + rest, lead.im);
    let k_max_used = contributions.last().map_or(0, |c| c.k);
    Ok(ExpansionResult {
        total: scaled_total * log_scale.exp(),
        scaled_total,
        log_scale,
        contributions,
        k_min_used: -k_max_used,
        k_max_used,
        truncation_note: format!(
            "j <= {} at k = 0, j <= {} for 1 <= |k| <= {k_max_used}; conjugate pairs folded",
            opts.truncation.dominant, opts.truncation.others
        ),
    })
}

/// Assemble an arbitrary list of contributions by plain summation in a
/// common scale.
pub fn assemble(contributions: Vec<SaddleContribution>, note: String) -> ExpansionResult {
    let log_scale = contributions
        .iter()
        .map(|c| c.log_prefactor.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let scaled_total: Complex64 = contributions
        .iter()
        .map(|c| (c.log_prefactor - log_scale).exp() * c.series_sum())
        .sum();
    let k_min_used = contributions.iter().map(|c| c.k).min().unwrap_or(0);
    let k_max_used = contributions.iter().map(|c| c.k).max().unwrap_or(0);
    ExpansionResult {
        total: scaled_total * log_scale.exp(),
        scaled_total,
        log_scale,
        contributions,
        k_min_used,
        k_max_used,
        truncation_note: note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactval::eval_direct;

    #[test]
    fn lambert_w_values() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!(lambert_w(-0.1).is_err());
        for a in [1e-8, 0.3, 1.0, 7.5, 1e3, 1e12, 1e99] {
            let w = lambert_w(a).unwrap();
            assert!((w * w.exp() - a).abs() <= 1e-14 * a, "a = {a}");
        }
        let w = lambert_w(1e300).unwrap();
        assert!((w + w.ln() - 1e300f64.ln()).abs() < 1e-14 * w);
    }

    #[test]
    fn lambert_w_against_bisection() {
        // Bisection on t e^t = 1 over [0, 1].
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let w = lambert_w(1.0).unwrap();
        assert!((w - lo).abs() < 1e-15);
        assert!((w - 0.567_143_290_409_783_8).abs() < 1e-15);
    }

    #[test]
    fn r_of_n_defining_equation() {
        for (n, y) in [(1000u32, 4.0), (200, 1.44), (7, 1.01), (1_000_000, 9.0)] {
            let t = r_of_n(n, y).unwrap();
            let rhs = f64::from(n) * y.sqrt() * y.ln();
            assert!((t * (t.exp() + y.sqrt()) - rhs).abs() < 1e-12 * rhs);
        }
        assert!(r_of_n(10, 1.0).is_err());
    }

    #[test]
    fn r_of_n_tracks_the_imaginary_saddle() {
        let r = r_of_n(1000, 4.0).unwrap();
        assert!((r - 6.112742).abs() < 0.5);
        let n = 1_000_000u32;
        let alpha = 4.0 * 2f64.ln();
        let ln = f64::from(n).ln();
        let approx = (f64::from(n) * alpha / ln).ln() + ln.ln() / ln;
        let r = r_of_n(n, 4.0).unwrap();
        assert!((r - approx).abs() < 0.05 * r);
    }

    #[test]
    fn theta_series_limit() {
        assert!((theta_series(3.7, 1.0 + 1e-6) - 1.0).abs() < 1e-300);
        assert!((theta_series(3.7, 4.0) - 1.0).abs() < 2e-6);
    }

    #[test]
    fn conjecture_is_same_order_as_exact() {
        let exact = eval_direct(200, Complex64::new(0.25, 0.0))
            .unwrap()
            .value
            .re;
        let ratio = conjecture_approx(200, 4.0).unwrap() / exact;
        assert!((0.5..=2.0).contains(&ratio), "ratio {ratio}");
        let w = lambert_w(200.0 * 2.0 * 4f64.ln()).unwrap();
        let target = 200.0 * 2.0 * 4f64.ln();
        assert!((w * w.exp() - target).abs() < 1e-13 * target);
    }

    #[test]
    fn conjecture_over_gn_tends_to_one() {
        let gaps: Vec<f64> = [1_000u32, 10_000, 100_000, 1_000_000]
            .iter()
            .map(|&n| (conjecture_approx(n, 4.0).unwrap() / gn_approx(n, 4.0).unwrap() - 1.0).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn sigma_form_matches() {
        let ctx = ProblemContext::real(200, 2.0).unwrap();
        for k in 0..=3 {
            let s = saddles::refine_with_fallback(k, None, &ctx).unwrap();
            let set = coeffs::c_coefficients(&s.quantities, &ctx).unwrap();
            let a = contribution(&s, &set, 3, &ctx).unwrap().value;
            let b = contribution_sigma_form(&s, &set, 3, &ctx).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm(), "k = {k}");
        }
    }

    #[test]
    fn leading_term_only() {
        let ctx = ProblemContext::real(300, 1.4).unwrap();
        let s = saddles::refine_with_fallback(0, None, &ctx).unwrap();
        let c = contribution_at(&s, 0, &ctx).unwrap();
        let expect = (-ctx.nf() * s.psi_at_sigma).exp() / (1.0 + s.quantities.omega).sqrt();
        assert!((c.value - expect).norm() < 1e-14 * expect.norm());
        assert_eq!(c.series_terms.len(), 1);
    }

    #[test]
    fn real_total_has_no_imaginary_part() {
        for (n, x) in [(200, 1.2), (1000, 2.0), (400, 1.5)] {
            let ctx = ProblemContext::real(n, x).unwrap();
            let r = expand_real(&ctx, 3, None).unwrap();
            assert!(r.total.im.abs() < 1e-12 * r.total.norm());
        }
    }

    #[test]
    fn order_above_three_rejected() {
        let ctx = ProblemContext::real(200, 1.2).unwrap();
        assert!(expand_real(&ctx, 4, Some(1)).is_err());
    }
}

//! Ground truth for `P_n(z)`: direct summation of the `n + 1` terms and,
//! independently, quadrature of the Gaussian integral representation
//!
//! ```text
//! P_n(x^-2) = 1/(2 sqrt(pi log x)) * int_R exp(-s^2/(4 log x)) (1 + x e^{is})^n ds.
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::context::ProblemContext;
use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::{Error, Result};
use crate::quad::{self, AdaptiveOptions};
use crate::saddles;

/// Largest `n` for which binomials are taken from exact integers.
pub const EXACT_BINOMIAL_MAX_N: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub term_count: u64,
    /// `sum |term_k| / |value|`.
    pub condition: f64,
}

/// `C(n, k)` as an exact integer, for `n <= 60`.
pub fn binomial_exact(n: u32, k: u32) -> Option<u64> {
    if n > EXACT_BINOMIAL_MAX_N || k > n {
        return None;
    }
    let k = k.min(n - k);
    let mut c: u64 = 1;
    for i in 0..k {
        // c * (n - i) / (i + 1) stays integral and fits in u64 for n <= 60
        // when carried out in u128.
        c = (u128::from(c) * u128::from(n - i) / u128::from(i + 1)) as u64;
    }
    Some(c)
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

fn exponent(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// `sum_{k=0}^{n} C(n,k) z^{k(k-1)/2}` with compensated accumulation.
///
/// Binomials come from exact integers for `n <= 60` and from the
/// multiplicative recurrence `C(n,k+1) = C(n,k)(n-k)/(k+1)` above that.
/// Powers use binary exponentiation.
pub fn eval_direct(n: u32, z: Complex64) -> Result<EvalResult> {
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let mut mass = Compensated::default();
    let mut binom = 1.0f64;
    for k in 0..=n {
        if k > 0 {
            binom = match binomial_exact(n, k) {
                Some(b) => b as f64,
                None => binom * f64::from(n - k + 1) / f64::from(k),
            };
        }
        let term = binom * power(z, exponent(u64::from(k)));
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::Range { k: u64::from(k) });
        }
        re.add(term.re);
        im.add(term.im);
        mass.add(term.norm());
    }
    finish(n, Complex64::new(re.value(), im.value()), mass.value())
}

fn power(z: Complex64, e: u64) -> Complex64 {
    if e <= u64::from(u32::MAX) {
        z.powu(e as u32)
    } else {
        let mut acc = Complex64::new(1.0, 0.0);
        let mut base = z;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

fn finish(n: u32, value: Complex64, mass: f64) -> Result<EvalResult> {
    let condition = if value.norm() > 0.0 {
        (mass / value.norm()).max(1.0)
    } else {
        f64::INFINITY
    };
    Ok(EvalResult {
        value,
        term_count: u64::from(n) + 1,
        condition,
    })
}

/// Direct summation carried entirely in double-double arithmetic.
///
/// Intended for `|z|` near 1 with `arg z` near `pi`, where the terms cancel
/// heavily and the binary64 path loses digits in proportion to `condition`.
pub fn eval_direct_dd(n: u32, z: Complex64) -> Result<EvalResult> {
    let zz = ComplexDD::from_c64(z);
    let mut sum = ComplexDD::ZERO;
    let mut mass = DoubleDouble::ZERO;
    let mut binom = DoubleDouble::ONE;
    for k in 0..=n {
        if k > 0 {
            binom = binom.mul_f64(f64::from(n - k + 1)).div_f64(f64::from(k));
        }
        let term = zz.powu(exponent(u64::from(k))).scale(binom);
        if !term.is_finite() {
            return Err(Error::Range { k: u64::from(k) });
        }
        mass = mass + DoubleDouble::from_f64(term.to_c64().norm());
        sum = sum + term;
    }
    finish(n, sum.to_c64(), mass.to_f64())
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    /// The window ends where the integrand bound falls below this fraction
    /// of its value at the window centre.
    pub window_drop: f64,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            window_drop: 1e-30,
            max_panels: 40_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureOutcome {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Height `c` of the integration line `Im s = c`.
    pub line_height: f64,
    /// Half-width `S` of the window `|Re s| <= S`.
    pub half_width: f64,
    pub panels: usize,
}

/// [`eval_quadrature_with`] at default options, returning only the value.
pub fn eval_quadrature(ctx: &ProblemContext) -> Result<Complex64> {
    eval_quadrature_with(ctx, &QuadratureOptions::default()).map(|o| o.value)
}

/// Quadrature of the Gaussian integral representation.
///
/// The integrand is entire and the Gaussian factor decays in every
/// horizontal strip, so the real line is moved to `Im s = c` with `c` the
/// height of the `k = 0` saddle estimate. On that line the integrand peaks
/// near `Re s = 0` without the enormous cancellation present on the real
/// axis. The integrand is scaled by its value at `s = ic` to stay in range.
pub fn eval_quadrature_with(
    ctx: &ProblemContext,
    opts: &QuadratureOptions,
) -> Result<QuadratureOutcome> {
    let n = ctx.nf();
    let logx = ctx.logx();
    let x = ctx.x();
    let c = if ctx.n() >= 3 {
        saddles::saddle_guess(0, ctx).im.max(0.0)
    } else {
        0.0
    };
    let log_f = |s: Complex64| -> Complex64 {
        -s * s / (4.0 * logx) + n * (1.0 + x * (Complex64::i() * s).exp()).ln()
    };
    let centre = Complex64::new(0.0, c);
    let log_scale = log_f(centre);

    // |f(t + ic)| <= exp(-Re((t+ic)^2/(4 log x))) (1 + |x| e^{-c})^n.
    let periodic_bound = n * (1.0 + x.norm() * (-c).exp()).ln();
    let bound = |t: f64| -> f64 {
        let s = Complex64::new(t, c);
        (-s * s / (4.0 * logx)).re + periodic_bound - log_scale.re
    };
    let inv = (4.0 * logx).inv();
    // Vertex of the concave quadratic t -> bound(t).
    let vertex = if inv.re > 0.0 {
        (inv.im * c / inv.re).abs()
    } else {
        0.0
    };
    let cutoff = opts.window_drop.ln();
    let mut half = 1.0f64.max(2.0 * vertex);
    while bound(half) > cutoff || bound(-half) > cutoff {
        half *= 1.25;
        if half > 1e8 {
            return Err(Error::Quadrature {
                requested: opts.rel_tol,
                achieved: f64::INFINITY,
            });
        }
    }

    // Oscillation rate of the integrand along the line.
    let q = x.norm() * (-c).exp();
    let rate =
        n * q / (1.0 - q).abs().max(1e-3) + c / (2.0 * logx.norm()) + half / (2.0 * logx.norm());
    let initial = ((2.0 * half * rate / PI).ceil() as usize).clamp(8, opts.max_panels / 2);

    let integrand = |t: f64| (log_f(Complex64::new(t, c)) - log_scale).exp();
    let res = quad::integrate(
        integrand,
        -half,
        half,
        initial,
        AdaptiveOptions {
            rel_tol: opts.rel_tol,
            abs_tol: 0.0,
            max_panels: opts.max_panels,
        },
    )?;
    let norm = (2.0 * (PI * logx).sqrt()).inv();
    let value = res.value * log_scale.exp() * norm;
    Ok(QuadratureOutcome {
        value,
        error_estimate: res.error * log_scale.exp().norm() * norm.norm(),
        line_height: c,
        half_width: half,
        panels: res.panels,
    })
}

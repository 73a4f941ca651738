//! Saddle points `s_k` of the phase: asymptotic starting values refined by a
//! damped Newton iteration on `psi'(s) = 0`.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use serde::Serialize;

use crate::context::ProblemContext;
use crate::error::{Error, Result};
use crate::phase::{self, SaddleQuantities};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub const MAX_NEWTON_ITERATIONS: usize = 60;
const MAX_HALVINGS: usize = 40;
/// Acceptance tolerance on `|psi'|`, scaled by `max(1, |s|/(2n|log x|))`.
pub const RESIDUAL_TOL: f64 = 1e-13;
/// Relative tolerance on the product form `s (1 + u) = 2 i n u log x`.
pub const PRODUCT_TOL: f64 = 1e-12;

/// One refined stationary point of `psi`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Saddle {
    pub k: i64,
    pub s: Complex64,
    /// `sigma = s - 2 pi k`.
    pub sigma: Complex64,
    pub quantities: SaddleQuantities,
    pub psi_at_s: Complex64,
    pub psi_at_sigma: Complex64,
    /// `psi''(s)`.
    pub ddpsi: Complex64,
    /// `|psi'(s)|`.
    pub residual: f64,
    /// Relative residual of the product form of the saddle equation.
    pub product_residual: f64,
    /// Starting value handed to the Newton iteration.
    pub guess: Complex64,
}

impl Saddle {
    /// Builds the record at an already-converged location.
    pub fn at(k: i64, s: Complex64, guess: Complex64, ctx: &ProblemContext) -> Result<Self> {
        let pv = phase::PhaseValue::at(s, ctx)?;
        let sigma = s - 2.0 * PI * k as f64;
        Ok(Self {
            k,
            s,
            sigma,
            quantities: phase::saddle_quantities(s, ctx)?,
            psi_at_s: pv.psi,
            psi_at_sigma: phase::psi(sigma, ctx)?,
            ddpsi: pv.derivative(2),
            residual: pv.derivative(1).norm(),
            product_residual: product_residual(s, ctx),
            guess,
        })
    }

    /// `(pi^2 k^2 + pi k sigma) / (n log x)`, the gap `psi(s_k) - psi(sigma_k)`.
    pub fn shift(&self, ctx: &ProblemContext) -> Complex64 {
        let k = self.k as f64;
        (PI * PI * k * k + PI * k * self.sigma) / (ctx.nf() * ctx.logx())
    }

    pub fn in_upper_half_plane(&self) -> bool {
        self.s.im > 0.0
    }
}

/// Tolerance scale `max(1, |s|/(2 n |log x|))`.
pub fn residual_scale(s: Complex64, ctx: &ProblemContext) -> f64 {
    (s.norm() / (2.0 * ctx.nf() * ctx.logx().norm())).max(1.0)
}

/// `|s(1+u) - 2inu log x| / (|s(1+u)| + |2nu log x|)` with `u = x e^{is}`;
/// this is `s e^{-is}(1 + x e^{is}) = 2 i n x log x` with `e^{-is} x` cleared.
pub fn product_residual(s: Complex64, ctx: &ProblemContext) -> f64 {
    let u = ctx.x() * (I * s).exp();
    let lhs = s * (1.0 + u);
    let rhs = 2.0 * I * ctx.nf() * u * ctx.logx();
    (lhs - rhs).norm() / (lhs.norm() + rhs.norm())
}

/// Asymptotic location `s_k ~ 2 pi k + i log(n alpha) - i log(L - 2 pi i k)`
/// with `L = log n - log log n`.
///
/// This is the one-step solution of `log(sigma + 2 pi k) - i sigma =
/// log(i n alpha)` with `-i sigma` replaced by `L` inside the first logarithm;
/// for `k = 0` it is purely imaginary when `x` is real.
pub fn saddle_guess(k: i64, ctx: &ProblemContext) -> Complex64 {
    let ln = ctx.nf().ln();
    // t - log t >= 1 for t > 0, so 1 is the natural floor for tiny n.
    let big_l = if ln > 0.0 { ln - ln.ln() } else { 1.0 };
    let two_pi_k = 2.0 * PI * k as f64;
    let n_alpha = ctx.nf() * ctx.alpha();
    two_pi_k + I * (n_alpha / big_l).ln() - I * (1.0 - I * two_pi_k / big_l).ln()
}

fn newton_pieces(s: Complex64, ctx: &ProblemContext) -> Result<(Complex64, Complex64)> {
    Ok((
        phase::psi_derivative(s, 1, ctx)?,
        phase::psi_derivative(s, 2, ctx)?,
    ))
}

/// Damped Newton refinement of `guess` towards the saddle with index `k`.
///
/// Each full step `-psi'/psi''` is halved until `|psi'|` decreases. The
/// iteration stops when `|psi'|` reaches `RESIDUAL_TOL * residual_scale`
/// and the last step is at rounding level, or when no further decrease
/// is possible below that threshold.
pub fn saddle_refine(k: i64, guess: Complex64, ctx: &ProblemContext) -> Result<Saddle> {
    let mut s = guess;
    let (mut d1, mut d2) = newton_pieces(s, ctx)?;
    let mut res = d1.norm();
    let mut converged = false;
    for _ in 0..MAX_NEWTON_ITERATIONS {
        if d2.norm() == 0.0 {
            return Err(Error::DegenerateSaddle(format!("psi'' vanishes at {s}")));
        }
        let step = -d1 / d2;
        let mut t = 1.0;
        let mut improved = None;
        for _ in 0..MAX_HALVINGS {
            let cand = s + t * step;
            if let Ok((c1, c2)) = newton_pieces(cand, ctx) {
                if c1.norm() < res {
                    improved = Some((cand, c1, c2));
                    break;
                }
            }
            t *= 0.5;
        }
        let tol = RESIDUAL_TOL * residual_scale(s, ctx);
        match improved {
            Some((cand, c1, c2)) => {
                let moved = (cand - s).norm();
                s = cand;
                d1 = c1;
                d2 = c2;
                res = d1.norm();
                if res < tol && moved <= 1e-14 * s.norm().max(1.0) {
                    converged = true;
                    break;
                }
            }
            None => {
                // Rounding floor: no step reduces the residual any further.
                converged = res < tol;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            k,
            last: s,
            residual: res,
        });
    }
    let center = 2.0 * PI * k as f64 - ctx.theta();
    if (s.re - center).abs() > PI {
        return Err(Error::BasinEscape { k, landed: s });
    }
    let saddle = Saddle::at(k, s, guess, ctx)?;
    if saddle.product_residual > PRODUCT_TOL {
        return Err(Error::NoConvergence {
            k,
            last: s,
            residual: saddle.product_residual,
        });
    }
    if !saddle.in_upper_half_plane() {
        warn!("saddle k = {k} at {s} lies in the lower half-plane");
    }
    Ok(saddle)
}

/// Saddles `k_min ..= k_max` ordered by `k`.
///
/// Indices are refined outward from the one nearest zero. When the direct
/// guess fails for some `k`, its already-refined neighbour shifted by
/// `+-2 pi` seeds the iteration, so such indices depend on their inner
/// neighbour.
pub fn saddle_catalog(k_min: i64, k_max: i64, ctx: &ProblemContext) -> Result<Vec<Saddle>> {
    if k_min > k_max {
        return Err(Error::InvalidParameter(format!(
            "empty saddle range {k_min}..={k_max}"
        )));
    }
    let start = 0i64.clamp(k_min, k_max);
    let mut up: Vec<Saddle> = Vec::new();
    for k in start..=k_max {
        let neighbour = up.last().map(|p: &Saddle| p.s + 2.0 * PI);
        up.push(refine_with_fallback(k, neighbour, ctx)?);
    }
    let mut down: Vec<Saddle> = Vec::new();
    for k in (k_min..start).rev() {
        let inner = down.last().or(up.first()).map(|p| p.s - 2.0 * PI);
        down.push(refine_with_fallback(k, inner, ctx)?);
    }
    down.reverse();
    down.extend(up);
    if ctx.is_real() {
        check_reflection(&down);
    }
    Ok(down)
}

/// Guess-then-refine, falling back to continuation from a neighbour seed.
pub fn refine_with_fallback(
    k: i64,
    neighbour_seed: Option<Complex64>,
    ctx: &ProblemContext,
) -> Result<Saddle> {
    match saddle_refine(k, saddle_guess(k, ctx), ctx) {
        Ok(s) => Ok(s),
        Err(first) => match neighbour_seed {
            Some(seed) => saddle_refine(k, seed, ctx).map(|mut s| {
                s.guess = saddle_guess(k, ctx);
                s
            }),
            None => Err(first),
        },
    }
}

fn check_reflection(saddles: &[Saddle]) {
    for a in saddles.iter().filter(|s| s.k > 0) {
        if let Some(b) = saddles.iter().find(|s| s.k == -a.k) {
            let gap = (b.s + a.s.conj()).norm();
            if gap > 1e-10 * a.s.norm().max(1.0) {
                warn!("reflection symmetry violated for k = +-{}: {gap:e}", a.k);
            }
        }
    }
}

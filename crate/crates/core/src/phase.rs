//! The phase `psi(s) = s^2/(4n log x) - log(1 + x e^{is})`, its derivatives
//! through order 8, its logarithmic singularities, and the per-saddle
//! quantities `lambda`, `a`, `omega`.
//!
//! Derivatives use the logistic structure of `g = u/(1+u)`, `u = x e^{is}`:
//! `dg/ds = i (g - g^2)`, so `d^m g/ds^m = i^m B_m(g)` with integer
//! polynomials `B_1 = g - g^2`, `B_{m+1} = B_m'(g) (g - g^2)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::context::ProblemContext;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 8;

/// `|1 + x e^{is}|` below this is treated as the singularity itself.
const SINGULAR_EPS: f64 = 1e-14;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coefficients (ascending powers of `g`) of `B_1 .. B_7`.
fn logistic_polys() -> &'static [Vec<i64>] {
    static POLYS: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    POLYS.get_or_init(|| {
        let mut out: Vec<Vec<i64>> = vec![vec![0, 1, -1]];
        for _ in 1..MAX_ORDER - 1 {
            let prev = out.last().unwrap();
            let deriv: Vec<i64> = prev
                .iter()
                .enumerate()
                .skip(1)
                .map(|(p, c)| c * p as i64)
                .collect();
            let mut next = vec![0i64; deriv.len() + 2];
            for (p, c) in deriv.iter().enumerate() {
                next[p + 1] += c;
                next[p + 2] -= c;
            }
            out.push(next);
        }
        out
    })
}

fn horner(coeffs: &[i64], g: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * g + c as f64)
}

/// `i^r` for integer `r >= 0`.
fn i_pow(r: usize) -> Complex64 {
    match r % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

/// Index `k` of the singularity `T_k` nearest to `s`.
pub fn nearest_singularity(s: Complex64, ctx: &ProblemContext) -> i64 {
    ((s.re + ctx.theta() - PI) / (2.0 * PI)).round() as i64
}

/// `1 + x e^{is}`, rejecting points on a singularity.
fn one_plus_u(s: Complex64, ctx: &ProblemContext) -> Result<(Complex64, Complex64)> {
    let u = ctx.x() * (I * s).exp();
    let w = 1.0 + u;
    if w.norm() < SINGULAR_EPS {
        return Err(Error::Singularity {
            k: nearest_singularity(s, ctx),
            s,
        });
    }
    Ok((u, w))
}

/// `psi(s)` on the principal branch of the logarithm.
pub fn psi(s: Complex64, ctx: &ProblemContext) -> Result<Complex64> {
    let (_, w) = one_plus_u(s, ctx)?;
    Ok(s * s / (4.0 * ctx.nf() * ctx.logx()) - w.ln())
}

/// `psi^{(r)}(s)` for `1 <= r <= 8`.
pub fn psi_derivative(s: Complex64, r: usize, ctx: &ProblemContext) -> Result<Complex64> {
    if !(1..=MAX_ORDER).contains(&r) {
        return Err(Error::Domain(format!("derivative order {r} outside 1..=8")));
    }
    let (u, w) = one_plus_u(s, ctx)?;
    let g = u / w;
    let two_nl = 2.0 * ctx.nf() * ctx.logx();
    Ok(match r {
        1 => s / two_nl - I * g,
        2 => two_nl.inv() + horner(&logistic_polys()[0], g),
        _ => -i_pow(r) * horner(&logistic_polys()[r - 2], g),
    })
}

/// `psi` and all its derivatives at one point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhaseValue {
    pub s: Complex64,
    pub psi: Complex64,
    /// `dpsi[r - 1] = psi^{(r)}(s)`.
    pub dpsi: [Complex64; MAX_ORDER],
}

impl PhaseValue {
    pub fn at(s: Complex64, ctx: &ProblemContext) -> Result<Self> {
        let (u, w) = one_plus_u(s, ctx)?;
        let g = u / w;
        let two_nl = 2.0 * ctx.nf() * ctx.logx();
        let mut dpsi = [Complex64::new(0.0, 0.0); MAX_ORDER];
        dpsi[0] = s / two_nl - I * g;
        for (r, slot) in dpsi.iter_mut().enumerate().skip(1).map(|(i, d)| (i + 1, d)) {
            let b = horner(&logistic_polys()[r - 2], g);
            *slot = -i_pow(r) * b;
        }
        dpsi[1] += two_nl.inv();
        Ok(Self {
            s,
            psi: s * s / (2.0 * two_nl) - w.ln(),
            dpsi,
        })
    }

    /// `psi^{(r)}` for `r` in `1..=8`.
    pub fn derivative(&self, r: usize) -> Complex64 {
        self.dpsi[r - 1]
    }
}

/// The logarithmic singularity `T_k = i log x + (2k + 1) pi`.
pub fn singularity(k: i64, ctx: &ProblemContext) -> Complex64 {
    I * ctx.logx() + (2 * k + 1) as f64 * PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleQuantities {
    /// `lambda = x e^{is}`.
    pub lambda: Complex64,
    /// `a = (1 + lambda)^2 / (4 n lambda log x)`.
    pub a: Complex64,
    /// `omega = 2 n lambda log x / (1 + lambda)^2 = 1/(2a)`.
    pub omega: Complex64,
}

pub fn saddle_quantities(s: Complex64, ctx: &ProblemContext) -> Result<SaddleQuantities> {
    let lambda = ctx.x() * (I * s).exp();
    let w = 1.0 + lambda;
    if w.norm() < SINGULAR_EPS || lambda.norm() == 0.0 {
        return Err(Error::DegenerateSaddle(format!(
            "lambda = {lambda} collides with a singularity"
        )));
    }
    let nl = ctx.nf() * lambda * ctx.logx();
    Ok(SaddleQuantities {
        lambda,
        a: w * w / (4.0 * nl),
        omega: 2.0 * nl / (w * w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn logistic_polynomials_low_orders() {
        let p = logistic_polys();
        assert_eq!(p[0], vec![0, 1, -1]);
        // B_2 = (1 - 2g)(g - g^2) = g - 3g^2 + 2g^3
        assert_eq!(p[1], vec![0, 1, -3, 2]);
        assert_eq!(p.len(), 7);
        assert_eq!(p[6].len(), 9);
    }

    #[test]
    fn psi_at_origin() {
        let ctx = ProblemContext::real(200, 2.0).unwrap();
        let v = psi(c(0.0, 0.0), &ctx).unwrap();
        assert!((v - c(-(3f64.ln()), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn psi_logarithmic_growth_near_singularity() {
        let ctx = ProblemContext::real(200, 2.0).unwrap();
        let t0 = singularity(0, &ctx);
        let a = psi(t0 - 1e-6, &ctx).unwrap().re;
        let b = psi(t0 - 1e-9, &ctx).unwrap().re;
        // -log|delta x| growth: three decades add about 3 ln 10.
        assert!(((b - a) - 3.0 * 10f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn psi_rejects_singularity() {
        let ctx = ProblemContext::real(200, 2.0).unwrap();
        let err = psi(singularity(-1, &ctx), &ctx).unwrap_err();
        assert!(matches!(err, Error::Singularity { k: -1, .. }));
    }

    #[test]
    fn second_derivative_closed_form_at_origin() {
        let ctx = ProblemContext::real(200, 2.0).unwrap();
        let d2 = psi_derivative(c(0.0, 0.0), 2, &ctx).unwrap();
        let expect = 1.0 / (400.0 * 2f64.ln()) + 2.0 / 9.0;
        assert!((d2.re - expect).abs() < 1e-15 && d2.im.abs() < 1e-16);
    }

    #[test]
    fn derivative_order_out_of_range() {
        let ctx = ProblemContext::real(20, 2.0).unwrap();
        assert!(matches!(
            psi_derivative(c(1.0, 1.0), 0, &ctx),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            psi_derivative(c(1.0, 1.0), 9, &ctx),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn phase_value_agrees_with_pointwise() {
        let ctx = ProblemContext::polar(100, 3.0, 0.4).unwrap();
        let s = c(1.3, 2.2);
        let pv = PhaseValue::at(s, &ctx).unwrap();
        for r in 1..=8 {
            let d = psi_derivative(s, r, &ctx).unwrap();
            assert!((pv.derivative(r) - d).norm() <= 1e-15 * d.norm());
        }
        // Closed form for the second derivative.
        let u = ctx.x() * (I * s).exp();
        let closed = 1.0 / (2.0 * ctx.nf() * ctx.logx()) + u / ((1.0 + u) * (1.0 + u));
        assert!((pv.derivative(2) - closed).norm() < 1e-13 * closed.norm());
    }

    #[test]
    fn singularity_locations() {
        let ctx = ProblemContext::real(10, 2.0).unwrap();
        assert!((singularity(0, &ctx) - c(PI, 2f64.ln())).norm() < 1e-15);
        assert!((singularity(-1, &ctx) - c(-PI, 2f64.ln())).norm() < 1e-15);
        let ctx = ProblemContext::polar(10, 3.0, 0.3 * PI).unwrap();
        let t = singularity(0, &ctx);
        assert!((t - c(PI - 0.3 * PI, 3f64.ln())).norm() < 1e-14);
        assert_eq!(nearest_singularity(t + 0.1, &ctx), 0);
    }

    #[test]
    fn saddle_quantities_identity() {
        let ctx = ProblemContext::polar(100, 3.0, 0.5).unwrap();
        let sq = saddle_quantities(c(2.0, 4.0), &ctx).unwrap();
        assert!((2.0 * sq.a * sq.omega - 1.0).norm() < 1e-12);
    }
}

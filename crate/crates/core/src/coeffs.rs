//! Expansion coefficients of the per-saddle steepest-descent series.
//!
//! Two independent routes produce `d_1 .. d_3`:
//!
//! - the generic route, from the ratios `p_r = psi^{(r)}/psi''` at the saddle;
//! - the closed route, from the polynomials `P_jk(lambda)` combined into
//!   `Q_j(a, lambda)`.
//!
//! The normalised coefficients are `c_j = d_j (log n / n)^j`, equivalently
//! `c_j = (const) Q_j chi^j / (1 + 2a)^{3j}` with `chi = log n/(n lambda)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::context::ProblemContext;
use crate::error::{Error, Result};
use crate::phase::{self, SaddleQuantities};
use crate::saddles::Saddle;

/// Ascending coefficients of `P_{j,index}`, row-major over `(j, index)`.
const P1: [[i64; 3]; 2] = [[1, 1, 1], [1, -4, 1]];

const P2: [[i64; 5]; 4] = [
    [1, 2, 3, 2, 1],
    [13, 5, -10, 5, 13],
    [67, -328, 278, -328, 67],
    [1, -26, 66, -26, 1],
];

const P3: [[i64; 7]; 6] = [
    [139, 417, 402, 109, 402, 417, 139],
    [151, 378, 308, 56, 308, 378, 151],
    [9271, -3497, -10867, 766, -10867, -3497, 9271],
    [7349, -48668, 45007, -24056, 45007, -48668, 7349],
    [203, -5016, 18729, -24392, 18729, -5016, 203],
    [1, -120, 1191, -2416, 1191, -120, 1],
];

/// The integer coefficient list of `P_{j,index}`, ascending in powers.
pub fn poly_p_coefficients(j: usize, index: usize) -> Result<&'static [i64]> {
    let row = index.checked_sub(1);
    let found = match (j, row) {
        (1, Some(r)) => P1.get(r).map(|c| &c[..]),
        (2, Some(r)) => P2.get(r).map(|c| &c[..]),
        (3, Some(r)) => P3.get(r).map(|c| &c[..]),
        _ => None,
    };
    found.ok_or_else(|| Error::Domain(format!("no polynomial P_({j},{index})")))
}

fn horner(coeffs: &[i64], xi: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * xi + c as f64)
}

/// `P_{j,index}(xi)` for `1 <= j <= 3`, `1 <= index <= 2j`.
pub fn poly_p(j: usize, index: usize, xi: Complex64) -> Result<Complex64> {
    Ok(horner(poly_p_coefficients(j, index)?, xi))
}

fn p(j: usize, index: usize, xi: Complex64) -> Complex64 {
    poly_p(j, index, xi).expect("fixed table index")
}

/// `(Q_1, Q_2, Q_3)` at `(a, lambda)`.
pub fn q_values(a: Complex64, lambda: Complex64) -> [Complex64; 3] {
    let l = lambda;
    let a2 = a * a;
    let a3 = a2 * a;
    let q1 = p(1, 1, l) - 3.0 * a * p(1, 2, l);
    let q2 = p(2, 1, l) - 6.0 * a * p(2, 2, l) + 3.0 * a2 * p(2, 3, l) - 48.0 * a3 * p(2, 4, l);
    let q3 = p(3, 1, l) + 27.0 * a * p(3, 2, l) - 9.0 * a2 * p(3, 3, l) + 27.0 * a3 * p(3, 4, l)
        - 432.0 * a3 * a * p(3, 5, l)
        + 4320.0 * a3 * a2 * p(3, 6, l);
    [q1, q2, q3]
}

/// Denominator constants of `d_1 .. d_3` on the closed route.
const Q_DENOMINATORS: [f64; 3] = [-6.0, 216.0, 97200.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientSet {
    pub d: [Complex64; 4],
    pub c: [Complex64; 4],
    /// `chi = log n / (n lambda)`.
    pub chi: Complex64,
    pub a: Complex64,
    pub lambda: Complex64,
}

/// Closed-route coefficients at a saddle with quantities `sq`.
pub fn c_coefficients(sq: &SaddleQuantities, ctx: &ProblemContext) -> Result<CoefficientSet> {
    let SaddleQuantities { lambda, a, .. } = *sq;
    if lambda.norm() == 0.0 {
        return Err(Error::DegenerateSaddle("lambda = 0".into()));
    }
    let base = 1.0 + 2.0 * a;
    if base.norm() < 1e-14 {
        return Err(Error::DegenerateSaddle("1 + 2a vanishes".into()));
    }
    let n = ctx.nf();
    let chi = n.ln() / (n * lambda);
    let q = q_values(a, lambda);
    let one = Complex64::new(1.0, 0.0);
    let mut d = [one; 4];
    let mut c = [one; 4];
    let base3 = base * base * base;
    let mut base_pow = one;
    let mut chi_pow = one;
    let mut lambda_pow = one;
    for j in 0..3 {
        base_pow *= base3;
        chi_pow *= chi;
        lambda_pow *= lambda;
        let core = q[j] / (Q_DENOMINATORS[j] * base_pow);
        d[j + 1] = core / lambda_pow;
        c[j + 1] = core * chi_pow;
    }
    Ok(CoefficientSet {
        d,
        c,
        chi,
        a,
        lambda,
    })
}

/// Generic steepest-descent coefficients from `psi'' .. psi^{(8)}`.
///
/// `dpsi[0]` is `psi''` and `dpsi[r - 2]` is `psi^{(r)}`.
pub fn d_coefficients_generic(dpsi: &[Complex64; 7]) -> Result<[Complex64; 4]> {
    let h = dpsi[0];
    if h.norm() == 0.0 {
        return Err(Error::DegenerateSaddle("psi'' vanishes".into()));
    }
    let pr = |r: usize| dpsi[r - 2] / h;
    let (p3, p4, p5, p6, p7, p8) = (pr(3), pr(4), pr(5), pr(6), pr(7), pr(8));
    let p3_2 = p3 * p3;
    let p3_3 = p3_2 * p3;
    let p3_4 = p3_2 * p3_2;
    let p4_2 = p4 * p4;

    let d1 = (5.0 * p3_2 - 3.0 * p4) / (12.0 * h);
    let d2 = (385.0 * p3_4 - 630.0 * p3_2 * p4 + 168.0 * p3 * p5 + 105.0 * p4_2 - 24.0 * p6)
        / (864.0 * h * h);
    let d3 = (425425.0 * p3_4 * p3_2 - 1126125.0 * p3_4 * p4 + 675675.0 * p3_2 * p4_2
        - 51975.0 * p4_2 * p4
        + 360360.0 * p3_3 * p5
        - 249480.0 * p3 * p4 * p5
        + 13608.0 * p5 * p5
        - 83160.0 * p3_2 * p6
        + 22680.0 * p4 * p6
        + 12960.0 * p3 * p7
        - 1080.0 * p8)
        / (777600.0 * h * h * h);
    Ok([Complex64::new(1.0, 0.0), d1, d2, d3])
}

/// The generic coefficients at a saddle, rescaled to the `d` convention of
/// [`CoefficientSet`]: the generic series is in powers of `1/n` for the
/// phase `n psi`, which is exactly the closed route's `d_j`.
pub fn generic_at_saddle(saddle: &Saddle, ctx: &ProblemContext) -> Result<[Complex64; 4]> {
    let pv = phase::PhaseValue::at(saddle.s, ctx)?;
    let mut dpsi = [Complex64::new(0.0, 0.0); 7];
    for (r, slot) in (2..=8).zip(dpsi.iter_mut()) {
        *slot = pv.derivative(r);
    }
    d_coefficients_generic(&dpsi)
}

/// Largest relative discrepancy between the two routes for `d_1 .. d_3`.
pub fn cross_check(saddle: &Saddle, ctx: &ProblemContext) -> Result<f64> {
    let generic = generic_at_saddle(saddle, ctx)?;
    let closed = c_coefficients(&saddle.quantities, ctx)?;
    Ok((1..4)
        .map(|j| (generic[j] - closed.d[j]).norm() / closed.d[j].norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saddles::{saddle_guess, saddle_refine};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spot_values() {
        assert_eq!(poly_p(1, 1, c(1.0, 0.0)).unwrap(), c(3.0, 0.0));
        assert_eq!(poly_p(1, 2, c(1.0, 0.0)).unwrap(), c(-2.0, 0.0));
        assert_eq!(poly_p(2, 4, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        // P_35 has the largest coefficients: sum = 203*2 - 5016*2 + 18729*2 - 24392
        assert_eq!(poly_p(3, 5, c(1.0, 0.0)).unwrap(), c(3440.0, 0.0));
    }

    #[test]
    fn invalid_pairs() {
        for (j, i) in [(0, 1), (1, 0), (1, 3), (2, 5), (3, 7), (4, 1)] {
            assert!(matches!(poly_p(j, i, c(0.5, 0.0)), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn q_at_origin() {
        let q = q_values(c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(q, [c(1.0, 0.0), c(1.0, 0.0), c(139.0, 0.0)]);
    }

    #[test]
    fn q_without_a_reduces_to_leading_polynomials() {
        let l = c(0.3, -1.2);
        let q = q_values(c(0.0, 0.0), l);
        assert_eq!(q[0], poly_p(1, 1, l).unwrap());
        assert!((q[1] - q[0] * q[0]).norm() < 1e-13 * q[1].norm());
        assert_eq!(q[2], poly_p(3, 1, l).unwrap());
    }

    #[test]
    fn formal_substitution() {
        // a = 0, lambda = 1, and n chosen so chi = log n / n; take c_1 / chi.
        let ctx = ProblemContext::real(1000, 2.0).unwrap();
        let sq = SaddleQuantities {
            lambda: c(1.0, 0.0),
            a: c(0.0, 0.0),
            omega: c(f64::INFINITY, 0.0),
        };
        let set = c_coefficients(&sq, &ctx).unwrap();
        assert!((set.c[1] / set.chi - c(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(set.c[0], c(1.0, 0.0));
        assert_eq!(set.d[0], c(1.0, 0.0));
    }

    #[test]
    fn degenerate_base_rejected() {
        let ctx = ProblemContext::real(10, 2.0).unwrap();
        let sq = SaddleQuantities {
            lambda: c(0.5, 0.0),
            a: c(-0.5, 0.0),
            omega: c(-1.0, 0.0),
        };
        assert!(matches!(
            c_coefficients(&sq, &ctx),
            Err(Error::DegenerateSaddle(_))
        ));
    }

    #[test]
    fn gaussian_and_quartic_phases() {
        let z = c(0.0, 0.0);
        let h = c(0.7, 0.2);
        let mut dpsi = [z; 7];
        dpsi[0] = h;
        assert_eq!(
            d_coefficients_generic(&dpsi).unwrap(),
            [c(1.0, 0.0), z, z, z]
        );
        let p4 = c(0.3, 0.0);
        dpsi[2] = p4 * h;
        let d = d_coefficients_generic(&dpsi).unwrap();
        assert!((d[1] - (-3.0 * p4 / (12.0 * h))).norm() < 1e-15);
        dpsi[0] = z;
        assert!(d_coefficients_generic(&dpsi).is_err());
    }

    #[test]
    fn routes_agree_on_spec_cases() {
        let cases = [
            (ProblemContext::real(1000, 2.0).unwrap(), 0),
            (ProblemContext::real(200, 2.0).unwrap(), 2),
            (
                ProblemContext::polar(100, 3.0, 0.18 * std::f64::consts::PI).unwrap(),
                1,
            ),
        ];
        for (ctx, k) in cases {
            let s = saddle_refine(k, saddle_guess(k, &ctx), &ctx).unwrap();
            let err = cross_check(&s, &ctx).unwrap();
            assert!(err < 1e-9, "k = {k}: {err:e}");
        }
    }
}

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Slack on `|arg x| <= pi/2` so that `abs_x * e^{i pi/2}` is accepted.
const ARG_SLACK: f64 = 1e-12;

/// The pair `(n, x)` together with the constants every module derives from it.
///
/// `z = x^-2` is the argument of the polynomial and `y = x^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemContext {
    n: u32,
    x: Complex64,
    logx: Complex64,
    alpha: Complex64,
    z: Complex64,
    y: Complex64,
}

impl ProblemContext {
    pub fn new(n: u32, x: Complex64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(x.re.is_finite() && x.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("x = {x} is not finite")));
        }
        if x.norm() <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "|x| = {} must exceed 1",
                x.norm()
            )));
        }
        if x.arg().abs() > FRAC_PI_2 + ARG_SLACK {
            return Err(Error::InvalidParameter(format!(
                "|arg x| = {} exceeds pi/2",
                x.arg().abs()
            )));
        }
        let logx = x.ln();
        let y = x * x;
        Ok(Self {
            n,
            x,
            logx,
            alpha: 2.0 * x * logx,
            z: y.inv(),
            y,
        })
    }

    pub fn real(n: u32, x: f64) -> Result<Self> {
        Self::new(n, Complex64::new(x, 0.0))
    }

    /// `x = abs_x * e^{i theta}`. `theta = 0` yields an exactly real `x`.
    pub fn polar(n: u32, abs_x: f64, theta: f64) -> Result<Self> {
        if theta == 0.0 {
            return Self::real(n, abs_x);
        }
        Self::new(n, Complex64::from_polar(abs_x, theta))
    }

    /// Takes the principal square root, `x = z^{-1/2}`, so that `Re x >= 0`.
    pub fn from_z(n: u32, z: Complex64) -> Result<Self> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParameter("z = 0 has no finite x".into()));
        }
        let x = if z.im == 0.0 && z.re > 0.0 {
            Complex64::new(z.re.sqrt().recip(), 0.0)
        } else {
            z.sqrt().inv()
        };
        Self::new(n, x)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nf(&self) -> f64 {
        f64::from(self.n)
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn logx(&self) -> Complex64 {
        self.logx
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn y(&self) -> Complex64 {
        self.y
    }

    pub fn abs_x(&self) -> f64 {
        self.x.norm()
    }

    /// Phase `theta = arg x`.
    pub fn theta(&self) -> f64 {
        self.x.im.atan2(self.x.re)
    }

    pub fn is_real(&self) -> bool {
        self.x.im == 0.0
    }

    /// The same problem at the conjugate argument.
    pub fn conj(&self) -> Self {
        Self::new(self.n, self.x.conj()).expect("conjugate of a valid context is valid")
    }

    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::new(n, self.x)
    }
}

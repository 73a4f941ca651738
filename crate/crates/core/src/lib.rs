//! Lacunary binomial-type polynomials `P_n(z) = sum_k C(n,k) z^(k(k-1)/2)`.
//!
//! The crate evaluates `P_n` exactly (compensated direct summation and an
//! independent contour-quadrature route) and through its steepest-descent
//! expansion in terms of the saddles of the phase
//! `psi(s) = s^2/(4n log x) - log(1 + x e^{is})`, with `z = x^-2`.
//!
//! Module map:
//!
//! - [`exactval`]: ground truth by summation and quadrature.
//! - [`phase`]: the phase function, its derivatives and singularities.
//! - [`saddles`]: saddle location by asymptotic guess plus damped Newton.
//! - [`coeffs`]: expansion coefficients by two independent routes.
//! - [`expansion`]: per-saddle contributions and the assembled expansions.
//! - [`stokes`]: complex-argument analysis and Stokes angles.
//! - [`contour`]: steepest-descent path tracing, path quadrature, figures.
//! - [`reproduce`]: recomputation of the published tables and figures.

pub mod coeffs;
pub mod context;
pub mod contour;
pub mod dd;
pub mod error;
pub mod exactval;
pub mod expansion;
pub mod phase;
pub mod quad;
pub mod reference;
pub mod reproduce;
pub mod saddles;
pub mod stokes;

pub use context::ProblemContext;
pub use error::{Error, Result};
pub use num_complex::Complex64;

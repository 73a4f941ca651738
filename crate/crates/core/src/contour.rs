//! Steepest descent and ascent paths through the saddles, quadrature of
//! `e^{-n psi}` along them, and SVG/CSV rendering of the resulting pictures.
//!
//! Paths are traced by a predictor-corrector scheme: a midpoint step along
//! the unit flow `ds/dt = +-conj(psi'(s))/|psi'(s)|`, then Newton
//! projection back onto the level set `Im psi(s) = Im psi(s_k)`. The
//! logarithm in `psi` is unwound along each path so that the level stays
//! continuous across the principal-branch cut.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::context::ProblemContext;
use crate::error::{Error, Result};
use crate::phase;
use crate::quad::gk15_segment;
use crate::saddles::Saddle;

const I: Complex64 = Complex64::new(0.0, 1.0);
const TAU: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Descent,
    Ascent,
}

impl PathKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PathKind::Descent => "descent",
            PathKind::Ascent => "ascent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Terminus {
    /// Ended within the capture radius of `T_j`.
    Singularity(i64),
    /// Left for infinity; the value is the direction angle of the last step.
    Infinity(f64),
    StepLimit,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathPolyline {
    pub k: i64,
    pub kind: PathKind,
    /// Starts at the saddle itself.
    pub points: Vec<Complex64>,
    pub terminus: Terminus,
    /// `Im psi(s_k)`, the level followed.
    pub level: f64,
    /// Largest `|Im psi(p) - level| / max(1, |Re psi(p)|)` over the points.
    pub max_phase_error: f64,
    /// Smallest increment of `Re psi` between consecutive points, signed so
    /// that it is positive along descent paths.
    pub min_ascent_step: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    /// Largest arc length of a single step.
    pub arc_step: f64,
    pub max_steps: usize,
    /// A path stops once `|Re psi - Re psi(s_k)|` exceeds this, provided it
    /// is far from every `T_j` and moving away from the nearest one. It is
    /// then classed as going to infinity.
    pub budget: f64,
    /// Paths ending closer than this to some `T_j` stop there.
    pub capture_radius: f64,
    /// Within this distance of a `T_j` the budget is ignored.
    pub near_radius: f64,
    /// Launch offset from the saddle, before scaling by `|psi''|^{-1/2}`.
    pub launch: f64,
}

impl TraceOptions {
    /// Defaults for `ctx`: the budget makes `e^{-n Re(psi - psi_k)}`
    /// smaller than `e^{-120}` at the end of an infinite path.
    pub fn for_context(ctx: &ProblemContext) -> Self {
        Self {
            arc_step: 0.02,
            max_steps: 50_000,
            budget: 120.0 / ctx.nf(),
            capture_radius: 1e-6,
            near_radius: 1.0,
            launch: 1e-4,
        }
    }
}

/// `psi` with the logarithm continued from a reference value.
struct ContinuedPhase<'a> {
    ctx: &'a ProblemContext,
    /// Multiple of `2 pi` added to the principal argument of `1 + u`.
    winding: f64,
    last_arg: f64,
}

impl<'a> ContinuedPhase<'a> {
    fn new(ctx: &'a ProblemContext, s: Complex64) -> Self {
        let w = 1.0 + ctx.x() * (I * s).exp();
        Self {
            ctx,
            winding: 0.0,
            last_arg: w.arg(),
        }
    }

    fn eval(&self, s: Complex64) -> Complex64 {
        let w = 1.0 + self.ctx.x() * (I * s).exp();
        let mut arg = w.arg() + self.winding;
        while arg - self.last_arg > PI {
            arg -= TAU;
        }
        while arg - self.last_arg < -PI {
            arg += TAU;
        }
        s * s / (4.0 * self.ctx.nf() * self.ctx.logx()) - Complex64::new(w.norm().ln(), arg)
    }

    /// Accept `s` as the new reference point.
    fn commit(&mut self, s: Complex64) {
        let w = 1.0 + self.ctx.x() * (I * s).exp();
        let continued = -self.eval(s).im + (s * s / (4.0 * self.ctx.nf() * self.ctx.logx())).im;
        self.winding = ((continued - w.arg()) / TAU).round() * TAU;
        self.last_arg = continued;
    }
}

fn dpsi(s: Complex64, ctx: &ProblemContext) -> Result<Complex64> {
    phase::psi_derivative(s, 1, ctx)
}

fn nearest_t(s: Complex64, ctx: &ProblemContext) -> (i64, f64) {
    let j = phase::nearest_singularity(s, ctx);
    (j, (s - phase::singularity(j, ctx)).norm())
}

fn trace_branch(
    saddle: &Saddle,
    ctx: &ProblemContext,
    kind: PathKind,
    launch_dir: Complex64,
    opts: &TraceOptions,
) -> Result<PathPolyline> {
    let sign = match kind {
        PathKind::Descent => 1.0,
        PathKind::Ascent => -1.0,
    };
    let base = saddle.psi_at_s;
    let level = base.im;
    let delta = opts.launch / saddle.ddpsi.norm().sqrt();
    let mut s = saddle.s + delta * launch_dir;
    let mut cont = ContinuedPhase::new(ctx, saddle.s);
    cont.commit(saddle.s);
    let mut points = vec![saddle.s];
    let mut max_err = 0.0f64;
    let mut min_step = f64::INFINITY;
    let mut prev_re = base.re;

    let project = |s: Complex64, cont: &ContinuedPhase| -> Result<Complex64> {
        let mut s = s;
        for _ in 0..8 {
            let e = cont.eval(s).im - level;
            let d = dpsi(s, ctx)?;
            if d.norm() == 0.0 {
                break;
            }
            let w = I * d.conj() / d.norm();
            s -= e / d.norm() * w;
            if e.abs() < 1e-13 * cont.eval(s).re.abs().max(1.0) {
                break;
            }
        }
        Ok(s)
    };

    s = project(s, &cont)?;
    let mut terminus = Terminus::StepLimit;
    let mut last_dir = launch_dir;
    for _ in 0..opts.max_steps {
        let v = psi_flow(s, sign, ctx)?;
        let p = cont.eval(s);
        points.push(s);
        cont.commit(s);
        let err = (p.im - level).abs() / p.re.abs().max(1.0);
        max_err = max_err.max(err);
        min_step = min_step.min(sign * (p.re - prev_re));
        prev_re = p.re;

        let (j, dist) = nearest_t(s, ctx);
        if dist < opts.capture_radius {
            terminus = Terminus::Singularity(j);
            break;
        }
        let receding = (v.conj() * (phase::singularity(j, ctx) - s)).re < 0.0;
        if sign * (p.re - base.re) > opts.budget && dist > opts.near_radius && receding {
            terminus = Terminus::Infinity(last_dir.arg());
            break;
        }
        let h = opts.arc_step.min(0.25 * dist);
        let mid = s + 0.5 * h * v;
        let v_mid = psi_flow(mid, sign, ctx)?;
        let next = project(s + h * v_mid, &cont)?;
        last_dir = next - s;
        s = next;
    }
    Ok(PathPolyline {
        k: saddle.k,
        kind,
        points,
        terminus,
        level,
        max_phase_error: max_err,
        min_ascent_step: min_step,
    })
}

fn psi_flow(s: Complex64, sign: f64, ctx: &ProblemContext) -> Result<Complex64> {
    let d = dpsi(s, ctx)?;
    let m = d.norm();
    if m == 0.0 {
        return Err(Error::DegenerateSaddle(format!(
            "psi' vanishes on the path at {s}"
        )));
    }
    Ok(sign * d.conj() / m)
}

/// Descent bisector `e^{-i arg(psi'')/2}`: `psi - psi(s_k)` is real and
/// positive along it to second order.
fn descent_direction(saddle: &Saddle) -> Result<Complex64> {
    if saddle.ddpsi.norm() == 0.0 {
        return Err(Error::DegenerateSaddle(format!(
            "psi'' vanishes at s_{}",
            saddle.k
        )));
    }
    Ok(Complex64::from_polar(1.0, -0.5 * saddle.ddpsi.arg()))
}

/// Both branches of the steepest descent path through `saddle`, launched
/// in opposite directions along the descent bisector.
pub fn trace_descent(
    saddle: &Saddle,
    ctx: &ProblemContext,
    opts: &TraceOptions,
) -> Result<(PathPolyline, PathPolyline)> {
    let dir = descent_direction(saddle)?;
    Ok((
        trace_branch(saddle, ctx, PathKind::Descent, dir, opts)?,
        trace_branch(saddle, ctx, PathKind::Descent, -dir, opts)?,
    ))
}

/// Both branches of the steepest ascent path, orthogonal to the descent one.
pub fn trace_ascent(
    saddle: &Saddle,
    ctx: &ProblemContext,
    opts: &TraceOptions,
) -> Result<(PathPolyline, PathPolyline)> {
    let dir = I * descent_direction(saddle)?;
    Ok((
        trace_branch(saddle, ctx, PathKind::Ascent, dir, opts)?,
        trace_branch(saddle, ctx, PathKind::Ascent, -dir, opts)?,
    ))
}

/// A steepest descent contour `C_k` as one ordered point list: from the
/// left-hand end, over the saddle, to the right-hand end.
#[derive(Debug, Clone, Serialize)]
pub struct ContourPath {
    pub k: i64,
    pub saddle: Complex64,
    pub points: Vec<Complex64>,
    pub start: Terminus,
    pub end: Terminus,
}

impl ContourPath {
    pub fn from_branches(a: &PathPolyline, b: &PathPolyline) -> Self {
        let end_re = |p: &PathPolyline| p.points.last().map_or(0.0, |z| z.re);
        let (first, second) = if end_re(a) <= end_re(b) {
            (a, b)
        } else {
            (b, a)
        };
        let mut points: Vec<Complex64> = first.points.iter().rev().copied().collect();
        points.extend(second.points.iter().skip(1));
        Self {
            k: a.k,
            saddle: a.points[0],
            points,
            start: first.terminus,
            end: second.terminus,
        }
    }
}

/// Descent contours for `saddles`, in the order given.
pub fn serpentine(
    saddles: &[Saddle],
    ctx: &ProblemContext,
    opts: &TraceOptions,
) -> Result<Vec<ContourPath>> {
    saddles
        .iter()
        .map(|s| {
            let (a, b) = trace_descent(s, ctx, opts)?;
            Ok(ContourPath::from_branches(&a, &b))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContourIntegral {
    pub value: Complex64,
    pub error_estimate: f64,
    pub segments: usize,
}

/// Relative error estimate above which a path is reported as under-resolved.
pub const PATH_TOL: f64 = 1e-9;

/// `(2 sqrt(pi log x))^-1 int e^{-n psi(s)} ds` along one contour.
///
/// `e^{-n psi} = e^{-s^2/(4 log x)} (1 + x e^{is})^n` is entire, so each
/// chord between consecutive points is integrated with GK15 regardless of
/// how closely it follows the curve.
pub fn path_integral(path: &ContourPath, ctx: &ProblemContext) -> Result<ContourIntegral> {
    let n = ctx.nf();
    let logx = ctx.logx();
    let x = ctx.x();
    let log_f = |s: Complex64| -s * s / (4.0 * logx) + n * (1.0 + x * (I * s).exp()).ln();
    let scale = log_f(path.saddle).re;
    let mut f = |s: Complex64| {
        let w = 1.0 + x * (I * s).exp();
        if w.norm() == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (log_f(s) - scale).exp()
        }
    };
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for w in path.points.windows(2) {
        let est = gk15_segment(&mut f, w[0], w[1]);
        value += est.value;
        error += est.error;
    }
    let norm = (2.0 * (PI * logx).sqrt()).inv() * scale.exp();
    Ok(ContourIntegral {
        value: value * norm,
        error_estimate: error * norm.norm(),
        segments: path.points.len().saturating_sub(1),
    })
}

/// Sum of [`path_integral`] over a serpentine path set.
pub fn contour_quadrature(paths: &[ContourPath], ctx: &ProblemContext) -> Result<ContourIntegral> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut segments = 0;
    for p in paths {
        if matches!(p.start, Terminus::StepLimit) || matches!(p.end, Terminus::StepLimit) {
            return Err(Error::Quadrature {
                requested: PATH_TOL,
                achieved: f64::INFINITY,
            });
        }
        let part = path_integral(p, ctx)?;
        value += part.value;
        error += part.error_estimate;
        segments += part.segments;
    }
    if error > PATH_TOL * value.norm() {
        return Err(Error::Quadrature {
            requested: PATH_TOL,
            achieved: error / value.norm(),
        });
    }
    Ok(ContourIntegral {
        value,
        error_estimate: error,
        segments,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureFormat {
    Svg,
    Csv,
}

/// Paths with their saddle and singularity markers.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Figure {
    pub title: String,
    pub paths: Vec<PathPolyline>,
    pub saddles: Vec<(i64, Complex64)>,
    pub singularities: Vec<(i64, Complex64)>,
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 600.0;
const SVG_MARGIN: f64 = 30.0;

impl Figure {
    pub fn render(&self, format: FigureFormat) -> String {
        match format {
            FigureFormat::Svg => self.to_svg(),
            FigureFormat::Csv => self.to_csv(),
        }
    }

    pub fn write_to(&self, path: &Path, format: FigureFormat) -> Result<()> {
        std::fs::write(path, self.render(format))
            .map_err(|e| Error::Output(format!("{}: {e}", path.display())))
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let all = self
            .paths
            .iter()
            .flat_map(|p| p.points.iter())
            .chain(self.saddles.iter().map(|(_, s)| s))
            .chain(self.singularities.iter().map(|(_, s)| s));
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for p in all {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        if !x0.is_finite() {
            return (-1.0, 1.0, -1.0, 1.0);
        }
        let pad = |a: f64, b: f64| {
            if b - a < 1e-9 {
                (a - 1.0, b + 1.0)
            } else {
                (a, b)
            }
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        (x0, x1, y0, y1)
    }

    pub fn to_svg(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let scale = ((SVG_WIDTH - 2.0 * SVG_MARGIN) / (x1 - x0))
            .min((SVG_HEIGHT - 2.0 * SVG_MARGIN) / (y1 - y0));
        let map = |z: Complex64| {
            (
                SVG_MARGIN + (z.re - x0) * scale,
                SVG_HEIGHT - SVG_MARGIN - (z.im - y0) * scale,
            )
        };
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">"
        );
        let _ = writeln!(out, "<title>{}</title>", xml_escape(&self.title));
        let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        for p in &self.paths {
            let (stroke, dash) = match p.kind {
                PathKind::Descent => ("black", ""),
                PathKind::Ascent => ("gray", " stroke-dasharray=\"4 3\""),
            };
            let coords: Vec<String> = p
                .points
                .iter()
                .map(|&z| {
                    let (a, b) = map(z);
                    format!("{a:.6},{b:.6}")
                })
                .collect();
            let _ = writeln!(
                out,
                "<polyline class=\"{}\" data-k=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.2\"{dash} points=\"{}\"/>",
                p.kind.as_str(),
                p.k,
                coords.join(" ")
            );
        }
        for (k, s) in &self.saddles {
            let (a, b) = map(*s);
            let _ = writeln!(
                out,
                "<circle class=\"saddle\" data-k=\"{k}\" cx=\"{a:.6}\" cy=\"{b:.6}\" r=\"4\" fill=\"black\"/>"
            );
        }
        for (k, t) in &self.singularities {
            let (a, b) = map(*t);
            let r = 4.0;
            let _ = writeln!(
                out,
                "<path class=\"singularity\" data-k=\"{k}\" stroke=\"red\" stroke-width=\"1.5\" d=\"M{:.6},{:.6} L{:.6},{:.6} M{:.6},{:.6} L{:.6},{:.6}\"/>",
                a - r, b - r, a + r, b + r, a - r, b + r, a + r, b - r
            );
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,kind,re,im\r\n");
        for p in &self.paths {
            for z in &p.points {
                let _ = write!(
                    out,
                    "{},{},{:.6},{:.6}\r\n",
                    p.k,
                    p.kind.as_str(),
                    z.re,
                    z.im
                );
            }
        }
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// A minimal scatter-and-line plot of `(k, log10 |J_k|)` pairs.
pub fn profile_svg(title: &str, profile: &[(i64, f64)]) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">"
    );
    let _ = writeln!(out, "<title>{}</title>", xml_escape(title));
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    if !profile.is_empty() {
        let (k0, k1) = profile
            .iter()
            .fold((i64::MAX, i64::MIN), |(a, b), &(k, _)| (a.min(k), b.max(k)));
        let (v0, v1) = profile
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &(_, v)| {
                (a.min(v), b.max(v))
            });
        let kw = ((k1 - k0) as f64).max(1.0);
        let vw = (v1 - v0).max(1e-9);
        let map = |k: i64, v: f64| {
            (
                SVG_MARGIN + (k - k0) as f64 / kw * (SVG_WIDTH - 2.0 * SVG_MARGIN),
                SVG_HEIGHT - SVG_MARGIN - (v - v0) / vw * (SVG_HEIGHT - 2.0 * SVG_MARGIN),
            )
        };
        let pts: Vec<String> = profile
            .iter()
            .map(|&(k, v)| {
                let (a, b) = map(k, v);
                format!("{a:.6},{b:.6}")
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"{}\"/>",
            pts.join(" ")
        );
        for &(k, v) in profile {
            let (a, b) = map(k, v);
            let _ = writeln!(
                out,
                "<circle data-k=\"{k}\" data-log10=\"{v:.6}\" cx=\"{a:.6}\" cy=\"{b:.6}\" r=\"3\" fill=\"black\"/>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

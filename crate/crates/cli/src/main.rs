//! `lacunary`: evaluate the lacunary polynomials, their saddle-point
//! expansions and Stokes structure, and reproduce the published tables.

mod output;

use std::f64::consts::PI;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use lacunary::contour::{self, Figure, FigureFormat, TraceOptions};
use lacunary::expansion::{self, ExpansionResult};
use lacunary::reproduce::{self, Report};
use lacunary::{exactval, phase, saddles, stokes, Complex64, ProblemContext};
use serde_json::{json, Value};

use output::{complex, complex_json, num, TextTable};

#[derive(Parser)]
#[command(name = "lacunary", version, about)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Verb {
    /// Exact value of P_n(z)
    Eval {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        #[command(flatten)]
        out: OutFile,
    },
    /// Refined saddles s_k with their asymptotic guesses
    Saddles {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        kmin: i64,
        #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
        kmax: i64,
        #[command(flatten)]
        out: OutFile,
    },
    /// Saddle-point expansion compared with the exact value
    Expand {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 3)]
        jmax: usize,
        /// Highest k summed for real x; default stops at negligible terms
        #[arg(long)]
        kmax: Option<i64>,
        #[command(flatten)]
        out: OutFile,
    },
    /// Leading-order approximation for real x
    Gn {
        #[arg(long)]
        n: u32,
        #[arg(long = "abs-x")]
        abs_x: f64,
        #[command(flatten)]
        out: OutFile,
    },
    /// Conjectured approximation for real x
    Conjecture {
        #[arg(long)]
        n: u32,
        #[arg(long = "abs-x")]
        abs_x: f64,
        #[command(flatten)]
        out: OutFile,
    },
    /// Stokes angles for the pairs (s_k, s_k+1), k = 1..=kmax
    Stokes {
        #[arg(long)]
        n: u32,
        #[arg(long = "abs-x")]
        abs_x: f64,
        #[arg(long, default_value_t = 5)]
        kmax: u32,
        #[command(flatten)]
        out: OutFile,
    },
    /// Steepest descent (and optionally ascent) paths through saddles
    Paths {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
        kmin: i64,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        kmax: i64,
        #[arg(long)]
        ascent: bool,
        /// Also integrate along the descent paths
        #[arg(long)]
        integrate: bool,
        #[command(flatten)]
        out: OutFile,
    },
    /// log10 |J_k| over a range of k
    Profile {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = -20, allow_negative_numbers = true)]
        kmin: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        kmax: i64,
        #[command(flatten)]
        out: OutFile,
    },
    /// Recompute a published table or figure
    Reproduce {
        #[arg(long, conflicts_with = "fig", required_unless_present = "fig",
              value_parser = clap::value_parser!(u8).range(1..=5))]
        table: Option<u8>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        fig: Option<u8>,
        /// Directory for figure files
        #[arg(long, env = "LACUNARY_OUT_DIR", default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    DoubleDouble,
    Quadrature,
}

/// Exactly one of `--z`, `--x`, or `--abs-x` (with optional `--theta-pi`).
#[derive(Args)]
struct Point {
    #[arg(long)]
    n: u32,
    #[arg(long, group = "param", allow_negative_numbers = true)]
    z: Option<f64>,
    #[arg(
        long = "z-im",
        requires = "z",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    z_im: f64,
    #[arg(long, group = "param", allow_negative_numbers = true)]
    x: Option<f64>,
    #[arg(long = "abs-x", group = "param")]
    abs_x: Option<f64>,
    #[arg(
        long = "theta-pi",
        requires = "abs_x",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    theta_pi: f64,
}

#[derive(Args)]
struct OutFile {
    /// Write the document here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<lacunary::Error> for Failure {
    fn from(e: lacunary::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl Point {
    fn z(&self) -> Result<Complex64, Failure> {
        match (self.z, self.x, self.abs_x) {
            (Some(re), None, None) => Ok(Complex64::new(re, self.z_im)),
            (None, Some(x), None) => Ok(Complex64::new(x.powi(-2), 0.0)),
            (None, None, Some(_)) => Ok(self.context()?.z()),
            _ => Err(Failure::Usage(
                "give exactly one of --z, --x, --abs-x".into(),
            )),
        }
    }

    fn context(&self) -> Result<ProblemContext, Failure> {
        Ok(match (self.z, self.x, self.abs_x) {
            (Some(re), None, None) => {
                ProblemContext::from_z(self.n, Complex64::new(re, self.z_im))?
            }
            (None, Some(x), None) => ProblemContext::real(self.n, x)?,
            (None, None, Some(a)) => ProblemContext::polar(self.n, a, self.theta_pi * PI)?,
            _ => {
                return Err(Failure::Usage(
                    "give exactly one of --z, --x, --abs-x".into(),
                ))
            }
        })
    }
}

/// A verb's result in every format it supports.
struct Doc {
    json: Value,
    table: TextTable,
    svg: Option<String>,
    csv: Option<String>,
    notes: Vec<String>,
}

impl Doc {
    fn new(json: Value, table: TextTable) -> Self {
        Self {
            json,
            table,
            svg: None,
            csv: None,
            notes: Vec::new(),
        }
    }

    fn render(&self, format: Format) -> Result<String, Failure> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| Failure::Compute(e.to_string()))?;
                s.push('\n');
                s
            }
            Format::Table => {
                let mut s = self.table.aligned();
                for n in &self.notes {
                    s.push_str(&format!("# {n}\n"));
                }
                s
            }
            Format::Csv => self.csv.clone().unwrap_or_else(|| self.table.csv()),
            Format::Svg => self
                .svg
                .clone()
                .ok_or_else(|| Failure::Usage("this verb has no SVG output".into()))?,
        })
    }
}

fn eval(point: &Point, method: Method) -> Result<Doc, Failure> {
    let z = point.z()?;
    let (value, terms, condition, error) = match method {
        Method::Direct => {
            let r = exactval::eval_direct(point.n, z)?;
            (r.value, Some(r.term_count), Some(r.condition), None)
        }
        Method::DoubleDouble => {
            let r = exactval::eval_direct_dd(point.n, z)?;
            (r.value, Some(r.term_count), Some(r.condition), None)
        }
        Method::Quadrature => {
            let ctx = point.context()?;
            let r = exactval::eval_quadrature_with(&ctx, &exactval::QuadratureOptions::default())?;
            (r.value, None, None, Some(r.error_estimate))
        }
    };
    let mut table = TextTable::new(["n", "z", "value"]);
    table.push([point.n.to_string(), complex(z), complex(value)]);
    let json = json!({
        "n": point.n,
        "z": complex_json(z),
        "value": complex_json(value),
        "terms": terms,
        "condition": condition,
        "error_estimate": error,
    });
    Ok(Doc::new(json, table))
}

fn saddle_doc(point: &Point, kmin: i64, kmax: i64) -> Result<Doc, Failure> {
    if kmin > kmax {
        return Err(Failure::Usage(format!(
            "--kmin {kmin} exceeds --kmax {kmax}"
        )));
    }
    let ctx = point.context()?;
    let cat = saddles::saddle_catalog(kmin, kmax, &ctx)?;
    let mut table = TextTable::new(["k", "re s_k", "im s_k", "re guess", "im guess", "residual"]);
    let mut rows = Vec::new();
    for s in &cat {
        table.push([
            s.k.to_string(),
            num(s.s.re),
            num(s.s.im),
            num(s.guess.re),
            num(s.guess.im),
            format!("{:.2e}", s.residual),
        ]);
        rows.push(json!({
            "k": s.k,
            "s": complex_json(s.s),
            "guess": complex_json(s.guess),
            "psi": complex_json(s.psi_at_s),
            "residual": s.residual,
        }));
    }
    Ok(Doc::new(
        json!({ "n": ctx.n(), "x": complex_json(ctx.x()), "saddles": rows }),
        table,
    ))
}

fn expansion_doc(ctx: &ProblemContext, e: &ExpansionResult, exact: Complex64) -> Doc {
    let mut table = TextTable::new(["k", "J_k", "log10 |J_k|"]);
    let mut rows = Vec::new();
    for c in &e.contributions {
        table.push([
            c.k.to_string(),
            complex(c.value),
            format!("{:.3}", c.log10_magnitude()),
        ]);
        rows.push(json!({
            "k": c.k,
            "value": complex_json(c.value),
            "log10_abs": c.log10_magnitude(),
            "j_max": c.j_max,
        }));
    }
    let rel = e.relative_error(exact);
    let mut doc = Doc::new(
        json!({
            "n": ctx.n(),
            "x": complex_json(ctx.x()),
            "asymptotic": complex_json(e.total),
            "exact": complex_json(exact),
            "relative_error": rel,
            "k_min": e.k_min_used,
            "k_max": e.k_max_used,
            "truncation": e.truncation_note,
            "contributions": rows,
        }),
        table,
    );
    doc.notes = vec![
        format!("asymptotic {}", complex(e.total)),
        format!("exact      {}", complex(exact)),
        format!("relative error {:.3e}", rel),
        e.truncation_note.clone(),
    ];
    doc
}

fn expand(point: &Point, jmax: usize, kmax: Option<i64>) -> Result<Doc, Failure> {
    let ctx = point.context()?;
    let e = if ctx.is_real() {
        expansion::expand_real(&ctx, jmax, kmax)?
    } else {
        if kmax.is_some() {
            return Err(Failure::Usage("--kmax applies to real x only".into()));
        }
        stokes::expand_complex(&ctx, jmax)?
    };
    let exact = exactval::eval_direct(ctx.n(), ctx.z())?.value;
    Ok(expansion_doc(&ctx, &e, exact))
}

fn scalar(label: &str, n: u32, abs_x: f64, value: f64) -> Doc {
    let mut table = TextTable::new(["n", "x", label]);
    table.push([n.to_string(), num(abs_x), num(value)]);
    Doc::new(json!({ "n": n, "x": abs_x, label: value }), table)
}

fn stokes_doc(n: u32, abs_x: f64, kmax: u32) -> Result<Doc, Failure> {
    let chart = stokes::stokes_chart(n, abs_x, kmax)?;
    let mut table = TextTable::new(["pair", "theta*/pi", "residual"]);
    for e in &chart.events {
        table.push([
            format!("s_{},s_{}", e.k, e.k + 1),
            num(e.theta_star / PI),
            format!("{:.2e}", e.residual),
        ]);
    }
    let rows: Vec<Value> = chart
        .events
        .iter()
        .map(|e| json!({ "k": e.k, "theta_star": e.theta_star, "theta_pi": e.theta_star / PI, "residual": e.residual }))
        .collect();
    Ok(Doc::new(
        json!({ "n": n, "abs_x": abs_x, "events": rows }),
        table,
    ))
}

fn paths_doc(
    point: &Point,
    kmin: i64,
    kmax: i64,
    ascent: bool,
    integrate: bool,
) -> Result<Doc, Failure> {
    if kmin > kmax {
        return Err(Failure::Usage(format!(
            "--kmin {kmin} exceeds --kmax {kmax}"
        )));
    }
    let ctx = point.context()?;
    let cat = saddles::saddle_catalog(kmin, kmax, &ctx)?;
    let opts = TraceOptions::for_context(&ctx);
    let mut figure = Figure {
        title: format!("n = {}, x = {}", ctx.n(), complex(ctx.x())),
        saddles: cat.iter().map(|s| (s.k, s.s)).collect(),
        singularities: (kmin - 1..=kmax)
            .map(|j| (j, phase::singularity(j, &ctx)))
            .collect(),
        ..Default::default()
    };
    let mut contours = Vec::new();
    for s in &cat {
        let (a, b) = contour::trace_descent(s, &ctx, &opts)?;
        contours.push(contour::ContourPath::from_branches(&a, &b));
        figure.paths.push(a);
        figure.paths.push(b);
        if ascent {
            let (a, b) = contour::trace_ascent(s, &ctx, &opts)?;
            figure.paths.push(a);
            figure.paths.push(b);
        }
    }
    let mut table = TextTable::new(["k", "kind", "points", "terminus", "phase error"]);
    let mut rows = Vec::new();
    for p in &figure.paths {
        let end = match p.terminus {
            contour::Terminus::Singularity(j) => format!("T_{j}"),
            contour::Terminus::Infinity(a) => format!("infinity ({a:.4})"),
            contour::Terminus::StepLimit => "step limit".into(),
        };
        table.push([
            p.k.to_string(),
            p.kind.as_str().to_string(),
            p.points.len().to_string(),
            end,
            format!("{:.1e}", p.max_phase_error),
        ]);
        rows.push(json!({
            "k": p.k,
            "kind": p.kind.as_str(),
            "terminus": p.terminus,
            "points": p.points.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "max_phase_error": p.max_phase_error,
        }));
    }
    let mut json = json!({ "n": ctx.n(), "x": complex_json(ctx.x()), "paths": rows });
    let mut notes = Vec::new();
    if integrate {
        let q = contour::contour_quadrature(&contours, &ctx)?;
        json["integral"] = complex_json(q.value);
        json["integral_error"] = json!(q.error_estimate);
        notes.push(format!(
            "contour integral {} (error {:.1e})",
            complex(q.value),
            q.error_estimate
        ));
    }
    let mut doc = Doc::new(json, table);
    doc.svg = Some(figure.render(FigureFormat::Svg));
    doc.csv = Some(figure.render(FigureFormat::Csv));
    doc.notes = notes;
    Ok(doc)
}

fn profile_doc(point: &Point, kmin: i64, kmax: i64) -> Result<Doc, Failure> {
    if kmin > kmax {
        return Err(Failure::Usage(format!(
            "--kmin {kmin} exceeds --kmax {kmax}"
        )));
    }
    let ctx = point.context()?;
    let profile = stokes::contribution_profile(&ctx, kmin, kmax)?;
    let mut table = TextTable::new(["k", "log10 |J_k|"]);
    for (k, v) in &profile {
        table.push([k.to_string(), format!("{v:.6}")]);
    }
    let rows: Vec<Value> = profile
        .iter()
        .map(|(k, v)| json!({ "k": k, "log10_abs": v }))
        .collect();
    let mut doc = Doc::new(
        json!({ "n": ctx.n(), "x": complex_json(ctx.x()), "profile": rows }),
        table,
    );
    doc.svg = Some(contour::profile_svg(
        &format!("log10|J_k|, n = {}, x = {}", ctx.n(), complex(ctx.x())),
        &profile,
    ));
    Ok(doc)
}

fn report_doc(report: &Report) -> Result<Doc, Failure> {
    let mut table = TextTable::new(["label", "computed", "reference", "rel. dev.", "verdict"]);
    let join = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ");
    for r in &report.rows {
        table.push([
            r.label.clone(),
            join(&r.computed),
            r.reference.as_deref().map(join).unwrap_or_default(),
            r.abs_rel_err
                .map(|e| format!("{e:.2e}"))
                .unwrap_or_default(),
            match r.pass {
                Some(true) => "pass".into(),
                Some(false) => "FAIL".into(),
                None => String::new(),
            },
        ]);
    }
    let json = serde_json::to_value(report).map_err(|e| Failure::Compute(e.to_string()))?;
    let mut doc = Doc::new(json, table);
    doc.notes.push(report.title.clone());
    doc.notes.extend(report.notes.iter().cloned());
    for a in &report.artifacts {
        doc.notes.push(format!("wrote {a}"));
    }
    Ok(doc)
}

fn run(cli: &Cli) -> Result<(String, Option<PathBuf>), Failure> {
    let (doc, out) = match &cli.verb {
        Verb::Eval { point, method, out } => (eval(point, *method)?, out.out.clone()),
        Verb::Saddles {
            point,
            kmin,
            kmax,
            out,
        } => (saddle_doc(point, *kmin, *kmax)?, out.out.clone()),
        Verb::Expand {
            point,
            jmax,
            kmax,
            out,
        } => (expand(point, *jmax, *kmax)?, out.out.clone()),
        Verb::Gn { n, abs_x, out } => (
            scalar("gn", *n, *abs_x, expansion::gn_approx(*n, abs_x * abs_x)?),
            out.out.clone(),
        ),
        Verb::Conjecture { n, abs_x, out } => (
            scalar(
                "conjecture",
                *n,
                *abs_x,
                expansion::conjecture_approx(*n, abs_x * abs_x)?,
            ),
            out.out.clone(),
        ),
        Verb::Stokes {
            n,
            abs_x,
            kmax,
            out,
        } => (stokes_doc(*n, *abs_x, *kmax)?, out.out.clone()),
        Verb::Paths {
            point,
            kmin,
            kmax,
            ascent,
            integrate,
            out,
        } => (
            paths_doc(point, *kmin, *kmax, *ascent, *integrate)?,
            out.out.clone(),
        ),
        Verb::Profile {
            point,
            kmin,
            kmax,
            out,
        } => (profile_doc(point, *kmin, *kmax)?, out.out.clone()),
        Verb::Reproduce { table, fig, out } => {
            let report = match (table, fig) {
                (Some(t), None) => reproduce::reproduce_table(*t)?,
                (None, Some(f)) => reproduce::reproduce_figure(*f, out)?,
                _ => return Err(Failure::Usage("give exactly one of --table, --fig".into())),
            };
            (report_doc(&report)?, None)
        }
    };
    Ok((doc.render(cli.format)?, out))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, None)) => {
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
            {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => Cli::command()
            .error(clap::error::ErrorKind::ArgumentConflict, msg)
            .exit(),
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

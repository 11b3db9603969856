//! Command line front end: one job file per invocation, a text report on
//! stdout and an optional JSON twin.

mod job;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use job::{Job, SchemaError};
use num_traits::Zero;
use report::{ClusterInfo, CycleInfo, EdgeInfo, Expansion, HoleInfo, ModelInfo, Report, Skeleton, VertexInfo};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use volint::padic::{FieldKind, PadicElement};
use volint::vologodsky::Vologodsky;

#[derive(Parser)]
#[command(name = "volint", version, about = "Vologodsky integrals on hyperelliptic curves at odd bad primes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Job file (.json for JSON, anything else is read as TOML).
    job: PathBuf,
    /// Format printed on stdout.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Vologodsky integral of a form between two points.
    Integrate(Common),
    /// Berkovich-Coleman period of a form around a basis cycle.
    Period(Common),
    /// Cluster tree, graph, cycle basis and dual tropical forms.
    Skeleton {
        #[command(flatten)]
        common: Common,
        /// Include the good-reduction model of every wide open.
        #[arg(long)]
        models: bool,
        /// Write both graphs in DOT syntax to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// p-part of the Coleman-Gross height of two points on an elliptic curve.
    Height(Common),
    /// Re-render a JSON report as text.
    Render {
        /// JSON report written by --json or --format json.
        report: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("schema error: {0}")]
    Schema(#[from] SchemaError),
    #[error("error in {module}: {0}", module = .0.module())]
    Compute(#[from] volint::Error),
    #[error("{0}")]
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Schema(_) => 2,
            Failure::Compute(volint::Error::BackendUnavailable { .. }) => 4,
            Failure::Compute(_) | Failure::Io(_) => 3,
        }
    }
}

fn field_name(v: &Vologodsky) -> String {
    let ctx = v.field();
    match ctx.kind {
        FieldKind::Rational => format!("Q_{}", ctx.p),
        _ => {
            let m = ctx.spec().modulus;
            let g = &ctx.generator;
            let mut terms = Vec::new();
            for (i, c) in m.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mono = match i {
                    0 => String::new(),
                    1 => g.clone(),
                    _ => format!("{g}^{i}"),
                };
                let c = c.to_string();
                terms.push(match (c.as_str(), mono.is_empty()) {
                    (_, true) => c,
                    ("1", false) => mono,
                    ("-1", false) => format!("-{mono}"),
                    _ => format!("{c}*{mono}"),
                });
            }
            format!("Q_{}({g}), {} = 0", ctx.p, terms.join(" + ").replace("+ -", "- "))
        }
    }
}

fn integrate(job: &Job, n: i64) -> Result<Report, Failure> {
    job.require("integrate")?;
    let v = job.vologodsky()?;
    let form = job::form(&v.curve, job.form.as_ref().expect("checked"))?;
    let pts = job.points.as_ref().expect("checked");
    let (s, r) = (job::point(&v.curve, &pts.start)?, job::point(&v.curve, &pts.end)?);
    let out = match &job.overrides.path {
        Some(path) => v.integrate_along(&form, &s, &r, path)?,
        None => v.integrate(&form, &s, &r)?,
    };
    let mut rep = Report::new("integrate", field_name(&v));
    rep.text("start vertex", v.cov.vertex_name(out.start_vertex));
    rep.text("end vertex", v.cov.vertex_name(out.end_vertex));
    rep.text("path", report::walk_text(&out.path));
    rep.value("Berkovich-Coleman integral", &out.bc.truncate(n));
    for c in &out.corrections {
        rep.text(&format!("tropical integral of eta_{}", c.cycle), c.tropical.to_string());
        match &c.period {
            Some(p) => rep.value(&format!("period around cycle {}", c.cycle), &p.truncate(n)),
            None => rep.text(&format!("period around cycle {}", c.cycle), "not needed"),
        }
    }
    rep.value("Vologodsky integral", &out.value);
    Ok(rep)
}

fn period(job: &Job) -> Result<Report, Failure> {
    job.require("period")?;
    let v = job.vologodsky()?;
    let form = job::form(&v.curve, job.form.as_ref().expect("checked"))?;
    let i = job.period.as_ref().expect("checked").cycle;
    let cycle = v
        .cycles
        .get(i)
        .ok_or_else(|| SchemaError(format!("period.cycle = {i} but the graph has {} basis cycles", v.cycles.len())))?;
    let value = v.form_period(&form, &cycle.walk)?;
    let mut rep = Report::new("period", field_name(&v));
    rep.text("cycle", report::walk_text(&cycle.walk));
    rep.value("Berkovich-Coleman period", &value);
    Ok(rep)
}

fn height(job: &Job) -> Result<Report, Failure> {
    job.require("height")?;
    let v = job.vologodsky()?;
    let h = job.height.as_ref().expect("checked");
    let (p, r) = (job::point(&v.curve, &h.p)?, job::point(&v.curve, &h.r)?);
    let hp = v.coleman_gross_hp(&p, &r)?;
    let mut rep = Report::new("height", field_name(&v));
    rep.value("h_p(P, R)", &hp);
    if let Some(a) = &h.away {
        let away = job::away(v.field(), a)?.truncate(job.precision());
        rep.value("away-from-p constant", &away);
        rep.value("global height", &hp.add(&away));
    }
    Ok(rep)
}

fn truncated(x: &PadicElement, n: i64) -> Expansion {
    Expansion::new(&x.truncate(n))
}

fn skeleton(job: &Job, models: bool) -> Result<Report, Failure> {
    job.require("skeleton")?;
    let v = job.vologodsky()?;
    let n = job.precision();
    let cov = &v.cov;
    let e = v.field().e;
    let clusters = cov
        .tree
        .nodes
        .iter()
        .map(|c| ClusterInfo {
            id: c.id,
            parent: c.parent,
            center: truncated(&c.center, n),
            depth: c.depth_pi(e).to_string(),
            roots: c.size,
            half_edges: c.half_edges(),
            contains_infinity: c.contains_infinity,
        })
        .collect();
    let vertices = (0..cov.vertices.len())
        .map(|i| VertexInfo {
            index: i,
            name: cov.vertex_name(i),
            node: cov.vertices[i].node,
            sheet: cov.vertices[i].sheet,
        })
        .collect();
    let edges = cov
        .edges
        .iter()
        .enumerate()
        .map(|(i, ed)| {
            let (k, depth) = cov.annulus_window(ed.child);
            EdgeInfo {
                index: i,
                tail: ed.tail,
                head: ed.head,
                child: ed.child,
                copy: ed.copy,
                interval: (k.to_string(), depth.to_string()),
            }
        })
        .collect();
    let cycles = v
        .cycles
        .iter()
        .zip(&v.etas)
        .map(|(c, eta)| CycleInfo {
            walk: c.walk.clone(),
            chain: c.coeffs.iter().map(|q| q.to_string()).collect(),
            eta: eta.iter().map(|q| q.to_string()).collect(),
        })
        .collect();
    let models = if models {
        let mut out = Vec::new();
        for node in 0..cov.tree.nodes.len() {
            let m = cov.model(node)?;
            let poly = |p: &volint::polyring::PolyK| p.coeffs.iter().map(|c| truncated(c, n)).collect();
            out.push(ModelInfo {
                node,
                k: m.k,
                center: truncated(&m.center, n),
                g: poly(&m.g),
                holes: m
                    .holes
                    .iter()
                    .map(|h| HoleInfo {
                        node: h.node,
                        center: truncated(&h.center, n),
                        radius: h.radius.to_string(),
                        roots: h.size,
                    })
                    .collect(),
                outer_factor: poly(&m.f_out),
            });
        }
        Some(out)
    } else {
        None
    };
    let mut rep = Report::new("skeleton", field_name(&v));
    rep.skeleton = Some(Skeleton {
        clusters,
        vertices,
        edges,
        betti: cov.betti(),
        cycles,
        models,
    });
    Ok(rep)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn emit(rep: &Report, common: &Common) -> Result<(), Failure> {
    if let Some(p) = &common.json {
        write(p, &rep.to_json())?;
    }
    match common.format {
        Format::Text => print!("{}", rep.render()),
        Format::Json => print!("{}", rep.to_json()),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Render { report } => {
            let text = std::fs::read_to_string(&report).map_err(|e| Failure::Io(format!("cannot read {}: {e}", report.display())))?;
            let rep: Report = serde_json::from_str(&text).map_err(|e| SchemaError(format!("report: {e}")))?;
            print!("{}", rep.render());
            Ok(())
        }
        Command::Integrate(c) => {
            let job = job::load(&c.job)?;
            emit(&integrate(&job, job.precision())?, &c)
        }
        Command::Period(c) => {
            let job = job::load(&c.job)?;
            emit(&period(&job)?, &c)
        }
        Command::Height(c) => {
            let job = job::load(&c.job)?;
            emit(&height(&job)?, &c)
        }
        Command::Skeleton { common, models, dot } => {
            let job = job::load(&common.job)?;
            let rep = skeleton(&job, models)?;
            if let Some(p) = &dot {
                write(p, &rep.skeleton.as_ref().expect("skeleton").to_dot())?;
            }
            emit(&rep, &common)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("volint: {e}");
            ExitCode::from(e.code())
        }
    }
}

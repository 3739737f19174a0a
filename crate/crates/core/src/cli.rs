//! Command-line front end: configuration, `compute` and `verify`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::interface::{interface_matrix, match_stable_vectors, orthogonality_check};
use crate::models::{cotangent_p1, hilb, load_model, toy, ys_hilb_component, ys_restrict, Model};
use crate::ring::{lcm_u32, Rat, Var};
use crate::rmat::{mirror_wall_relation, wall_r_matrix};
use crate::stab::{
    factorize_limit, kstab_solve, limit_kahler_matrix, limit_slope_matrix, toy_elliptic_matrix, toy_f,
    transpose_relabel, MatrixDoc, StabError,
};
use crate::theta::quasiperiod_identity;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const DEFAULT_TRUNC: &str = "6";

#[derive(Parser, Debug)]
#[command(
    name = "envlab",
    version,
    about = "Exact stable-envelope limits, wall R-matrices and duality interfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute an object and print it.
    Compute {
        kind: ComputeKind,
        #[command(flatten)]
        args: CommonArgs,
    },
    /// Run a verification suite.
    Verify {
        suite: VerifySuite,
        #[command(flatten)]
        args: CommonArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComputeKind {
    Walls,
    Resonances,
    Order,
    Stab,
    Limit,
    Rmatrix,
    Interface,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifySuite {
    Quasiperiods,
    Orthogonality,
    Factorization,
    Mirror,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// toy, cotangent, hilb, or a path to a JSON model.
    #[arg(long, default_value = "toy")]
    pub model: String,
    /// Number of points for hilb.
    #[arg(long)]
    pub n: Option<u32>,
    /// Exact rational slope, e.g. 1/3.
    #[arg(long, allow_hyphen_values = true)]
    pub slope: Option<String>,
    /// Chamber sign: + or -.
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    pub chamber: String,
    /// Interval lo,hi for walls and resonances.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub range: String,
    /// Series truncation order for cross-checks.
    #[arg(long, env = "ENVLAB_TRUNC", default_value = DEFAULT_TRUNC)]
    pub trunc: String,
    /// Exponent lattice 1/N for printed matrices.
    #[arg(long)]
    pub lattice: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSpec {
    Toy,
    Cotangent,
    Hilb(u32),
    File(PathBuf),
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub slope: Option<Rat>,
    pub chamber: i32,
    pub range: (Rat, Rat),
    pub trunc: Rat,
    pub lattice: Option<u32>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] crate::models::ModelError),
}

/// Parses `p/q` or an integer; nothing else is accepted.
pub fn parse_rat(s: &str) -> Result<Rat, ConfigError> {
    let bad = || ConfigError::Invalid(format!("'{s}' is not an exact rational p/q"));
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs) -> Result<RunConfig, ConfigError> {
        let model = match a.model.as_str() {
            "toy" => ModelSpec::Toy,
            "cotangent" | "tp1" => ModelSpec::Cotangent,
            "hilb" => {
                let n =
                    a.n.ok_or_else(|| ConfigError::Invalid("--model hilb needs --n".into()))?;
                if !(1..=6).contains(&n) {
                    return Err(ConfigError::Invalid(format!("--n {n} is outside 1..=6")));
                }
                ModelSpec::Hilb(n)
            }
            p if p.ends_with(".json") => ModelSpec::File(PathBuf::from(p)),
            other => return Err(ConfigError::Invalid(format!("unknown model '{other}'"))),
        };
        let chamber = match a.chamber.as_str() {
            "+" | "+1" | "1" | "pos" => 1,
            "-" | "-1" | "neg" => -1,
            c => return Err(ConfigError::Invalid(format!("chamber '{c}' is not + or -"))),
        };
        let slope = a.slope.as_deref().map(parse_rat).transpose()?;
        let (lo, hi) = a
            .range
            .split_once(',')
            .ok_or_else(|| ConfigError::Invalid(format!("range '{}' is not lo,hi", a.range)))?;
        let range = (parse_rat(lo)?, parse_rat(hi)?);
        if range.0 > range.1 {
            return Err(ConfigError::Invalid("range is empty".into()));
        }
        let trunc = parse_rat(&a.trunc)?;
        if trunc <= Rat::zero() {
            return Err(ConfigError::Invalid("truncation order must be positive".into()));
        }
        if a.lattice == Some(0) {
            return Err(ConfigError::Invalid("lattice must be positive".into()));
        }
        Ok(RunConfig {
            model,
            slope,
            chamber,
            range,
            trunc,
            lattice: a.lattice,
            format: a.format,
            out: a.out.clone(),
        })
    }

    pub fn load(&self) -> Result<Model, ConfigError> {
        Ok(match &self.model {
            ModelSpec::Toy => toy(),
            ModelSpec::Cotangent => cotangent_p1(),
            ModelSpec::Hilb(n) => hilb(*n),
            ModelSpec::File(p) => load_model(p)?,
        })
    }

    fn slope_or(&self, d: Rat) -> Rat {
        self.slope.unwrap_or(d)
    }

    fn require_slope(&self) -> Result<Rat, ConfigError> {
        self.slope
            .ok_or_else(|| ConfigError::Invalid("this command needs --slope".into()))
    }

    /// Dual model paired with `model` at slope `s`: the mirror itself at an
    /// integral slope, the fixed component `Y_s` otherwise.
    pub fn dual_at(&self, model: &Model, s: Rat) -> Result<Model, ConfigError> {
        if s.is_integer() {
            return Ok(model.clone());
        }
        Ok(match &self.model {
            ModelSpec::Hilb(n) => ys_hilb_component(*n, s).unwrap_or_else(|_| ys_restrict(model, s)),
            _ => ys_restrict(model, s),
        })
    }

    /// Elliptic matrix, when the model has one.
    fn elliptic(&self) -> Option<crate::stab::EllipticMatrix> {
        (self.model == ModelSpec::Toy).then(toy_elliptic_matrix)
    }
}

/// Rendered output and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn config(e: impl std::fmt::Display) -> Outcome {
        Outcome {
            text: format!("error: {e}\n"),
            code: EXIT_CONFIG,
        }
    }
}

fn from_stab(e: StabError) -> Outcome {
    match e {
        StabError::OnWall(_) | StabError::Model(_) => Outcome::config(e),
        StabError::NoSolution(_)
        | StabError::NonUnique { .. }
        | StabError::Violation(..)
        | StabError::NonMonomial(..)
        | StabError::ResidualDependence(..)
        | StabError::NoConjugation(_) => Outcome {
            text: serde_json::to_string_pretty(&json!({
                "schema": "envlab.violation/1",
                "error": e.to_string(),
            }))
            .expect("json")
                + "\n",
            code: EXIT_VIOLATION,
        },
        _ => Outcome::config(e),
    }
}

fn render_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn render_matrix_table(doc: &MatrixDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} {} slope={} chamber={}",
        doc.kind,
        doc.model,
        doc.slope.as_deref().unwrap_or("-"),
        doc.chamber
    );
    let w0 = doc.index.iter().map(|s| s.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..doc.index.len())
        .map(|j| {
            doc.entries
                .iter()
                .map(|r| r[j].len())
                .chain([doc.index[j].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let _ = write!(out, "{:w0$}", "");
    for (j, l) in doc.index.iter().enumerate() {
        let _ = write!(out, "  {:>w$}", l, w = widths[j]);
    }
    out.push('\n');
    for (i, row) in doc.entries.iter().enumerate() {
        let _ = write!(out, "{:w0$}", doc.index[i]);
        for (j, x) in row.iter().enumerate() {
            let _ = write!(out, "  {:>w$}", x, w = widths[j]);
        }
        out.push('\n');
    }
    for (k, v) in &doc.meta {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out
}

fn emit_matrix(cfg: &RunConfig, mut doc: MatrixDoc, mat: &crate::linalg::Mat, code: i32) -> Outcome {
    if let Some(n) = cfg.lattice {
        if let Ok(m) = mat.refine(lcm_u32(n, mat.lattice())) {
            doc.entries = m.canonical();
        }
        doc = doc.with_meta("lattice", n);
    }
    let text = match cfg.format {
        Format::Json => render_json(&doc),
        Format::Table => render_matrix_table(&doc),
    };
    Outcome { text, code }
}

#[derive(Serialize)]
struct PointsDoc {
    schema: &'static str,
    kind: &'static str,
    model: String,
    range: [String; 2],
    families: Vec<String>,
    points: Vec<String>,
}

#[derive(Serialize)]
struct OrderDoc {
    schema: &'static str,
    model: String,
    chamber: &'static str,
    index: Vec<String>,
    /// Pairs `[p, r]` with `p > r`.
    relations: Vec<[String; 2]>,
    linear_extension: Vec<String>,
}

pub fn cmd_compute(kind: ComputeKind, cfg: &RunConfig) -> Outcome {
    let model = match cfg.load() {
        Ok(m) => m,
        Err(e) => return Outcome::config(e),
    };
    match compute(kind, cfg, &model) {
        Ok(o) => o,
        Err(Fail::Config(e)) => Outcome::config(e),
        Err(Fail::Stab(e)) => from_stab(e),
    }
}

enum Fail {
    Config(ConfigError),
    Stab(StabError),
}

impl From<ConfigError> for Fail {
    fn from(e: ConfigError) -> Self {
        Fail::Config(e)
    }
}

impl From<StabError> for Fail {
    fn from(e: StabError) -> Self {
        Fail::Stab(e)
    }
}

fn compute(kind: ComputeKind, cfg: &RunConfig, model: &Model) -> Result<Outcome, Fail> {
    let sigma = cfg.chamber;
    match kind {
        ComputeKind::Walls | ComputeKind::Resonances => {
            let arr = if kind == ComputeKind::Walls {
                model.walls.clone()
            } else {
                model.resonances()
            };
            let (lo, hi) = cfg.range;
            let pts = arr.points_in(lo, hi);
            let doc = PointsDoc {
                schema: "envlab.points/1",
                kind: if kind == ComputeKind::Walls {
                    "walls"
                } else {
                    "resonances"
                },
                model: model.name.clone(),
                range: [lo.to_string(), hi.to_string()],
                families: arr.describe(),
                points: pts.iter().map(|p| p.to_string()).collect(),
            };
            let text = match cfg.format {
                Format::Json => render_json(&doc),
                Format::Table => {
                    let mut t = format!("# {} {} [{}, {}]\n", doc.kind, doc.model, lo, hi);
                    for p in &doc.points {
                        t.push_str(p);
                        t.push('\n');
                    }
                    t
                }
            };
            Ok(Outcome { text, code: EXIT_OK })
        }
        ComputeKind::Order => {
            let order = model.attraction_order(sigma).map_err(StabError::from)?;
            let labels = model.labels();
            let mut relations = Vec::new();
            for p in 0..model.len() {
                for r in 0..model.len() {
                    if order.gt(p, r) {
                        relations.push([labels[p].clone(), labels[r].clone()]);
                    }
                }
            }
            let doc = OrderDoc {
                schema: "envlab.order/1",
                model: model.name.clone(),
                chamber: crate::stab::chamber_str(sigma),
                linear_extension: order.linear_extension().iter().map(|&i| labels[i].clone()).collect(),
                index: labels,
                relations,
            };
            let text = match cfg.format {
                Format::Json => render_json(&doc),
                Format::Table => doc.relations.iter().map(|[p, r]| format!("{p} > {r}\n")).collect(),
            };
            Ok(Outcome { text, code: EXIT_OK })
        }
        ComputeKind::Stab => {
            let s = cfg.require_slope()?;
            let st = kstab_solve(model, s, sigma)?;
            let doc = st
                .as_stab_matrix()
                .to_doc(model)
                .with_meta(
                    "diagonal",
                    (0..model.len()).map(|p| st.diagonal(p).canonical()).collect::<Vec<_>>(),
                )
                .with_meta("unknowns", st.certificate.unknowns)
                .with_meta("rank", st.certificate.rank);
            Ok(emit_matrix(cfg, doc, &st.normalized, EXIT_OK))
        }
        ComputeKind::Limit => {
            let s = cfg.require_slope()?;
            let t = cfg.elliptic().ok_or_else(|| {
                ConfigError::Invalid(format!("no elliptic stable envelope is available for {}", model.name))
            })?;
            let l = limit_slope_matrix(&t, model, s)?;
            let doc = MatrixDoc::new("limit", &model.name, model.labels(), Some(s), t.chamber, &l)
                .with_meta("wall", model.walls.contains(s));
            Ok(emit_matrix(cfg, doc, &l, EXIT_OK))
        }
        ComputeKind::Rmatrix => {
            let s = cfg.require_slope()?;
            let r = wall_r_matrix(model, s, sigma)?;
            Ok(emit_matrix(cfg, r.to_doc(), &r.mat, EXIT_OK))
        }
        ComputeKind::Interface => {
            let s = cfg.slope_or(Rat::zero());
            let dual = cfg.dual_at(model, s)?;
            let im = interface_matrix(model, &dual, s, sigma)?;
            let code = if im.glued() { EXIT_OK } else { EXIT_VIOLATION };
            let mut doc = im.to_doc(1);
            if let Some((p, r)) = im.mismatch() {
                doc = doc.with_meta("mismatch", json!([p, r]));
            }
            Ok(emit_matrix(cfg, doc, &im.plus.m, code))
        }
    }
}

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Serialize, Clone, Debug)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub schema: &'static str,
    pub model: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Checks {
    suite: &'static str,
    out: Vec<CheckResult>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, ok: bool, detail: Value) {
        self.out.push(CheckResult {
            suite: self.suite,
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        });
    }

    fn skip(&mut self, name: impl Into<String>, why: &str) {
        self.out.push(CheckResult {
            suite: self.suite,
            name: name.into(),
            status: Status::Skip,
            detail: json!(why),
        });
    }

    fn error(&mut self, name: impl Into<String>, e: impl std::fmt::Display) {
        self.push(name, false, json!({ "error": e.to_string() }));
    }
}

/// Regular sample slopes used when `--slope` is absent.
fn sample_slopes(model: &Model, cfg: &RunConfig) -> Vec<Rat> {
    match cfg.slope {
        Some(s) => vec![s],
        None => [Rat::new(1, 4), Rat::new(1, 3)]
            .into_iter()
            .filter(|s| !model.walls.contains(*s))
            .collect(),
    }
}

fn chambers(cfg: &RunConfig) -> [i32; 1] {
    [cfg.chamber]
}

fn verify_quasiperiods(cfg: &RunConfig, model: &Model, c: &mut Checks) {
    if cfg.elliptic().is_none() {
        c.skip(
            "quasiperiods",
            &format!("no elliptic stable envelope for {}", model.name),
        );
        return;
    }
    let f = toy_f();
    for (v, w, name) in [
        (Var::z(), Var::a(), "f(zq,a) = a^-1 f(z,a)"),
        (Var::a(), Var::z(), "f(z,aq) = z^-1 f(z,a)"),
    ] {
        let factor = crate::ring::Monomial::var(w, Rat::from_integer(-1));
        match quasiperiod_identity(&f, v, &factor, cfg.trunc) {
            Ok(r) => c.push(
                name,
                r.symbolic && r.series,
                json!({ "symbolic": r.symbolic, "series": r.series, "order": r.checked_to.to_string() }),
            ),
            Err(e) => c.error(name, e),
        }
    }
}

fn verify_orthogonality(cfg: &RunConfig, model: &Model, c: &mut Checks) {
    for s in sample_slopes(model, cfg) {
        for sigma in chambers(cfg) {
            let name = format!("gram s={s} chamber={}", crate::stab::chamber_str(sigma));
            if model.walls.contains(s) {
                c.skip(name, "slope lies on a wall");
                continue;
            }
            match orthogonality_check(model, s, sigma) {
                Ok(r) => c.push(
                    name,
                    r.passed(),
                    json!({ "integral": r.integral, "failure": r.failure, "gram": r.gram.canonical() }),
                ),
                Err(e) => c.error(name, e),
            }
        }
    }
}

fn verify_factorization(cfg: &RunConfig, model: &Model, c: &mut Checks) {
    let s = cfg.slope_or(Rat::zero());
    let sigma = cfg.chamber;
    let limit = match cfg.elliptic() {
        Some(t) => limit_slope_matrix(&t, model, s).map(|l| (l, "elliptic")),
        None => cfg
            .dual_at(model, s)
            .map_err(|e| StabError::NoConjugation(e.to_string()))
            .and_then(|d| interface_matrix(model, &d, s, sigma))
            .and_then(|im| im.assembled_limit(model, 1))
            .map(|l| (l, "assembled")),
    };
    let (l, source) = match limit {
        Ok(x) => x,
        Err(e) => return c.error(format!("limit s={s}"), e),
    };
    for side in [1, -1] {
        let name = format!("Z'' s={s} {}", if side > 0 { "ample" } else { "anti-ample" });
        match factorize_limit(model, &l, s, sigma, side) {
            Ok(f) => {
                let regular_ok = model.walls.contains(s) || f.zpp.is_identity();
                let deltas: Vec<Vec<Option<String>>> = f
                    .deltas
                    .iter()
                    .map(|r| r.iter().map(|d| d.map(|x| x.to_string())).collect())
                    .collect();
                c.push(
                    name,
                    regular_ok,
                    json!({ "limit": source, "zpp": f.zpp.canonical(), "a_degrees": deltas }),
                )
            }
            Err(e) => c.error(name, e),
        }
    }
}

fn verify_mirror(cfg: &RunConfig, model: &Model, c: &mut Checks) {
    let sigma = cfg.chamber;
    if let Some(t) = cfg.elliptic() {
        for w in sample_slopes(model, cfg) {
            let name = format!("kahler limit w={w} = transposed slope limit");
            if model.resonances().contains(w) || model.walls.contains(w) {
                c.skip(name, "w is a resonance or a wall");
                continue;
            }
            let r = limit_slope_matrix(&t, model, w)
                .and_then(|s| transpose_relabel(&s, &model.dual))
                .and_then(|lhs| limit_kahler_matrix(&t, model, w).map(|k| (lhs, k)));
            match r {
                Ok((lhs, k)) => c.push(name, lhs.same(&k), json!({ "kahler": k.canonical() })),
                Err(e) => c.error(name, e),
            }
        }
    }
    let walls: Vec<Rat> = match cfg.slope {
        Some(s) => vec![s],
        None => model.walls.points_in(Rat::new(-1, 1000), Rat::from_integer(1)),
    };
    for s in walls {
        let name = format!("wall relation s={s}");
        let dual = match cfg.dual_at(model, s) {
            Ok(d) => d,
            Err(e) => {
                c.error(name, e);
                continue;
            }
        };
        match mirror_wall_relation(model, s, sigma, &dual) {
            Ok(r) => c.push(
                name,
                r.holds(),
                json!({
                    "rx": r.rx.mat.canonical(),
                    "ry": r.ry.mat.canonical(),
                    "h": r.h.map(|h| h.iter().map(|x| x.canonical()).collect::<Vec<_>>()),
                    "failure": r.failure,
                }),
            ),
            Err(e) => c.error(name, e),
        }
        let name = format!("interface gluing s={s}");
        match interface_matrix(model, &dual, s, sigma) {
            Ok(im) => {
                let matches = match_stable_vectors(model, &dual, &im, 1);
                let clean = matches.as_ref().map(|v| v.iter().all(|m| m.clean())).unwrap_or(false);
                c.push(
                    name,
                    im.glued() && clean,
                    json!({ "glued": im.glued(), "mismatch": im.mismatch(), "correspondence_clean": clean }),
                )
            }
            Err(e) => c.error(name, e),
        }
    }
}

type SuiteFn = fn(&RunConfig, &Model, &mut Checks);

pub fn run_verify(suite: VerifySuite, cfg: &RunConfig) -> Result<Report, ConfigError> {
    let model = cfg.load()?;
    let suites: Vec<(&'static str, SuiteFn)> = match suite {
        VerifySuite::Quasiperiods => vec![("quasiperiods", verify_quasiperiods)],
        VerifySuite::Orthogonality => vec![("orthogonality", verify_orthogonality)],
        VerifySuite::Factorization => vec![("factorization", verify_factorization)],
        VerifySuite::Mirror => vec![("mirror", verify_mirror)],
        VerifySuite::All => vec![
            ("quasiperiods", verify_quasiperiods),
            ("orthogonality", verify_orthogonality),
            ("factorization", verify_factorization),
            ("mirror", verify_mirror),
        ],
    };
    let mut out = Vec::new();
    for (name, f) in suites {
        let mut c = Checks {
            suite: name,
            out: Vec::new(),
        };
        f(cfg, &model, &mut c);
        out.extend(c.out);
    }
    Ok(Report {
        schema: "envlab.report/1",
        model: model.name.clone(),
        passed: out.iter().all(|c| c.status != Status::Fail),
        checks: out,
    })
}

pub fn cmd_verify(suite: VerifySuite, cfg: &RunConfig) -> Outcome {
    let report = match run_verify(suite, cfg) {
        Ok(r) => r,
        Err(e) => return Outcome::config(e),
    };
    let code = if report.passed { EXIT_OK } else { EXIT_VIOLATION };
    let text = match cfg.format {
        Format::Json => render_json(&report),
        Format::Table => {
            let mut t = String::new();
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skip => "SKIP",
                };
                let _ = writeln!(t, "{tag}  {:<14} {}", c.suite, c.name);
            }
            t
        }
    };
    Outcome { text, code }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> (Outcome, Option<PathBuf>) {
    type Handler = Box<dyn Fn(&RunConfig) -> Outcome>;
    let (args, f): (&CommonArgs, Handler) = match &cli.command {
        Command::Compute { kind, args } => {
            let k = *kind;
            (args, Box::new(move |c| cmd_compute(k, c)))
        }
        Command::Verify { suite, args } => {
            let s = *suite;
            (args, Box::new(move |c| cmd_verify(s, c)))
        }
    };
    match RunConfig::from_args(args) {
        Ok(cfg) => (f(&cfg), cfg.out.clone()),
        Err(e) => (Outcome::config(e), None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(argv: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(argv).unwrap();
        run(&cli).0
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("-3/6").unwrap(), Rat::new(-1, 2));
        assert_eq!(parse_rat("2").unwrap(), Rat::from_integer(2));
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn walls_and_rmatrix() {
        let o = go(&[
            "envlab", "compute", "walls", "--model", "hilb", "--n", "2", "--range", "0,1",
        ]);
        assert_eq!(o.code, 0);
        let v: Value = serde_json::from_str(&o.text).unwrap();
        assert_eq!(v["points"], json!(["0", "1/2", "1"]));
        let o = go(&["envlab", "compute", "rmatrix", "--model", "toy", "--slope", "2/5"]);
        let v: Value = serde_json::from_str(&o.text).unwrap();
        assert_eq!(v["entries"], json!([["1", "0"], ["0", "1"]]));
    }

    #[test]
    fn config_errors() {
        assert_eq!(go(&["envlab", "compute", "stab", "--model", "hilb"]).code, EXIT_CONFIG);
        assert_eq!(go(&["envlab", "compute", "stab", "--slope", "0.3"]).code, EXIT_CONFIG);
        assert_eq!(go(&["envlab", "compute", "stab", "--slope", "0"]).code, EXIT_CONFIG);
        assert_eq!(
            go(&["envlab", "compute", "limit", "--model", "hilb", "--n", "1", "--slope", "1/3"]).code,
            EXIT_CONFIG
        );
    }
}

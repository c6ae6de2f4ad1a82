//! Command-line front end. Each subcommand loads its inputs, calls one
//! library operation and writes a canonical JSON (or flattened text)
//! report.
//!
//! Exit status: 0 on success, 1 on usage or schema errors, 2 when a
//! validation or tolerance check fails.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::analytic::{self, AnalyticError, DiscretizeOptions, Geometry, Presentation};
use crate::cochain::{CocycleReport, DeligneCochain};
use crate::complex::{ComplexFile, SimplexId, SimplicialComplex};
use crate::cover::{CoverFile, CoveredComplex, IndexMap};
use crate::holonomy::{self, HolonomyValue};
use crate::json::{self, CochainFile, ScalarJson};
use crate::scalar::{Exact, Scalar};
use crate::transgression::{self, TransitionValue};

/// Environment variable naming a JSON file of option defaults.
pub const CONFIG_ENV: &str = "DELIGNE_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Float,
    Rational,
}

#[derive(Debug, Parser)]
#[command(name = "deligne", version, about = "Holonomy and transgression of discrete Deligne cochains")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Residual allowed by validation checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Gauss–Legendre nodes per direction.
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    arithmetic: Option<Arithmetic>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Inputs {
    complex: PathBuf,
    cover: PathBuf,
    cochain: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the cocycle relations.
    Validate {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Holonomy over a closed complex, or the local action otherwise.
    Holonomy {
        #[command(flatten)]
        inputs: Inputs,
        /// `default`, `random`, `random:SEED` or an index-map file.
        #[arg(long, default_value = "default")]
        index_map: String,
    },
    /// Transition between the local actions of two index maps.
    Transgress {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        rho0: String,
        #[arg(long)]
        rho1: String,
        /// Third index map for the degree-3 triple combination.
        #[arg(long)]
        rho2: Option<String>,
        /// Also evaluate the specialized boundary formulas.
        #[arg(long)]
        boundary_formula: bool,
    },
    /// Cup product of two presentations, discretized onto a geometry.
    Cup {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        geometry: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Generate and discretize a named fixture.
    Fixture {
        name: Option<String>,
        /// Comma-separated `key=value` pairs.
        #[arg(long, default_value = "")]
        params: String,
        /// JSON request with `fixture`, `params`, `geometry`, `quad_order`.
        #[arg(long)]
        request: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// `c + D(b)` for a cochain `b` of one degree lower.
    Shift {
        #[command(flatten)]
        inputs: Inputs,
        b: PathBuf,
    },
    /// Total curvature over a closed complex of one dimension above the degree.
    Curvature {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "default")]
        index_map: String,
    },
    /// Glue two cocycles along boundary components.
    Glue {
        complex1: PathBuf,
        cover1: PathBuf,
        cochain1: PathBuf,
        complex2: PathBuf,
        cover2: PathBuf,
        cochain2: PathBuf,
        /// JSON object mapping vertices of the second complex to the first.
        #[arg(long)]
        matching: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Barycentric subdivision of a covered complex, or of a presentation's
    /// geometry followed by discretization.
    Subdivide {
        complex: Option<PathBuf>,
        cover: Option<PathBuf>,
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

/// Option defaults read from the file named by [`CONFIG_ENV`].
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    format: Option<Format>,
    tolerance: Option<f64>,
    quad_order: Option<usize>,
    seed: Option<u64>,
    arithmetic: Option<Arithmetic>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub tolerance: f64,
    pub quad_order: usize,
    /// Only an explicitly given seed enables random index maps.
    pub seed: Option<u64>,
    pub arithmetic: Arithmetic,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn discretize_options(&self) -> DiscretizeOptions {
        DiscretizeOptions { quad_order: self.quad_order, tolerance: self.tolerance }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    /// A check failed; the report is still written.
    Failed { message: String, report: Value },
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failed { .. } => 2,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<json::SchemaError> for CliError {
    fn from(e: json::SchemaError) -> Self {
        usage(e)
    }
}

fn analytic_error(e: AnalyticError) -> CliError {
    match e {
        AnalyticError::NotCocycle(report) => {
            let message = format!("discretization is not a cocycle (worst residual {:e})", report.worst_residual());
            CliError::Failed { message, report: json!({ "validation": cocycle_report_json(&report, None) }) }
        }
        other => usage(other),
    }
}

fn resolve_config(global: &GlobalArgs) -> Result<RunConfig, CliError> {
    let file = match std::env::var_os(CONFIG_ENV) {
        Some(path) if !path.is_empty() => {
            let path = path.to_string_lossy().into_owned();
            json::read::<ConfigFile>(&path)?
        }
        _ => ConfigFile::default(),
    };
    let config = RunConfig {
        format: global.format.or(file.format).unwrap_or(Format::Json),
        tolerance: global.tolerance.or(file.tolerance).unwrap_or(1e-9),
        quad_order: global.quad_order.or(file.quad_order).unwrap_or(8),
        seed: global.seed.or(file.seed),
        arithmetic: global.arithmetic.or(file.arithmetic).unwrap_or(Arithmetic::Float),
        out: global.out.clone(),
    };
    if !(config.tolerance > 0.0 && config.tolerance.is_finite()) {
        return Err(usage(format!("tolerance must be positive, got {}", config.tolerance)));
    }
    if config.quad_order == 0 {
        return Err(usage("quadrature order must be at least 1"));
    }
    Ok(config)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn read_file<T: for<'de> Deserialize<'de>>(p: &Path) -> Result<T, CliError> {
    Ok(json::read(&path_str(p))?)
}

fn write_file(p: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn load_base(complex: &Path, cover: &Path) -> Result<Arc<CoveredComplex>, CliError> {
    let cf: ComplexFile = read_file(complex)?;
    let (k, positions) = SimplicialComplex::from_file(&cf).map_err(|e| usage(format!("{}: {e}", complex.display())))?;
    let vf: CoverFile = read_file(cover)?;
    let base = CoveredComplex::from_file(k, &positions, &vf).map_err(|e| usage(format!("{}: {e}", cover.display())))?;
    Ok(Arc::new(base))
}

fn load_cochain<S: ScalarJson>(base: &Arc<CoveredComplex>, path: &Path) -> Result<DeligneCochain<S>, CliError> {
    let file: CochainFile = read_file(path)?;
    json::cochain_from_file(base.clone(), &file).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn simplex_labels(base: &CoveredComplex, id: SimplexId) -> Vec<usize> {
    base.complex().simplices(id.dim)[id.index].vertices().to_vec()
}

fn cocycle_report_json(r: &CocycleReport, base: Option<&CoveredComplex>) -> Value {
    let locate = |id: SimplexId| match base {
        Some(b) => json!(simplex_labels(b, id)),
        None => json!(id.to_string()),
    };
    json!({
        "passed": r.passed(),
        "tolerance": r.tolerance,
        "integrality_residual": r.integrality_residual,
        "level_residuals": r.level_residuals,
        "worst_residual": r.worst_residual(),
        "failures": r.failures.iter().map(|f| json!({
            "condition": f.condition,
            "k": f.simplex.dim,
            "simplex": locate(f.simplex),
            "indices": f.indices,
            "residual": f.residual,
        })).collect::<Vec<_>>(),
        "witnesses": r.witnesses.iter().map(|w| json!({
            "vertex": locate(SimplexId::new(0, w.vertex)),
            "indices": w.indices,
            "turns": w.turns,
        })).collect::<Vec<_>>(),
    })
}

/// Validates and marks the cochain as a cocycle, or fails with the report.
fn require_cocycle<S: Scalar>(c: DeligneCochain<S>, tol: f64) -> Result<DeligneCochain<S>, CliError> {
    let base = c.base().clone();
    c.into_cocycle(tol).map_err(|r| CliError::Failed {
        message: format!("not a cocycle (worst residual {:e})", r.worst_residual()),
        report: json!({ "validation": cocycle_report_json(&r, Some(&base)) }),
    })
}

fn index_map(spec: &str, base: &CoveredComplex, config: &RunConfig) -> Result<IndexMap, CliError> {
    let random = |seed: u64| base.random_index_map(seed, &BTreeMap::new()).map_err(usage);
    match spec {
        "default" => Ok(base.default_index_map()),
        "random" => match config.seed {
            Some(seed) => random(seed),
            None => Err(usage("--index-map random requires --seed")),
        },
        _ => {
            if let Some(s) = spec.strip_prefix("random:") {
                let seed = s.parse().map_err(|_| usage(format!("bad seed in {spec:?}")))?;
                return random(seed);
            }
            let file: BTreeMap<String, usize> = read_file(Path::new(spec))?;
            IndexMap::from_file(base, &file).map_err(|e| usage(format!("{spec}: {e}")))
        }
    }
}

fn holonomy_json<S: ScalarJson>(h: &HolonomyValue<S>) -> Value {
    json!({
        "angle": h.raw.report(),
        "reduced": h.reduced(),
        "levels": h.levels.iter().map(ScalarJson::report).collect::<Vec<_>>(),
        "flag_counts": h.flag_counts,
    })
}

fn transition_json<S: ScalarJson>(t: &TransitionValue<S>) -> Value {
    json!({
        "angle": t.raw.report(),
        "reduced": t.reduced(),
        "census": {
            "boundary_flags": t.census.boundary_flags,
            "interior_flags": t.census.interior_flags,
            "boundary_part": t.census.boundary_part,
            "interior_part": t.census.interior_part,
        },
    })
}

fn cochain_summary<S: Scalar>(c: &DeligneCochain<S>) -> Value {
    let k = c.base().complex();
    json!({
        "degree": c.degree(),
        "dimension": k.dim(),
        "simplices": (0..=k.dim()).map(|d| k.count(d)).collect::<Vec<_>>(),
        "cover_sets": c.base().num_sets(),
        "entries": c.entries().len(),
    })
}

/// Writes complex, cover and cochain files into `dir`.
fn write_artifacts<S: ScalarJson>(dir: &Path, c: &DeligneCochain<S>) -> Result<Vec<String>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    let base = c.base();
    let files = [
        ("complex.json", json::to_canonical(&base.complex().to_file())),
        ("cover.json", json::to_canonical(&base.to_file())),
        ("cochain.json", json::to_canonical(&json::cochain_to_file(c))),
    ];
    for (name, text) in &files {
        write_file(&dir.join(name), text)?;
    }
    Ok(files.iter().map(|(n, _)| n.to_string()).collect())
}

fn tolerance_check(what: &str, residual: f64, config: &RunConfig, exact: bool, report: Value) -> Result<Value, CliError> {
    let ok = if exact { residual == 0.0 } else { residual <= config.tolerance };
    if ok {
        Ok(report)
    } else {
        Err(CliError::Failed { message: format!("{what} residual {residual:e} exceeds tolerance"), report })
    }
}

/// Splits `a=1,coeffs=1,2` into pairs; a piece without `=` continues the
/// previous value.
fn parse_params(s: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out: BTreeMap<String, String> = BTreeMap::new();
    let mut last: Option<String> = None;
    for piece in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match piece.split_once('=') {
            Some((k, v)) => {
                let k = k.trim().to_string();
                if out.insert(k.clone(), v.trim().to_string()).is_some() {
                    return Err(usage(format!("parameter {k:?} given twice")));
                }
                last = Some(k);
            }
            None => match &last {
                Some(k) => {
                    let v = out.get_mut(k).expect("inserted above");
                    v.push(',');
                    v.push_str(piece);
                }
                None => return Err(usage(format!("parameter {piece:?} is not key=value"))),
            },
        }
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureRequest {
    fixture: String,
    #[serde(default)]
    params: BTreeMap<String, Value>,
    geometry: Option<String>,
    quad_order: Option<usize>,
}

fn param_string(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Array(items) => items.iter().map(|i| param_string(key, i)).collect::<Result<Vec<_>, _>>().map(|v| v.join(",")),
        _ => Err(usage(format!("parameter {key:?} must be a number, string or list"))),
    }
}

fn geometry_for(pres: &Presentation, levels: usize) -> Result<Geometry, CliError> {
    let mut g = Geometry::named(&pres.geometry).map_err(usage)?;
    for _ in 0..levels {
        g = g.subdivide().0;
    }
    Ok(g)
}

fn discretize_and_write<S: ScalarJson>(
    pres: &Presentation,
    geometry: &Geometry,
    dir: &Path,
    config: &RunConfig,
) -> Result<Value, CliError> {
    let c: DeligneCochain<S> = analytic::discretize(pres, geometry, config.discretize_options()).map_err(analytic_error)?;
    let mut files = write_artifacts(dir, &c)?;
    write_file(&dir.join("presentation.json"), &json::to_canonical(pres))?;
    files.push("presentation.json".into());
    let validation = c.validate_cocycle(config.tolerance);
    Ok(json!({
        "presentation": pres.name,
        "geometry": geometry.name(),
        "params": pres.params,
        "cochain": cochain_summary(&c),
        "worst_residual": validation.worst_residual(),
        "files": files,
        "out_dir": path_str(dir),
    }))
}

fn run_typed<S: ScalarJson>(command: &Command, config: &RunConfig) -> Result<Value, CliError> {
    let arithmetic = S::MODE;
    let mut report = match command {
        Command::Validate { inputs } => {
            let base = load_base(&inputs.complex, &inputs.cover)?;
            let c: DeligneCochain<S> = load_cochain(&base, &inputs.cochain)?;
            let r = c.validate_cocycle(config.tolerance);
            let out = json!({ "validation": cocycle_report_json(&r, Some(&base)), "cochain": cochain_summary(&c) });
            if !r.passed() {
                return Err(CliError::Failed {
                    message: format!("not a cocycle (worst residual {:e})", r.worst_residual()),
                    report: out,
                });
            }
            out
        }
        Command::Holonomy { inputs, index_map: spec } => {
            let base = load_base(&inputs.complex, &inputs.cover)?;
            let c = require_cocycle(load_cochain::<S>(&base, &inputs.cochain)?, config.tolerance)?;
            let rho = index_map(spec, &base, config)?;
            let closed = base.complex().kind() == crate::complex::ManifoldKind::ClosedOriented;
            let h = if closed { holonomy::holonomy(&c, &rho) } else { holonomy::local_action(&c, &rho) }.map_err(usage)?;
            let mut v = holonomy_json(&h);
            v["kind"] = json!(if closed { "holonomy" } else { "local_action" });
            v["index_map"] = json!(spec);
            v
        }
        Command::Transgress { inputs, rho0, rho1, rho2, boundary_formula } => {
            let base = load_base(&inputs.complex, &inputs.cover)?;
            let c = require_cocycle(load_cochain::<S>(&base, &inputs.cochain)?, config.tolerance)?;
            let r0 = index_map(rho0, &base, config)?;
            let r1 = index_map(rho1, &base, config)?;
            let general = transgression::transition_general(&c, &r0, &r1).map_err(usage)?;
            let boundary = transgression::transition_boundary(&c, &r0, &r1).map_err(usage)?;
            let agreement = transgression::mod_two_pi_gap(&general.raw, &boundary.raw).magnitude();
            let mut worst = agreement;
            let mut v = json!({
                "general": transition_json(&general),
                "boundary": transition_json(&boundary),
                "agreement": agreement,
                "rho0": rho0,
                "rho1": rho1,
            });
            if *boundary_formula {
                match c.degree() {
                    2 => {
                        let p2 = transgression::transition_p2_boundary(&c, &r0, &r1).map_err(usage)?;
                        worst = worst.max(p2.agreement);
                        v["boundary_formula"] = json!({
                            "angle": p2.value.raw.report(),
                            "reduced": p2.value.reduced(),
                            "agreement": p2.agreement,
                            "interior_residual": p2.interior_residual,
                        });
                    }
                    3 => {
                        let Some(spec2) = rho2 else {
                            return Err(usage("the degree-3 boundary formula needs --rho2"));
                        };
                        let r2 = index_map(spec2, &base, config)?;
                        let t = transgression::transgress_p3_triple(&c, &r0, &r1, &r2, None).map_err(usage)?;
                        worst = worst.max(t.agreement).max(t.composition.angle_residual().magnitude());
                        v["boundary_formula"] = json!({
                            "composition": t.composition.report(),
                            "surface_value": t.surface_value.report(),
                            "edge_formula": t.edge_formula.report(),
                            "agreement": t.agreement,
                        });
                        v["rho2"] = json!(spec2);
                    }
                    p => return Err(usage(format!("no specialized boundary formula in degree {p}"))),
                }
            }
            tolerance_check("transition agreement", worst, config, S::EXACT, v)?
        }
        Command::Cup { lhs, rhs, geometry, out_dir } => {
            let x: Presentation = read_file(lhs)?;
            let y: Presentation = read_file(rhs)?;
            let product = analytic::cup_product(&x, &y).map_err(usage)?;
            let g = Geometry::named(geometry).map_err(usage)?;
            discretize_and_write::<S>(&product, &g, out_dir, config)?
        }
        Command::Fixture { name, params, request, out_dir } => {
            let mut raw = parse_params(params)?;
            let mut order = config.quad_order;
            let fixture = match (name, request) {
                (Some(n), None) => n.clone(),
                (None, Some(path)) => {
                    let req: FixtureRequest = read_file(path)?;
                    for (k, v) in &req.params {
                        raw.entry(k.clone()).or_insert(param_string(k, v)?);
                    }
                    if let Some(g) = req.geometry {
                        raw.entry("geometry".into()).or_insert(g);
                    }
                    order = req.quad_order.unwrap_or(order);
                    req.fixture
                }
                _ => return Err(usage("give a fixture name or --request, not both")),
            };
            let pres = analytic::generate_fixture(&fixture, &raw).map_err(usage)?;
            let g = Geometry::named(&pres.geometry).map_err(usage)?;
            let cfg = RunConfig { quad_order: order, ..config.clone() };
            let mut v = discretize_and_write::<S>(&pres, &g, out_dir, &cfg)?;
            v["fixture"] = json!(fixture);
            v
        }
        Command::Shift { inputs, b } => {
            let base = load_base(&inputs.complex, &inputs.cover)?;
            let c: DeligneCochain<S> = load_cochain(&base, &inputs.cochain)?;
            let bc: DeligneCochain<S> = load_cochain(&base, b)?;
            let shifted = c.exact_shift(&bc).map_err(usage)?;
            serde_json::to_value(json::cochain_to_file(&shifted)).expect("cochain files serialize")
        }
        Command::Curvature { inputs, index_map: spec } => {
            let base = load_base(&inputs.complex, &inputs.cover)?;
            let c = require_cocycle(load_cochain::<S>(&base, &inputs.cochain)?, config.tolerance)?;
            let rho = index_map(spec, &base, config)?;
            let cv = holonomy::curvature_total(&c, &rho, config.tolerance).map_err(|e| match e {
                holonomy::HolonomyError::IndexDependence { simplex, spread } => CliError::Failed {
                    message: e.to_string(),
                    report: json!({ "index_dependence": { "simplex": simplex, "spread": spread } }),
                },
                other => usage(other),
            })?;
            let chern = c.chern_cocycle(config.tolerance).map_err(usage)?;
            let pairing = chern.pair(&rho);
            let witnesses: Vec<Value> = chern
                .entries()
                .take(16)
                .map(|(v, w, n)| json!({ "vertex": simplex_labels(&base, SimplexId::new(0, v)), "indices": w, "turns": n }))
                .collect();
            let v = json!({
                "total": cv.total.report(),
                "turns": cv.turns,
                "turns_residual": cv.turns_residual,
                "index_spread": cv.index_spread,
                "chern_pairing": pairing,
                "chern_witnesses": witnesses,
                "index_map": spec,
            });
            tolerance_check("integrality", cv.turns_residual, config, S::EXACT, v)?
        }
        Command::Glue { complex1, cover1, cochain1, complex2, cover2, cochain2, matching, out_dir } => {
            let b1 = load_base(complex1, cover1)?;
            let b2 = load_base(complex2, cover2)?;
            let c1 = require_cocycle(load_cochain::<S>(&b1, cochain1)?, config.tolerance)?;
            let c2 = require_cocycle(load_cochain::<S>(&b2, cochain2)?, config.tolerance)?;
            let raw: BTreeMap<String, usize> = read_file(matching)?;
            let matching = raw
                .iter()
                .map(|(k, &v)| k.parse::<usize>().map(|k| (k, v)).map_err(|_| usage(format!("matching key {k:?} is not a vertex"))))
                .collect::<Result<BTreeMap<_, _>, _>>()?;
            let (glued, relabel) = c1.glue(&c2, &matching, config.tolerance).map_err(usage)?;
            let files = write_artifacts(out_dir, &glued)?;
            let gb = glued.base().clone();
            // ρ on the glued complex, carried back to both halves
            let rho = gb.default_index_map();
            let parent = |side: &CoveredComplex, map: &dyn Fn(usize) -> usize| -> Result<Vec<Vec<SimplexId>>, CliError> {
                let k = side.complex();
                (0..=k.dim())
                    .map(|d| {
                        k.simplices(d)
                            .iter()
                            .map(|s| {
                                let mut v: Vec<usize> = s.vertices().iter().map(|&x| map(x)).collect();
                                v.sort_unstable();
                                gb.complex().find(&v).ok_or_else(|| usage(format!("simplex {v:?} lost in gluing")))
                            })
                            .collect()
                    })
                    .collect()
            };
            let p1 = parent(&b1, &|x| x)?;
            let p2 = parent(&b2, &|x| relabel[&x])?;
            let (rho1, rho2) = (rho.pull(&p1), rho.pull(&p2));
            let a1 = holonomy::local_action(&c1, &rho1).map_err(usage)?;
            let a2 = holonomy::local_action(&c2, &rho2).map_err(usage)?;
            let whole = holonomy::local_action(&glued, &rho).map_err(usage)?;
            let sum = a1.raw.clone() + a2.raw.clone();
            let gap = transgression::mod_two_pi_gap(&sum, &whole.raw).magnitude();
            let v = json!({
                "first": holonomy_json(&a1),
                "second": holonomy_json(&a2),
                "glued": holonomy_json(&whole),
                "glued_kind": gb.complex().kind().as_str(),
                "gap": gap,
                "relabel": relabel.iter().map(|(a, b)| (a.to_string(), json!(b))).collect::<Map<_, _>>(),
                "cochain": cochain_summary(&glued),
                "files": files,
                "out_dir": path_str(out_dir),
            });
            tolerance_check("gluing", gap, config, S::EXACT, v)?
        }
        Command::Subdivide { complex, cover, presentation, levels, out_dir } => match (presentation, complex, cover) {
            (Some(p), None, None) => {
                let pres: Presentation = read_file(p)?;
                let g = geometry_for(&pres, *levels)?;
                let mut v = discretize_and_write::<S>(&pres, &g, out_dir, config)?;
                v["levels"] = json!(levels);
                v
            }
            (None, Some(kp), Some(vp)) => {
                let mut base = load_base(kp, vp)?;
                for _ in 0..*levels {
                    base = Arc::new(base.subdivide().0);
                }
                std::fs::create_dir_all(out_dir).map_err(|e| usage(format!("{}: {e}", out_dir.display())))?;
                write_file(&out_dir.join("complex.json"), &json::to_canonical(&base.complex().to_file()))?;
                write_file(&out_dir.join("cover.json"), &json::to_canonical(&base.to_file()))?;
                let k = base.complex();
                json!({
                    "levels": levels,
                    "simplices": (0..=k.dim()).map(|d| k.count(d)).collect::<Vec<_>>(),
                    "euler_characteristic": k.euler_characteristic(),
                    "files": ["complex.json", "cover.json"],
                    "out_dir": path_str(out_dir),
                })
            }
            _ => return Err(usage("give either --presentation or a complex and cover")),
        },
    };
    report["arithmetic"] = json!(arithmetic);
    Ok(report)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for k in keys {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, &map[k], out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), item, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            out.push((prefix.to_string(), format!("[{}]", parts.join(", "))));
        }
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format!("{}", n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => json::canonical(report),
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", report, &mut lines);
            lines.into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
        }
    }
}

fn emit(report: &Value, config: &RunConfig) -> Result<(), CliError> {
    let text = render(report, config.format);
    match &config.out {
        Some(p) => write_file(p, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(usage)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match resolve_config(&cli.global) {
        Ok(c) => c,
        Err(e) => return fail(&e, None),
    };
    let result = match config.arithmetic {
        Arithmetic::Float => run_typed::<f64>(&cli.command, &config),
        Arithmetic::Rational => run_typed::<Exact>(&cli.command, &config),
    };
    match result {
        Ok(report) => match emit(&report, &config) {
            Ok(()) => 0,
            Err(e) => fail(&e, None),
        },
        Err(e) => fail(&e, Some(&config)),
    }
}

fn fail(e: &CliError, config: Option<&RunConfig>) -> i32 {
    match e {
        CliError::Usage(m) => eprintln!("error: {m}"),
        CliError::Failed { message, report } => {
            eprintln!("check failed: {message}");
            if let Some(config) = config {
                let mut report = report.clone();
                report["status"] = json!("failed");
                report["message"] = json!(message);
                if let Err(CliError::Usage(m)) = emit(&report, config) {
                    eprintln!("error: {m}");
                }
            }
        }
    }
    e.code()
}

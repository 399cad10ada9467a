//! Batch command surface: configuration loading, deterministic JSON
//! reports, CSV point lists, and SVG figures.
//!
//! Exit codes: `0` — every requested check passed; `1` — a check ran and
//! failed (the report's `violations` array says exactly what); `2` — the
//! request itself was malformed (unparsable flags, broken files, dimension
//! mismatches), reported on stderr with the offending location.
//!
//! Reports are byte-identical for identical inputs; `--stamp` opts into a
//! wall-clock timestamp. The environment variable `MEYERKIT_THREADS` caps
//! worker-thread parallelism (`0` or unset lets the runtime decide). All
//! file outputs are written atomically (temp file + rename).

use std::collections::BTreeMap;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cps::{CutProjectScheme, DensityVerdict, ValidationOptions};
use crate::io::{self, MorphismSpec, SchemeWithWindows};
use crate::minimal::{
    minimalize, verify_minimal, MinimalCertificate, Minimalization, MinimalizeOptions,
};
use crate::modelset::{check_interpolation, generate, NamedWindow, WindowFamily, WindowMode};
use crate::morphism::{amalgamated_cps, validate_morphism};
use crate::numeric::{IntMatrix, QuadExt};
use crate::omega::{omega_of_patch, srp_test, OmegaOptions, SrpVerdict};
use crate::pointset::{inf_dist, MultiPointSet};
use crate::region::RBox;
use crate::svg;

/// Entry point used by the binary: parses `args` (including `argv[0]`),
/// runs the subcommand, prints the JSON report to stdout, and returns the
/// exit code.
pub fn dispatch(args: &[String]) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Err(Failure::Config(msg)) = apply_thread_cap() {
        eprintln!("error: {msg}");
        return 2;
    }
    let (command, outcome) = match &cli.command {
        Command::Validate(a) => ("validate", run_validate(a)),
        Command::Generate(a) => ("generate", run_generate(a)),
        Command::Check(a) => ("check", run_check(a)),
        Command::Verify(v) => match v {
            VerifyCommand::Delone(a) => ("verify delone", run_verify_delone(a)),
            VerifyCommand::Meyer(a) => ("verify meyer", run_verify_meyer(a)),
            VerifyCommand::Repetitivity(a) => {
                ("verify repetitivity", run_verify_repetitivity(a))
            }
        },
        Command::Minimize(a) => ("minimize", run_minimize(a)),
        Command::Omega(a) => ("omega", run_omega(a)),
        Command::Srp(a) => ("srp", run_srp(a)),
        Command::Morphism(m) => match m {
            MorphismCommand::Validate(a) => ("morphism validate", run_morphism_validate(a)),
            MorphismCommand::Amalgam(a) => ("morphism amalgam", run_morphism_amalgam(a)),
        },
    };
    match outcome {
        Ok(out) => {
            let report = Report {
                command,
                version: env!("CARGO_PKG_VERSION"),
                inputs: &out.inputs,
                timestamp: cli.stamp.then(now_secs),
                passed: out.passed,
                violations: &out.violations,
                result: &out.result,
            };
            print!("{}", io::to_json_pretty(&report));
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

#[derive(Parser)]
#[command(
    name = "meyerkit",
    version,
    about = "Exact cut-and-project schemes: generation, verification, minimization"
)]
struct Cli {
    /// Include a wall-clock timestamp in the report (off by default so
    /// identical inputs produce byte-identical reports).
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scheme configuration: projections, finite part, density
    /// and separation certificates.
    Validate(ValidateArgs),
    /// Generate the model multiple set of a window family over a box.
    Generate(GenerateArgs),
    /// Check that a point list interpolates between the interior and closed
    /// model sets of a window family.
    Check(CheckArgs),
    /// Finite-scale verifiers on point lists.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Run the minimization pipeline and certify its output.
    Minimize(MinimizeArgs),
    /// Resolve the internal parameter of a patch by nested intersection.
    Omega(OmegaArgs),
    /// Test whether two points of a model set carry the same local pattern.
    Srp(SrpArgs),
    /// Validate scheme morphisms and build finite-index amalgamations.
    #[command(subcommand)]
    Morphism(MorphismCommand),
}

#[derive(Args)]
struct ValidateArgs {
    /// Scheme configuration (JSON).
    #[arg(long)]
    cps: String,
}

#[derive(Args)]
struct GenerateArgs {
    /// Scheme configuration (JSON).
    #[arg(long)]
    cps: String,
    /// Window family (JSON).
    #[arg(long)]
    window: String,
    /// Physical box: lo hi per axis.
    #[arg(long = "box", num_args = 2.., allow_negative_numbers = true, value_name = "LO HI")]
    view: Vec<String>,
    /// Output CSV path for the generated points.
    #[arg(long)]
    out: String,
    /// Optional SVG figure (physical scatter plus internal picture).
    #[arg(long)]
    svg: Option<String>,
    /// Use open windows (drop boundary points).
    #[arg(long)]
    interior: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Scheme configuration (JSON).
    #[arg(long)]
    cps: String,
    /// Window family (JSON).
    #[arg(long)]
    window: String,
    /// Point list (CSV) to check against the model set.
    #[arg(long)]
    points: String,
    /// Carrier box of the point list: lo hi per axis (default: hull).
    #[arg(long = "box", num_args = 2.., allow_negative_numbers = true, value_name = "LO HI")]
    view: Vec<String>,
    /// Boundary tolerance: windows are shrunk/grown by this amount.
    #[arg(long)]
    tol: Option<String>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Packing radius (uniform discreteness) and covering radius (relative
    /// density) at finite scale.
    Delone(DeloneArgs),
    /// Difference coverage: support - support inside support + correction.
    Meyer(MeyerArgs),
    /// Patch-recurrence radius: scale-limited repetitivity evidence.
    Repetitivity(RepetitivityArgs),
}

#[derive(Args)]
struct DeloneArgs {
    /// Point list (CSV).
    #[arg(long)]
    points: String,
    /// Carrier box: lo hi per axis (default: hull of the points).
    #[arg(long = "box", num_args = 2.., allow_negative_numbers = true, value_name = "LO HI")]
    view: Vec<String>,
    /// Boundary margin; covering is probed on the carrier shrunk by this.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    margin: String,
}

#[derive(Args)]
struct MeyerArgs {
    /// Point list (CSV).
    #[arg(long)]
    points: String,
    /// Correction set: JSON list of exact vectors.
    #[arg(long)]
    fset: String,
    /// Take differences only of points within this distance of the carrier
    /// center (default: all pairs).
    #[arg(long, allow_hyphen_values = true)]
    radius: Option<String>,
    /// Carrier box: lo hi per axis (default: hull of the points).
    #[arg(long = "box", num_args = 2.., allow_negative_numbers = true, value_name = "LO HI")]
    view: Vec<String>,
}

#[derive(Args)]
struct RepetitivityArgs {
    /// Point list (CSV).
    #[arg(long)]
    points: String,
    /// Patch radius whose recurrence is measured.
    #[arg(long, allow_hyphen_values = true)]
    radius: String,
    /// Carrier box: lo hi per axis (default: hull of the points).
    #[arg(long = "box", num_args = 2.., allow_negative_numbers = true, value_name = "LO HI")]
    view: Vec<String>,
}

#[derive(Args)]
struct MinimizeArgs {
    /// Combined input: JSON with "cps" and "windows" fields.
    #[arg(long, conflicts_with_all = ["cps", "window"])]
    input: Option<String>,
    /// Scheme configuration (JSON); requires --window.
    #[arg(long, requires = "window")]
    cps: Option<String>,
    /// Window family (JSON); requires --cps.
    #[arg(long, requires = "cps")]
    window: Option<String>,
    /// View box the support lattice is read from: lo hi per axis.
    #[arg(long = "box", num_args = 2.., allow_negative_numbers = true, value_name = "LO HI")]
    view: Vec<String>,
    /// Write the full result (inputs, stages, minimal scheme, certificate)
    /// as JSON.
    #[arg(long)]
    out: Option<String>,
    /// Write a human-readable stage-by-stage chain report.
    #[arg(long)]
    report: Option<String>,
    /// Write a before/after SVG of the generated point sets.
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct OmegaArgs {
    /// Scheme configuration (JSON).
    #[arg(long)]
    cps: String,
    /// Window family (JSON).
    #[arg(long)]
    windows: String,
    /// Patch: CSV point list (color, coordinates).
    #[arg(long)]
    patch: String,
    /// Resolution tolerance for the real extent of the parameter region.
    #[arg(long, allow_hyphen_values = true)]
    tol: String,
    /// Carrier box of the patch: lo hi per axis (default: hull).
    #[arg(long = "box", num_args = 2.., allow_negative_numbers = true, value_name = "LO HI")]
    view: Vec<String>,
    /// Internal search box for lattice lifts (required when the physical
    /// projection is not injective): lo hi per internal axis.
    #[arg(long, num_args = 2.., allow_negative_numbers = true, value_name = "LO HI")]
    search: Vec<String>,
    /// Also report the region at each radius of the doubling schedule.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct SrpArgs {
    /// Scheme configuration (JSON).
    #[arg(long)]
    cps: String,
    /// Window family (JSON).
    #[arg(long)]
    windows: String,
    /// First point: comma-separated exact coordinates.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Second point: comma-separated exact coordinates.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    /// Resolution tolerance.
    #[arg(long, allow_hyphen_values = true)]
    tol: String,
    /// First patch radius of the doubling schedule.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    initial_radius: String,
    /// Largest patch radius to try.
    #[arg(long, default_value = "64", allow_hyphen_values = true)]
    max_radius: String,
}

#[derive(Subcommand)]
enum MorphismCommand {
    /// Check that a lattice map is a morphism of schemes and report the
    /// induced internal map with onto/open diagnostics.
    Validate(MorphismValidateArgs),
    /// Extend a scheme from a finite-index sublattice to the full lattice.
    Amalgam(AmalgamArgs),
}

#[derive(Args)]
struct MorphismValidateArgs {
    /// Combined morphism spec: JSON with "source", "target", "map".
    #[arg(long, conflicts_with_all = ["source", "target", "map"])]
    spec: Option<String>,
    /// Source scheme (JSON); requires --target and --map.
    #[arg(long, requires = "target", requires = "map")]
    source: Option<String>,
    /// Target scheme (JSON).
    #[arg(long, requires = "source")]
    target: Option<String>,
    /// Lattice map: JSON integer matrix (rows).
    #[arg(long, requires = "source")]
    map: Option<String>,
}

#[derive(Args)]
struct AmalgamArgs {
    /// Scheme on the sublattice (JSON).
    #[arg(long)]
    cps: String,
    /// Embedding of the sublattice into the full lattice: JSON integer
    /// matrix (columns span the sublattice).
    #[arg(long)]
    gamma2: String,
    /// Window family to transport onto the amalgam (requires a split
    /// extension).
    #[arg(long)]
    window: Option<String>,
    /// Write the amalgam result as JSON.
    #[arg(long)]
    out: Option<String>,
}

/// What a subcommand hands back to the dispatcher.
struct Outcome {
    passed: bool,
    violations: Vec<String>,
    inputs: BTreeMap<String, String>,
    result: Value,
}

#[derive(Debug)]
enum Failure {
    /// Malformed request: exits 2 with the message on stderr.
    Config(String),
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    version: &'static str,
    inputs: &'a BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    passed: bool,
    violations: &'a [String],
    result: &'a Value,
}

fn cfg(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn now_secs() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn apply_thread_cap() -> Result<(), Failure> {
    match std::env::var("MEYERKIT_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(cfg(format!("MEYERKIT_THREADS: {e}"))),
        Ok(text) => {
            let n: usize = text.trim().parse().map_err(|_| {
                cfg(format!("MEYERKIT_THREADS must be a non-negative integer, got {text:?}"))
            })?;
            if n > 0 {
                // Only the first global-pool build wins; a dispatch runs
                // once per process, so that is the one that matters.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Ok(())
        }
    }
}

fn scalar(text: &str) -> Result<QuadExt, Failure> {
    io::parse_exact_scalar(text).map_err(cfg)
}

fn parse_point(text: &str) -> Result<Vec<QuadExt>, Failure> {
    text.split(',').map(|part| scalar(part.trim())).collect()
}

/// `lo hi` per axis; `dim` constrains the axis count when known.
fn parse_view(values: &[String], dim: Option<usize>) -> Result<RBox, Failure> {
    if values.len() % 2 != 0 {
        return Err(cfg("--box needs an even number of values: lo hi per axis"));
    }
    if let Some(d) = dim {
        if values.len() != 2 * d {
            return Err(cfg(format!(
                "--box has {} axes but the space has {d}",
                values.len() / 2
            )));
        }
    }
    let mut intervals = Vec::with_capacity(values.len() / 2);
    for pair in values.chunks(2) {
        intervals.push((scalar(&pair[0])?, scalar(&pair[1])?));
    }
    RBox::new(intervals).map_err(cfg)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Failure> {
    io::load_json(path).map_err(cfg)
}

fn load_points(path: &str, view: &[String]) -> Result<MultiPointSet, Failure> {
    let text = io::read_text(path).map_err(cfg)?;
    let carrier = if view.is_empty() {
        None
    } else {
        Some(parse_view(view, None)?)
    };
    io::points_from_csv(&text, carrier).map_err(cfg)
}

fn val<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(cfg)
}

fn show_point(p: &[QuadExt]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Caps a violation list at a readable size; the full data is always in
/// the report's `result`.
fn push_capped(violations: &mut Vec<String>, items: impl Iterator<Item = String>, cap: usize) {
    let mut total = 0usize;
    for item in items {
        total += 1;
        if total <= cap {
            violations.push(item);
        }
    }
    if total > cap {
        violations.push(format!("... and {} more (see result)", total - cap));
    }
}

fn run_validate(a: &ValidateArgs) -> Result<Outcome, Failure> {
    let scheme: CutProjectScheme = load_json(&a.cps)?;
    let report = scheme.validate(&ValidationOptions::default());
    let mut violations = Vec::new();
    if !report.separation.certified {
        violations.push(format!(
            "embedding separation not certified within radius {}",
            report.separation.radius
        ));
    }
    if let DensityVerdict::CertifiedNonDense { functional } = &report.density {
        violations.push(format!(
            "internal image is certified non-dense (integer functional {functional:?})"
        ));
    }
    Ok(Outcome {
        passed: violations.is_empty(),
        violations,
        inputs: BTreeMap::from([("cps".into(), a.cps.clone())]),
        result: val(&report)?,
    })
}

fn run_generate(a: &GenerateArgs) -> Result<Outcome, Failure> {
    let scheme: CutProjectScheme = load_json(&a.cps)?;
    let family: WindowFamily = load_json(&a.window)?;
    let view = parse_view(&a.view, Some(scheme.physical_dim()))?;
    let mode = if a.interior { WindowMode::Interior } else { WindowMode::Closed };
    let set = generate(&scheme, &family, &view, mode).map_err(cfg)?;
    let csv = io::points_to_csv(&set).map_err(cfg)?;
    io::write_text_atomic(&a.out, &csv).map_err(cfg)?;
    if let Some(svg_path) = &a.svg {
        let m = scheme.internal_real_dim();
        let figure = if (1..=2).contains(&m) {
            svg::render_with_internal(&set, &scheme, &family).map_err(cfg)?
        } else {
            svg::render_points(&set).map_err(cfg)?
        };
        io::write_text_atomic(svg_path, &figure).map_err(cfg)?;
    }
    let per_color: BTreeMap<String, usize> =
        set.colors().map(|(c, pts)| (c.to_string(), pts.len())).collect();
    let mut inputs = BTreeMap::from([
        ("cps".into(), a.cps.clone()),
        ("window".into(), a.window.clone()),
        ("box".into(), a.view.join(" ")),
        ("out".into(), a.out.clone()),
    ]);
    if let Some(svg_path) = &a.svg {
        inputs.insert("svg".into(), svg_path.clone());
    }
    if a.interior {
        inputs.insert("interior".into(), "true".into());
    }
    Ok(Outcome {
        passed: true,
        violations: Vec::new(),
        inputs,
        result: json!({
            "points": set.len(),
            "per_color": per_color,
            "csv": a.out,
            "svg": a.svg,
        }),
    })
}

fn run_check(a: &CheckArgs) -> Result<Outcome, Failure> {
    let scheme: CutProjectScheme = load_json(&a.cps)?;
    let family: WindowFamily = load_json(&a.window)?;
    let set = load_points(&a.points, &a.view)?;
    let tol = a.tol.as_deref().map(scalar).transpose()?;
    let report = check_interpolation(&scheme, &family, &set, tol.as_ref()).map_err(cfg)?;
    let mut violations = Vec::new();
    for color in &report.unmatched_colors {
        violations.push(format!("color {color:?} is present on only one side"));
    }
    for c in &report.colors {
        if !c.missing_interior.is_empty() {
            push_capped(
                &mut violations,
                c.missing_interior.iter().map(|p| {
                    format!("color {:?}: interior point {} missing", c.color, show_point(p))
                }),
                10,
            );
        }
        if !c.excess.is_empty() {
            push_capped(
                &mut violations,
                c.excess.iter().map(|p| {
                    format!(
                        "color {:?}: point {} outside the closed model set",
                        c.color,
                        show_point(p)
                    )
                }),
                10,
            );
        }
    }
    let mut inputs = BTreeMap::from([
        ("cps".into(), a.cps.clone()),
        ("window".into(), a.window.clone()),
        ("points".into(), a.points.clone()),
    ]);
    if !a.view.is_empty() {
        inputs.insert("box".into(), a.view.join(" "));
    }
    if let Some(t) = &a.tol {
        inputs.insert("tol".into(), t.clone());
    }
    Ok(Outcome {
        passed: violations.is_empty(),
        violations,
        inputs,
        result: val(&report)?,
    })
}

fn run_verify_delone(a: &DeloneArgs) -> Result<Outcome, Failure> {
    let set = load_points(&a.points, &a.view)?;
    let margin = scalar(&a.margin)?;
    let packing = set.packing_radius();
    let over = set
        .carrier()
        .shrink(&margin)
        .ok_or_else(|| cfg("margin leaves no region to probe for covering"))?;
    let step = &margin / &QuadExt::from_int(2);
    let covering = set.covering_radius(&over, &step).map_err(cfg)?;
    let mut violations = Vec::new();
    if packing.is_none() {
        violations.push("fewer than two support points: packing radius undefined".into());
    }
    let mut inputs = BTreeMap::from([
        ("points".into(), a.points.clone()),
        ("margin".into(), a.margin.clone()),
    ]);
    if !a.view.is_empty() {
        inputs.insert("box".into(), a.view.join(" "));
    }
    Ok(Outcome {
        passed: violations.is_empty(),
        violations,
        inputs,
        result: json!({
            "packing_radius": val(&packing)?,
            "covering": val(&covering)?,
        }),
    })
}

fn run_verify_meyer(a: &MeyerArgs) -> Result<Outcome, Failure> {
    let set = load_points(&a.points, &a.view)?;
    let fset: Vec<Vec<QuadExt>> = load_json(&a.fset)?;
    for f in &fset {
        if f.len() != set.dim() {
            return Err(cfg(format!(
                "correction vector {} has {} coordinates, expected {}",
                show_point(f),
                f.len(),
                set.dim()
            )));
        }
    }
    let radius = a.radius.as_deref().map(scalar).transpose()?;
    let report = set.meyer_check(&fset, radius.as_ref());
    let mut violations = Vec::new();
    push_capped(
        &mut violations,
        report.defects.iter().map(|w| format!("uncovered difference {}", show_point(w))),
        20,
    );
    let mut inputs = BTreeMap::from([
        ("points".into(), a.points.clone()),
        ("fset".into(), a.fset.clone()),
    ]);
    if let Some(r) = &a.radius {
        inputs.insert("radius".into(), r.clone());
    }
    if !a.view.is_empty() {
        inputs.insert("box".into(), a.view.join(" "));
    }
    Ok(Outcome {
        passed: report.passed(),
        violations,
        inputs,
        result: val(&report)?,
    })
}

fn run_verify_repetitivity(a: &RepetitivityArgs) -> Result<Outcome, Failure> {
    let set = load_points(&a.points, &a.view)?;
    let r = scalar(&a.radius)?;
    let report = set.repetition_radius(&r).map_err(cfg)?;
    let mut violations = Vec::new();
    if report.radius.is_none() {
        push_capped(
            &mut violations,
            report
                .unmatched
                .iter()
                .map(|p| format!("patch at {} has no second occurrence in view", show_point(p))),
            20,
        );
        if report.unmatched.is_empty() {
            violations.push("no patch classes observed in the shrunk carrier".into());
        }
    }
    let mut inputs = BTreeMap::from([
        ("points".into(), a.points.clone()),
        ("radius".into(), a.radius.clone()),
    ]);
    if !a.view.is_empty() {
        inputs.insert("box".into(), a.view.join(" "));
    }
    Ok(Outcome {
        passed: report.radius.is_some(),
        violations,
        inputs,
        result: val(&report)?,
    })
}

fn run_minimize(a: &MinimizeArgs) -> Result<Outcome, Failure> {
    let mut inputs = BTreeMap::new();
    let (scheme, windows) = match (&a.input, &a.cps, &a.window) {
        (Some(path), None, None) => {
            inputs.insert("input".into(), path.clone());
            let combined: SchemeWithWindows = load_json(path)?;
            (combined.cps, combined.windows)
        }
        (None, Some(cps), Some(window)) => {
            inputs.insert("cps".into(), cps.clone());
            inputs.insert("window".into(), window.clone());
            (load_json(cps)?, load_json(window)?)
        }
        _ => return Err(cfg("give either --input or both --cps and --window")),
    };
    if a.view.is_empty() {
        return Err(cfg("--box is required: lo hi per physical axis"));
    }
    let view = parse_view(&a.view, Some(scheme.physical_dim()))?;
    inputs.insert("box".into(), a.view.join(" "));
    let options = MinimalizeOptions { view: view.clone() };
    let res = minimalize(&scheme, &windows, &options).map_err(cfg)?;
    let cert = verify_minimal(&scheme, &windows, &res).map_err(cfg)?;
    let mut violations = Vec::new();
    if !cert.containment {
        violations.push("an input point is missing from the minimal model set".into());
    }
    if !cert.no_excess {
        violations.push("the minimal model set has points the input lacks".into());
    }
    if !cert.interior_matches {
        violations.push("interior-window generations disagree".into());
    }
    if !cert.idempotent {
        violations.push("re-running the pipeline on its output changes it".into());
    }
    push_capped(
        &mut violations,
        cert.witnesses.iter().map(|w| {
            format!("witness: color {:?} point {} ({:?})", w.color, show_point(&w.point), w.kind)
        }),
        10,
    );
    let result = json!({
        "input": { "cps": val(&scheme)?, "windows": val(&windows)? },
        "stages": val(&res.stages)?,
        "minimal": { "cps": val(&res.scheme)?, "windows": val(&res.windows)? },
        "certificate": val(&cert)?,
    });
    if let Some(out) = &a.out {
        io::write_text_atomic(out, &io::to_json_pretty(&result)).map_err(cfg)?;
        inputs.insert("out".into(), out.clone());
    }
    if let Some(report_path) = &a.report {
        io::write_text_atomic(report_path, &chain_text(&res, &cert)).map_err(cfg)?;
        inputs.insert("report".into(), report_path.clone());
    }
    if let Some(svg_path) = &a.svg {
        let before = generate(&scheme, &windows, &view, WindowMode::Closed).map_err(cfg)?;
        let after = generate(&res.scheme, &res.windows, &view, WindowMode::Closed).map_err(cfg)?;
        let figure =
            svg::render_comparison(("input", &before), ("minimal", &after)).map_err(cfg)?;
        io::write_text_atomic(svg_path, &figure).map_err(cfg)?;
        inputs.insert("svg".into(), svg_path.clone());
    }
    Ok(Outcome { passed: cert.passed(), violations, inputs, result })
}

fn orders_text(orders: &[u64]) -> String {
    if orders.is_empty() {
        "trivial".to_string()
    } else {
        let parts: Vec<String> = orders.iter().map(|q| format!("Z/{q}")).collect();
        parts.join(" x ")
    }
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

/// Deterministic plain-text account of the pipeline stages.
fn chain_text(res: &Minimalization, cert: &MinimalCertificate) -> String {
    let s = &res.stages;
    let mut t = String::new();
    t.push_str("minimization chain\n");
    t.push_str("==================\n\n");
    t.push_str(&format!(
        "view box            {}\n",
        s.view
            .intervals()
            .iter()
            .map(|(lo, hi)| format!("[{lo}, {hi}]"))
            .collect::<Vec<_>>()
            .join(" x ")
    ));
    t.push_str(&format!("input finite part   {}\n", orders_text(&s.group_before)));
    t.push_str(&format!(
        "stage 1 regularize  windows {}\n",
        if s.regularized { "changed (closures of interiors taken)" } else { "already regular" }
    ));
    t.push_str(&format!(
        "stage 2 redundancy  subgroup order {}; quotient finite part {}\n",
        s.redundancy_order,
        orders_text(&s.group_after_quotient)
    ));
    if !s.redundancy_elements.is_empty() && s.redundancy_order > 1 {
        let elems: Vec<String> =
            s.redundancy_elements.iter().map(|e| format!("{:?}", e.0)).collect();
        t.push_str(&format!("                    elements {}\n", elems.join(", ")));
    }
    t.push_str(&format!(
        "stage 3 support     sublattice index {}; basis columns {:?}\n",
        s.support_index, s.support_basis
    ));
    t.push_str(&format!("final finite part   {}\n", orders_text(&s.group_final)));
    let density = match &s.density_final {
        DensityVerdict::Dense => "dense (finite internal space)".to_string(),
        DensityVerdict::CertifiedNonDense { functional } => {
            format!("certified non-dense (functional {functional:?})")
        }
        DensityVerdict::DenseUpToHeight { height } => {
            format!("no obstruction up to height {height}")
        }
    };
    t.push_str(&format!("final density       {density}\n\n"));
    t.push_str("certificate\n");
    t.push_str(&format!("  containment       {}\n", yes_no(cert.containment)));
    t.push_str(&format!("  no excess         {}\n", yes_no(cert.no_excess)));
    t.push_str(&format!("  interior matches  {}\n", yes_no(cert.interior_matches)));
    t.push_str(&format!("  idempotent        {}\n", yes_no(cert.idempotent)));
    t.push_str(&format!(
        "verdict             {}\n",
        if cert.passed() { "PASS" } else { "FAIL" }
    ));
    t
}

/// Points of `set` within max-norm `radius` of `center`, same carrier.
fn truncate_patch(
    set: &MultiPointSet,
    center: &[QuadExt],
    radius: &QuadExt,
) -> Result<MultiPointSet, Failure> {
    let mut out = MultiPointSet::new(set.dim(), set.carrier().clone()).map_err(cfg)?;
    for (color, points) in set.colors() {
        for p in points {
            if &inf_dist(p, center) <= radius {
                out.add(color, p.clone()).map_err(cfg)?;
            }
        }
    }
    Ok(out)
}

fn run_omega(a: &OmegaArgs) -> Result<Outcome, Failure> {
    let scheme: CutProjectScheme = load_json(&a.cps)?;
    let family: WindowFamily = load_json(&a.windows)?;
    let patch = load_points(&a.patch, &a.view)?;
    let tol = scalar(&a.tol)?;
    let search = if a.search.is_empty() {
        None
    } else {
        Some(parse_view(&a.search, Some(scheme.internal_real_dim()))?)
    };
    if !scheme.is_a_injective() && search.is_none() {
        return Err(cfg(
            "the physical projection is not injective; give --search lo hi per internal axis",
        ));
    }
    let center: Vec<QuadExt> = patch
        .carrier()
        .intervals()
        .iter()
        .map(|(lo, hi)| (lo + hi) / &QuadExt::from_int(2))
        .collect();
    let full_radius = patch
        .colors()
        .flat_map(|(_, pts)| pts.iter())
        .map(|p| inf_dist(p, &center))
        .max()
        .unwrap_or_else(QuadExt::zero);

    let region = omega_of_patch(&scheme, &family, &patch, search.as_ref()).map_err(cfg)?;
    let mut violations = Vec::new();
    let mut point = Value::Null;
    let mut resolved = false;
    let (extent_text, fiber_count) = match region.extent() {
        None => {
            violations
                .push("parameter region is empty: not a patch of this scheme's hull".into());
            ("empty".to_string(), 0)
        }
        Some(summary) => {
            resolved = summary.fiber_count == 1 && summary.extent <= tol;
            if summary.fiber_count > 1 {
                violations.push(format!(
                    "region still spans {} fibers at the full patch",
                    summary.fiber_count
                ));
            } else if summary.extent > tol {
                violations.push(format!(
                    "region extent {} exceeds tolerance {}",
                    summary.extent, tol
                ));
            }
            if resolved {
                let (fiber, _) = region.fibers().next().expect("single fiber");
                let bb = region.bounding_box().expect("nonempty region");
                let mid: Vec<String> = bb
                    .intervals()
                    .iter()
                    .map(|(lo, hi)| ((lo + hi) / &QuadExt::from_int(2)).to_string())
                    .collect();
                point = json!({ "real": mid, "fiber": fiber.0 });
            }
            (summary.extent.to_string(), summary.fiber_count)
        }
    };

    let mut trace = Vec::new();
    if a.trace {
        let mut r = QuadExt::from_int(1);
        let mut radii = Vec::new();
        while r < full_radius {
            radii.push(r.clone());
            r = &r * &QuadExt::from_int(2);
        }
        radii.push(full_radius.clone());
        for r in radii {
            let sub = truncate_patch(&patch, &center, &r)?;
            if sub.is_empty() {
                continue;
            }
            let sub_region =
                omega_of_patch(&scheme, &family, &sub, search.as_ref()).map_err(cfg)?;
            let entry = match sub_region.extent() {
                None => json!({
                    "radius": r.to_string(),
                    "empty": true,
                    "region": val(&sub_region)?,
                }),
                Some(e) => json!({
                    "radius": r.to_string(),
                    "points": sub.len(),
                    "extent": e.extent.to_string(),
                    "fiber_count": e.fiber_count,
                    "region": val(&sub_region)?,
                }),
            };
            trace.push(entry);
        }
    }

    let mut result = json!({
        "region": val(&region)?,
        "extent": extent_text,
        "fiber_count": fiber_count,
        "resolved": resolved,
        "patch_radius": full_radius.to_string(),
        "point": point,
    });
    if a.trace {
        result["trace"] = Value::Array(trace);
    }
    let mut inputs = BTreeMap::from([
        ("cps".into(), a.cps.clone()),
        ("windows".into(), a.windows.clone()),
        ("patch".into(), a.patch.clone()),
        ("tol".into(), a.tol.clone()),
    ]);
    if !a.view.is_empty() {
        inputs.insert("box".into(), a.view.join(" "));
    }
    if !a.search.is_empty() {
        inputs.insert("search".into(), a.search.join(" "));
    }
    if a.trace {
        inputs.insert("trace".into(), "true".into());
    }
    Ok(Outcome { passed: resolved, violations, inputs, result })
}

fn run_srp(a: &SrpArgs) -> Result<Outcome, Failure> {
    let scheme: CutProjectScheme = load_json(&a.cps)?;
    let family: WindowFamily = load_json(&a.windows)?;
    let x = parse_point(&a.a)?;
    let y = parse_point(&a.b)?;
    let options = OmegaOptions {
        initial_radius: scalar(&a.initial_radius)?,
        max_radius: scalar(&a.max_radius)?,
        tolerance: scalar(&a.tol)?,
    };
    let verdict = srp_test(&scheme, &family, &x, &y, &options).map_err(cfg)?;
    let mut violations = Vec::new();
    let passed = match &verdict {
        SrpVerdict::Unresolved { radius } => {
            violations.push(format!(
                "regions neither separated nor resolved within radius {radius}"
            ));
            false
        }
        _ => true,
    };
    Ok(Outcome {
        passed,
        violations,
        inputs: BTreeMap::from([
            ("cps".into(), a.cps.clone()),
            ("windows".into(), a.windows.clone()),
            ("a".into(), a.a.clone()),
            ("b".into(), a.b.clone()),
            ("tol".into(), a.tol.clone()),
            ("initial_radius".into(), a.initial_radius.clone()),
            ("max_radius".into(), a.max_radius.clone()),
        ]),
        result: val(&verdict)?,
    })
}

fn int_matrix(rows: &[Vec<i64>]) -> Result<IntMatrix, Failure> {
    let Some(first) = rows.first() else {
        return Err(cfg("integer matrix has no rows"));
    };
    if rows.iter().any(|r| r.len() != first.len()) {
        return Err(cfg("integer matrix rows have unequal lengths"));
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(IntMatrix::from_i64_rows(&refs))
}

fn run_morphism_validate(a: &MorphismValidateArgs) -> Result<Outcome, Failure> {
    let mut inputs = BTreeMap::new();
    let spec: MorphismSpec = match (&a.spec, &a.source, &a.target, &a.map) {
        (Some(path), None, None, None) => {
            inputs.insert("spec".into(), path.clone());
            load_json(path)?
        }
        (None, Some(s), Some(t), Some(m)) => {
            inputs.insert("source".into(), s.clone());
            inputs.insert("target".into(), t.clone());
            inputs.insert("map".into(), m.clone());
            MorphismSpec { source: load_json(s)?, target: load_json(t)?, map: load_json(m)? }
        }
        _ => return Err(cfg("give either --spec or all of --source, --target, --map")),
    };
    let c = int_matrix(&spec.map)?;
    let report = validate_morphism(&spec.source, &spec.target, &c).map_err(cfg)?;
    let mut violations = Vec::new();
    if !report.physical_compatible {
        violations.push("physical projections do not commute with the lattice map".into());
    }
    if report.internal_map.is_none() {
        violations.push("no real internal map intertwines the star maps".into());
    }
    if report.fiber_images.is_none() {
        violations.push("no finite-part map is compatible with the lattice map".into());
    }
    let onto_open = json!({
        "onto": report.is_onto_open(),
        "open": report.is_morphism() && report.internal_surjective,
        "image_open_subgroup": report.is_morphism() && report.internal_surjective,
    });
    Ok(Outcome {
        passed: report.is_morphism(),
        violations,
        inputs,
        result: json!({ "report": val(&report)?, "onto_open": onto_open }),
    })
}

fn run_morphism_amalgam(a: &AmalgamArgs) -> Result<Outcome, Failure> {
    let scheme: CutProjectScheme = load_json(&a.cps)?;
    let rows: Vec<Vec<i64>> = load_json(&a.gamma2)?;
    let c = int_matrix(&rows)?;
    let am = amalgamated_cps(&scheme, &c).map_err(cfg)?;
    let mut violations = Vec::new();
    let mut transported = Value::Null;
    let mut passed = true;
    if let Some(window_path) = &a.window {
        let family: WindowFamily = load_json(window_path)?;
        match am.split_retraction(scheme.internal_group()) {
            Some(rho) => {
                let windows: Vec<NamedWindow> = family
                    .iter()
                    .map(|w| NamedWindow {
                        color: w.color.clone(),
                        region: w.region.pull_fibers(&rho),
                    })
                    .collect();
                let family2 = WindowFamily::new(windows).map_err(cfg)?;
                transported = val(&family2)?;
            }
            None => {
                violations.push(
                    "the fiber extension does not split; windows cannot be transported".into(),
                );
                passed = false;
            }
        }
    }
    let result = json!({
        "scheme": val(&am.scheme)?,
        "index": am.index,
        "quotient_orders": am.quotient_orders,
        "amalgam_orders": am.amalgam_orders,
        "split": am.split,
        "embedding_images": val(&am.embedding_images)?,
        "windows": transported,
    });
    let mut inputs = BTreeMap::from([
        ("cps".into(), a.cps.clone()),
        ("gamma2".into(), a.gamma2.clone()),
    ]);
    if let Some(w) = &a.window {
        inputs.insert("window".into(), w.clone());
    }
    if let Some(out) = &a.out {
        io::write_text_atomic(out, &io::to_json_pretty(&result)).map_err(cfg)?;
        inputs.insert("out".into(), out.clone());
    }
    Ok(Outcome { passed, violations, inputs, result })
}

//! Command-line front end.
//!
//! Exit codes: 0 when every check holds, 1 when a check fails, 2 for invalid
//! input, 3 for file I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::centers::{Triangle, Which};
use crate::collineation::{inscribed_perspectivity, transport_check};
use crate::conics::Conic;
use crate::figure::{render, FigureSpec};
use crate::kiepert::{hessian_line, NamedCheck};
use crate::numeric::{QuadExt, Rational, Tolerance};
use crate::oracle::{oracle_conic, oracle_perspectors, oracle_pqr, oracle_secondary, verify_closed_form};
use crate::projective::{Check, Point};
use crate::reconstruct::reconstruct;
use crate::sample::{random_inscribed, random_scalene, trial_rng};
use crate::scene::Scene;
use crate::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Half-width of the square that random reference triangles are drawn from.
const RANDOM_HALF_WIDTH: f64 = 10.0;
/// Minimum relative side-length separation and area of random triangles.
const RANDOM_MARGIN: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(
    name = "kiepert",
    version,
    about = "Construct and verify equilateral triangles inscribed in Kiepert hyperbolas"
)]
struct Cli {
    /// Relative tolerance for floating-point verdicts (default: $KIEPERT_TOL or 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a family of statements and print a JSON report.
    Verify {
        #[command(subcommand)]
        subject: Subject,
    },
    /// Build a scene and write it as JSON.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Recover reference triangles from a scene's conic, one Fermat point and one vertex.
    Reconstruct(ReconstructArgs),
    /// Render a scene as SVG.
    Figure(FigureArgs),
    /// Print the exact closed-form configuration for a parameter value.
    Oracle(OracleArgs),
}

#[derive(Subcommand, Debug)]
enum Subject {
    /// Equilateral, perspectivity and Kiepert checks for a reference triangle.
    #[command(alias = "theorem1")]
    Yiu(TriangleSource),
    /// Exact checks of the closed-form configuration over Q(√3).
    #[command(alias = "theorem2")]
    ClosedForm(ClosedFormArgs),
    /// Perspector axes coincide with Hessian lines.
    #[command(alias = "lemma28")]
    HessianAxis(TriangleSource),
    /// Triple perspectivity of inscribed triangles from a point of the Hessian line.
    #[command(alias = "theorem3")]
    Inscribed(InscribedArgs),
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// The Kiepert scene of a reference triangle with both equilateral triangles.
    Yiu {
        #[command(flatten)]
        triangle: TriangleArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
struct TriangleArg {
    /// Vertices as x1,y1,x2,y2,x3,y3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    triangle: Vec<f64>,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrialArgs {
    /// Number of random trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Seed for random trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct TriangleSource {
    /// Vertices as x1,y1,x2,y2,x3,y3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "trials")]
    triangle: Option<Vec<f64>>,
    #[command(flatten)]
    trials: TrialArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct ClosedFormArgs {
    /// Rational parameter of the equilateral triangle, e.g. 1, -2/3, 0.25.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Height of the perspector on the axis.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    y0: String,
    /// Height for the second secondary triangle (default: y0 + 2).
    #[arg(long, allow_hyphen_values = true)]
    y0_second: Option<String>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct InscribedArgs {
    /// Conic coefficients A,B,C,D,E,F of Ax² + Bxy + Cy² + Dx + Ey + F.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires_all = ["triangle", "point"], conflicts_with = "trials")]
    conic: Option<Vec<f64>>,
    /// Inscribed triangle as x1,y1,x2,y2,x3,y3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "conic")]
    triangle: Option<Vec<f64>>,
    /// Point on the Hessian line as x,y.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "conic")]
    point: Option<Vec<f64>>,
    #[command(flatten)]
    trials: TrialArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FermatRole {
    First,
    Second,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    /// Scene JSON written by `construct yiu`.
    #[arg(long)]
    scene: PathBuf,
    /// Known vertex as x,y.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    vertex: Vec<f64>,
    /// Which of the scene's Fermat points is given.
    #[arg(long, value_enum)]
    fermat: FermatRole,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// Scene JSON written by `construct yiu`.
    #[arg(long)]
    scene: PathBuf,
    /// Output SVG file.
    #[arg(long)]
    out: PathBuf,
    /// Output width in pixels.
    #[arg(long, default_value_t = 800.0)]
    width: f64,
    /// Omit point labels.
    #[arg(long)]
    no_labels: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Also print the secondary triangle and perspectors for this height.
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<String>,
    #[command(flatten)]
    out: OutArg,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

/// Whether an error means the input violated a precondition (as opposed to
/// a statement failing to verify).
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotScalene
            | Error::DegenerateTriangle
            | Error::DegenerateConic
            | Error::NotCentral
            | Error::NotAffine
            | Error::PointNotOnConic(_)
            | Error::VertexNotOnConic(_)
            | Error::NotOnHessianLine(_)
            | Error::TangentChord
            | Error::InvalidInput(_)
            | Error::IdenticalElements
            | Error::CoincidentFermatPoints
            | Error::DegenerateParameter(_)
    )
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if is_input_error(&e) { EXIT_INPUT } else { EXIT_FAIL };
        Failure { code, message: e.to_string() }
    }
}

type CliResult = std::result::Result<u8, Failure>;

fn verdict(ok: bool) -> u8 {
    if ok {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> std::result::Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

fn triangle_from(v: &[f64]) -> std::result::Result<Triangle<f64>, Failure> {
    if v.len() != 6 || v.iter().any(|x| !x.is_finite()) {
        return Err(Failure::input("a triangle needs six finite coordinates x1,y1,x2,y2,x3,y3"));
    }
    Ok(Triangle::from_xy([(v[0], v[1]), (v[2], v[3]), (v[4], v[5])])?)
}

fn point_from(v: &[f64]) -> std::result::Result<Point<f64>, Failure> {
    if v.len() != 2 || v.iter().any(|x| !x.is_finite()) {
        return Err(Failure::input("a point needs two finite coordinates x,y"));
    }
    Ok(Point::affine(v[0], v[1]))
}

fn rational(s: &str) -> std::result::Result<Rational, Failure> {
    s.parse().map_err(|e: crate::numeric::NumericError| Failure::input(e.to_string()))
}

fn load_scene(path: &Path) -> std::result::Result<Scene<f64>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: invalid scene: {e}", path.display())))
}

/// Loads a scene and rejects it unless its stored elements match a rebuild.
fn load_valid_scene(path: &Path, tol: &Tolerance) -> std::result::Result<Scene<f64>, Failure> {
    let scene = load_scene(path)?;
    let (_, agreement) = scene.revalidate(tol)?;
    if let Some(bad) = agreement.iter().find(|c| !c.holds) {
        return Err(Failure::input(format!("{}: scene is inconsistent ({})", path.display(), bad.name)));
    }
    Ok(scene)
}

#[derive(Serialize)]
struct Trial {
    index: usize,
    input: Value,
    all_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    summary: Value,
    checks: Vec<NamedCheck<f64>>,
}

#[derive(Serialize)]
struct Report {
    subject: &'static str,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    all_hold: bool,
    trials: Vec<Trial>,
}

type TrialBody = std::result::Result<(Value, Vec<NamedCheck<f64>>), Error>;

fn trial(index: usize, input: Value, body: TrialBody) -> Trial {
    match body {
        Ok((summary, checks)) => {
            Trial { index, input, all_hold: checks.iter().all(|c| c.holds), error: None, summary, checks }
        }
        Err(e) => {
            Trial { index, input, all_hold: false, error: Some(e.to_string()), summary: Value::Null, checks: vec![] }
        }
    }
}

fn max_abs<'a>(checks: impl Iterator<Item = &'a NamedCheck<f64>>) -> f64 {
    checks.map(|c| c.residual.abs()).fold(0.0, f64::max)
}

fn yiu_body(t: &Triangle<f64>, tol: &Tolerance) -> TrialBody {
    let scene = Scene::build(t, tol)?;
    let spread = max_abs(scene.certificates.iter().filter(|c| c.name.ends_with("equilateral")));
    let summary = json!({
        "max_equilateral_spread": spread,
        "max_residual": max_abs(scene.certificates.iter()),
    });
    Ok((summary, scene.certificates))
}

fn hessian_body(t: &Triangle<f64>, tol: &Tolerance) -> TrialBody {
    let scene = Scene::build(t, tol)?;
    let k = &scene.conic;
    let mut checks = Vec::new();
    for (name, axis, tri) in
        [("pqr", &scene.axes.pqr, &scene.yiu.pqr), ("pqr_prime", &scene.axes.pqr_prime, &scene.yiu.pqr_prime)]
    {
        let own = hessian_line(k, tri, tol)?;
        let reference = hessian_line(k, &scene.triangle, tol)?;
        checks.push(NamedCheck::new(format!("{name} hessian meets collinear"), own.check));
        checks
            .push(NamedCheck::new(format!("{name} perspector axis is its hessian line"), axis.same_as(&own.line, tol)));
        checks.push(NamedCheck::new(
            format!("{name} perspector axis is the reference hessian line"),
            axis.same_as(&reference.line, tol),
        ));
    }
    let summary = json!({ "max_residual": max_abs(checks.iter()) });
    Ok((summary, checks))
}

fn inscribed_body(k: &Conic<f64>, t: &Triangle<f64>, s: &Point<f64>, tol: &Tolerance) -> TrialBody {
    let direct = inscribed_perspectivity(k, t, s, tol)?;
    let mut checks = vec![NamedCheck::new("hessian meets collinear", direct.hessian.check.clone())];
    for c in &direct.perspectivity.certs {
        checks.push(NamedCheck::new(format!("perspective at shift {}", c.pairing.shift), c.check.clone()));
    }
    for (i, c) in direct.on_hessian.iter().enumerate() {
        checks.push(NamedCheck::new(format!("perspector {i} on hessian line"), c.clone()));
    }
    let transport = transport_check(k, t, s, &direct, tol)?;
    checks.push(NamedCheck::new("collineation pullback", transport.collineation.pullback.clone()));
    checks.push(NamedCheck::new("hessian line maps to infinity", transport.hessian_to_infinity.clone()));
    checks
        .push(NamedCheck::new("model perspectors agree", Check { holds: transport.perspectors_agree, residual: 0.0 }));
    let summary = json!({
        "second": direct.second,
        "perspectors": direct.perspectivity.perspectors(),
        "max_residual": max_abs(checks.iter()),
    });
    Ok((summary, checks))
}

fn run_trials(n: usize, f: impl Fn(usize) -> Trial + Sync + Send) -> Vec<Trial> {
    (0..n).into_par_iter().map(f).collect()
}

fn triangle_report(
    subject: &'static str,
    src: &TriangleSource,
    tol: &Tolerance,
    body: fn(&Triangle<f64>, &Tolerance) -> TrialBody,
) -> CliResult {
    let (trials, seed) = match (&src.triangle, src.trials.trials) {
        (Some(v), _) => {
            let t = triangle_from(v)?;
            let result = body(&t, tol);
            if let Err(e) = &result {
                if is_input_error(e) {
                    return Err(e.clone().into());
                }
            }
            (vec![trial(0, json!(t), result)], None)
        }
        (None, Some(n)) => {
            let seed = src.trials.seed;
            let trials = run_trials(n, |i| {
                let t = random_scalene(&mut trial_rng(seed, i as u64), RANDOM_HALF_WIDTH, RANDOM_MARGIN);
                trial(i, json!(t), body(&t, tol))
            });
            (trials, Some(seed))
        }
        (None, None) => return Err(Failure::input("give --triangle or --trials")),
    };
    let all_hold = trials.iter().all(|t| t.all_hold);
    emit_json(&src.out.out, &Report { subject, tolerance: tol.eps, seed, all_hold, trials })?;
    Ok(verdict(all_hold))
}

fn inscribed_report(args: &InscribedArgs, tol: &Tolerance) -> CliResult {
    let (trials, seed) = match (&args.conic, args.trials.trials) {
        (Some(c), _) => {
            let coeffs: [f64; 6] =
                c.as_slice().try_into().map_err(|_| Failure::input("a conic needs six coefficients"))?;
            let k = Conic::new(coeffs);
            let t = triangle_from(args.triangle.as_deref().unwrap_or_default())?;
            let s = point_from(args.point.as_deref().unwrap_or_default())?;
            let result = inscribed_body(&k, &t, &s, tol);
            if let Err(e) = &result {
                if is_input_error(e) {
                    return Err(e.clone().into());
                }
            }
            (vec![trial(0, json!({ "conic": k, "triangle": t, "point": s }), result)], None)
        }
        (None, Some(n)) => {
            let seed = args.trials.seed;
            let trials = run_trials(n, |i| {
                let inst = random_inscribed(&mut trial_rng(seed, i as u64), tol);
                let input = json!({ "conic": inst.conic, "triangle": inst.triangle, "point": inst.s });
                trial(i, input, inscribed_body(&inst.conic, &inst.triangle, &inst.s, tol))
            });
            (trials, Some(seed))
        }
        (None, None) => return Err(Failure::input("give --conic, --triangle and --point, or --trials")),
    };
    let all_hold = trials.iter().all(|t| t.all_hold);
    emit_json(&args.out.out, &Report { subject: "inscribed", tolerance: tol.eps, seed, all_hold, trials })?;
    Ok(verdict(all_hold))
}

fn closed_form(args: &ClosedFormArgs) -> CliResult {
    let t = rational(&args.t)?;
    let y0 = rational(&args.y0)?;
    let y0b = match &args.y0_second {
        Some(s) => rational(s)?,
        None => y0.clone() + Rational::from_integer(2),
    };
    let report = verify_closed_form(&t, &QuadExt::from(y0), &QuadExt::from(y0b))?;
    let all_hold = report.all_hold();
    emit_json(&args.out.out, &json!({ "subject": "closed-form", "all_hold": all_hold, "report": report }))?;
    Ok(verdict(all_hold))
}

fn oracle(args: &OracleArgs) -> CliResult {
    let t = rational(&args.t)?;
    let mut v = json!({
        "t": t,
        "pqr": oracle_pqr(&t)?,
        "conic": oracle_conic(&t)?,
    });
    if let Some(y) = &args.y0 {
        let y0 = QuadExt::from(rational(y)?);
        v["y0"] = json!(y0);
        v["secondary"] = json!(oracle_secondary(&t, &y0)?);
        v["perspectors"] = json!(oracle_perspectors(&t, &y0)?);
    }
    emit_json(&args.out.out, &v)?;
    Ok(EXIT_PASS)
}

fn construct(triangle: &TriangleArg, out: &OutArg, tol: &Tolerance) -> CliResult {
    let t = triangle_from(&triangle.triangle)?;
    let scene = Scene::build(&t, tol)?;
    emit_json(&out.out, &scene)?;
    Ok(verdict(scene.all_hold()))
}

fn reconstruct_cmd(args: &ReconstructArgs, tol: &Tolerance) -> CliResult {
    let scene = load_valid_scene(&args.scene, tol)?;
    let a = point_from(&args.vertex)?;
    let which = match args.fermat {
        FermatRole::First => Which::First,
        FermatRole::Second => Which::Second,
    };
    let result = reconstruct(&scene.conic, scene.fermat.get(which), which, &a, tol)?;
    let contains_scene = result.candidates.iter().any(|c| c.same_vertices(&scene.triangle, tol));
    emit_json(
        &args.out.out,
        &json!({
            "given": { "vertex": a, "fermat": which, "point": scene.fermat.get(which) },
            "candidate_count": result.candidates.len(),
            "valid_attempts": result.valid_attempts(),
            "contains_scene_triangle": contains_scene,
            "result": result,
        }),
    )?;
    Ok(EXIT_PASS)
}

fn figure(args: &FigureArgs, tol: &Tolerance) -> CliResult {
    let scene = load_valid_scene(&args.scene, tol)?;
    let mut spec = FigureSpec::for_scene(&scene)?;
    if !(args.width.is_finite() && args.width > 0.0) {
        return Err(Failure::input("--width must be positive"));
    }
    spec.width_px = args.width;
    spec.labels = !args.no_labels;
    let svg = render(&scene, &spec, tol)?;
    emit(&Some(args.out.clone()), &svg)?;
    Ok(EXIT_PASS)
}

fn tolerance(flag: Option<f64>) -> std::result::Result<Tolerance, Failure> {
    match flag {
        Some(eps) if eps.is_finite() && eps > 0.0 => Ok(Tolerance::new(eps)),
        Some(_) => Err(Failure::input("--tol must be a positive number")),
        None => Ok(Tolerance::from_env()),
    }
}

fn dispatch(cli: Cli) -> CliResult {
    let tol = tolerance(cli.tol)?;
    match &cli.command {
        Command::Verify { subject } => match subject {
            Subject::Yiu(src) => triangle_report("yiu", src, &tol, yiu_body),
            Subject::ClosedForm(args) => closed_form(args),
            Subject::HessianAxis(src) => triangle_report("hessian-axis", src, &tol, hessian_body),
            Subject::Inscribed(args) => inscribed_report(args, &tol),
        },
        Command::Construct { what: Construct::Yiu { triangle, out } } => construct(triangle, out, &tol),
        Command::Reconstruct(args) => reconstruct_cmd(args, &tol),
        Command::Figure(args) => figure(args, &tol),
        Command::Oracle(args) => oracle(args),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

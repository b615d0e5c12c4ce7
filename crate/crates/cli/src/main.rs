use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wpvol::chambers::{self, Validity};
use wpvol::charvar::{self, Strategy, TraceTriple};
use wpvol::exactpoly::rational::parse_rational;
use wpvol::hypgeom;
use wpvol::identities::{self, IdentityReport};
use wpvol::labels::parse_labels;
use wpvol::volumes::{CacheEvent, ConfigKey, DEFAULT_MAX_DIM};
use wpvol::{Angle, BoundaryLabel, Error, VolumeTable};

mod output;

use output::{Format, Printer};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

/// Cone angles at which `verify cv` checks the quadrature by default.
const DEFAULT_CV_THETAS: [&str; 8] = ["0", "1", "1/2pi", "pi", "2", "3/2pi", "5", "6.2"];

#[derive(Parser, Debug)]
#[command(
    name = "wpvol",
    version,
    about = "Weil–Petersson volumes of moduli spaces of hyperbolic surfaces"
)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory for the cached polynomials (one vol_g<g>_n<n>.json per key).
    #[arg(long, global = true, env = "WPVOL_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Largest 3g - 3 + n computed.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Significant digits for floating-point output.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print V_{g,n}.
    Poly(Topology),
    /// Evaluate V_{g,n} at boundary data and classify the result.
    Eval(EvalArgs),
    /// Classify boundary data without evaluating.
    Chamber(ChamberArgs),
    /// Run identity or quadrature checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Hyperbolic trigonometry.
    #[command(subcommand)]
    Geom(GeomCommand),
    /// Volume of M_{1,1}(iθ) by quadrature over the fundamental domain.
    CvVolume(CvVolumeArgs),
    /// Reduce a trace triple into the fundamental domain.
    CvReduce(CvReduceArgs),
    /// Sample the main chamber and evaluate V_{g,n}(iθ).
    Scan(ScanArgs),
    /// Manage the on-disk polynomial cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Args, Debug)]
struct Topology {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    g: u32,
    /// Defaults to the number of labels.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated: `cusp`, `<length>`, `<angle>i`, `<p>/<q>pi i`.
    #[arg(long, allow_hyphen_values = true)]
    labels: String,
}

#[derive(Args, Debug)]
struct ChamberArgs {
    #[arg(long)]
    g: u32,
    #[arg(long, allow_hyphen_values = true)]
    labels: String,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Both relations at L = 2πi for every (g, n+1) with 3g - 2 + n <= max-dim.
    Limit,
    /// V(0, 2πi) = 0 and the θ-derivative at 2π, for the same keys.
    Corollary,
    /// The two rewritings of V_{0,5}(iθ).
    V05,
    /// Quadrature against (4π² - θ²)/48.
    Cv(CvCheckArgs),
    /// Everything above.
    All(CvCheckArgs),
}

#[derive(Args, Debug)]
struct CvCheckArgs {
    /// Cone angle; repeat for several. Defaults to a fixed list of eight.
    #[arg(long)]
    theta: Vec<String>,
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum GeomCommand {
    /// Distance between two boundary geodesics across a right-angled hexagon
    Hexagon {
        #[arg(long)]
        l1: f64,
        #[arg(long)]
        l2: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
    },
    /// Distance from a cone point (θ₂ < π) to a boundary geodesic
    Pentagon {
        #[arg(long)]
        l1: f64,
        #[arg(long)]
        theta2: String,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
    },
    /// Distance between two cone points with θ₁ + θ₂ < 2π
    Quad {
        #[arg(long)]
        theta1: String,
        #[arg(long)]
        theta2: String,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
    },
    /// sinh δ for a pentagon with one obtuse angle α, or no solution
    Obtuse {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        lp: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
    },
    /// Length x of the geodesic left after a cone point merges into a boundary of length L
    Crown {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        l: f64,
    },
    /// Length w from gluing at a cone point (φ ∈ (0, π])
    Glue {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        phi: String,
    },
    /// Lower bound on the distance between two boundary labels
    Separation {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Args, Debug)]
struct CvVolumeArgs {
    /// `<float>` or `<p>/<q>pi`.
    #[arg(long)]
    theta: String,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrategyArg {
    Greedy,
    First,
}

#[derive(Args, Debug)]
struct CvReduceArgs {
    /// `x,y,z`; each entry a decimal or p/q, converted exactly.
    #[arg(long)]
    point: String,
    #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
    strategy: StrategyArg,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one CSV row per sample here (`-` for standard output).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CacheCommand {
    /// Compute every volume up to --max-dim and write it to the cache.
    Fill,
    /// Remove the cache files.
    Clear,
}

/// A finished command: what to print and whether its checks passed.
struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            pass: true,
        }
    }
}

struct Context {
    printer: Printer,
    cache_dir: Option<PathBuf>,
    max_dim: usize,
}

impl Context {
    fn table(&self) -> VolumeTable {
        match &self.cache_dir {
            Some(dir) => VolumeTable::with_cache_dir(self.max_dim, dir),
            None => VolumeTable::new(self.max_dim),
        }
    }
}

fn parse_angle(text: &str) -> wpvol::Result<f64> {
    Ok(text.parse::<Angle>()?.radians())
}

/// Bad invocation detected after argument parsing.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<UsageError>() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::NonConvergence(_)) | Some(Error::NoSignChange { .. }) => EXIT_NONCONVERGENCE,
        Some(Error::Consistency(_)) | Some(Error::Cache(_)) => EXIT_FAIL,
        Some(_) => EXIT_USAGE,
        None => EXIT_FAIL,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let ctx = Context {
        printer: Printer::new(cli.format, cli.precision),
        cache_dir: cli.cache_dir.clone(),
        max_dim: cli.max_dim,
    };
    match run(&ctx, cli.command) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let written = match ctx.printer.format {
                Format::Text => writeln!(stdout, "{}", outcome.text.trim_end()),
                Format::Json => writeln!(stdout, "{}", output::render_json(outcome.json)),
            };
            if written.is_err() {
                return ExitCode::from(EXIT_FAIL);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(ctx: &Context, command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Poly(t) => cmd_poly(ctx, t),
        Command::Eval(a) => cmd_eval(ctx, a),
        Command::Chamber(a) => cmd_chamber(ctx, a),
        Command::Verify(v) => cmd_verify(ctx, v),
        Command::Geom(g) => cmd_geom(ctx, g),
        Command::CvVolume(a) => cmd_cv_volume(ctx, a),
        Command::CvReduce(a) => cmd_cv_reduce(a),
        Command::Scan(a) => cmd_scan(ctx, a),
        Command::Cache(c) => cmd_cache(ctx, c),
    }
}

fn cmd_poly(ctx: &Context, t: Topology) -> anyhow::Result<Outcome> {
    let mut table = ctx.table();
    let v = table.volume(t.g, t.n)?;
    let text = v.render_text();
    let json = json!({
        "command": "poly",
        "g": t.g,
        "n": t.n,
        "text": text,
        "polynomial": v.to_json_value(),
    });
    Ok(Outcome::ok(text, json))
}

fn validity_warning(report: &chambers::ChamberReport) -> Option<&'static str> {
    if !report.nonempty {
        Some("the moduli space is empty for these cone angles; the value is not a volume")
    } else {
        match report.validity {
            Validity::Unknown => Some(
                "outside the region where evaluation is known to give the volume; the value may not be a volume",
            ),
            Validity::LimitZero => Some("a cone angle is at 2π: the volume tends to zero here"),
            _ => None,
        }
    }
}

fn cmd_eval(ctx: &Context, a: EvalArgs) -> anyhow::Result<Outcome> {
    let labels = parse_labels(&a.labels)?;
    let n = a.n.unwrap_or(labels.len());
    if n != labels.len() {
        return Err(Error::LabelCount {
            expected: n,
            got: labels.len(),
        }
        .into());
    }
    let report = chambers::classify_validity(a.g, &labels)?;
    let mut table = ctx.table();
    let v = table.volume(a.g, n)?;
    let value = v.numeric_eval(&labels)?;
    let exact = v.exact_eval(&labels)?;
    let warning = validity_warning(&report);
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    let p = &ctx.printer;
    let mut text = format!("value = {}\n", p.num(value));
    if let Some(e) = &exact {
        text.push_str(&format!("exact = {e}\n"));
    }
    text.push_str(&format!("validity = {:?}\n", report.validity));
    text.push_str(&format!("nonempty = {}\n", report.nonempty));
    let json = json!({
        "command": "eval",
        "g": a.g,
        "n": n,
        "labels": labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "value": p.json_num(value),
        "exact": exact.map(|e| e.to_string()),
        "chamber": p.round_floats(serde_json::to_value(&report)?),
        "warning": warning,
    });
    Ok(Outcome::ok(text, json))
}

fn chamber_text(p: &Printer, r: &chambers::ChamberReport) -> String {
    let mut text = format!(
        "validity = {:?}\nnonempty = {}\nmain_chamber = {}\nsmall_angles = {}\non_wall = {}\n",
        r.validity, r.nonempty, r.main_chamber, r.small_angles, r.on_wall
    );
    if let Some(w) = &r.hassett_weights {
        let ws: Vec<String> = w.iter().map(|x| p.num(*x)).collect();
        text.push_str(&format!("hassett_weights = [{}]\n", ws.join(", ")));
    }
    for m in &r.mergeable_subsets {
        text.push_str(&format!(
            "mergeable {:?}: theta = {}\n",
            m.indices,
            p.num(m.theta)
        ));
    }
    if r.mergeable_truncated {
        text.push_str("mergeable subsets not enumerated (too many cone points)\n");
    }
    text
}

fn cmd_chamber(ctx: &Context, a: ChamberArgs) -> anyhow::Result<Outcome> {
    let labels = parse_labels(&a.labels)?;
    let report = chambers::classify_validity(a.g, &labels)?;
    let mut json = ctx.printer.round_floats(serde_json::to_value(&report)?);
    json["command"] = json!("chamber");
    Ok(Outcome::ok(chamber_text(&ctx.printer, &report), json))
}

fn identity_outcome(name: &str, reports: Vec<IdentityReport>) -> Outcome {
    let summary = identities::summarize(&reports);
    let mut text = String::new();
    for r in &reports {
        let key = r.key.map(|k| k.to_string()).unwrap_or_default();
        let verdict = if r.pass() { "PASS" } else { "FAIL" };
        text.push_str(&format!(
            "{verdict} {} {key} discrepancy_terms={}\n",
            r.name,
            r.discrepancy_terms()
        ));
    }
    text.push_str(&format!(
        "{name}: {} checks, {} failures\n",
        summary.checks, summary.failures
    ));
    let json = json!({
        "command": format!("verify {name}"),
        "checks": summary.checks,
        "failures": summary.failures,
        "pass": summary.failures == 0,
        "reports": reports.iter().map(IdentityReport::to_json).collect::<Vec<_>>(),
    });
    Outcome {
        text,
        json,
        pass: summary.failures == 0,
    }
}

fn cv_checks(p: &Printer, args: &CvCheckArgs) -> anyhow::Result<Outcome> {
    let thetas: Vec<String> = if args.theta.is_empty() {
        DEFAULT_CV_THETAS.iter().map(|s| s.to_string()).collect()
    } else {
        args.theta.clone()
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all_pass = true;
    for t in &thetas {
        let theta = parse_angle(t)?;
        let v = charvar::volume_integral(theta, args.tol.max(charvar::MIN_REL_TOL))?;
        let abs_err = (v.final_volume - v.closed_form_final).abs();
        // relative error loses meaning as the volume goes to zero at θ = 2π
        let pass = v.rel_err < args.tol || (v.closed_form_final < 1e-2 && abs_err < 1e-6);
        all_pass &= pass;
        text.push_str(&format!(
            "{} theta={} final={} closed_form={} rel_err={}\n",
            if pass { "PASS" } else { "FAIL" },
            t,
            p.num(v.final_volume),
            p.num(v.closed_form_final),
            p.num(v.rel_err),
        ));
        let mut row = p.round_floats(serde_json::to_value(&v)?);
        row["pass"] = json!(pass);
        rows.push(row);
    }
    let json = json!({ "command": "verify cv", "pass": all_pass, "results": rows });
    Ok(Outcome {
        text,
        json,
        pass: all_pass,
    })
}

fn cmd_verify(ctx: &Context, v: VerifyCommand) -> anyhow::Result<Outcome> {
    let mut table = ctx.table();
    match v {
        VerifyCommand::Limit => Ok(identity_outcome(
            "limit",
            identities::run_limit_suite(&mut table, ctx.max_dim)?,
        )),
        VerifyCommand::Corollary => Ok(identity_outcome(
            "corollary",
            identities::run_corollary_suite(&mut table, ctx.max_dim)?,
        )),
        VerifyCommand::V05 => Ok(identity_outcome(
            "v05",
            vec![identities::check_v05_factorizations(&mut table)?],
        )),
        VerifyCommand::Cv(args) => cv_checks(&ctx.printer, &args),
        VerifyCommand::All(args) => {
            let parts = [
                identity_outcome(
                    "limit",
                    identities::run_limit_suite(&mut table, ctx.max_dim)?,
                ),
                identity_outcome(
                    "corollary",
                    identities::run_corollary_suite(&mut table, ctx.max_dim)?,
                ),
                identity_outcome(
                    "v05",
                    vec![identities::check_v05_factorizations(&mut table)?],
                ),
                cv_checks(&ctx.printer, &args)?,
            ];
            let pass = parts.iter().all(|o| o.pass);
            let text = parts.iter().map(|o| o.text.as_str()).collect::<String>();
            let json = json!({
                "command": "verify all",
                "pass": pass,
                "suites": parts.into_iter().map(|o| o.json).collect::<Vec<_>>(),
            });
            Ok(Outcome { text, json, pass })
        }
    }
}

fn cmd_geom(ctx: &Context, g: GeomCommand) -> anyhow::Result<Outcome> {
    let p = &ctx.printer;
    let (name, value): (&str, Value) = match g {
        GeomCommand::Hexagon { l1, l2, c } => {
            ("hexagon", p.json_num(hypgeom::hexagon_delta(l1, l2, c)?))
        }
        GeomCommand::Pentagon { l1, theta2, c } => (
            "pentagon",
            p.json_num(hypgeom::pentagon_delta(l1, parse_angle(&theta2)?, c)?),
        ),
        GeomCommand::Quad { theta1, theta2, c } => (
            "quad",
            p.json_num(hypgeom::quad_delta(
                parse_angle(&theta1)?,
                parse_angle(&theta2)?,
                c,
            )?),
        ),
        GeomCommand::Obtuse { alpha, lp, c } => (
            "obtuse",
            match hypgeom::obtuse_pentagon_sinh_delta(parse_angle(&alpha)?, lp, c)? {
                hypgeom::ObtusePentagon::Delta(d) => p.json_num(d),
                hypgeom::ObtusePentagon::NoSolution => json!("no solution"),
            },
        ),
        GeomCommand::Crown { phi, l } => {
            let s = hypgeom::crown_length(parse_angle(&phi)?, l)?;
            let text = format!(
                "x = {}\nresidual = {}\nbracket = ({}, {}]",
                p.num(s.x),
                p.num(s.residual),
                s.bracket.0,
                s.bracket.1
            );
            let json = json!({
                "command": "geom crown",
                "x": p.json_num(s.x),
                "residual": s.residual,
                "bracket": [s.bracket.0, s.bracket.1],
            });
            return Ok(Outcome::ok(text, json));
        }
        GeomCommand::Glue { x, phi } => (
            "glue",
            p.json_num(hypgeom::cone_glue_w(x, parse_angle(&phi)?)?),
        ),
        GeomCommand::Separation { a, b } => {
            let a: BoundaryLabel = a.parse()?;
            let b: BoundaryLabel = b.parse()?;
            match hypgeom::separation_bound(&a, &b)? {
                hypgeom::Separation::Bound(e) => ("separation", p.json_num(e)),
                hypgeom::Separation::NoBound(regime) => {
                    let text = format!("no bound ({regime:?})");
                    let json = json!({
                        "command": "geom separation",
                        "value": Value::Null,
                        "regime": regime,
                    });
                    return Ok(Outcome::ok(text, json));
                }
            }
        }
    };
    let text = match &value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    Ok(Outcome::ok(
        text,
        json!({ "command": format!("geom {name}"), "value": value }),
    ))
}

fn cmd_cv_volume(ctx: &Context, a: CvVolumeArgs) -> anyhow::Result<Outcome> {
    let theta = parse_angle(&a.theta)?;
    let v = charvar::volume_integral(theta, a.tol)?;
    let p = &ctx.printer;
    let text = format!(
        "theta = {}\nkappa = {}\nraw = {}\nfinal = {}\nclosed_form_raw = {}\nclosed_form_final = {}\nrel_err = {}",
        p.num(v.theta),
        p.num(v.kappa),
        p.num(v.raw),
        p.num(v.final_volume),
        p.num(v.closed_form_raw),
        p.num(v.closed_form_final),
        p.num(v.rel_err),
    );
    let mut json = p.round_floats(serde_json::to_value(&v)?);
    json["command"] = json!("cv-volume");
    Ok(Outcome::ok(text, json))
}

fn cmd_cv_reduce(a: CvReduceArgs) -> anyhow::Result<Outcome> {
    let coords: Vec<_> = a
        .point
        .split(',')
        .map(|c| parse_rational(c.trim()))
        .collect::<wpvol::Result<_>>()?;
    if coords.len() != 3 {
        return Err(Error::Parse(format!("expected x,y,z, got {:?}", a.point)).into());
    }
    let point = TraceTriple::new(coords[0].clone(), coords[1].clone(), coords[2].clone());
    let strategy = match a.strategy {
        StrategyArg::Greedy => Strategy::Greedy,
        StrategyArg::First => Strategy::FirstApplicable,
    };
    let reduced = charvar::reduce_to_domain(&point, strategy)?;
    let r = &reduced.point;
    let word: Vec<String> = reduced.word.iter().map(|i| format!("phi{i}")).collect();
    let approx = r.to_f64();
    let text = format!(
        "point = ({}, {}, {})\nword = [{}]\nkappa = {}",
        r.x,
        r.y,
        r.z,
        word.join(", "),
        charvar::kappa(r)
    );
    let json = json!({
        "command": "cv-reduce",
        "point": [r.x.to_string(), r.y.to_string(), r.z.to_string()],
        "point_f64": [approx.x, approx.y, approx.z],
        "word": reduced.word,
        "kappa": charvar::kappa(r).to_string(),
    });
    Ok(Outcome::ok(text, json))
}

fn cmd_scan(ctx: &Context, a: ScanArgs) -> anyhow::Result<Outcome> {
    let mut table = ctx.table();
    let report = chambers::positivity_scan(&mut table, a.g, a.n, a.samples, a.seed)?;
    if let Some(path) = &a.csv {
        if path.as_os_str() == "-" {
            report.write_csv(std::io::stdout().lock())?;
        } else {
            report.write_csv(std::io::BufWriter::new(fs::File::create(path)?))?;
        }
    }
    let p = &ctx.printer;
    let pass = report.violations == 0;
    let text = format!(
        "{} samples of V_{{{},{}}}: min = {}, violations = {}",
        report.samples.len(),
        a.g,
        a.n,
        p.num(report.min_value),
        report.violations
    );
    let json = json!({
        "command": "scan",
        "g": a.g,
        "n": a.n,
        "seed": a.seed,
        "samples": report.samples.len(),
        "min_value": p.json_num(report.min_value),
        "argmin": report.argmin.iter().map(|x| p.json_num(*x)).collect::<Vec<_>>(),
        "violations": report.violations,
        "pass": pass,
    });
    Ok(Outcome { text, json, pass })
}

fn cmd_cache(ctx: &Context, c: CacheCommand) -> anyhow::Result<Outcome> {
    let Some(dir) = ctx.cache_dir.clone() else {
        return Err(UsageError(
            "no cache directory; pass --cache-dir or set WPVOL_CACHE_DIR".into(),
        )
        .into());
    };
    match c {
        CacheCommand::Fill => {
            let mut table = VolumeTable::with_cache_dir(ctx.max_dim, &dir);
            table.fill()?;
            let (mut loaded, mut written, mut corrupt) = (0, 0, 0);
            for e in table.events() {
                match e {
                    CacheEvent::Loaded(_) => loaded += 1,
                    CacheEvent::Written(_) => written += 1,
                    CacheEvent::Corrupt { .. } => corrupt += 1,
                }
            }
            let text = format!(
                "{} volumes up to dimension {} in {}: {loaded} loaded, {written} written, {corrupt} corrupt entries replaced",
                table.len(),
                ctx.max_dim,
                dir.display()
            );
            let json = json!({
                "command": "cache fill",
                "entries": table.keys().collect::<Vec<ConfigKey>>(),
                "loaded": loaded,
                "written": written,
                "corrupt": corrupt,
            });
            Ok(Outcome::ok(text, json))
        }
        CacheCommand::Clear => {
            let mut removed = 0;
            if dir.exists() {
                for entry in fs::read_dir(&dir)? {
                    let path = entry?.path();
                    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
                    if name.starts_with("vol_g") && name.ends_with(".json") {
                        fs::remove_file(&path)?;
                        removed += 1;
                    }
                }
            }
            Ok(Outcome::ok(
                format!("removed {removed} cache files from {}", dir.display()),
                json!({ "command": "cache clear", "removed": removed }),
            ))
        }
    }
}

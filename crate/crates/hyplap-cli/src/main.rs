//! `hyplap`: kernels, Dirichlet solves, verification suites, and bound
//! scans for hyperbolic potential theory on the ball and half-space.
//!
//! Exit codes: 0 success / all checks passed; 1 a verification check
//! failed; 2 usage or malformed input; 3 a source density failed its
//! growth-condition check; 4 hard numerical error.

mod io;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyplap::catalog;
use hyplap::geometry::{BallPoint, SpherePoint, Vector};
use hyplap::halfspace::{self, HalfspaceKernel};
use hyplap::kernels::{self, KernelParams};
use hyplap::quadrature::{ball_tau_rule, sphere_rule, QuadratureRule};
use hyplap::regularity::{self, check_condition, ConditionParams, ConditionTag};
use hyplap::solver::{
    self, hyperbolic_laplacian_fd, solve_dirichlet, BoundaryKernel, SolverRules, Source,
};
use hyplap::verify;
use io::{emit, CsvBuilder, CsvField, RunReport};
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONDITION: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hyplap",
    version,
    about = "Hyperbolic potential theory: kernels, Dirichlet solves, verification scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate kernels (and gradients) at requested points
    Kernel(KernelArgs),
    /// Solve the Dirichlet problem u = P_h[phi] - G_h[psi] and emit CSV
    Solve(SolveArgs),
    /// Run a named verification suite (or 'all')
    Verify(VerifyArgs),
    /// Run a named bound scan and emit its CSV
    Scan(ScanArgs),
    /// Build or inspect cached quadrature rules
    Rules(RulesArgs),
}

#[derive(Args)]
struct KernelArgs {
    /// Poisson-Szego kernel on the ball (needs --x, --t)
    #[arg(long)]
    ball: bool,
    /// Hyperbolic Green function (needs --x, --y)
    #[arg(long)]
    green: bool,
    /// Half-space kernel (needs --x as tangential part, --height)
    #[arg(long)]
    halfspace: bool,
    /// Generalized kernel P_{alpha,beta} (needs --x, --t, --alpha, --beta)
    #[arg(long = "alpha-beta")]
    alpha_beta: bool,
    #[arg(short = 'n', long)]
    dim: usize,
    /// Comma-separated coordinates of the evaluation point
    #[arg(long)]
    x: String,
    /// Boundary point (ball kernels)
    #[arg(long)]
    t: Option<String>,
    /// Second interior point (Green function)
    #[arg(long)]
    y: Option<String>,
    /// Height above the boundary (half-space kernel)
    #[arg(long)]
    height: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Also print the gradient
    #[arg(long)]
    grad: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// JSON experiment config (schema 1); overrides the inline flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short = 'n', long, default_value_t = 3)]
    dim: usize,
    /// Boundary data: name[:p1,p2,...] from the catalog
    #[arg(long, default_value = "const")]
    phi: String,
    /// Source density: name[:params] from the catalog
    #[arg(long)]
    source: Option<String>,
    /// Discrete measure: flat list y1_1,..,y1_n,w1;y2_1,...
    #[arg(long)]
    measure: Option<String>,
    /// Evaluation points, semicolon-separated coordinate lists
    #[arg(long)]
    points: Option<String>,
    /// Sphere-rule level for the Poisson part
    #[arg(long, default_value_t = 280)]
    level: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output format for the rows
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct SolveConfig {
    schema: u32,
    #[serde(default)]
    experiment: Option<String>,
    n: usize,
    #[serde(default = "default_level")]
    level: usize,
    #[serde(default = "default_seed")]
    seed: u64,
    boundary: CatalogRef,
    #[serde(default)]
    source: Option<SourceRef>,
    points: Vec<Vec<f64>>,
    #[serde(default)]
    out: Option<PathBuf>,
}

fn default_level() -> usize {
    280
}

fn default_seed() -> u64 {
    7
}

#[derive(Debug, Deserialize)]
struct CatalogRef {
    name: String,
    #[serde(default)]
    params: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum SourceRef {
    Density {
        name: String,
        #[serde(default)]
        params: Vec<f64>,
    },
    Measure {
        atoms: Vec<f64>,
    },
    None,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: mobius | kernels | dirichlet | holder | green-gradient
    /// | riesz | halfspace | all
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the JSON run report here (atomic)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include the Euclidean-kernel contrast rows in single-suite runs
    #[arg(long = "negative-control")]
    negative_control: bool,
    /// With `holder`: also emit the (n, alpha) radial scan as CSV
    #[arg(short = 'n', long)]
    dim: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct ScanArgs {
    /// i-alpha | i-omega-log | a | b | i-m | holder | green-gradient |
    /// holder-green | normal-derivative | damping | i-s-alpha | c1-extension
    name: String,
    #[arg(short = 'n', long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Exponent m of the I_m scan
    #[arg(long, default_value_t = 2.0)]
    m: f64,
    #[arg(long, default_value_t = 12)]
    jmax: usize,
    /// Use the Euclidean kernel (negative control) where applicable
    #[arg(long)]
    euclidean: bool,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RulesArgs {
    #[command(subcommand)]
    action: RulesAction,
}

#[derive(Subcommand)]
enum RulesAction {
    /// Build a rule and write it to --out or the cache directory
    Build {
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(short = 'n', long)]
        dim: usize,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 48)]
        radial_level: usize,
        #[arg(long, default_value_t = 0.999)]
        r_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the header and weight sum of a cached rule
    Show { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Sphere,
    BallTau,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let code = match cli.command {
        Command::Kernel(args) => cmd_kernel(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Rules(args) => cmd_rules(args),
    };
    eprintln!("wall-clock: {:.3}s", started.elapsed().as_secs_f64());
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(classify(&e))
        }
    }
}

fn classify(e: &hyplap::Error) -> u8 {
    match e {
        hyplap::Error::Domain(_) | hyplap::Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn parse_vec(s: &str) -> Result<Vec<f64>, hyplap::Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| hyplap::Error::Parse(format!("malformed coordinate '{t}'")))
        })
        .collect()
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_kernel(args: KernelArgs) -> Result<ExitCode, hyplap::Error> {
    let n = args.dim;
    let xv = parse_vec(&args.x)?;
    if args.ball || args.alpha_beta {
        let x = BallPoint::from_coords(xv)?;
        let t_str = args
            .t
            .as_deref()
            .ok_or_else(|| hyplap::Error::Parse("--t required for ball kernels".into()))?;
        let t = SpherePoint::from_coords(parse_vec(t_str)?)?;
        if args.alpha_beta {
            let p = KernelParams::new(
                args.alpha
                    .ok_or_else(|| hyplap::Error::Parse("--alpha required".into()))?,
                args.beta
                    .ok_or_else(|| hyplap::Error::Parse("--beta required".into()))?,
            )?;
            println!(
                "P_alpha_beta {}",
                num(kernels::kernel_alpha_beta(&x, &t, p))
            );
        } else {
            println!("P_h {}", num(kernels::poisson_kernel_ball(&x, &t)));
            if args.grad {
                let g = kernels::poisson_kernel_ball_gradient(&x, &t);
                for (k, c) in g.coords().iter().enumerate() {
                    println!("dP_h/dx{} {}", k + 1, num(*c));
                }
            }
        }
    } else if args.green {
        let x = BallPoint::from_coords(xv)?;
        let y_str = args
            .y
            .as_deref()
            .ok_or_else(|| hyplap::Error::Parse("--y required for --green".into()))?;
        let y = BallPoint::from_coords(parse_vec(y_str)?)?;
        println!("G_h {}", num(kernels::green_function(&x, &y)?));
        if args.grad {
            for k in 0..x.dim() {
                let (p1, p2) = kernels::green_gradient_parts(&x, &y, k)?;
                println!("dG_h/dx{} {}", k + 1, num(p1 + p2));
            }
        }
    } else if args.halfspace {
        let k = HalfspaceKernel::hyperbolic(n)?;
        let y = args
            .height
            .ok_or_else(|| hyplap::Error::Parse("--height required for --halfspace".into()))?;
        println!("P_h {}", num(k.eval(&xv, y)?));
        if args.grad {
            println!("dP_h/dy {}", num(k.eval_dy(&xv, y)?));
            for i in 0..xv.len() {
                println!("dP_h/dx{} {}", i + 1, num(k.eval_dxi(&xv, y, i)?));
            }
        }
    } else {
        return Err(hyplap::Error::Parse(
            "select one of --ball, --green, --halfspace, --alpha-beta".into(),
        ));
    }
    Ok(ExitCode::SUCCESS)
}

/// Split "name:0.5,1.0" into the catalog name and parameter list.
fn parse_catalog_ref(s: &str) -> Result<(String, Vec<f64>), hyplap::Error> {
    match s.split_once(':') {
        None => Ok((s.to_string(), Vec::new())),
        Some((name, params)) => Ok((name.to_string(), parse_vec(params)?)),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, hyplap::Error> {
    // assemble the experiment, config file first
    let (n, level, seed, boundary, source, points, out) = if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        let cfg: SolveConfig =
            serde_json::from_str(&text).map_err(|e| hyplap::Error::Parse(e.to_string()))?;
        if cfg.schema != 1 {
            return Err(hyplap::Error::Parse(format!(
                "unsupported config schema {}",
                cfg.schema
            )));
        }
        if let Some(name) = &cfg.experiment {
            eprintln!("experiment: {name}");
        }
        let boundary = catalog::boundary(&cfg.boundary.name, &cfg.boundary.params)?;
        let source = match cfg.source {
            None | Some(SourceRef::None) => Source::None,
            Some(SourceRef::Density { name, params }) => {
                Source::Density(catalog::source(&name, &params)?)
            }
            Some(SourceRef::Measure { atoms }) => {
                Source::Measure(catalog::measure_from_flat(cfg.n, &atoms)?)
            }
        };
        (
            cfg.n,
            cfg.level,
            cfg.seed,
            boundary,
            source,
            cfg.points,
            cfg.out.or(args.out),
        )
    } else {
        let (bname, bparams) = parse_catalog_ref(&args.phi)?;
        let boundary = catalog::boundary(&bname, &bparams)?;
        let source = match (&args.source, &args.measure) {
            (Some(s), None) => {
                let (name, params) = parse_catalog_ref(s)?;
                Source::Density(catalog::source(&name, &params)?)
            }
            (None, Some(m)) => {
                let flat: Vec<f64> = m
                    .split(';')
                    .flat_map(|chunk| chunk.split(','))
                    .map(|t| {
                        t.trim().parse::<f64>().map_err(|_| {
                            hyplap::Error::Parse(format!("malformed measure entry '{t}'"))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                Source::Measure(catalog::measure_from_flat(args.dim, &flat)?)
            }
            (None, None) => Source::None,
            (Some(_), Some(_)) => {
                return Err(hyplap::Error::Parse(
                    "--source and --measure are mutually exclusive".into(),
                ))
            }
        };
        let points: Vec<Vec<f64>> = match &args.points {
            Some(p) => p
                .split(';')
                .map(|chunk| parse_vec(chunk))
                .collect::<Result<_, _>>()?,
            None => vec![vec![0.0; args.dim]],
        };
        (
            args.dim, args.level, args.seed, boundary, source, points, args.out,
        )
    };
    // growth-condition gate for densities
    if let Source::Density(psi) = &source {
        let params = ConditionParams {
            seed,
            ..ConditionParams::defaults(n)
        };
        let report = check_condition(psi, ConditionTag::H3, &params);
        if !report.pass {
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&report)
                    .unwrap_or_else(|_| "condition check failed".into())
            );
            return Ok(ExitCode::from(EXIT_CONDITION));
        }
    }
    let rules = SolverRules::new(n, level, 100, 56)?;
    let mut header: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    header.extend(["u", "phi_part", "psi_part", "residual"].map(String::from));
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut csv = CsvBuilder::new(&header_refs);
    let mut json_rows: Vec<serde_json::Value> = Vec::new();
    for coords in &points {
        if coords.len() != n {
            return Err(hyplap::Error::Parse(format!(
                "point {coords:?} does not have dimension {n}"
            )));
        }
        let x = BallPoint::from_coords(coords.clone())?;
        let phi_part = solver::poisson_integral(&boundary, &x, &rules.sphere)?;
        let psi_part = match &source {
            Source::None => 0.0,
            Source::Density(psi) => {
                solver::green_normalization(n) * solver::green_potential(psi, &x, &rules.green)?
            }
            Source::Measure(mu) => {
                solver::green_normalization(n)
                    * solver::green_potential_measure(mu, &x, rules.green.table())?
            }
        };
        let u = phi_part - psi_part;
        // FD residual of the hyperbolic Laplacian against the source; a
        // stencil point landing on a measure atom yields NaN in the column
        // rather than aborting the run
        let field = |v: &Vector| -> f64 {
            BallPoint::new(v.clone())
                .and_then(|p| solve_dirichlet(&boundary, &source, &p, &rules))
                .unwrap_or(f64::NAN)
        };
        let lap = hyperbolic_laplacian_fd(&field, &x, Some(1e-3 * (1.0 - x.norm())))
            .unwrap_or(f64::NAN);
        let target = match &source {
            Source::Density(psi) => psi.eval(&x),
            _ => 0.0,
        };
        let mut row: Vec<CsvField> = coords.iter().map(|&c| CsvField::Num(c)).collect();
        row.extend([
            CsvField::Num(u),
            CsvField::Num(phi_part),
            CsvField::Num(psi_part),
            CsvField::Num(lap - target),
        ]);
        csv.row(&row);
        json_rows.push(serde_json::json!({
            "point": coords,
            "u": u,
            "phi_part": phi_part,
            "psi_part": psi_part,
            "residual": lap - target,
        }));
    }
    let body = match args.format {
        OutputFormat::Csv => csv.finish(),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&json_rows)
                .map_err(|e| hyplap::Error::Parse(e.to_string()))?
                + "\n"
        }
    };
    emit(out.as_deref(), &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, hyplap::Error> {
    let suites = verify::run_suite(&args.suite, args.seed)?;
    // `verify holder --alpha A -n N` emits that scan's CSV to --out (the
    // JSON report then goes to stdout-only for this mode)
    let scan_mode = args.suite == "holder" && (args.dim.is_some() || args.alpha.is_some());
    if scan_mode {
        let n = args.dim.unwrap_or(3);
        let alpha = args.alpha.unwrap_or(1.0);
        let phi = catalog::boundary("spike", &[alpha])?;
        let ev = solver::SlicedPoissonEvaluator::new(n, 16, 20)?;
        let scan = regularity::holder_radial_scan(
            &phi,
            &SpherePoint::pole(n),
            alpha,
            12,
            BoundaryKernel::Hyperbolic,
            &ev,
        );
        emit(args.out.as_deref(), &scan_to_csv(&scan, Some("hyperbolic")))?;
    }
    let include_controls = args.negative_control || args.suite == "all";
    let mut filtered = suites;
    if !include_controls {
        for s in &mut filtered {
            s.checks.retain(|c| !c.name.starts_with("dini-euclidean"));
        }
    }
    for s in &filtered {
        for c in &s.checks {
            match c.passed {
                Some(true) => println!("PASS   {} / {}  value={:.6e}", s.suite, c.name, c.value),
                Some(false) => println!(
                    "FAIL   {} / {}  value={:.6e} threshold={:.6e}  ({})",
                    s.suite, c.name, c.value, c.threshold, c.details
                ),
                None => println!("REPORT {} / {}  value={:.6e}", s.suite, c.name, c.value),
            }
        }
    }
    let report = RunReport::new(&args.suite, args.seed, filtered);
    let json =
        serde_json::to_string_pretty(&report).map_err(|e| hyplap::Error::Parse(e.to_string()))?;
    if !scan_mode {
        if let Some(path) = &args.out {
            io::write_atomic(path, json.as_bytes())?;
        }
    }
    if report.all_passed {
        println!("verify {}: all checks passed", args.suite);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verify {}: FAILURES present", args.suite);
        Ok(ExitCode::from(EXIT_CHECK_FAILED))
    }
}

fn scan_to_csv(scan: &regularity::BoundScan, kernel_tag: Option<&str>) -> String {
    let mut header = vec!["grid_value", "raw", "scaled", "cumulative_max"];
    if kernel_tag.is_some() {
        header.push("kernel");
    }
    let mut csv = CsvBuilder::new(&header);
    let mut cmax = f64::NEG_INFINITY;
    for i in 0..scan.grid.len() {
        cmax = cmax.max(scan.scaled[i]);
        let mut row = vec![
            CsvField::Num(scan.grid[i]),
            CsvField::Num(scan.raw[i]),
            CsvField::Num(scan.scaled[i]),
            CsvField::Num(cmax),
        ];
        if let Some(tag) = kernel_tag {
            row.push(CsvField::Text(tag.to_string()));
        }
        csv.row(&row);
    }
    csv.finish()
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode, hyplap::Error> {
    let n = args.dim;
    let (scan, tag) = match args.name.as_str() {
        "i-alpha" => (regularity::i_alpha_scan(args.alpha, n, args.jmax), None),
        "i-omega-log" => {
            let omega = |s: f64| {
                if s <= 0.0 {
                    0.0
                } else {
                    s * (1.0 + (1.0 / s).ln().max(0.0))
                }
            };
            (
                regularity::i_omega_scan(&omega, "s(1+log+(1/s))", n, args.jmax),
                None,
            )
        }
        "a" => (regularity::a_scan(n, args.jmax), None),
        "b" => (regularity::b_scan(n, args.jmax), None),
        "i-m" => (regularity::i_m_scan(args.m, n, args.jmax), None),
        "holder" => {
            let phi = catalog::boundary("spike", &[args.alpha])?;
            let ev = solver::SlicedPoissonEvaluator::new(n, 16, 20)?;
            let kernel = if args.euclidean {
                BoundaryKernel::Euclidean
            } else {
                BoundaryKernel::Hyperbolic
            };
            let scan = regularity::holder_radial_scan(
                &phi,
                &SpherePoint::pole(n),
                args.alpha,
                args.jmax,
                kernel,
                &ev,
            );
            let tag = if args.euclidean {
                "euclidean"
            } else {
                "hyperbolic"
            };
            (scan, Some(tag))
        }
        "green-gradient" => {
            let psi = catalog::source("h3-linear", &[1.0])?;
            let gq = solver::GreenQuad::new(n, 120, 48)?;
            (
                regularity::green_gradient_scan(&psi, n - 1, args.jmax.min(8), &gq)?,
                None,
            )
        }
        "holder-green" => {
            let psi = catalog::source("h4-cubic", &[])?;
            let gq = solver::GreenQuad::new(n, 100, 40)?;
            let (scan, _) = regularity::holder_radial_green(&psi, args.alpha, args.jmax, &gq)?;
            (scan, None)
        }
        "normal-derivative" => {
            let bump = halfspace::smooth_bump(vec![0.0; n - 1], 1.6);
            let kernel = if args.euclidean {
                HalfspaceKernel::euclidean(n)?
            } else {
                HalfspaceKernel::hyperbolic(n)?
            };
            let scan =
                halfspace::normal_derivative_scan(&kernel, &bump, &vec![0.0; n - 1], args.jmax)?;
            let tag = if args.euclidean {
                "euclidean"
            } else {
                "hyperbolic"
            };
            (scan, Some(tag))
        }
        "damping" => {
            let bump = halfspace::smooth_bump(vec![0.0; n - 1], 1.2);
            let kernel = HalfspaceKernel::hyperbolic(n)?;
            let scan =
                halfspace::derivative_damping_scan(&kernel, &bump, &[vec![0.0; n - 1]], args.jmax)?;
            (scan, Some("hyperbolic"))
        }
        "i-s-alpha" => {
            let s = 2.0 * (n as f64 - 1.0);
            let expo = s - n as f64 + 1.0 - args.alpha;
            let mut scan = regularity::BoundScan::new(
                format!("i_s_alpha(s={s}, alpha={}, n={n})", args.alpha),
                format!("y^{{{expo}}} I_s^alpha(y)"),
            );
            for j in 0..=args.jmax {
                let y = 2f64.powi(-(j as i32));
                let raw = halfspace::integral_i_s_alpha(y, s, args.alpha, n)?;
                scan.push(y, raw, raw * y.powf(expo));
            }
            (scan, None)
        }
        "c1-extension" => {
            let kernel = HalfspaceKernel::hyperbolic(n)?;
            let f = halfspace::smooth_bump(vec![0.0; n - 1], 1.1);
            let sample: Vec<Vec<f64>> = vec![vec![0.0; n - 1], {
                let mut v = vec![0.0; n - 1];
                v[0] = 0.3;
                v
            }];
            let report = halfspace::c1_extension_report(&kernel, &f, &sample, args.jmax, 1e-4)?;
            let body = match args.format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&report)
                        .map_err(|e| hyplap::Error::Parse(e.to_string()))?
                        + "\n"
                }
            };
            emit(args.out.as_deref(), &body)?;
            return Ok(ExitCode::SUCCESS);
        }
        other => return Err(hyplap::Error::Domain(format!("unknown scan '{other}'"))),
    };
    let body = match args.format {
        OutputFormat::Csv => scan_to_csv(&scan, tag),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&scan).map_err(|e| hyplap::Error::Parse(e.to_string()))?
                + "\n"
        }
    };
    emit(args.out.as_deref(), &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cache_dir() -> PathBuf {
    std::env::var_os("HYPLAP_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".hyplap-cache"))
}

fn cmd_rules(args: RulesArgs) -> Result<ExitCode, hyplap::Error> {
    match args.action {
        RulesAction::Build {
            domain,
            dim,
            level,
            radial_level,
            r_max,
            out,
        } => {
            let rule = match domain {
                DomainArg::Sphere => sphere_rule(dim, level)?,
                DomainArg::BallTau => ball_tau_rule(dim, radial_level, level, r_max)?,
            };
            let path = match out {
                Some(p) => p,
                None => {
                    let dir = cache_dir();
                    std::fs::create_dir_all(&dir)?;
                    dir.join(format!("{}-n{}-l{}.rule", rule.domain.tag(), dim, level))
                }
            };
            let mut buf = Vec::new();
            rule.write_to(&mut buf)?;
            io::write_atomic(&path, &buf)?;
            println!(
                "wrote {} ({} nodes, weight sum {:.12})",
                path.display(),
                rule.len(),
                rule.weights_sum()
            );
            Ok(ExitCode::SUCCESS)
        }
        RulesAction::Show { path } => {
            let f = std::fs::File::open(&path)?;
            let rule = QuadratureRule::read_from(&mut std::io::BufReader::new(f))?;
            println!(
                "domain={} n={} level={} count={} weight_sum={:.12}",
                rule.domain.tag(),
                rule.dim,
                rule.level,
                rule.len(),
                rule.weights_sum()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

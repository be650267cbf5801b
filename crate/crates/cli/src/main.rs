//! `lw`: generate, analyze and verify timelike surfaces in Minkowski 3-space.

mod config;
mod export;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use lw_core::geometry::Analyzer;
use lw_core::weierstrass::conjugate;
use lw_core::worldsheet::{
    dalembert_evolve, einstein_hilbert_interior, euler_lagrange_residual, nambu_goto_action,
    wave_residual, StringState,
};

use config::{Format, JobArgs, JobConfig};
use export::sig12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] lw_core::Error),
    #[error("{0} verification suite(s) failed")]
    Verification(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "lw", version, about = "Timelike minimal and CMC surfaces in Minkowski 3-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a surface and write its mesh.
    Generate(JobArgs),
    /// Tabulate u, v, H, K, Q, R, omega and the degenerate flag.
    Analyze(AnalyzeArgs),
    /// Run every verification suite; exit 1 if an applicable suite fails.
    Verify(JobArgs),
    /// Write the conjugate surface X(u) - Y(v).
    Conjugate(JobArgs),
    /// String-worldsheet functionals and evolution.
    #[command(subcommand)]
    Worldsheet(WorldsheetCommand),
    /// List the built-in examples, or describe one.
    Gallery { name: Option<String> },
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    job: JobArgs,
    /// Sample point `u,v`; reported at the nearest lattice node. Repeatable.
    #[arg(long, value_name = "U,V", allow_hyphen_values = true)]
    at: Vec<String>,
    /// Report every lattice node.
    #[arg(long)]
    grid: bool,
}

#[derive(Subcommand)]
enum WorldsheetCommand {
    /// Nambu-Goto action.
    Action(JobArgs),
    /// Largest wave-equation residual.
    Wave(JobArgs),
    /// Largest Euler-Lagrange residual of the Nambu-Goto action.
    El(JobArgs),
    /// Interior Einstein-Hilbert term.
    Eh(JobArgs),
    /// Evolve initial string data with the d'Alembert solution.
    Evolve(EvolveArgs),
}

#[derive(Args)]
struct EvolveArgs {
    /// JSON initial data (position, velocity, sigma, samples, tension, tau_max, n_tau).
    #[arg(long)]
    init: PathBuf,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    n_tau: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InitFile {
    position: [String; 3],
    velocity: [String; 3],
    sigma: [f64; 2],
    samples: Option<usize>,
    tension: Option<f64>,
    tau_max: Option<f64>,
    n_tau: Option<usize>,
}

/// Prints a line to stdout; a closed pipe ends the process quietly.
fn say(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn write_mesh(job: &JobConfig, g: &lw_core::SurfaceGrid) -> Result<(), CliError> {
    let format = export::pick_format(job.format, job.out.as_deref());
    export::emit(job.out.as_deref(), &export::mesh(g, format))?;
    let meta_path = match (&job.report, &job.out) {
        (Some(r), _) => Some(r.clone()),
        (None, Some(o)) => Some(o.with_extension("meta.json")),
        (None, None) => None,
    };
    if let Some(p) = meta_path {
        export::emit(Some(&p), &export::metadata(&job.label, g))?;
    }
    Ok(())
}

fn generate(args: &JobArgs) -> Result<(), CliError> {
    let job = JobConfig::resolve(args)?;
    let g = job.build()?;
    write_mesh(&job, &g)
}

fn conjugate_cmd(args: &JobArgs) -> Result<(), CliError> {
    let job = JobConfig::resolve(args)?;
    if job.data().is_none() {
        return Err(CliError::Usage("conjugation needs Weierstrass data".into()));
    }
    let g = conjugate(&job.build()?)?;
    write_mesh(&job, &g)
}

#[derive(Serialize)]
struct Row {
    u: f64,
    v: f64,
    #[serde(rename = "H")]
    h: Option<f64>,
    #[serde(rename = "K")]
    k: Option<f64>,
    #[serde(rename = "Q")]
    q: Option<f64>,
    #[serde(rename = "R")]
    r: Option<f64>,
    omega: Option<f64>,
    degenerate: bool,
}

fn parse_point(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("--at expects `u,v`, got '{s}'"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn nearest(ts: &[f64], t: f64) -> usize {
    ts.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
        .map(|(k, _)| k)
        .unwrap_or(0)
}

fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let job = JobConfig::resolve(&args.job)?;
    let g = job.build()?;
    let an = Analyzer::new(&g, job.scheme)?;
    let nodes: Vec<(usize, usize)> = if args.grid || args.at.is_empty() {
        g.nodes().collect()
    } else {
        let (us, vs) = (g.us(), g.vs());
        args.at
            .iter()
            .map(|s| {
                let (u, v) = parse_point(s)?;
                // sample points are given in null coordinates
                let (a, b) = match g.chart {
                    lw_core::Chart::Null => (u, v),
                    lw_core::Chart::Isothermal => (0.5 * (u - v), 0.5 * (u + v)),
                };
                Ok((nearest(&us, a), nearest(&vs, b)))
            })
            .collect::<Result<_, CliError>>()?
    };
    let rows: Vec<Row> = nodes
        .into_iter()
        .map(|(i, j)| {
            let (u, v) = g.null_coords(i, j);
            let f = an.fields(i, j);
            Row {
                u,
                v,
                h: f.map(|f| f.h),
                k: f.map(|f| f.k),
                q: f.map(|f| f.hopf.q),
                r: f.map(|f| f.hopf.r),
                omega: f.map(|f| f.forms.omega),
                degenerate: f.is_none(),
            }
        })
        .collect();
    let text = match job.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let cell = |x: Option<f64>| x.map_or_else(|| "nan".to_owned(), sig12);
            let mut s = String::from("u,v,H,K,Q,R,omega,degenerate\n");
            for r in &rows {
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    sig12(r.u),
                    sig12(r.v),
                    cell(r.h),
                    cell(r.k),
                    cell(r.q),
                    cell(r.r),
                    cell(r.omega),
                    u8::from(r.degenerate)
                );
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Obj => return Err(CliError::Usage("analyze writes csv or json".into())),
    };
    export::emit(job.report.as_deref().or(job.out.as_deref()), &text)
}

fn verify_cmd(args: &JobArgs) -> Result<(), CliError> {
    let job = JobConfig::resolve(args)?;
    let results = verify::run(&job)?;
    for r in &results {
        say(&r.line());
    }
    if let Some(p) = &job.report {
        let text = serde_json::to_string_pretty(&results).expect("results serialize") + "\n";
        export::emit(Some(p), &text)?;
    }
    match results.iter().filter(|r| r.failed()).count() {
        0 => Ok(()),
        n => Err(CliError::Verification(n)),
    }
}

fn load_init(path: &Path) -> Result<InitFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad initial data {}: {e}", path.display())))
}

fn worldsheet(cmd: &WorldsheetCommand) -> Result<(), CliError> {
    let measure = |args: &JobArgs| -> Result<(JobConfig, lw_core::SurfaceGrid), CliError> {
        let job = JobConfig::resolve(args)?;
        let g = job.build()?;
        Ok((job, g))
    };
    match cmd {
        WorldsheetCommand::Action(a) => {
            let (job, g) = measure(a)?;
            say(&sig12(nambu_goto_action(&g, job.tension, job.scheme)?));
        }
        WorldsheetCommand::Wave(a) => {
            let (job, g) = measure(a)?;
            say(&sig12(wave_residual(&g, job.scheme)?));
        }
        WorldsheetCommand::El(a) => {
            let (job, g) = measure(a)?;
            say(&sig12(euler_lagrange_residual(&g, job.tension, job.scheme)?));
        }
        WorldsheetCommand::Eh(a) => {
            let (job, g) = measure(a)?;
            let alpha = lw_core::worldsheet::alpha_prime(job.tension);
            let eh = einstein_hilbert_interior(&g, alpha, job.scheme)?;
            say(&sig12(eh.value));
            if eh.skipped > 0 {
                eprintln!("skipped {} degenerate nodes", eh.skipped);
            }
        }
        WorldsheetCommand::Evolve(a) => {
            let init = load_init(&a.init)?;
            let position = [&*init.position[0], &init.position[1], &init.position[2]];
            let velocity = [&*init.velocity[0], &init.velocity[1], &init.velocity[2]];
            let samples = init.samples.unwrap_or(config::DEFAULT_RESOLUTION);
            let tension = init.tension.unwrap_or(lw_core::worldsheet::DEFAULT_TENSION);
            let state = StringState::parse(
                position,
                velocity,
                (init.sigma[0], init.sigma[1]),
                samples,
                tension,
            )?;
            let tau_max = a.tau_max.or(init.tau_max).unwrap_or(1.0);
            let n_tau = a.n_tau.or(init.n_tau).unwrap_or(config::DEFAULT_RESOLUTION);
            let g = dalembert_evolve(&state, tau_max, n_tau)?;
            let format = export::pick_format(a.format, a.out.as_deref());
            export::emit(a.out.as_deref(), &export::mesh(&g, format))?;
        }
    }
    Ok(())
}

fn gallery_cmd(name: Option<&str>) -> Result<(), CliError> {
    match name {
        None => {
            for n in lw_core::gallery::list() {
                say(&format!("{n}"));
            }
        }
        Some(n) => {
            let e = lw_core::gallery::get(n)?;
            let d = e.default_domain;
            say(&format!("name: {}", e.name));
            match &e.source {
                lw_core::gallery::Source::Weierstrass(w) => {
                    let show = |c: &lw_core::weierstrass::Curve| {
                        c.expr().map_or_else(|| "sampled".to_owned(), |x| x.to_string())
                    };
                    say(&format!("q: {}", show(&w.q)));
                    say(&format!("f: {}", show(&w.f)));
                    say(&format!("r: {}", show(&w.r)));
                    say(&format!("g: {}", show(&w.g)));
                }
                lw_core::gallery::Source::Pseudosphere { h, q, r, .. } => {
                    say(&format!("pseudosphere: H = {h}, q = {q}, r = {r}"));
                }
            }
            say(&format!("H: {}", e.mean_curvature));
            say(&format!("(Q, R): ({}, {})", e.hopf.0, e.hopf.1));
            say(&format!(
                "default domain: {} {} {} {}",
                sig12(d.u0),
                sig12(d.u1),
                sig12(d.v0),
                sig12(d.v1)
            ));
        }
    }
    Ok(())
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(s) = std::env::var("LW_THREADS") {
        let n: usize = s
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Usage(format!("LW_THREADS must be a positive integer, got '{s}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Conjugate(a) => conjugate_cmd(a),
        Command::Worldsheet(w) => worldsheet(w),
        Command::Gallery { name } => gallery_cmd(name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

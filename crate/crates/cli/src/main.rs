//! `ctht`: characters, transforms, moduli and the inequality harness from the
//! command line.

use clap::{Args, Parser, Subcommand};
use ctht_core::besov::{besov_seminorm, log_spaced, membership, BesovSpec};
use ctht_core::characters::phi_real;
use ctht_core::io::{csv_string, json_string, write_csv};
use ctht_core::spectral::{forward_on_nodes, modulus_of_continuity, round_trip, translate};
use ctht_core::verify::{run_checks, write_scenario, CheckKind, FunctionDescriptor, ScenarioConfig};
use ctht_core::{Error, JacobiParams};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ctht",
    version,
    about = "Harmonic analysis on the Jacobi hypergroup",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate φ_λ(t) on the product of the given λ and t lists.
    #[command(allow_negative_numbers = true)]
    EvalPhi {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Comma-separated frequencies.
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<f64>,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        grid: Option<PathBuf>,
    },
    /// Forward transform on the spectral nodes.
    Transform(FunctionArgs),
    /// Forward then inverse transform, next to the original samples.
    Inverse(FunctionArgs),
    /// Generalized translate τ_{x0} f.
    Translate {
        #[command(flatten)]
        common: FunctionArgs,
        #[arg(long)]
        x0: f64,
    },
    /// ω_{A,p}(f, δ) on a list of δ.
    Modulus {
        #[command(flatten)]
        common: FunctionArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        delta_grid: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Besov-type seminorm and membership verdict.
    Besov {
        #[command(flatten)]
        common: FunctionArgs,
        #[arg(long)]
        p: f64,
        /// A number or "inf".
        #[arg(long)]
        q: String,
        #[arg(long)]
        gamma: f64,
        /// Comma-separated δ grid; defaults to 24 log-spaced points in [1e-3, 1].
        #[arg(long, value_delimiter = ',')]
        delta_grid: Vec<f64>,
    },
    /// Run inequality checks from a scenario file.
    Verify {
        /// hardy-littlewood, lemma2, riemann-lebesgue, low-frequency, eq12, theorems or all
        which: String,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the scenario's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FunctionArgs {
    /// Scenario file supplying parameters and quadrature.
    #[arg(long)]
    config: PathBuf,
    /// Bundled function name.
    #[arg(long)]
    function: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

struct Loaded {
    cfg: ScenarioConfig,
    params: JacobiParams,
    f: ctht_core::verify::TestFunction,
}

fn load(args: &FunctionArgs) -> Result<Loaded, Error> {
    let cfg = ScenarioConfig::load(&args.config)?;
    let params = cfg.jacobi()?;
    let desc = FunctionDescriptor {
        name: args.function.clone(),
        dilation: 1.0,
    };
    let f = desc.build(cfg.quadrature.output_spacing)?;
    std::fs::create_dir_all(&args.out)?;
    Ok(Loaded { cfg, params, f })
}

fn emit(path: &Path) {
    println!("wrote {}", path.display());
}

fn parse_q(q: &str) -> Result<f64, Error> {
    match q.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse().map_err(|_| Error::Parse(format!("q must be a number or 'inf', got '{q}'"))),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::EvalPhi {
            alpha,
            beta,
            lambda,
            t,
            grid,
        } => {
            let params = JacobiParams::new(alpha, beta)?;
            let mut rows = Vec::with_capacity(lambda.len() * t.len());
            for &l in &lambda {
                for &x in &t {
                    let e = phi_real(&params, l, x)?;
                    rows.push(vec![l, x, e.value, e.est_error]);
                }
            }
            let header = ["lambda", "t", "phi", "est_error"];
            match grid {
                Some(path) => {
                    write_csv(&path, &header, &rows)?;
                    emit(&path);
                }
                None => print!("{}", csv_string(&header, &rows)),
            }
        }
        Command::Transform(args) => {
            let l = load(&args)?;
            let (s, _) = forward_on_nodes(&l.f.grid, &l.params, &l.cfg.quadrature)?;
            let density = s.density.clone().unwrap_or_default();
            let rows: Vec<Vec<f64>> = s
                .lambda_grid
                .iter()
                .zip(&s.values)
                .zip(&density)
                .map(|((l, v), d)| vec![*l, *v, *d])
                .collect();
            let path = args.out.join(format!("{}_spectrum.csv", l.f.label));
            write_csv(&path, &["lambda", "transform", "density"], &rows)?;
            emit(&path);
        }
        Command::Inverse(args) => {
            let l = load(&args)?;
            let back = round_trip(&l.f.grid, &l.params, &l.cfg.quadrature)?;
            let rows: Vec<Vec<f64>> = back
                .x_grid()
                .iter()
                .zip(back.values())
                .map(|(x, v)| vec![*x, *v, l.f.grid.eval(*x)])
                .collect();
            let path = args.out.join(format!("{}_inverse.csv", l.f.label));
            write_csv(&path, &["x", "inverse", "original"], &rows)?;
            emit(&path);
        }
        Command::Translate { common, x0 } => {
            let l = load(&common)?;
            let g = translate(&l.f.grid, x0, &l.params, &l.cfg.quadrature)?;
            let rows: Vec<Vec<f64>> = g.x_grid().iter().zip(g.values()).map(|(x, v)| vec![*x, *v]).collect();
            let path = common.out.join(format!("{}_translate_x0_{x0}.csv", l.f.label));
            write_csv(&path, &["x", "translate"], &rows)?;
            emit(&path);
        }
        Command::Modulus { common, delta_grid, p } => {
            let l = load(&common)?;
            let mut rows = Vec::with_capacity(delta_grid.len());
            for &d in &delta_grid {
                rows.push(vec![d, modulus_of_continuity(&l.f.grid, d, p, &l.params, &l.cfg.quadrature)?]);
            }
            let path = common.out.join(format!("{}_modulus_p{p}.csv", l.f.label));
            write_csv(&path, &["delta", "omega"], &rows)?;
            emit(&path);
        }
        Command::Besov {
            common,
            p,
            q,
            gamma,
            delta_grid,
        } => {
            let l = load(&common)?;
            let spec = BesovSpec::new(p, parse_q(&q)?, gamma)?;
            let grid = if delta_grid.is_empty() {
                log_spaced(1e-3, 1.0, 24)
            } else {
                delta_grid
            };
            let value = besov_seminorm(&l.f.grid, &spec, &l.params, &grid, &l.cfg.quadrature)?;
            // a failed fit is reported next to the seminorm rather than discarding it
            let verdict = match membership(&l.f.grid, &spec, &l.params, &l.cfg.quadrature) {
                Ok(m) => serde_json::to_value(m)?,
                Err(e @ Error::Accuracy { .. }) => serde_json::json!({ "error": e.to_string() }),
                Err(e) => return Err(e),
            };
            let out = serde_json::json!({
                "function": l.f.label,
                "seminorm": value,
                "membership": verdict,
            });
            let path = common.out.join(format!("{}_besov.json", l.f.label));
            let text = json_string(&out)?;
            std::fs::write(&path, &text)?;
            print!("{text}");
        }
        Command::Verify { which, config, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let checks = if which == "all" {
                cfg.checks.clone()
            } else {
                vec![CheckKind::parse(&which)?]
            };
            let report = run_checks(&cfg, &checks)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let files = write_scenario(&report, &dir)?;
            for sec in &report.checks {
                let failed = sec.reports.iter().filter(|r| !r.pass).count()
                    + sec.spreads.iter().filter(|s| !s.pass).count();
                println!(
                    "{}: {} reports, {} failing, {} censored",
                    sec.check.name(),
                    sec.reports.len(),
                    failed,
                    sec.censored.len()
                );
            }
            println!("wrote {} files to {}", files.len(), dir.display());
            if report.summary.censored > 0 {
                return Ok(ExitCode::from(4));
            }
            if !report.all_pass() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Accuracy { .. } => 4,
        Error::Config(_) | Error::Domain(_) | Error::Parse(_) | Error::Json(_) => 3,
        Error::BoundViolation(_) => 2,
        Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage mistakes are configuration errors; help and version are not errors
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ctht: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

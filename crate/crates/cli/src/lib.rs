//! The `hyperwalk` command line: argument parsing and subcommand dispatch.
//! Results go to stdout as JSON; files written with `--out` embed a
//! [`RunManifest`].

pub mod error;
pub mod input;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hyperwalk::interrobang::{fraction_search, interro, interro_bracket, interro_grid, interro_inverse, RealQuery};
use hyperwalk::minkowski::{qmark, qmark_inverse};
use hyperwalk::numeric::{Exact, Rational};
use hyperwalk::pgl2::{cdf, cdf_interval, ks_distance, rational_grid, stationarity_check};
use hyperwalk::triangle::contraction_constant;
use hyperwalk::walk::{batch_sample, coupling_experiment, run_walk, trajectory_csv, WalkOptions, WalkStatus};
use serde_json::{json, Value};

pub use error::{CliError, ErrorKind};
use input::{load_config, parse_exact, parse_point, parse_rational, Point};
pub use output::{RunManifest, SCHEMA};
use output::{write_csv_artifact, write_json_artifact, Fields};

const DEFAULT_CONFIG: &str = "builtin:pgl2";

#[derive(Debug, Parser)]
#[command(name = "hyperwalk", version, about = "Reduced random walks on triangle groups and the interrobang function")]
pub struct Cli {
    /// Add a truncated decimal `<field>_decimal` next to every exact value.
    #[arg(long, global = true, value_name = "N")]
    pub decimal_digits: Option<usize>,

    /// Also write the result, with its manifest, to this file (the CSV
    /// destination for `plot-data`).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Worker threads for batch simulation.
    #[arg(long, global = true, env = "HYPERWALK_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a configuration (`builtin:NAME` or a JSON file).
    Validate { config: String },
    /// Run seeded walks and summarize their limits.
    Simulate(SimulateArgs),
    /// The limiting CDF for PGL2(Z) at a point, or bounds over an interval.
    Cdf {
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Right end of an interval query.
        #[arg(long, allow_hyphen_values = true)]
        upper: Option<String>,
    },
    /// The interrobang function at an exact point, or a bracket.
    Interro {
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Right end of an interval query (requires `--eps`).
        #[arg(long, allow_hyphen_values = true)]
        upper: Option<String>,
        /// Return a rational bracket of at most this width.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Minkowski's question-mark function, or its inverse.
    Qmark {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Bracket the preimage of `y` under the interrobang function.
    Invert {
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value = "1/1000000000")]
        eps: String,
    },
    /// Search for a rational with small denominator mapping to `y`.
    FractionSearch {
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 100_000)]
        max_den: u64,
    },
    /// Check the stationarity equation exactly at a rational.
    Stationarity {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Coupled boundary chains and their mean distance.
    Coupling {
        #[arg(long, default_value = DEFAULT_CONFIG)]
        config: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, default_value_t = 40)]
        mmax: usize,
    },
    /// The contraction constant of the one-way reflections.
    Contraction {
        #[arg(long, default_value = DEFAULT_CONFIG)]
        config: String,
    },
    /// Write plotting data as CSV to `--out`.
    PlotData {
        #[command(subcommand)]
        kind: PlotKind,
    },
    /// Kolmogorov-Smirnov distance between simulated limits and the exact CDF.
    Ks {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = 100_000)]
        walks: u64,
        #[arg(long, default_value = "-25/2", allow_hyphen_values = true)]
        lo: String,
        #[arg(long, default_value = "199/16", allow_hyphen_values = true)]
        hi: String,
        /// Grid points, `lo` and `hi` included.
        #[arg(long, default_value_t = 400)]
        points: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum PlotKind {
    /// `x, F(x)` on an even rational grid.
    Cdf {
        #[arg(long, default_value = "-5", allow_hyphen_values = true)]
        lo: String,
        #[arg(long, default_value = "5", allow_hyphen_values = true)]
        hi: String,
        #[arg(long, default_value_t = 1000)]
        points: u32,
    },
    /// `x, ‽(x)` on the grid `i / points`.
    Interro {
        #[arg(long, default_value_t = 1000)]
        points: u32,
    },
    /// One walk's trajectory.
    Trajectory {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long, default_value = DEFAULT_CONFIG)]
    pub config: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Step budget per walk.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub target_width: f64,
}

impl WalkArgs {
    fn options(&self) -> WalkOptions {
        WalkOptions::new(self.budget, self.target_width)
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, default_value_t = 1)]
    pub walks: u64,
    /// Write per-walk results as CSV.
    #[arg(long, value_name = "FILE")]
    pub samples: Option<PathBuf>,
}

/// What a subcommand produced: the stdout document and the exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
}

/// Runs the tool on `argv` (program name first).
pub fn run(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            return Outcome {
                exit_code: 0,
                stdout: e.to_string(),
            }
        }
        Err(e) => return failure(&CliError::new(ErrorKind::Usage, e.render().to_string().trim())),
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let command = argv.get(1..).unwrap_or_default().to_vec();
    let ctx = Context {
        command,
        digits: cli.decimal_digits,
        out: cli.out.clone(),
    };
    match dispatch(&ctx, &cli.command) {
        Ok((value, status)) => Outcome {
            exit_code: status.exit_code(),
            stdout: render(&value),
        },
        Err(e) => failure(&e),
    }
}

fn failure(e: &CliError) -> Outcome {
    Outcome {
        exit_code: e.kind.exit_code(),
        stdout: render(&e.to_json()),
    }
}

fn render(value: &Value) -> String {
    format!("{}\n", serde_json::to_string(value).expect("JSON values serialize"))
}

/// Exit status of a run that produced output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Invalid,
    Partial,
    Breach,
}

impl Status {
    fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Invalid => ErrorKind::InvalidConfig.exit_code(),
            Status::Partial => ErrorKind::BudgetExhausted.exit_code(),
            Status::Breach => ErrorKind::Internal.exit_code(),
        }
    }
}

struct Context {
    command: Vec<String>,
    digits: Option<usize>,
    out: Option<PathBuf>,
}

impl Context {
    fn fields(&self) -> Fields {
        Fields::new(self.digits)
    }

    /// Writes the `--out` artifact, if requested.
    fn finish(&self, result: Value, config: Option<&str>, seed: Option<u64>, status: Status) -> Result<(Value, Status), CliError> {
        if let Some(path) = &self.out {
            write_json_artifact(path, &self.command, config, seed, &result)?;
        }
        Ok((result, status))
    }

    fn csv_path(&self) -> Result<&PathBuf, CliError> {
        self.out
            .as_ref()
            .ok_or_else(|| CliError::new(ErrorKind::Usage, "plot-data needs --out FILE"))
    }
}

fn dispatch(ctx: &Context, command: &Command) -> Result<(Value, Status), CliError> {
    match command {
        Command::Validate { config } => {
            let (value, status) = match load_config(config) {
                Ok(c) => (json!({ "valid": true, "m": c.coxeter() }), Status::Ok),
                Err(e) => {
                    let error = json!({ "kind": e.kind, "message": e.message });
                    (json!({ "valid": false, "error": error }), Status::Invalid)
                }
            };
            ctx.finish(value, Some(config), None, status)
        }
        Command::Simulate(args) => simulate(ctx, args),
        Command::Cdf { x, upper } => {
            let value = match upper {
                Some(hi) => {
                    let (lo, hi) = cdf_interval(&parse_rational(x)?, &parse_rational(hi)?)?;
                    ctx.fields().exact("lower", &lo).exact("upper", &hi).build()
                }
                None => match parse_point(x)? {
                    Point::Exact(x) => {
                        let v = cdf(&x)?;
                        ctx.fields().exact("value", &v.value).put("branch", v.branch).build()
                    }
                    Point::NegInf => ctx.fields().exact("value", &Rational::zero()).build(),
                    Point::PosInf => ctx.fields().exact("value", &Rational::one()).build(),
                },
            };
            ctx.finish(value, None, None, Status::Ok)
        }
        Command::Interro { x, upper, eps } => {
            let value = match (upper, eps) {
                (None, None) => ctx.fields().exact("value", &interro(&parse_exact(x)?)?).build(),
                (Some(_), None) => return Err(CliError::new(ErrorKind::Usage, "--upper needs --eps")),
                (upper, Some(eps)) => {
                    let query = match upper {
                        Some(hi) => RealQuery::Interval(parse_rational(x)?, parse_rational(hi)?),
                        None => RealQuery::Exact(parse_exact(x)?),
                    };
                    let b = interro_bracket(&query, &parse_rational(eps)?)?;
                    ctx.fields()
                        .exact("lower", &b.lower)
                        .exact("upper", &b.upper)
                        .exact("arg_lower", &b.arg_lower)
                        .exact("arg_upper", &b.arg_upper)
                        .build()
                }
            };
            ctx.finish(value, None, None, Status::Ok)
        }
        Command::Qmark { x, inverse } => {
            let value = if *inverse {
                let y = qmark_inverse(&parse_rational(x)?)?;
                ctx.fields()
                    .exact_value("value", &y)
                    .put("rational", matches!(y, Exact::Rational(_)))
                    .build()
            } else {
                let v = qmark(&parse_exact(x)?)?;
                ctx.fields().exact("value", &v.value).put("dyadic", v.is_dyadic).build()
            };
            ctx.finish(value, None, None, Status::Ok)
        }
        Command::Invert { y, eps } => {
            let (lo, hi) = interro_inverse(&parse_rational(y)?, &parse_rational(eps)?)?;
            ctx.finish(ctx.fields().exact("lower", &lo).exact("upper", &hi).build(), None, None, Status::Ok)
        }
        Command::FractionSearch { y, max_den } => {
            let found = fraction_search(&parse_rational(y)?, *max_den)?;
            let value = match &found {
                Some(x) => ctx.fields().exact("found", x),
                None => ctx.fields().put("found", Value::Null),
            }
            .put("max_den", max_den)
            .build();
            ctx.finish(value, None, None, Status::Ok)
        }
        Command::Stationarity { x } => {
            let s = stationarity_check(&parse_rational(x)?)?;
            let value = ctx
                .fields()
                .exact("x", &s.x)
                .exact("lhs", &s.lhs)
                .exact("rhs", &s.rhs)
                .exact_list("terms", &s.terms)
                .put("holds", s.holds)
                .build();
            let status = if s.holds { Status::Ok } else { Status::Breach };
            ctx.finish(value, None, None, status)
        }
        Command::Coupling { config, seed, pairs, mmax } => {
            let table = coupling_experiment(&load_config(config)?, *seed, *mmax, *pairs)?;
            let within = table.rows.iter().all(|r| r.mean <= r.bound + 3.0 * r.std_error);
            let value = json!({
                "contraction": table.contraction,
                "pairs": table.pairs,
                "within_bound": within,
                "rows": table.rows,
            });
            ctx.finish(value, Some(config), Some(*seed), Status::Ok)
        }
        Command::Contraction { config } => {
            let c = contraction_constant(&load_config(config)?)?;
            let value = json!({ "constant": c.constant, "argmax": c.argmax });
            ctx.finish(value, Some(config), None, Status::Ok)
        }
        Command::PlotData { kind } => plot_data(ctx, kind),
        Command::Ks { walk, walks, lo, hi, points } => {
            if *points < 2 {
                return Err(CliError::invalid("--points must be at least 2"));
            }
            let grid = rational_grid(&parse_rational(lo)?, &parse_rational(hi)?, points - 1);
            let config = load_config(&walk.config)?;
            let batch = batch_sample(&config, walk.seed, *walks, &walk.options());
            let distance = ks_distance(&batch.cdf, &grid)?;
            let exhausted = batch.count(WalkStatus::BudgetExhausted);
            let value = json!({
                "distance": distance,
                "walks": walks,
                "grid_points": grid.len(),
                "counts": status_counts(&batch),
            });
            let status = if exhausted > 0 { Status::Partial } else { Status::Ok };
            ctx.finish(value, Some(&walk.config), Some(walk.seed), status)
        }
    }
}

fn status_counts(batch: &hyperwalk::walk::BatchSample) -> Value {
    json!({
        "converged": batch.count(WalkStatus::Converged),
        "budget_exhausted": batch.count(WalkStatus::BudgetExhausted),
        "precision_floor": batch.count(WalkStatus::PrecisionFloor),
        "degenerate": batch.count(WalkStatus::Degenerate),
    })
}

fn simulate(ctx: &Context, args: &SimulateArgs) -> Result<(Value, Status), CliError> {
    let w = &args.walk;
    let config = load_config(&w.config)?;
    let batch = batch_sample(&config, w.seed, args.walks, &w.options());
    let mut zetas: Vec<f64> = batch.walks.iter().map(|s| s.zeta).filter(|z| z.is_finite()).collect();
    zetas.sort_by(f64::total_cmp);
    let median = zetas.get(zetas.len() / 2).copied();
    let mean_steps = batch.walks.iter().map(|s| s.steps_taken as f64).sum::<f64>() / args.walks.max(1) as f64;
    let mut value = json!({
        "walks": args.walks,
        "seed": w.seed,
        "budget": w.budget,
        "target_width": w.target_width,
        "counts": status_counts(&batch),
        "mean_steps": mean_steps,
        "median_zeta": median,
    });
    if args.walks == 1 {
        value["walk"] = json!(run_walk(&config, w.seed, &w.options()));
    }
    if let Some(path) = &args.samples {
        let mut body = String::from("stream,zeta,status,steps,bracket_width\n");
        for s in &batch.walks {
            let status = serde_json::to_value(s.status).expect("status serializes");
            body.push_str(&format!(
                "{},{},{},{},{}\n",
                s.stream,
                s.zeta,
                status.as_str().unwrap_or_default(),
                s.steps_taken,
                s.bracket_width
            ));
        }
        write_csv_artifact(path, &ctx.command, Some(&w.config), Some(w.seed), &body)?;
    }
    let status = if batch.count(WalkStatus::BudgetExhausted) > 0 {
        Status::Partial
    } else {
        Status::Ok
    };
    ctx.finish(value, Some(&w.config), Some(w.seed), status)
}

fn plot_data(ctx: &Context, kind: &PlotKind) -> Result<(Value, Status), CliError> {
    let path = ctx.csv_path()?;
    let (body, rows, config, seed) = match kind {
        PlotKind::Cdf { lo, hi, points } => {
            if *points < 2 {
                return Err(CliError::invalid("--points must be at least 2"));
            }
            let grid = rational_grid(&parse_rational(lo)?, &parse_rational(hi)?, points - 1);
            let mut body = String::from("x,x_f64,value,value_f64,branch\n");
            for x in &grid {
                let v = cdf(&Exact::Rational(x.clone()))?;
                body.push_str(&format!("{x},{},{},{},{}\n", x.to_f64(), v.value, v.value.to_f64(), v.branch));
            }
            (body, grid.len(), None, None)
        }
        PlotKind::Interro { points } => {
            let grid = interro_grid(*points)?;
            let mut body = String::from("x,x_f64,value,value_f64\n");
            for (x, y) in &grid {
                body.push_str(&format!("{x},{},{y},{}\n", x.to_f64(), y.to_f64()));
            }
            (body, grid.len(), None, None)
        }
        PlotKind::Trajectory { walk, stride } => {
            if *stride == 0 {
                return Err(CliError::invalid("--stride must be positive"));
            }
            let opts = WalkOptions {
                trajectory_stride: Some(*stride),
                ..walk.options()
            };
            let report = run_walk(&load_config(&walk.config)?, walk.seed, &opts);
            let rows = report.trajectory.len();
            (trajectory_csv(&report.trajectory), rows, Some(walk.config.as_str()), Some(walk.seed))
        }
    };
    let manifest = write_csv_artifact(path, &ctx.command, config, seed, &body)?;
    let value = json!({ "path": path, "rows": rows, "manifest": manifest });
    Ok((value, Status::Ok))
}

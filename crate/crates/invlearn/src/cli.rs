//! Command-line front end. Results go to stdout (or `--output`), failures
//! to stderr as JSON with exit code 2 (bad input) or 3 (solver status).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use invlearn_core::diet::{build_diet_instance, tables_from_instance, DietConfig};
use invlearn_core::{ForwardInstance, ObservationSet, SolverConfig};

use crate::diet_io::{bounds_csv, foods_csv, parse_bounds, parse_foods};
use crate::formats::{instance_json, observations_csv, parse_instance, parse_observations, to_json, FrontierDoc, SolutionDoc};
use crate::pipeline::{
    parse_percentiles, run_frontier, run_infer_cost, run_solve, run_stats, run_validate, AggregationArg, Failure, MethodArg,
    ModeArg, NormArg, SolveParams,
};
use crate::report::diet_report;
use crate::service::{serve, AppState};
use crate::synthetic::synthetic_diet;

#[derive(Debug, Parser)]
#[command(name = "invlearn", version, about = "Inverse learning of linear programs from observed decisions")]
pub struct Cli {
    /// Largest number of subsets enumerated before switching to branch and bound.
    #[arg(long, global = true)]
    pub enum_budget: Option<u64>,
    /// Big-M used when the per-row bound LP fails.
    #[arg(long, global = true)]
    pub big_m_default: Option<f64>,
    /// Slack below which a constraint counts as tight.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance and report warnings.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(short, long, visible_alias = "out")]
        output: Option<PathBuf>,
    },
    /// Solve one inverse problem.
    Solve(SolveArgs),
    /// Solve for every p in a range.
    Sweep {
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value_t = 1)]
        p_min: usize,
        #[arg(long)]
        p_max: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Independent)]
        mode: ModeArg,
        /// Same as `--mode dependent`.
        #[arg(long, conflicts_with = "mode")]
        dependent: bool,
    },
    /// Infer a cost vector that makes a point optimal.
    InferCost {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        observations: PathBuf,
        /// Comma separated point.
        #[arg(long, conflicts_with = "solution", required_unless_present = "solution")]
        z: Option<String>,
        /// Solution JSON written by `solve`.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(short, long, visible_alias = "out")]
        output: Option<PathBuf>,
    },
    /// Percentiles of each observed variable.
    Stats {
        #[arg(long)]
        observations: PathBuf,
        /// Match columns to this instance's variables.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value = "10,25,50,75,90")]
        percentiles: String,
        #[arg(short, long, visible_alias = "out")]
        output: Option<PathBuf>,
    },
    /// Diet problems built from food and bound tables.
    #[command(subcommand)]
    Diet(DietCommand),
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = "INVERSE_LEARN_PORT", default_value_t = 8080)]
        port: u16,
        /// Store file loaded at start and written at shutdown.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub observations: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Il)]
    pub method: MethodArg,
    #[arg(long)]
    pub p: Option<usize>,
    /// Relevant constraint for `bil`.
    #[arg(long)]
    pub constraint: Option<String>,
    #[arg(long, value_enum, default_value_t = NormArg::L1)]
    pub norm: NormArg,
    #[arg(long, visible_alias = "agg", value_enum, default_value_t = AggregationArg::Sum)]
    pub aggregation: AggregationArg,
    #[arg(long)]
    pub omega1: Option<f64>,
    #[arg(long)]
    pub omega2: Option<f64>,
    /// Comma separated names replacing the instance's preferred flags.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub preferred: Option<Vec<String>>,
    #[arg(short, long, visible_alias = "out")]
    pub output: Option<PathBuf>,
}

impl SolveArgs {
    fn params(&self) -> SolveParams {
        SolveParams {
            method: self.method,
            p: self.p,
            constraint: self.constraint.clone(),
            norm: self.norm,
            aggregation: self.aggregation,
            omega1: self.omega1,
            omega2: self.omega2,
            preferred: self.preferred.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum DietCommand {
    /// Build an instance from food and bound tables.
    Build {
        #[arg(long)]
        foods: PathBuf,
        #[arg(long)]
        bounds: PathBuf,
        #[arg(long, default_value_t = DietConfig::default().serving_cap)]
        serving_cap: f64,
        #[arg(short, long, visible_alias = "out")]
        output: Option<PathBuf>,
    },
    /// Tables and a chart for a diet frontier.
    Report {
        /// Instance written by `diet build`.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        observations: PathBuf,
        /// Frontier JSON written by `sweep`.
        #[arg(long)]
        frontier: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Write a generated diet data set.
    Synth {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 38)]
        foods: usize,
        #[arg(long, default_value_t = 25)]
        observations: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

impl Cli {
    pub fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(b) = self.enum_budget {
            cfg.enum_budget = b;
        }
        if let Some(m) = self.big_m_default {
            cfg.big_m_default = m;
        }
        if let Some(t) = self.tolerance {
            cfg.tight_tol = t;
        }
        cfg
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<ForwardInstance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn load_observations(path: &Path, inst: &ForwardInstance) -> Result<ObservationSet, Failure> {
    Ok(parse_observations(&read(path)?, Some(inst.variables()))?.1)
}

fn parse_point(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Failure::invalid(format!("bad coordinate `{s}`"))))
        .collect()
}

/// Output and destination of a finished command.
pub struct Output {
    pub text: String,
    pub path: Option<PathBuf>,
}

fn out(text: String, path: &Option<PathBuf>) -> Output {
    Output { text, path: path.clone() }
}

/// Runs every command except `serve`.
pub fn execute(cli: &Cli) -> Result<Output, Failure> {
    let cfg = cli.config();
    match &cli.command {
        Command::Validate { instance, output } => {
            let inst = load_instance(instance)?;
            Ok(out(to_json(&run_validate(&inst, &cfg)?), output))
        }
        Command::Solve(a) => {
            let inst = load_instance(&a.instance)?;
            let obs = load_observations(&a.observations, &inst)?;
            Ok(out(to_json(&run_solve(&inst, &obs, &a.params(), &cfg)?), &a.output))
        }
        Command::Sweep { solve, p_min, p_max, mode, dependent } => {
            let mode = if *dependent { &ModeArg::Dependent } else { mode };
            let inst = load_instance(&solve.instance)?;
            let obs = load_observations(&solve.observations, &inst)?;
            let doc = run_frontier(&inst, &obs, &solve.params(), *p_min, *p_max, *mode, &cfg)?;
            Ok(out(to_json(&doc), &solve.output))
        }
        Command::InferCost { instance, observations, z, solution, output } => {
            let inst = load_instance(instance)?;
            let obs = load_observations(observations, &inst)?;
            let z = match (z, solution) {
                (Some(z), _) => parse_point(z)?,
                (None, Some(path)) => {
                    let doc: SolutionDoc =
                        serde_json::from_str(&read(path)?).map_err(|e| Failure::invalid(format!("solution JSON: {e}")))?;
                    doc.z
                }
                (None, None) => return Err(Failure::invalid("give --z or --solution")),
            };
            Ok(out(to_json(&run_infer_cost(&inst, &obs, &z, &cfg)?), output))
        }
        Command::Stats { observations, instance, percentiles, output } => {
            let vars = match instance {
                Some(p) => Some(load_instance(p)?.variables().to_vec()),
                None => None,
            };
            let (names, obs) = parse_observations(&read(observations)?, vars.as_deref())?;
            Ok(out(to_json(&run_stats(&names, &obs, &parse_percentiles(percentiles)?)?), output))
        }
        Command::Diet(DietCommand::Build { foods, bounds, serving_cap, output }) => {
            let f = parse_foods(&read(foods)?)?;
            let b = parse_bounds(&read(bounds)?)?;
            let inst = build_diet_instance(&f, &b, &DietConfig { serving_cap: *serving_cap })
                .map_err(|e| Failure::invalid(e.to_string()))?;
            Ok(out(instance_json(&inst), output))
        }
        Command::Diet(DietCommand::Report { instance, observations, frontier, out_dir }) => {
            let inst = load_instance(instance)?;
            let obs = load_observations(observations, &inst)?;
            let (f, b, _) = tables_from_instance(&inst).map_err(|e| Failure::invalid(e.to_string()))?;
            let doc: FrontierDoc =
                serde_json::from_str(&read(frontier)?).map_err(|e| Failure::invalid(format!("frontier JSON: {e}")))?;
            let rep = diet_report(&inst, &f, &b, &obs, &doc)?;
            rep.write_to(out_dir).map_err(|e| Failure::Internal(e.to_string()))?;
            Ok(Output { text: to_json(&rep.metadata), path: None })
        }
        Command::Diet(DietCommand::Synth { seed, foods, observations, out_dir }) => {
            let d = synthetic_diet(*seed, *foods, *observations);
            std::fs::create_dir_all(out_dir).map_err(|e| Failure::Internal(e.to_string()))?;
            write(&out_dir.join("foods.csv"), &foods_csv(&d.foods))?;
            write(&out_dir.join("bounds.csv"), &bounds_csv(&d.bounds))?;
            write(&out_dir.join("observations.csv"), &observations_csv(d.foods.foods(), &d.observations))?;
            write(&out_dir.join("instance.json"), &instance_json(&d.instance))?;
            Ok(Output { text: format!("wrote {}\n", out_dir.display()), path: None })
        }
        Command::Serve { .. } => Err(Failure::invalid("serve is not a batch command")),
    }
}

fn report_failure(f: &Failure) -> i32 {
    eprint!("{}", to_json(&f.doc()));
    f.exit_code()
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    if let Command::Serve { host, port, snapshot } = &cli.command {
        let addr = match format!("{host}:{port}").parse() {
            Ok(a) => a,
            Err(e) => return report_failure(&Failure::invalid(format!("bad address: {e}"))),
        };
        let state = match snapshot {
            Some(p) => match AppState::with_snapshot(cli.config(), p.clone()) {
                Ok(s) => s,
                Err(f) => return report_failure(&f),
            },
            None => AppState::new(cli.config()),
        };
        let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().expect("tokio runtime");
        return match rt.block_on(serve(addr, Arc::new(state))) {
            Ok(()) => 0,
            Err(e) => report_failure(&Failure::Internal(e.to_string())),
        };
    }
    match execute(&cli) {
        Ok(o) => match &o.path {
            Some(p) => match write(p, &o.text) {
                Ok(()) => 0,
                Err(f) => report_failure(&f),
            },
            None => {
                print!("{}", o.text);
                0
            }
        },
        Err(f) => report_failure(&f),
    }
}

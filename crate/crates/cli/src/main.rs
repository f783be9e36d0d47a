use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nilrigid::dynamics::{summarize, trajectory_csv};
use nilrigid::gallery::Example;
use nilrigid::io::{generators_to_json, torus_matrices_to_json};
use nilrigid::report::{self, AnalysisOptions, AnalysisRequest, DynamicsOptions, Format, Mode};
use nilrigid::rigidity::{Budgets, GeneratorSet};

#[derive(Parser)]
#[command(name = "nilrigid", version, about = "Rigidity verdicts for affine actions on nilmanifolds and tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a graph and generator file.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Annotate the report with random-walk evidence.
        #[arg(long)]
        dynamics: bool,
    },
    /// Analyze a built-in example: heisenberg, complete:n, star:n, torus-f2.
    Examples {
        name: String,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        dynamics: bool,
        /// Also write the example's graph and generator files to this directory.
        #[arg(long, value_name = "DIR")]
        emit_inputs: Option<PathBuf>,
    },
    /// Random-walk trajectory, Lyapunov exponents and near-invariance scores.
    Dynamics {
        /// Use a built-in example instead of input files.
        #[arg(long, conflicts_with_all = ["graph", "generators"])]
        example: Option<String>,
        #[command(flatten)]
        input: OptionalInputArgs,
        #[command(flatten)]
        walk: WalkArgs,
        /// Write trajectory.csv and summary.json here; otherwise print the summary.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Nilmanifold,
    Torus,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long, value_enum, default_value = "nilmanifold", env = "NILRIGID_MODE")]
    mode: ModeArg,
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    generators: PathBuf,
}

#[derive(Args)]
struct OptionalInputArgs {
    #[arg(long, value_enum, default_value = "nilmanifold", env = "NILRIGID_MODE")]
    mode: ModeArg,
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    generators: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, env = "NILRIGID_ASSUME_ZARISKI_DENSE")]
    assume_zariski_dense: bool,
    #[arg(long, default_value_t = 8, env = "NILRIGID_MAX_WORD_LENGTH")]
    max_word_length: usize,
    #[arg(long, default_value_t = 10_000, env = "NILRIGID_ORBIT_BOUND")]
    orbit_bound: usize,
    #[arg(long, default_value_t = 0.05, env = "NILRIGID_GAP_TOL")]
    gap_tol: f64,
    #[arg(long, default_value_t = 4096, env = "NILRIGID_MAX_WORDS")]
    max_words: usize,
    #[arg(long, value_enum, default_value = "json", env = "NILRIGID_FORMAT")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(flatten)]
    walk: WalkArgs,
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long, default_value_t = 42, env = "NILRIGID_SEED")]
    seed: u64,
    #[arg(long, default_value_t = 100_000, env = "NILRIGID_STEPS")]
    steps: usize,
    #[arg(long, default_value_t = 100, env = "NILRIGID_BURN_IN")]
    burn_in: usize,
    #[arg(long, default_value_t = nilrigid::dynamics::DEFAULT_RESOLUTION, env = "NILRIGID_RESOLUTION")]
    resolution: usize,
}

impl WalkArgs {
    fn options(&self) -> DynamicsOptions {
        DynamicsOptions { steps: self.steps, seed: self.seed, burn_in: self.burn_in, resolution: self.resolution }
    }
}

impl CommonArgs {
    fn options(&self, dynamics: bool) -> AnalysisOptions {
        AnalysisOptions {
            assume_zariski_dense: self.assume_zariski_dense,
            budgets: Budgets {
                max_word_length: self.max_word_length,
                orbit_bound: self.orbit_bound,
                gap_tol: self.gap_tol,
                max_words: self.max_words,
            },
            dynamics: dynamics.then(|| self.walk.options()),
        }
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Nilmanifold => Mode::Nilmanifold,
        ModeArg::Torus => Mode::Torus,
    }
}

/// Writes through a sibling temporary file so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            std::io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_inputs(ex: Example, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let gs = ex.build()?;
    match gs.algebra() {
        Some(alg) => {
            write_atomic(&dir.join("graph.txt"), &alg.graph().render())?;
            write_atomic(&dir.join("generators.json"), &(generators_to_json(gs.affine()) + "\n"))
        }
        None => write_atomic(&dir.join("generators.json"), &(torus_matrices_to_json(gs.matrices()) + "\n")),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { input, common, dynamics } => {
            let req = AnalysisRequest {
                mode: mode(input.mode),
                graph: input.graph,
                generators: input.generators,
                options: common.options(dynamics),
            };
            let r = report::analyze(&req)?;
            emit(common.output.as_deref(), &r.render(common.format()))
        }
        Command::Examples { name, common, dynamics, emit_inputs: dir } => {
            let ex = Example::parse(&name)?;
            if let Some(dir) = dir {
                emit_inputs(ex, &dir)?;
            }
            let r = report::analyze_example(ex, &common.options(dynamics))?;
            emit(common.output.as_deref(), &r.render(common.format()))
        }
        Command::Dynamics { example, input, walk, out_dir } => {
            let gs: GeneratorSet = match (example, input.generators) {
                (Some(name), _) => Example::parse(&name)?.build()?,
                (None, Some(generators)) => report::load(&AnalysisRequest {
                    mode: mode(input.mode),
                    graph: input.graph,
                    generators,
                    options: AnalysisOptions::default(),
                })?,
                (None, None) => anyhow::bail!("give --example or --generators"),
            };
            let opts = walk.options();
            let (summary, traj) = summarize(gs.matrices(), &opts.walk(), opts.resolution)?;
            let json = serde_json::to_string_pretty(&summary)? + "\n";
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    write_atomic(&dir.join("trajectory.csv"), &trajectory_csv(&traj))?;
                    write_atomic(&dir.join("summary.json"), &json)
                }
                None => emit(None, &json),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

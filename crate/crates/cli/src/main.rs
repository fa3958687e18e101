use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use discrete_pw::{LatticePoint, Window};
use dpw_cli::{run, CliError, Command, Exit, ExperimentConfig, FSpec, LambdaSpec, Overrides};

const TABLES_HELP: &str = "\
CSV tables (floats printed with 17 significant digits):
  synth        grid: m, n, re, im
  analyze      spectrum: j, t, re, im
  kernel       kernel: d, quadrature_re, quadrature_im, grid_re, grid_im, closed_form
  project      projected: m, input_re, input_im, re, im
  sample       samples: m, re, im
  reconstruct  convergence: iteration, residual, ratio
               sweep: delta, sufficient, necessary, converged, iterations,
                      measured_ratio, bound_ratio, final_error, relative_error
  density      density: r, density
  verify       verify: name, lhs, bound, ok, guaranteed

Exit status: 0 success, 1 a guaranteed check failed, 2 configuration error,
3 numerical error (pole, no convergence under the sufficient condition).";

#[derive(Parser)]
#[command(name = "dpw", version, about = "Discrete Paley-Wiener experiments", after_help = TABLES_HELP)]
struct Cli {
    /// JSON experiment config; flags override its keys
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write <name>.json / <name>.csv here instead of printing
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON reports
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV tables
    #[arg(long, global = true)]
    csv: bool,

    #[arg(long, global = true)]
    name: Option<String>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Torus grid size L
    #[arg(long = "grid", global = true)]
    l: Option<usize>,
    /// m_min,m_max,n_min,n_max
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<Window>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long = "function", global = true, value_enum)]
    function: Option<FunctionKind>,
    #[arg(long, global = true, value_enum)]
    lambda: Option<LambdaKind>,
    #[arg(long, global = true)]
    delta_e: Option<i64>,
    #[arg(long, global = true)]
    delta_o: Option<i64>,
    /// Comma-separated report and table names to keep
    #[arg(long, global = true, value_delimiter = ',')]
    outputs: Option<Vec<String>>,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionKind {
    Bump,
    RandomBump,
    Indicator,
}

#[derive(Clone, Copy, ValueEnum)]
enum LambdaKind {
    Full,
    TwoProgression,
    RandomGaps,
}

#[derive(Subcommand)]
enum Sub {
    /// Synthesize F on the window and check the holomorphicity residual
    Synth,
    /// Recover the spectrum from F(·,0)
    Analyze,
    /// Reproducing kernel along height 0 against its closed form
    Kernel {
        /// Kernel centre m,n
        #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_point)]
        center: LatticePoint,
        #[arg(long, default_value_t = 32)]
        radius: i64,
    },
    /// Project F(·,0) plus seeded noise back onto the band
    Project {
        /// Noise amplitude relative to max |F|
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
    },
    /// Sample F(·,0) on Λ
    Sample,
    /// Iterative reconstruction from samples on Λ
    Reconstruct {
        /// Also sweep δ_e = δ_o over these gaps
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<i64>,
    },
    /// Run every checker and report an aggregate
    Verify,
    /// Lower density of Λ against 2α/π
    Density {
        #[arg(long)]
        r_max: Option<i64>,
    },
}

fn parse_ints<const N: usize>(s: &str) -> Result<[i64; N], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| format!("expected {N} comma-separated integers"))
}

fn parse_window(s: &str) -> Result<Window, String> {
    let [a, b, c, d] = parse_ints::<4>(s)?;
    Window::new(a, b, c, d).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<LatticePoint, String> {
    let [m, n] = parse_ints::<2>(s)?;
    Ok(LatticePoint::new(m, n))
}

impl Cli {
    fn overrides(&self) -> Overrides {
        let f_spec = self.function.map(|k| match k {
            FunctionKind::Bump => FSpec::Bump {
                bumps: Vec::new(),
                random: false,
            },
            FunctionKind::RandomBump => FSpec::Bump {
                bumps: Vec::new(),
                random: true,
            },
            FunctionKind::Indicator => FSpec::Indicator,
        });
        let (de, dodd) = (self.delta_e.unwrap_or(4), self.delta_o.unwrap_or(4));
        let lambda_spec = self.lambda.map(|k| match k {
            LambdaKind::Full => LambdaSpec::Full,
            LambdaKind::TwoProgression => LambdaSpec::TwoProgression {
                delta_e: de,
                delta_o: dodd,
            },
            LambdaKind::RandomGaps => LambdaSpec::RandomGaps {
                delta_e: de,
                delta_o: dodd,
                seed: None,
            },
        });
        Overrides {
            name: self.name.clone(),
            alpha: self.alpha,
            l: self.l,
            window: self.window,
            seed: self.seed,
            tol: self.tol,
            max_iter: self.max_iter,
            f_spec,
            lambda_spec,
            delta_e: self.delta_e,
            delta_o: self.delta_o,
            outputs: self.outputs.clone(),
        }
    }

    fn command(&self) -> Command {
        match &self.command {
            Sub::Synth => Command::Synth,
            Sub::Analyze => Command::Analyze,
            Sub::Kernel { center, radius } => Command::Kernel {
                center: *center,
                radius: *radius,
            },
            Sub::Project { noise } => Command::Project { noise: *noise },
            Sub::Sample => Command::Sample,
            Sub::Reconstruct { sweep } => Command::Reconstruct {
                sweep: sweep.clone(),
            },
            Sub::Verify => Command::Verify,
            Sub::Density { r_max } => Command::Density { r_max: *r_max },
        }
    }
}

fn execute(cli: &Cli) -> Result<Exit, CliError> {
    let cfg = ExperimentConfig::resolve(cli.config.as_deref(), cli.overrides())?;
    let artifacts = run(&cfg, &cli.command())?;
    match &cli.out {
        Some(dir) => {
            let both = !cli.json && !cli.csv;
            for path in artifacts.write_dir(dir, cli.json || both, cli.csv || both)? {
                eprintln!("wrote {path}");
            }
        }
        None => {
            let json = cli.json || !cli.csv;
            artifacts.print(&mut std::io::stdout().lock(), json, cli.csv)?;
        }
    }
    if artifacts.failed_checks.is_empty() {
        Ok(Exit::Success)
    } else {
        eprintln!(
            "guaranteed checks failed: {}",
            artifacts.failed_checks.join(", ")
        );
        Ok(Exit::CheckFailed)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exit = execute(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit()
    });
    ExitCode::from(exit as u8)
}

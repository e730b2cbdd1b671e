use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use couplefv::experiment::{
    self, convergence_study, convergence_table, parse_config, run_experiment, ExperimentConfig, CONFIG_KEYS,
};
use couplefv::NumericalFlux;

/// Well-balanced finite volume solver for coupled scalar conservation laws.
#[derive(Parser)]
#[command(name = "couplefv", version, after_help = CONFIG_KEYS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    #[command(after_help = CONFIG_KEYS)]
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named preset: resonance-smooth, resonance-shock, state-coupling,
    /// decoupled-burgers or well-balanced.
    #[command(allow_negative_numbers = true)]
    Preset {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long)]
        tend: Option<f64>,
        /// godunov, engquist-osher or rusanov.
        #[arg(long)]
        flux: Option<NumericalFlux>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// L1 errors of a preset against a fine reference run.
    Converge {
        #[arg(long)]
        preset: String,
        #[arg(long, value_delimiter = ',', default_value = "125,250,500,1000")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 4000)]
        n_ref: usize,
        /// Also write `convergence.csv` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(config: ExperimentConfig) -> couplefv::Result<ExitCode> {
    let outcome = run_experiment(&config)?;
    print!("{}", outcome.summary(&config));
    println!("output_dir = {}", config.output_dir.display());
    Ok(if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => std::fs::read_to_string(&config)
            .map_err(couplefv::Error::from)
            .and_then(|text| parse_config(&text))
            .and_then(|mut c| {
                if let Some(out) = out {
                    c.output_dir = out;
                }
                execute(c)
            }),
        Command::Preset {
            name,
            n,
            eta,
            zeta,
            cfl,
            tend,
            flux,
            out,
        } => experiment::preset(&name).and_then(|mut c| {
            c.n = n.unwrap_or(c.n);
            c.eta = eta.unwrap_or(c.eta);
            c.zeta = zeta.unwrap_or(c.zeta);
            c.cfl_number = cfl.unwrap_or(c.cfl_number);
            if let Some(t) = tend {
                c.t_end = t;
                c.snapshot_times.clear();
            }
            c.flux_scheme = flux.unwrap_or(c.flux_scheme);
            c.output_dir = out.unwrap_or_else(|| PathBuf::from("out").join(&name));
            c.validate()?;
            execute(c)
        }),
        Command::Converge {
            preset,
            n_list,
            n_ref,
            out,
        } => experiment::preset(&preset).and_then(|c| {
            let rows = convergence_study(&c, &n_list, n_ref)?;
            let table = convergence_table(&rows);
            print!("{table}");
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("convergence.csv"), &table)?;
            }
            Ok(ExitCode::SUCCESS)
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

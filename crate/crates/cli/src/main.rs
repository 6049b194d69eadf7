use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use trotter_lab::kato::{validate, HalfPlaneGrid, KatoFunction};
use trotter_lab::C64;
use trotter_lab_cli::config::load_config;
use trotter_lab_cli::instance::gen_random_instance;
use trotter_lab_cli::runner::{run_scenario, RunError};
use trotter_lab_cli::scenario::list_scenarios;

/// Numerical laboratory for arithmetic-mean product formulas.
///
/// Exit codes: 0 success, 1 invariant violation or run failure,
/// 2 configuration error.
#[derive(Parser)]
#[command(name = "lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiments described by a JSON config file.
    Run {
        /// Path to the config; must name a scenario, every other field
        /// inherits that scenario's default.
        config: PathBuf,
        /// Override a config leaf by dotted path, e.g. --set n_grid.k_hi=14
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
    /// List the registered scenarios.
    List,
    /// Generate a random instance file.
    Gen {
        #[arg(long)]
        seed: u64,
        /// Ambient and subspace dimensions as d,ka,kb
        #[arg(long)]
        dims: String,
        /// Upper bound of the operator spectra
        #[arg(long, default_value_t = 2.0)]
        bound: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate an admissible function by name (exp, res, res^k, or the
    /// cos counterexample).
    ValidateKato { name: String },
}

fn main() -> ExitCode {
    init_thread_pool();
    match Cli::parse().command {
        Command::Run { config, set } => cmd_run(&config, &set),
        Command::List => {
            for s in list_scenarios() {
                println!("{:<24} {}", s.name, s.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Gen {
            seed,
            dims,
            bound,
            out,
        } => cmd_gen(seed, &dims, bound, &out),
        Command::ValidateKato { name } => cmd_validate_kato(&name),
    }
}

/// LAB_THREADS caps the rayon worker count (parallel feature only).
fn init_thread_pool() {
    #[cfg(feature = "parallel")]
    if let Ok(v) = std::env::var("LAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn cmd_run(config: &PathBuf, set: &[String]) -> ExitCode {
    let cfg = match load_config(config, set) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    match run_scenario(&cfg) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", outcome.output_dir.join(f).display());
            }
            if outcome.invariants_ok() {
                println!("invariants: ok");
                ExitCode::SUCCESS
            } else {
                for v in &outcome.invariant_violations {
                    eprintln!("invariant violation: {v}");
                }
                ExitCode::from(1)
            }
        }
        Err(RunError::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("run failed: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_gen(seed: u64, dims: &str, bound: f64, out: &PathBuf) -> ExitCode {
    let parts: Vec<&str> = dims.split(',').collect();
    let parsed: Option<(usize, usize, usize)> = match parts.as_slice() {
        [d, ka, kb] => match (d.parse(), ka.parse(), kb.parse()) {
            (Ok(d), Ok(ka), Ok(kb)) => Some((d, ka, kb)),
            _ => None,
        },
        _ => None,
    };
    let Some(dims) = parsed else {
        eprintln!("config error: --dims expects d,ka,kb (got {dims:?})");
        return ExitCode::from(2);
    };
    if bound <= 0.0 {
        eprintln!("config error: --bound must be positive");
        return ExitCode::from(2);
    }
    let instance = match gen_random_instance(seed, dims, bound, 2) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let wire = match trotter_lab::io::InstancePairWire::from_pair(&instance.a, &instance.b) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("run failed: {e}");
            return ExitCode::from(1);
        }
    };
    let text = serde_json::to_string_pretty(&wire).expect("instance serializes") + "\n";
    if let Err(e) = std::fs::write(out, text) {
        eprintln!("run failed: cannot write {}: {e}", out.display());
        return ExitCode::from(1);
    }
    println!("wrote {} (instance {})", out.display(), instance.id);
    ExitCode::SUCCESS
}

fn cmd_validate_kato(name: &str) -> ExitCode {
    let f = if name == "cos" {
        KatoFunction::new("cos", |z: C64| z.cos())
    } else {
        match trotter_lab::parse_kato_name(name) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("config error: {e}");
                return ExitCode::from(2);
            }
        }
    };
    let report = validate(&f, &HalfPlaneGrid::default());
    let mut doc = report.as_json();
    if let Some(obj) = doc.as_object_mut() {
        obj.insert("name".into(), serde_json::Value::String(f.name().into()));
    }
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

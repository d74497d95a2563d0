use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use raglab::lab::report::{emit_report, to_csv, to_json, DiscardStatus, Format};
use raglab::lab::{run_experiment, Config, EXPERIMENTS};

/// Run one experiment of the random algebraic geometry laboratory.
///
/// Exit status: 0 on success, 1 on errors, 2 when an invariant check
/// fails, 3 when too many replicates were discarded.
#[derive(Parser, Debug)]
#[command(name = "raglab", version, about)]
struct Cli {
    /// Experiment name.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(EXPERIMENTS))]
    experiment: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicates: Option<u64>,
    /// Degree (or first degree).
    #[arg(long)]
    d: Option<u64>,
    /// Second degree, for bivariate systems.
    #[arg(long)]
    d2: Option<u64>,
    /// Truncation degree.
    #[arg(long)]
    ell: Option<u64>,
    /// Icosphere subdivision level.
    #[arg(long)]
    level: Option<u64>,
    /// JSON object of parameters; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Include per-replicate values.
    #[arg(long)]
    raw: bool,
}

fn run(cli: Cli) -> raglab::Result<ExitCode> {
    let mut cfg = match &cli.config {
        Some(p) => Config::from_file(p)?,
        None => Config::new(),
    };
    let flags = [
        ("seed", cli.seed),
        ("replicates", cli.replicates),
        ("d", cli.d),
        ("d2", cli.d2),
        ("ell", cli.ell),
        ("level", cli.level),
    ];
    for (key, v) in flags {
        if let Some(v) = v {
            cfg.set(key, v);
        }
    }
    let rep = run_experiment(&cli.experiment, &cfg)?;
    match &cli.out {
        Some(path) => emit_report(&rep, cli.format, path, cli.raw)?,
        None => {
            let text = match cli.format {
                Format::Json => to_json(&rep, cli.raw)?,
                Format::Csv => to_csv(&rep, cli.raw)?,
            };
            println!("{text}");
        }
    }
    eprintln!(
        "{}: mean {} se {} ({} replicates, {} discarded) in {:.2}s",
        rep.experiment, rep.mean, rep.se, rep.replicates, rep.discarded, rep.wall_time
    );
    for (name, ok) in &rep.checks {
        eprintln!("  {} {name}", if *ok { "ok  " } else { "FAIL" });
    }
    Ok(if rep.discard_status == DiscardStatus::Fail {
        ExitCode::from(3)
    } else if !rep.checks_pass() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("raglab: {e}");
            ExitCode::from(1)
        }
    }
}

//! Library side of the `xxcrit` command-line tool.

pub mod args;
pub mod commands;
pub mod error;
pub mod sweep;
pub mod table;

use std::fs;
use std::io::Write;
use std::path::Path;

use args::{Cli, Command, Format, OutputArgs};
use commands::Report;
use error::{invalid, CliResult};

/// Applies `XXCRIT_THREADS` to the global rayon pool.
pub fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("XXCRIT_THREADS") else {
        return Ok(());
    };
    let n: usize = match v.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return invalid(format!("XXCRIT_THREADS must be a positive integer, got '{v}'")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| error::CliError::Validation(e.to_string()))
}

fn write_target(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| error::CliError::Io(format!("{}: {e}", p.display()))),
        None => Ok(std::io::stdout().lock().write_all(bytes)?),
    }
}

pub fn emit_report(report: &Report, output: &OutputArgs) -> CliResult<()> {
    let out = output.out.as_deref();
    match output.format {
        Format::Json => write_target(out, (serde_json::to_string_pretty(&report.json)? + "\n").as_bytes()),
        Format::Csv => {
            write_target(out, report.table.to_csv_string()?.as_bytes())?;
            if let (Some((suffix, doc)), Some(p)) = (&report.sidecar, out) {
                let side = p.with_extension(suffix);
                write_target(Some(&side), (serde_json::to_string_pretty(doc)? + "\n").as_bytes())?;
            }
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let (report, output) = match &cli.command {
        Command::Ground { chain, output } => (commands::state_summary(chain, 0.0)?, output),
        Command::Thermal { chain, temp, output } => {
            if !(*temp > 0.0) {
                return invalid("thermal needs --temp > 0; use ground for T = 0");
            }
            (commands::state_summary(chain, *temp)?, output)
        }
        Command::Correlators { chain, temp, r_max, output } => {
            (commands::correlator_report(chain, *temp, *r_max)?, output)
        }
        Command::Superfluid { chain, temp, theta, output } => (commands::superfluid(chain, *temp, *theta)?, output),
        Command::Witness { chain, temp, output } => (commands::witness(chain, *temp)?, output),
        Command::Profile { chain, temp, r_max, output } => (commands::profile(chain, *temp, *r_max)?, output),
        Command::Sweep(a) => (commands::sweep(a)?, &a.output),
        Command::Dim2 { j, j_perp, temp, beta, points, output } => {
            let beta = match (temp, beta) {
                (Some(t), _) if *t > 0.0 => Some(1.0 / t),
                (Some(t), _) if *t == 0.0 => None,
                (Some(t), _) => return invalid(format!("temperature must be non-negative, got {t}")),
                (None, b) => *b,
            };
            (commands::dim2(*j, *j_perp, beta, *points)?, output)
        }
        Command::Experiment(a) => (commands::experiment(a)?, &a.output),
        Command::Counterexamples { ghz_sizes, alpha, n_max, coherent_sites, output } => {
            (commands::counterexamples(ghz_sizes, *alpha, *n_max, *coherent_sites)?, output)
        }
        Command::Hardcore { n_sites, bh_sites, particles, u, n_max, output } => {
            (commands::hardcore(*n_sites, *bh_sites, *particles, *u, *n_max)?, output)
        }
        Command::Oracle { max_sites, mus, temps, r_max, output } => {
            (commands::oracle(*max_sites, mus, temps, *r_max)?, output)
        }
    };
    emit_report(&report, output)
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ucayley::survey::{default_families, run_survey};
use ucayley_cli::report::{render_json, write_atomic};
use ucayley_cli::{gallery, run, CliError, JobConfig};

/// Environment variable holding the worker thread count.
const THREADS_VAR: &str = "UCAYLEY_THREADS";

#[derive(Parser)]
#[command(name = "ucayley", version, about = "Spectra, structure and state transfer of U-unitary Cayley graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job described by a JSON config file.
    Analyze {
        config: PathBuf,
        /// Output directory; overrides the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overwrite a non-empty output directory.
        #[arg(long)]
        force: bool,
    },
    /// List the bundled example configs.
    Examples {
        /// Print the full config of each example.
        #[arg(long)]
        verbose: bool,
    },
    /// Run a bundled example by name.
    RunExample {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Look for prime graphs Γ(R, U) with a zero eigenvalue over the default instance families.
    Survey {
        /// Write the records as JSON to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| CliError::Validation {
        field: THREADS_VAR.into(),
        message: format!("expected a thread count, got {raw:?}"),
    })?;
    // Only fails if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run_job(config: &JobConfig, out: Option<PathBuf>, force: bool) -> Result<(), CliError> {
    let default = PathBuf::from("ucayley-out").join(config.name.as_deref().unwrap_or("job"));
    let dir = out.or_else(|| config.output.clone()).unwrap_or(default);
    let summary = run(config, &dir, force)?;
    for f in &summary.files {
        println!("{}", summary.out_dir.join(f).display());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Analyze { config, out, force } => {
            let text = std::fs::read_to_string(&config).map_err(|source| CliError::Io { path: config.clone(), source })?;
            run_job(&JobConfig::parse(&text)?, out, force)
        }
        Command::Examples { verbose } => {
            for e in gallery::entries() {
                if verbose {
                    println!("# {}\n{}", e.name, e.source.trim_end());
                } else {
                    println!("{:<22} {}", e.name, e.description());
                }
            }
            Ok(())
        }
        Command::RunExample { name, out, force } => run_job(&gallery::find(&name)?.config(), out, force),
        Command::Survey { out } => {
            let records = run_survey(&default_families());
            let text = render_json(&serde_json::to_value(&records).expect("records serialize"));
            match out {
                Some(path) => {
                    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
                    let name = path.file_name().and_then(|n| n.to_str()).ok_or_else(|| CliError::Validation {
                        field: "out".into(),
                        message: "expected a file path".into(),
                    })?;
                    write_atomic(dir, name, &text)
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Command-line driver: config loading, orchestration and artifact export.
//!
//! Each run writes a CSV table and a JSON [`RunRecord`] next to it
//! (`traj.csv` → `traj.record.json`). Exit codes: 0 success, 2 config or
//! schema error, 3 numerical failure, 4 invariant violation in `check-all`.

pub mod checks;
pub mod config;
pub mod record;
pub mod runners;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser};

pub use config::{RunConfig, Subcommand};
pub use record::{emit_report, CheckResult, Report, RunRecord, CSV_FORMAT_VERSION};
pub use runners::Table;

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 4;

/// Flags shared by every run subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct RunOptions {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV output path; the record is written beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for default-named artifacts (overrides `output.dir`).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub csv_path: PathBuf,
    pub record_path: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.record.subcommand == Subcommand::CheckAll && !self.record.all_passed() {
            EXIT_INVARIANT
        } else {
            EXIT_OK
        }
    }
}

fn sibling(csv: &Path, suffix: &str) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    csv.with_file_name(format!("{stem}.{suffix}"))
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn write_csv(path: &Path, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Loads the config, applies flag overrides and checks the scenario.
pub fn resolve_config(sub: Subcommand, opts: &RunOptions) -> Result<(RunConfig, PathBuf)> {
    let (mut cfg, base) = match &opts.config {
        Some(p) => (
            RunConfig::load(p)?,
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
        ),
        None => (RunConfig::default(), PathBuf::new()),
    };
    if let Some(s) = cfg.scenario {
        if s != sub {
            return Err(Error::Config(format!("config is for `{s}`, not `{sub}`")));
        }
    }
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    Ok((cfg, base))
}

/// Executes one subcommand and writes its artifacts.
pub fn run(sub: Subcommand, opts: &RunOptions) -> Result<RunOutcome> {
    let (cfg, base) = resolve_config(sub, opts)?;
    let csv_path = match (&opts.out, &opts.out_dir, &cfg.output.dir) {
        (Some(out), _, _) => out.clone(),
        (None, Some(dir), _) => dir.join(format!("{}.csv", sub.file_stem())),
        (None, None, Some(dir)) => base.join(dir).join(format!("{}.csv", sub.file_stem())),
        (None, None, None) => PathBuf::from(format!("{}.csv", sub.file_stem())),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start workers: {e}")))?;

    let mut record = RunRecord::new(sub, cfg.clone());
    let start = Instant::now();
    let table = pool.install(|| runners::execute(sub, &cfg, &base, &mut record))?;
    record.runtime.wall_clock_seconds = start.elapsed().as_secs_f64();
    record.runtime.workers = pool.current_num_threads();

    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_csv(&csv_path, &table)?;
    record.artifacts.push(file_name(&csv_path));
    for (suffix, text) in &table.sidecars {
        let p = sibling(&csv_path, suffix);
        std::fs::write(&p, text)?;
        record.artifacts.push(file_name(&p));
    }
    let record_path = sibling(&csv_path, "record.json");
    std::fs::write(&record_path, serde_json::to_string_pretty(&record)? + "\n")?;
    Ok(RunOutcome {
        record,
        csv_path,
        record_path,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "entropy-picture",
    version,
    about = "Entropy-picture dynamics toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Energy-picture trajectory.
    #[command(name = "evolve-h")]
    EvolveH(RunOptions),
    /// Entropy-picture trajectory in thermal time.
    #[command(name = "evolve-s")]
    EvolveS(RunOptions),
    /// Energy vs entropy picture on a matched clock.
    #[command(name = "compare-pictures")]
    ComparePictures(RunOptions),
    /// Trace potential of a lattice source.
    Gravity(RunOptions),
    /// Linear relaxation of macroscopic variables.
    Onsager(RunOptions),
    /// Gaussian thermodynamic fluctuations.
    Fluct(RunOptions),
    /// Area vs boundary action of a parametric patch.
    Stokes(RunOptions),
    /// Full invariant suite; exits 4 on any failure.
    #[command(name = "check-all")]
    CheckAll(RunOptions),
    /// Tabulates the checks of existing run records.
    Report {
        #[arg(required = true)]
        records: Vec<PathBuf>,
        /// Print JSON instead of the text table.
        #[arg(long)]
        json: bool,
    },
}

fn report(paths: &[PathBuf], json: bool) -> Result<()> {
    let mut records = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(p)?;
        records.push(
            serde_json::from_str::<RunRecord>(&text)
                .map_err(|e| Error::Config(format!("{}: not a run record: {e}", p.display())))?,
        );
    }
    let rep = emit_report(&records)?;
    if json {
        println!("{}", rep.to_json()?);
    } else {
        print!("{}", rep.text);
    }
    Ok(())
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (sub, opts) = match cli.command {
        Command::EvolveH(o) => (Subcommand::EvolveH, o),
        Command::EvolveS(o) => (Subcommand::EvolveS, o),
        Command::ComparePictures(o) => (Subcommand::ComparePictures, o),
        Command::Gravity(o) => (Subcommand::Gravity, o),
        Command::Onsager(o) => (Subcommand::Onsager, o),
        Command::Fluct(o) => (Subcommand::Fluct, o),
        Command::Stokes(o) => (Subcommand::Stokes, o),
        Command::CheckAll(o) => (Subcommand::CheckAll, o),
        Command::Report { records, json } => {
            return match report(&records, json) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            };
        }
    };
    match run(sub, &opts) {
        Ok(outcome) => {
            if sub == Subcommand::CheckAll {
                if let Ok(rep) = emit_report(std::slice::from_ref(&outcome.record)) {
                    print!("{}", rep.text);
                }
            }
            println!(
                "wrote {} and {}",
                outcome.csv_path.display(),
                outcome.record_path.display()
            );
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    main_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_names() {
        assert_eq!(
            sibling(Path::new("out/traj.csv"), "record.json"),
            PathBuf::from("out/traj.record.json")
        );
        assert_eq!(
            sibling(Path::new("a"), "record.json"),
            PathBuf::from("a.record.json")
        );
    }

    #[test]
    fn scenario_mismatch_is_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"scenario": "gravity"}"#).unwrap();
        let opts = RunOptions {
            config: Some(p),
            ..Default::default()
        };
        let err = resolve_config(Subcommand::Onsager, &opts).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let (cfg, _) = resolve_config(
            Subcommand::Gravity,
            &RunOptions {
                seed: Some(9),
                ..opts
            },
        )
        .unwrap();
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn bad_flag_exits_two() {
        assert_eq!(main_from(["entropy-picture", "evolve-h", "--bogus"]), 2);
        assert_eq!(main_from(["entropy-picture", "teleport"]), 2);
    }
}

//! Library-level driver: build a config in code, run a subcommand and read
//! back the record, exactly as the binary does.

use entropy_picture::cli::{emit_report, run, RunConfig, RunOptions, Subcommand};

fn main() -> entropy_picture::Result<()> {
    let dir = std::env::temp_dir().join("entropy-picture-example");
    let cfg = RunConfig::from_json(
        r#"{"scenario": "check-all", "seed": 7, "check_all": {"trials": 5, "dim": 8}}"#,
    )?;
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("check.json");
    std::fs::write(&path, serde_json::to_string_pretty(&cfg)?)?;

    let outcome = run(
        Subcommand::CheckAll,
        &RunOptions {
            config: Some(path),
            out_dir: Some(dir.clone()),
            ..Default::default()
        },
    )?;
    print!(
        "{}",
        emit_report(std::slice::from_ref(&outcome.record))?.text
    );
    println!(
        "artifacts in {}: {:?}",
        dir.display(),
        outcome.record.artifacts
    );
    println!("exit code would be {}", outcome.exit_code());
    Ok(())
}

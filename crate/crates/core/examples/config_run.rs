//! Loads a TOML configuration (a shipped one by default), applies overrides
//! and runs it through the same path as `strang-gpe run`.
//!
//! ```text
//! cargo run --example config_run -- configs/saddle.toml evolution.t_final=1
//! ```

use std::path::PathBuf;

use strang_gpe::cli::cmd_run;
use strang_gpe::io::{load_config, read_snapshot, read_timeseries};

fn main() -> strang_gpe::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/anisotropic_trap.toml"));
    let overrides: Vec<String> = args.collect();
    let mut cfg = load_config(&path, &overrides)?;
    cfg.output.directory = std::env::temp_dir().join("strang_gpe_config_run");

    let code = cmd_run(&cfg)?;
    println!("exit status {code}");

    let series = read_timeseries(&cfg.output.directory.join("timeseries.csv"))?;
    println!("{} diagnostics samples", series.len());
    for t in &cfg.evolution.snapshot_times {
        let snap = read_snapshot(&cfg.output.directory.join(format!("snapshot_t{t:.6}.gpe2")))?;
        println!("snapshot t = {t}: mass {:.12}", snap.mass()?);
    }
    Ok(())
}

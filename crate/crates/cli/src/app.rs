use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::commands::{execute, Invocation, RunOutput, VERSION};
use crate::config::{Command, Origin, RawConfig};
use crate::manifest::RunManifest;
use crate::output::sha256_hex;
use crate::sweep::SweepSpec;

#[derive(Debug, Parser)]
#[command(name = "chipnoise", version, about = "Magnetic noise and decoherence calculator for atom-chip wire traps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Magnetic noise tensor versus frequency or another swept key.
    Spectrum(RunArgs),
    /// Spin-flip, dephasing and heating rates.
    Rates(RunArgs),
    /// Master-equation coherence decay in scaled units.
    Decohere(RunArgs),
    /// Stochastic Gross–Pitaevskii ensemble in oscillator units.
    Gpe(RunArgs),
    /// Re-runs a manifest and checks that every output is byte-identical.
    Replay {
        manifest: PathBuf,
        /// Also write the regenerated files here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `key=value` override, applied after the config file.
    #[arg(long = "set", value_name = "K=V")]
    pub set: Vec<String>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub realizations: Option<u64>,
    /// `KEY:START:STOP:COUNT:{lin|log}`
    #[arg(long)]
    pub sweep: Option<String>,
}

/// Worker cap from `CHIPNOISE_THREADS`.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("CHIPNOISE_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| anyhow!("CHIPNOISE_THREADS must be a positive integer, got '{v}'"))?;
            if n == 0 {
                bail!("CHIPNOISE_THREADS must be at least 1");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

pub fn invocation(command: Command, args: &RunArgs) -> Result<Invocation> {
    let mut raw = match &args.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    for assignment in &args.set {
        raw.set(assignment)?;
    }
    if let Some(seed) = args.seed {
        raw.insert("seed", &seed.to_string(), Origin::Override)?;
    }
    if let Some(n) = args.realizations {
        raw.insert("gpe.n_realizations", &n.to_string(), Origin::Override)?;
    }
    let sweep = args.sweep.as_deref().map(str::parse::<SweepSpec>).transpose()?;
    Ok(Invocation { command, raw, sweep, json: args.json, threads: threads_from_env()? })
}

/// Whether a run produces files. A plain `rates` report only prints.
fn writes_files(inv: &Invocation) -> bool {
    !(inv.command == Command::Rates && inv.sweep.is_none() && !inv.json)
}

/// Runs, writes outputs and then the manifest into `out`.
pub fn run_to_dir(inv: &Invocation, out: &Path, argv: Vec<String>) -> Result<(RunOutput, Option<RunManifest>)> {
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let result = execute(inv)?;
    if !writes_files(inv) {
        return Ok((result, None));
    }
    result.outputs.write(out)?;
    let manifest = RunManifest {
        schema_version: crate::manifest::SCHEMA_VERSION,
        tool: "chipnoise".to_string(),
        tool_version: VERSION.to_string(),
        command: inv.command.name().to_string(),
        argv,
        config_echo: result.echo.clone(),
        derived: result.derived.clone(),
        sweep: inv.sweep.as_ref().map(|s| s.text.clone()),
        json: inv.json,
        seed: result.seed,
        started: started.to_rfc3339(),
        finished: chrono::Utc::now().to_rfc3339(),
        wall_time_s: clock.elapsed().as_secs_f64(),
        outputs: result.outputs.digests(),
    };
    manifest.write(out)?;
    Ok((result, Some(manifest)))
}

/// Rebuilds the invocation recorded in a manifest.
pub fn invocation_from_manifest(manifest: &RunManifest) -> Result<Invocation> {
    let command = Command::from_name(&manifest.command)?;
    let mut raw = RawConfig::default();
    for (k, v) in &manifest.config_echo {
        raw.insert(k, v, Origin::Manifest)?;
    }
    let sweep = manifest.sweep.as_deref().map(str::parse::<SweepSpec>).transpose()?;
    Ok(Invocation { command, raw, sweep, json: manifest.json, threads: threads_from_env()? })
}

/// Regenerates a manifest's outputs and compares digests. Returns the names
/// of files whose contents differ.
pub fn replay(manifest_path: &Path, out: Option<&Path>) -> Result<Vec<String>> {
    let manifest = RunManifest::read(manifest_path)?;
    let inv = invocation_from_manifest(&manifest)?;
    let result = execute(&inv).with_context(|| format!("replaying {}", manifest_path.display()))?;
    if let Some(dir) = out {
        result.outputs.write(dir)?;
    }
    let mut mismatched = Vec::new();
    for recorded in &manifest.outputs {
        match result.outputs.get(&recorded.path) {
            Some(bytes) if sha256_hex(bytes) == recorded.sha256 => {}
            _ => mismatched.push(recorded.path.clone()),
        }
    }
    if result.outputs.files.len() != manifest.outputs.len() {
        for (name, _) in &result.outputs.files {
            if !manifest.outputs.iter().any(|o| &o.path == name) {
                mismatched.push(name.clone());
            }
        }
    }
    Ok(mismatched)
}

/// Entry point shared by the binary and tests. Returns the exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli, argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn dispatch(cli: Cli, argv: Vec<String>) -> Result<()> {
    let (command, args) = match cli.command {
        CliCommand::Spectrum(a) => (Command::Spectrum, a),
        CliCommand::Rates(a) => (Command::Rates, a),
        CliCommand::Decohere(a) => (Command::Decohere, a),
        CliCommand::Gpe(a) => (Command::Gpe, a),
        CliCommand::Replay { manifest, out } => {
            let mismatched = replay(&manifest, out.as_deref())?;
            if mismatched.is_empty() {
                println!("replay: all outputs of {} reproduced byte for byte", manifest.display());
                return Ok(());
            }
            bail!("replay produced different outputs: {}", mismatched.join(", "));
        }
    };
    let inv = invocation(command, &args)?;
    let (result, manifest) = run_to_dir(&inv, &args.out, argv)?;
    print!("{}", result.text);
    if manifest.is_some() {
        println!("outputs and manifest written to {}", args.out.display());
    }
    Ok(())
}

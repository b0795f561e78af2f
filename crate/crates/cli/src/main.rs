use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ehcrn_cli::config::{load_scenario, LoadedConfig, ThresholdSpec};
use ehcrn_cli::output::{emit_csv, emit_json, emit_plot_script, format_g, SIG_DIGITS};
use ehcrn_cli::sweep::{run_sweep, SweepSpec};
use ehcrn_cli::validate::run_checks;
use ehcrn_cli::{CliError, Result};
use ehcrn_core::{run_simulation, SensingMode};

/// Packet-loss analysis and simulation for an energy-harvesting cognitive
/// radio user.
///
/// Set EHCRN_THREADS to fix the worker count; results do not depend on it.
#[derive(Parser)]
#[command(name = "ehcrn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form model for one scenario.
    Analyze {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the slot-level simulation for one scenario.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        slots: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        sensing: Option<Sensing>,
        #[arg(long)]
        replications: Option<u32>,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Sweep SNR (case 1), threshold (case 2) or the config's [sweep] table.
    Sweep {
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also write a gnuplot script next to the CSV.
        #[arg(long)]
        plots: bool,
    },
    /// Check the closed-form model against numeric oracles.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sensing {
    Event,
    Signal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Case {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Custom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("EHCRN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("EHCRN_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("cannot start {n} worker threads: {e}")))
}

fn numeric(e: ehcrn_core::Error) -> CliError {
    CliError::Numeric(e.to_string())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Analyze { config } => analyze(&load_scenario(config)?),
        Command::Simulate {
            config,
            slots,
            seed,
            sensing,
            replications,
            json,
        } => {
            let mut loaded = load_scenario(&config)?;
            let sim = &mut loaded.sim;
            if let Some(s) = slots {
                sim.slots = s;
            }
            if let Some(s) = seed {
                sim.seed = s;
            }
            if let Some(r) = replications {
                sim.replications = r;
            }
            if let Some(m) = sensing {
                sim.sensing_mode = match m {
                    Sensing::Event => SensingMode::Event,
                    Sensing::Signal => SensingMode::Signal,
                };
            }
            sim.validate(loaded.scenario.battery_levels())
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            simulate(&loaded, json)
        }
        Command::Sweep {
            case,
            config,
            out,
            format,
            plots,
        } => sweep(case, &load_scenario(&config)?, &out, format, plots),
        Command::Validate { config } => {
            let loaded = load_scenario(config)?;
            let checks = run_checks(&loaded.scenario)?;
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Numeric(format!("{failed} check(s) failed")));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn analyze(loaded: &LoadedConfig) -> Result<ExitCode> {
    let s = loaded.scenario.analyze().map_err(numeric)?;
    let g = |x: f64| format_g(x, SIG_DIGITS);
    println!("pi_idle,harvest_prob,threshold,pf,pd,delta,alpha,pi0,packet_loss");
    println!(
        "{},{},{},{},{},{},{},{},{}",
        g(s.pi_idle),
        g(s.harvest_prob),
        g(s.threshold),
        g(s.pf),
        g(s.pd),
        g(s.delta),
        g(s.alpha),
        g(s.pi0),
        g(s.packet_loss)
    );
    Ok(ExitCode::SUCCESS)
}

fn simulate(loaded: &LoadedConfig, json: bool) -> Result<ExitCode> {
    let analytic = loaded.scenario.analyze().map_err(numeric)?;
    let report = run_simulation(&loaded.scenario, &loaded.sim).map_err(numeric)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let write_err = |e: std::io::Error| CliError::Output(format!("stdout: {e}"));
    if json {
        let doc = serde_json::json!({ "analytic": analytic, "simulation": report });
        serde_json::to_writer_pretty(&mut out, &doc)
            .map_err(|e| CliError::Output(format!("JSON write failed: {e}")))?;
        writeln!(out).map_err(write_err)?;
    } else {
        let g = |x: f64| format_g(x, SIG_DIGITS);
        let rows = [
            ("packet_loss", analytic.packet_loss, report.packet_loss),
            ("outage", analytic.pi0, report.outage_occupancy),
            ("pf", analytic.pf, report.pf),
            ("pd", analytic.pd, report.pd),
            ("delta", analytic.delta, report.delta),
            ("pi_idle", analytic.pi_idle, report.pi_idle),
        ];
        writeln!(out, "quantity,analytic,simulated,ci95,trials").map_err(write_err)?;
        for (name, a, e) in rows {
            writeln!(out, "{name},{},{},{},{}", g(a), g(e.value), g(e.ci95), e.trials)
                .map_err(write_err)?;
        }
        log::info!(
            "{} replications x {} slots, seed {}",
            report.replications,
            report.slots_per_replication,
            report.seed
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(case: Case, loaded: &LoadedConfig, out: &Path, format: Format, plots: bool) -> Result<ExitCode> {
    let config_pf = match loaded.threshold {
        ThresholdSpec::TargetPf(p) => Some(p),
        _ => None,
    };
    let (spec, stem, title) = match case {
        Case::One => {
            let pf = loaded
                .sweep
                .as_ref()
                .and_then(|s| s.target_pf)
                .or(config_pf)
                .unwrap_or(0.01);
            (
                SweepSpec::case_one(loaded.scenario, loaded.sim, pf)?,
                "case1",
                format!("Packet loss vs primary SNR, P_f = {pf}"),
            )
        }
        Case::Two => (
            SweepSpec::case_two(loaded.scenario, loaded.sim)?,
            "case2",
            "Packet loss vs detection threshold".to_string(),
        ),
        Case::Custom => {
            let s = loaded.sweep.clone().ok_or_else(|| {
                CliError::Invalid("`--case custom` needs a [sweep] table in the config".into())
            })?;
            (
                SweepSpec::new(s.variable, s.grid, loaded.scenario, s.variants, loaded.sim, s.target_pf)?,
                "custom",
                "Packet loss sweep".to_string(),
            )
        }
    };
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let rows = run_sweep(&spec)?;

    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = out.join(format!("{stem}.{ext}"));
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Csv => emit_csv(&rows, &mut w)?,
        Format::Json => emit_json(&rows, &mut w)?,
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    println!("{}", path.display());

    if plots {
        // The plot script reads the CSV, so write one even for JSON output.
        let csv_name = format!("{stem}.csv");
        if format == Format::Json {
            let csv_path = out.join(&csv_name);
            let f = File::create(&csv_path).map_err(|e| CliError::io(&csv_path, e))?;
            emit_csv(&rows, BufWriter::new(f))?;
        }
        let labels: Vec<String> = spec.variants().iter().map(|v| v.label.clone()).collect();
        let script = emit_plot_script(spec.variable(), &labels, &csv_name, &title);
        let gp = out.join(format!("{stem}.gp"));
        std::fs::write(&gp, script).map_err(|e| CliError::io(&gp, e))?;
        println!("{}", gp.display());
    }
    Ok(ExitCode::SUCCESS)
}

//! Scenario files.
//!
//! TOML with one table per component. Unknown keys are rejected.
//!
//! ```toml
//! [spectrum]
//! q_idle = 0.5          # P(idle -> idle)
//! q_occupied = 0.7      # P(occupied -> occupied)
//!
//! [energy]
//! p_on = 0.7            # P(harvest -> harvest)
//! p_off = 0.5           # P(no harvest -> no harvest)
//!
//! [detector]
//! sensing_duration = 0.002
//! sampling_rate = 1e6
//! noise_power = 1.0
//! primary_snr_db = -15.0
//! target_pf = 0.01      # or threshold = ..., or normalized_threshold = ...
//!
//! [battery]
//! levels = 100
//!
//! [sim]
//! slot_duration = 0.1
//! slots = 1000000
//! replications = 4
//! seed = 1
//! ```

use std::path::Path;

use ehcrn_core::sim::{InitialBattery, InitialStates};
use ehcrn_core::{
    db_to_linear, threshold_for_target_pf, ChainState, DetectorConfig, Scenario, SensingMode,
    SimConfig, TwoStateChain,
};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::sweep::{SweepVariable, Variant};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    spectrum: SpectrumSection,
    energy: EnergySection,
    detector: DetectorSection,
    battery: BatterySection,
    sim: SimSection,
    sweep: Option<SweepSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumSection {
    q_idle: f64,
    q_occupied: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnergySection {
    p_on: f64,
    p_off: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectorSection {
    sensing_duration: f64,
    sampling_rate: f64,
    #[serde(default = "one")]
    noise_power: f64,
    primary_snr_db: f64,
    threshold: Option<f64>,
    normalized_threshold: Option<f64>,
    target_pf: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatterySection {
    levels: usize,
    unit_energy: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BatteryStart {
    Named(String),
    Level(usize),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimSection {
    slot_duration: f64,
    slots: Option<u64>,
    replications: Option<u32>,
    seed: Option<u64>,
    sensing: Option<SensingMode>,
    initial_battery: Option<BatteryStart>,
    initial_states: Option<String>,
    initial_spectrum: Option<String>,
    initial_energy: Option<String>,
    num_pu_channels: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    variable: SweepVariable,
    grid: Vec<f64>,
    target_pf: Option<f64>,
    #[serde(default, rename = "variant")]
    variants: Vec<VariantSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariantSection {
    label: String,
    q_idle: Option<f64>,
    q_occupied: Option<f64>,
    p_on: Option<f64>,
    p_off: Option<f64>,
}

/// How the detection threshold was given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdSpec {
    Absolute(f64),
    Normalized(f64),
    TargetPf(f64),
}

/// Custom sweep description from the optional `[sweep]` table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub target_pf: Option<f64>,
    pub variants: Vec<Variant>,
}

/// A validated configuration file.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub scenario: Scenario,
    pub sim: SimConfig,
    pub threshold: ThresholdSpec,
    pub sweep: Option<SweepConfig>,
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<LoadedConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
        path: path.to_owned(),
        message: format!("cannot read file: {e}"),
    })?;
    parse_scenario(&text).map_err(|message| CliError::Config {
        path: path.to_owned(),
        message,
    })
}

/// Parses and validates scenario text. Errors are human-readable and name the
/// offending table and field.
pub fn parse_scenario(text: &str) -> Result<LoadedConfig, String> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| e.to_string())?;
    build(file)
}

fn ctx<T>(section: &str, r: ehcrn_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("[{section}] {e}"))
}

fn build(file: ConfigFile) -> Result<LoadedConfig, String> {
    let spectrum = ctx(
        "spectrum",
        TwoStateChain::spectrum(file.spectrum.q_idle, file.spectrum.q_occupied),
    )?;
    let energy = ctx("energy", TwoStateChain::energy(file.energy.p_on, file.energy.p_off))?;

    let d = &file.detector;
    let threshold = match (d.threshold, d.normalized_threshold, d.target_pf) {
        (Some(t), None, None) => ThresholdSpec::Absolute(t),
        (None, Some(t), None) => ThresholdSpec::Normalized(t),
        (None, None, Some(p)) => ThresholdSpec::TargetPf(p),
        _ => {
            return Err(
                "[detector] give exactly one of `threshold`, `normalized_threshold`, `target_pf`"
                    .into(),
            )
        }
    };
    if !d.primary_snr_db.is_finite() {
        return Err("[detector] `primary_snr_db` must be finite".into());
    }
    let snr = db_to_linear(d.primary_snr_db);
    // Placeholder threshold; replaced below once N is known.
    let probe = ctx(
        "detector",
        DetectorConfig::new(d.sensing_duration, d.sampling_rate, d.noise_power, 1.0, snr),
    )?;
    let eps = resolve_threshold(threshold, &probe)?;
    let detector = ctx("detector", probe.with_threshold(eps))?;

    let s = &file.sim;
    let mut scenario = ctx(
        "sim",
        Scenario::new(spectrum, energy, detector, file.battery.levels, s.slot_duration),
    )
    .map_err(|e| {
        if file.battery.levels < 2 {
            format!("[battery] `levels` must be at least 2, got {}", file.battery.levels)
        } else {
            e
        }
    })?;
    if let Some(u) = file.battery.unit_energy {
        scenario = ctx("battery", scenario.with_unit_energy(u))?;
    }

    let defaults = SimConfig::default();
    let initial_battery = match &s.initial_battery {
        None => InitialBattery::Full,
        Some(BatteryStart::Named(n)) if n == "full" => InitialBattery::Full,
        Some(BatteryStart::Named(n)) => {
            return Err(format!(
                "[sim] `initial_battery` must be \"full\" or a level, got \"{n}\""
            ))
        }
        Some(BatteryStart::Level(l)) => InitialBattery::Level(*l),
    };
    let initial_states = match s.initial_states.as_deref().unwrap_or("steady") {
        "steady" => {
            if s.initial_spectrum.is_some() || s.initial_energy.is_some() {
                return Err(
                    "[sim] `initial_spectrum` / `initial_energy` need `initial_states = \"fixed\"`"
                        .into(),
                );
            }
            InitialStates::SteadyDraw
        }
        "fixed" => InitialStates::Fixed {
            spectrum: match s.initial_spectrum.as_deref().unwrap_or("idle") {
                "idle" => ChainState::A,
                "occupied" => ChainState::B,
                other => {
                    return Err(format!(
                        "[sim] `initial_spectrum` must be \"idle\" or \"occupied\", got \"{other}\""
                    ))
                }
            },
            energy: match s.initial_energy.as_deref().unwrap_or("off") {
                "on" => ChainState::A,
                "off" => ChainState::B,
                other => {
                    return Err(format!(
                        "[sim] `initial_energy` must be \"on\" or \"off\", got \"{other}\""
                    ))
                }
            },
        },
        other => {
            return Err(format!(
                "[sim] `initial_states` must be \"steady\" or \"fixed\", got \"{other}\""
            ))
        }
    };
    let sim = SimConfig {
        slots: s.slots.unwrap_or(defaults.slots),
        replications: s.replications.unwrap_or(defaults.replications),
        seed: s.seed.unwrap_or(defaults.seed),
        sensing_mode: s.sensing.unwrap_or_default(),
        initial_battery,
        initial_states,
        num_pu_channels: s.num_pu_channels.unwrap_or(1),
    };
    ctx("sim", sim.validate(scenario.battery_levels()))?;

    let sweep = file.sweep.map(build_sweep).transpose()?;

    Ok(LoadedConfig {
        scenario,
        sim,
        threshold,
        sweep,
    })
}

fn resolve_threshold(spec: ThresholdSpec, det: &DetectorConfig) -> Result<f64, String> {
    match spec {
        ThresholdSpec::Absolute(t) => Ok(t),
        ThresholdSpec::Normalized(t) => Ok(t * det.noise_power()),
        ThresholdSpec::TargetPf(p) => ctx("detector", threshold_for_target_pf(p, det)),
    }
}

fn build_sweep(s: SweepSection) -> Result<SweepConfig, String> {
    let mut variants = Vec::with_capacity(s.variants.len());
    for v in s.variants {
        let spectrum = match (v.q_idle, v.q_occupied) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => {
                return Err(format!(
                    "[sweep.variant] `{}`: give both `q_idle` and `q_occupied` or neither",
                    v.label
                ))
            }
        };
        let energy = match (v.p_on, v.p_off) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => {
                return Err(format!(
                    "[sweep.variant] `{}`: give both `p_on` and `p_off` or neither",
                    v.label
                ))
            }
        };
        variants.push(Variant {
            label: v.label,
            spectrum,
            energy,
        });
    }
    Ok(SweepConfig {
        variable: s.variable,
        grid: s.grid,
        target_pf: s.target_pf,
        variants,
    })
}

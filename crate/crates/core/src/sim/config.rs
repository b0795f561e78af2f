use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::kernels::ChainState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensingMode {
    /// One Bernoulli draw per slot with the analytic `P_f` / `P_d`.
    #[default]
    Event,
    /// Draw `N` complex Gaussian samples and threshold their mean power.
    Signal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum InitialBattery {
    #[default]
    Full,
    Level(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum InitialStates {
    /// Every chain starts from a draw of its stationary law.
    #[default]
    SteadyDraw,
    /// All spectrum channels start in `spectrum`, the harvester in `energy`.
    Fixed {
        spectrum: ChainState,
        energy: ChainState,
    },
}

/// Monte-Carlo controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub slots: u64,
    pub replications: u32,
    pub seed: u64,
    pub sensing_mode: SensingMode,
    pub initial_battery: InitialBattery,
    pub initial_states: InitialStates,
    pub num_pu_channels: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            slots: 1_000_000,
            replications: 4,
            seed: 1,
            sensing_mode: SensingMode::Event,
            initial_battery: InitialBattery::Full,
            initial_states: InitialStates::SteadyDraw,
            num_pu_channels: 1,
        }
    }
}

impl SimConfig {
    pub fn new(slots: u64, replications: u32, seed: u64) -> Self {
        Self {
            slots,
            replications,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self, battery_levels: usize) -> Result<()> {
        if self.slots == 0 {
            return Err(invalid("slots", "must be at least 1"));
        }
        if self.replications == 0 {
            return Err(invalid("replications", "must be at least 1"));
        }
        if self.num_pu_channels == 0 {
            return Err(invalid("num_pu_channels", "must be at least 1"));
        }
        if let InitialBattery::Level(l) = self.initial_battery {
            if l >= battery_levels {
                return Err(invalid(
                    "initial_battery",
                    format!("level {l} is outside 0..={}", battery_levels - 1),
                ));
            }
        }
        Ok(())
    }

    pub(crate) fn initial_level(&self, battery_levels: usize) -> usize {
        match self.initial_battery {
            InitialBattery::Full => battery_levels - 1,
            InitialBattery::Level(l) => l,
        }
    }
}

//! Slot-based Monte-Carlo simulation of the secondary user.

mod config;
mod engine;
mod report;
mod sensing;

pub use config::{InitialBattery, InitialStates, SensingMode, SimConfig};
pub use engine::{run_replication, run_simulation};
pub use report::{binomial_std_error, Estimate, SimReport, SlotCounters, Z95};
pub use sensing::{sense, sense_event, sense_signal, sensing_rate};

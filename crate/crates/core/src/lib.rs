//! Packet-loss analysis for an energy-harvesting secondary user in a
//! cognitive radio network.
//!
//! The secondary user senses one primary channel per slot with an energy
//! detector, transmits one packet when the channel looks idle and its battery
//! is non-empty, and harvests one energy unit in slots where its (out-of-band)
//! harvester is on. Packets are lost to non-access, to collisions after a
//! missed detection, and to energy outage.
//!
//! * [`kernels`]: Gaussian tail function, seeded substreams, two-state chains.
//! * [`analytic`]: closed-form detector, battery chain and packet-loss model.
//! * [`sim`]: slot-level Monte-Carlo counterpart with confidence intervals.
//!
//! ```
//! use ehcrn_core::{db_to_linear, threshold_for_target_pf, DetectorConfig, Scenario, TwoStateChain};
//!
//! let det = DetectorConfig::new(2e-3, 1e6, 1.0, 1.0, db_to_linear(-15.0))?;
//! let det = det.with_threshold(threshold_for_target_pf(0.01, &det)?)?;
//! let scenario = Scenario::new(
//!     TwoStateChain::spectrum(0.5, 0.7)?,
//!     TwoStateChain::energy(0.7, 0.5)?,
//!     det,
//!     100,
//!     0.1,
//! )?;
//! let loss = scenario.packet_loss_prob()?;
//! assert!(loss > 0.625 && loss < 1.0);
//! # Ok::<(), ehcrn_core::Error>(())
//! ```

pub mod analytic;
mod error;
pub mod kernels;
pub mod sim;

pub use analytic::{
    access_prob, battery_steady_state, battery_transition_matrix, db_to_linear, detection_prob,
    false_alarm_prob, linear_to_db, outage_prob, packet_loss_prob, steady_state_numeric,
    threshold_for_target_pf, AnalyticSummary, BatteryModel, DetectorConfig, Scenario,
};
pub use error::{Error, Result};
pub use kernels::{q_tail, q_tail_inverse, steady_state, step_chain, ChainState, RandomStream, TwoStateChain};
pub use nalgebra;
pub use sim::{
    run_replication, run_simulation, sense_event, sense_signal, Estimate, SensingMode, SimConfig,
    SimReport,
};

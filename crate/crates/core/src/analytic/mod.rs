//! Closed-form model: detector characteristics, access probability, the
//! battery chain and its stationary law, and the packet-loss probability.

mod battery;
mod detector;
mod scenario;
mod stationary;

pub use battery::{battery_steady_state, battery_transition_matrix, outage_prob, BatteryModel};
pub use detector::{
    db_to_linear, detection_prob, false_alarm_prob, linear_to_db, threshold_for_target_pf,
    DetectorConfig,
};
pub use scenario::{
    access_prob, access_prob_from, packet_loss_from, packet_loss_prob, AnalyticSummary, Scenario,
};
pub use stationary::steady_state_numeric;

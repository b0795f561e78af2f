//! Oracle-equivalence checks for one configured scenario.

use ehcrn_core::analytic::{access_prob_from, packet_loss_from};
use ehcrn_core::{q_tail, q_tail_inverse, steady_state_numeric, Scenario};

use crate::error::{CliError, Result};

/// Largest allowed gap between closed-form and numeric battery distributions.
pub const STATIONARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Runs every check. Only failures to evaluate the model are errors; a
/// check that evaluates but disagrees is reported with `passed == false`.
pub fn run_checks(scenario: &Scenario) -> Result<Vec<Check>> {
    let num = |e: ehcrn_core::Error| CliError::Numeric(e.to_string());
    let summary = scenario.analyze().map_err(num)?;
    let battery = scenario.battery_model().map_err(num)?;
    let mut checks = Vec::new();

    let closed = battery.steady_state();
    let numeric = steady_state_numeric(&battery.transition_matrix()).map_err(num)?;
    let gap = closed
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    checks.push(check(
        "battery stationary distribution",
        gap <= STATIONARY_TOL,
        format!("max |closed - numeric| = {gap:.3e} (limit {STATIONARY_TOL:.0e})"),
    ));

    let sum: f64 = closed.iter().sum();
    let min = closed.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(check(
        "battery distribution is a probability vector",
        (sum - 1.0).abs() <= 1e-12 && min >= 0.0,
        format!("sum - 1 = {:.3e}, min = {min:.3e}", sum - 1.0),
    ));

    let det = scenario.detector();
    let arg = (det.normalized_threshold() - 1.0) * (det.samples() as f64).sqrt();
    let round_trip = q_tail_inverse(summary.pf)
        .map(|x| (x - arg).abs() <= 1e-8 * arg.abs().max(1.0))
        .unwrap_or(summary.pf == 0.0 || summary.pf == 1.0);
    checks.push(check(
        "false-alarm inverse round trip",
        round_trip && (q_tail(arg) - summary.pf).abs() <= 1e-15,
        format!("P_f = {:.9}", summary.pf),
    ));

    checks.push(check(
        "detection dominates false alarm",
        summary.pd >= summary.pf,
        format!("P_d = {:.9}, P_f = {:.9}", summary.pd, summary.pf),
    ));

    let delta = access_prob_from(summary.pf, summary.pd, summary.pi_idle);
    checks.push(check(
        "access probability composition",
        (delta - summary.delta).abs() <= 1e-15,
        format!("delta = {:.9}", summary.delta),
    ));

    let loss = packet_loss_from(summary.pi0, summary.pf, summary.pi_idle);
    let floor = 1.0 - summary.pi_idle;
    checks.push(check(
        "packet loss bounds",
        (loss - summary.packet_loss).abs() <= 1e-15
            && summary.packet_loss >= floor - 1e-15
            && summary.packet_loss <= 1.0,
        format!(
            "P_L = {:.9} within [{floor:.9}, 1]",
            summary.packet_loss
        ),
    ));

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ehcrn_core::{db_to_linear, DetectorConfig, TwoStateChain};

    #[test]
    fn reference_scenario_passes() {
        let s = Scenario::new(
            TwoStateChain::spectrum(0.5, 0.7).unwrap(),
            TwoStateChain::energy(0.7, 0.5).unwrap(),
            DetectorConfig::new(2e-3, 1e6, 1.0, 1.05, db_to_linear(-15.0)).unwrap(),
            100,
            0.1,
        )
        .unwrap();
        let checks = run_checks(&s).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert!(checks[0].to_string().starts_with("PASS battery"));
    }
}

use serde::Serialize;

use super::battery::BatteryModel;
use super::detector::DetectorConfig;
use crate::error::{invalid, Result};
use crate::kernels::TwoStateChain;

/// Fully specified system: spectrum and energy chains, detector, battery size
/// and slot length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    spectrum: TwoStateChain,
    energy: TwoStateChain,
    detector: DetectorConfig,
    battery_levels: usize,
    slot_duration: f64,
    unit_energy: f64,
}

impl Scenario {
    pub fn new(
        spectrum: TwoStateChain,
        energy: TwoStateChain,
        detector: DetectorConfig,
        battery_levels: usize,
        slot_duration: f64,
    ) -> Result<Self> {
        if battery_levels < 2 {
            return Err(invalid(
                "battery_levels",
                format!("battery needs at least 2 levels, got {battery_levels}"),
            ));
        }
        if !(slot_duration.is_finite() && slot_duration > 0.0) {
            return Err(invalid("slot_duration", format!("must be > 0, got {slot_duration}")));
        }
        let tau = detector.sensing_duration();
        if tau > slot_duration {
            return Err(invalid(
                "sensing_duration",
                format!("sensing duration {tau} s exceeds the slot duration {slot_duration} s"),
            ));
        }
        if tau > slot_duration / 10.0 {
            log::warn!(
                "sensing duration {tau} s is more than a tenth of the slot ({slot_duration} s); sensing energy is still treated as zero"
            );
        }
        Ok(Self {
            spectrum,
            energy,
            detector,
            battery_levels,
            slot_duration,
            unit_energy: 1.0,
        })
    }

    pub fn spectrum(&self) -> &TwoStateChain {
        &self.spectrum
    }

    pub fn energy(&self) -> &TwoStateChain {
        &self.energy
    }

    pub fn detector(&self) -> &DetectorConfig {
        &self.detector
    }

    pub fn battery_levels(&self) -> usize {
        self.battery_levels
    }

    pub fn slot_duration(&self) -> f64 {
        self.slot_duration
    }

    pub fn unit_energy(&self) -> f64 {
        self.unit_energy
    }

    pub fn with_unit_energy(self, unit_energy: f64) -> Result<Self> {
        if !(unit_energy.is_finite() && unit_energy > 0.0) {
            return Err(invalid("unit_energy", format!("must be > 0, got {unit_energy}")));
        }
        Ok(Self { unit_energy, ..self })
    }

    pub fn with_spectrum(self, spectrum: TwoStateChain) -> Self {
        Self { spectrum, ..self }
    }

    pub fn with_energy(self, energy: TwoStateChain) -> Self {
        Self { energy, ..self }
    }

    pub fn with_detector(self, detector: DetectorConfig) -> Result<Self> {
        Self::new(
            self.spectrum,
            self.energy,
            detector,
            self.battery_levels,
            self.slot_duration,
        )?
        .with_unit_energy(self.unit_energy)
    }

    /// Stationary probability that the spectrum is idle.
    pub fn pi_idle(&self) -> f64 {
        self.spectrum.steady_state().0
    }

    /// Stationary probability that the harvester is on.
    pub fn harvest_prob(&self) -> f64 {
        self.energy.steady_state().0
    }

    pub fn access_prob(&self) -> f64 {
        access_prob(&self.spectrum, &self.detector)
    }

    pub fn battery_model(&self) -> Result<BatteryModel> {
        BatteryModel::new(self.battery_levels, self.access_prob(), self.harvest_prob())?
            .with_unit_energy(self.unit_energy)
    }

    pub fn packet_loss_prob(&self) -> Result<f64> {
        Ok(self.analyze()?.packet_loss)
    }

    /// Every closed-form quantity for this scenario.
    pub fn analyze(&self) -> Result<AnalyticSummary> {
        let battery = self.battery_model()?;
        let pf = self.detector.false_alarm_prob();
        let pi_idle = self.pi_idle();
        let pi0 = battery.outage_prob();
        Ok(AnalyticSummary {
            pi_idle,
            harvest_prob: battery.harvest_prob(),
            threshold: self.detector.threshold(),
            pf,
            pd: self.detector.detection_prob(),
            delta: battery.access_prob(),
            alpha: battery.alpha(),
            pi0,
            packet_loss: packet_loss_from(pi0, pf, pi_idle),
        })
    }
}

/// Closed-form quantities of one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticSummary {
    pub pi_idle: f64,
    pub harvest_prob: f64,
    pub threshold: f64,
    pub pf: f64,
    pub pd: f64,
    pub delta: f64,
    pub alpha: f64,
    pub pi0: f64,
    pub packet_loss: f64,
}

/// Access probability `delta = (1 - P_f) pi_i + (1 - P_d) pi_o`.
pub fn access_prob(spectrum: &TwoStateChain, det: &DetectorConfig) -> f64 {
    let (pi_idle, _) = spectrum.steady_state();
    access_prob_from(det.false_alarm_prob(), det.detection_prob(), pi_idle)
}

pub fn access_prob_from(pf: f64, pd: f64, pi_idle: f64) -> f64 {
    (1.0 - pf) * pi_idle + (1.0 - pd) * (1.0 - pi_idle)
}

/// `P_L = 1 - (1 - pi_0)(1 - P_f) pi_i`.
pub fn packet_loss_from(pi0: f64, pf: f64, pi_idle: f64) -> f64 {
    1.0 - (1.0 - pi0) * (1.0 - pf) * pi_idle
}

pub fn packet_loss_prob(scenario: &Scenario) -> Result<f64> {
    scenario.packet_loss_prob()
}

//! Energy-detector operating characteristics under the large-`N` Gaussian
//! approximation of the test statistic.
//!
//! Under H0 the statistic `T(y) = (1/N) sum |y(n)|^2` is approximately
//! `N(sigma_w^2, sigma_w^4 / N)`; under H1 it is approximately
//! `N((1 + snr) sigma_w^2, (1 + snr)^2 sigma_w^4 / N)`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::kernels::{q_tail, q_tail_inverse};

/// Energy-detector parameters. All powers are linear and share one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorConfig {
    sensing_duration: f64,
    sampling_rate: f64,
    samples: u64,
    noise_power: f64,
    threshold: f64,
    primary_snr: f64,
}

impl DetectorConfig {
    /// `primary_snr` is the linear ratio `sigma_s^2 / sigma_w^2`.
    pub fn new(
        sensing_duration: f64,
        sampling_rate: f64,
        noise_power: f64,
        threshold: f64,
        primary_snr: f64,
    ) -> Result<Self> {
        positive("sensing_duration", sensing_duration)?;
        positive("sampling_rate", sampling_rate)?;
        positive("noise_power", noise_power)?;
        positive("threshold", threshold)?;
        positive("primary_snr", primary_snr)?;
        let samples = sample_count(sensing_duration, sampling_rate)?;
        Ok(Self {
            sensing_duration,
            sampling_rate,
            samples,
            noise_power,
            threshold,
            primary_snr,
        })
    }

    pub fn sensing_duration(&self) -> f64 {
        self.sensing_duration
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    /// Number of samples `N = floor(tau_s * f_s)`.
    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// `threshold / noise_power`.
    pub fn normalized_threshold(&self) -> f64 {
        self.threshold / self.noise_power
    }

    pub fn primary_snr(&self) -> f64 {
        self.primary_snr
    }

    /// Primary signal power `sigma_s^2 = snr * sigma_w^2`.
    pub fn signal_power(&self) -> f64 {
        self.primary_snr * self.noise_power
    }

    pub fn with_threshold(self, threshold: f64) -> Result<Self> {
        positive("threshold", threshold)?;
        Ok(Self { threshold, ..self })
    }

    pub fn with_primary_snr(self, primary_snr: f64) -> Result<Self> {
        positive("primary_snr", primary_snr)?;
        Ok(Self {
            primary_snr,
            ..self
        })
    }

    fn sqrt_samples(&self) -> f64 {
        (self.samples as f64).sqrt()
    }

    pub fn false_alarm_prob(&self) -> f64 {
        q_tail((self.threshold / self.noise_power - 1.0) * self.sqrt_samples())
    }

    pub fn detection_prob(&self) -> f64 {
        let h1_mean = (self.primary_snr + 1.0) * self.noise_power;
        q_tail((self.threshold / h1_mean - 1.0) * self.sqrt_samples())
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite and > 0, got {value}")))
    }
}

// Products like 0.003 * 1e6 land a hair below the integer; absorb that before
// rounding down.
fn sample_count(sensing_duration: f64, sampling_rate: f64) -> Result<u64> {
    let product = sensing_duration * sampling_rate;
    let n = (product * (1.0 + 1e-12)).floor();
    if !n.is_finite() || !(1.0..=1e15).contains(&n) {
        return Err(invalid(
            "sensing_duration",
            format!("sample count tau_s * f_s = {product} must be at least 1"),
        ));
    }
    Ok(n as u64)
}

/// False-alarm probability `Q((eps / sigma_w^2 - 1) sqrt(N))`.
pub fn false_alarm_prob(det: &DetectorConfig) -> f64 {
    det.false_alarm_prob()
}

/// Detection probability `Q((eps / ((snr + 1) sigma_w^2) - 1) sqrt(N))`.
pub fn detection_prob(det: &DetectorConfig) -> f64 {
    det.detection_prob()
}

/// Threshold `eps = sigma_w^2 (1 + Q^-1(target) / sqrt(N))` that yields the
/// requested false-alarm probability. Only the detector's noise power and
/// sample count are used.
pub fn threshold_for_target_pf(target: f64, det: &DetectorConfig) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidProbability {
            name: "target_pf",
            value: target,
            detail: " (must lie strictly inside (0, 1))",
        });
    }
    let z = q_tail_inverse(target)?;
    let eps = det.noise_power * (1.0 + z / det.sqrt_samples());
    if eps <= 0.0 {
        return Err(invalid(
            "target_pf",
            format!("target {target} needs a non-positive threshold at N = {}", det.samples),
        ));
    }
    Ok(eps)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

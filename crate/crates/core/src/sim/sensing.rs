//! Per-slot spectrum sensing.
//!
//! Both samplers return `true` when the detector declares the channel
//! occupied. Spectrum state `A` is H0 (idle) and `B` is H1 (occupied).

use rayon::prelude::*;

use super::config::SensingMode;
use super::report::Estimate;
use crate::analytic::DetectorConfig;
use crate::kernels::{ChainState, RandomStream};

/// Bernoulli decision with the analytic false-alarm / detection probability.
pub fn sense_event(state: ChainState, det: &DetectorConfig, rng: &mut RandomStream) -> bool {
    let p = match state {
        ChainState::A => det.false_alarm_prob(),
        ChainState::B => det.detection_prob(),
    };
    rng.bernoulli(p)
}

/// Energy detection over `N` circularly symmetric complex Gaussian samples.
///
/// Under H1 the sample is `s(n) + w(n)`; the sum of two independent CSCG
/// variables is CSCG with the summed variance, so each sample is drawn once
/// with variance `sigma_s^2 + sigma_w^2`.
pub fn sense_signal(state: ChainState, det: &DetectorConfig, rng: &mut RandomStream) -> bool {
    let variance = match state {
        ChainState::A => det.noise_power(),
        ChainState::B => det.noise_power() + det.signal_power(),
    };
    let n = det.samples();
    let mut acc = 0.0;
    for _ in 0..n {
        let re = rng.standard_normal();
        let im = rng.standard_normal();
        acc += re * re + im * im;
    }
    // Each component has variance sigma^2 / 2.
    let statistic = 0.5 * variance * acc / n as f64;
    statistic > det.threshold()
}

pub fn sense(
    mode: SensingMode,
    state: ChainState,
    det: &DetectorConfig,
    rng: &mut RandomStream,
) -> bool {
    match mode {
        SensingMode::Event => sense_event(state, det, rng),
        SensingMode::Signal => sense_signal(state, det, rng),
    }
}

const TRIALS_PER_STREAM: u64 = 1024;

/// Fraction of `trials` sensing decisions that declare the channel occupied
/// when its true state is `state`. Trials are split into fixed blocks, each
/// on its own substream, so the result does not depend on the thread count.
pub fn sensing_rate(
    mode: SensingMode,
    state: ChainState,
    det: &DetectorConfig,
    trials: u64,
    seed: u64,
) -> Estimate {
    let blocks = trials.div_ceil(TRIALS_PER_STREAM);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = RandomStream::new(seed, b);
            let count = TRIALS_PER_STREAM.min(trials - b * TRIALS_PER_STREAM);
            (0..count).filter(|_| sense(mode, state, det, &mut rng)).count() as u64
        })
        .sum();
    Estimate::proportion(hits, trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(threshold: f64, snr: f64) -> DetectorConfig {
        DetectorConfig::new(2e-3, 1e6, 1.0, threshold, snr).unwrap()
    }

    #[test]
    fn event_extremes() {
        let mut rng = RandomStream::new(3, 0);
        // Threshold deep in the tail: P_f underflows to 0.
        let quiet = det(3.0, 1e-3);
        assert_eq!(quiet.false_alarm_prob(), 0.0);
        for _ in 0..10_000 {
            assert!(!sense_event(ChainState::A, &quiet, &mut rng));
        }
        // Huge SNR: P_d = 1.
        let loud = det(1.05, 100.0);
        assert_eq!(loud.detection_prob(), 1.0);
        for _ in 0..10_000 {
            assert!(sense_event(ChainState::B, &loud, &mut rng));
        }
    }

    #[test]
    fn event_false_alarm_rate() {
        let d = det(1.03, 0.1);
        let pf = d.false_alarm_prob();
        let est = sensing_rate(SensingMode::Event, ChainState::A, &d, 100_000, 11);
        let sigma = (pf * (1.0 - pf) / 1e5).sqrt();
        assert!((est.value - pf).abs() <= 3.0 * sigma, "{} vs {pf}", est.value);
    }

    #[test]
    fn signal_statistic_mean_is_noise_power() {
        let d = DetectorConfig::new(1e-3, 1e6, 2.5, 1e9, 0.5).unwrap();
        let mut rng = RandomStream::new(5, 0);
        // With an absurd threshold nothing fires; check via the rate.
        assert!(!sense_signal(ChainState::B, &d, &mut rng));
        let at_mean = d.with_threshold(2.5).unwrap();
        let est = sensing_rate(SensingMode::Signal, ChainState::A, &at_mean, 4000, 5);
        // Threshold at the H0 mean: roughly half the trials exceed it.
        assert!((est.value - 0.5).abs() < 0.05, "{}", est.value);
    }

    #[test]
    fn rate_is_block_deterministic() {
        let d = det(1.04, 0.05);
        let a = sensing_rate(SensingMode::Event, ChainState::B, &d, 5000, 9);
        let b = sensing_rate(SensingMode::Event, ChainState::B, &d, 5000, 9);
        assert_eq!(a, b);
    }
}

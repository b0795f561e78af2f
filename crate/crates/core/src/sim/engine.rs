//! Slot loop.
//!
//! Per slot: chains advance (except in the first slot, which uses the initial
//! states); the user picks one primary channel uniformly when there are
//! several, senses it, and transmits if sensing says idle and the battery is
//! non-empty. Sensing and transmission use the start-of-slot battery level;
//! harvested energy is added at the end of the slot, capped at `L - 1`.

use rayon::prelude::*;

use super::config::{InitialStates, SensingMode, SimConfig};
use super::report::{SimReport, SlotCounters};
use super::sensing::sense_signal;
use crate::analytic::Scenario;
use crate::error::Result;
use crate::kernels::{ChainState, RandomStream};

/// Runs one replication on substream `stream_id` of `cfg.seed`.
pub fn run_replication(scenario: &Scenario, cfg: &SimConfig, stream_id: u64) -> Result<SimReport> {
    cfg.validate(scenario.battery_levels())?;
    let counters = simulate(scenario, cfg, stream_id);
    Ok(SimReport::from_replications(cfg.seed, cfg.slots, &[counters]))
}

/// Runs `cfg.replications` replications on stream ids `0..replications`
/// (in parallel on the current rayon pool) and pools them in stream order.
pub fn run_simulation(scenario: &Scenario, cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate(scenario.battery_levels())?;
    let parts: Vec<SlotCounters> = (0..u64::from(cfg.replications))
        .into_par_iter()
        .map(|id| simulate(scenario, cfg, id))
        .collect();
    Ok(SimReport::from_replications(cfg.seed, cfg.slots, &parts))
}

fn simulate(scenario: &Scenario, cfg: &SimConfig, stream_id: u64) -> SlotCounters {
    let levels = scenario.battery_levels();
    let top = levels - 1;
    let spectrum = scenario.spectrum();
    let energy = scenario.energy();
    let det = scenario.detector();
    let pf = det.false_alarm_prob();
    let pd = det.detection_prob();

    let mut rng = RandomStream::new(cfg.seed, stream_id);
    let (mut channels, mut harvester) = match cfg.initial_states {
        InitialStates::SteadyDraw => {
            let ch: Vec<ChainState> = (0..cfg.num_pu_channels)
                .map(|_| spectrum.draw_steady(&mut rng))
                .collect();
            (ch, energy.draw_steady(&mut rng))
        }
        InitialStates::Fixed {
            spectrum: s,
            energy: e,
        } => (vec![s; cfg.num_pu_channels], e),
    };
    let mut level = cfg.initial_level(levels);
    let mut c = SlotCounters::new(levels);

    for slot in 0..cfg.slots {
        if slot > 0 {
            for ch in channels.iter_mut() {
                *ch = spectrum.step(*ch, &mut rng);
            }
            harvester = energy.step(harvester, &mut rng);
        }

        let state = if channels.len() > 1 {
            channels[rng.index(channels.len())]
        } else {
            channels[0]
        };
        let busy = match cfg.sensing_mode {
            SensingMode::Event => rng.bernoulli(match state {
                ChainState::A => pf,
                ChainState::B => pd,
            }),
            SensingMode::Signal => sense_signal(state, det, &mut rng),
        };

        c.level_visits[level] += 1;
        match (state, busy) {
            (ChainState::A, false) => c.idle_slots += 1,
            (ChainState::A, true) => {
                c.idle_slots += 1;
                c.false_alarms += 1;
            }
            (ChainState::B, false) => c.busy_slots += 1,
            (ChainState::B, true) => {
                c.busy_slots += 1;
                c.detections += 1;
            }
        }

        let start = level;
        if busy {
            c.packets_lost_false_alarm_or_busy += 1;
        } else if level == 0 {
            c.packets_lost_outage += 1;
        } else {
            level -= 1;
            match state {
                ChainState::A => c.packets_delivered += 1,
                ChainState::B => c.packets_collided += 1,
            }
        }
        if harvester == ChainState::A && level < top {
            level += 1;
        }
        c.level_moves[start][level + 1 - start] += 1;
    }
    c.slots = cfg.slots;
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::DetectorConfig;
    use crate::sim::InitialBattery;
    use crate::kernels::TwoStateChain;

    // Always idle, no false alarms, no harvesting.
    fn draining(levels: usize) -> Scenario {
        let det = DetectorConfig::new(2e-3, 1e6, 1.0, 3.0, 0.5).unwrap();
        assert_eq!(det.false_alarm_prob(), 0.0);
        Scenario::new(
            TwoStateChain::spectrum(1.0, 0.5).unwrap(),
            TwoStateChain::energy(0.0, 1.0).unwrap(),
            det,
            levels,
            0.1,
        )
        .unwrap()
    }

    fn drain_cfg(slots: u64) -> SimConfig {
        SimConfig {
            initial_states: InitialStates::Fixed {
                spectrum: ChainState::A,
                energy: ChainState::B,
            },
            initial_battery: InitialBattery::Full,
            ..SimConfig::new(slots, 1, 99)
        }
    }

    #[test]
    fn deterministic_drain() {
        let s = draining(8);
        let r = run_replication(&s, &drain_cfg(7), 0).unwrap();
        assert_eq!(r.counters.packets_delivered, 7);
        assert_eq!(r.counters.packets_lost(), 0);
        // Level 0 is never visited at slot start.
        assert_eq!(r.counters.level_visits[0], 0);
        assert_eq!(r.counters.level_moves[1], [1, 0, 0]);

        let r = run_replication(&s, &drain_cfg(8), 0).unwrap();
        assert_eq!(r.counters.packets_delivered, 7);
        assert_eq!(r.counters.packets_lost_outage, 1);
    }

    #[test]
    fn counters_partition_slots() {
        let det = DetectorConfig::new(2e-3, 1e6, 1.0, 1.04, 0.05).unwrap();
        let s = Scenario::new(
            TwoStateChain::spectrum(0.6, 0.7).unwrap(),
            TwoStateChain::energy(0.5, 0.6).unwrap(),
            det,
            6,
            0.1,
        )
        .unwrap();
        let cfg = SimConfig {
            num_pu_channels: 3,
            ..SimConfig::new(50_000, 3, 4)
        };
        let r = run_simulation(&s, &cfg).unwrap();
        let c = &r.counters;
        assert_eq!(
            c.packets_delivered
                + c.packets_collided
                + c.packets_lost_outage
                + c.packets_lost_false_alarm_or_busy,
            c.slots
        );
        assert_eq!(c.slots, 150_000);
        assert_eq!(c.idle_slots + c.busy_slots, c.slots);
        assert_eq!(c.level_visits.iter().sum::<u64>(), c.slots);
        assert!((r.battery_histogram.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_config() {
        let s = draining(4);
        assert!(run_replication(&s, &SimConfig::new(0, 1, 1), 0).is_err());
        assert!(run_simulation(&s, &SimConfig::new(10, 0, 1)).is_err());
        let cfg = SimConfig {
            initial_battery: InitialBattery::Level(4),
            ..SimConfig::new(10, 1, 1)
        };
        assert!(run_simulation(&s, &cfg).is_err());
    }
}

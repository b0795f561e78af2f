use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A proportion estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    /// Number of Bernoulli trials behind `value`.
    pub trials: u64,
    pub std_error: f64,
    /// Half-width of the 95% confidence interval.
    pub ci95: f64,
}

impl Estimate {
    /// Binomial normal-approximation estimate of `hits / trials`. `NaN` when
    /// there are no trials.
    pub fn proportion(hits: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self {
                value: f64::NAN,
                trials,
                std_error: f64::NAN,
                ci95: f64::NAN,
            };
        }
        let p = hits as f64 / trials as f64;
        Self::with_std_error(p, trials, binomial_std_error(p, trials))
    }

    fn with_std_error(value: f64, trials: u64, std_error: f64) -> Self {
        Self {
            value,
            trials,
            std_error,
            ci95: Z95 * std_error,
        }
    }

    pub fn binomial_std_error(&self) -> f64 {
        binomial_std_error(self.value, self.trials)
    }
}

pub fn binomial_std_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Raw slot counters of one or more replications. All additive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotCounters {
    pub slots: u64,
    pub packets_delivered: u64,
    pub packets_collided: u64,
    pub packets_lost_outage: u64,
    /// Sensing said occupied (false alarm or correct detection).
    pub packets_lost_false_alarm_or_busy: u64,
    /// Slots whose sensed channel was idle.
    pub idle_slots: u64,
    pub false_alarms: u64,
    pub busy_slots: u64,
    pub detections: u64,
    /// Slots spent at each battery level (start-of-slot level).
    pub level_visits: Vec<u64>,
    /// Per start level: counts of moves `[down, stay, up]`.
    pub level_moves: Vec<[u64; 3]>,
}

impl SlotCounters {
    pub fn new(levels: usize) -> Self {
        Self {
            slots: 0,
            packets_delivered: 0,
            packets_collided: 0,
            packets_lost_outage: 0,
            packets_lost_false_alarm_or_busy: 0,
            idle_slots: 0,
            false_alarms: 0,
            busy_slots: 0,
            detections: 0,
            level_visits: vec![0; levels],
            level_moves: vec![[0; 3]; levels],
        }
    }

    pub fn packets_lost(&self) -> u64 {
        self.slots - self.packets_delivered
    }

    /// Slots in which sensing reported idle.
    pub fn accesses(&self) -> u64 {
        self.slots - self.packets_lost_false_alarm_or_busy
    }

    pub fn merge(&mut self, other: &SlotCounters) {
        self.slots += other.slots;
        self.packets_delivered += other.packets_delivered;
        self.packets_collided += other.packets_collided;
        self.packets_lost_outage += other.packets_lost_outage;
        self.packets_lost_false_alarm_or_busy += other.packets_lost_false_alarm_or_busy;
        self.idle_slots += other.idle_slots;
        self.false_alarms += other.false_alarms;
        self.busy_slots += other.busy_slots;
        self.detections += other.detections;
        for (a, b) in self.level_visits.iter_mut().zip(&other.level_visits) {
            *a += b;
        }
        for (a, b) in self.level_moves.iter_mut().zip(&other.level_moves) {
            for k in 0..3 {
                a[k] += b[k];
            }
        }
    }
}

/// Empirical estimators from a pooled simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub seed: u64,
    pub replications: u32,
    pub slots_per_replication: u64,
    /// Packet-loss rate. When there is more than one replication the
    /// standard error is the larger of the pooled binomial one and the
    /// between-replication one.
    pub packet_loss: Estimate,
    pub outage_occupancy: Estimate,
    pub pf: Estimate,
    pub pd: Estimate,
    pub delta: Estimate,
    pub pi_idle: Estimate,
    pub battery_histogram: Vec<f64>,
    pub replication_loss_rates: Vec<f64>,
    pub counters: SlotCounters,
}

impl SimReport {
    pub(crate) fn from_replications(
        seed: u64,
        slots_per_replication: u64,
        parts: &[SlotCounters],
    ) -> Self {
        let mut pooled = SlotCounters::new(parts[0].level_visits.len());
        for part in parts {
            pooled.merge(part);
        }
        let rates: Vec<f64> = parts
            .iter()
            .map(|c| c.packets_lost() as f64 / c.slots as f64)
            .collect();

        let mut packet_loss = Estimate::proportion(pooled.packets_lost(), pooled.slots);
        if rates.len() > 1 {
            let r = rates.len() as f64;
            let mean = rates.iter().sum::<f64>() / r;
            let var = rates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
            let between = (var / r).sqrt();
            if between > packet_loss.std_error {
                packet_loss = Estimate::with_std_error(packet_loss.value, pooled.slots, between);
            }
        }

        let slots = pooled.slots as f64;
        Self {
            seed,
            replications: parts.len() as u32,
            slots_per_replication,
            packet_loss,
            outage_occupancy: Estimate::proportion(pooled.level_visits[0], pooled.slots),
            pf: Estimate::proportion(pooled.false_alarms, pooled.idle_slots),
            pd: Estimate::proportion(pooled.detections, pooled.busy_slots),
            delta: Estimate::proportion(pooled.accesses(), pooled.slots),
            pi_idle: Estimate::proportion(pooled.idle_slots, pooled.slots),
            battery_histogram: pooled.level_visits.iter().map(|&v| v as f64 / slots).collect(),
            replication_loss_rates: rates,
            counters: pooled,
        }
    }

    /// Empirical probability of moving from `level` by `-1`, `0` or `+1`,
    /// with the number of visits it is based on.
    pub fn move_frequencies(&self, level: usize) -> ([f64; 3], u64) {
        let moves = self.counters.level_moves[level];
        let n: u64 = moves.iter().sum();
        let f = moves.map(|m| m as f64 / n as f64);
        (f, n)
    }
}

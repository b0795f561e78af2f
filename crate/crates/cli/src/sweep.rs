//! Parameter sweeps over primary SNR or normalized detection threshold.

use ehcrn_core::{
    db_to_linear, run_simulation, threshold_for_target_pf, Scenario, SimConfig, TwoStateChain,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Primary SNR in dB; the threshold comes from a target false-alarm
    /// probability when one is set.
    PrimarySnrDb,
    /// `threshold / noise_power`.
    NormalizedThreshold,
}

impl SweepVariable {
    pub fn axis_label(self) -> &'static str {
        match self {
            SweepVariable::PrimarySnrDb => "primary SNR (dB)",
            SweepVariable::NormalizedThreshold => "normalized detection threshold",
        }
    }
}

/// Labeled override of the chain parameters of the fixed scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: String,
    /// `(q_idle, q_occupied)`
    pub spectrum: Option<(f64, f64)>,
    /// `(p_on, p_off)`
    pub energy: Option<(f64, f64)>,
}

impl Variant {
    fn apply(&self, base: &Scenario) -> ehcrn_core::Result<Scenario> {
        let mut s = *base;
        if let Some((qi, qo)) = self.spectrum {
            s = s.with_spectrum(TwoStateChain::spectrum(qi, qo)?);
        }
        if let Some((on, off)) = self.energy {
            s = s.with_energy(TwoStateChain::energy(on, off)?);
        }
        Ok(s)
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    variable: SweepVariable,
    grid: Vec<f64>,
    fixed: Scenario,
    variants: Vec<Variant>,
    sim: SimConfig,
    target_pf: Option<f64>,
}

/// Primary SNR grid for the SNR campaign: -20 to -8 dB in 1 dB steps.
pub fn default_snr_grid() -> Vec<f64> {
    (-20..=-8).map(f64::from).collect()
}

/// Normalized threshold grid for the threshold campaign: 0.98 to 1.15 in
/// steps of 0.005.
pub fn default_threshold_grid() -> Vec<f64> {
    (0..=34).map(|k| f64::from(980 + 5 * k) / 1000.0).collect()
}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        grid: Vec<f64>,
        fixed: Scenario,
        variants: Vec<Variant>,
        sim: SimConfig,
        target_pf: Option<f64>,
    ) -> Result<Self> {
        if grid.len() < 2 {
            return Err(CliError::Invalid("sweep grid needs at least two points".into()));
        }
        if grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Invalid("sweep grid must be finite and strictly increasing".into()));
        }
        if variants.is_empty() {
            return Err(CliError::Invalid("sweep needs at least one variant".into()));
        }
        for v in &variants {
            v.apply(&fixed)
                .map_err(|e| CliError::Invalid(format!("variant `{}`: {e}", v.label)))?;
        }
        sim.validate(fixed.battery_levels())
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        Ok(Self {
            variable,
            grid,
            fixed,
            variants,
            sim,
            target_pf,
        })
    }

    /// SNR campaign: three energy-arrival pairs `(p_on, p_off)` at a fixed
    /// target false-alarm probability.
    pub fn case_one(fixed: Scenario, sim: SimConfig, target_pf: f64) -> Result<Self> {
        let variants = [(0.7, 0.5), (0.5, 0.5), (0.3, 0.5)]
            .into_iter()
            .map(|(on, off)| Variant {
                label: format!("p_on={on} p_off={off}"),
                spectrum: None,
                energy: Some((on, off)),
            })
            .collect();
        Self::new(
            SweepVariable::PrimarySnrDb,
            default_snr_grid(),
            fixed,
            variants,
            sim,
            Some(target_pf),
        )
    }

    /// Threshold campaign: three primary-network pairs `(q_o, q_i)` at the
    /// fixed scenario's SNR.
    pub fn case_two(fixed: Scenario, sim: SimConfig) -> Result<Self> {
        let variants = [(0.7, 0.5), (0.5, 0.5), (0.3, 0.5)]
            .into_iter()
            .map(|(qo, qi)| Variant {
                label: format!("q_o={qo} q_i={qi}"),
                spectrum: Some((qi, qo)),
                energy: None,
            })
            .collect();
        Self::new(
            SweepVariable::NormalizedThreshold,
            default_threshold_grid(),
            fixed,
            variants,
            sim,
            None,
        )
    }

    pub fn variable(&self) -> SweepVariable {
        self.variable
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn variants(&self) -> &[Variant] {
        &self.variants
    }

    pub fn sim(&self) -> &SimConfig {
        &self.sim
    }

    pub fn with_grid(self, grid: Vec<f64>) -> Result<Self> {
        Self::new(self.variable, grid, self.fixed, self.variants, self.sim, self.target_pf)
    }

    /// Scenario at one `(variant, sweep value)` point.
    pub fn scenario_at(&self, variant: &Variant, value: f64) -> ehcrn_core::Result<Scenario> {
        let s = variant.apply(&self.fixed)?;
        let det = *s.detector();
        let det = match self.variable {
            SweepVariable::PrimarySnrDb => {
                let det = det.with_primary_snr(db_to_linear(value))?;
                match self.target_pf {
                    Some(p) => det.with_threshold(threshold_for_target_pf(p, &det)?)?,
                    None => det,
                }
            }
            SweepVariable::NormalizedThreshold => {
                det.with_threshold(value * det.noise_power())?
            }
        };
        s.with_detector(det)
    }

    /// Simulation seed of grid point `point` of variant `variant`.
    pub fn point_seed(&self, variant: usize, point: usize) -> u64 {
        splitmix64(self.sim.seed ^ ((variant as u64) << 32 | point as u64))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One output row. `pf`, `pd`, `delta` and `pi_idle` are analytic; `slots`
/// is the pooled slot count over all replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResultRow {
    pub variant: String,
    pub sweep_value: f64,
    pub analytic_pl: f64,
    pub sim_pl: f64,
    pub sim_pl_ci95: f64,
    pub analytic_pi0: f64,
    pub sim_pi0: f64,
    pub pf: f64,
    pub pd: f64,
    pub delta: f64,
    pub pi_idle: f64,
    pub slots: u64,
    pub seed: u64,
}

/// Evaluates every `(variant, grid value)` point, ordered by variant then
/// grid value. Points run in parallel on the current rayon pool; the output
/// does not depend on the pool size.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepResultRow>> {
    let jobs: Vec<(usize, usize)> = (0..spec.variants.len())
        .flat_map(|v| (0..spec.grid.len()).map(move |g| (v, g)))
        .collect();
    jobs.par_iter()
        .map(|&(v, g)| evaluate_point(spec, v, g))
        .collect()
}

fn evaluate_point(spec: &SweepSpec, v: usize, g: usize) -> Result<SweepResultRow> {
    let variant = &spec.variants[v];
    let value = spec.grid[g];
    let context = |e: ehcrn_core::Error| {
        CliError::Numeric(format!("variant `{}` at {value}: {e}", variant.label))
    };
    let scenario = spec.scenario_at(variant, value).map_err(context)?;
    let analytic = scenario.analyze().map_err(context)?;
    let seed = spec.point_seed(v, g);
    let sim = SimConfig { seed, ..spec.sim };
    let report = run_simulation(&scenario, &sim).map_err(context)?;
    Ok(SweepResultRow {
        variant: variant.label.clone(),
        sweep_value: value,
        analytic_pl: analytic.packet_loss,
        sim_pl: report.packet_loss.value,
        sim_pl_ci95: report.packet_loss.ci95,
        analytic_pi0: analytic.pi0,
        sim_pi0: report.outage_occupancy.value,
        pf: analytic.pf,
        pd: analytic.pd,
        delta: analytic.delta,
        pi_idle: analytic.pi_idle,
        slots: report.counters.slots,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ehcrn_core::DetectorConfig;

    fn base() -> Scenario {
        Scenario::new(
            TwoStateChain::spectrum(0.5, 0.7).unwrap(),
            TwoStateChain::energy(0.5, 0.7).unwrap(),
            DetectorConfig::new(2e-3, 1e6, 1.0, 1.0, db_to_linear(-15.0)).unwrap(),
            100,
            0.1,
        )
        .unwrap()
    }

    #[test]
    fn default_grids() {
        let snr = default_snr_grid();
        assert_eq!((snr[0], snr[12], snr.len()), (-20.0, -8.0, 13));
        let th = default_threshold_grid();
        assert_eq!((th[0], th[4], th[34]), (0.98, 1.0, 1.15));
    }

    #[test]
    fn rejects_bad_grids() {
        let sim = SimConfig::new(10, 1, 1);
        let v = vec![Variant { label: "a".into(), spectrum: None, energy: None }];
        for grid in [vec![1.0], vec![1.0, 1.0], vec![2.0, 1.0], vec![1.0, f64::NAN]] {
            assert!(SweepSpec::new(SweepVariable::NormalizedThreshold, grid, base(), v.clone(), sim, None).is_err());
        }
        assert!(SweepSpec::new(SweepVariable::NormalizedThreshold, vec![1.0, 1.1], base(), vec![], sim, None).is_err());
        let bad = vec![Variant { label: "b".into(), spectrum: Some((1.0, 1.0)), energy: None }];
        assert!(SweepSpec::new(SweepVariable::NormalizedThreshold, vec![1.0, 1.1], base(), bad, sim, None).is_err());
    }

    #[test]
    fn case_one_threshold_follows_target() {
        let spec = SweepSpec::case_one(base(), SimConfig::new(10, 1, 1), 0.01).unwrap();
        for &db in spec.grid() {
            let s = spec.scenario_at(&spec.variants()[0], db).unwrap();
            assert!((s.detector().false_alarm_prob() - 0.01).abs() < 1e-9);
            assert!((s.detector().primary_snr() - db_to_linear(db)).abs() < 1e-15);
            assert_eq!(s.energy().stay_a(), 0.7);
        }
    }

    #[test]
    fn case_two_sets_threshold_and_spectrum() {
        let spec = SweepSpec::case_two(base(), SimConfig::new(10, 1, 1)).unwrap();
        let v = &spec.variants()[2];
        let s = spec.scenario_at(v, 1.05).unwrap();
        assert_eq!(s.detector().threshold(), 1.05);
        assert_eq!((s.spectrum().stay_a(), s.spectrum().stay_b()), (0.5, 0.3));
    }

    #[test]
    fn rows_are_ordered_and_seeded_per_point() {
        let spec = SweepSpec::case_two(base(), SimConfig::new(2000, 2, 5))
            .unwrap()
            .with_grid(vec![1.0, 1.05])
            .unwrap();
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[1].variant, rows[0].variant);
        assert_eq!((rows[0].sweep_value, rows[1].sweep_value), (1.0, 1.05));
        let mut seeds: Vec<u64> = rows.iter().map(|r| r.seed).collect();
        seeds.dedup();
        assert_eq!(seeds.len(), 6);
        assert!(rows.iter().all(|r| r.slots == 4000));
    }
}

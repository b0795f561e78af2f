//! Birth-death battery chain of an energy-harvesting secondary user.
//!
//! Levels `0..L`. Each slot the user transmits (one unit) when sensing reports
//! idle and the battery is non-empty, and gains one unit when the harvester is
//! on, capped at `L - 1`. With access probability `delta` and harvest
//! probability `e_on`:
//!
//! * level 0: up with `e_on`, stay with `1 - e_on`;
//! * interior: down with `delta (1 - e_on)`, up with `(1 - delta) e_on`;
//! * level `L - 1`: down with `delta (1 - e_on)`, stay otherwise.
//!
//! The stationary law is geometric in `alpha = (1 - delta) e_on / (delta (1 - e_on))`
//! above level 0: `pi_l = alpha^l pi_0 / (1 - delta)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

const ALPHA_UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BatteryModel {
    levels: usize,
    access_prob: f64,
    harvest_prob: f64,
    unit_energy: f64,
}

impl BatteryModel {
    pub fn new(levels: usize, access_prob: f64, harvest_prob: f64) -> Result<Self> {
        if levels < 2 {
            return Err(invalid("levels", format!("battery needs at least 2 levels, got {levels}")));
        }
        if !(access_prob > 0.0 && access_prob < 1.0) {
            return Err(Error::InvalidProbability {
                name: "access_prob",
                value: access_prob,
                detail: " (must lie strictly inside (0, 1))",
            });
        }
        if !(0.0..=1.0).contains(&harvest_prob) {
            return Err(Error::InvalidProbability {
                name: "harvest_prob",
                value: harvest_prob,
                detail: "",
            });
        }
        Ok(Self {
            levels,
            access_prob,
            harvest_prob,
            unit_energy: 1.0,
        })
    }

    /// Energy per level in joules. Bookkeeping only: harvest and transmit
    /// quanta are both one unit.
    pub fn with_unit_energy(mut self, unit_energy: f64) -> Result<Self> {
        if !(unit_energy.is_finite() && unit_energy > 0.0) {
            return Err(invalid("unit_energy", format!("must be > 0, got {unit_energy}")));
        }
        self.unit_energy = unit_energy;
        Ok(self)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn access_prob(&self) -> f64 {
        self.access_prob
    }

    pub fn harvest_prob(&self) -> f64 {
        self.harvest_prob
    }

    pub fn unit_energy(&self) -> f64 {
        self.unit_energy
    }

    /// Total storable energy `(L - 1) e_u`.
    pub fn capacity(&self) -> f64 {
        (self.levels - 1) as f64 * self.unit_energy
    }

    /// Drift ratio `(1 - delta) e_on / (delta (1 - e_on))`; infinite when
    /// `e_on = 1`.
    pub fn alpha(&self) -> f64 {
        let (d, e) = (self.access_prob, self.harvest_prob);
        if e == 1.0 {
            return f64::INFINITY;
        }
        (1.0 - d) * e / (d * (1.0 - e))
    }

    /// Probability of dropping one level from any `l > 0`.
    pub fn down_prob(&self) -> f64 {
        self.access_prob * (1.0 - self.harvest_prob)
    }

    /// Probability of rising one level from `0 < l < L - 1`.
    pub fn up_prob(&self) -> f64 {
        (1.0 - self.access_prob) * self.harvest_prob
    }

    /// Row-stochastic, tridiagonal `L x L` transition matrix.
    pub fn transition_matrix(&self) -> DMatrix<f64> {
        let n = self.levels;
        let top = n - 1;
        let (down, up) = (self.down_prob(), self.up_prob());
        let mut p = DMatrix::zeros(n, n);
        p[(0, 1)] = self.harvest_prob;
        p[(0, 0)] = 1.0 - self.harvest_prob;
        for l in 1..top {
            p[(l, l - 1)] = down;
            p[(l, l + 1)] = up;
            p[(l, l)] = 1.0 - down - up;
        }
        p[(top, top - 1)] = down;
        p[(top, top)] = 1.0 - down;
        p
    }

    /// Stationary probability of an empty battery.
    pub fn outage_prob(&self) -> f64 {
        self.steady_parts().0
    }

    /// Closed-form stationary distribution `[pi_0, ..., pi_{L-1}]`.
    pub fn steady_state(&self) -> Vec<f64> {
        let n = self.levels;
        let top = n - 1;
        let (pi0, shape) = self.steady_parts();
        let mut pi = vec![0.0; n];
        pi[0] = pi0;
        match shape {
            Shape::Empty => {}
            Shape::Full => pi[top] = 1.0,
            Shape::Rising { alpha } => {
                let scale = pi0 / (1.0 - self.access_prob);
                for (l, v) in pi.iter_mut().enumerate().skip(1) {
                    *v = scale * alpha.powi(l as i32);
                }
            }
            Shape::Falling { beta, top_mass } => {
                for (l, v) in pi.iter_mut().enumerate().skip(1) {
                    *v = top_mass * beta.powi((top - l) as i32);
                }
            }
        }
        pi
    }

    // pi_0 plus whatever is needed to expand the rest of the vector. For
    // alpha > 1 everything is expressed through beta = 1/alpha so nothing
    // overflows at large L.
    fn steady_parts(&self) -> (f64, Shape) {
        let e = self.harvest_prob;
        if e == 0.0 {
            return (1.0, Shape::Empty);
        }
        if e == 1.0 {
            return (0.0, Shape::Full);
        }
        let keep = 1.0 - self.access_prob;
        let span = self.levels - 1;
        let alpha = self.alpha();
        if (alpha - 1.0).abs() <= ALPHA_UNIT_TOL {
            let pi0 = keep / (keep + span as f64);
            return (pi0, Shape::Rising { alpha: 1.0 });
        }
        if alpha < 1.0 {
            // 1 + S/(1-delta) with S = sum_{l=1}^{L-1} alpha^l
            let s = alpha * geometric_sum(alpha, span);
            (keep / (keep + s), Shape::Rising { alpha })
        } else {
            let beta = 1.0 / alpha;
            let tail = beta.powi(span as i32);
            let top_mass = 1.0 / (keep * tail + geometric_sum(beta, span));
            (keep * tail * top_mass, Shape::Falling { beta, top_mass })
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    Empty,
    Full,
    Rising { alpha: f64 },
    Falling { beta: f64, top_mass: f64 },
}

/// `sum_{k=0}^{n-1} r^k` for `0 <= r <= 1`, accurate near `r = 1`.
fn geometric_sum(r: f64, n: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&r));
    if n == 0 {
        return 0.0;
    }
    if r == 1.0 {
        return n as f64;
    }
    if r == 0.0 {
        return 1.0;
    }
    let d = r - 1.0;
    (n as f64 * d.ln_1p()).exp_m1() / d
}

pub fn battery_transition_matrix(b: &BatteryModel) -> DMatrix<f64> {
    b.transition_matrix()
}

pub fn outage_prob(b: &BatteryModel) -> f64 {
    b.outage_prob()
}

pub fn battery_steady_state(b: &BatteryModel) -> Vec<f64> {
    b.steady_state()
}

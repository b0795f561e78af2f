use serde::{Deserialize, Serialize};

use super::rng::RandomStream;
use crate::error::{check_probability, Error, Result};

/// State of a [`TwoStateChain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainState {
    A,
    B,
}

/// Human-readable names for the two states of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainLabels {
    pub a: &'static str,
    pub b: &'static str,
}

impl ChainLabels {
    pub const GENERIC: Self = Self { a: "A", b: "B" };
    pub const SPECTRUM: Self = Self {
        a: "idle",
        b: "occupied",
    };
    pub const ENERGY: Self = Self {
        a: "harvest-on",
        b: "harvest-off",
    };
}

/// Correlated binary Markov process described by its two self-transition
/// probabilities.
///
/// The spectrum process uses `A = idle (H0)` with `stay_a = q_i` and
/// `B = occupied (H1)` with `stay_b = q_o`; the energy-arrival process uses
/// `A = harvesting` with `stay_a = p_on` and `B = not harvesting` with
/// `stay_b = p_off`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateChain {
    stay_a: f64,
    stay_b: f64,
    labels: ChainLabels,
}

impl TwoStateChain {
    pub fn new(stay_a: f64, stay_b: f64, labels: ChainLabels) -> Result<Self> {
        check_probability("stay_a", stay_a)?;
        check_probability("stay_b", stay_b)?;
        if stay_a == 1.0 && stay_b == 1.0 {
            return Err(Error::DegenerateChain);
        }
        Ok(Self {
            stay_a,
            stay_b,
            labels,
        })
    }

    /// Spectrum occupancy chain from `(q_i, q_o)`.
    pub fn spectrum(q_idle: f64, q_occupied: f64) -> Result<Self> {
        Self::new(q_idle, q_occupied, ChainLabels::SPECTRUM)
    }

    /// Energy-arrival chain from `(p_on, p_off)`.
    pub fn energy(p_on: f64, p_off: f64) -> Result<Self> {
        Self::new(p_on, p_off, ChainLabels::ENERGY)
    }

    pub fn stay_a(&self) -> f64 {
        self.stay_a
    }

    pub fn stay_b(&self) -> f64 {
        self.stay_b
    }

    pub fn labels(&self) -> ChainLabels {
        self.labels
    }

    /// Stationary probabilities `(pi_A, pi_B)`; `pi_B` is formed as
    /// `1 - pi_A` so the pair sums to one exactly.
    pub fn steady_state(&self) -> (f64, f64) {
        let pi_a = (1.0 - self.stay_b) / (2.0 - self.stay_a - self.stay_b);
        (pi_a, 1.0 - pi_a)
    }

    /// Probability of being in state `A` one step after `current`.
    pub fn prob_next_a(&self, current: ChainState) -> f64 {
        match current {
            ChainState::A => self.stay_a,
            ChainState::B => 1.0 - self.stay_b,
        }
    }

    /// Advances one step using exactly one uniform draw.
    #[inline]
    pub fn step(&self, current: ChainState, rng: &mut RandomStream) -> ChainState {
        let u = rng.uniform();
        let stay = match current {
            ChainState::A => u < self.stay_a,
            ChainState::B => u < self.stay_b,
        };
        match (current, stay) {
            (s, true) => s,
            (ChainState::A, false) => ChainState::B,
            (ChainState::B, false) => ChainState::A,
        }
    }

    /// Draws a state from the stationary distribution (one uniform draw).
    pub fn draw_steady(&self, rng: &mut RandomStream) -> ChainState {
        if rng.bernoulli(self.steady_state().0) {
            ChainState::A
        } else {
            ChainState::B
        }
    }

    pub fn label(&self, state: ChainState) -> &'static str {
        match state {
            ChainState::A => self.labels.a,
            ChainState::B => self.labels.b,
        }
    }
}

/// Free-function form of [`TwoStateChain::steady_state`].
pub fn steady_state(chain: &TwoStateChain) -> (f64, f64) {
    chain.steady_state()
}

/// Free-function form of [`TwoStateChain::step`].
pub fn step_chain(chain: &TwoStateChain, current: ChainState, rng: &mut RandomStream) -> ChainState {
    chain.step(current, rng)
}

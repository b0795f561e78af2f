//! Numerical and stochastic building blocks shared by the analytic model and
//! the simulator.

mod chain;
mod gaussian;
mod rng;

pub use chain::{steady_state, step_chain, ChainLabels, ChainState, TwoStateChain};
pub use gaussian::{normal_pdf, q_tail, q_tail_inverse};
pub use rng::RandomStream;

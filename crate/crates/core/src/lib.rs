//! Speed limits for quantum oracles that entangle an input register with an
//! output register.
//!
//! The examples are the intended entry points:
//!
//! ```text
//! cargo run --example bound_report          # per-pair bounds and energy statistics
//! cargo run --example correlation_trace     # z(t) and D(t) on a grid
//! cargo run --example first_orthogonality   # empirical crossing times
//! cargo run --release --example verify_campaign
//! cargo run --example zero_energy_sweep     # faster with zero mean interaction energy
//! cargo run --example scaling_law           # tau_hat ∝ 1/Δa
//! cargo run --example comparison_bounds     # full-state ML and MT times
//! cargo run --example schmidt_persistence
//! cargo run --example heisenberg_demo       # nonpersistent counterexample
//! cargo run --example driven_pulse          # time-dependent coupling
//! cargo run --example generalized_coupling  # several coupling terms
//! ```
//!
//! The `oracle-qsl` binary wraps the same calls; see [`cli`].

pub mod amplitude;
pub mod bounds;
pub mod cli;
pub mod drive;
pub mod error;
pub mod model;
pub mod report;
pub mod scenario;
pub mod schmidt;
pub mod search;
pub mod sweep;

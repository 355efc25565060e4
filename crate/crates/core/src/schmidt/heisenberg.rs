//! Two spin-½ particles under `J S₁·S₂`, a coupling that does not commute with
//! the single-spin Hamiltonians.
//!
//! With `K = ∫J dt / ħ` the propagator is
//! `e^{−iK/4} (1 + (e^{iK} − 1) P_singlet)`. Basis index is `2 q₁ + q₂` with
//! `0 = ↑`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{classify_trajectory, schmidt_decompose, PersistenceReport, SchmidtSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initial {
    /// `|↑⟩|↓⟩`
    UpDown,
    /// `|→⟩|↑⟩` with `|→⟩ = (|↑⟩ + |↓⟩)/√2`
    PlusUp,
}

impl Initial {
    pub fn state(self) -> [Complex64; 4] {
        let z = Complex64::new(0.0, 0.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            Initial::UpDown => [z, Complex64::new(1.0, 0.0), z, z],
            Initial::PlusUp => [h, z, h, z],
        }
    }
}

impl std::str::FromStr for Initial {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "up_down" => Ok(Initial::UpDown),
            "plus_up" => Ok(Initial::PlusUp),
            other => Err(format!(
                "unknown initial state `{other}` (expected up_down or plus_up)"
            )),
        }
    }
}

/// State after accumulated coupling `k`.
pub fn heisenberg_state(initial: Initial, k: f64) -> [Complex64; 4] {
    let psi = initial.state();
    let singlet_amp = (psi[1] - psi[2]) * FRAC_1_SQRT_2;
    let kick = (Complex64::new(0.0, k).exp() - 1.0) * singlet_amp * FRAC_1_SQRT_2;
    let global = Complex64::from_polar(1.0, -k / 4.0);
    let mut out = psi;
    out[1] += kick;
    out[2] -= kick;
    out.map(|c| c * global)
}

#[derive(Debug, Clone, Serialize)]
pub struct HeisenbergDemo {
    pub initial: Initial,
    /// One snapshot per `K`; the `t` field carries `K`.
    pub snapshots: Vec<SchmidtSnapshot>,
    pub persistence: PersistenceReport,
}

pub fn heisenberg_demo(k_values: &[f64], initial: Initial) -> HeisenbergDemo {
    let snapshots: Vec<SchmidtSnapshot> = k_values
        .iter()
        .map(|&k| {
            let mut snap =
                schmidt_decompose(&heisenberg_state(initial, k), 2, 2).expect("2x2 state");
            snap.t = k;
            snap
        })
        .collect();
    let persistence = classify_trajectory(&snapshots);
    HeisenbergDemo {
        initial,
        snapshots,
        persistence,
    }
}

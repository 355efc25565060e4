//! Exact correlation amplitudes and branch overlaps.
//!
//! Conventions: `D_xx'(t) = Σ_i f(x,t)_i · conj(f(x',t)_i)`, which evaluates to
//! `exp(−i t (ε_x − ε_x')/ħ) · z_xx'(t)` with
//! `z_xx'(t) = Σ_i p_i exp(−i ν_i t)` and `ν_i = C (a_x − a_x') b_i / ħ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{AmplitudeError, ModelError};
use crate::model::{Coupling, OracleScenario, Pair};

/// Largest composite dimension accepted by [`brute_force_state`].
pub const BRUTE_FORCE_LIMIT: usize = 4096;

/// `exp(−iθ)`.
#[inline]
pub fn phase(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, -s)
}

/// `Σ_k w_k exp(−i ω_k t)`.
pub fn weighted_phase_sum(freqs: &[f64], weights: &[f64], t: f64) -> Complex64 {
    freqs
        .iter()
        .zip(weights)
        .map(|(&w, &p)| p * phase(w * t))
        .sum()
}

pub fn corr_amplitude(s: &OracleScenario, pair: Pair, t: f64) -> Result<Complex64, ModelError> {
    s.check_pair(pair)?;
    Ok(weighted_phase_sum(
        &s.pair_frequencies(pair),
        s.weights(),
        t,
    ))
}

pub fn overlap_d(s: &OracleScenario, pair: Pair, t: f64) -> Result<Complex64, ModelError> {
    let z = corr_amplitude(s, pair, t)?;
    let eps = s.input().eps();
    Ok(phase((eps[pair.x] - eps[pair.y]) * t / s.hbar()) * z)
}

/// Output-register state `|f(x,t)⟩` in the output eigenbasis, with the
/// composite ground energy subtracted.
pub fn output_state(s: &OracleScenario, x: usize, t: f64) -> Result<Vec<Complex64>, ModelError> {
    if x >= s.input().len() {
        return Err(ModelError::BadPair(format!("label index {x} out of range")));
    }
    let ground = s.ground_energy();
    Ok(s.output()
        .c0()
        .iter()
        .enumerate()
        .map(|(i, &c)| phase((s.level(x, i) - ground) * t / s.hbar()) * c)
        .collect())
}

/// `⟨Ψ(0)|Ψ(t)⟩` for the whole composite system.
pub fn full_overlap(s: &OracleScenario, t: f64) -> Complex64 {
    let ground = s.ground_energy();
    let pops = s.input().populations();
    let weights = s.weights();
    let mut total = Complex64::new(0.0, 0.0);
    for (x, &px) in pops.iter().enumerate() {
        for (i, &pi) in weights.iter().enumerate() {
            total += px * pi * phase((s.level(x, i) - ground) * t / s.hbar());
        }
    }
    total
}

/// Composite state `U(t)|Ψ(0)⟩`, index `x · d_O + i`.
///
/// The Hamiltonian diagonal is assembled from the register operators with
/// explicit Kronecker sums `H_I ⊗ 1 + 1 ⊗ H_O + Σ_k C_k A_k ⊗ B_k`, independent
/// of the frequency bookkeeping used by [`corr_amplitude`].
pub fn brute_force_state(s: &OracleScenario, t: f64) -> Result<Vec<Complex64>, AmplitudeError> {
    let d_in = s.input().len();
    let d_out = s.output().dim();
    if d_in * d_out > BRUTE_FORCE_LIMIT {
        return Err(AmplitudeError::DimensionTooLarge(d_in * d_out));
    }
    let ones_in = vec![1.0; d_in];
    let ones_out = vec![1.0; d_out];
    let mut diag = kron(s.input().eps(), &ones_out);
    add_scaled(&mut diag, &kron(&ones_in, s.output().energies()), 1.0);
    match &s.coupling().coupling {
        Coupling::Single { strength } => {
            add_scaled(
                &mut diag,
                &kron(s.input().a(), s.output().bsigned()),
                *strength,
            );
        }
        Coupling::Multi { terms } => {
            for term in terms {
                add_scaled(&mut diag, &kron(&term.a, &term.b), term.strength);
            }
        }
    }
    let ground = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let initial = kron_c(s.input().amp(), s.output().c0());
    Ok(initial
        .iter()
        .zip(&diag)
        .map(|(&psi, &e)| {
            let theta = -(e - ground) * t / s.hbar();
            psi * Complex64::from_polar(1.0, theta)
        })
        .collect())
}

/// `D_xx'` recovered from a composite state by contracting the two branches.
/// `None` when either branch amplitude vanishes.
pub fn contract_branches(state: &[Complex64], s: &OracleScenario, pair: Pair) -> Option<Complex64> {
    let d_out = s.output().dim();
    let amp = s.input().amp();
    let (cx, cy) = (amp[pair.x], amp[pair.y]);
    if cx.norm() == 0.0 || cy.norm() == 0.0 {
        return None;
    }
    let bx = &state[pair.x * d_out..(pair.x + 1) * d_out];
    let by = &state[pair.y * d_out..(pair.y + 1) * d_out];
    let raw: Complex64 = bx.iter().zip(by).map(|(u, v)| u * v.conj()).sum();
    Some(raw / (cx * cy.conj()))
}

/// `⟨a|b⟩`, antilinear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(u, v)| u.conj() * v).sum()
}

fn kron(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter()
        .flat_map(|&u| b.iter().map(move |&v| u * v))
        .collect()
}

fn kron_c(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&u| b.iter().map(move |&v| u * v))
        .collect()
}

fn add_scaled(acc: &mut [f64], v: &[f64], k: f64) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += k * b;
    }
}

/// Sampled `D_xx'(t)` and `z_xx'(t)` on a caller-specified grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTrace {
    pub pair: Pair,
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    pub zvalues: Vec<Complex64>,
}

pub fn trace(
    s: &OracleScenario,
    pair: Pair,
    times: &[f64],
) -> Result<CorrelationTrace, ModelError> {
    s.check_pair(pair)?;
    let freqs = s.pair_frequencies(pair);
    let eps = s.input().eps();
    let free = (eps[pair.x] - eps[pair.y]) / s.hbar();
    let profile = &s.coupling().profile;
    let mut values = Vec::with_capacity(times.len());
    let mut zvalues = Vec::with_capacity(times.len());
    for &t in times {
        let interaction_time = if profile.is_constant() {
            t
        } else {
            profile.exact_integral(t)
        };
        let z = weighted_phase_sum(&freqs, s.weights(), interaction_time);
        zvalues.push(z);
        values.push(phase(free * t) * z);
    }
    Ok(CorrelationTrace {
        pair,
        times: times.to_vec(),
        values,
        zvalues,
    })
}

/// `n` evenly spaced samples on `[0, t_max]`, endpoints included.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect(),
    }
}

//! Schmidt decomposition of bipartite pure states and entanglement persistence.
//!
//! Entanglement established by an oracle is *persistent*: the branch
//! populations on the input register never change, because the coupling
//! commutes with the input Hamiltonian. A trajectory is classified by
//! reconstructing the input-register populations from its Schmidt data,
//! `pop_k(t) = Σ_j λ_j(t)² |⟨e_k|u_j(t)⟩|²`, on a fixed pointer basis `{e_k}`
//! and comparing them with `t = 0` through the Bhattacharyya fidelity.

pub mod heisenberg;
pub mod jacobi;

use num_complex::Complex64;
use serde::Serialize;

use crate::amplitude::brute_force_state;
use crate::error::SchmidtError;
use crate::model::OracleScenario;

/// Largest factor dimension accepted by [`schmidt_decompose`].
pub const FACTOR_LIMIT: usize = 64;
/// Fidelity below `1 − PERSISTENCE_TOL` marks a trajectory as nonpersistent.
pub const PERSISTENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct SchmidtSnapshot {
    pub t: f64,
    /// `λ₁ ≥ λ₂ ≥ … ≥ 0`, `min(d_I, d_O)` entries.
    pub coefficients: Vec<f64>,
    /// Input-register vectors, first nonzero component real-positive.
    pub left_vectors: Vec<Vec<Complex64>>,
    pub right_vectors: Vec<Vec<Complex64>>,
    /// Entanglement entropy in bits.
    pub entropy: f64,
    /// Orthogonality residual of the underlying SVD.
    #[serde(skip)]
    pub residual: f64,
}

impl SchmidtSnapshot {
    /// Rebuilds `Σ_k λ_k |u_k⟩ ⊗ |w_k⟩` in row-major order.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let d_in = self.left_vectors.first().map_or(0, Vec::len);
        let d_out = self.right_vectors.first().map_or(0, Vec::len);
        let mut out = vec![Complex64::new(0.0, 0.0); d_in * d_out];
        for (k, &lam) in self.coefficients.iter().enumerate() {
            for (x, u) in self.left_vectors[k].iter().enumerate() {
                for (i, w) in self.right_vectors[k].iter().enumerate() {
                    out[x * d_out + i] += lam * u * w;
                }
            }
        }
        out
    }

    /// Input populations on the orthonormal basis `pointer`.
    pub fn populations_in(&self, pointer: &[Vec<Complex64>]) -> Vec<f64> {
        pointer
            .iter()
            .map(|e| {
                self.coefficients
                    .iter()
                    .zip(&self.left_vectors)
                    .map(|(lam, u)| {
                        lam * lam
                            * e.iter()
                                .zip(u)
                                .map(|(a, b)| a.conj() * b)
                                .sum::<Complex64>()
                                .norm_sqr()
                    })
                    .sum()
            })
            .collect()
    }
}

/// Shannon entropy of `λ²` in bits.
pub fn entropy_bits(coefficients: &[f64]) -> f64 {
    coefficients
        .iter()
        .map(|l| l * l)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Decomposes a pure state with index `x · d_out + i`.
pub fn schmidt_decompose(
    state: &[Complex64],
    d_in: usize,
    d_out: usize,
) -> Result<SchmidtSnapshot, SchmidtError> {
    if state.len() != d_in * d_out || d_in == 0 || d_out == 0 {
        return Err(SchmidtError::DimensionMismatch {
            len: state.len(),
            d_in,
            d_out,
        });
    }
    if d_in > FACTOR_LIMIT || d_out > FACTOR_LIMIT {
        return Err(SchmidtError::FactorTooLarge(d_in.max(d_out)));
    }
    let svd = jacobi::svd(state, d_in, d_out);
    let mut left = svd.u;
    // right Schmidt vectors are conj(V) so that M = Σ λ u wᵀ
    let mut right: Vec<Vec<Complex64>> = svd
        .v
        .iter()
        .map(|c| c.iter().map(|z| z.conj()).collect())
        .collect();
    for (u, w) in left.iter_mut().zip(right.iter_mut()) {
        if let Some(first) = u.iter().find(|z| z.norm() > 1e-12).copied() {
            let unit = first / first.norm();
            for z in u.iter_mut() {
                *z /= unit;
            }
            for z in w.iter_mut() {
                *z *= unit;
            }
        }
    }
    Ok(SchmidtSnapshot {
        t: 0.0,
        entropy: entropy_bits(&svd.sigma),
        coefficients: svd.sigma,
        left_vectors: left,
        right_vectors: right,
        residual: svd.residual,
    })
}

/// Snapshots of an oracle scenario's composite state.
pub fn schmidt_trace(
    s: &OracleScenario,
    times: &[f64],
) -> Result<Vec<SchmidtSnapshot>, SchmidtError> {
    let (d_in, d_out) = (s.input().len(), s.output().dim());
    times
        .iter()
        .map(|&t| {
            let state = brute_force_state(s, t)?;
            let mut snap = schmidt_decompose(&state, d_in, d_out)?;
            snap.t = t;
            Ok(snap)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PersistenceReport {
    pub persistent: bool,
    /// Smallest `Σ_k √(pop_k(t) pop_k(0))` over the sampled times.
    pub min_pointer_fidelity: f64,
    /// Time at which the minimum occurs.
    pub worst_time: f64,
}

fn fidelity(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a.max(0.0) * b.max(0.0)).sqrt())
        .sum()
}

fn classify_on(snapshots: &[SchmidtSnapshot], pointer: &[Vec<Complex64>]) -> PersistenceReport {
    let reference = snapshots[0].populations_in(pointer);
    let mut worst = (1.0f64, snapshots[0].t);
    for snap in snapshots {
        let f = fidelity(&reference, &snap.populations_in(pointer)).min(1.0);
        if f < worst.0 {
            worst = (f, snap.t);
        }
    }
    PersistenceReport {
        persistent: worst.0 >= 1.0 - PERSISTENCE_TOL,
        min_pointer_fidelity: worst.0,
        worst_time: worst.1,
    }
}

/// Pointer basis: the input-register labels.
pub fn persistence_classify(
    s: &OracleScenario,
    times: &[f64],
) -> Result<PersistenceReport, SchmidtError> {
    if times.len() < 2 {
        return Err(SchmidtError::TooFewTimes);
    }
    Ok(classify_on_labels(&schmidt_trace(s, times)?))
}

/// Label-basis classification of precomputed oracle snapshots.
///
/// # Panics
/// If `snapshots` is empty.
pub fn classify_on_labels(snapshots: &[SchmidtSnapshot]) -> PersistenceReport {
    let d_in = snapshots[0].left_vectors.first().map_or(0, Vec::len);
    let labels: Vec<Vec<Complex64>> = (0..d_in)
        .map(|x| {
            let mut e = vec![Complex64::new(0.0, 0.0); d_in];
            e[x] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    classify_on(snapshots, &labels)
}

/// Pointer basis: the left Schmidt vectors of the first snapshot.
///
/// # Panics
/// If `snapshots` is empty.
pub fn classify_trajectory(snapshots: &[SchmidtSnapshot]) -> PersistenceReport {
    classify_on(snapshots, &snapshots[0].left_vectors.clone())
}

//! Lower bounds on the time to reach subsystem orthogonality, interaction
//! energy statistics, and the full-state comparison bounds.
//!
//! Applying `cos u ≥ 1 − (2/π)(u + sin u)` (valid for `u ≥ 0`) branch by branch
//! to `Re z` gives
//!
//! ```text
//! Re z + (2/π) Im z ≥ 1 − 4α/π − (2/π) t Σ_i p_i |ν_i|
//! ```
//!
//! so `z = 0` cannot happen before `τ = (1 − 4α/π) π / (2 Σ_i p_i |ν_i|)`. For a
//! single-term coupling `ħ Σ_i p_i |ν_i| = C (a_x − a_x') (B1 + B2)` and `τ`
//! equals `(1 − 4α/π) h / (4 C (a_x − a_x') (B1 + B2))`.
//!
//! The same argument applied to `conj(z)` swaps the branches (`α → 1 − α`);
//! both orientations are valid and the larger bound is reported.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::BoundError;
use crate::model::{pair_geometry, Coupling, OracleScenario, Pair, PairGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Direct,
    Conjugate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairBound {
    Bounded {
        tau: f64,
        orientation: Orientation,
        alpha_used: f64,
    },
    /// No interaction frequency: `|z| ≡ 1`.
    Unreachable,
}

impl PairBound {
    pub fn tau(&self) -> f64 {
        match self {
            Self::Bounded { tau, .. } => *tau,
            Self::Unreachable => f64::INFINITY,
        }
    }

    pub fn is_unreachable(&self) -> bool {
        matches!(self, Self::Unreachable)
    }
}

/// `(1 − 4α/π) π / (2 rate)`, clamped at zero.
fn frequency_form(alpha: f64, rate: f64) -> f64 {
    (1.0 - 4.0 * alpha / PI).max(0.0) * PI / (2.0 * rate)
}

/// Picks the orientation with the smaller branch weight.
fn orient(alpha: f64) -> (Orientation, f64) {
    if alpha <= 1.0 - alpha {
        (Orientation::Direct, alpha)
    } else {
        (Orientation::Conjugate, 1.0 - alpha)
    }
}

pub fn tau_pair(g: &PairGeometry) -> PairBound {
    let rate = g.mean_abs_frequency();
    if g.is_degenerate() || rate == 0.0 {
        return PairBound::Unreachable;
    }
    let direct = frequency_form(g.alpha, rate);
    let conjugate = frequency_form(1.0 - g.alpha, rate);
    // ties (α = ½ up to rounding) report the direct orientation
    if direct >= conjugate * (1.0 - 1e-12) {
        PairBound::Bounded {
            tau: direct,
            orientation: Orientation::Direct,
            alpha_used: g.alpha,
        }
    } else {
        PairBound::Bounded {
            tau: conjugate,
            orientation: Orientation::Conjugate,
            alpha_used: 1.0 - g.alpha,
        }
    }
}

/// Bound for a multi-term interaction, where `ν_i = Σ_k C_k (a_kx − a_kx') b_ki / ħ`.
/// For a single-term coupling this is [`tau_pair`] on the same geometry.
pub fn generalized_tau_pair(s: &OracleScenario, pair: Pair) -> Result<PairBound, BoundError> {
    Ok(tau_pair(&pair_geometry(s, pair)?))
}

/// Absolute minimum of the bound over priors with the given spectrum: the
/// rate `Σ p_i |ν_i|` replaced by its supremum `max_i |ν_i|`.
pub fn floor22(s: &OracleScenario, pair: Pair) -> Result<f64, BoundError> {
    if s.output().bsigned().iter().all(|&b| b == 0.0) {
        return Err(BoundError::ZeroSpectrum);
    }
    let g = pair_geometry(s, pair)?;
    let top = g.max_abs_frequency();
    if top == 0.0 {
        return Err(BoundError::Degenerate);
    }
    let (_, alpha_used) = orient(g.alpha);
    Ok(frequency_form(alpha_used, top))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionEnergy {
    /// `⟨A_I⟩ = Σ_x |C_x|² a_x`.
    #[serde(rename = "mean_A")]
    pub mean_a: f64,
    /// `Σ_{b_i ≥ 0} p_i b_i` over the signed output spectrum.
    #[serde(rename = "B1")]
    pub b1: f64,
    /// `Σ_{b_i < 0} p_i |b_i|`.
    #[serde(rename = "B2")]
    pub b2: f64,
    /// `min(B1, B2) / max(B1, B2)`; 1 when both vanish.
    pub kappa: f64,
    /// `⟨H_int⟩` under the product distribution `|C_x|² p_i`.
    #[serde(rename = "H_int_mean")]
    pub h_int_mean: f64,
    /// `ΔH_int`.
    #[serde(rename = "H_int_spread")]
    pub h_int_spread: f64,
    /// `⟨H⟩ − E_○`.
    #[serde(rename = "H_total_mean")]
    pub h_total_mean: f64,
}

pub fn interaction_energy(s: &OracleScenario) -> InteractionEnergy {
    let pops = s.input().populations();
    let weights = s.weights();
    let mean_a = pops.iter().zip(s.input().a()).map(|(p, a)| p * a).sum();
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for (&b, &p) in s.output().bsigned().iter().zip(weights) {
        if b >= 0.0 {
            b1 += p * b;
        } else {
            b2 -= p * b;
        }
    }
    let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
    let kappa = if hi == 0.0 { 1.0 } else { lo / hi };

    let (h_int_mean, h_int_spread) = moments(s, |x, i| s.interaction_energy(x, i));
    let ground = s.ground_energy();
    let (h_mean, _) = moments(s, |x, i| s.level(x, i));
    InteractionEnergy {
        mean_a,
        b1,
        b2,
        kappa,
        h_int_mean,
        h_int_spread,
        h_total_mean: h_mean - ground,
    }
}

/// Mean and standard deviation of `f(x, i)` under `|C_x|² p_i`.
fn moments(s: &OracleScenario, f: impl Fn(usize, usize) -> f64) -> (f64, f64) {
    let pops = s.input().populations();
    let weights = s.weights();
    let mut mean = 0.0;
    for (x, &px) in pops.iter().enumerate() {
        for (i, &pi) in weights.iter().enumerate() {
            mean += px * pi * f(x, i);
        }
    }
    let mut var = 0.0;
    for (x, &px) in pops.iter().enumerate() {
        for (i, &pi) in weights.iter().enumerate() {
            let d = f(x, i) - mean;
            var += px * pi * d * d;
        }
    }
    (mean, var.max(0.0).sqrt())
}

/// Relative size below which an energy gap counts as zero.
const GAP_TOLERANCE: f64 = 1e-14;

fn energy_scale(s: &OracleScenario) -> f64 {
    let mut scale: f64 = 1.0;
    for x in 0..s.input().len() {
        for i in 0..s.output().dim() {
            scale = scale.max(s.level(x, i).abs());
        }
    }
    scale
}

/// Margolus–Levitin time `h / 4(⟨H⟩ − E_○)` for full-state orthogonality;
/// `+∞` for a ground state.
pub fn ml_bound(s: &OracleScenario) -> f64 {
    let gap = interaction_energy(s).h_total_mean;
    if gap <= GAP_TOLERANCE * energy_scale(s) {
        return f64::INFINITY;
    }
    s.planck() / (4.0 * gap)
}

/// Spread-in-energy time `h / 4ΔH` for full-state orthogonality; `+∞` when the
/// state is stationary.
pub fn mt_bound(s: &OracleScenario) -> f64 {
    let (_, spread) = moments(s, |x, i| s.level(x, i));
    if spread <= GAP_TOLERANCE * energy_scale(s) {
        return f64::INFINITY;
    }
    s.planck() / (4.0 * spread)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    /// Oriented pair as labels.
    pub pair: [String; 2],
    /// `a_x − a_x'` of the oriented pair (input-register eigenvalues).
    pub delta_a: f64,
    /// Per-term `a_kx − a_kx'` for a multi-term coupling.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_a_terms: Option<Vec<f64>>,
    pub alpha_used: Option<f64>,
    pub orientation: Option<Orientation>,
    /// `None` when the pair cannot become orthogonal.
    pub tau_pair: Option<f64>,
    pub floor22: Option<f64>,
    /// Empirical first-orthogonality time, when a search was run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_hat: Option<f64>,
    pub status: PairStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    Bounded,
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub pairs: Vec<PairRecord>,
    pub tau_ent: f64,
    pub energy: InteractionEnergy,
    /// `None` when infinite.
    pub ml_time: Option<f64>,
    pub mt_time: Option<f64>,
}

pub fn tau_ent(s: &OracleScenario) -> Result<BoundReport, BoundError> {
    let mut pairs = Vec::with_capacity(s.pairs().len());
    let mut sup: Option<f64> = None;
    for &pair in s.pairs() {
        let g = pair_geometry(s, pair)?;
        let labels = s.input().labels();
        let names = [labels[g.pair.x].clone(), labels[g.pair.y].clone()];
        let delta_a = s.input().a()[g.pair.x] - s.input().a()[g.pair.y];
        let terms = (!is_single(s)).then(|| g.delta_a.clone());
        let record = match tau_pair(&g) {
            PairBound::Bounded {
                tau,
                orientation,
                alpha_used,
            } => {
                sup = Some(sup.map_or(tau, |m| m.max(tau)));
                PairRecord {
                    pair: names,
                    delta_a,
                    delta_a_terms: terms.clone(),
                    alpha_used: Some(alpha_used),
                    orientation: Some(orientation),
                    tau_pair: Some(tau),
                    floor22: floor22(s, pair).ok(),
                    tau_hat: None,
                    status: PairStatus::Bounded,
                }
            }
            PairBound::Unreachable => PairRecord {
                pair: names,
                delta_a,
                delta_a_terms: terms,
                alpha_used: None,
                orientation: None,
                tau_pair: None,
                floor22: None,
                tau_hat: None,
                status: PairStatus::Unreachable,
            },
        };
        pairs.push(record);
    }
    let tau_ent = sup.ok_or(BoundError::NoFeasiblePair)?;
    let finite = |v: f64| v.is_finite().then_some(v);
    Ok(BoundReport {
        pairs,
        tau_ent,
        energy: interaction_energy(s),
        ml_time: finite(ml_bound(s)),
        mt_time: finite(mt_bound(s)),
    })
}

/// True when the interaction has the single-term form `C A ⊗ B`.
pub fn is_single(s: &OracleScenario) -> bool {
    matches!(s.coupling().coupling, Coupling::Single { .. })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingSpec, CouplingTerm, InputRegister, OutputRegister};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn build(a: &[f64], pops: &[f64], b: &[f64], p: &[f64], c: f64) -> OracleScenario {
        let labels = (0..a.len()).map(|k| format!("x{k}")).collect();
        let amp: Vec<f64> = pops.iter().map(|w| w.sqrt()).collect();
        let input =
            InputRegister::new(labels, vec![0.0; a.len()], a.to_vec(), reals(&amp)).unwrap();
        let c0: Vec<f64> = p.iter().map(|w| w.sqrt()).collect();
        let output = OutputRegister::new(vec![0.0; b.len()], b.to_vec(), reals(&c0)).unwrap();
        let pairs = (1..a.len()).map(|k| Pair::new(0, k)).collect();
        OracleScenario::new(input, output, CouplingSpec::single(c), pairs, 1.0).unwrap()
    }

    fn symmetric() -> OracleScenario {
        build(&[0.0, 1.0], &[0.5, 0.5], &[1.0, -1.0], &[0.5, 0.5], 1.0)
    }

    #[test]
    fn symmetric_pair_bound() {
        let g = pair_geometry(&symmetric(), Pair::new(0, 1)).unwrap();
        // (1 − 2/π)·2π/4
        assert_abs_diff_eq!(tau_pair(&g).tau(), 0.570_796_326_794_896_6, epsilon = 1e-12);
    }

    #[test]
    fn all_weight_on_negative_branch() {
        let s = build(&[1.0, 0.0], &[0.5, 0.5], &[1.0, -1.0], &[0.0, 1.0], 1.0);
        let b = tau_pair(&pair_geometry(&s, Pair::new(0, 1)).unwrap());
        assert_abs_diff_eq!(b.tau(), FRAC_PI_2, epsilon = 1e-12);
        assert!(matches!(
            b,
            PairBound::Bounded {
                orientation: Orientation::Direct,
                ..
            }
        ));
    }

    #[test]
    fn single_positive_eigenvalue_uses_conjugate() {
        let s = build(&[1.0, 0.0], &[0.5, 0.5], &[2.0], &[1.0], 1.0);
        let g = pair_geometry(&s, Pair::new(0, 1)).unwrap();
        assert_abs_diff_eq!(g.alpha, 1.0);
        match tau_pair(&g) {
            PairBound::Bounded {
                tau,
                orientation,
                alpha_used,
            } => {
                assert_eq!(orientation, Orientation::Conjugate);
                assert_abs_diff_eq!(alpha_used, 0.0);
                assert_abs_diff_eq!(tau, FRAC_PI_2 / 2.0, epsilon = 1e-12);
            }
            PairBound::Unreachable => panic!("expected a finite bound"),
        }
    }

    #[test]
    fn sup_over_pairs() {
        // Δa = 1 and Δa = 1.25 at the symmetric prior: 0.5708 and 0.4566.
        let s = build(
            &[0.0, 1.0, 1.25],
            &[0.4, 0.3, 0.3],
            &[1.0, -1.0],
            &[0.5, 0.5],
            1.0,
        );
        let report = tau_ent(&s).unwrap();
        assert_abs_diff_eq!(
            report.pairs[0].tau_pair.unwrap(),
            0.570_796_326_794_896_6,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            report.pairs[1].tau_pair.unwrap(),
            0.570_796_326_794_896_6 / 1.25,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(report.tau_ent, 0.570_796_326_794_896_6, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_pairs_are_infeasible() {
        let s = build(&[0.5, 0.5], &[0.5, 0.5], &[1.0, -1.0], &[0.5, 0.5], 1.0);
        assert_eq!(tau_ent(&s), Err(BoundError::NoFeasiblePair));
    }

    #[test]
    fn floor_uses_largest_eigenvalue() {
        let s = build(
            &[1.0, 0.0],
            &[0.5, 0.5],
            &[1.0, 2.0, -1.0],
            &[0.25, 0.25, 0.5],
            1.0,
        );
        let floor = floor22(&s, Pair::new(0, 1)).unwrap();
        assert_abs_diff_eq!(floor, 0.285_398_163_397_448_3, epsilon = 1e-12);
        assert!(floor <= tau_pair(&pair_geometry(&s, Pair::new(0, 1)).unwrap()).tau());

        // Weight concentrated on ±B_max: floor and bound coincide.
        let s = build(
            &[1.0, 0.0],
            &[0.5, 0.5],
            &[2.0, -2.0, 0.5],
            &[0.5, 0.5, 0.0],
            1.0,
        );
        let tau = tau_pair(&pair_geometry(&s, Pair::new(0, 1)).unwrap()).tau();
        assert_abs_diff_eq!(floor22(&s, Pair::new(0, 1)).unwrap(), tau, epsilon = 1e-15);

        let s = build(&[1.0, 0.0], &[0.5, 0.5], &[0.0, 0.0], &[0.5, 0.5], 1.0);
        assert_eq!(floor22(&s, Pair::new(0, 1)), Err(BoundError::ZeroSpectrum));
    }

    #[test]
    fn interaction_statistics() {
        let e = interaction_energy(&symmetric());
        assert_abs_diff_eq!(e.b1, 0.5);
        assert_abs_diff_eq!(e.b2, 0.5);
        assert_abs_diff_eq!(e.kappa, 1.0);
        assert_abs_diff_eq!(e.h_int_mean, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.h_int_spread, 0.5f64.sqrt(), epsilon = 1e-15);

        let s = build(&[0.3, 1.7], &[0.25, 0.75], &[0.8, 0.8], &[0.5, 0.5], 2.0);
        let e = interaction_energy(&s);
        assert_abs_diff_eq!(e.h_int_mean, 2.0 * e.mean_a * 0.8, epsilon = 1e-14);
    }

    #[test]
    fn comparison_bounds() {
        let s = symmetric();
        assert_abs_diff_eq!(ml_bound(&s), FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(mt_bound(&s), TAU / (4.0 * 0.5f64.sqrt()), epsilon = 1e-12);

        let doubled = build(&[0.0, 2.0], &[0.5, 0.5], &[1.0, -1.0], &[0.5, 0.5], 1.0);
        assert_abs_diff_eq!(ml_bound(&doubled), ml_bound(&s) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mt_bound(&doubled), mt_bound(&s) / 2.0, epsilon = 1e-12);

        // Ground state: all weight on the lowest level x1, b = −1.
        let ground = build(&[0.0, 1.0], &[0.0, 1.0], &[1.0, -1.0], &[0.0, 1.0], 1.0);
        assert_eq!(ml_bound(&ground), f64::INFINITY);
        assert_eq!(mt_bound(&ground), f64::INFINITY);
    }

    #[test]
    fn multi_term_reduces_and_generalizes() {
        let s = symmetric();
        let single = tau_pair(&pair_geometry(&s, Pair::new(0, 1)).unwrap()).tau();
        let one = s
            .with_coupling(CouplingSpec::multi(vec![CouplingTerm {
                strength: 1.0,
                a: vec![0.0, 1.0],
                b: vec![1.0, -1.0],
            }]))
            .unwrap();
        let multi = generalized_tau_pair(&one, Pair::new(0, 1)).unwrap().tau();
        assert!((single - multi).abs() <= 1e-15);

        // Two terms adding to ν = (+2, −2).
        let two = s
            .with_coupling(CouplingSpec::multi(vec![
                CouplingTerm {
                    strength: 1.0,
                    a: vec![1.0, 0.0],
                    b: vec![1.0, -1.0],
                },
                CouplingTerm {
                    strength: 0.5,
                    a: vec![2.0, 0.0],
                    b: vec![1.0, -1.0],
                },
            ]))
            .unwrap();
        let g = pair_geometry(&two, Pair::new(0, 1)).unwrap();
        assert_eq!(g.nu, vec![2.0, -2.0]);
        assert_abs_diff_eq!(tau_pair(&g).tau(), 0.285_398_163_397_448_3, epsilon = 1e-12);

        // Terms that cancel leave no frequency.
        let cancel = s
            .with_coupling(CouplingSpec::multi(vec![
                CouplingTerm {
                    strength: 1.0,
                    a: vec![1.0, 0.0],
                    b: vec![1.0, -1.0],
                },
                CouplingTerm {
                    strength: -1.0,
                    a: vec![1.0, 0.0],
                    b: vec![1.0, -1.0],
                },
            ]))
            .unwrap();
        assert!(generalized_tau_pair(&cancel, Pair::new(0, 1))
            .unwrap()
            .is_unreachable());
    }
}

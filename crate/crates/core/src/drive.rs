//! Time-dependent nondemolition couplings.
//!
//! A profile `g(t) ≥ 0` multiplies the interaction Hamiltonian. Because the
//! Hamiltonian commutes with itself at all times, the interaction phase
//! `γ t` is replaced by `γ G(t)` with `G(t) = ∫₀ᵗ g`. Free energies keep the
//! bare time.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitude::{phase, weighted_phase_sum};
use crate::error::{DriveError, ModelError};
use crate::model::{OracleScenario, Pair};
use crate::schmidt::heisenberg::{heisenberg_state, Initial};

pub const DEFAULT_PANELS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriveProfile {
    #[default]
    Constant,
    /// Rises linearly from 0 at `t = 0` to 1 at `t_ramp`, then stays at 1.
    LinearRamp { t_ramp: f64 },
    /// `exp(−(t − t0)² / 2σ²)`.
    GaussianPulse { t0: f64, sigma: f64 },
    /// Piecewise-linear through `(t, g)` knots, zero outside the knot range.
    /// A first knot with nonzero `g` is a sudden switch-on.
    Table { knots: Vec<(f64, f64)> },
}

impl DriveProfile {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::BadProfile(msg));
        match self {
            Self::Constant => Ok(()),
            Self::LinearRamp { t_ramp } => {
                if t_ramp.is_finite() && *t_ramp > 0.0 {
                    Ok(())
                } else {
                    bad(format!("t_ramp must be positive, got {t_ramp}"))
                }
            }
            Self::GaussianPulse { t0, sigma } => {
                if t0.is_finite() && sigma.is_finite() && *sigma > 0.0 {
                    Ok(())
                } else {
                    bad(format!("gaussian pulse needs finite t0 and positive sigma, got t0={t0} sigma={sigma}"))
                }
            }
            Self::Table { knots } => {
                if knots.is_empty() {
                    return bad("table needs at least one knot".into());
                }
                if knots
                    .iter()
                    .any(|(t, g)| !t.is_finite() || !g.is_finite() || *g < 0.0)
                {
                    return bad("table knots must be finite with g >= 0".into());
                }
                if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return bad("table knot times must be strictly increasing".into());
                }
                Ok(())
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant)
    }

    /// The multiplier `g(t)`.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Self::Constant => 1.0,
            Self::LinearRamp { t_ramp } => (t / t_ramp).clamp(0.0, 1.0),
            Self::GaussianPulse { t0, sigma } => {
                let u = (t - t0) / sigma;
                (-0.5 * u * u).exp()
            }
            Self::Table { knots } => table_value(knots, t),
        }
    }

    /// Closed-form `∫₀ᵗ g`.
    pub fn exact_integral(&self, t: f64) -> f64 {
        match self {
            Self::Constant => t,
            Self::LinearRamp { t_ramp } => {
                if t <= *t_ramp {
                    0.5 * t * t / t_ramp
                } else {
                    0.5 * t_ramp + (t - t_ramp)
                }
            }
            Self::GaussianPulse { t0, sigma } => {
                let scale = sigma * std::f64::consts::SQRT_2;
                0.5 * scale
                    * std::f64::consts::PI.sqrt()
                    * (libm::erf((t - t0) / scale) + libm::erf(t0 / scale))
            }
            Self::Table { knots } => table_integral(knots, t),
        }
    }
}

fn table_value(knots: &[(f64, f64)], t: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if t < first.0 || t > last.0 {
        return 0.0;
    }
    if knots.len() == 1 {
        return first.1;
    }
    let k = knots
        .partition_point(|(tk, _)| *tk <= t)
        .clamp(1, knots.len() - 1);
    let (t0, g0) = knots[k - 1];
    let (t1, g1) = knots[k];
    g0 + (g1 - g0) * (t - t0) / (t1 - t0)
}

fn table_integral(knots: &[(f64, f64)], t: f64) -> f64 {
    let mut total = 0.0;
    for w in knots.windows(2) {
        let (a, ga) = w[0];
        let (b, gb) = w[1];
        if t <= a {
            break;
        }
        let end = t.min(b);
        let g_end = ga + (gb - ga) * (end - a) / (b - a);
        total += 0.5 * (ga + g_end) * (end - a);
    }
    total
}

/// Accumulated interaction time `G(t) = ∫₀ᵗ g(t′) dt′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccumulatedPhase {
    pub t: f64,
    #[serde(rename = "G")]
    pub g: f64,
}

/// Composite Simpson rule over `[a, b]` with `n` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<f64, DriveError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(DriveError::BadPanels(n));
    }
    if b == a {
        return Ok(0.0);
    }
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..n {
        let v = f(a + k as f64 * h);
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    Ok(h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even))
}

pub fn accumulate(
    profile: &DriveProfile,
    t: f64,
    n_panels: usize,
) -> Result<AccumulatedPhase, DriveError> {
    if n_panels < 2 || !n_panels.is_multiple_of(2) {
        return Err(DriveError::BadPanels(n_panels));
    }
    if t.is_nan() || t < 0.0 {
        return Err(DriveError::NegativeTime(t));
    }
    let g = match profile {
        DriveProfile::Constant => t,
        DriveProfile::Table { knots } => table_integral(knots, t),
        // Split at the kink so each piece is smooth.
        DriveProfile::LinearRamp { t_ramp } if t > *t_ramp => {
            let f = |s| profile.value(s);
            simpson(f, 0.0, *t_ramp, n_panels)? + simpson(f, *t_ramp, t, n_panels)?
        }
        _ => simpson(|s| profile.value(s), 0.0, t, n_panels)?,
    };
    Ok(AccumulatedPhase { t, g })
}

/// Correlation amplitude under a driven coupling: `Σ p_i exp(−i ν_i G(t))`.
pub fn driven_corr_amplitude(
    s: &OracleScenario,
    pair: Pair,
    t: f64,
    profile: &DriveProfile,
    n_panels: usize,
) -> Result<Complex64, DriveError> {
    s.check_pair(pair)
        .map_err(|e| DriveError::Amplitude(e.into()))?;
    let g = accumulate(profile, t, n_panels)?.g;
    Ok(weighted_phase_sum(
        &s.pair_frequencies(pair),
        s.weights(),
        g,
    ))
}

/// `D_xx'(t)` with `Ct` replaced by `C·G(t)` in the interaction phases; the
/// free-energy prefactor keeps the bare time.
pub fn driven_overlap_d(
    s: &OracleScenario,
    pair: Pair,
    t: f64,
    profile: &DriveProfile,
    n_panels: usize,
) -> Result<Complex64, DriveError> {
    let z = driven_corr_amplitude(s, pair, t, profile, n_panels)?;
    let eps = s.input().eps();
    Ok(phase((eps[pair.x] - eps[pair.y]) / s.hbar() * t) * z)
}

/// Earliest wall-clock time at which `G(t)` reaches `target`, by bisection on
/// the nondecreasing `G`. `None` when the profile saturates below `target`.
pub fn effective_time(
    profile: &DriveProfile,
    target: f64,
    n_panels: usize,
) -> Result<Option<f64>, DriveError> {
    if target <= 0.0 {
        return Ok(Some(0.0));
    }
    let g_at = |t: f64| accumulate(profile, t, n_panels).map(|a| a.g);
    let mut hi = target.max(1.0);
    let mut g_hi = g_at(hi)?;
    let mut doublings = 0;
    while g_hi < target {
        let next = g_at(2.0 * hi)?;
        doublings += 1;
        if next - g_hi <= 1e-15 * next.abs().max(1.0) || doublings > 200 {
            return Ok(None);
        }
        hi *= 2.0;
        g_hi = next;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g_at(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    Ok(Some(hi))
}

/// Evolves the two-qubit demo state under `J(t) S₁·S₂` twice: once with the
/// accumulated coupling `K(t)` from quadrature, once with the closed-form `K`.
/// Returns the largest component-wise deviation.
pub fn heisenberg_equivalence_check(
    amplitude: f64,
    profile: &DriveProfile,
    t: f64,
    n_panels: usize,
) -> Result<f64, DriveError> {
    let k_quad = amplitude * accumulate(profile, t, n_panels)?.g;
    let k_exact = amplitude * profile.exact_integral(t);
    let a = heisenberg_state(Initial::PlusUp, k_quad);
    let b = heisenberg_state(Initial::PlusUp, k_exact);
    Ok(a.iter()
        .zip(&b)
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_profile_is_identity() {
        assert_eq!(accumulate(&DriveProfile::Constant, 3.0, 2).unwrap().g, 3.0);
    }

    #[test]
    fn ramp_triangle_area() {
        let p = DriveProfile::LinearRamp { t_ramp: 2.0 };
        assert_abs_diff_eq!(accumulate(&p, 2.0, 200).unwrap().g, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(accumulate(&p, 5.0, 200).unwrap().g, 4.0, epsilon = 1e-13);
    }

    #[test]
    fn gaussian_matches_error_function() {
        let p = DriveProfile::GaussianPulse {
            t0: 5.0,
            sigma: 1.0,
        };
        // σ√(2π)(1 − erfc(5/√2)) with erfc(5/√2) = 5.733031437583878e-7.
        let expected = (2.0 * std::f64::consts::PI).sqrt() * (1.0 - 5.733031437583878e-7);
        assert_abs_diff_eq!(p.exact_integral(10.0), expected, epsilon = 1e-14);
        let g = accumulate(&p, 10.0, 200).unwrap().g;
        assert_abs_diff_eq!(g, expected, epsilon = 1e-9);
    }

    #[test]
    fn odd_or_tiny_panel_counts_rejected() {
        assert_eq!(
            accumulate(&DriveProfile::Constant, 1.0, 3),
            Err(DriveError::BadPanels(3))
        );
        assert_eq!(
            accumulate(&DriveProfile::Constant, 1.0, 0),
            Err(DriveError::BadPanels(0))
        );
    }

    #[test]
    fn table_switch_on_is_exact() {
        let p = DriveProfile::Table {
            knots: vec![(1.0, 2.0), (3.0, 2.0), (4.0, 0.0)],
        };
        assert_eq!(p.value(0.5), 0.0);
        assert_eq!(p.value(1.0), 2.0);
        assert_abs_diff_eq!(accumulate(&p, 2.0, 2).unwrap().g, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(accumulate(&p, 10.0, 2).unwrap().g, 5.0, epsilon = 1e-15);
    }

    #[test]
    fn table_validation() {
        let p = DriveProfile::Table {
            knots: vec![(1.0, 1.0), (1.0, 2.0)],
        };
        assert!(p.validate().is_err());
        let p = DriveProfile::Table { knots: vec![] };
        assert!(p.validate().is_err());
    }

    #[test]
    fn effective_time_inverts_ramp() {
        let p = DriveProfile::LinearRamp { t_ramp: 2.0 };
        let t = effective_time(&p, 1.0, 200).unwrap().unwrap();
        assert_abs_diff_eq!(t, 2.0, epsilon = 1e-12);
        let pulse = DriveProfile::GaussianPulse {
            t0: 1.0,
            sigma: 0.1,
        };
        assert_eq!(effective_time(&pulse, 10.0, 200).unwrap(), None);
    }

    #[test]
    fn simpson_fourth_order() {
        let p = DriveProfile::GaussianPulse {
            t0: 5.0,
            sigma: 1.0,
        };
        let exact = p.exact_integral(6.0);
        let e1 = (accumulate(&p, 6.0, 100).unwrap().g - exact).abs();
        let e2 = (accumulate(&p, 6.0, 200).unwrap().g - exact).abs();
        let order = (e1 / e2).log2();
        assert!(order > 3.8 && order < 4.2, "order {order}");
    }
}

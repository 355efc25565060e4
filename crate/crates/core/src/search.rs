//! Empirical first-orthogonality times.
//!
//! Orthogonality is treated as a modulus condition: the search returns the
//! earliest `t` with `|z(t)| ≤ ε`. The modulus is scanned on a uniform grid
//! resolving the fastest frequency 64 times per period, and the first sign
//! change of `|z| − ε` is refined by bisection.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::bounds::{tau_pair, BoundReport, PairBound};
use crate::error::SearchError;
use crate::model::{pair_geometry, OracleScenario, Pair};

pub const DEFAULT_EPSILON: f64 = 1e-3;
/// Grid points per period of the fastest frequency.
pub const SAMPLES_PER_PERIOD: f64 = 64.0;
/// Default horizon in periods of the slowest nonzero frequency.
pub const HORIZON_PERIODS: f64 = 200.0;
/// Bisection stops once the bracket is this fraction of the fastest period.
pub const BRACKET_FRACTION: f64 = 1e-10;
/// Scans longer than this many grid points are cut short; the reported
/// horizon is shortened accordingly.
pub const MAX_GRID_POINTS: u64 = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    pub epsilon: f64,
    /// Defaults to 200 periods of the slowest nonzero frequency.
    pub horizon: Option<f64>,
    /// Overrides the grid step.
    pub dt: Option<f64>,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            horizon: None,
            dt: None,
        }
    }
}

impl SearchSettings {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(SearchError::BadEpsilon(self.epsilon));
        }
        if let Some(h) = self.horizon {
            if !(h > 0.0 && h.is_finite()) {
                return Err(SearchError::BadHorizon(h));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(SearchError::BadStep(dt));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchResult {
    /// `None` for full-state orthogonality.
    pub pair: Option<Pair>,
    /// `None` when no crossing occurs within the horizon.
    pub tau_hat: Option<f64>,
    pub epsilon: f64,
    pub horizon: f64,
    pub refined: bool,
    pub bracket: Option<(f64, f64)>,
}

impl SearchResult {
    pub fn is_unreachable(&self) -> bool {
        self.tau_hat.is_none()
    }
}

/// A weighted set of distinct angular frequencies, zero weights dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lines: Vec<(f64, f64)>,
}

impl Spectrum {
    pub fn new(freqs: &[f64], weights: &[f64]) -> Self {
        let mut lines: Vec<(f64, f64)> = freqs
            .iter()
            .copied()
            .zip(weights.iter().copied())
            .filter(|&(_, w)| w > 0.0)
            .collect();
        lines.sort_by(|l, r| l.0.total_cmp(&r.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(lines.len());
        for (f, w) in lines {
            match merged.last_mut() {
                Some(last) if last.0 == f => last.1 += w,
                _ => merged.push((f, w)),
            }
        }
        Self { lines: merged }
    }

    /// `|Σ_k w_k exp(−i ω_k t)|`.
    pub fn modulus(&self, t: f64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for &(f, w) in &self.lines {
            let (s, c) = (f * t).sin_cos();
            re += w * c;
            im -= w * s;
        }
        re.hypot(im)
    }

    pub fn max_abs(&self) -> f64 {
        self.lines.iter().fold(0.0, |m, &(f, _)| m.max(f.abs()))
    }

    pub fn min_abs_nonzero(&self) -> Option<f64> {
        self.lines
            .iter()
            .map(|&(f, _)| f.abs())
            .filter(|&f| f > 0.0)
            .min_by(f64::total_cmp)
    }

    /// Shift every frequency so the smallest becomes zero. Moduli are unchanged.
    fn shifted_to_zero(mut self) -> Self {
        if let Some(&(lowest, _)) = self.lines.first() {
            for line in &mut self.lines {
                line.0 -= lowest;
            }
        }
        self
    }
}

/// Earliest `t` in `(0, horizon]` with `spectrum.modulus(t) ≤ ε`.
pub fn first_crossing(
    spectrum: &Spectrum,
    settings: &SearchSettings,
) -> Result<SearchResult, SearchError> {
    settings.validate()?;
    let eps = settings.epsilon;
    let unreachable = |horizon| SearchResult {
        pair: None,
        tau_hat: None,
        epsilon: eps,
        horizon,
        refined: false,
        bracket: None,
    };
    let omega_max = spectrum.max_abs();
    let Some(omega_min) = spectrum.min_abs_nonzero() else {
        return Ok(unreachable(settings.horizon.unwrap_or(0.0)));
    };
    let period = TAU / omega_max;
    let dt = settings.dt.unwrap_or(period / SAMPLES_PER_PERIOD);
    let mut horizon = settings
        .horizon
        .unwrap_or(HORIZON_PERIODS * TAU / omega_min);
    let f = |t: f64| spectrum.modulus(t) - eps;

    let mut steps = (horizon / dt).ceil() as u64;
    if steps > MAX_GRID_POINTS {
        steps = MAX_GRID_POINTS;
        horizon = steps as f64 * dt;
    }
    let mut t_prev = 0.0;
    for k in 1..=steps {
        let t = (k as f64 * dt).min(horizon);
        if f(t) <= 0.0 {
            let (mut lo, mut hi) = (t_prev, t);
            let tol = BRACKET_FRACTION * period;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(SearchResult {
                pair: None,
                tau_hat: Some(hi),
                epsilon: eps,
                horizon,
                refined: true,
                bracket: Some((lo, hi)),
            });
        }
        t_prev = t;
    }
    Ok(unreachable(horizon))
}

pub fn first_orthogonality(
    s: &OracleScenario,
    pair: Pair,
    settings: &SearchSettings,
) -> Result<SearchResult, SearchError> {
    s.check_pair(pair)?;
    let spectrum = Spectrum::new(&s.pair_frequencies(pair), s.weights());
    let mut result = first_crossing(&spectrum, settings)?;
    result.pair = Some(pair);
    Ok(result)
}

/// First time `|⟨Ψ(0)|Ψ(t)⟩| ≤ ε` for the whole composite state.
pub fn first_full_orthogonality(
    s: &OracleScenario,
    settings: &SearchSettings,
) -> Result<SearchResult, SearchError> {
    let mut freqs = Vec::new();
    let mut weights = Vec::new();
    for (x, px) in s.input().populations().into_iter().enumerate() {
        for (i, &pi) in s.weights().iter().enumerate() {
            freqs.push(s.level(x, i) / s.hbar());
            weights.push(px * pi);
        }
    }
    first_crossing(&Spectrum::new(&freqs, &weights).shifted_to_zero(), settings)
}

/// `δ = ε (1 + 2/π)`: an upper bound on `Re z + (2/π) Im z` when `|z| ≤ ε`.
pub fn tolerance_shift(epsilon: f64) -> f64 {
    epsilon * (1.0 + 2.0 / PI)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub pair: Pair,
    pub tau_pair: Option<f64>,
    pub adjusted_bound: Option<f64>,
    pub tau_hat: Option<f64>,
    pub ok: bool,
}

/// Checks every required pair against the tolerance-adjusted bound
/// `(1 − 4α/π − δ) π / (2 Σ p_i |ν_i|)`.
pub fn verify_bound(s: &OracleScenario, epsilon: f64) -> Result<Vec<VerifyRow>, SearchError> {
    verify_with(s, &SearchSettings::with_epsilon(epsilon))
}

pub fn verify_with(
    s: &OracleScenario,
    settings: &SearchSettings,
) -> Result<Vec<VerifyRow>, SearchError> {
    settings.validate()?;
    let delta = tolerance_shift(settings.epsilon);
    let mut rows = Vec::with_capacity(s.pairs().len());
    for &pair in s.pairs() {
        let g = pair_geometry(s, pair)?;
        match tau_pair(&g) {
            PairBound::Unreachable => rows.push(VerifyRow {
                pair,
                tau_pair: None,
                adjusted_bound: None,
                tau_hat: None,
                ok: true,
            }),
            PairBound::Bounded {
                tau, alpha_used, ..
            } => {
                let rate = g.mean_abs_frequency();
                let adjusted = (1.0 - 4.0 * alpha_used / PI - delta).max(0.0) * PI / (2.0 * rate);
                let found = first_orthogonality(s, pair, settings)?;
                let ok = found.tau_hat.is_none_or(|t| t >= adjusted);
                rows.push(VerifyRow {
                    pair,
                    tau_pair: Some(tau),
                    adjusted_bound: Some(adjusted),
                    tau_hat: found.tau_hat,
                    ok,
                });
            }
        }
    }
    Ok(rows)
}

/// Fills `tau_hat` of every reachable record in a bound report.
pub fn annotate_report(
    report: &mut BoundReport,
    s: &OracleScenario,
    settings: &SearchSettings,
) -> Result<(), SearchError> {
    for record in &mut report.pairs {
        let index = |l: &str| {
            s.input()
                .index_of(l)
                .expect("report labels come from the scenario")
        };
        let pair = Pair::new(index(&record.pair[0]), index(&record.pair[1]));
        record.tau_hat = first_orthogonality(s, pair, settings)?.tau_hat;
    }
    Ok(())
}

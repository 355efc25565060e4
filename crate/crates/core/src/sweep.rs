//! Parameter-family sweeps, power-law fits and randomized soundness campaigns.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{interaction_energy, tau_pair};
use crate::error::SweepError;
use crate::model::{
    pair_geometry, Coupling, CouplingSpec, InputRegister, OracleScenario, OutputRegister, Pair,
};
use crate::search::{first_orthogonality, verify_with, SearchSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Rescales every `a_x` so the first pair has `|a_x − a_x'| = value`.
    DeltaA,
    /// Sets the single coupling constant.
    CouplingC,
    /// Rescales the signed output spectrum so that `max |b_i| = value`.
    BranchScaleS,
    /// Two-point spectrum `(+b, −b)` with prior `(κ, 1)/(1 + κ)`.
    PriorKappa,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::DeltaA => "delta_a",
            Axis::CouplingC => "coupling_C",
            Axis::BranchScaleS => "branch_scale_s",
            Axis::PriorKappa => "prior_kappa",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Axis::DeltaA,
            Axis::CouplingC,
            Axis::BranchScaleS,
            Axis::PriorKappa,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| {
            format!("unknown axis `{s}` (delta_a, coupling_C, branch_scale_s, prior_kappa)")
        })
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: OracleScenario,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub search: SearchSettings,
}

impl SweepSpec {
    pub fn new(base: OracleScenario, axis: Axis, values: Vec<f64>) -> Self {
        Self {
            base,
            axis,
            values,
            search: SearchSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    /// Largest pair bound; `None` when every pair is unreachable.
    pub tau_pair: Option<f64>,
    /// Latest first-orthogonality time over the pairs; `None` if any pair
    /// never reaches orthogonality within the horizon.
    pub tau_hat: Option<f64>,
    #[serde(rename = "H_int_mean")]
    pub h_int_mean: f64,
    #[serde(rename = "H_int_spread")]
    pub h_int_spread: f64,
    #[serde(rename = "B1")]
    pub b1: f64,
    #[serde(rename = "B2")]
    pub b2: f64,
    pub kappa: f64,
}

impl SweepRow {
    pub const COLUMNS: [&'static str; 8] = [
        "value",
        "tau_pair",
        "tau_hat",
        "H_int_mean",
        "H_int_spread",
        "B1",
        "B2",
        "kappa",
    ];

    /// Column by its CSV name. `None` for unknown names or unreachable cells.
    pub fn column(&self, name: &str) -> Option<f64> {
        match name {
            "value" => Some(self.value),
            "tau_pair" => self.tau_pair,
            "tau_hat" => self.tau_hat,
            "H_int_mean" => Some(self.h_int_mean),
            "H_int_spread" => Some(self.h_int_spread),
            "B1" => Some(self.b1),
            "B2" => Some(self.b2),
            "kappa" => Some(self.kappa),
            _ => None,
        }
    }
}

fn inapplicable(axis: Axis, reason: impl Into<String>) -> SweepError {
    SweepError::AxisInapplicable {
        axis: axis.name().into(),
        reason: reason.into(),
    }
}

/// The base scenario with the swept parameter set to `value`.
pub fn apply_axis(
    base: &OracleScenario,
    axis: Axis,
    value: f64,
) -> Result<OracleScenario, SweepError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(SweepError::NonPositiveValue(value));
    }
    let single = matches!(base.coupling().coupling, Coupling::Single { .. });
    match axis {
        Axis::DeltaA => {
            if !single {
                return Err(inapplicable(axis, "needs a single-term coupling"));
            }
            let pair = *base
                .pairs()
                .first()
                .ok_or_else(|| inapplicable(axis, "no required pairs"))?;
            let a = base.input().a();
            let gap = (a[pair.x] - a[pair.y]).abs();
            if gap == 0.0 {
                return Err(inapplicable(axis, "first pair has a_x = a_x'"));
            }
            let scaled = a.iter().map(|v| v * value / gap).collect();
            let input = InputRegister::new(
                base.input().labels().to_vec(),
                base.input().eps().to_vec(),
                scaled,
                base.input().amp().to_vec(),
            )?;
            Ok(base.with_input(input)?)
        }
        Axis::CouplingC => {
            if !single {
                return Err(inapplicable(axis, "needs a single-term coupling"));
            }
            let spec = CouplingSpec::single(value).with_profile(base.coupling().profile.clone());
            Ok(base.with_coupling(spec)?)
        }
        Axis::BranchScaleS => {
            if !single {
                return Err(inapplicable(axis, "needs a single-term coupling"));
            }
            let b = base.output().bsigned();
            let top = b.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
            if top == 0.0 {
                return Err(inapplicable(axis, "output spectrum is identically zero"));
            }
            let scaled = b.iter().map(|v| v * value / top).collect();
            let output = OutputRegister::new(
                base.output().energies().to_vec(),
                scaled,
                base.output().c0().to_vec(),
            )?;
            Ok(base.with_output(output)?)
        }
        Axis::PriorKappa => {
            let b = base.output().bsigned();
            if !single || b.len() != 2 || b[0] <= 0.0 || b[1] != -b[0] {
                return Err(inapplicable(
                    axis,
                    "needs a single coupling and a two-point spectrum (+b, -b)",
                ));
            }
            let plus = value / (1.0 + value);
            let c0 = vec![
                Complex64::new(plus.sqrt(), 0.0),
                Complex64::new((1.0 - plus).sqrt(), 0.0),
            ];
            let output = OutputRegister::new(base.output().energies().to_vec(), b.to_vec(), c0)?;
            Ok(base.with_output(output)?)
        }
    }
}

fn strictly_monotone(values: &[f64]) -> bool {
    let up = values.windows(2).all(|w| w[1] > w[0]);
    let down = values.windows(2).all(|w| w[1] < w[0]);
    !values.is_empty() && (up || down)
}

/// One row per value, evaluated in parallel; order follows `spec.values`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    if !strictly_monotone(&spec.values) {
        return Err(SweepError::BadValues);
    }
    // surface applicability problems before fanning out
    apply_axis(&spec.base, spec.axis, spec.values[0])?;
    spec.values
        .par_iter()
        .map(|&v| sweep_point(spec, v))
        .collect()
}

fn sweep_point(spec: &SweepSpec, value: f64) -> Result<SweepRow, SweepError> {
    let s = apply_axis(&spec.base, spec.axis, value)?;
    let mut sup: Option<f64> = None;
    let mut latest: Option<f64> = Some(0.0);
    for &pair in s.pairs() {
        let g = pair_geometry(&s, pair)?;
        let bound = tau_pair(&g);
        if !bound.is_unreachable() {
            sup = Some(sup.map_or(bound.tau(), |m: f64| m.max(bound.tau())));
        }
        let found = first_orthogonality(&s, pair, &spec.search)?;
        latest = match (latest, found.tau_hat) {
            (Some(m), Some(t)) => Some(m.max(t)),
            _ => None,
        };
    }
    let e = interaction_energy(&s);
    Ok(SweepRow {
        value,
        tau_pair: sup,
        tau_hat: if s.pairs().is_empty() { None } else { latest },
        h_int_mean: e.h_int_mean,
        h_int_spread: e.h_int_spread,
        b1: e.b1,
        b2: e.b2,
        kappa: e.kappa,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least squares on `(ln x, ln y)`. `r2` is 1 when `y` is constant.
pub fn fit_loglog_slope(x: &[f64], y: &[f64]) -> Result<LogLogFit, SweepError> {
    let n = x.len().min(y.len());
    if n < 3 {
        return Err(SweepError::TooFewPoints(n));
    }
    if let Some(&bad) = x[..n]
        .iter()
        .chain(&y[..n])
        .find(|v| !(**v > 0.0 && v.is_finite()))
    {
        return Err(SweepError::NonPositiveValue(bad));
    }
    let lx: Vec<f64> = x[..n].iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y[..n].iter().map(|v| v.ln()).collect();
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(SweepError::BadValues);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(LogLogFit {
        slope,
        intercept,
        r2,
    })
}

/// Fit between two named [`SweepRow`] columns. Unreachable cells count as
/// non-positive.
pub fn fit_rows(rows: &[SweepRow], xcol: &str, ycol: &str) -> Result<LogLogFit, SweepError> {
    let pick = |name: &str| -> Result<Vec<f64>, SweepError> {
        rows.iter()
            .map(|r| r.column(name).ok_or(SweepError::NonPositiveValue(f64::NAN)))
            .collect()
    };
    fit_loglog_slope(&pick(xcol)?, &pick(ycol)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CampaignStats {
    pub scenarios: usize,
    /// Pairs checked.
    pub checked: usize,
    /// Pairs whose search reached `|z| ≤ ε`.
    pub reachable: usize,
    /// Pairs with no crossing (degenerate, or none within the horizon).
    pub unreachable: usize,
    pub violations: usize,
    /// Smallest `tau_hat − adjusted_bound` over reachable pairs.
    pub min_margin: Option<f64>,
}

/// One random oracle scenario: two labels with `a = (0, Δa)`, `Δa ~ U[0.25, 4]`,
/// `d_O ∈ [2, 8]`, `b_i ~ U[−4, 4]`, a flat-Dirichlet prior and random phases.
pub fn random_scenario(rng: &mut impl Rng) -> OracleScenario {
    let d_out = rng.random_range(2..=8usize);
    let bsigned: Vec<f64> = (0..d_out).map(|_| rng.random_range(-4.0..=4.0)).collect();
    let energies: Vec<f64> = (0..d_out).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let prior = random_simplex(rng, d_out);
    let c0 = with_random_phases(rng, &prior);
    let delta_a = rng.random_range(0.25..=4.0);
    let pops = random_simplex(rng, 2);
    let amp = with_random_phases(rng, &pops);
    let eps = vec![rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)];
    let input = InputRegister::new(vec!["x0".into(), "x1".into()], eps, vec![0.0, delta_a], amp)
        .expect("valid random input");
    let output = OutputRegister::new(energies, bsigned, c0).expect("valid random output");
    OracleScenario::new(
        input,
        output,
        CouplingSpec::single(1.0),
        vec![Pair::new(0, 1)],
        1.0,
    )
    .expect("valid random scenario")
}

/// Random scenario with a mirror-symmetric output: `±b` lines of equal weight,
/// `a = (0, Δa)`, equal input populations, zero free energies. Full-state
/// orthogonality is reachable for these.
pub fn random_symmetric_scenario(rng: &mut impl Rng) -> OracleScenario {
    let half = rng.random_range(1..=4usize);
    let mags: Vec<f64> = (0..half).map(|_| rng.random_range(0.25..=4.0)).collect();
    let w = random_simplex(rng, half);
    let mut bsigned = Vec::with_capacity(2 * half);
    let mut prior = Vec::with_capacity(2 * half);
    for (m, p) in mags.iter().zip(&w) {
        bsigned.extend([*m, -*m]);
        prior.extend([p / 2.0, p / 2.0]);
    }
    let c0 = with_random_phases(rng, &prior);
    let delta_a = rng.random_range(0.25..=4.0);
    let h = (0.5f64).sqrt();
    let amp = vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
    let input = InputRegister::new(
        vec!["x0".into(), "x1".into()],
        vec![0.0; 2],
        vec![0.0, delta_a],
        amp,
    )
    .expect("valid random input");
    let output =
        OutputRegister::new(vec![0.0; 2 * half], bsigned, c0).expect("valid random output");
    OracleScenario::new(
        input,
        output,
        CouplingSpec::single(1.0),
        vec![Pair::new(0, 1)],
        1.0,
    )
    .expect("valid random scenario")
}

fn random_simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

fn with_random_phases(rng: &mut impl Rng, weights: &[f64]) -> Vec<Complex64> {
    weights
        .iter()
        .map(|w| Complex64::from_polar(w.sqrt(), rng.random_range(0.0..TAU)))
        .collect()
}

/// Draws `n` scenarios from `seed` and checks every pair against the
/// tolerance-adjusted bound at tolerance `epsilon`.
pub fn random_campaign(seed: u64, n: usize, epsilon: f64) -> Result<CampaignStats, SweepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scenarios: Vec<OracleScenario> = (0..n).map(|_| random_scenario(&mut rng)).collect();
    campaign_over(&scenarios, &SearchSettings::with_epsilon(epsilon))
}

pub fn campaign_over(
    scenarios: &[OracleScenario],
    settings: &SearchSettings,
) -> Result<CampaignStats, SweepError> {
    let per: Vec<_> = scenarios
        .par_iter()
        .map(|s| verify_with(s, settings))
        .collect::<Result<_, _>>()?;
    let mut stats = CampaignStats {
        scenarios: scenarios.len(),
        checked: 0,
        reachable: 0,
        unreachable: 0,
        violations: 0,
        min_margin: None,
    };
    for row in per.iter().flatten() {
        stats.checked += 1;
        if !row.ok {
            stats.violations += 1;
        }
        match (row.tau_hat, row.adjusted_bound) {
            (Some(t), Some(b)) => {
                stats.reachable += 1;
                let margin = t - b;
                stats.min_margin = Some(stats.min_margin.map_or(margin, |m: f64| m.min(margin)));
            }
            _ => stats.unreachable += 1,
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn symmetric() -> OracleScenario {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let input = InputRegister::new(
            vec!["x0".into(), "x1".into()],
            vec![0.0; 2],
            vec![0.0, 1.0],
            vec![h, h],
        )
        .unwrap();
        let output = OutputRegister::new(vec![0.0; 2], vec![1.0, -1.0], vec![h, h]).unwrap();
        OracleScenario::new(
            input,
            output,
            CouplingSpec::single(1.0),
            vec![Pair::new(0, 1)],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn branch_scale_keeps_zero_energy() {
        let rows = run_sweep(&SweepSpec::new(
            symmetric(),
            Axis::BranchScaleS,
            vec![1.0, 2.0, 4.0],
        ))
        .unwrap();
        for row in &rows {
            assert!(row.h_int_mean.abs() < 1e-12);
            assert_abs_diff_eq!(
                row.tau_hat.unwrap(),
                1e-3f64.acos() / row.value,
                epsilon = 1e-6
            );
        }
    }

    #[test]
    fn kappa_axis_crosses_zero_energy_at_one() {
        let values = vec![0.25, 0.5, 1.0, 2.0, 4.0];
        let rows = run_sweep(&SweepSpec::new(symmetric(), Axis::PriorKappa, values)).unwrap();
        for row in &rows {
            assert_abs_diff_eq!(row.b1 + row.b2, 1.0, epsilon = 1e-12);
            // ⟨H_int⟩ = C⟨A⟩(B1 − B2) with ⟨A⟩ = ½
            assert_abs_diff_eq!(row.h_int_mean, 0.5 * (row.b1 - row.b2), epsilon = 1e-12);
        }
        assert!(rows[2].h_int_mean.abs() < 1e-15);
        assert!(rows[1].h_int_mean < 0.0 && rows[3].h_int_mean > 0.0);
        // the bound is smallest where the prior is balanced
        let mid = rows[2].tau_pair.unwrap();
        assert!(rows.iter().all(|r| r.tau_pair.unwrap() >= mid - 1e-15));
        assert!(rows[2].tau_hat.is_some() && rows[0].tau_hat.is_none());
    }

    #[test]
    fn single_value_matches_direct_evaluation() {
        let rows = run_sweep(&SweepSpec::new(symmetric(), Axis::DeltaA, vec![2.0])).unwrap();
        let s = apply_axis(&symmetric(), Axis::DeltaA, 2.0).unwrap();
        let direct = first_orthogonality(&s, Pair::new(0, 1), &SearchSettings::default()).unwrap();
        assert_eq!(rows[0].tau_hat, direct.tau_hat);
        assert_abs_diff_eq!(
            rows[0].tau_pair.unwrap(),
            (std::f64::consts::PI / 2.0 - 1.0) / 2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn sweep_validation() {
        assert_eq!(
            run_sweep(&SweepSpec::new(symmetric(), Axis::CouplingC, vec![])),
            Err(SweepError::BadValues)
        );
        assert_eq!(
            run_sweep(&SweepSpec::new(
                symmetric(),
                Axis::CouplingC,
                vec![1.0, 1.0]
            )),
            Err(SweepError::BadValues)
        );
        let three = OutputRegister::new(
            vec![0.0; 3],
            vec![1.0, -1.0, 0.5],
            vec![Complex64::new(1.0 / 3f64.sqrt(), 0.0); 3],
        )
        .unwrap();
        let s = symmetric().with_output(three).unwrap();
        assert!(matches!(
            run_sweep(&SweepSpec::new(s, Axis::PriorKappa, vec![1.0, 2.0])),
            Err(SweepError::AxisInapplicable { .. })
        ));
    }

    #[test]
    fn exact_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 / v).collect();
        let fit = fit_loglog_slope(&x, &y).unwrap();
        assert_abs_diff_eq!(fit.slope, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.intercept, 3f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(fit.r2, 1.0, epsilon = 1e-12);
        let flat = fit_loglog_slope(&x, &[2.0; 4]).unwrap();
        assert_eq!((flat.slope, flat.r2), (0.0, 1.0));
        assert_eq!(
            fit_loglog_slope(&x[..2], &y[..2]),
            Err(SweepError::TooFewPoints(2))
        );
        assert_eq!(
            fit_loglog_slope(&x, &[1.0, -1.0, 1.0, 1.0]),
            Err(SweepError::NonPositiveValue(-1.0))
        );
    }

    #[test]
    fn degenerate_campaign_counts_unreachable() {
        let s = apply_axis(&symmetric(), Axis::CouplingC, 1.0).unwrap();
        let flat =
            OutputRegister::new(vec![0.0; 2], vec![0.0, 0.0], s.output().c0().to_vec()).unwrap();
        let s = s.with_output(flat).unwrap();
        let stats = campaign_over(&[s], &SearchSettings::default()).unwrap();
        assert_eq!(
            (stats.checked, stats.unreachable, stats.violations),
            (1, 1, 0)
        );
    }

    #[test]
    fn campaign_is_deterministic() {
        let a = random_campaign(7, 12, 1e-3).unwrap();
        let b = random_campaign(7, 12, 1e-3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0);
    }
}

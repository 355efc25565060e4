mod common;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use oracle_qsl::amplitude::{brute_force_state, contract_branches, corr_amplitude, overlap_d};
use oracle_qsl::bounds::{floor22, interaction_energy, tau_pair, PairBound};
use oracle_qsl::model::{
    pair_geometry, CouplingSpec, InputRegister, OracleScenario, OutputRegister, Pair,
};
use oracle_qsl::schmidt::{entropy_bits, schmidt_decompose};
use oracle_qsl::search::{
    first_crossing, first_orthogonality, verify_with, SearchSettings, Spectrum,
};

use common::{amplitudes, c, raw_multi_scenario, raw_scenario};

fn two_label(spectrum: &[f64], prior: &[f64], delta_a: f64, strength: f64) -> OracleScenario {
    let h = c(0.5f64.sqrt(), 0.0);
    let input = InputRegister::new(
        vec!["x0".into(), "x1".into()],
        vec![0.0; 2],
        vec![0.0, delta_a],
        vec![h, h],
    )
    .unwrap();
    let c0 = prior.iter().map(|p| c(p.sqrt(), 0.0)).collect();
    let output = OutputRegister::new(vec![0.0; spectrum.len()], spectrum.to_vec(), c0).unwrap();
    OracleScenario::new(
        input,
        output,
        CouplingSpec::single(strength),
        vec![Pair::new(0, 1)],
        1.0,
    )
    .unwrap()
}

fn simplex(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|r| r / total).collect()
}

fn bounded(s: &OracleScenario, pair: Pair) -> Option<f64> {
    match tau_pair(&pair_geometry(s, pair).unwrap()) {
        PairBound::Bounded { tau, .. } => Some(tau),
        PairBound::Unreachable => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlap_matches_contraction(raw in raw_scenario(4, 8), t in 0.0f64..30.0) {
        let s = raw.build();
        let state = brute_force_state(&s, t).unwrap();
        for &pair in s.pairs() {
            let d = overlap_d(&s, pair, t).unwrap();
            let oracle = contract_branches(&state, &s, pair).unwrap();
            prop_assert!((d - oracle).norm() < 1e-12);
        }
    }

    #[test]
    fn multi_term_overlap_matches_contraction(raw in raw_multi_scenario(3, 5), t in 0.0f64..20.0) {
        let s = raw.build();
        let state = brute_force_state(&s, t).unwrap();
        for &pair in s.pairs() {
            let d = overlap_d(&s, pair, t).unwrap();
            prop_assert!((d - contract_branches(&state, &s, pair).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugation_symmetry(raw in raw_scenario(3, 6), t in 0.0f64..30.0) {
        let s = raw.build();
        let p = Pair::new(0, 1);
        let forward = overlap_d(&s, p, t).unwrap();
        let backward = overlap_d(&s, p.swapped(), t).unwrap();
        prop_assert!((forward - backward.conj()).norm() < 1e-13);
        let z = corr_amplitude(&s, p, t).unwrap();
        prop_assert!((z - corr_amplitude(&s, p.swapped(), t).unwrap().conj()).norm() < 1e-13);
    }

    #[test]
    fn free_energies_leave_the_amplitude_alone(raw in raw_scenario(3, 6), shift in -3.0f64..3.0, t in 0.0f64..20.0) {
        let s = raw.build();
        let mut moved = raw.clone();
        moved.eps = raw.eps.iter().map(|e| e + shift * 1.7).collect();
        moved.energies = raw.energies.iter().map(|e| e - shift).collect();
        let m = moved.build();
        let p = Pair::new(0, 1);
        prop_assert!((corr_amplitude(&s, p, t).unwrap() - corr_amplitude(&m, p, t).unwrap()).norm() < 1e-12);
        prop_assert_eq!(tau_pair(&pair_geometry(&s, p).unwrap()), tau_pair(&pair_geometry(&m, p).unwrap()));
    }

    #[test]
    fn commensurate_spectra_recur(ks in prop::collection::vec(-5i32..=5, 1..6), raw_w in prop::collection::vec(0.1f64..1.0, 6), t in 0.0f64..5.0) {
        // integer frequencies: z has period 2π
        let freqs: Vec<f64> = ks.iter().map(|&k| f64::from(k)).collect();
        let w = simplex(&raw_w[..freqs.len()]);
        let spec = Spectrum::new(&freqs, &w);
        prop_assert!((spec.modulus(t) - spec.modulus(t + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn stronger_coupling_is_faster(raw in raw_scenario(3, 6), k in 1.01f64..5.0) {
        let s = raw.build();
        let mut strong = raw.clone();
        strong.strength *= k;
        let st = strong.build();
        let mut scaled = raw.clone();
        scaled.b = raw.b.iter().map(|b| b * k).collect();
        let sc = scaled.build();
        for &pair in s.pairs() {
            if let (Some(a), Some(b), Some(d)) = (bounded(&s, pair), bounded(&st, pair), bounded(&sc, pair)) {
                prop_assert!(b <= a * (1.0 + 1e-12));
                prop_assert!((b - a / k).abs() <= 1e-12 * a.max(1.0));
                prop_assert!((d - b).abs() <= 1e-12 * a.max(1.0));
            }
        }
    }

    #[test]
    fn floor_never_exceeds_bound(raw in raw_scenario(4, 8)) {
        let s = raw.build();
        for &pair in s.pairs() {
            if let Some(tau) = bounded(&s, pair) {
                let floor = floor22(&s, pair).unwrap();
                prop_assert!(floor <= tau * (1.0 + 1e-12) + 1e-15);
            }
        }
    }

    #[test]
    fn reversing_the_pair_swaps_branches(raw in raw_scenario(3, 6)) {
        let s = raw.build();
        let p = Pair::new(0, 1);
        let (g, h) = (pair_geometry(&s, p).unwrap(), pair_geometry(&s, p.swapped()).unwrap());
        // a single coupling is oriented by the sign of Δa, so both directions
        // land on the same geometry
        prop_assert_eq!(g.pair, h.pair);
        prop_assert_eq!(tau_pair(&g), tau_pair(&h));
        // the raw spectrum of the reversed pair is mirrored
        let mirrored: Vec<f64> = s.pair_frequencies(p.swapped()).iter().map(|v| -v).collect();
        for (u, v) in s.pair_frequencies(p).iter().zip(&mirrored) {
            prop_assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn negated_spectrum_mirrors_alpha(raw in raw_scenario(3, 6)) {
        let s = raw.build();
        let mut neg = raw.clone();
        neg.b = raw.b.iter().map(|b| -b).collect();
        let n = neg.build();
        let p = Pair::new(0, 1);
        let (g, h) = (pair_geometry(&s, p).unwrap(), pair_geometry(&n, p).unwrap());
        if g.nu.iter().all(|v| *v != 0.0) {
            prop_assert!((g.alpha + h.alpha - 1.0).abs() < 1e-12);
            prop_assert!((g.b1 - h.b2).abs() < 1e-12 && (g.b2 - h.b1).abs() < 1e-12);
            prop_assert!((tau_pair(&g).tau() - tau_pair(&h).tau()).abs() < 1e-12);
        }
    }

    #[test]
    fn search_time_scales_inversely(freqs in prop::collection::vec(-3.0f64..3.0, 2..5), raw_w in prop::collection::vec(0.1f64..1.0, 5), lambda in 0.25f64..4.0) {
        let w = simplex(&raw_w[..freqs.len()]);
        let base = Spectrum::new(&freqs, &w);
        let fast: Vec<f64> = freqs.iter().map(|f| f * lambda).collect();
        let settings = SearchSettings::with_epsilon(0.05);
        let a = first_crossing(&base, &settings).unwrap();
        let horizon = a.horizon / lambda;
        let b = first_crossing(&Spectrum::new(&fast, &w), &SearchSettings { horizon: Some(horizon), ..settings }).unwrap();
        if let (Some(ta), Some(tb)) = (a.tau_hat, b.tau_hat) {
            prop_assert!((tb - ta / lambda).abs() <= 1e-6 * ta.max(1.0) / lambda);
        }
    }

    #[test]
    fn looser_tolerance_is_reached_sooner(raw in raw_scenario(2, 6), e1 in 1e-3f64..0.2, factor in 1.01f64..2.0) {
        let s = raw.build();
        let p = Pair::new(0, 1);
        let tight = first_orthogonality(&s, p, &SearchSettings::with_epsilon(e1)).unwrap();
        let loose = first_orthogonality(&s, p, &SearchSettings::with_epsilon((e1 * factor).min(0.49))).unwrap();
        if let Some(t) = tight.tau_hat {
            prop_assert!(loose.tau_hat.is_some_and(|l| l <= t + 1e-9));
        }
    }

    #[test]
    fn adjusted_bound_holds(raw in raw_scenario(3, 8)) {
        let s = raw.build();
        for row in verify_with(&s, &SearchSettings::default()).unwrap() {
            prop_assert!(row.ok, "{:?}", row);
        }
    }

    #[test]
    fn schmidt_matches_eigendecomposition(re in prop::collection::vec(-1.0f64..1.0, 12), im in prop::collection::vec(-1.0f64..1.0, 12)) {
        let raw: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| c(*a, *b)).collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let state: Vec<Complex64> = raw.iter().map(|z| z / norm).collect();
        let snap = schmidt_decompose(&state, 3, 4).unwrap();

        let m = DMatrix::from_row_slice(3, 4, &state);
        let gram = &m * m.adjoint();
        let mut eig: Vec<f64> = gram.clone().symmetric_eigen().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        for (l, e) in snap.coefficients.iter().zip(&eig) {
            prop_assert!((l - e).abs() < 1e-10, "{:?} vs {:?}", snap.coefficients, eig);
        }
        // left vectors are eigenvectors of M M^H
        for (l, u) in snap.coefficients.iter().zip(&snap.left_vectors) {
            let v = nalgebra::DVector::from_column_slice(u);
            let image = &gram * &v;
            prop_assert!((image - v * Complex64::new(l * l, 0.0)).norm() < 1e-10);
        }
        for (a, b) in state.iter().zip(snap.reconstruct()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn entropy_is_invariant_under_local_changes(re in prop::collection::vec(-1.0f64..1.0, 6), im in prop::collection::vec(-1.0f64..1.0, 6), phase in 0.0f64..6.3) {
        let raw: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| c(*a, *b)).collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let state: Vec<Complex64> = raw.iter().map(|z| z / norm * Complex64::from_polar(1.0, phase)).collect();
        let a = schmidt_decompose(&state, 2, 3).unwrap();
        // swapping the factors transposes the coefficient matrix
        let swapped: Vec<Complex64> = (0..3).flat_map(|i| (0..2).map(move |x| (i, x))).map(|(i, x)| state[x * 3 + i]).collect();
        let b = schmidt_decompose(&swapped, 3, 2).unwrap();
        prop_assert!((a.entropy - b.entropy).abs() < 1e-10);
        prop_assert!((a.entropy - entropy_bits(&b.coefficients)).abs() < 1e-10);
        prop_assert!(a.entropy <= 1.0 + 1e-12);
    }

    #[test]
    fn fixed_total_branch_weight(u in 0.2f64..3.0, v in 0.2f64..3.0, q in 0.05f64..0.95) {
        // four-point family {+u, +v, −u, −v}: moving weight between the two
        // magnitudes within each branch keeps α and Σp|b| but shifts B1 − B2
        let prior = [q / 2.0, (1.0 - q) / 2.0, (1.0 - q) / 2.0, q / 2.0];
        let s = two_label(&[u, v, -u, -v], &prior, 1.0, 1.0);
        let reference = two_label(&[u, v, -u, -v], &[0.25; 4], 1.0, 1.0);
        let pair = Pair::new(0, 1);
        prop_assert!((bounded(&s, pair).unwrap() - bounded(&reference, pair).unwrap()).abs() < 1e-12);
        let e = interaction_energy(&s);
        // ⟨A⟩ = ½ for a = (0, 1)
        prop_assert!((e.h_int_mean - 0.5 * (e.b1 - e.b2)).abs() < 1e-12);
        prop_assert!((e.b1 + e.b2 - 0.5 * (u + v)).abs() < 1e-12);
    }
}

#[test]
fn random_amplitudes_are_normalized() {
    let a = amplitudes(&[1.0, 3.0], &[0.0, 1.0]);
    let n: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    assert!((n - 1.0).abs() < 1e-15);
}

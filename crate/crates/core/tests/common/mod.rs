#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use oracle_qsl::model::{
    CouplingSpec, CouplingTerm, InputRegister, OracleScenario, OutputRegister, Pair,
};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Amplitudes `√w_k e^{iφ_k}` from unnormalized positive weights.
pub fn amplitudes(raw: &[f64], phases: &[f64]) -> Vec<Complex64> {
    let total: f64 = raw.iter().sum();
    raw.iter()
        .zip(phases)
        .map(|(w, p)| Complex64::from_polar((w / total).sqrt(), *p))
        .collect()
}

pub fn symmetric() -> OracleScenario {
    let h = c(FRAC_1_SQRT_2, 0.0);
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

#[derive(Debug, Clone)]
pub struct Raw {
    pub eps: Vec<f64>,
    pub a: Vec<f64>,
    pub in_w: Vec<f64>,
    pub in_phase: Vec<f64>,
    pub energies: Vec<f64>,
    pub b: Vec<f64>,
    pub out_w: Vec<f64>,
    pub out_phase: Vec<f64>,
    pub strength: f64,
    pub hbar: f64,
    pub second_term: Option<(f64, Vec<f64>, Vec<f64>)>,
}

impl Raw {
    pub fn build(&self) -> OracleScenario {
        let n = self.a.len();
        let labels = (0..n).map(|k| format!("x{k}")).collect();
        let input = InputRegister::new(
            labels,
            self.eps.clone(),
            self.a.clone(),
            amplitudes(&self.in_w, &self.in_phase),
        )
        .unwrap();
        let output = OutputRegister::new(
            self.energies.clone(),
            self.b.clone(),
            amplitudes(&self.out_w, &self.out_phase),
        )
        .unwrap();
        let mut pairs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    pairs.push(Pair::new(x, y));
                }
            }
        }
        let coupling = match &self.second_term {
            None => CouplingSpec::single(self.strength),
            Some((c2, a2, b2)) => CouplingSpec::multi(vec![
                CouplingTerm {
                    strength: self.strength,
                    a: self.a.clone(),
                    b: self.b.clone(),
                },
                CouplingTerm {
                    strength: *c2,
                    a: a2.clone(),
                    b: b2.clone(),
                },
            ]),
        };
        OracleScenario::new(input, output, coupling, pairs, self.hbar).unwrap()
    }
}

fn reals(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, n)
}

/// `d_I ∈ [2, max_in]`, `d_O ∈ [1, max_out]`, single-term coupling.
pub fn raw_scenario(max_in: usize, max_out: usize) -> impl Strategy<Value = Raw> {
    (2..=max_in, 1..=max_out).prop_flat_map(|(n, d)| {
        (
            (
                reals(n, -2.0, 2.0),
                reals(n, -2.0, 2.0),
                reals(n, 0.05, 1.0),
                reals(n, 0.0, 6.3),
            ),
            (
                reals(d, -2.0, 2.0),
                reals(d, -4.0, 4.0),
                reals(d, 0.05, 1.0),
                reals(d, 0.0, 6.3),
            ),
            (0.2f64..3.0, 0.5f64..2.0),
        )
            .prop_map(
                |((eps, a, in_w, in_phase), (energies, b, out_w, out_phase), (strength, hbar))| {
                    Raw {
                        eps,
                        a,
                        in_w,
                        in_phase,
                        energies,
                        b,
                        out_w,
                        out_phase,
                        strength,
                        hbar,
                        second_term: None,
                    }
                },
            )
    })
}

/// As [`raw_scenario`] with an extra coupling term.
pub fn raw_multi_scenario(max_in: usize, max_out: usize) -> impl Strategy<Value = Raw> {
    raw_scenario(max_in, max_out).prop_flat_map(|raw| {
        let (n, d) = (raw.a.len(), raw.b.len());
        (
            Just(raw),
            -2.0f64..2.0,
            reals(n, -2.0, 2.0),
            reals(d, -2.0, 2.0),
        )
            .prop_map(|(mut raw, c2, a2, b2)| {
                raw.second_term = Some((c2, a2, b2));
                raw
            })
    })
}

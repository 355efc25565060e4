//! Domain types for the composite system "input register + output register".
//!
//! The Hamiltonian is assumed diagonal in a fixed product eigenbasis
//! `|x⟩_I ⊗ |i⟩_O`: every label `x` carries a free energy `eps[x]` and an
//! interaction eigenvalue `a[x]`, every output basis vector `i` carries a free
//! energy `E[i]` and a signed interaction eigenvalue `b[i]`. Under that
//! structure the dynamics never mixes input branches, so the input register is
//! represented by labels and amplitudes only.

use std::collections::HashSet;

use num_complex::Complex64;

use crate::drive::DriveProfile;
use crate::error::ModelError;

/// Amplitude norms may deviate from one by at most this much before
/// [`OracleScenario::new`] rejects them. Accepted inputs are renormalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct InputRegister {
    labels: Vec<String>,
    eps: Vec<f64>,
    a: Vec<f64>,
    amp: Vec<Complex64>,
}

impl InputRegister {
    pub fn new(
        labels: Vec<String>,
        eps: Vec<f64>,
        a: Vec<f64>,
        amp: Vec<Complex64>,
    ) -> Result<Self, ModelError> {
        let n = labels.len();
        if n == 0 {
            return Err(ModelError::DimensionMismatch(
                "input register has no labels".into(),
            ));
        }
        for (name, len) in [("eps", eps.len()), ("a", a.len()), ("amp", amp.len())] {
            if len != n {
                return Err(ModelError::DimensionMismatch(format!(
                    "input.{name} has {len} entries for {n} labels"
                )));
            }
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(ModelError::DuplicateLabel(label.clone()));
            }
        }
        check_finite("input.eps", &eps)?;
        check_finite("input.a", &a)?;
        let amp = normalized("input amplitudes", amp)?;
        Ok(Self {
            labels,
            eps,
            a,
            amp,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    /// Branch populations `|C_x|²`.
    pub fn populations(&self) -> Vec<f64> {
        self.amp.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRegister {
    energies: Vec<f64>,
    bsigned: Vec<f64>,
    c0: Vec<Complex64>,
    weights: Vec<f64>,
}

impl OutputRegister {
    /// `bsigned` holds the signed eigenvalues of the output observable, one per
    /// basis vector. A degenerate eigenvalue is written once per basis vector
    /// of its eigenspace.
    pub fn new(
        energies: Vec<f64>,
        bsigned: Vec<f64>,
        c0: Vec<Complex64>,
    ) -> Result<Self, ModelError> {
        let n = bsigned.len();
        if n == 0 {
            return Err(ModelError::DimensionMismatch(
                "output register has no basis vectors".into(),
            ));
        }
        if energies.len() != n || c0.len() != n {
            return Err(ModelError::DimensionMismatch(format!(
                "output.E has {}, output.b has {}, output.c0 has {} entries",
                energies.len(),
                n,
                c0.len()
            )));
        }
        check_finite("output.E", &energies)?;
        check_finite("output.b", &bsigned)?;
        let c0 = normalized("output initial state", c0)?;
        let weights = c0.iter().map(|c| c.norm_sqr()).collect();
        Ok(Self {
            energies,
            bsigned,
            c0,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.bsigned.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn bsigned(&self) -> &[f64] {
        &self.bsigned
    }

    pub fn c0(&self) -> &[Complex64] {
        &self.c0
    }

    /// Weights `p_i = |c0_i|²` of the initial output state.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(eigenvalue, total weight)` with equal eigenvalues merged, sorted by
    /// eigenvalue.
    pub fn grouped_weights(&self) -> Vec<(f64, f64)> {
        let mut pairs: Vec<(f64, f64)> = self
            .bsigned
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
            .collect();
        pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
        let mut grouped: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (b, p) in pairs {
            match grouped.last_mut() {
                Some(last) if last.0 == b => last.1 += p,
                _ => grouped.push((b, p)),
            }
        }
        grouped
    }
}

/// One term `C_k A_k ⊗ B_k` of a multi-term interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTerm {
    pub strength: f64,
    /// Eigenvalues of `A_k`, one per input label.
    pub a: Vec<f64>,
    /// Eigenvalues of `B_k`, one per output basis vector.
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    /// `H_int = C A ⊗ B` with `A`, `B` taken from the registers.
    Single { strength: f64 },
    /// `H_int = Σ_k C_k A_k ⊗ B_k`, all terms diagonal in the product basis.
    Multi { terms: Vec<CouplingTerm> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSpec {
    pub coupling: Coupling,
    pub profile: DriveProfile,
}

impl CouplingSpec {
    pub fn single(strength: f64) -> Self {
        Self {
            coupling: Coupling::Single { strength },
            profile: DriveProfile::Constant,
        }
    }

    pub fn multi(terms: Vec<CouplingTerm>) -> Self {
        Self {
            coupling: Coupling::Multi { terms },
            profile: DriveProfile::Constant,
        }
    }

    pub fn with_profile(mut self, profile: DriveProfile) -> Self {
        self.profile = profile;
        self
    }
}

/// A pair of input-label indices `(x, x')` whose output states must become
/// orthogonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Pair {
    pub x: usize,
    pub y: usize,
}

impl Pair {
    pub fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn swapped(self) -> Self {
        Self {
            x: self.y,
            y: self.x,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleScenario {
    input: InputRegister,
    output: OutputRegister,
    coupling: CouplingSpec,
    pairs: Vec<Pair>,
    hbar: f64,
}

impl OracleScenario {
    pub fn new(
        input: InputRegister,
        output: OutputRegister,
        coupling: CouplingSpec,
        pairs: Vec<Pair>,
        hbar: f64,
    ) -> Result<Self, ModelError> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(ModelError::NonPositiveHbar(hbar));
        }
        match &coupling.coupling {
            Coupling::Single { strength } => {
                if !(strength.is_finite() && *strength > 0.0) {
                    return Err(ModelError::NonPositiveCoupling(*strength));
                }
            }
            Coupling::Multi { terms } => {
                if terms.is_empty() {
                    return Err(ModelError::DimensionMismatch(
                        "coupling.terms is empty".into(),
                    ));
                }
                for (k, term) in terms.iter().enumerate() {
                    if term.a.len() != input.len() || term.b.len() != output.dim() {
                        return Err(ModelError::DimensionMismatch(format!(
                            "coupling term {k}: a has {} entries (expected {}), b has {} (expected {})",
                            term.a.len(),
                            input.len(),
                            term.b.len(),
                            output.dim()
                        )));
                    }
                    if !term.strength.is_finite() {
                        return Err(ModelError::NonFinite(format!("coupling term {k} strength")));
                    }
                    check_finite("coupling term a", &term.a)?;
                    check_finite("coupling term b", &term.b)?;
                }
            }
        }
        coupling.profile.validate()?;
        for pair in &pairs {
            if pair.x == pair.y || pair.x >= input.len() || pair.y >= input.len() {
                return Err(ModelError::BadPair(format!("({}, {})", pair.x, pair.y)));
            }
        }
        Ok(Self {
            input,
            output,
            coupling,
            pairs,
            hbar,
        })
    }

    pub fn input(&self) -> &InputRegister {
        &self.input
    }

    pub fn output(&self) -> &OutputRegister {
        &self.output
    }

    pub fn coupling(&self) -> &CouplingSpec {
        &self.coupling
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Planck's constant `h = 2πħ` in the scenario's units.
    pub fn planck(&self) -> f64 {
        std::f64::consts::TAU * self.hbar
    }

    /// Output weights `p_i`.
    pub fn weights(&self) -> &[f64] {
        self.output.weights()
    }

    pub fn pair_label(&self, pair: Pair) -> String {
        format!(
            "{}|{}",
            self.input.labels[pair.x], self.input.labels[pair.y]
        )
    }

    pub fn check_pair(&self, pair: Pair) -> Result<(), ModelError> {
        if pair.x == pair.y || pair.x >= self.input.len() || pair.y >= self.input.len() {
            return Err(ModelError::BadPair(format!("({}, {})", pair.x, pair.y)));
        }
        Ok(())
    }

    /// Interaction energy `⟨x,i|H_int|x,i⟩`, coupling constant included.
    pub fn interaction_energy(&self, x: usize, i: usize) -> f64 {
        match &self.coupling.coupling {
            Coupling::Single { strength } => strength * self.input.a[x] * self.output.bsigned[i],
            Coupling::Multi { terms } => terms.iter().map(|t| t.strength * t.a[x] * t.b[i]).sum(),
        }
    }

    /// Composite eigenenergy `E_xi = ε_x + E_i + Cγ_xi` before the ground shift.
    pub fn level(&self, x: usize, i: usize) -> f64 {
        self.input.eps[x] + self.output.energies[i] + self.interaction_energy(x, i)
    }

    /// Minimum composite eigenenergy over the full product basis.
    pub fn ground_energy(&self) -> f64 {
        let mut ground = f64::INFINITY;
        for x in 0..self.input.len() {
            for i in 0..self.output.dim() {
                ground = ground.min(self.level(x, i));
            }
        }
        ground
    }

    /// Angular frequencies `ν_i = (Cγ_xi − Cγ_x'i)/ħ` of the correlation
    /// amplitude for the ordered pair, one per output basis vector.
    pub fn pair_frequencies(&self, pair: Pair) -> Vec<f64> {
        (0..self.output.dim())
            .map(|i| {
                (self.interaction_energy(pair.x, i) - self.interaction_energy(pair.y, i))
                    / self.hbar
            })
            .collect()
    }

    /// Copy with a different output register; everything else is kept.
    pub fn with_output(&self, output: OutputRegister) -> Result<Self, ModelError> {
        Self::new(
            self.input.clone(),
            output,
            self.coupling.clone(),
            self.pairs.clone(),
            self.hbar,
        )
    }

    pub fn with_input(&self, input: InputRegister) -> Result<Self, ModelError> {
        Self::new(
            input,
            self.output.clone(),
            self.coupling.clone(),
            self.pairs.clone(),
            self.hbar,
        )
    }

    pub fn with_coupling(&self, coupling: CouplingSpec) -> Result<Self, ModelError> {
        Self::new(
            self.input.clone(),
            self.output.clone(),
            coupling,
            self.pairs.clone(),
            self.hbar,
        )
    }
}

/// Branch decomposition of one pair, oriented so that `a_x − a_x' ≥ 0` for a
/// single-term coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGeometry {
    /// Oriented pair.
    pub pair: Pair,
    /// True when the requested pair was swapped to make `delta_a` positive.
    pub reoriented: bool,
    /// `a_x − a_x'` per coupling term (one entry for a single-term coupling).
    pub delta_a: Vec<f64>,
    /// Frequencies `ν_i` of the oriented pair.
    pub nu: Vec<f64>,
    /// Output weights `p_i`.
    pub weights: Vec<f64>,
    /// Weight on `ν_i ≥ 0`.
    pub alpha: f64,
    /// Positive-branch sum. Single coupling: `Σ p_i b_i` over the branch, in
    /// units of `b`. Multi coupling: `Σ p_i ħ|ν_i|`, in energy units.
    pub b1: f64,
    /// Negative-branch sum, same units as `b1`.
    pub b2: f64,
}

impl PairGeometry {
    /// Every frequency vanishes: `|z| ≡ 1`, orthogonality is unreachable.
    pub fn is_degenerate(&self) -> bool {
        self.nu.iter().all(|&v| v == 0.0)
    }

    /// `Σ_i p_i |ν_i|`, the rate entering the bound denominator.
    pub fn mean_abs_frequency(&self) -> f64 {
        self.nu
            .iter()
            .zip(&self.weights)
            .map(|(v, p)| p * v.abs())
            .sum()
    }

    /// Largest `|ν_i|` over the whole spectrum, weight or not.
    pub fn max_abs_frequency(&self) -> f64 {
        self.nu.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn pair_geometry(s: &OracleScenario, pair: Pair) -> Result<PairGeometry, ModelError> {
    s.check_pair(pair)?;
    let delta = |p: Pair| -> Vec<f64> {
        match &s.coupling.coupling {
            Coupling::Single { .. } => vec![s.input.a[p.x] - s.input.a[p.y]],
            Coupling::Multi { terms } => terms.iter().map(|t| t.a[p.x] - t.a[p.y]).collect(),
        }
    };
    let mut oriented = pair;
    let mut reoriented = false;
    if let Coupling::Single { .. } = s.coupling.coupling {
        if s.input.a[pair.x] < s.input.a[pair.y] {
            oriented = pair.swapped();
            reoriented = true;
        }
    }
    let nu = s.pair_frequencies(oriented);
    let weights = s.weights().to_vec();
    let mut alpha = 0.0;
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for (i, (&v, &p)) in nu.iter().zip(&weights).enumerate() {
        let magnitude = match s.coupling.coupling {
            Coupling::Single { .. } => s.output.bsigned[i].abs(),
            Coupling::Multi { .. } => s.hbar * v.abs(),
        };
        if v >= 0.0 {
            alpha += p;
            b1 += p * magnitude;
        } else {
            b2 += p * magnitude;
        }
    }
    Ok(PairGeometry {
        pair: oriented,
        reoriented,
        delta_a: delta(oriented),
        nu,
        weights,
        alpha,
        b1,
        b2,
    })
}

fn check_finite(what: &str, values: &[f64]) -> Result<(), ModelError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ModelError::NonFinite(what.to_string()))
    }
}

fn normalized(what: &str, mut amp: Vec<Complex64>) -> Result<Vec<Complex64>, ModelError> {
    if amp.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(ModelError::NonFinite(what.to_string()));
    }
    let norm: f64 = amp.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(ModelError::NonNormalized {
            what: what.to_string(),
            norm,
        });
    }
    let scale = norm.sqrt().recip();
    for c in &mut amp {
        *c *= scale;
    }
    Ok(amp)
}

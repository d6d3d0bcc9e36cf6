//! Certification from witness values: the optimized states must reproduce
//! the semi-SIC Gram matrix, and the fourth measurement that never fires on
//! its own input must be the semi-SIC POVM with reversed Bloch vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bloch::{align_isometry, gram, BlochVector, Isometry};
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::optimizer::{seesaw, SeesawConfig};
use crate::povm::{build_semi_sic, check_b, target_gram_entries, Povm, PovmElement};
use crate::scalar::{tol, Scalar};
use crate::strategy::Strategy;
use crate::witness::{penalized_mass, q_of_b, SignBranch, WitnessSpec};

pub const SCHEMA: &str = "certification/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_pass() { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct StatesReport<T> {
    #[serde(rename = "B")]
    pub b: T,
    pub achieved_w: T,
    pub target_q: T,
    /// Largest entrywise deviation from the target Gram matrix.
    pub gram_residual: T,
    /// Maps the strategy's states onto the semi-SIC directions.
    pub isometry: Isometry<T>,
    /// Largest `|s R m_x − h_x|` after alignment.
    pub isometry_residual: T,
    pub tol: T,
    pub verdict: Verdict,
}

/// Checks the state stage: `W ≥ Q(B) − tol`, Gram matrix of the states equal
/// to the semi-SIC Gram within `tol`, and an isometry onto the semi-SIC
/// directions with per-vector error `≤ tol`.
pub fn certify_states<T: Scalar>(strategy: &Strategy<T>, b: T, tol: T) -> Result<StatesReport<T>> {
    check_b(b)?;
    let spec = WitnessSpec::from_b(b, SignBranch::Positive)?;
    let target_q = q_of_b(b)?;
    let achieved_w = strategy.witness_value(&spec)?;
    let states = strategy.state_vectors();

    let g = gram(&states)?;
    let target = target_gram_entries(b);
    let mut gram_residual = T::zero();
    for (i, row) in target.iter().enumerate() {
        for (j, &t) in row.iter().enumerate() {
            gram_residual = gram_residual.max((g.get(i, j) - t).abs());
        }
    }

    let h = build_semi_sic(b)?.directions();
    let isometry = align_isometry(&states, &h)?;
    let isometry_residual =
        states.iter().zip(&h).fold(T::zero(), |acc, (m, t)| acc.max((isometry.apply(m) - *t).norm()));

    let ok = achieved_w >= target_q - tol && gram_residual <= tol && isometry_residual <= tol;
    Ok(StatesReport {
        b,
        achieved_w,
        target_q,
        gram_residual,
        isometry,
        isometry_residual,
        tol,
        verdict: Verdict::from_bool(ok),
    })
}

/// The only POVM that never reports outcome `x` on state `x`: directions
/// `n_x = −m_x`, weights from `Σ λ = 1`, `Σ λ n = 0`.
pub fn reconstruct_fourth_povm<T: Scalar>(states: &[BlochVector<T>; 4]) -> Result<Povm<T>> {
    for m in states {
        let norm = m.norm();
        if (norm - T::one()).abs() > T::tol(tol::OPTIMIZATION) {
            return Err(Error::InvalidState { norm: norm.as_f64() });
        }
    }
    let n = states.map(|m| -m);
    let a: [[T; 4]; 4] = [[T::one(); 4], n.map(|v| v.x), n.map(|v| v.y), n.map(|v| v.z)];
    let rhs = [T::one(), T::zero(), T::zero(), T::zero()];
    let lambda = solve(&a, &rhs, T::tol(tol::COPLANAR)).ok_or(Error::CoplanarDirections)?;
    if let Some(index) = lambda.iter().position(|&l| l <= T::zero()) {
        return Err(Error::NegativeLambda { index, value: lambda[index].as_f64() });
    }
    let elements = (0..4)
        .map(|i| PovmElement::new(lambda[i], n[i].normalized(T::epsilon()).unwrap_or(n[i])))
        .collect::<Result<Vec<_>>>()?;
    Povm::with_tolerance(elements, T::tol(tol::OPTIMIZATION))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PovmReport<T> {
    pub achieved_w_prime: T,
    pub target_q: T,
    pub k: T,
    /// `Σ_x P(b = x | x, 4)`.
    pub penalized_mass: T,
    pub weights: Vec<T>,
    pub target_weights: Vec<T>,
    pub weight_residual: T,
    /// Largest `|s R n_x − (−h_x)|` using the state-stage isometry.
    pub direction_residual: T,
    pub tol: T,
    pub verdict: Verdict,
}

/// Checks the measurement stage: `W' ≥ Q(B) − tol` and the fourth POVM equal
/// to the semi-SIC POVM with reversed directions under `isometry`.
pub fn certify_povm<T: Scalar>(
    strategy: &Strategy<T>,
    b: T,
    k: T,
    tol: T,
    isometry: &Isometry<T>,
) -> Result<PovmReport<T>> {
    let povm = strategy.fourth.as_ref().ok_or(Error::MissingFourthMeasurement)?;
    if povm.len() != 4 {
        return Err(Error::WrongArity { expected: 4, found: povm.len() });
    }
    let spec = WitnessSpec::from_b(b, SignBranch::Positive)?.with_penalty(k);
    let target_q = q_of_b(b)?;
    let behavior = strategy.behavior()?;
    let achieved_w_prime = crate::witness::evaluate_extended_witness(&behavior, &spec)?;
    let mass = penalized_mass(&behavior)?;

    let target = build_semi_sic(b)?.negated();
    let weights = povm.weights();
    let target_weights = target.weights();
    let weight_residual = weights.iter().zip(&target_weights).fold(T::zero(), |acc, (w, t)| acc.max((*w - *t).abs()));
    let direction_residual = povm
        .directions()
        .iter()
        .zip(target.directions())
        .fold(T::zero(), |acc, (n, t)| acc.max((isometry.apply(n) - t).norm()));

    let ok = achieved_w_prime >= target_q - tol && weight_residual <= tol && direction_residual <= tol;
    Ok(PovmReport {
        achieved_w_prime,
        target_q,
        k,
        penalized_mass: mass,
        weights,
        target_weights,
        weight_residual,
        direction_residual,
        tol,
        verdict: Verdict::from_bool(ok),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificationConfig {
    pub seesaw: SeesawConfig,
    /// Penalty weight of the extended witness.
    pub k: f64,
    pub tol: f64,
}

impl Default for CertificationConfig {
    fn default() -> Self {
        Self { seesaw: SeesawConfig::default(), k: 1.0, tol: tol::CERTIFICATION }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SeesawSummary<T> {
    pub value: T,
    pub iterations: usize,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageVerdicts {
    pub states: Verdict,
    pub povm: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CertificationReport<T> {
    pub schema: String,
    #[serde(rename = "B")]
    pub b: T,
    pub c1: T,
    pub c2: T,
    pub target_q: T,
    pub achieved_w: T,
    pub achieved_w_prime: T,
    pub gram_residual: T,
    pub isometry: Isometry<T>,
    pub isometry_residual: T,
    pub povm_weights: Vec<T>,
    pub target_weights: Vec<T>,
    pub povm_weight_residual: T,
    pub povm_direction_residual: T,
    pub povm_residual: T,
    pub penalized_mass: T,
    pub seesaw: SeesawSummary<T>,
    pub config: CertificationConfig,
    pub stages: StageVerdicts,
    pub verdict: Verdict,
    pub strategy: Strategy<T>,
}

impl<T: Scalar> CertificationReport<T> {
    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}

/// See-saw for the states, reconstruction of the fourth POVM, and both stage
/// checks. Deterministic for a given seed.
pub fn run_full_certification<T: Scalar>(b: T, config: &CertificationConfig) -> Result<CertificationReport<T>> {
    check_b(b)?;
    if !(config.tol > 0.0) || !(config.k > 0.0) {
        return Err(Error::InvalidConfig(format!("tol and k must be positive, got {} and {}", config.tol, config.k)));
    }
    let tol = T::lit(config.tol);
    let k = T::lit(config.k);
    let spec = WitnessSpec::from_b(b, SignBranch::Positive)?.with_penalty(k);
    let run = seesaw(&spec, &config.seesaw)?;
    let states = certify_states(&run.strategy, b, tol)?;
    let fourth = reconstruct_fourth_povm(&run.strategy.state_vectors())?;
    let strategy = run.strategy.clone().with_fourth(fourth);
    let povm = certify_povm(&strategy, b, k, tol, &states.isometry)?;
    let stages = StageVerdicts { states: states.verdict, povm: povm.verdict };
    Ok(CertificationReport {
        schema: SCHEMA.to_string(),
        b,
        c1: spec.c1,
        c2: spec.c2,
        target_q: states.target_q,
        achieved_w: states.achieved_w,
        achieved_w_prime: povm.achieved_w_prime,
        gram_residual: states.gram_residual,
        isometry: states.isometry,
        isometry_residual: states.isometry_residual,
        povm_weights: povm.weights,
        target_weights: povm.target_weights,
        povm_weight_residual: povm.weight_residual,
        povm_direction_residual: povm.direction_residual,
        povm_residual: povm.weight_residual.max(povm.direction_residual),
        penalized_mass: povm.penalized_mass,
        seesaw: SeesawSummary {
            value: run.value,
            iterations: run.iterations,
            restarts_used: run.restarts_used,
            best_restart: run.best_restart,
            converged: run.converged,
        },
        config: *config,
        verdict: Verdict::from_bool(stages.states.is_pass() && stages.povm.is_pass()),
        stages,
        strategy,
    })
}

impl<T: Scalar> fmt::Display for CertificationReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::report::fmt_sig17 as g;
        writeln!(f, "certification at B = {}: {}", g(self.b.as_f64()), self.verdict)?;
        writeln!(f, "  target Q            {}", g(self.target_q.as_f64()))?;
        writeln!(f, "  achieved W          {}", g(self.achieved_w.as_f64()))?;
        writeln!(f, "  achieved W'         {}", g(self.achieved_w_prime.as_f64()))?;
        writeln!(f, "  gram residual       {}", g(self.gram_residual.as_f64()))?;
        writeln!(f, "  isometry residual   {} (sign {})", g(self.isometry_residual.as_f64()), self.isometry.sign)?;
        writeln!(f, "  povm residual       {}", g(self.povm_residual.as_f64()))?;
        writeln!(f, "  penalized mass      {}", g(self.penalized_mass.as_f64()))?;
        writeln!(f, "  states stage        {}", self.stages.states)?;
        write!(f, "  povm stage          {}", self.stages.povm)
    }
}

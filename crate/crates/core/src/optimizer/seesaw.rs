//! Alternating exact maximization over states and measurements.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::sampling::{random_unit_vector, task_rng};
use crate::scalar::{tol, Scalar};
use crate::strategy::Strategy;
use crate::witness::WitnessSpec;

use super::{degenerate_mu, optimal_directions, optimal_states};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeesawConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Stop once a full round gains less than this...
    pub tol: f64,
    /// ...and no state moved by more than this during the round.
    pub state_tol: f64,
    pub max_iters: usize,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self { seed: 42, restarts: 20, tol: 1e-12, state_tol: 1e-12, max_iters: 10_000 }
    }
}

impl SeesawConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.state_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("state_tol must be positive, got {}", self.state_tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// One ascent from a fixed starting point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SeesawRun<T> {
    pub value: T,
    pub strategy: Strategy<T>,
    /// Full rounds (states half-step then measurement half-step).
    pub iterations: usize,
    pub converged: bool,
    /// Witness value after every half-step.
    pub trace: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SeesawResult<T> {
    pub value: T,
    pub strategy: Strategy<T>,
    pub iterations: usize,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub converged: bool,
    pub trace: Vec<T>,
}

/// Ascends from `dirs` with `μ_1 = mu1` initially and `μ_2 = μ_3 = 0` throughout
/// (their column sums vanish, so `|μ| = 1` never helps).
///
/// Each round maximizes over states, then over `(μ_1, v_1, v_2, v_3)`. A
/// vanishing `u_x` or `z_y` keeps the previous vector, which is as good as
/// any other choice.
pub fn seesaw_from<T: Scalar>(
    spec: &WitnessSpec<T>,
    init_dirs: [BlochVector<T>; 3],
    init_mu1: T,
    config: &SeesawConfig,
) -> Result<SeesawRun<T>> {
    let tol = T::lit(config.tol);
    let state_tol = T::lit(config.state_tol);
    let w1 = spec.column_sums()[0];
    let tie = T::tol(tol::ALGEBRAIC);
    let zero = T::lit(tol::ZERO_LENGTH);
    let mut dirs = init_dirs;
    let mut mu1 = init_mu1;
    let mut states = [BlochVector::unit_z(); 4];
    let mut trace = Vec::new();
    let mut prev = T::neg_infinity();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iters {
        iterations += 1;
        let eff = [dirs[0] * (T::one() - mu1.abs()), dirs[1], dirs[2]];
        let s = optimal_states(spec, &eff);
        let mut moved = T::zero();
        for x in 0..4 {
            if !s.unspecified[x] {
                moved = moved.max((s.states[x] - states[x]).norm());
                states[x] = s.states[x];
            }
        }
        trace.push(mu1 * w1 + s.value);

        let d = optimal_directions(spec, &states);
        let z1 = d.z[0].norm();
        if z1 > w1.abs() + tie {
            mu1 = T::zero();
        } else if z1 + tie < w1.abs() {
            mu1 = degenerate_mu(w1);
        }
        for y in 0..3 {
            if d.z[y].norm() > zero {
                dirs[y] = d.dirs[y];
            }
        }
        let value = mu1 * w1 + (T::one() - mu1.abs()) * z1 + d.z[1].norm() + d.z[2].norm();
        trace.push(value);
        if value - prev < tol && moved <= state_tol {
            converged = true;
            break;
        }
        prev = value;
    }

    let strategy = Strategy::new(states, dirs, [mu1, T::zero(), T::zero()])?;
    Ok(SeesawRun { value: *trace.last().expect("at least one round"), strategy, iterations, converged, trace })
}

/// One restart: random directions, started once with `μ_1 = 0` and once with
/// `μ_1 = sgn W_1`; the projective start wins ties.
pub fn seesaw_restart<T: Scalar>(spec: &WitnessSpec<T>, config: &SeesawConfig, index: usize) -> Result<SeesawRun<T>> {
    let mut rng = task_rng(config.seed, index as u64);
    let dirs: [BlochVector<T>; 3] = std::array::from_fn(|_| random_unit_vector(&mut rng));
    let projective = seesaw_from(spec, dirs, T::zero(), config)?;
    let degenerate = seesaw_from(spec, dirs, degenerate_mu(spec.column_sums()[0]), config)?;
    Ok(if degenerate.value > projective.value { degenerate } else { projective })
}

/// Best see-saw result over `config.restarts` random starts, run in parallel.
/// Equal values go to the lowest restart index.
pub fn seesaw<T: Scalar>(spec: &WitnessSpec<T>, config: &SeesawConfig) -> Result<SeesawResult<T>> {
    config.validate()?;
    let runs =
        (0..config.restarts).into_par_iter().map(|r| seesaw_restart(spec, config, r)).collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = r;
        }
    }
    let run = runs.into_iter().nth(best).expect("restarts >= 1");
    Ok(SeesawResult {
        value: run.value,
        strategy: run.strategy,
        iterations: run.iterations,
        restarts_used: config.restarts,
        best_restart: best,
        converged: run.converged,
        trace: run.trace,
    })
}

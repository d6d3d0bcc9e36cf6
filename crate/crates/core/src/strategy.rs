use serde::{Deserialize, Serialize};

use crate::bloch::{born_probability, BlochVector, QubitState, TwoOutcomeMeasurement};
use crate::error::{Error, Result};
use crate::povm::Povm;
use crate::scalar::Scalar;
use crate::witness::{evaluate_extended_witness, evaluate_witness, BehaviorTable, WitnessSpec};

/// A complete qubit strategy: four preparations, three two-outcome
/// measurements given in observable form `μ_y 1 + (1 − |μ_y|) v_y·σ`, and an
/// optional four-outcome measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Strategy<T> {
    pub states: [QubitState<T>; 4],
    pub projective_dirs: [BlochVector<T>; 3],
    pub mus: [T; 3],
    pub fourth: Option<Povm<T>>,
}

impl<T: Scalar> Strategy<T> {
    pub fn new(states: [BlochVector<T>; 4], dirs: [BlochVector<T>; 3], mus: [T; 3]) -> Result<Self> {
        let states = [
            QubitState::new(states[0])?,
            QubitState::new(states[1])?,
            QubitState::new(states[2])?,
            QubitState::new(states[3])?,
        ];
        let s = Self { states, projective_dirs: dirs, mus, fourth: None };
        for y in 0..3 {
            s.measurement(y)?;
        }
        Ok(s)
    }

    /// Projective measurements along `dirs`.
    pub fn projective(states: [BlochVector<T>; 4], dirs: [BlochVector<T>; 3]) -> Result<Self> {
        Self::new(states, dirs, [T::zero(); 3])
    }

    pub fn with_fourth(mut self, povm: Povm<T>) -> Self {
        self.fourth = Some(povm);
        self
    }

    pub fn state_vectors(&self) -> [BlochVector<T>; 4] {
        self.states.map(|s| s.bloch())
    }

    /// Measurement `y` (zero-based).
    pub fn measurement(&self, y: usize) -> Result<TwoOutcomeMeasurement<T>> {
        TwoOutcomeMeasurement::from_observable(self.mus[y], self.projective_dirs[y])
    }

    /// `P(b|x,y)` from the Born rule for every input pair present in the strategy.
    pub fn behavior(&self) -> Result<BehaviorTable<T>> {
        let mut table = BehaviorTable::new();
        for (x, state) in self.states.iter().enumerate() {
            for y in 0..3 {
                table.set(x + 1, y + 1, self.measurement(y)?.probabilities(state)?.to_vec());
            }
            if let Some(povm) = &self.fourth {
                if povm.len() != 4 {
                    return Err(Error::WrongArity { expected: 4, found: povm.len() });
                }
                let probs = povm
                    .elements()
                    .iter()
                    .map(|e| born_probability(state, e.weight, &e.direction))
                    .collect::<Result<Vec<_>>>()?;
                table.set(x + 1, 4, probs);
            }
        }
        Ok(table)
    }

    pub fn witness_value(&self, spec: &WitnessSpec<T>) -> Result<T> {
        evaluate_witness(&self.behavior()?, spec)
    }

    pub fn extended_witness_value(&self, spec: &WitnessSpec<T>) -> Result<T> {
        if self.fourth.is_none() {
            return Err(Error::MissingFourthMeasurement);
        }
        evaluate_extended_witness(&self.behavior()?, spec)
    }
}

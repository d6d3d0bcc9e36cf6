//! The prepare-and-measure witness, its evaluation on behavior tables and the
//! closed-form maxima `Q(c1, c2)`, `Q(B)` and the degenerate-branch value `Q'`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::povm::check_b;
use crate::scalar::Scalar;

/// Which of the two sign-consistent `(c1, c2)` pairs to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignBranch {
    #[default]
    Positive,
    Negative,
}

/// Witness coefficients `w(c1, c2)` plus the penalty `k` of the extended witness.
///
/// Rows are `(c1, 1, 1)`, `(c1, −1, −1)`, `(−c2, 1, −1)`, `(−c2, −1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct WitnessSpec<T> {
    pub c1: T,
    pub c2: T,
    pub penalty_k: T,
}

impl<T: Scalar> WitnessSpec<T> {
    pub fn new(c1: T, c2: T) -> Self {
        Self { c1, c2, penalty_k: T::one() }
    }

    pub fn with_penalty(mut self, k: T) -> Self {
        self.penalty_k = k;
        self
    }

    /// Witness whose maximizing states reproduce the semi-SIC with parameter `b`.
    pub fn from_b(b: T, branch: SignBranch) -> Result<Self> {
        let (c1, c2) = c_params_from_b(b, branch)?;
        Ok(Self::new(c1, c2))
    }

    pub fn matrix(&self) -> [[T; 3]; 4] {
        let (one, c1, c2) = (T::one(), self.c1, self.c2);
        [[c1, one, one], [c1, -one, -one], [-c2, one, -one], [-c2, -one, one]]
    }

    /// Column sums `W_y = Σ_x w_xy`, always `(2c1 − 2c2, 0, 0)`.
    pub fn column_sums(&self) -> [T; 3] {
        let w = self.matrix();
        std::array::from_fn(|y| w.iter().fold(T::zero(), |acc, row| acc + row[y]))
    }
}

fn c_params_unchecked<T: Scalar>(b: T) -> (T, T) {
    let root = (T::one() - T::lit(12.0) * b).max(T::zero()).sqrt();
    let base = T::one() - T::lit(6.0) * b;
    let denom = T::lit(24.0) * b - T::one();
    let c1 = (T::lit(2.0) * (base + root) / denom).max(T::zero()).sqrt();
    let c2 = (T::lit(2.0) * (base - root) / denom).max(T::zero()).sqrt();
    (c1, c2)
}

/// `(c1, c2)` that make the optimal states' Gram matrix equal the semi-SIC's.
pub fn c_params_from_b<T: Scalar>(b: T, branch: SignBranch) -> Result<(T, T)> {
    check_b(b)?;
    let (c1, c2) = c_params_unchecked(b);
    Ok(match branch {
        SignBranch::Positive => (c1, c2),
        SignBranch::Negative => (-c1, -c2),
    })
}

/// `Q = 2 √(2 (c1² + c2² + 4))`.
pub fn q_of_c<T: Scalar>(c1: T, c2: T) -> T {
    T::lit(2.0) * (T::lit(2.0) * (c1 * c1 + c2 * c2 + T::lit(4.0))).sqrt()
}

/// `Q(B) = 24 √(B / (24B − 1))` without the range check; defined for `B > 1/24`.
/// Used to evaluate the closed form at the excluded endpoint `B = 1/16`.
pub fn q_of_b_analytic<T: Scalar>(b: T) -> T {
    T::lit(24.0) * (b / (T::lit(24.0) * b - T::one())).sqrt()
}

pub fn q_of_b<T: Scalar>(b: T) -> Result<T> {
    check_b(b)?;
    Ok(q_of_b_analytic(b))
}

/// `(c1, c2)` from the closed forms without the range check.
pub fn c_params_analytic<T: Scalar>(b: T) -> (T, T) {
    c_params_unchecked(b)
}

/// Value of the best strategy whose first measurement is trivial (|μ₁| = 1):
/// `Q' = 2|c1 − c2| + 4√2`.
pub fn q_prime<T: Scalar>(c1: T, c2: T) -> T {
    T::lit(2.0) * (c1 - c2).abs() + T::lit(4.0) * T::SQRT_2()
}

/// Observed statistics `P(b|x, y)` keyed by 1-based `x` and `y`.
///
/// For `y ∈ {1, 2, 3}` the list is `[P(0), P(1)]`; for `y = 4` it is
/// `[P(1), P(2), P(3), P(4)]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent, bound = "T: Scalar")]
pub struct BehaviorTable<T> {
    pub entries: BTreeMap<usize, BTreeMap<usize, Vec<T>>>,
}

impl<T: Scalar> BehaviorTable<T> {
    pub fn new() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn set(&mut self, x: usize, y: usize, probs: Vec<T>) {
        self.entries.entry(x).or_default().insert(y, probs);
    }

    pub fn get(&self, x: usize, y: usize) -> Result<&[T]> {
        let expected = if y == 4 { 4 } else { 2 };
        self.entries
            .get(&x)
            .and_then(|m| m.get(&y))
            .filter(|p| p.len() == expected)
            .map(Vec::as_slice)
            .ok_or(Error::MissingEntries { x, y })
    }

    pub fn get_mut(&mut self, x: usize, y: usize) -> Result<&mut Vec<T>> {
        self.entries.get_mut(&x).and_then(|m| m.get_mut(&y)).ok_or(Error::MissingEntries { x, y })
    }

    /// Checks every stored slice is a probability distribution.
    pub fn validate(&self) -> Result<()> {
        for (x, row) in &self.entries {
            for (y, probs) in row {
                if probs.iter().any(|&p| p < T::lit(-1e-12) || !p.is_finite()) {
                    return Err(Error::InvalidBehavior(format!("negative entry at x = {x}, y = {y}")));
                }
                let total = probs.iter().fold(T::zero(), |a, &p| a + p);
                if (total - T::one()).abs() > T::tol(1e-10) {
                    return Err(Error::InvalidBehavior(format!("x = {x}, y = {y} sums to {total}")));
                }
            }
        }
        Ok(())
    }

    /// Pointwise `alpha·self + (1 − alpha)·other` over the shared keys.
    pub fn mix(&self, other: &Self, alpha: T) -> Self {
        let mut out = Self::new();
        for (x, row) in &self.entries {
            for (y, p) in row {
                if let Some(q) = other.entries.get(x).and_then(|r| r.get(y)) {
                    let mixed = p.iter().zip(q).map(|(&a, &b)| alpha * a + (T::one() - alpha) * b).collect();
                    out.set(*x, *y, mixed);
                }
            }
        }
        out
    }
}

/// `W = Σ_{x,y} w_xy (P(0|x,y) − P(1|x,y))` over `y ∈ {1, 2, 3}`.
pub fn evaluate_witness<T: Scalar>(behavior: &BehaviorTable<T>, spec: &WitnessSpec<T>) -> Result<T> {
    let w = spec.matrix();
    let mut total = T::zero();
    for (x, row) in w.iter().enumerate() {
        for (y, &coef) in row.iter().enumerate() {
            let p = behavior.get(x + 1, y + 1)?;
            total = total + coef * (p[0] - p[1]);
        }
    }
    Ok(total)
}

/// `W' = W − k Σ_x P(b = x | x, y = 4)`.
pub fn evaluate_extended_witness<T: Scalar>(behavior: &BehaviorTable<T>, spec: &WitnessSpec<T>) -> Result<T> {
    let base = evaluate_witness(behavior, spec)?;
    Ok(base - spec.penalty_k * penalized_mass(behavior)?)
}

/// `Σ_x P(b = x | x, y = 4)`.
pub fn penalized_mass<T: Scalar>(behavior: &BehaviorTable<T>) -> Result<T> {
    (1..=4).try_fold(T::zero(), |acc, x| Ok(acc + behavior.get(x, 4)?[x - 1]))
}

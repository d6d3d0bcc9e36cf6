//! Maximization of the witness over qubit strategies.
//!
//! For fixed measurement directions the best states are `m_x = u_x/|u_x|`
//! with `u_x = Σ_y w_xy v_y`; for fixed states the best directions are
//! `v_y = z_y/|z_y|` with `z_y = Σ_x w_xy m_x`. The see-saw alternates the two,
//! [`closed_form_optimum`] writes the global maximum down directly, and
//! [`landscape`] holds the stationarity and concavity checks in the space of
//! direction overlaps `γ`.

pub mod landscape;
pub mod perturbation;
pub mod seesaw;

use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};
use crate::strategy::Strategy;
use crate::witness::{q_of_c, WitnessSpec};

pub use landscape::{gamma_stationarity_residual, hessian_probe, GammaPoint, HessianProbe};
pub use perturbation::{zero_term_perturbation_check, PerturbationOutcome};
pub use seesaw::{seesaw, SeesawConfig, SeesawResult};

/// `u_x = Σ_y w_xy v_y`.
pub fn u_vectors<T: Scalar>(spec: &WitnessSpec<T>, dirs: &[BlochVector<T>; 3]) -> [BlochVector<T>; 4] {
    let w = spec.matrix();
    std::array::from_fn(|x| (0..3).fold(BlochVector::zero(), |acc, y| acc + dirs[y] * w[x][y]))
}

/// `z_y = Σ_x w_xy m_x`.
pub fn z_vectors<T: Scalar>(spec: &WitnessSpec<T>, states: &[BlochVector<T>; 4]) -> [BlochVector<T>; 3] {
    let w = spec.matrix();
    std::array::from_fn(|y| (0..4).fold(BlochVector::zero(), |acc, x| acc + states[x] * w[x][y]))
}

/// `Q_v = Σ_x |u_x|`, the witness maximized over states for fixed projective directions.
pub fn q_v<T: Scalar>(spec: &WitnessSpec<T>, dirs: &[BlochVector<T>; 3]) -> T {
    u_vectors(spec, dirs).iter().fold(T::zero(), |a, u| a + u.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct StatesStep<T> {
    pub states: [BlochVector<T>; 4],
    /// `true` where `u_x` vanished; the state is then left as the zero vector.
    pub unspecified: [bool; 4],
    pub u: [BlochVector<T>; 4],
    pub value: T,
}

/// Best preparations for fixed projective measurement directions.
pub fn optimal_states<T: Scalar>(spec: &WitnessSpec<T>, dirs: &[BlochVector<T>; 3]) -> StatesStep<T> {
    let u = u_vectors(spec, dirs);
    let eps = T::lit(tol::ZERO_LENGTH);
    let mut states = [BlochVector::zero(); 4];
    let mut unspecified = [false; 4];
    for x in 0..4 {
        match u[x].normalized(eps) {
            Some(m) => states[x] = m,
            None => unspecified[x] = true,
        }
    }
    let value = u.iter().fold(T::zero(), |a, v| a + v.norm());
    StatesStep { states, unspecified, u, value }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DirectionsStep<T> {
    pub dirs: [BlochVector<T>; 3],
    pub z: [BlochVector<T>; 3],
    /// `Σ_y |z_y|`, the witness with projective measurements.
    pub value: T,
}

/// Best projective directions for fixed states. A vanishing `z_y` gets `ẑ`.
pub fn optimal_directions<T: Scalar>(spec: &WitnessSpec<T>, states: &[BlochVector<T>; 4]) -> DirectionsStep<T> {
    let z = z_vectors(spec, states);
    let eps = T::lit(tol::ZERO_LENGTH);
    let dirs = z.map(|v| v.normalized(eps).unwrap_or_else(BlochVector::unit_z));
    let value = z.iter().fold(T::zero(), |a, v| a + v.norm());
    DirectionsStep { dirs, z, value }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuBranch {
    /// μ = 0 is strictly better: `|z_y| > |W_y|`.
    Projective,
    /// |μ| = 1 is strictly better: `|z_y| < |W_y|`.
    Degenerate,
    /// `|z_y| = |W_y|`; both branches give the same value.
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BranchChoice<T> {
    pub branch: MuBranch,
    /// μ of the winning branch. For `Degenerate` this is `sgn W_y`, and `+1`
    /// when `W_y = 0`. Ties report 0.
    pub mu: T,
    pub z_norm: T,
    pub column_sum: T,
}

/// For fixed states, per measurement: is `μ = 0` or `|μ| = 1` better?
///
/// The contribution of measurement `y` is `μ W_y + (1 − |μ|) |z_y|`, which is
/// piecewise linear in μ, so the maximum sits at 0 or at `sgn W_y`.
pub fn mu_branch_select<T: Scalar>(spec: &WitnessSpec<T>, states: &[BlochVector<T>; 4]) -> [BranchChoice<T>; 3] {
    let z = z_vectors(spec, states);
    let sums = spec.column_sums();
    let eps = T::tol(tol::ALGEBRAIC);
    std::array::from_fn(|y| {
        let z_norm = z[y].norm();
        let w = sums[y];
        let (branch, mu) = if (z_norm - w.abs()).abs() <= eps {
            (MuBranch::Tie, T::zero())
        } else if z_norm > w.abs() {
            (MuBranch::Projective, T::zero())
        } else {
            (MuBranch::Degenerate, degenerate_mu(w))
        };
        BranchChoice { branch, mu, z_norm, column_sum: w }
    })
}

/// `sgn W`, with `+1` for `W = 0`.
pub fn degenerate_mu<T: Scalar>(column_sum: T) -> T {
    if column_sum < T::zero() {
        -T::one()
    } else {
        T::one()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ClosedForm<T> {
    pub strategy: Strategy<T>,
    pub value: T,
    /// Half-angle between `v_2` and `v_3`, in `[0, π/2]`.
    pub theta: T,
    pub u: [BlochVector<T>; 4],
}

/// The projective-branch maximum:
/// `v_1 = (1,0,0)`, `v_2 = (0, cos θ, sin θ)`, `v_3 = (0, cos θ, −sin θ)` with
/// `cos 2θ = (c2² − c1²)/4`, and `m_x = u_x/|u_x|`.
pub fn closed_form_optimum<T: Scalar>(spec: &WitnessSpec<T>) -> Result<ClosedForm<T>> {
    let (c1, c2) = (spec.c1, spec.c2);
    let cos_two_theta = (c2 * c2 - c1 * c1) / T::lit(4.0);
    if cos_two_theta.abs() > T::one() + T::tol(tol::ALGEBRAIC) {
        return Err(Error::InfeasibleTheta { cos_two_theta: cos_two_theta.as_f64() });
    }
    let theta = cos_two_theta.max(-T::one()).min(T::one()).acos() * T::lit(0.5);
    let (s, c) = theta.sin_cos();
    let dirs = [BlochVector::unit_x(), BlochVector::new(T::zero(), c, s), BlochVector::new(T::zero(), c, -s)];
    let step = optimal_states(spec, &dirs);
    if let Some(index) = step.unspecified.iter().position(|&f| f) {
        return Err(Error::ZeroLengthU { index });
    }
    let strategy = Strategy::projective(step.states, dirs)?;
    Ok(ClosedForm { strategy, value: q_of_c(c1, c2), theta, u: step.u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::gram;
    use crate::povm::SemiSicParams;
    use crate::witness::{c_params_from_b, SignBranch};

    fn spec_b(b: f64) -> WitnessSpec<f64> {
        WitnessSpec::from_b(b, SignBranch::Positive).unwrap()
    }

    #[test]
    fn sic_closed_form_has_equal_u_lengths() {
        let spec = WitnessSpec::new(1.0, 1.0);
        let cf = closed_form_optimum(&spec).unwrap();
        assert!((cf.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        let step = optimal_states(&spec, &cf.strategy.projective_dirs);
        for u in step.u {
            assert!((u.norm() - 3f64.sqrt()).abs() < 1e-12);
        }
        assert!((step.value - 4.0 * 3f64.sqrt()).abs() < 1e-12);
        let g = gram(&cf.strategy.state_vectors()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { -1.0 / 3.0 };
                assert!((g.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_fifteenth_closed_form() {
        let spec = spec_b(1.0 / 15.0);
        let cf = closed_form_optimum(&spec).unwrap();
        let cos2 = (2.0 * cf.theta).cos();
        assert!((cos2 + 0.745356).abs() < 5e-7);
        assert!((cf.theta.cos() - 0.356822).abs() < 5e-7);
        assert!((cf.theta.sin() - 0.934172).abs() < 5e-7);
        for u in cf.u {
            assert!((u.norm() - 2.0).abs() < 1e-12);
        }
        assert!((cf.value - 8.0).abs() < 1e-12);
        let g = gram(&cf.strategy.state_vectors()).unwrap();
        let target = SemiSicParams::new(1.0 / 15.0).unwrap().dot_products();
        for i in 0..4 {
            for j in 0..4 {
                assert!((g.get(i, j) - target[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_coefficients_closed_form() {
        let spec = WitnessSpec::new(0.0, 0.0);
        let cf = closed_form_optimum(&spec).unwrap();
        assert!((cf.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!((cf.value - 4.0 * 2f64.sqrt()).abs() < 1e-12);
        let m = cf.strategy.state_vectors();
        assert!((m[0] - BlochVector::unit_y()).norm() < 1e-12);
        assert!((m[1] + BlochVector::unit_y()).norm() < 1e-12);
        assert!((m[2] - BlochVector::unit_z()).norm() < 1e-12);
        assert!((m[3] + BlochVector::unit_z()).norm() < 1e-12);
    }

    #[test]
    fn infeasible_theta() {
        let r = closed_form_optimum(&WitnessSpec::new(10.0, 0.1));
        assert!(matches!(r, Err(Error::InfeasibleTheta { .. })));
    }

    #[test]
    fn collinear_directions_by_hand() {
        let x = BlochVector::unit_x();
        let step = optimal_states(&WitnessSpec::<f64>::new(1.0, 1.0), &[x, x, -x]);
        // u_x = (w_x1 + w_x2 − w_x3) x̂ = 1, 1, 1, −3.
        assert!((step.value - 6.0).abs() < 1e-15);
        assert!((step.states[3] + x).norm() < 1e-15);
    }

    #[test]
    fn zero_u_is_flagged() {
        let x = BlochVector::unit_x();
        let step = optimal_states(&WitnessSpec::new(0.0, 0.0), &[x, x, -x]);
        assert_eq!(step.unspecified, [true, true, false, false]);
        assert_eq!(step.states[0], BlochVector::zero());
    }

    #[test]
    fn directions_at_the_sic_optimum() {
        let spec = WitnessSpec::new(1.0, 1.0);
        let cf = closed_form_optimum(&spec).unwrap();
        let d = optimal_directions(&spec, &cf.strategy.state_vectors());
        let want = 8.0 / (2.0f64 * 6.0).sqrt();
        assert!((d.z[1].norm() - want).abs() < 1e-12);
        assert!((d.z[2].norm() - want).abs() < 1e-12);
        assert!((want - 2.309401).abs() < 5e-7);
    }

    #[test]
    fn directions_at_the_one_fifteenth_optimum() {
        let spec = spec_b(1.0 / 15.0);
        let cf = closed_form_optimum(&spec).unwrap();
        let d = optimal_directions(&spec, &cf.strategy.state_vectors());
        // 8 / √(2 (c1² + c2² + 4)) with c1² + c2² = 4.
        assert!((d.z[1].norm() - 2.0).abs() < 1e-12);
        assert!((d.z[2].norm() - 2.0).abs() < 1e-12);
        // z_1 = (c1² + c2²)/l · x̂ = 2 x̂ ... times 2 rows each.
        assert!((d.z[0].norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn aligned_states_column_sums() {
        let spec = WitnessSpec::new(1.4, 0.3);
        let up = BlochVector::unit_z();
        let d = optimal_directions(&spec, &[up; 4]);
        assert!((d.z[0] - up * (2.0 * 1.4 - 2.0 * 0.3)).norm() < 1e-15);
        assert!(d.z[1].norm() < 1e-15 && d.z[2].norm() < 1e-15);
        assert_eq!(d.dirs[1], BlochVector::unit_z());
    }

    #[test]
    fn branch_selection() {
        let spec = spec_b(1.0 / 15.0);
        let cf = closed_form_optimum(&spec).unwrap();
        let choice = mu_branch_select(&spec, &cf.strategy.state_vectors());
        assert_eq!(choice[0].branch, MuBranch::Projective);
        assert!((choice[0].z_norm - 4.0).abs() < 1e-12);
        let (c1, c2) = c_params_from_b(1.0 / 15.0, SignBranch::Positive).unwrap();
        assert!((choice[0].column_sum - 2.0 * (c1 - c2)).abs() < 1e-12);
        assert_eq!(choice[1].branch, MuBranch::Projective);
        assert_eq!(choice[2].branch, MuBranch::Projective);

        // All states equal: z_2 = z_3 = 0 = W_2 = W_3 is a tie, and with a
        // large c1 − c2 the first measurement prefers μ = +1.
        let spec = WitnessSpec::new(3.0, 0.5);
        let m = BlochVector::unit_z();
        let choice = mu_branch_select(&spec, &[m, m, -m, -m]);
        assert_eq!(choice[1].branch, MuBranch::Tie);
        let choice = mu_branch_select(&spec, &[m, -m, m, -m]);
        assert_eq!(choice[0].branch, MuBranch::Degenerate);
        assert_eq!(choice[0].mu, 1.0);
    }

    #[test]
    fn equal_coefficients_are_projective() {
        let spec = WitnessSpec::new(1.0, 1.0);
        let cf = closed_form_optimum(&spec).unwrap();
        let choice = mu_branch_select(&spec, &cf.strategy.state_vectors());
        assert!(choice.iter().all(|c| c.branch == MuBranch::Projective));
        assert_eq!(choice[0].column_sum, 0.0);
    }
}

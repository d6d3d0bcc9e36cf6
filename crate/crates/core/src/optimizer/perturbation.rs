use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};
use crate::witness::WitnessSpec;

use super::{q_v, u_vectors};

/// Threshold below which `|u_x|` counts as a zero term.
pub const ZERO_TERM: f64 = 1e-10;
/// Default perturbation size.
pub const DELTA: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PerturbationOutcome<T> {
    pub improved: bool,
    pub base_value: T,
    pub best_value: T,
    /// Zero-based indices `x` with `|u_x| < 1e-10`.
    pub zero_terms: Vec<usize>,
    /// `(y, signed tangent index)` of the best move, if any improved.
    pub best_move: Option<(usize, i8)>,
}

fn tangents<T: Scalar>(v: &BlochVector<T>) -> [BlochVector<T>; 2] {
    let eps = T::lit(tol::ZERO_LENGTH);
    let base = v.normalized(eps).unwrap_or_else(BlochVector::unit_z);
    let t1 = base.any_orthogonal();
    let t2 = base.cross(&t1).normalized(eps).unwrap_or_else(|| t1.any_orthogonal());
    [t1, t2]
}

/// Moves `v` by `±δ` along its tangent plane, then pulls it back onto the
/// unit ball.
fn nudge<T: Scalar>(v: &BlochVector<T>, t: &BlochVector<T>, delta: T) -> BlochVector<T> {
    let moved = *v + *t * delta;
    let n = moved.norm();
    if v.is_unit() || n > T::one() {
        moved * (T::one() / n)
    } else {
        moved
    }
}

/// With some `u_x = 0`, tries `v_y ± δ t` for every `y` with `w_xy ≠ 0` and both
/// tangents `t`, and reports whether any move increases `Q_v`.
pub fn zero_term_perturbation_check<T: Scalar>(
    spec: &WitnessSpec<T>,
    dirs: &[BlochVector<T>; 3],
    delta: T,
) -> Result<PerturbationOutcome<T>> {
    let u = u_vectors(spec, dirs);
    let zero_terms: Vec<usize> = (0..4).filter(|&x| u[x].norm() < T::lit(ZERO_TERM)).collect();
    if zero_terms.is_empty() {
        return Err(Error::NoZeroTerm);
    }
    let w = spec.matrix();
    let base_value = q_v(spec, dirs);
    let mut best_value = base_value;
    let mut best_move = None;
    for y in 0..3 {
        if zero_terms.iter().all(|&x| w[x][y] == T::zero()) {
            continue;
        }
        for (k, t) in tangents(&dirs[y]).iter().enumerate() {
            for sign in [1i8, -1] {
                let mut trial = *dirs;
                trial[y] = nudge(&dirs[y], t, delta * T::lit(sign as f64));
                let value = q_v(spec, &trial);
                if value > best_value {
                    best_value = value;
                    best_move = Some((y, sign * (k as i8 + 1)));
                }
            }
        }
    }
    Ok(PerturbationOutcome {
        improved: best_value > base_value + T::tol(tol::ALGEBRAIC),
        base_value,
        best_value,
        zero_terms,
        best_move,
    })
}

/// Directions with `u_x = 0` for a row `(a, b, c)` of `w` with `|a| ≤ 2` and
/// `|b| = |c| = 1`: `v_2 = b(−a/2 v_1 + s p)`, `v_3 = c(−a/2 v_1 − s p)` with
/// `s = √(1 − a²/4)` and `p ⟂ v_1`.
pub fn engineer_zero_term<T: Scalar>(
    spec: &WitnessSpec<T>,
    x: usize,
    v1: BlochVector<T>,
    p: BlochVector<T>,
) -> Result<[BlochVector<T>; 3]> {
    let row = spec.matrix()[x];
    let (a, b, c) = (row[0], row[1], row[2]);
    let half = a * T::lit(0.5);
    if half.abs() > T::one() {
        return Err(Error::InvalidConfig(format!("|w_x1| = {} exceeds 2", a.abs())));
    }
    let eps = T::lit(tol::ZERO_LENGTH);
    let v1 = v1.normalized(eps).ok_or(Error::DegenerateInput)?;
    let p = (p - v1 * v1.dot(&p)).normalized(eps).ok_or(Error::DegenerateInput)?;
    let s = (T::one() - half * half).max(T::zero()).sqrt();
    Ok([v1, (v1 * -half + p * s) * b, (v1 * -half - p * s) * c])
}

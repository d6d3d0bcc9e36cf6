//! The projective-branch witness as a function of the direction overlaps
//! `γ_{yy'} = v_y·v_{y'}`.
//!
//! With unit directions, `|u_x|² = s_x + 2 Σ_α t_xα γ_α` where
//! `s_x = Σ_y w_xy²` and `t_xα = w_xy w_xy'` for the pair `α = (y, y')`.
//! Pairs are ordered `(1,2), (1,3), (2,3)`.

use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::scalar::{tol, Scalar};
use crate::witness::WitnessSpec;

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Central-difference step for the finite-difference Hessian.
pub const FD_STEP: f64 = 1e-5;
/// Relative agreement required between the analytic and finite-difference Hessians.
pub const FD_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GammaPoint<T> {
    pub gamma12: T,
    pub gamma13: T,
    pub gamma23: T,
}

impl<T: Scalar> GammaPoint<T> {
    pub fn new(gamma12: T, gamma13: T, gamma23: T) -> Self {
        Self { gamma12, gamma13, gamma23 }
    }

    pub fn from_dirs(dirs: &[BlochVector<T>; 3]) -> Self {
        Self::new(dirs[0].dot(&dirs[1]), dirs[0].dot(&dirs[2]), dirs[1].dot(&dirs[2]))
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.gamma12, self.gamma13, self.gamma23]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Unit-diagonal 3×3 matrix of overlaps.
    pub fn gram(&self) -> [[T; 3]; 3] {
        let o = T::one();
        [[o, self.gamma12, self.gamma13], [self.gamma12, o, self.gamma23], [self.gamma13, self.gamma23, o]]
    }

    /// Realizable by three unit vectors: the overlap matrix is PSD.
    pub fn is_feasible(&self) -> bool {
        let eps = T::tol(tol::PSD);
        self.as_array().iter().all(|g| g.abs() <= T::one() + eps) && symmetric_eigenvalues(&self.gram())[0] >= -eps
    }
}

/// `s_x` and `t_xα` for every row.
pub fn coefficients<T: Scalar>(spec: &WitnessSpec<T>) -> ([T; 4], [[T; 3]; 4]) {
    let w = spec.matrix();
    let s = w.map(|row| row.iter().fold(T::zero(), |a, &v| a + v * v));
    let t = w.map(|row| PAIRS.map(|(i, j)| row[i] * row[j]));
    (s, t)
}

/// `l_x² = |u_x|²` at the given overlaps.
pub fn l_squared<T: Scalar>(spec: &WitnessSpec<T>, point: &GammaPoint<T>) -> [T; 4] {
    let (s, t) = coefficients(spec);
    let g = point.as_array();
    let two = T::lit(2.0);
    std::array::from_fn(|x| s[x] + two * (0..3).fold(T::zero(), |a, k| a + t[x][k] * g[k]))
}

fn lengths<T: Scalar>(spec: &WitnessSpec<T>, point: &GammaPoint<T>) -> Option<[T; 4]> {
    let l2 = l_squared(spec, point);
    if l2.iter().all(|&v| v > T::zero()) {
        Some(l2.map(|v| v.sqrt()))
    } else {
        None
    }
}

/// `Q_γ = Σ_x l_x`.
pub fn q_gamma<T: Scalar>(spec: &WitnessSpec<T>, point: &GammaPoint<T>) -> Result<T> {
    let l2 = l_squared(spec, point);
    if l2.iter().any(|&v| v < T::zero()) {
        return Err(Error::OutsideDomain);
    }
    Ok(l2.iter().fold(T::zero(), |a, v| a + v.sqrt()))
}

/// `∂Q_γ/∂γ_α = Σ_x t_xα / l_x`, the left-hand sides of the stationarity equations.
pub fn gamma_stationarity_residual<T: Scalar>(spec: &WitnessSpec<T>, point: &GammaPoint<T>) -> Result<[T; 3]> {
    let l2 = l_squared(spec, point);
    let eps = T::lit(tol::ZERO_LENGTH);
    if let Some(index) = l2.iter().position(|&v| v <= eps * eps) {
        return Err(Error::ZeroLengthU { index });
    }
    let (_, t) = coefficients(spec);
    Ok(gradient(&t, &l2.map(|v| v.sqrt())))
}

fn gradient<T: Scalar>(t: &[[T; 3]; 4], l: &[T; 4]) -> [T; 3] {
    std::array::from_fn(|a| (0..4).fold(T::zero(), |acc, x| acc + t[x][a] / l[x]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct HessianProbe<T> {
    /// `−RᵀR` with `R_xα = t_xα / l_x^{3/2}`.
    pub analytic: [[T; 3]; 3],
    /// Central differences of the analytic gradient.
    pub finite_difference: [[T; 3]; 3],
    /// Ascending.
    pub eigenvalues: [T; 3],
    pub max_eigenvalue: T,
    /// `max |analytic − fd| / max |analytic|`.
    pub relative_error: T,
    pub agrees: bool,
    /// Rank of `t`; full rank makes the Hessian strictly negative definite.
    pub t_rank: usize,
    pub negative_definite: bool,
}

/// Analytic Hessian of `Q_γ` with a finite-difference cross-check.
pub fn hessian_probe<T: Scalar>(spec: &WitnessSpec<T>, point: &GammaPoint<T>) -> Result<HessianProbe<T>> {
    let (_, t) = coefficients(spec);
    let l = lengths(spec, point).ok_or(Error::OutsideDomain)?;
    let r: [[T; 3]; 4] = std::array::from_fn(|x| {
        let d = l[x] * l[x].sqrt();
        t[x].map(|v| v / d)
    });
    let analytic: [[T; 3]; 3] =
        std::array::from_fn(|a| std::array::from_fn(|b| -(0..4).fold(T::zero(), |acc, x| acc + r[x][a] * r[x][b])));

    let h = T::lit(FD_STEP);
    let g0 = point.as_array();
    let mut finite_difference = [[T::zero(); 3]; 3];
    for b in 0..3 {
        let mut plus = g0;
        let mut minus = g0;
        plus[b] = plus[b] + h;
        minus[b] = minus[b] - h;
        let lp = lengths(spec, &GammaPoint::from_array(plus)).ok_or(Error::OutsideDomain)?;
        let lm = lengths(spec, &GammaPoint::from_array(minus)).ok_or(Error::OutsideDomain)?;
        let (gp, gm) = (gradient(&t, &lp), gradient(&t, &lm));
        for a in 0..3 {
            finite_difference[a][b] = (gp[a] - gm[a]) / (h + h);
        }
    }

    let scale = crate::linalg::max_abs(&analytic);
    let mut diff = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            diff = diff.max((analytic[a][b] - finite_difference[a][b]).abs());
        }
    }
    let relative_error = if scale > T::zero() { diff / scale } else { diff };
    let eigenvalues = symmetric_eigenvalues(&analytic);
    let max_eigenvalue = eigenvalues[2];

    let tt: [[T; 3]; 3] =
        std::array::from_fn(|a| std::array::from_fn(|b| (0..4).fold(T::zero(), |acc, x| acc + t[x][a] * t[x][b])));
    let te = symmetric_eigenvalues(&tt);
    let t_scale = te[2].abs();
    let t_rank = te.iter().filter(|&&e| e > T::tol(tol::ALGEBRAIC) * t_scale.max(T::one())).count();

    Ok(HessianProbe {
        analytic,
        finite_difference,
        eigenvalues,
        max_eigenvalue,
        relative_error,
        agrees: relative_error <= T::lit(FD_REL_TOL),
        t_rank,
        negative_definite: t_rank == 3 && max_eigenvalue < T::zero(),
    })
}

/// The counting condition `M_m ≥ M_v (M_v − 1)/2 + 1` under which the
/// stationary point is unique.
pub fn uniqueness_condition(num_states: usize, num_dirs: usize) -> bool {
    num_states > num_dirs * num_dirs.saturating_sub(1) / 2
}

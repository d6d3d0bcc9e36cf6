//! Qubit states and effects in Bloch form, Born-rule probabilities, Gram
//! matrices and alignment of vector sets up to `±R`.
//!
//! Everything lives in ℝ³: a state is `(1 + m·σ)/2` and a rank-one effect
//! with weight `λ` is `λ(1 + n·σ)`, so `Tr(ρ E) = λ(1 + m·n)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3};
use crate::scalar::{tol, Scalar};

/// Real 3-vector used for states, measurement directions and auxiliary sums.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[T; 3]", into = "[T; 3]", bound = "T: Scalar")]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> From<[T; 3]> for BlochVector<T> {
    fn from(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl<T: Scalar> From<BlochVector<T>> for [T; 3] {
    fn from(v: BlochVector<T>) -> Self {
        [v.x, v.y, v.z]
    }
}

impl<T: Scalar> BlochVector<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    /// Builds a vector that must have unit length within the algebraic tolerance.
    pub fn try_unit(x: T, y: T, z: T) -> Result<Self> {
        let v = Self::new(x, y, z);
        if v.is_unit() {
            Ok(v)
        } else {
            Err(Error::InvalidState { norm: v.norm().as_f64() })
        }
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - T::one()).abs() <= T::tol(tol::ALGEBRAIC)
    }

    /// Unit vector along `self`, or `None` when the length is below `eps`.
    pub fn normalized(&self, eps: T) -> Option<Self> {
        let n = self.norm();
        (n > eps).then(|| *self * (T::one() / n))
    }

    pub fn to_array(self) -> [T; 3] {
        self.into()
    }

    /// `m * self`, with `m` row-major.
    pub fn transformed(&self, m: &Mat3<T>) -> Self {
        Self::new(
            m[0][0] * self.x + m[0][1] * self.y + m[0][2] * self.z,
            m[1][0] * self.x + m[1][1] * self.y + m[1][2] * self.z,
            m[2][0] * self.x + m[2][1] * self.y + m[2][2] * self.z,
        )
    }

    /// Any unit vector orthogonal to `self` (which must be nonzero).
    pub fn any_orthogonal(&self) -> Self {
        let a = [self.x.abs(), self.y.abs(), self.z.abs()];
        let axis = if a[0] <= a[1] && a[0] <= a[2] {
            Self::unit_x()
        } else if a[1] <= a[2] {
            Self::unit_y()
        } else {
            Self::unit_z()
        };
        let c = self.cross(&axis);
        c * (T::one() / c.norm())
    }
}

impl<T: Scalar> Add for BlochVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> AddAssign for BlochVector<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for BlochVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Neg for BlochVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Scalar> Mul<T> for BlochVector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Qubit density operator `(1 + m·σ)/2`, with `|m| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlochVector<T>", into = "BlochVector<T>", bound = "T: Scalar")]
pub struct QubitState<T> {
    bloch: BlochVector<T>,
}

impl<T: Scalar> QubitState<T> {
    pub fn new(bloch: BlochVector<T>) -> Result<Self> {
        let norm = bloch.norm();
        if !bloch.is_finite() || norm > T::one() + T::tol(tol::ALGEBRAIC) {
            return Err(Error::InvalidState { norm: norm.as_f64() });
        }
        Ok(Self { bloch })
    }

    pub fn bloch(&self) -> BlochVector<T> {
        self.bloch
    }

    pub fn is_pure(&self) -> bool {
        self.bloch.is_unit()
    }
}

impl<T: Scalar> TryFrom<BlochVector<T>> for QubitState<T> {
    type Error = Error;
    fn try_from(v: BlochVector<T>) -> Result<Self> {
        Self::new(v)
    }
}

impl<T: Scalar> From<QubitState<T>> for BlochVector<T> {
    fn from(s: QubitState<T>) -> Self {
        s.bloch
    }
}

/// `Tr(ρ E)` for `ρ = (1 + m·σ)/2` and `E = weight·(1 + n·σ)`.
pub fn born_probability<T: Scalar>(state: &QubitState<T>, weight: T, direction: &BlochVector<T>) -> Result<T> {
    let norm = direction.norm();
    if weight < T::zero() || !weight.is_finite() || !direction.is_finite() || norm > T::one() + T::tol(tol::ALGEBRAIC) {
        return Err(Error::InvalidEffect { weight: weight.as_f64(), norm: norm.as_f64() });
    }
    Ok(weight * (T::one() + state.bloch.dot(direction)))
}

/// General two-outcome qubit POVM
/// `M_b = (1 + (-1)^b μ) (1 + (-1)^b v_b·σ) / 2` with `(1+μ) v_0 = (1-μ) v_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TwoOutcomeMeasurement<T> {
    mu: T,
    v0: BlochVector<T>,
    v1: BlochVector<T>,
}

impl<T: Scalar> TwoOutcomeMeasurement<T> {
    pub fn new(mu: T, v0: BlochVector<T>, v1: BlochVector<T>) -> Result<Self> {
        let slack = T::tol(tol::ALGEBRAIC);
        if !(mu.abs() <= T::one() + slack) {
            return Err(Error::InvalidMeasurement(format!("mu = {} outside [-1, 1]", mu)));
        }
        if v0.norm() > T::one() + slack || v1.norm() > T::one() + slack {
            return Err(Error::InvalidMeasurement("direction longer than 1".into()));
        }
        let mismatch = (v0 * (T::one() + mu) - v1 * (T::one() - mu)).norm();
        if mismatch > slack {
            return Err(Error::InvalidMeasurement(format!("(1+mu) v0 != (1-mu) v1 (mismatch {})", mismatch)));
        }
        Ok(Self { mu, v0, v1 })
    }

    /// Projective measurement along `v` (μ = 0).
    pub fn projective(v: BlochVector<T>) -> Result<Self> {
        Self::new(T::zero(), v, v)
    }

    /// Measurement whose observable `M_0 - M_1` equals `μ 1 + (1-|μ|) v·σ`.
    pub fn from_observable(mu: T, v: BlochVector<T>) -> Result<Self> {
        let one = T::one();
        let mu = mu.max(-one).min(one);
        if mu <= T::zero() {
            Self::new(mu, v, v * ((one + mu) / (one - mu)))
        } else {
            Self::new(mu, v * ((one - mu) / (one + mu)), v)
        }
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn v0(&self) -> BlochVector<T> {
        self.v0
    }

    pub fn v1(&self) -> BlochVector<T> {
        self.v1
    }

    /// Effects as `(weight, direction)` pairs, so `M_b = weight (1 + direction·σ)`.
    pub fn effects(&self) -> [(T, BlochVector<T>); 2] {
        let half = T::lit(0.5);
        [((T::one() + self.mu) * half, self.v0), ((T::one() - self.mu) * half, -self.v1)]
    }

    /// Outcome probabilities `[P(0), P(1)]` on `state`.
    pub fn probabilities(&self, state: &QubitState<T>) -> Result<[T; 2]> {
        let [(w0, d0), (w1, d1)] = self.effects();
        Ok([born_probability(state, w0, &d0)?, born_probability(state, w1, &d1)?])
    }
}

/// Gram matrix of four Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GramMatrix<T> {
    pub entries: [[T; 4]; 4],
}

impl<T: Scalar> GramMatrix<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i][j]
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                m = m.max((self.entries[i][j] - other.entries[i][j]).abs());
            }
        }
        m
    }

    pub fn eigenvalues(&self) -> [T; 4] {
        linalg::symmetric_eigenvalues(&self.entries)
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..4).all(|i| (self.entries[i][i] - T::one()).abs() <= T::tol(tol::ALGEBRAIC))
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.eigenvalues()[0] >= -T::tol(tol::PSD)
    }

    /// Numerical rank with the PSD tolerance as cutoff.
    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&e| e > T::tol(tol::PSD)).count()
    }
}

/// Gram matrix `G[i][j] = v_i · v_j`.
pub fn gram<T: Scalar>(vectors: &[BlochVector<T>]) -> Result<GramMatrix<T>> {
    if vectors.len() != 4 {
        return Err(Error::WrongArity { expected: 4, found: vectors.len() });
    }
    let mut entries = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let d = vectors[i].dot(&vectors[j]);
            entries[i][j] = d;
            entries[j][i] = d;
        }
    }
    Ok(GramMatrix { entries })
}

/// Global transformation `v ↦ sign · R v` with `det R = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Isometry<T> {
    pub rotation: Mat3<T>,
    pub sign: i8,
    /// Minimized `Σ |sign·R·source_i − target_i|²`.
    pub residual: T,
}

impl<T: Scalar> Isometry<T> {
    pub fn identity() -> Self {
        Self { rotation: linalg::identity(), sign: 1, residual: T::zero() }
    }

    pub fn apply(&self, v: &BlochVector<T>) -> BlochVector<T> {
        let r = v.transformed(&self.rotation);
        if self.sign < 0 {
            -r
        } else {
            r
        }
    }
}

/// Finds `s ∈ {±1}` and a rotation `R` minimizing `Σ |s R source_i − target_i|²`.
///
/// Each sign is solved as an SO(3) Procrustes problem (SVD of the
/// cross-covariance with determinant correction). Equal residuals resolve to
/// `s = +1`.
pub fn align_isometry<T: Scalar>(source: &[BlochVector<T>], target: &[BlochVector<T>]) -> Result<Isometry<T>> {
    if source.len() != 4 {
        return Err(Error::WrongArity { expected: 4, found: source.len() });
    }
    if target.len() != 4 {
        return Err(Error::WrongArity { expected: 4, found: target.len() });
    }
    if source.iter().chain(target).any(|v| !v.is_finite()) {
        return Err(Error::InvalidState { norm: f64::NAN });
    }
    if source.iter().all(|v| v.norm_squared() == T::zero()) {
        return Err(Error::DegenerateInput);
    }
    let plus = procrustes_so3(source, target, T::one());
    let minus = procrustes_so3(source, target, -T::one());
    if minus.residual + T::tol(tol::ALGEBRAIC) < plus.residual {
        Ok(minus)
    } else {
        Ok(plus)
    }
}

fn procrustes_so3<T: Scalar>(source: &[BlochVector<T>], target: &[BlochVector<T>], sign: T) -> Isometry<T> {
    // H = Σ target_i (s·source_i)^T; the optimal R is U diag(1, 1, det(U V^T)) V^T.
    let mut h = [[T::zero(); 3]; 3];
    for (s, t) in source.iter().zip(target) {
        let s = (*s * sign).to_array();
        let t = t.to_array();
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = h[i][j] + t[i] * s[j];
            }
        }
    }
    let (u, _, v) = linalg::svd3(&h);
    let vt = linalg::transpose(&v);
    let d = linalg::det3(&linalg::matmul(&u, &vt)).signum();
    let mut ud = u;
    for row in ud.iter_mut() {
        row[2] = row[2] * d;
    }
    let rotation = linalg::matmul(&ud, &vt);
    let mut iso = Isometry { rotation, sign: if sign > T::zero() { 1 } else { -1 }, residual: T::zero() };
    iso.residual = source.iter().zip(target).fold(T::zero(), |acc, (s, t)| acc + (iso.apply(s) - *t).norm_squared());
    iso
}

/// 2x2 complex matrix `weight·(1 + n·σ)`, for spot checks of positivity and
/// completeness outside the Bloch picture.
pub fn to_hermitian<T: Scalar>(weight: T, direction: &BlochVector<T>) -> [[Complex<T>; 2]; 2] {
    let c = |re: T, im: T| Complex::new(re, im);
    [
        [c(weight * (T::one() + direction.z), T::zero()), c(weight * direction.x, -weight * direction.y)],
        [c(weight * direction.x, weight * direction.y), c(weight * (T::one() - direction.z), T::zero())],
    ]
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Scalar>(m: &[[Complex<T>; 2]; 2]) -> [T; 2] {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let mean = (a + d) * T::lit(0.5);
    let half_gap = (((a - d) * T::lit(0.5)).powi(2) + m[0][1].norm_sqr()).sqrt();
    [mean - half_gap, mean + half_gap]
}

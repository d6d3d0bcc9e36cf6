//! Qubit POVMs in weight/direction form and the one-parameter semi-SIC family.
//!
//! An element with `weight` λ and `direction` n is the operator λ(1 + n·σ).
//! The trace of the element is `2λ`; the elements sum to the identity iff
//! `Σ λ = 1` and `Σ λ n = 0`.

use serde::{Deserialize, Serialize};

use crate::bloch::{BlochVector, Isometry};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{tol, Scalar};

/// One POVM element `weight·(1 + direction·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PovmElement<T> {
    pub weight: T,
    pub direction: BlochVector<T>,
}

impl<T: Scalar> PovmElement<T> {
    pub fn new(weight: T, direction: BlochVector<T>) -> Result<Self> {
        let norm = direction.norm();
        if !(weight > T::zero()) || !direction.is_finite() || norm > T::one() + T::tol(tol::ALGEBRAIC) {
            return Err(Error::InvalidEffect { weight: weight.as_f64(), norm: norm.as_f64() });
        }
        Ok(Self { weight, direction })
    }

    pub fn trace(&self) -> T {
        T::lit(2.0) * self.weight
    }

    pub fn is_rank_one(&self) -> bool {
        self.direction.is_unit()
    }
}

#[derive(Deserialize)]
#[serde(bound = "T: Scalar")]
struct PovmDoc<T> {
    elements: Vec<PovmElement<T>>,
}

/// A complete qubit POVM with 2 to 4 elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PovmDoc<T>", bound = "T: Scalar")]
pub struct Povm<T> {
    elements: Vec<PovmElement<T>>,
}

impl<T: Scalar> TryFrom<PovmDoc<T>> for Povm<T> {
    type Error = Error;
    fn try_from(doc: PovmDoc<T>) -> Result<Self> {
        for e in &doc.elements {
            PovmElement::new(e.weight, e.direction)?;
        }
        Povm::new(doc.elements)
    }
}

impl<T: Scalar> Povm<T> {
    /// Validates arity and completeness within the algebraic tolerance.
    pub fn new(elements: Vec<PovmElement<T>>) -> Result<Self> {
        Self::with_tolerance(elements, T::tol(tol::ALGEBRAIC))
    }

    /// As [`Povm::new`] with a caller-chosen completeness tolerance, for
    /// POVMs reconstructed from optimized data.
    pub fn with_tolerance(elements: Vec<PovmElement<T>>, eps: T) -> Result<Self> {
        if !(2..=4).contains(&elements.len()) {
            return Err(Error::WrongArity { expected: 4, found: elements.len() });
        }
        let total = elements.iter().fold(T::zero(), |a, e| a + e.weight);
        if (total - T::one()).abs() > eps {
            return Err(Error::InvalidPovm(format!("weights sum to {}", total)));
        }
        let first_moment = elements.iter().fold(BlochVector::zero(), |a, e| a + e.direction * e.weight);
        if first_moment.norm() > eps {
            return Err(Error::InvalidPovm(format!(
                "weighted directions sum to a vector of length {}",
                first_moment.norm()
            )));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[PovmElement<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn weights(&self) -> Vec<T> {
        self.elements.iter().map(|e| e.weight).collect()
    }

    pub fn directions(&self) -> Vec<BlochVector<T>> {
        self.elements.iter().map(|e| e.direction).collect()
    }

    /// Applies `v ↦ sign·R v` to every direction. Completeness is preserved.
    pub fn transformed(&self, iso: &Isometry<T>) -> Self {
        Self {
            elements: self
                .elements
                .iter()
                .map(|e| PovmElement { weight: e.weight, direction: iso.apply(&e.direction) })
                .collect(),
        }
    }

    /// Same weights, directions reversed.
    pub fn negated(&self) -> Self {
        Self {
            elements: self.elements.iter().map(|e| PovmElement { weight: e.weight, direction: -e.direction }).collect(),
        }
    }
}

/// Closed-form quantities of the semi-SIC POVM with parameter `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SemiSicParams<T> {
    #[serde(rename = "B")]
    pub b: T,
    pub a_minus: T,
    pub a_plus: T,
    pub q_minus: T,
    pub q_plus: T,
    pub r_minus: T,
    pub r_plus: T,
}

/// Rejects `B` outside `(1/16, 1/12]`; the lower end is exclusive with a
/// margin of `1e-12`, since `E_1 = E_2` at `B = 1/16`.
pub fn check_b<T: Scalar>(b: T) -> Result<()> {
    let lower = T::lit(1.0 / 16.0 + 1e-12);
    let upper = T::one() / T::lit(12.0);
    if b > lower && b <= upper {
        Ok(())
    } else {
        Err(Error::OutOfRangeB { b: b.as_f64() })
    }
}

impl<T: Scalar> SemiSicParams<T> {
    pub fn new(b: T) -> Result<Self> {
        check_b(b)?;
        let half = T::lit(0.5);
        let root = (T::one() - T::lit(12.0) * b).max(T::zero()).sqrt();
        let a_minus = (T::one() - root) * half;
        let a_plus = (T::one() + root) * half;
        let q_minus = (b.sqrt() / a_minus).min(T::one());
        let q_plus = (b.sqrt() / a_plus).min(T::one());
        let r = |q: T| ((T::one() - q * q) * half).max(T::zero()).sqrt();
        Ok(Self { b, a_minus, a_plus, q_minus, q_plus, r_minus: r(q_minus), r_plus: r(q_plus) })
    }

    /// The four unit vectors `h_1..h_4` spanning the digonal disphenoid.
    pub fn directions(&self) -> [BlochVector<T>; 4] {
        let (rm, rp, qm, qp) = (self.r_minus, self.r_plus, self.q_minus, self.q_plus);
        [
            BlochVector::new(rm, rm, qm),
            BlochVector::new(-rm, -rm, qm),
            BlochVector::new(-rp, rp, -qp),
            BlochVector::new(rp, -rp, -qp),
        ]
    }

    /// Element weights `a_-/2, a_-/2, a_+/2, a_+/2`.
    pub fn weights(&self) -> [T; 4] {
        let half = T::lit(0.5);
        [self.a_minus * half, self.a_minus * half, self.a_plus * half, self.a_plus * half]
    }

    /// Closed-form `h_i·h_j`.
    pub fn dot_products(&self) -> [[T; 4]; 4] {
        target_gram_entries(self.b)
    }
}

/// `h_i·h_j` for the semi-SIC with parameter `b`:
/// `h_1·h_2 = (1 − 15B + √(1−12B)) / 9B`, `h_3·h_4 = (1 − 15B − √(1−12B)) / 9B`,
/// mixed pairs `−1/3`.
pub fn target_gram_entries<T: Scalar>(b: T) -> [[T; 4]; 4] {
    let root = (T::one() - T::lit(12.0) * b).max(T::zero()).sqrt();
    let base = T::one() - T::lit(15.0) * b;
    let nine_b = T::lit(9.0) * b;
    let g12 = (base + root) / nine_b;
    let g34 = (base - root) / nine_b;
    let third = -T::one() / T::lit(3.0);
    let one = T::one();
    [[one, g12, third, third], [g12, one, third, third], [third, third, one, g34], [third, third, g34, one]]
}

/// The semi-SIC POVM in the representative with `h_1..h_4` as above.
pub fn build_semi_sic<T: Scalar>(b: T) -> Result<Povm<T>> {
    let params = SemiSicParams::new(b)?;
    let elements = params
        .weights()
        .into_iter()
        .zip(params.directions())
        .map(|(weight, direction)| PovmElement { weight, direction })
        .collect();
    Ok(Povm { elements })
}

/// `Tr(E_i E_j) = 2 w_i w_j (1 + n_i·n_j)`; the diagonal holds `Tr(E_i²)`.
pub fn pairwise_trace_products<T: Scalar>(povm: &Povm<T>) -> Vec<Vec<T>> {
    let els = povm.elements();
    els.iter()
        .map(|a| {
            els.iter().map(|b| T::lit(2.0) * a.weight * b.weight * (T::one() + a.direction.dot(&b.direction))).collect()
        })
        .collect()
}

/// Why a four-outcome POVM fails the extremality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalityViolation {
    NotRankOne { index: usize },
    CoplanarTriple { indices: [usize; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ExtremalityCheck<T> {
    pub extremal: bool,
    /// Smallest |det| over the four direction triples.
    pub min_abs_det: T,
    pub violation: Option<ExtremalityViolation>,
}

/// Rank-one elements with no three directions coplanar.
pub fn is_extremal_four_outcome<T: Scalar>(povm: &Povm<T>) -> Result<ExtremalityCheck<T>> {
    let els = povm.elements();
    if els.len() != 4 {
        return Err(Error::WrongArity { expected: 4, found: els.len() });
    }
    let mut violation =
        els.iter().position(|e| !e.is_rank_one()).map(|index| ExtremalityViolation::NotRankOne { index });

    let triples = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    let mut min_abs_det = T::infinity();
    for t in triples {
        let m = [els[t[0]].direction.to_array(), els[t[1]].direction.to_array(), els[t[2]].direction.to_array()];
        let d = linalg::det3(&m).abs();
        if d < min_abs_det {
            min_abs_det = d;
        }
        if violation.is_none() && d <= T::tol(tol::COPLANAR) {
            violation = Some(ExtremalityViolation::CoplanarTriple { indices: t });
        }
    }
    Ok(ExtremalityCheck { extremal: violation.is_none(), min_abs_det, violation })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Edge<T> {
    pub i: usize,
    pub j: usize,
    pub vector: BlochVector<T>,
    pub length: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DisphenoidEdges<T> {
    /// `h_i − h_j` for `i < j`, in the order 12, 13, 14, 23, 24, 34 (zero-based indices).
    pub edges: Vec<Edge<T>>,
    /// `h_12 · h_34`.
    pub opposite_dot: T,
    pub opposite_orthogonal: bool,
    /// The four edges joining {1,2} to {3,4} share one length.
    pub mixed_equal: bool,
}

pub fn disphenoid_edges<T: Scalar>(povm: &Povm<T>) -> Result<DisphenoidEdges<T>> {
    let els = povm.elements();
    if els.len() != 4 {
        return Err(Error::WrongArity { expected: 4, found: els.len() });
    }
    let mut edges = Vec::with_capacity(6);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let vector = els[i].direction - els[j].direction;
            edges.push(Edge { i, j, vector, length: vector.norm() });
        }
    }
    let opposite_dot = edges[0].vector.dot(&edges[5].vector);
    let eps = T::tol(tol::ALGEBRAIC);
    let mixed = [edges[1].length, edges[2].length, edges[3].length, edges[4].length];
    let mixed_equal = mixed.iter().all(|&l| (l - mixed[0]).abs() <= eps);
    Ok(DisphenoidEdges { edges, opposite_dot, opposite_orthogonal: opposite_dot.abs() <= eps, mixed_equal })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_at_one_twelfth() {
        let p = SemiSicParams::new(1.0 / 12.0).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for x in [p.q_minus, p.q_plus, p.r_minus, p.r_plus] {
            assert!((x - s).abs() < 1e-12);
        }
        let povm = build_semi_sic(1.0f64 / 12.0).unwrap();
        assert!(povm.weights().iter().all(|w| (w - 0.25).abs() < 1e-12));
    }

    #[test]
    fn params_at_one_fifteenth() {
        let p = SemiSicParams::new(1.0 / 15.0).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 5e-8;
        assert!(close(p.a_minus, 0.2763932));
        assert!(close(p.a_plus, 0.7236068));
        assert!(close(p.q_minus, 0.9341724));
        assert!(close(p.q_plus, 0.3568221));
        assert!(close(p.r_minus, 0.2523113));
        assert!(close(p.r_plus, 0.6605596));
        assert!((p.a_minus * p.q_minus - p.a_plus * p.q_plus).abs() < 1e-12);
    }

    #[test]
    fn range_of_b() {
        assert!(matches!(build_semi_sic(1.0 / 16.0), Err(Error::OutOfRangeB { .. })));
        assert!(matches!(build_semi_sic(0.0834), Err(Error::OutOfRangeB { .. })));
        assert!(build_semi_sic(1.0 / 16.0 + 1e-9).is_ok());
        assert!(build_semi_sic(1.0 / 12.0).is_ok());
    }

    #[test]
    fn trivial_povm_trace_products() {
        let up = BlochVector::new(0.0, 0.0, 1.0);
        let povm = Povm::new(vec![PovmElement::new(0.5, up).unwrap(), PovmElement::new(0.5, -up).unwrap()]).unwrap();
        let t = pairwise_trace_products(&povm);
        assert_eq!(t[0][1], 0.0);
        assert_eq!(t[0][0], 1.0);
    }

    #[test]
    fn coplanar_povm_is_not_extremal() {
        let dirs = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        let povm = Povm::new(
            dirs.iter().map(|&(x, y)| PovmElement::new(0.25, BlochVector::new(x, y, 0.0)).unwrap()).collect(),
        )
        .unwrap();
        let c = is_extremal_four_outcome(&povm).unwrap();
        assert!(!c.extremal);
        assert!(matches!(c.violation, Some(ExtremalityViolation::CoplanarTriple { .. })));
    }

    #[test]
    fn mixed_rank_povm_is_not_extremal() {
        let up = BlochVector::new(0.0, 0.0, 1.0);
        let povm = Povm::new(vec![
            PovmElement::new(0.25, up * 0.5).unwrap(),
            PovmElement::new(0.25, -up * 0.5).unwrap(),
            PovmElement::new(0.25, BlochVector::new(1.0, 0.0, 0.0)).unwrap(),
            PovmElement::new(0.25, BlochVector::new(-1.0, 0.0, 0.0)).unwrap(),
        ])
        .unwrap();
        let c = is_extremal_four_outcome(&povm).unwrap();
        assert_eq!(c.violation, Some(ExtremalityViolation::NotRankOne { index: 0 }));
    }

    #[test]
    fn wrong_arity_is_reported() {
        let up = BlochVector::new(0.0, 0.0, 1.0);
        let povm = Povm::new(vec![PovmElement::new(0.5, up).unwrap(), PovmElement::new(0.5, -up).unwrap()]).unwrap();
        assert!(matches!(is_extremal_four_outcome(&povm), Err(Error::WrongArity { .. })));
        assert!(matches!(disphenoid_edges(&povm), Err(Error::WrongArity { .. })));
    }

    #[test]
    fn incomplete_povm_rejected() {
        let up = BlochVector::new(0.0, 0.0, 1.0);
        let r = Povm::new(vec![PovmElement::new(0.5, up).unwrap(), PovmElement::new(0.5, up).unwrap()]);
        assert!(matches!(r, Err(Error::InvalidPovm(_))));
    }
}

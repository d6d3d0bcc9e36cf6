//! Seeded random sampling.
//!
//! Every parallel task gets its own ChaCha8 stream derived from
//! `(seed, index)`, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bloch::BlochVector;
use crate::scalar::Scalar;

/// Generator for task `index` of a run seeded with `seed`.
pub fn task_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point on the unit sphere: three standard normals, normalized.
pub fn random_unit_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> BlochVector<T> {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-9 {
            return BlochVector::new(T::lit(v[0] / n), T::lit(v[1] / n), T::lit(v[2] / n));
        }
    }
}

/// Random unit vector orthogonal to `v`.
pub fn random_tangent<T: Scalar, R: Rng + ?Sized>(rng: &mut R, v: &BlochVector<T>) -> BlochVector<T> {
    loop {
        let r: BlochVector<T> = random_unit_vector(rng);
        let t = r - *v * (v.dot(&r) / v.norm_squared().max(T::epsilon()));
        if let Some(t) = t.normalized(T::lit(1e-6)) {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: BlochVector<f64> = random_unit_vector(&mut task_rng(42, 3));
        let b: BlochVector<f64> = random_unit_vector(&mut task_rng(42, 3));
        let c: BlochVector<f64> = random_unit_vector(&mut task_rng(42, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((a.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tangent_is_orthogonal() {
        let mut rng = task_rng(7, 0);
        for _ in 0..50 {
            let v: BlochVector<f64> = random_unit_vector(&mut rng);
            let t = random_tangent(&mut rng, &v);
            assert!(v.dot(&t).abs() < 1e-14);
            assert!((t.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sphere_mean_is_near_zero() {
        let mut rng = task_rng(1, 0);
        let mut acc = BlochVector::<f64>::zero();
        for _ in 0..20_000 {
            acc += random_unit_vector(&mut rng);
        }
        assert!(acc.norm() / 20_000.0 < 0.02);
    }
}

//! Brute-force cross-checks that share nothing with the optimizer except the
//! Born rule.
//!
//! The witness is re-evaluated from raw outcome probabilities. A half-step
//! uses the fact that the witness is affine in any single Bloch vector: it is
//! probed at the origin and at the three basis vectors, and the gradient read
//! off from the differences gives the maximizer on the sphere.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{BlochVector, QubitState, TwoOutcomeMeasurement};
use crate::error::{Error, Result};
use crate::report::fmt_sig17;
use crate::sampling::{random_unit_vector, task_rng};
use crate::scalar::Scalar;
use crate::witness::WitnessSpec;

/// Half-steps applied to every random sample.
pub const SAMPLE_HALF_STEPS: usize = 200;
/// Random starts per grid point in [`mu_grid_scan`].
pub const GRID_RESTARTS: usize = 16;
/// Cap on half-steps per start in [`mu_grid_scan`].
pub const GRID_MAX_HALF_STEPS: usize = 4_000;
const GRID_GAIN_TOL: f64 = 1e-13;
const FLAT: f64 = 1e-12;

/// Coefficients written out row by row, independently of [`WitnessSpec::matrix`].
fn coefficients<T: Scalar>(spec: &WitnessSpec<T>) -> [[T; 3]; 4] {
    let (o, c1, c2) = (T::one(), spec.c1, spec.c2);
    [[c1, o, o], [c1, -o, -o], [-c2, o, -o], [-c2, -o, o]]
}

type Effects<T> = [(T, BlochVector<T>); 2];

fn effects<T: Scalar>(mu: T, v: &BlochVector<T>) -> Result<Effects<T>> {
    Ok(TwoOutcomeMeasurement::from_observable(mu, *v)?.effects())
}

/// `P(0) − P(1)` by the Born rule `Tr(ρ E) = λ(1 + m·n)`.
fn bias<T: Scalar>(m: &BlochVector<T>, e: &Effects<T>) -> T {
    let p = |(weight, n): &(T, BlochVector<T>)| *weight * (T::one() + m.dot(n));
    p(&e[0]) - p(&e[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct OracleStrategy<T> {
    pub states: [BlochVector<T>; 4],
    pub dirs: [BlochVector<T>; 3],
    pub mus: [T; 3],
}

impl<T: Scalar> OracleStrategy<T> {
    fn measurements(&self) -> Result<[Effects<T>; 3]> {
        Ok([
            effects(self.mus[0], &self.dirs[0])?,
            effects(self.mus[1], &self.dirs[1])?,
            effects(self.mus[2], &self.dirs[2])?,
        ])
    }

    /// Witness value from raw probabilities.
    pub fn witness(&self, w: &[[T; 3]; 4]) -> Result<T> {
        for m in &self.states {
            QubitState::new(*m)?;
        }
        let e = self.measurements()?;
        let mut total = T::zero();
        for x in 0..4 {
            for y in 0..3 {
                total = total + w[x][y] * bias(&self.states[x], &e[y]);
            }
        }
        Ok(total)
    }

    fn improve_states(&mut self, w: &[[T; 3]; 4]) -> Result<()> {
        let e = self.measurements()?;
        for x in 0..4 {
            let f = |m: BlochVector<T>| -> Result<T> {
                Ok((0..3).fold(T::zero(), |acc, y| acc + w[x][y] * bias(&m, &e[y])))
            };
            if let Some(m) = probe_argmax(f)? {
                self.states[x] = m;
            }
        }
        Ok(())
    }

    fn improve_dirs(&mut self, w: &[[T; 3]; 4]) -> Result<()> {
        for y in 0..3 {
            let mu = self.mus[y];
            let f = |v: BlochVector<T>| -> Result<T> {
                let e = effects(mu, &v)?;
                Ok((0..4).fold(T::zero(), |acc, x| acc + w[x][y] * bias(&self.states[x], &e)))
            };
            if let Some(v) = probe_argmax(f)? {
                self.dirs[y] = v;
            }
        }
        Ok(())
    }

    fn half_step(&mut self, w: &[[T; 3]; 4], k: usize) -> Result<()> {
        if k.is_multiple_of(2) {
            self.improve_states(w)
        } else {
            self.improve_dirs(w)
        }
    }
}

/// Maximizer on the unit sphere of an affine function, or `None` if it is flat.
fn probe_argmax<T: Scalar, F: Fn(BlochVector<T>) -> Result<T>>(f: F) -> Result<Option<BlochVector<T>>> {
    let f0 = f(BlochVector::zero())?;
    let g = BlochVector::new(
        f(BlochVector::unit_x())? - f0,
        f(BlochVector::unit_y())? - f0,
        f(BlochVector::unit_z())? - f0,
    );
    Ok(g.normalized(T::lit(FLAT)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct OracleResult<T> {
    pub value: T,
    pub strategy: OracleStrategy<T>,
    pub sample: usize,
    pub samples: usize,
}

fn run_sample<T: Scalar>(w: &[[T; 3]; 4], seed: u64, index: usize) -> Result<(T, OracleStrategy<T>)> {
    let mut rng = task_rng(seed, index as u64);
    let states: [BlochVector<T>; 4] = std::array::from_fn(|_| random_unit_vector(&mut rng));
    let dirs: [BlochVector<T>; 3] = std::array::from_fn(|_| random_unit_vector(&mut rng));
    let mut best: Option<(T, OracleStrategy<T>)> = None;
    for mu1 in [-1.0, 0.0, 1.0] {
        let mut s = OracleStrategy { states, dirs, mus: [T::lit(mu1), T::zero(), T::zero()] };
        for k in 0..SAMPLE_HALF_STEPS {
            s.half_step(w, k)?;
        }
        let value = s.witness(w)?;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, s));
        }
    }
    Ok(best.expect("three branches"))
}

/// Best witness value over `samples` random strategies, each polished by
/// [`SAMPLE_HALF_STEPS`] half-steps for every `μ_1 ∈ {−1, 0, 1}`.
pub fn random_search_max<T: Scalar>(spec: &WitnessSpec<T>, samples: usize, seed: u64) -> Result<OracleResult<T>> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let w = coefficients(spec);
    let runs = (0..samples).into_par_iter().map(|i| run_sample(&w, seed, i)).collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.0 > runs[best].0 {
            best = i;
        }
    }
    let (value, strategy) = runs[best];
    Ok(OracleResult { value, strategy, sample: best, samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MuPoint<T> {
    pub mu1: T,
    pub max_w: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MuGridScan<T> {
    pub points: Vec<MuPoint<T>>,
    /// Index of the largest value; the lowest index wins ties.
    pub peak: usize,
}

impl<T: Scalar> MuGridScan<T> {
    pub fn peak_point(&self) -> MuPoint<T> {
        self.points[self.peak]
    }

    /// Value at the grid point closest to `mu1`.
    pub fn value_at(&self, mu1: T) -> T {
        let mut best = self.points[0];
        for p in &self.points {
            if (p.mu1 - mu1).abs() < (best.mu1 - mu1).abs() {
                best = *p;
            }
        }
        best.max_w
    }
}

fn frozen_mu_max<T: Scalar>(w: &[[T; 3]; 4], mu1: T, seed: u64, point: usize) -> Result<T> {
    let mut best = T::neg_infinity();
    for r in 0..GRID_RESTARTS {
        let mut rng = task_rng(seed, (point * GRID_RESTARTS + r) as u64);
        let states: [BlochVector<T>; 4] = std::array::from_fn(|_| random_unit_vector(&mut rng));
        let dirs: [BlochVector<T>; 3] = std::array::from_fn(|_| random_unit_vector(&mut rng));
        let mut s = OracleStrategy { states, dirs, mus: [mu1, T::zero(), T::zero()] };
        let mut prev = s.witness(w)?;
        for k in 0..GRID_MAX_HALF_STEPS {
            s.half_step(w, k)?;
            if k % 2 == 1 {
                let value = s.witness(w)?;
                let done = value - prev < T::lit(GRID_GAIN_TOL);
                prev = value;
                if done {
                    break;
                }
            }
        }
        best = best.max(prev);
    }
    Ok(best)
}

/// Maximum witness value with `μ_1` frozen at each of `grid_n` evenly spaced
/// points of `[−1, 1]`.
pub fn mu_grid_scan<T: Scalar>(spec: &WitnessSpec<T>, grid_n: usize, seed: u64) -> Result<MuGridScan<T>> {
    if grid_n < 3 {
        return Err(Error::InvalidConfig(format!("grid_n must be at least 3, got {grid_n}")));
    }
    let w = coefficients(spec);
    let last = (grid_n - 1) as f64;
    let points = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let mu1 = T::lit((2.0 * i as f64 - last) / last);
            Ok(MuPoint { mu1, max_w: frozen_mu_max(&w, mu1, seed, i)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut peak = 0;
    for (i, p) in points.iter().enumerate() {
        if p.max_w > points[peak].max_w {
            peak = i;
        }
    }
    Ok(MuGridScan { points, peak })
}

/// Writes the scan as CSV with columns `mu1,max_W`.
pub fn write_mu_grid_csv<T: Scalar, W: Write>(scan: &MuGridScan<T>, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidConfig(format!("csv output failed: {e}"));
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["mu1", "max_W"]).map_err(io)?;
    for p in &scan.points {
        wtr.write_record([fmt_sig17(p.mu1.as_f64()), fmt_sig17(p.max_w.as_f64())]).map_err(io)?;
    }
    wtr.flush().map_err(|e| Error::InvalidConfig(format!("csv output failed: {e}")))?;
    Ok(())
}

/// `2√(2[(c1² + c2²)|v1|² + 2(|v2|² + |v3|²)]) − Σ_x |u_x|`, which is never
/// negative.
pub fn mean_bound_slack<T: Scalar>(spec: &WitnessSpec<T>, dirs: &[BlochVector<T>; 3]) -> T {
    let w = coefficients(spec);
    let q_v = w.iter().fold(T::zero(), |acc, row| {
        let u = dirs[0] * row[0] + dirs[1] * row[1] + dirs[2] * row[2];
        acc + u.norm()
    });
    let (c1, c2) = (spec.c1, spec.c2);
    let two = T::lit(2.0);
    let inner = (c1 * c1 + c2 * c2) * dirs[0].norm_squared() + two * (dirs[1].norm_squared() + dirs[2].norm_squared());
    two * (two * inner).sqrt() - q_v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MeanBoundReport<T> {
    pub trials: usize,
    pub worst_slack: T,
}

/// Smallest [`mean_bound_slack`] over `trials` random triples in the unit ball.
pub fn verify_mean_bound<T: Scalar>(spec: &WitnessSpec<T>, trials: usize, seed: u64) -> Result<MeanBoundReport<T>> {
    use rand::Rng;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let worst = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let dirs: [BlochVector<T>; 3] = std::array::from_fn(|_| {
                let r: f64 = rng.random();
                random_unit_vector::<T, _>(&mut rng) * T::lit(r.cbrt())
            });
            mean_bound_slack(spec, &dirs)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(T::infinity(), |a, b| a.min(b));
    Ok(MeanBoundReport { trials, worst_slack: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::closed_form_optimum;
    use crate::witness::SignBranch;

    #[test]
    fn raw_witness_matches_strategy_witness() {
        let spec = WitnessSpec::<f64>::new(1.3, 0.6);
        let cf = closed_form_optimum(&spec).unwrap();
        let s =
            OracleStrategy { states: cf.strategy.state_vectors(), dirs: cf.strategy.projective_dirs, mus: [0.0; 3] };
        let w = s.witness(&coefficients(&spec)).unwrap();
        assert!((w - cf.value).abs() < 1e-12);
        assert_eq!(coefficients(&spec), spec.matrix());
    }

    #[test]
    fn probe_finds_affine_maximizer() {
        let g = BlochVector::new(0.3, -0.4, 1.2);
        let m = probe_argmax(|v: BlochVector<f64>| Ok(2.0 + g.dot(&v))).unwrap().unwrap();
        assert!((m - g * (1.0 / g.norm())).norm() < 1e-15);
        assert!(probe_argmax(|_: BlochVector<f64>| Ok(1.0)).unwrap().is_none());
    }

    #[test]
    fn small_search_is_bounded() {
        let spec = WitnessSpec::from_b(1.0 / 12.0, SignBranch::Positive).unwrap();
        let r = random_search_max(&spec, 50, 9).unwrap();
        assert!(r.value <= 4.0 * 3f64.sqrt() + 1e-9);
        assert!(r.value > 4.0 * 3f64.sqrt() - 1e-4);
        assert_eq!(r.samples, 50);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(random_search_max(&WitnessSpec::<f64>::new(1.0, 1.0), 0, 1).is_err());
        assert!(mu_grid_scan(&WitnessSpec::<f64>::new(1.0, 1.0), 2, 1).is_err());
        assert!(verify_mean_bound(&WitnessSpec::<f64>::new(1.0, 1.0), 0, 1).is_err());
    }

    #[test]
    fn mean_bound_equality_and_zero() {
        let spec = WitnessSpec::<f64>::new(1.0, 1.0);
        let cf = closed_form_optimum(&spec).unwrap();
        assert!(mean_bound_slack(&spec, &cf.strategy.projective_dirs).abs() <= 1e-10);
        assert_eq!(mean_bound_slack(&spec, &[BlochVector::zero(); 3]), 0.0);
        let r = verify_mean_bound(&spec, 1000, 5).unwrap();
        assert!(r.worst_slack >= -1e-12);
    }

    #[test]
    fn grid_is_symmetric_and_contains_zero() {
        let spec = WitnessSpec::new(1.0, 1.0);
        let scan = mu_grid_scan(&spec, 5, 3).unwrap();
        let mus: Vec<f64> = scan.points.iter().map(|p| p.mu1).collect();
        assert_eq!(mus, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(scan.peak, 2);
        let mut buf = Vec::new();
        write_mu_grid_csv(&scan, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("mu1,max_W\n-1,"));
        assert_eq!(text.lines().count(), 6);
    }
}

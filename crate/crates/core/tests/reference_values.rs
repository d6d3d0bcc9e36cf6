//! Library results against values computed independently in this file from
//! the explicit semi-SIC geometry, and frozen literals derived from those.

#![allow(clippy::needless_range_loop)]

use approx::assert_abs_diff_eq;

use semisic_core::optimizer::{closed_form_optimum, seesaw, SeesawConfig};
use semisic_core::oracle::random_search_max;
use semisic_core::povm::{build_semi_sic, disphenoid_edges, target_gram_entries, SemiSicParams};
use semisic_core::witness::{c_params_from_b, q_of_b, q_of_c, q_prime, SignBranch, WitnessSpec};

struct Geometry {
    weights: [f64; 4],
    dirs: [[f64; 3]; 4],
}

fn geometry(b: f64) -> Geometry {
    let root = (1.0 - 12.0 * b).sqrt();
    let (am, ap) = ((1.0 - root) / 2.0, (1.0 + root) / 2.0);
    let (qm, qp) = (b.sqrt() / am, b.sqrt() / ap);
    let (rm, rp) = (((1.0 - qm * qm) / 2.0).sqrt(), ((1.0 - qp * qp) / 2.0).sqrt());
    Geometry {
        weights: [am / 2.0, am / 2.0, ap / 2.0, ap / 2.0],
        dirs: [[rm, rm, qm], [-rm, -rm, qm], [-rp, rp, -qp], [rp, -rp, -qp]],
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximum of the witness when all measurements are projective, from the
/// independent Gram entries: `Σ_x |Σ_y w_xy v_y|` at the optimum.
fn q_from_gram(b: f64) -> f64 {
    24.0 * (b / (24.0 * b - 1.0)).sqrt()
}

#[test]
fn parameters_match_independent_geometry() {
    for b in [0.0625f64 + 1e-6, 0.065, 1.0 / 15.0, 0.07, 1.0 / 13.0, 0.08, 1.0 / 12.0] {
        let p = SemiSicParams::new(b).unwrap();
        let g = geometry(b);
        let povm = build_semi_sic(b).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(povm.weights()[i], g.weights[i], epsilon = 1e-14);
            let d = povm.directions()[i].to_array();
            for k in 0..3 {
                assert_abs_diff_eq!(d[k], g.dirs[i][k], epsilon = 1e-14);
            }
        }
        let gram = target_gram_entries(b);
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(gram[i][j], dot(&g.dirs[i], &g.dirs[j]), epsilon = 1e-13);
            }
        }
        let root = (1.0 - 12.0 * b).sqrt();
        assert_abs_diff_eq!(gram[0][1], (1.0 - 15.0 * b + root) / (9.0 * b), epsilon = 1e-13);
        assert_abs_diff_eq!(gram[2][3], (1.0 - 15.0 * b - root) / (9.0 * b), epsilon = 1e-13);
        assert_abs_diff_eq!(p.a_plus + p.a_minus, 1.0, epsilon = 1e-15);
    }
}

#[test]
fn frozen_parameters_at_one_fifteenth() {
    let p = SemiSicParams::new(1.0f64 / 15.0).unwrap();
    assert_abs_diff_eq!(p.a_minus, 0.276393202250021, epsilon = 1e-14);
    assert_abs_diff_eq!(p.a_plus, 0.723606797749979, epsilon = 1e-14);
    assert_abs_diff_eq!(p.r_minus, 0.2523113, epsilon = 1e-7);
    assert_abs_diff_eq!(p.r_plus, 0.6605596, epsilon = 1e-7);
    let g = target_gram_entries(1.0f64 / 15.0);
    assert_abs_diff_eq!(g[0][1], 0.745355992499930, epsilon = 1e-14);
    assert_abs_diff_eq!(g[2][3], -0.745355992499930, epsilon = 1e-14);
    assert_abs_diff_eq!(g[0][2], -1.0 / 3.0, epsilon = 1e-14);
}

#[test]
fn edges_form_a_digonal_disphenoid() {
    for b in [0.065f64, 1.0 / 15.0, 0.08] {
        let e = disphenoid_edges(&build_semi_sic(b).unwrap()).unwrap();
        let g = geometry(b);
        let len = |i: usize, j: usize| {
            let d: Vec<f64> = (0..3).map(|k| g.dirs[i][k] - g.dirs[j][k]).collect();
            d.iter().map(|v| v * v).sum::<f64>().sqrt()
        };
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_abs_diff_eq!(len(i, j), len(0, 2), epsilon = 1e-14);
        }
        assert!(e.mixed_equal && e.opposite_orthogonal);
        assert!(e.opposite_dot.abs() < 1e-12);
        assert_eq!(e.edges.len(), 6);
    }
}

#[test]
fn closed_forms_agree_with_each_other() {
    for b in [0.0625f64 + 1e-6, 0.064, 1.0 / 15.0, 0.07, 0.075, 1.0 / 13.0, 0.082, 1.0 / 12.0] {
        let (c1, c2) = c_params_from_b(b, SignBranch::Positive).unwrap();
        let root = (1.0 - 12.0 * b).sqrt();
        let c1_want = (2.0 * (1.0 - 6.0 * b + root) / (24.0 * b - 1.0)).sqrt();
        let c2_want = (2.0 * (1.0 - 6.0 * b - root) / (24.0 * b - 1.0)).sqrt();
        assert_abs_diff_eq!(c1, c1_want, epsilon = 1e-12);
        assert_abs_diff_eq!(c2, c2_want, epsilon = 1e-12);
        assert_abs_diff_eq!(q_of_b(b).unwrap(), q_from_gram(b), epsilon = 1e-12);
        assert_abs_diff_eq!(q_of_c(c1, c2), 2.0 * (2.0 * (c1 * c1 + c2 * c2 + 4.0)).sqrt(), epsilon = 1e-12);
    }
}

#[test]
fn frozen_witness_values() {
    assert_abs_diff_eq!(q_of_b(1.0f64 / 15.0).unwrap(), 8.0, epsilon = 1e-12);
    assert_abs_diff_eq!(q_of_b(1.0f64 / 12.0).unwrap(), 6.928203230275509, epsilon = 1e-12);
    assert_abs_diff_eq!(q_of_b(0.07f64).unwrap(), 7.700267375036974, epsilon = 1e-12);
    let (c1, c2) = c_params_from_b(1.0f64 / 15.0, SignBranch::Positive).unwrap();
    assert_abs_diff_eq!(q_prime(c1, c2), 7.966255326, epsilon = 1e-9);
    assert_abs_diff_eq!(q_prime(10.0f64, 0.1), 25.45685424949238, epsilon = 1e-12);
}

#[test]
fn closed_form_optimum_matches_seesaw_and_oracle() {
    for b in [1.0f64 / 15.5, 1.0 / 14.0, 0.078] {
        let spec = WitnessSpec::from_b(b, SignBranch::Positive).unwrap();
        let cf = closed_form_optimum(&spec).unwrap();
        let ss = seesaw(&spec, &SeesawConfig::default()).unwrap();
        let oracle = random_search_max(&spec, 2_000, 5).unwrap();
        let q = q_of_b(b).unwrap();
        assert_abs_diff_eq!(cf.value, q, epsilon = 1e-12);
        assert_abs_diff_eq!(ss.value, q, epsilon = 1e-10);
        assert_abs_diff_eq!(oracle.value, q, epsilon = 1e-7);
        assert!(oracle.value <= q + 1e-9);
    }
}

#[test]
fn arbitrary_coefficients_agree_with_oracle() {
    for (c1, c2) in [(0.5f64, 1.5), (-1.2, 0.4), (1.9, 1.9), (3.0, 0.2)] {
        let spec = WitnessSpec::new(c1, c2);
        let ss = seesaw(&spec, &SeesawConfig::default()).unwrap();
        let oracle = random_search_max(&spec, 2_000, 11).unwrap();
        assert!((ss.value - oracle.value).abs() < 1e-7, "({c1}, {c2}): {} vs {}", ss.value, oracle.value);
        let feasible = ((c2 * c2 - c1 * c1) / 4.0).abs() <= 1.0;
        let want = if feasible { q_of_c(c1, c2).max(q_prime(c1, c2)) } else { q_prime(c1, c2) };
        if feasible {
            assert_abs_diff_eq!(ss.value, want, epsilon = 1e-8);
        } else {
            assert!(ss.value >= want - 1e-9);
        }
    }
}

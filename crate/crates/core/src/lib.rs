//! Semi-SIC qubit POVMs, a prepare-and-measure witness that singles them out,
//! and the machinery to maximize that witness and certify a strategy from its
//! statistics alone.
//!
//! The library is generic over the scalar type through [`Scalar`]; the
//! `*64` and `*32` aliases below fix it to `f64` or `f32`.

// Negated comparisons reject NaN; index loops mirror the matrix notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bloch;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod oracle;
pub mod povm;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod selftest;
pub mod strategy;
pub mod witness;

pub use bloch::{
    align_isometry, born_probability, gram, BlochVector, GramMatrix, Isometry, QubitState, TwoOutcomeMeasurement,
};
pub use error::{Error, Result};
pub use optimizer::{
    closed_form_optimum, gamma_stationarity_residual, hessian_probe, mu_branch_select, optimal_directions,
    optimal_states, seesaw, zero_term_perturbation_check, GammaPoint, HessianProbe, SeesawConfig, SeesawResult,
};
pub use oracle::{mu_grid_scan, random_search_max, verify_mean_bound, MuGridScan, OracleResult};
pub use povm::{build_semi_sic, Povm, PovmElement, SemiSicParams};
pub use scalar::Scalar;
pub use selftest::{
    certify_povm, certify_states, reconstruct_fourth_povm, run_full_certification, CertificationConfig,
    CertificationReport, Verdict,
};
pub use strategy::Strategy;
pub use witness::{
    c_params_from_b, evaluate_extended_witness, evaluate_witness, q_of_b, q_of_c, q_prime, BehaviorTable, SignBranch,
    WitnessSpec,
};

pub type BlochVector64 = BlochVector<f64>;
pub type QubitState64 = QubitState<f64>;
pub type Povm64 = Povm<f64>;
pub type WitnessSpec64 = WitnessSpec<f64>;
pub type BehaviorTable64 = BehaviorTable<f64>;
pub type Strategy64 = Strategy<f64>;
pub type GammaPoint64 = GammaPoint<f64>;

pub type BlochVector32 = BlochVector<f32>;
pub type QubitState32 = QubitState<f32>;
pub type Povm32 = Povm<f32>;
pub type WitnessSpec32 = WitnessSpec<f32>;
pub type BehaviorTable32 = BehaviorTable<f32>;
pub type Strategy32 = Strategy<f32>;
pub type GammaPoint32 = GammaPoint<f32>;

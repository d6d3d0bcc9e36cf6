use thiserror::Error;

/// Errors raised by the library. Numeric payloads are reported as `f64`
/// regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: Bloch vector norm {norm} exceeds 1")]
    InvalidState { norm: f64 },
    #[error("invalid effect: weight {weight}, direction norm {norm}")]
    InvalidEffect { weight: f64, norm: f64 },
    #[error("invalid two-outcome measurement: {0}")]
    InvalidMeasurement(String),
    #[error("degenerate input: all source vectors are zero")]
    DegenerateInput,
    #[error("parameter B = {b} outside (1/16, 1/12]")]
    OutOfRangeB { b: f64 },
    #[error("expected {expected} elements, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("behavior table has no entry for x = {x}, y = {y}")]
    MissingEntries { x: usize, y: usize },
    #[error("invalid behavior table: {0}")]
    InvalidBehavior(String),
    #[error("no feasible angle: cos(2 theta) = {cos_two_theta} lies outside [-1, 1]")]
    InfeasibleTheta { cos_two_theta: f64 },
    #[error("u vector {index} has zero length")]
    ZeroLengthU { index: usize },
    #[error("gamma point lies outside the implied domain")]
    OutsideDomain,
    #[error("configuration has no vanishing u term")]
    NoZeroTerm,
    #[error("POVM directions are coplanar; weights are not determined")]
    CoplanarDirections,
    #[error("reconstructed weight {index} is not positive ({value})")]
    NegativeLambda { index: usize, value: f64 },
    #[error("strategy has no fourth measurement")]
    MissingFourthMeasurement,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

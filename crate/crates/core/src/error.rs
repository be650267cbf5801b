use thiserror::Error;

use crate::expr::{DomainError, SyntaxError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("matrix is not in SL(2,R): det = {det}")]
    NotUnimodular { det: f64 },
    #[error("degenerate metric at node ({i}, {j})")]
    DegenerateMetric { i: usize, j: usize },
    #[error("node ({i}, {j}) is too close to the edge for a centered stencil")]
    NotInterior { i: usize, j: usize },
    #[error("surface has no X(u) + Y(v) decomposition")]
    MissingDecomposition,
    #[error("curve tangent is not null at t = {at} (<xi, xi> = {residual:e})")]
    NotNull { at: f64, residual: f64 },
    #[error("vanishing denominator at t = {at}")]
    ZeroDenominator { at: f64 },
    #[error("{what} is not positive at t = {at}; spinor square roots do not exist")]
    SignObstruction { what: &'static str, at: f64 },
    #[error("spinor frame determinant {det} is not positive at ({u}, {v})")]
    NonPositiveFrameDet { u: f64, v: f64, det: f64 },
    #[error("1 + q r vanishes (equator of the pseudosphere)")]
    EquatorSingularity,
    #[error("point is the north pole (0, 0, 1)")]
    NorthPole,
    #[error("point is off the unit pseudosphere (<x, x> - 1 = {residual:e})")]
    NotOnSphere { residual: f64 },
    #[error("RK4 step rejected at ({u}, {v}): error estimate {estimate:e}")]
    StepRejected { u: f64, v: f64, estimate: f64 },
    #[error("induced metric is not Lorentzian at node ({i}, {j})")]
    SignatureError { i: usize, j: usize },
    #[error("initial data violate the conformal gauge: {what} = {residual:e}")]
    ConstraintViolation { what: &'static str, residual: f64 },
    #[error("unknown gallery entry '{0}'")]
    UnknownName(String),
    #[error("{field} must depend on {expected} only (found '{found}')")]
    VariableMismatch {
        field: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("cannot build an initial frame: {0}")]
    FrameObstruction(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

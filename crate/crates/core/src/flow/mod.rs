//! Volume-preserving vector fields, orbit knots and their invariants.
//!
//! An orbit segment of length `T` from `x` is closed by the straight chord back
//! to `x`, projected to a diagram, braided and evaluated. Built-in fields are
//! volume-preserving; whether they are ergodic is not something we can certify,
//! so statements about long-time behaviour on them are exploratory.

pub mod config;
pub mod expr;
pub mod field;
pub mod integrate;
pub mod knot;
pub mod project;
pub mod run;

use thiserror::Error;

use crate::diagram::DiagramError;
use crate::invariants::InvariantError;

pub use config::RunConfig;
pub use expr::Expr;
pub use field::{builtin_field, parse_field, Domain, FieldKind, FieldSpec, Point, Profile, Twist, ValidationReport};
pub use integrate::{integrate_orbit, Orbit};
pub use knot::{close_and_validate, OrbitKnot};
pub use project::{project_to_diagram, DegeneracyCensus, Projection, DEFAULT_DIRECTION};
pub use run::{asymptotic_run, flow_record, FlowRecord, FlowRun, KnotRecord, OmegaRecord, Outcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("{message}: {token:?} at byte {position}")]
    Syntax { position: usize, token: String, message: String },
    #[error("unknown identifier {name:?} at byte {position}")]
    UnknownIdentifier { position: usize, name: String },
    #[error("line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("{0}")]
    BadParameter(String),
    #[error("divergence {value:.3e} exceeds {limit:.3e} at {point:?}")]
    Divergence { point: Point, value: f64, limit: f64 },
    #[error("normal component {value:.3e} exceeds {limit:.3e} at boundary point {point:?}")]
    Tangency { point: Point, value: f64, limit: f64 },
    #[error("field is not finite at {point:?}")]
    NonFinite { point: Point },
    #[error("orbit reached a singularity at t = {time} near {point:?}")]
    Singularity { time: f64, point: Point },
    #[error("start point {point:?} is outside the domain")]
    OutsideDomain { point: Point },
    #[error("closed orbit is not embedded")]
    NotEmbedded,
    #[error("no generic projection after {attempts} attempts: {census:?}")]
    Degenerate { attempts: usize, census: DegeneracyCensus },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

//! Exact-arithmetic calculus for the parameter triples `(s, p, q)` of Besov
//! spaces `B^s_{p,q}` and Triebel-Lizorkin spaces `F^s_{p,q}` over a fixed
//! bounded smooth domain.
//!
//! Nothing here evaluates a function or a norm. A space is represented purely
//! by its parameters, and the library decides — with exact rational
//! arithmetic, never floating point — questions of the form:
//!
//! * does `(s, p, q)` lie in the admissibility sector of a boundary problem
//!   or in the class-`k` sector `D_k` of the boundary calculus ([`sector`]);
//! * does `F^{s0}_{p0,q0}` embed into `F^{s1}_{p1,q1}` over a bounded
//!   domain, and what is the least upper bound of two such spaces
//!   ([`embed`]);
//! * where does pointwise multiplication, and in particular the quadratic
//!   nonlinearity `B(v) = v·∂₁v`, map a given space ([`product`]);
//! * what image space does an operator of the boundary calculus of given
//!   order and class produce, and when is it undefined ([`green`]);
//! * can a weak solution of the semilinear Dirichlet or Neumann problem be
//!   bootstrapped from a start space to a target space, with a replayable
//!   certificate of every upgrade step ([`bootstrap`], [`trace`]);
//! * does the stationary Navier-Stokes solvability test accept a parameter
//!   ([`ns`]).
//!
//! Certified runs produce a [`trace::BootstrapTrace`] that serializes to a
//! stable JSON schema, can be re-validated step by step with
//! [`trace::replay`], and renders to a deterministic SVG diagram in the
//! `(n/p, s)` plane ([`svg`]).

use thiserror::Error;

pub mod bootstrap;
pub mod cli;
pub mod embed;
pub mod green;
pub mod ns;
pub mod product;
pub mod rat;
pub mod sector;
pub mod space;
pub mod svg;
pub mod trace;

pub use embed::{embeds, join, EmbedRule, EmbedVerdict, JoinResult};
pub use green::{apply_operator, Applied, ClassViolation, OperatorSpec, Problem};
pub use ns::{ns_existence, NsQuery, NsVerdict};
pub use product::{delta, map_b_sharp, map_b_standard, p_star, product_bounded, Deficit};
pub use rat::{ExtExp, Rat};
pub use sector::{dirichlet_sector, in_dk, neumann_sector, sobolev_index};
pub use space::{DomainCtx, Location, Scale, SpaceParam};
pub use trace::{replay, BootstrapTrace, TraceStep, Verdict};

/// Errors for malformed inputs and violated preconditions.
///
/// Negative mathematical outcomes (a failed sector test, an unbounded
/// product, a class violation) are *verdicts*, not errors; they are carried
/// in the result types of the individual modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    ParseRational(String),
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("exponent must be positive")]
    NonPositiveExponent,
    #[error("reciprocal exponent must be >= 0")]
    NegativeReciprocal,
    #[error("F-scale requires p < inf")]
    FScaleInfiniteP,
    #[error("invalid space literal `{text}`: {reason}")]
    ParseSpace { text: String, reason: String },
    #[error("dimension must be at least 2")]
    DimensionTooSmall,
    #[error("at least one boundary component is required")]
    NoBoundaryComponents,
    #[error("boundary space has dimension n-1 index; use sobolev_index_boundary to opt in")]
    BoundaryIndex,
    #[error("operation requires an interior space")]
    BoundarySpace,
    #[error("operator `{0}` expects a boundary input space")]
    ExpectsBoundaryInput(String),
    #[error("scales differ; mixed B/F comparisons are out of scope")]
    ScaleMismatch,
    #[error("eps must satisfy 0 < eps < 1")]
    EpsOutOfRange,
    #[error("sector violation for {what}: need s > {threshold}")]
    SectorViolation {
        what: String,
        threshold: Rat,
        on_boundary: bool,
    },
    #[error("regularizing operators smooth into every admissible target; there is no single image space")]
    RegularizingImage,
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("product is not defined on this pair")]
    ProductUndefined,
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
}

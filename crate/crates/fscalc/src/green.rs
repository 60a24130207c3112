//! Order/class mapping rules for operators of the pseudo-differential
//! boundary calculus, the built-in operator catalog, and class-violation
//! detection.
//!
//! An operator all of whose entries have order `d` and class `r` maps
//! `X^s_{p,q}` boundedly for `s > r + max(1/p - 1, n/p - n)`, dropping the
//! smoothness by `d` (boundary images lose an extra `1/p` and are Besov
//! spaces, with `q = p` on the F-scale). Below the threshold the operator is
//! not merely unbounded but undefined on the space, so the negative outcome
//! is data — a [`ClassViolation`] carrying the exact threshold — rather than
//! an error. The two boundary-problem systems are modeled by their effective
//! applicability sectors `D_1` (Dirichlet) and `D_2` (Neumann).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rat::Rat;
use crate::sector::{class_break, dk_check};
use crate::space::{DomainCtx, Location, Scale, SpaceParam};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Dirichlet,
    Neumann,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Dirichlet => write!(f, "dirichlet"),
            Problem::Neumann => write!(f, "neumann"),
        }
    }
}

/// Operator order: an integer, or `-inf` for regularizing operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpOrder {
    Finite(i64),
    NegInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    /// Truncated interior operator plus singular Green part.
    InteriorSingularGreen,
    Trace,
    Poisson,
    BoundaryPdo,
    Regularizing,
}

/// One entry of the operator catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSpec {
    pub name: &'static str,
    pub order: OpOrder,
    /// `None` when the operator carries no class restriction (Poisson
    /// operators, differential operators).
    pub class: Option<i64>,
    pub kind: OpKind,
    pub maps_to_boundary: bool,
}

/// Built-in catalog: the Laplacian column operators of the two model
/// problems, their solution operators, and the Neumann defect.
///
/// * `Delta`: `-Δ`, differential, order 2 (no class restriction alone);
/// * `gamma0`: Dirichlet trace, order 0, class 1;
/// * `gamma1`: normal-derivative trace, order 1, class 2;
/// * `R_D`, `K_D`: the exact inverse pair of the Dirichlet system (`R_D`
///   order -2, class -1; `K_D` Poisson, order 0);
/// * `R_N`, `K_N`: the Neumann parametrix pair, of class 0 but not lower
///   (`R_N` order -2, class 0; `K_N` Poisson, order -1);
/// * `R`: the Neumann parametrix defect `u ↦ |Ω|⁻¹∫_Ω u`, order -inf,
///   class <= 2.
pub static CATALOG: &[OperatorSpec] = &[
    OperatorSpec {
        name: "Delta",
        order: OpOrder::Finite(2),
        class: None,
        kind: OpKind::InteriorSingularGreen,
        maps_to_boundary: false,
    },
    OperatorSpec {
        name: "gamma0",
        order: OpOrder::Finite(0),
        class: Some(1),
        kind: OpKind::Trace,
        maps_to_boundary: true,
    },
    OperatorSpec {
        name: "gamma1",
        order: OpOrder::Finite(1),
        class: Some(2),
        kind: OpKind::Trace,
        maps_to_boundary: true,
    },
    OperatorSpec {
        name: "R_D",
        order: OpOrder::Finite(-2),
        class: Some(-1),
        kind: OpKind::InteriorSingularGreen,
        maps_to_boundary: false,
    },
    OperatorSpec {
        name: "K_D",
        order: OpOrder::Finite(0),
        class: None,
        kind: OpKind::Poisson,
        maps_to_boundary: false,
    },
    OperatorSpec {
        name: "R_N",
        order: OpOrder::Finite(-2),
        class: Some(0),
        kind: OpKind::InteriorSingularGreen,
        maps_to_boundary: false,
    },
    OperatorSpec {
        name: "K_N",
        order: OpOrder::Finite(-1),
        class: None,
        kind: OpKind::Poisson,
        maps_to_boundary: false,
    },
    OperatorSpec {
        name: "R",
        order: OpOrder::NegInfinity,
        class: Some(2),
        kind: OpKind::Regularizing,
        maps_to_boundary: false,
    },
];

pub fn lookup(name: &str) -> Option<&'static OperatorSpec> {
    let name = match name {
        "-Delta" | "Lap" => "Delta",
        other => other,
    };
    CATALOG.iter().find(|op| op.name == name)
}

pub(crate) fn op_r_d() -> &'static OperatorSpec {
    lookup("R_D").expect("catalog entry")
}

pub(crate) fn op_r_n() -> &'static OperatorSpec {
    lookup("R_N").expect("catalog entry")
}

/// The operator is undefined on the input space: `s` does not exceed the
/// class threshold `class + max(1/p - 1, n/p - n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassViolation {
    pub operator: String,
    pub input: SpaceParam,
    pub threshold: Rat,
    /// `s` sits exactly on the threshold.
    pub on_boundary: bool,
}

impl fmt::Display for ClassViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "class violation: {} undefined on {} (need s > {}{})",
            self.operator,
            self.input,
            self.threshold,
            if self.on_boundary {
                ", boundary of sector"
            } else {
                ""
            }
        )
    }
}

/// Image space or first-class violation verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Applied {
    Image(SpaceParam),
    Violation(ClassViolation),
}

impl Applied {
    pub fn image(self) -> Option<SpaceParam> {
        match self {
            Applied::Image(space) => Some(space),
            Applied::Violation(_) => None,
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, Applied::Violation(_))
    }
}

fn class_violation(op: &OperatorSpec, x: &SpaceParam, ctx: &DomainCtx) -> Option<ClassViolation> {
    let class = op.class?;
    let threshold = Rat::int(class) + class_break(x, ctx);
    if *x.s() > threshold {
        None
    } else {
        Some(ClassViolation {
            operator: op.name.to_string(),
            input: x.clone(),
            on_boundary: *x.s() == threshold,
            threshold,
        })
    }
}

/// Apply a catalog operator to a space, producing the image space when the
/// class threshold is met and a [`ClassViolation`] otherwise.
///
/// Interior inputs map to `X^{s-d}_{p,q}` (interior image) or
/// `B^{s-d-1/p}_{p,p}(Γ)` for the F-scale and `B^{s-d-1/p}_{p,q}(Γ)` for
/// the B-scale (boundary image). Poisson operators take a boundary space
/// `B^σ_{p,r}(Γ)` to `B^{σ+1/p-d}_{p,r}` over the domain.
pub fn apply_operator(
    op: &OperatorSpec,
    x: &SpaceParam,
    ctx: &DomainCtx,
) -> Result<Applied, Error> {
    let d = match op.order {
        OpOrder::Finite(d) => d,
        OpOrder::NegInfinity => return Err(Error::RegularizingImage),
    };
    match op.kind {
        OpKind::Poisson => {
            if x.location() != Location::Boundary {
                return Err(Error::ExpectsBoundaryInput(op.name.to_string()));
            }
            let s = x.s() + x.p().recip() - Rat::int(d);
            let image = SpaceParam::interior(Scale::B, s, x.p().clone(), x.q().clone())?;
            Ok(Applied::Image(image))
        }
        _ => {
            if !x.is_interior() {
                return Err(Error::BoundarySpace);
            }
            if let Some(violation) = class_violation(op, x, ctx) {
                return Ok(Applied::Violation(violation));
            }
            if op.maps_to_boundary {
                let s = x.s() - Rat::int(d) - x.p().recip();
                let q = match x.scale() {
                    Scale::F => x.p().clone(),
                    Scale::B => x.q().clone(),
                };
                Ok(Applied::Image(SpaceParam::boundary(s, x.p().clone(), q)))
            } else {
                let image = x.with_params(x.s() - Rat::int(d), x.p().clone(), x.q().clone())?;
                Ok(Applied::Image(image))
            }
        }
    }
}

/// The normal-derivative trace `γ₁: X^s_{p,q} → B^{s-1-1/p}(Γ)`, defined on
/// the class-2 sector `D_2`.
pub fn trace_gamma1_bound(x: &SpaceParam, ctx: &DomainCtx) -> Result<Applied, Error> {
    let op = lookup("gamma1").expect("catalog entry");
    apply_operator(op, x, ctx)
}

/// Definedness of the regularizing defect `R` on a space: it requires the
/// class-2 sector, and smooths into every admissible target from there.
pub fn apply_regularizer(x: &SpaceParam, ctx: &DomainCtx) -> Result<Option<ClassViolation>, Error> {
    let op = lookup("R").expect("catalog entry");
    if !x.is_interior() {
        return Err(Error::BoundarySpace);
    }
    Ok(class_violation(op, x, ctx))
}

/// Image columns of the boundary-problem systems `(-Δ, γ₀)` and `(-Δ, γ₁)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemOutcome {
    Image {
        interior: SpaceParam,
        boundary: SpaceParam,
    },
    Violation(ClassViolation),
}

/// The canonical data columns of a boundary problem at parameters `x`:
/// the interior datum `X^{s-2}_{p,q}` and the boundary datum `B^{s-1/p}(Γ)`
/// (Dirichlet) resp. `B^{s-1-1/p}(Γ)` (Neumann), with `q = p` on the
/// F-scale.
pub fn data_columns(problem: Problem, x: &SpaceParam) -> Result<(SpaceParam, SpaceParam), Error> {
    if !x.is_interior() {
        return Err(Error::BoundarySpace);
    }
    let trace_order = match problem {
        Problem::Dirichlet => 0,
        Problem::Neumann => 1,
    };
    let interior = x.with_params(x.s() - Rat::int(2), x.p().clone(), x.q().clone())?;
    let s_boundary = x.s() - Rat::int(trace_order) - x.p().recip();
    let q = match x.scale() {
        Scale::F => x.p().clone(),
        Scale::B => x.q().clone(),
    };
    Ok((interior, SpaceParam::boundary(s_boundary, x.p().clone(), q)))
}

/// Apply a full boundary-problem system. The Dirichlet system requires its
/// argument in `D_1`, the Neumann system in `D_2`; the images are the data
/// columns of [`data_columns`].
pub fn apply_system(
    problem: Problem,
    x: &SpaceParam,
    ctx: &DomainCtx,
) -> Result<SystemOutcome, Error> {
    let (k, name) = match problem {
        Problem::Dirichlet => (1, "A_D"),
        Problem::Neumann => (2, "A_N"),
    };
    let check = dk_check(x, k, ctx)?;
    if !check.holds {
        return Ok(SystemOutcome::Violation(ClassViolation {
            operator: name.to_string(),
            input: x.clone(),
            threshold: check.threshold,
            on_boundary: check.on_boundary,
        }));
    }
    let (interior, boundary) = data_columns(problem, x)?;
    Ok(SystemOutcome::Image { interior, boundary })
}

/// Description of the parametrix defect of a boundary problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametrixDefect {
    pub problem: Problem,
    /// The Dirichlet solution operator is an exact inverse.
    pub zero: bool,
    pub description: String,
}

/// Dirichlet: the solution operator pair is an exact inverse, zero defect.
/// Neumann: the defect is the mean-value operator `u ↦ |Ω|⁻¹∫_Ω u`, of
/// order -inf; it smooths into every target space whose parameters admit
/// the class-2 sector.
pub fn parametrix_defect(problem: Problem) -> ParametrixDefect {
    match problem {
        Problem::Dirichlet => ParametrixDefect {
            problem,
            zero: true,
            description: "zero defect: the solution operator pair is an exact inverse".to_string(),
        },
        Problem::Neumann => ParametrixDefect {
            problem,
            zero: false,
            description:
                "defect R with Ru = |Ω|⁻¹∫_Ω u, order -inf: smooths into every admissible target"
                    .to_string(),
        },
    }
}

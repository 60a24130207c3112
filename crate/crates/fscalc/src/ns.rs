//! Solvability conditions for the stationary Navier-Stokes system with
//! Dirichlet boundary values and zero divergence data.
//!
//! The test accepts a parameter `(s, p, q)` in dimension 2 or 3, over a
//! connected domain, with `g = 0` and zero flux through every boundary
//! component, when one of three conditions holds:
//!
//! 1. `s > max(1, n/p + 1 - n/2)`;
//! 2. `s > 1` on the critical line `s = n/p + 1 - n/2` with `q <= 2`
//!    (any `q` on the F-scale);
//! 3. `s = 1` with `p >= 2 >= q` (the weak-solution corner).
//!
//! The verdict also lists the spaces the data and the solution pair must
//! occupy. Geometry enters only through boolean facts in [`DomainCtx`]; the
//! flux and divergence hypotheses are boolean inputs.

use serde::{Deserialize, Serialize};

use crate::rat::Rat;
use crate::space::{DomainCtx, Scale, SpaceParam};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsQuery {
    pub ctx: DomainCtx,
    pub param: SpaceParam,
    /// The divergence datum is identically zero.
    pub g_zero: bool,
    /// `∫_{Γ_j} n·φ = 0` for every boundary component.
    pub flux_zero_per_component: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NsReason {
    DimensionUnsupported,
    NotConnected,
    NonzeroDivergence,
    FluxConditionUnmet,
    NoExistenceCondition,
}

/// Required spaces for the data `(f, g, φ)` and the solution pair `(u, 𝔭)`.
/// The velocity, force, and boundary spaces are n-vector valued.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsDataSpaces {
    pub velocity: SpaceParam,
    pub pressure: SpaceParam,
    pub force: SpaceParam,
    pub divergence: SpaceParam,
    pub boundary_values: SpaceParam,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsVerdict {
    pub accepted: bool,
    /// Which of the three conditions fired (1, 2, or 3).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub condition: Option<u8>,
    pub reasons: Vec<NsReason>,
    pub data_spaces: NsDataSpaces,
}

fn data_spaces(x: &SpaceParam) -> Result<NsDataSpaces, Error> {
    let p = x.p().clone();
    let q = x.q().clone();
    let boundary_q = match x.scale() {
        Scale::B => q.clone(),
        Scale::F => p.clone(),
    };
    Ok(NsDataSpaces {
        velocity: x.clone(),
        pressure: x.with_params(x.s() - Rat::one(), p.clone(), q.clone())?,
        force: x.with_params(x.s() - Rat::int(2), p.clone(), q.clone())?,
        divergence: x.with_params(x.s() - Rat::one(), p.clone(), q.clone())?,
        boundary_values: SpaceParam::boundary(x.s() - x.p().recip(), p, boundary_q),
    })
}

/// Decide solvability for arbitrary data size; every violated hypothesis is
/// reported, none raises an error.
pub fn ns_existence(query: &NsQuery) -> Result<NsVerdict, Error> {
    let x = &query.param;
    let ctx = &query.ctx;
    if !x.is_interior() {
        return Err(Error::BoundarySpace);
    }

    let mut reasons = Vec::new();
    if !(ctx.n() == 2 || ctx.n() == 3) {
        reasons.push(NsReason::DimensionUnsupported);
    }
    if !ctx.connected() {
        reasons.push(NsReason::NotConnected);
    }
    if !query.g_zero {
        reasons.push(NsReason::NonzeroDivergence);
    }
    if !query.flux_zero_per_component {
        reasons.push(NsReason::FluxConditionUnmet);
    }

    let one = Rat::one();
    let two = Rat::int(2);
    let critical = x.np(ctx) + &one - ctx.n_rat() / &two;
    let half = Rat::new(1, 2).unwrap();
    // q <= 2 reads 1/q >= 1/2 and p >= 2 reads 1/p <= 1/2 on reciprocals.
    let condition = if *x.s() > one.clone().max(critical.clone()) {
        Some(1)
    } else if *x.s() > one
        && *x.s() == critical
        && (x.scale() == Scale::F || *x.q().recip() >= half)
    {
        Some(2)
    } else if *x.s() == one && *x.p().recip() <= half && *x.q().recip() >= half {
        Some(3)
    } else {
        None
    };
    if condition.is_none() {
        reasons.push(NsReason::NoExistenceCondition);
    }

    let accepted = reasons.is_empty();
    Ok(NsVerdict {
        accepted,
        condition: if accepted { condition } else { None },
        reasons,
        data_spaces: data_spaces(x)?,
    })
}

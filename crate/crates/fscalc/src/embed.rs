//! The embedding partial order on interior spaces over a bounded domain,
//! and the join used to combine two pieces of knowledge about a solution.
//!
//! In the `(n/p, s)` plane the generating moves are: dropping `s` at fixed
//! `p`; growing `q` at fixed `(s, p)`; Sobolev embeddings down the lines of
//! slope 1 (`s` and `n/p` drop together, the index `s - n/p` does not
//! increase); and moves to the right along horizontal lines, available
//! because the domain has finite measure. `embeds` decides derivability
//! from these moves and their compositions; the closure has the closed
//! form used below. On the F-scale, embeddings along a line of equal
//! Sobolev index hold for arbitrary sum exponents; on the B-scale they
//! require `q` not to decrease, which is the conservative choice this
//! module makes throughout.

use serde::{Deserialize, Serialize};

use crate::rat::{ExtExp, Rat};
use crate::sector::sobolev_index;
use crate::space::{DomainCtx, SpaceParam};
use crate::Error;

/// The single generating move that proves an embedding, or `Composite` when
/// only a composition of moves does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedRule {
    Identical,
    SamePHigherS,
    SamePSameSQMonotone,
    SobolevSlope1,
    FiniteMeasureRight,
    Composite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedVerdict {
    pub holds: bool,
    /// Populated exactly when `holds`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<EmbedRule>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub strictness_note: Option<String>,
}

const B_SCALE_NOTE: &str =
    "B-scale: q-monotonicity imposed at equal Sobolev index (conservative sum-exponent rule)";

fn guards(a: &SpaceParam, b: &SpaceParam) -> Result<(), Error> {
    if !a.is_interior() || !b.is_interior() {
        return Err(Error::BoundarySpace);
    }
    if a.scale() != b.scale() {
        return Err(Error::ScaleMismatch);
    }
    Ok(())
}

/// Decide `a ↪ b` over the bounded domain.
pub fn embeds(a: &SpaceParam, b: &SpaceParam, ctx: &DomainCtx) -> Result<EmbedVerdict, Error> {
    guards(a, b)?;
    let idx_a = sobolev_index(a, ctx)?;
    let idx_b = sobolev_index(b, ctx)?;
    let b_scale = a.scale() == crate::space::Scale::B;
    let q_ok = a.q() <= b.q();

    // Closure of the generating moves:
    //   s_a > s_b  and  idx_a >= idx_b   (B-scale: q_a <= q_b when idx equal)
    //   s_a = s_b, 1/p_a <= 1/p_b, q_a <= q_b
    let holds = if a.s() > b.s() {
        idx_a >= idx_b && (!b_scale || idx_a > idx_b || q_ok)
    } else if a.s() == b.s() {
        a.p().recip() <= b.p().recip() && q_ok
    } else {
        false
    };

    let rule = if !holds {
        None
    } else if a == b {
        Some(EmbedRule::Identical)
    } else if a.p() == b.p() && a.s() > b.s() {
        Some(EmbedRule::SamePHigherS)
    } else if a.p() == b.p() && a.s() == b.s() {
        Some(EmbedRule::SamePSameSQMonotone)
    } else if a.s() > b.s() && a.p() < b.p() && idx_a >= idx_b {
        Some(EmbedRule::SobolevSlope1)
    } else if a.s() == b.s() && a.p() > b.p() {
        Some(EmbedRule::FiniteMeasureRight)
    } else {
        Some(EmbedRule::Composite)
    };

    let strictness_note = if b_scale {
        Some(B_SCALE_NOTE.to_string())
    } else {
        None
    };

    Ok(EmbedVerdict {
        holds,
        rule,
        strictness_note,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinResult {
    pub space: SpaceParam,
    /// `n/p` of the join would have been negative and was clamped to
    /// `p = inf`. Cannot occur for joins of valid inputs; kept as a flag so
    /// the condition is visible if it ever fires.
    pub clamped: bool,
}

/// Least space above `a` and `b` producible by the rule grammar:
/// `s = min(s_a, s_b)`, Sobolev index `min(idx_a, idx_b)`, `q` maximal over
/// the inputs attaining `s` (on the B-scale also over those attaining the
/// index, which the conservative B-scale rules make binding).
pub fn join(a: &SpaceParam, b: &SpaceParam, ctx: &DomainCtx) -> Result<JoinResult, Error> {
    guards(a, b)?;
    let idx_a = sobolev_index(a, ctx)?;
    let idx_b = sobolev_index(b, ctx)?;
    let s = a.s().min(b.s()).clone();
    let idx = idx_a.clone().min(idx_b.clone());
    let mut np = &s - &idx;
    let mut clamped = false;
    if np.is_negative() {
        np = Rat::zero();
        clamped = true;
    }

    let mut q = None;
    let mut bump = |candidate: &ExtExp| {
        if q.as_ref().is_none_or(|cur: &ExtExp| candidate > cur) {
            q = Some(candidate.clone());
        }
    };
    if *a.s() == s {
        bump(a.q());
    }
    if *b.s() == s {
        bump(b.q());
    }
    if a.scale() == crate::space::Scale::B {
        if idx_a == idx {
            bump(a.q());
        }
        if idx_b == idx {
            bump(b.q());
        }
    }
    let q = q.expect("at least one input attains the minimum smoothness");

    let p = ExtExp::from_recip(np / ctx.n_rat())?;
    let space = SpaceParam::interior(a.scale(), s, p, q)?;
    Ok(JoinResult { space, clamped })
}

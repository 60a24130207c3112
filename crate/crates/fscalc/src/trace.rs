//! Certified bootstrap traces: the step record, the JSON schema, and the
//! replay validator.
//!
//! A trace is a machine-checkable certificate. Every step names the rule
//! that justifies it, its input space(s), and its output space; [`replay`]
//! recomputes each step through the embedding lattice, the product
//! calculus, and the operator calculus and fails on any deviation, so a
//! certificate cannot drift from the rules that produced it.
//!
//! The JSON schema is stable: `problem`, `n`, `eps`, `start`, `target`,
//! `steps[{index, rule, input, output, anchor}]`, `verdict`. Steps may
//! carry optional fields: `figure_case` (which manoeuvre a join realized,
//! for diagram labeling), `violation` (the class violation that forced a
//! sharp-route step), and `at_critical` (the deficit used the ε-convention
//! on the critical line).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{embeds, join};
use crate::green::{apply_operator, op_r_d, op_r_n, Applied, ClassViolation, Problem};
use crate::product::{delta, map_b_sharp, map_b_standard};
use crate::rat::Rat;
use crate::sector::{dirichlet_sector, in_dk, neumann_safe_subsector};
use crate::space::{DomainCtx, SpaceParam};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    NonlinearGainStandard,
    NonlinearGainSharp,
    ParametrixApply,
    Join,
    Embed,
    DefectAbsorb,
    Done,
}

/// Which of the four manoeuvres of the iteration a join realized, in the
/// `(n/p, s)` plane: `sawtooth` capped the smoothness at the target,
/// `staircase` capped the Sobolev index, `mixed` capped neither (a vertical
/// climb), `trivial` capped both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureCase {
    Trivial,
    Sawtooth,
    Staircase,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub index: usize,
    pub rule: StepRule,
    pub input: Vec<SpaceParam>,
    pub output: SpaceParam,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub figure_case: Option<FigureCase>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub violation: Option<ClassViolation>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub at_critical: bool,
}

/// Machine-readable rejection codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReasonCode {
    SectorViolation,
    ClassViolation,
    SafeSubsectorViolation,
    ScaleMismatch,
    FluxConditionUnmet,
    NoExistenceCondition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectReason {
    pub code: ReasonCode,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbortReason {
    pub guard: String,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Rejected(RejectReason),
    Aborted(AbortReason),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

mod ctx_as_n {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::space::DomainCtx;

    pub fn serialize<S: Serializer>(ctx: &DomainCtx, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u32(ctx.n())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<DomainCtx, D::Error> {
        let n = u32::deserialize(deserializer)?;
        DomainCtx::simple(n).map_err(serde::de::Error::custom)
    }
}

/// A full certificate of one bootstrap run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapTrace {
    pub problem: Problem,
    #[serde(rename = "n", with = "ctx_as_n")]
    pub ctx: DomainCtx,
    pub eps: Rat,
    pub start: SpaceParam,
    pub target: SpaceParam,
    pub steps: Vec<TraceStep>,
    pub verdict: Verdict,
}

impl BootstrapTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, crate::Error> {
        serde_json::from_str(text).map_err(|e| crate::Error::InvalidTrace(e.to_string()))
    }

    /// Number of nonlinear-gain rounds (the iteration count of the run).
    pub fn gain_rounds(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| {
                matches!(
                    s.rule,
                    StepRule::NonlinearGainStandard | StepRule::NonlinearGainSharp
                )
            })
            .count()
    }

    /// The smallest deficit used by any gain round.
    pub fn min_deficit(&self) -> Option<Rat> {
        self.steps
            .iter()
            .filter(|s| {
                matches!(
                    s.rule,
                    StepRule::NonlinearGainStandard | StepRule::NonlinearGainSharp
                )
            })
            .filter_map(|s| {
                let x = s.input.first()?;
                delta(x, &self.ctx, &self.eps).ok().map(|d| d.value)
            })
            .min()
    }
}

/// Anchor texts attached to trace steps; they cite the mathematical rule a
/// replay re-checks the step against.
pub mod anchors {
    pub const GAIN_STANDARD: &str =
        "nonlinearity estimate: v·∂₁v drops smoothness by 2-δ(s,p) at fixed (p,q)";
    pub const GAIN_SHARP: &str =
        "sharp nonlinearity estimate: v·∂₁v lands at smoothness s-1 with n/p* = n/p + (n/p-s)₊";
    pub const PARAMETRIX: &str =
        "solution-operator mapping: order -2 lifts smoothness by 2 above the class threshold";
    pub const JOIN: &str = "least upper bound of target knowledge and nonlinear gain";
    pub const EMBED: &str = "embedding in the (n/p, s) lattice over the bounded domain";
    pub const DEFECT: &str =
        "parametrix defect has order -inf and lands in every class-2-admissible target";
    pub const DONE: &str = "gain space embeds into the target; the fixed-point identity closes";
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {at}: index out of order")]
    IndexOutOfOrder { at: usize },
    #[error("step {at}: expected input chained from previous output, found {found}")]
    ChainBroken { at: usize, found: String },
    #[error("step {at}: wrong input arity for rule")]
    InputArity { at: usize },
    #[error("step {at}: {what}")]
    PreconditionFailed { at: usize, what: String },
    #[error("step {at}: recomputed output {expected}, trace claims {found}")]
    OutputMismatch {
        at: usize,
        expected: String,
        found: String,
    },
    #[error("step {at}: {what}")]
    RuleViolation { at: usize, what: String },
    #[error("certified trace does not end at the target")]
    CertifiedWithoutTarget,
    #[error("trace error: {0}")]
    Invalid(String),
}

fn ensure(cond: bool, err: ReplayError) -> Result<(), ReplayError> {
    if cond {
        Ok(())
    } else {
        Err(err)
    }
}

fn invalid(e: crate::Error) -> ReplayError {
    ReplayError::Invalid(e.to_string())
}

/// Re-validate a trace step by step.
///
/// Every output is recomputed exactly from the step's inputs under the
/// trace's `eps`; the chain of knowledge must be contiguous; the recorded
/// obstructions and ε-uses must reproduce. For certified traces the final
/// step must be a `done` step landing exactly on the target.
pub fn replay(trace: &BootstrapTrace) -> Result<(), ReplayError> {
    let ctx = &trace.ctx;
    let eps = &trace.eps;
    let parametrix = match trace.problem {
        Problem::Dirichlet => op_r_d(),
        Problem::Neumann => op_r_n(),
    };

    let mut current = trace.start.clone();
    let mut defect_seen = false;
    for (k, step) in trace.steps.iter().enumerate() {
        let at = k;
        ensure(step.index == k, ReplayError::IndexOutOfOrder { at })?;
        let arity = match step.rule {
            StepRule::Join => 2,
            _ => 1,
        };
        ensure(step.input.len() == arity, ReplayError::InputArity { at })?;

        if step.rule == StepRule::DefectAbsorb {
            // Side condition on the fixed-point identity, not part of the
            // knowledge chain.
            ensure(
                trace.problem == Problem::Neumann,
                ReplayError::RuleViolation {
                    at,
                    what: "defect-absorb in a Dirichlet trace".to_string(),
                },
            )?;
            ensure(
                !defect_seen,
                ReplayError::RuleViolation {
                    at,
                    what: "defect-absorb recorded twice".to_string(),
                },
            )?;
            defect_seen = true;
            ensure(
                step.input[0] == trace.start,
                ReplayError::ChainBroken {
                    at,
                    found: step.input[0].to_string(),
                },
            )?;
            ensure(
                step.output == trace.target,
                ReplayError::OutputMismatch {
                    at,
                    expected: trace.target.to_string(),
                    found: step.output.to_string(),
                },
            )?;
            for (name, space) in [("input", &trace.start), ("target", &trace.target)] {
                let ok = in_dk(space, 2, ctx).map_err(invalid)?;
                ensure(
                    ok,
                    ReplayError::PreconditionFailed {
                        at,
                        what: format!("defect absorption needs the {name} in the class-2 sector"),
                    },
                )?;
            }
            continue;
        }

        ensure(
            step.input[0] == current,
            ReplayError::ChainBroken {
                at,
                found: step.input[0].to_string(),
            },
        )?;

        match step.rule {
            StepRule::NonlinearGainStandard => {
                let x = &step.input[0];
                let expected = map_b_standard(x, ctx, eps).map_err(invalid)?;
                ensure(
                    step.output == expected,
                    ReplayError::OutputMismatch {
                        at,
                        expected: expected.to_string(),
                        found: step.output.to_string(),
                    },
                )?;
                let crit = delta(x, ctx, eps).map_err(invalid)?.at_critical;
                ensure(
                    step.at_critical == crit,
                    ReplayError::RuleViolation {
                        at,
                        what: "ε-use flag does not match the critical line".to_string(),
                    },
                )?;
            }
            StepRule::NonlinearGainSharp => {
                let x = &step.input[0];
                ensure(
                    trace.problem == Problem::Neumann,
                    ReplayError::RuleViolation {
                        at,
                        what: "sharp route outside the Neumann iteration".to_string(),
                    },
                )?;
                let safe = neumann_safe_subsector(x, ctx).map_err(invalid)?;
                ensure(
                    safe,
                    ReplayError::PreconditionFailed {
                        at,
                        what: format!("{x} is outside the safe subsector"),
                    },
                )?;
                // The sharp route is only legitimate where the standard
                // route genuinely fails; the recorded violation must
                // reproduce.
                let b_std = map_b_standard(x, ctx, eps).map_err(invalid)?;
                let standard = apply_operator(op_r_n(), &b_std, ctx).map_err(invalid)?;
                match (standard, &step.violation) {
                    (Applied::Violation(v), Some(recorded)) => {
                        ensure(
                            v == *recorded,
                            ReplayError::RuleViolation {
                                at,
                                what: "recorded class violation does not reproduce".to_string(),
                            },
                        )?;
                    }
                    (Applied::Violation(_), None) => {
                        return Err(ReplayError::RuleViolation {
                            at,
                            what: "sharp-route step lost its violation record".to_string(),
                        });
                    }
                    (Applied::Image(_), _) => {
                        return Err(ReplayError::RuleViolation {
                            at,
                            what: "sharp route used where the standard route applies".to_string(),
                        });
                    }
                }
                let expected = map_b_sharp(x, ctx).map_err(invalid)?;
                ensure(
                    step.output == expected,
                    ReplayError::OutputMismatch {
                        at,
                        expected: expected.to_string(),
                        found: step.output.to_string(),
                    },
                )?;
            }
            StepRule::ParametrixApply => {
                let applied = apply_operator(parametrix, &step.input[0], ctx).map_err(invalid)?;
                match applied {
                    Applied::Image(expected) => ensure(
                        step.output == expected,
                        ReplayError::OutputMismatch {
                            at,
                            expected: expected.to_string(),
                            found: step.output.to_string(),
                        },
                    )?,
                    Applied::Violation(v) => {
                        return Err(ReplayError::PreconditionFailed {
                            at,
                            what: v.to_string(),
                        });
                    }
                }
            }
            StepRule::Join => {
                ensure(
                    step.input[1] == trace.target,
                    ReplayError::RuleViolation {
                        at,
                        what: "join must combine the gain with the target".to_string(),
                    },
                )?;
                let expected = join(&step.input[0], &step.input[1], ctx)
                    .map_err(invalid)?
                    .space;
                ensure(
                    step.output == expected,
                    ReplayError::OutputMismatch {
                        at,
                        expected: expected.to_string(),
                        found: step.output.to_string(),
                    },
                )?;
            }
            StepRule::Embed => {
                let v = embeds(&step.input[0], &step.output, ctx).map_err(invalid)?;
                ensure(
                    v.holds,
                    ReplayError::RuleViolation {
                        at,
                        what: format!("{} does not embed into {}", step.input[0], step.output),
                    },
                )?;
            }
            StepRule::Done => {
                ensure(
                    step.output == trace.target,
                    ReplayError::OutputMismatch {
                        at,
                        expected: trace.target.to_string(),
                        found: step.output.to_string(),
                    },
                )?;
                let v = embeds(&step.input[0], &trace.target, ctx).map_err(invalid)?;
                ensure(
                    v.holds,
                    ReplayError::RuleViolation {
                        at,
                        what: format!(
                            "{} does not embed into the target {}",
                            step.input[0], trace.target
                        ),
                    },
                )?;
            }
            StepRule::DefectAbsorb => unreachable!("handled above"),
        }
        current = step.output.clone();
    }

    if trace.verdict.is_certified() {
        let last_is_done = trace
            .steps
            .last()
            .is_some_and(|s| s.rule == StepRule::Done && s.output == trace.target);
        ensure(
            last_is_done && current == trace.target,
            ReplayError::CertifiedWithoutTarget,
        )?;
        // Intermediate sector stability: every gain input must either admit
        // the standard route (validated above) or lie in the safe
        // subsector; both are established by the per-step checks. The start
        // itself must lie in the problem's sector, re-checked here.
        let in_sector = match trace.problem {
            Problem::Dirichlet => dirichlet_sector(&trace.start, ctx).map_err(invalid)?,
            Problem::Neumann => {
                crate::sector::neumann_sector(&trace.start, ctx).map_err(invalid)?
            }
        };
        ensure(
            in_sector,
            ReplayError::PreconditionFailed {
                at: 0,
                what: "certified trace starts outside the sector".to_string(),
            },
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_json_shapes() {
        assert_eq!(
            serde_json::to_string(&Verdict::Certified).unwrap(),
            "\"certified\""
        );
        let rejected = Verdict::Rejected(RejectReason {
            code: ReasonCode::SectorViolation,
            detail: "start".to_string(),
        });
        let text = serde_json::to_string(&rejected).unwrap();
        assert!(text.contains("\"rejected\""));
        assert!(text.contains("sector-violation"));
    }

    #[test]
    fn step_serde_skips_empty_options() {
        let step = TraceStep {
            index: 0,
            rule: StepRule::Join,
            input: vec!["F:1,2,2".parse().unwrap(), "F:2,2,2".parse().unwrap()],
            output: "F:1,2,2".parse().unwrap(),
            anchor: anchors::JOIN.to_string(),
            figure_case: Some(FigureCase::Sawtooth),
            violation: None,
            at_critical: false,
        };
        let text = serde_json::to_string(&step).unwrap();
        assert!(!text.contains("violation"));
        assert!(!text.contains("at_critical"));
        assert!(text.contains("\"figure_case\":\"sawtooth\""));
        let back: TraceStep = serde_json::from_str(&text).unwrap();
        assert_eq!(back, step);
    }
}

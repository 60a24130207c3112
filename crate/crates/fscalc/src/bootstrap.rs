//! The certified regularity iteration for the semilinear Dirichlet and
//! Neumann problems.
//!
//! Knowledge about the solution is a space `X_k` (initially the start
//! space). One round computes the nonlinear gain — the solution operator
//! applied to the image of the nonlinearity, landing at `X^{s+δ(s,p)}_{p,q}`
//! — and joins it with the target; the run certifies once the gain embeds
//! into the target, because the data terms of the fixed-point identity
//! already lie there.
//!
//! For the Neumann problem the solution operator has class 0, and near the
//! lower edge of the sector the standard gain input `X^{s-2+δ}_{p,q}` falls
//! below its class threshold. In the safe subsector `s > max(1, n/p - 1 +
//! δ_{n2}/2)` the sharp product estimate factors the nonlinearity through
//! `X^{s-1}_{p*,q}`, which the solution operator does accept, and the
//! output `X^{s+1}_{p*,q}` embeds back into `X^{s+δ}_{p,q}` along a line of
//! equal Sobolev index. Both the failed standard attempt and the recovery
//! are recorded in the trace.

use serde::{Deserialize, Serialize};

use crate::embed::{embeds, join};
use crate::green::{apply_operator, data_columns, op_r_d, op_r_n, Applied, Problem};
use crate::product::{delta, map_b_sharp, map_b_standard};
use crate::rat::Rat;
use crate::sector::{
    dirichlet_check, in_dk, neumann_check, neumann_safe_check, sobolev_index, SectorCheck,
};
use crate::space::{DomainCtx, SpaceParam};
use crate::trace::{
    anchors, AbortReason, BootstrapTrace, FigureCase, ReasonCode, RejectReason, StepRule,
    TraceStep, Verdict,
};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub eps: Rat,
    pub max_rounds: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            eps: Rat::new(1, 64).expect("nonzero denominator"),
            max_rounds: 10_000,
        }
    }
}

impl BootstrapConfig {
    pub fn with_eps(eps: Rat) -> Self {
        BootstrapConfig {
            eps,
            ..Self::default()
        }
    }
}

struct Builder {
    problem: Problem,
    ctx: DomainCtx,
    eps: Rat,
    start: SpaceParam,
    target: SpaceParam,
    steps: Vec<TraceStep>,
}

impl Builder {
    fn push(&mut self, rule: StepRule, input: Vec<SpaceParam>, output: SpaceParam, anchor: &str) {
        self.steps.push(TraceStep {
            index: self.steps.len(),
            rule,
            input,
            output,
            anchor: anchor.to_string(),
            figure_case: None,
            violation: None,
            at_critical: false,
        });
    }

    fn last_mut(&mut self) -> &mut TraceStep {
        self.steps.last_mut().expect("step pushed")
    }

    fn finish(self, verdict: Verdict) -> BootstrapTrace {
        BootstrapTrace {
            problem: self.problem,
            ctx: self.ctx,
            eps: self.eps,
            start: self.start,
            target: self.target,
            steps: self.steps,
            verdict,
        }
    }

    fn rejected(self, code: ReasonCode, detail: String) -> BootstrapTrace {
        self.finish(Verdict::Rejected(RejectReason { code, detail }))
    }
}

fn sector_check(problem: Problem, x: &SpaceParam, ctx: &DomainCtx) -> Result<SectorCheck, Error> {
    match problem {
        Problem::Dirichlet => dirichlet_check(x, ctx),
        Problem::Neumann => neumann_check(x, ctx),
    }
}

fn sector_detail(what: &str, x: &SpaceParam, check: &SectorCheck) -> String {
    format!(
        "{what} {x}: need s > {}{}",
        check.threshold,
        if check.on_boundary {
            " (boundary of sector)"
        } else {
            ""
        }
    )
}

/// Certify `start → target` for the Dirichlet problem.
pub fn bootstrap_dirichlet(
    start: &SpaceParam,
    target: &SpaceParam,
    ctx: &DomainCtx,
    eps: &Rat,
) -> Result<BootstrapTrace, Error> {
    bootstrap(
        Problem::Dirichlet,
        start,
        target,
        ctx,
        &BootstrapConfig::with_eps(eps.clone()),
    )
}

/// Certify `start → target` for the Neumann problem.
pub fn bootstrap_neumann(
    start: &SpaceParam,
    target: &SpaceParam,
    ctx: &DomainCtx,
    eps: &Rat,
) -> Result<BootstrapTrace, Error> {
    bootstrap(
        Problem::Neumann,
        start,
        target,
        ctx,
        &BootstrapConfig::with_eps(eps.clone()),
    )
}

/// Run the iteration with an explicit configuration.
pub fn bootstrap(
    problem: Problem,
    start: &SpaceParam,
    target: &SpaceParam,
    ctx: &DomainCtx,
    config: &BootstrapConfig,
) -> Result<BootstrapTrace, Error> {
    if !start.is_interior() || !target.is_interior() {
        return Err(Error::BoundarySpace);
    }
    if !config.eps.is_positive() || config.eps >= Rat::one() {
        return Err(Error::EpsOutOfRange);
    }

    let mut b = Builder {
        problem,
        ctx: ctx.clone(),
        eps: config.eps.clone(),
        start: start.clone(),
        target: target.clone(),
        steps: Vec::new(),
    };

    if start.scale() != target.scale() {
        return Ok(b.rejected(
            ReasonCode::ScaleMismatch,
            format!("start {start} and target {target} live on different scales"),
        ));
    }

    for (what, space) in [("start", start), ("target", target)] {
        let check = sector_check(problem, space, ctx)?;
        if !check.holds {
            let detail = sector_detail(what, space, &check);
            return Ok(b.rejected(ReasonCode::SectorViolation, detail));
        }
    }

    // The weak knowledge may already suffice.
    if embeds(start, target, ctx)?.holds {
        b.push(
            StepRule::Done,
            vec![start.clone()],
            target.clone(),
            anchors::DONE,
        );
        b.last_mut().figure_case = Some(FigureCase::Trivial);
        return Ok(b.finish(Verdict::Certified));
    }

    if problem == Problem::Neumann {
        // The defect term of the fixed-point identity is absorbed once; it
        // needs the class-2 sector on both ends and nothing else.
        for (what, space) in [("start", start), ("target", target)] {
            if !in_dk(space, 2, ctx)? {
                return Ok(b.rejected(
                    ReasonCode::ClassViolation,
                    format!("defect absorption needs the {what} {space} in the class-2 sector"),
                ));
            }
        }
        b.push(
            StepRule::DefectAbsorb,
            vec![start.clone()],
            target.clone(),
            anchors::DEFECT,
        );
    }

    let parametrix = match problem {
        Problem::Dirichlet => op_r_d(),
        Problem::Neumann => op_r_n(),
    };

    let mut current = start.clone();
    for _round in 0..config.max_rounds {
        let deficit = delta(&current, ctx, &config.eps)?;
        let b_std = match map_b_standard(&current, ctx, &config.eps) {
            Ok(space) => space,
            Err(Error::SectorViolation {
                threshold,
                on_boundary,
                ..
            }) => {
                let detail = sector_detail(
                    "intermediate",
                    &current,
                    &SectorCheck {
                        holds: false,
                        threshold,
                        on_boundary,
                    },
                );
                return Ok(b.rejected(ReasonCode::SectorViolation, detail));
            }
            Err(other) => return Err(other),
        };

        let gain = match apply_operator(parametrix, &b_std, ctx)? {
            Applied::Image(lifted) => {
                b.push(
                    StepRule::NonlinearGainStandard,
                    vec![current.clone()],
                    b_std.clone(),
                    anchors::GAIN_STANDARD,
                );
                b.last_mut().at_critical = deficit.at_critical;
                b.push(
                    StepRule::ParametrixApply,
                    vec![b_std],
                    lifted.clone(),
                    anchors::PARAMETRIX,
                );
                lifted
            }
            Applied::Violation(violation) => {
                if problem == Problem::Dirichlet {
                    // Unreachable inside the sector; report honestly if hit.
                    return Ok(b.rejected(ReasonCode::ClassViolation, violation.to_string()));
                }
                let safe = neumann_safe_check(&current, ctx)?;
                if !safe.holds {
                    let detail = format!(
                        "{}; sharp route unavailable: {}",
                        violation,
                        sector_detail("intermediate", &current, &safe)
                    );
                    return Ok(b.rejected(ReasonCode::SafeSubsectorViolation, detail));
                }
                let sharp = map_b_sharp(&current, ctx)?;
                b.push(
                    StepRule::NonlinearGainSharp,
                    vec![current.clone()],
                    sharp.clone(),
                    anchors::GAIN_SHARP,
                );
                b.last_mut().violation = Some(violation);
                let lifted = match apply_operator(op_r_n(), &sharp, ctx)? {
                    Applied::Image(lifted) => lifted,
                    Applied::Violation(v) => {
                        // Cannot happen in the safe subsector.
                        return Ok(b.rejected(ReasonCode::ClassViolation, v.to_string()));
                    }
                };
                b.push(
                    StepRule::ParametrixApply,
                    vec![sharp],
                    lifted.clone(),
                    anchors::PARAMETRIX,
                );
                let recovered = current.with_params(
                    current.s() + &deficit.value,
                    current.p().clone(),
                    current.q().clone(),
                )?;
                let emb = embeds(&lifted, &recovered, ctx)?;
                if !emb.holds {
                    return Ok(b.rejected(
                        ReasonCode::ClassViolation,
                        format!("recovery embedding {lifted} ↪ {recovered} failed"),
                    ));
                }
                b.push(
                    StepRule::Embed,
                    vec![lifted],
                    recovered.clone(),
                    anchors::EMBED,
                );
                b.last_mut().at_critical = deficit.at_critical;
                recovered
            }
        };

        if embeds(&gain, target, ctx)?.holds {
            b.push(StepRule::Done, vec![gain], target.clone(), anchors::DONE);
            b.last_mut().figure_case = Some(FigureCase::Trivial);
            return Ok(b.finish(Verdict::Certified));
        }

        let joined = join(&gain, target, ctx)?.space;
        let s_capped = joined.s() < gain.s();
        let idx_capped = sobolev_index(&joined, ctx)? < sobolev_index(&gain, ctx)?;
        b.push(
            StepRule::Join,
            vec![gain, target.clone()],
            joined.clone(),
            anchors::JOIN,
        );
        b.last_mut().figure_case = Some(match (s_capped, idx_capped) {
            (true, true) => FigureCase::Trivial,
            (true, false) => FigureCase::Sawtooth,
            (false, true) => FigureCase::Staircase,
            (false, false) => FigureCase::Mixed,
        });

        if joined == current {
            let rounds = b.steps.len();
            return Ok(b.finish(Verdict::Aborted(AbortReason {
                guard: "no progress: consecutive joins are identical".to_string(),
                rounds,
            })));
        }
        current = joined;
    }

    let rounds = config.max_rounds;
    Ok(b.finish(Verdict::Aborted(AbortReason {
        guard: format!("round limit {rounds} exhausted"),
        rounds,
    })))
}

/// Canonical data spaces reported alongside a regularity run: the interior
/// datum `f` and the boundary datum `φ` for the target parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub trace: BootstrapTrace,
    pub data_interior: SpaceParam,
    pub data_boundary: SpaceParam,
}

/// Validate both sector conditions and run the bootstrap; additionally
/// report the data columns for the target. Data-space validation is
/// advisory — the theorems presuppose data in the canonical columns, and
/// the certificate concerns the parameter logic.
pub fn regularity_theorem(
    problem: Problem,
    solution: &SpaceParam,
    data_target: &SpaceParam,
    ctx: &DomainCtx,
    eps: &Rat,
) -> Result<RegularityReport, Error> {
    let trace = bootstrap(
        problem,
        solution,
        data_target,
        ctx,
        &BootstrapConfig::with_eps(eps.clone()),
    )?;
    let (data_interior, data_boundary) = data_columns(problem, data_target)?;
    Ok(RegularityReport {
        trace,
        data_interior,
        data_boundary,
    })
}

//! Deterministic SVG rendering of bootstrap traces in the `(n/p, s)` plane.
//!
//! The picture follows the iteration diagrams: a dashed polyline for the
//! sector boundary, `×` markers for the nonlinear-gain spaces and the
//! endpoints, `∘` markers for intermediate joins, dotted vertical segments
//! for the gains, and solid arrows for embeddings and joins.
//!
//! Output is byte-deterministic: the data viewport `[0, n+1] × [-1,
//! max(s)+1]` is mapped to integer pixels through a single rational scale,
//! every coordinate is rounded exactly (half-up), and no floating point is
//! involved anywhere.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::green::Problem;
use crate::rat::Rat;
use crate::space::{DomainCtx, SpaceParam};
use crate::trace::{BootstrapTrace, StepRule};
use crate::Error;

/// Pixels per data unit.
const UNIT: i64 = 80;
const MARGIN: i64 = 50;

struct Frame {
    y_top: Rat,
    width: i64,
    height: i64,
}

impl Frame {
    fn for_trace(trace: &BootstrapTrace) -> Frame {
        let ctx = &trace.ctx;
        let coord = |space: &SpaceParam| (space.np(ctx), space.s().clone());
        let mut points = vec![coord(&trace.start), coord(&trace.target)];
        for step in &trace.steps {
            for space in step.input.iter().chain(std::iter::once(&step.output)) {
                points.push(coord(space));
            }
        }
        Frame::new(trace, &points)
    }

    fn new(trace: &BootstrapTrace, points: &[(Rat, Rat)]) -> Frame {
        let n = trace.ctx.n_rat();
        let mut y_top = Rat::int(2);
        for (_, s) in points {
            if *s > y_top {
                y_top = s.clone();
            }
        }
        // Right end of the sector boundary.
        let boundary_end = &n - Rat::one() + trace.ctx.delta_n2() / Rat::int(2);
        if boundary_end > y_top {
            y_top = boundary_end;
        }
        let y_top = y_top + Rat::one();
        let x_span = &n + Rat::one();
        let y_span = &y_top + Rat::one();
        let width = 2 * MARGIN + to_px(&(x_span * Rat::int(UNIT)));
        let height = 2 * MARGIN + to_px(&(y_span * Rat::int(UNIT)));
        Frame {
            y_top,
            width,
            height,
        }
    }

    fn x(&self, v: &Rat) -> i64 {
        MARGIN + to_px(&(v * &Rat::int(UNIT)))
    }

    fn y(&self, s: &Rat) -> i64 {
        MARGIN + to_px(&((&self.y_top - s) * Rat::int(UNIT)))
    }

    fn point(&self, ctx: &DomainCtx, space: &SpaceParam) -> (i64, i64) {
        (self.x(&space.np(ctx)), self.y(space.s()))
    }
}

fn to_px(v: &Rat) -> i64 {
    big_to_i64(&v.round_half_up())
}

fn big_to_i64(v: &BigInt) -> i64 {
    v.to_i64().expect("pixel coordinates fit in i64")
}

/// Vertices of the dashed sector boundary: the flat part of the threshold
/// and the slope-1 part, meeting at the corner, drawn across `[0, n]`.
fn sector_boundary(problem: Problem, ctx: &DomainCtx) -> Vec<(Rat, Rat)> {
    let n = ctx.n_rat();
    let intercept = Rat::one() - ctx.delta_n2() / Rat::int(2); // s = x - intercept
    match problem {
        Problem::Dirichlet => {
            // s = max(1/2, x - intercept): corner where x = 1/2 + intercept.
            let level = Rat::new(1, 2).unwrap();
            let corner_x = &level + &intercept;
            let mut v = vec![(Rat::zero(), level.clone())];
            if corner_x < n {
                v.push((corner_x, level));
                v.push((n.clone(), &n - &intercept));
            } else {
                v.push((n.clone(), level));
            }
            v
        }
        Problem::Neumann => {
            // s = max(x/n + 1, x - intercept): corner where
            // x (1 - 1/n) = 1 + intercept.
            let corner_x = (Rat::one() + &intercept) * &n / (&n - Rat::one());
            let trace_line = |x: &Rat| x / &n + Rat::one();
            let mut v = vec![(Rat::zero(), Rat::one())];
            if corner_x < n {
                v.push((corner_x.clone(), trace_line(&corner_x)));
                v.push((n.clone(), &n - &intercept));
            } else {
                v.push((n.clone(), trace_line(&n)));
            }
            v
        }
    }
}

fn sector_label(problem: Problem, ctx: &DomainCtx) -> String {
    let intercept = if ctx.n() == 2 { "1/2" } else { "1" };
    match problem {
        Problem::Dirichlet => format!("s = max(1/2, n/p - {intercept})"),
        Problem::Neumann => format!("s = max(1/p + 1, n/p - {intercept})"),
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Marker {
    Cross,
    Circle,
}

/// Render a trace to SVG text. Identical traces produce identical bytes.
pub fn render_trace(trace: &BootstrapTrace) -> Result<String, Error> {
    let ctx = &trace.ctx;
    for step in &trace.steps {
        for space in step.input.iter().chain(std::iter::once(&step.output)) {
            if !space.is_interior() {
                return Err(Error::InvalidTrace(format!(
                    "boundary space {space} cannot be placed in the (n/p, s) plane"
                )));
            }
        }
    }

    let frame = Frame::for_trace(trace);

    let mut markers: BTreeSet<(i64, i64, Marker)> = BTreeSet::new();
    let mut dotted: Vec<((i64, i64), (i64, i64))> = Vec::new();
    let mut arrows: Vec<((i64, i64), (i64, i64))> = Vec::new();

    markers.insert(put(frame.point(ctx, &trace.start), Marker::Cross));
    markers.insert(put(frame.point(ctx, &trace.target), Marker::Cross));

    let mut round_base: Option<(i64, i64)> = None;
    for step in &trace.steps {
        let from = frame.point(ctx, &step.input[0]);
        let to = frame.point(ctx, &step.output);
        match step.rule {
            StepRule::NonlinearGainStandard | StepRule::NonlinearGainSharp => {
                round_base = Some(from);
            }
            StepRule::ParametrixApply => {
                let base = round_base.take().unwrap_or(from);
                if base != to {
                    dotted.push((base, to));
                }
                markers.insert(put(to, Marker::Cross));
            }
            StepRule::Embed => {
                if from != to {
                    arrows.push((from, to));
                }
                markers.insert(put(to, Marker::Cross));
            }
            StepRule::Join => {
                if from != to {
                    arrows.push((from, to));
                }
                markers.insert(put(to, Marker::Circle));
            }
            StepRule::Done => {
                if from != to {
                    arrows.push((from, to));
                }
            }
            StepRule::DefectAbsorb => {}
        }
    }

    let mut out = String::new();
    let w = frame.width;
    let h = frame.height;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="black"/></marker></defs>"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();

    // Axes through the data origin.
    let ox = frame.x(&Rat::zero());
    let oy = frame.y(&Rat::zero());
    let top = frame.y(&frame.y_top.clone());
    let right = frame.x(&(ctx.n_rat() + Rat::one()));
    writeln!(
        out,
        r#"<line x1="{ox}" y1="{}" x2="{ox}" y2="{top}" stroke="black" stroke-width="2" marker-end="url(#arrow)"/>"#,
        h - MARGIN / 2
    )
    .unwrap();
    writeln!(
        out,
        r#"<line x1="{}" y1="{oy}" x2="{right}" y2="{oy}" stroke="black" stroke-width="2" marker-end="url(#arrow)"/>"#,
        MARGIN / 2
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="serif" font-size="16">s</text>"#,
        ox - 20,
        top + 10
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="serif" font-size="16">n/p</text>"#,
        right - 24,
        oy + 24
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="serif" font-size="14">0</text>"#,
        ox - 16,
        oy + 16
    )
    .unwrap();

    // Sector boundary.
    let boundary = sector_boundary(trace.problem, ctx);
    let pts: Vec<String> = boundary
        .iter()
        .map(|(x, s)| format!("{},{}", frame.x(x), frame.y(s)))
        .collect();
    writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1" stroke-dasharray="9,6"/>"#,
        pts.join(" ")
    )
    .unwrap();
    let (bx, bs) = boundary.last().expect("boundary has vertices");
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="serif" font-size="13">{}</text>"#,
        frame.x(bx) - 150,
        frame.y(bs) + 28,
        sector_label(trace.problem, ctx)
    )
    .unwrap();

    for ((x1, y1), (x2, y2)) in &dotted {
        writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="1" stroke-dasharray="2,4"/>"#
        )
        .unwrap();
    }
    for ((x1, y1), (x2, y2)) in &arrows {
        writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="1" marker-end="url(#arrow)"/>"#
        )
        .unwrap();
    }
    for (x, y, kind) in &markers {
        match kind {
            Marker::Cross => {
                writeln!(
                    out,
                    r#"<path class="mark-x" d="M{},{} L{},{} M{},{} L{},{}" stroke="black" stroke-width="1.5"/>"#,
                    x - 4,
                    y - 4,
                    x + 4,
                    y + 4,
                    x - 4,
                    y + 4,
                    x + 4,
                    y - 4
                )
                .unwrap();
            }
            Marker::Circle => {
                writeln!(
                    out,
                    r#"<circle class="mark-o" cx="{x}" cy="{y}" r="4" fill="none" stroke="black" stroke-width="1.5"/>"#
                )
                .unwrap();
            }
        }
    }

    // Endpoint labels.
    let (sx, sy) = frame.point(ctx, &trace.start);
    let (tx, ty) = frame.point(ctx, &trace.target);
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="serif" font-size="13">{}</text>"#,
        sx + 8,
        sy + 14,
        trace.start
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="serif" font-size="13">{}</text>"#,
        tx + 8,
        ty - 8,
        trace.target
    )
    .unwrap();

    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

fn put((x, y): (i64, i64), kind: Marker) -> (i64, i64, Marker) {
    (x, y, kind)
}

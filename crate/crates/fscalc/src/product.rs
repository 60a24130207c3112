//! Pointwise-multiplication estimates and the induced mapping of the
//! quadratic nonlinearity `B(v) = v·∂₁v`.
//!
//! The boundedness test for `π(·,·): X^{s0}_{p0,q0} ⊕ X^{s1}_{p1,q1} →
//! X^{s2}_{p2,q2}` consists of four conditions evaluated exactly; the tags
//! `prd6`..`prd9` and `q-clause` identify which of them fail. The same
//! numeric conditions are reused verbatim on the B-scale, where they are a
//! conservative choice (the sharp B-scale theory needs stricter control of
//! the sum exponents), and verdicts carry a flag saying so.
//!
//! For the nonlinearity there are two routes:
//!
//! * the standard one, `map_b_standard`, losing `2 - δ(s,p)` orders where
//!   `δ(s,p) = 1 + min(0, s - n/p)` is the deficit (with the convention
//!   `δ = 1 - ε` on the critical line `s = n/p` for a configured `ε`);
//! * the sharp one, `map_b_sharp`, which factors `B(·)` through smoothness
//!   `s - 1` at the enlarged exponent `n/p* = n/p + (n/p - s)₊`.
//!
//! The two routes are linked by an exact identity: `map_b_sharp(x)` equals
//! the optimal receiving space of the pair `(s,p,q) × (s-1,p,q)`, and for
//! `s < n/p` the sharp output satisfies `(s+1) - n/p* = s + δ(s,p) - n/p`,
//! which is what makes the recovery embedding of the Neumann iteration
//! close up.

use serde::{Deserialize, Serialize};

use crate::rat::{ExtExp, Rat};
use crate::sector::{dirichlet_check, sobolev_index};
use crate::space::{DomainCtx, Scale, SpaceParam};
use crate::Error;

/// The deficit `δ(s,p)` by which the nonlinearity beats the Laplacian.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deficit {
    pub value: Rat,
    /// The `ε`-convention fired on the critical line `s = n/p`.
    pub at_critical: bool,
}

fn require_eps(eps: &Rat) -> Result<(), Error> {
    if !eps.is_positive() || *eps >= Rat::one() {
        return Err(Error::EpsOutOfRange);
    }
    Ok(())
}

/// `δ(s,p) = 1 + min(0, s - n/p)`, except `δ(n/p, p) = 1 - eps`.
pub fn delta(x: &SpaceParam, ctx: &DomainCtx, eps: &Rat) -> Result<Deficit, Error> {
    require_eps(eps)?;
    let idx = sobolev_index(x, ctx)?;
    if idx.is_zero() {
        return Ok(Deficit {
            value: Rat::one() - eps,
            at_critical: true,
        });
    }
    Ok(Deficit {
        value: Rat::one() + idx.min(Rat::zero()),
        at_critical: false,
    })
}

/// Is the product defined at all: `s0 + s1 > max(0, n/p0 + n/p1 - n)`.
pub fn product_defined(a: &SpaceParam, b: &SpaceParam, ctx: &DomainCtx) -> Result<bool, Error> {
    if !a.is_interior() || !b.is_interior() {
        return Err(Error::BoundarySpace);
    }
    if a.scale() != b.scale() {
        return Err(Error::ScaleMismatch);
    }
    let lhs = a.s() + b.s();
    let rhs = Rat::zero().max(a.np(ctx) + b.np(ctx) - ctx.n_rat());
    Ok(lhs > rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductCondition {
    Prd6,
    Prd7,
    Prd8,
    Prd9,
    QClause,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductVerdict {
    pub defined: bool,
    pub bounded: bool,
    /// Violated boundedness conditions (empty iff bounded, for defined
    /// products).
    pub failed_conditions: Vec<ProductCondition>,
    /// The numeric conditions were applied to B-scale spaces, where they
    /// are conservative.
    pub b_scale_conservative: bool,
}

/// Evaluate boundedness of `π(·,·)` from `a ⊕ b` into `target`.
///
/// The smoothness condition is applied in its relaxed form: `s2 <=
/// min(s0, s1)` is admitted provided `q2 >= q_j` for every factor attaining
/// the minimum. The two exceptional equality conditions are checked
/// literally and reported as `prd8`/`prd9`.
pub fn product_bounded(
    a: &SpaceParam,
    b: &SpaceParam,
    target: &SpaceParam,
    ctx: &DomainCtx,
) -> Result<ProductVerdict, Error> {
    let defined = product_defined(a, b, ctx)?;
    if !target.is_interior() {
        return Err(Error::BoundarySpace);
    }
    if target.scale() != a.scale() {
        return Err(Error::ScaleMismatch);
    }
    let b_scale_conservative = a.scale() == Scale::B;
    if !defined {
        return Ok(ProductVerdict {
            defined: false,
            bounded: false,
            failed_conditions: Vec::new(),
            b_scale_conservative,
        });
    }

    let mut failed = Vec::new();
    let s_min = a.s().min(b.s()).clone();
    let idx_a = sobolev_index(a, ctx)?;
    let idx_b = sobolev_index(b, ctx)?;
    let idx_t = sobolev_index(target, ctx)?;

    // Smoothness: s2 < min(s0, s1), relaxed to <= under the q-clause.
    if *target.s() > s_min {
        failed.push(ProductCondition::Prd6);
    } else if *target.s() == s_min {
        let q_ok = (target.s() != a.s() || target.q() >= a.q())
            && (target.s() != b.s() || target.q() >= b.q());
        if !q_ok {
            failed.push(ProductCondition::QClause);
        }
    }

    // Sobolev index: idx2 <= min(idx0, idx1, idx0 + idx1).
    let idx_bound = idx_a.clone().min(idx_b.clone()).min(&idx_a + &idx_b);
    if idx_t > idx_bound {
        failed.push(ProductCondition::Prd7);
    }

    // Exceptional equalities bind unless the opposite factor has p <= 1.
    let one = Rat::one();
    if idx_t == idx_a && *b.s() == b.np(ctx) && *b.p().recip() < one {
        failed.push(ProductCondition::Prd8);
    }
    if idx_t == idx_b && *a.s() == a.np(ctx) && *a.p().recip() < one {
        failed.push(ProductCondition::Prd9);
    }

    Ok(ProductVerdict {
        defined: true,
        bounded: failed.is_empty(),
        failed_conditions: failed,
        b_scale_conservative,
    })
}

/// The optimal receiving exponent `p*` at smoothness `min(s0, s1)`:
/// with the factors ordered so `s0 >= s1`,
/// `n/p* = n/p1 + (s0 - n/p0)₋ + (s1 - n/p1 - (s0 - n/p0)₊)₊`.
pub fn p_star(a: &SpaceParam, b: &SpaceParam, ctx: &DomainCtx) -> Result<ExtExp, Error> {
    if !product_defined(a, b, ctx)? {
        return Err(Error::ProductUndefined);
    }
    let (hi, lo) = if a.s() >= b.s() { (a, b) } else { (b, a) };
    let idx_hi = sobolev_index(hi, ctx)?;
    let idx_lo = sobolev_index(lo, ctx)?;
    let np_star = lo.np(ctx) + idx_hi.neg_part() + (idx_lo - idx_hi.pos_part()).pos_part();
    ExtExp::from_recip(np_star / ctx.n_rat())
}

/// The optimal receiving space `(min(s0,s1), p*, q)` with `q` taken from
/// the factor attaining the minimal smoothness (the max of both on ties).
pub fn optimal_target(
    a: &SpaceParam,
    b: &SpaceParam,
    ctx: &DomainCtx,
) -> Result<SpaceParam, Error> {
    let p = p_star(a, b, ctx)?;
    let s = a.s().min(b.s()).clone();
    let q = if a.s() == b.s() {
        a.q().max(b.q()).clone()
    } else if a.s() < b.s() {
        a.q().clone()
    } else {
        b.q().clone()
    };
    SpaceParam::interior(a.scale(), s, p, q)
}

fn require_dirichlet(x: &SpaceParam, ctx: &DomainCtx) -> Result<(), Error> {
    let check = dirichlet_check(x, ctx)?;
    if !check.holds {
        return Err(Error::SectorViolation {
            what: format!("nonlinearity on {x}"),
            threshold: check.threshold,
            on_boundary: check.on_boundary,
        });
    }
    Ok(())
}

/// Standard route: `B(·)` maps `X^s_{p,q}` into `X^{s-2+δ(s,p)}_{p,q}`.
pub fn map_b_standard(x: &SpaceParam, ctx: &DomainCtx, eps: &Rat) -> Result<SpaceParam, Error> {
    require_dirichlet(x, ctx)?;
    let d = delta(x, ctx, eps)?;
    x.with_params(x.s() - Rat::int(2) + d.value, x.p().clone(), x.q().clone())
}

/// Sharp route: `B(·)` maps `X^s_{p,q}` into `X^{s-1}_{p*,q}` with
/// `n/p* = n/p + (n/p - s)₊`.
pub fn map_b_sharp(x: &SpaceParam, ctx: &DomainCtx) -> Result<SpaceParam, Error> {
    require_dirichlet(x, ctx)?;
    let np = x.np(ctx);
    let np_star = &np + (np.clone() - x.s()).pos_part();
    let p = ExtExp::from_recip(np_star / ctx.n_rat())?;
    x.with_params(x.s() - Rat::one(), p, x.q().clone())
}

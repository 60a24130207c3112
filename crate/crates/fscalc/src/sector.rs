//! Admissibility sectors and classical-space identification.
//!
//! All sector conditions are strict inequalities of the form
//! `s > threshold(1/p, n)`; equality is rejected and reported as lying on
//! the boundary of the sector, so that callers can surface a distinct
//! diagnostic.

use crate::rat::Rat;
use crate::space::{DomainCtx, Location, Scale, SpaceParam};
use crate::Error;

/// Outcome of a strict sector test, carrying the exact threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorCheck {
    pub holds: bool,
    pub threshold: Rat,
    /// `s == threshold` exactly: the rejected equality case.
    pub on_boundary: bool,
}

fn strict(s: &Rat, threshold: Rat) -> SectorCheck {
    SectorCheck {
        holds: *s > threshold,
        on_boundary: *s == threshold,
        threshold,
    }
}

/// The Sobolev index `s - n/p` of an interior space.
pub fn sobolev_index(x: &SpaceParam, ctx: &DomainCtx) -> Result<Rat, Error> {
    if !x.is_interior() {
        return Err(Error::BoundaryIndex);
    }
    Ok(x.s() - x.np(ctx))
}

/// Sobolev index with the (n-1)-dimensional convention for boundary spaces.
pub fn sobolev_index_boundary(x: &SpaceParam, ctx: &DomainCtx) -> Rat {
    match x.location() {
        Location::Interior => x.s() - x.np(ctx),
        Location::Boundary => {
            let dim = Rat::from(ctx.n()) - Rat::one();
            x.s() - dim * x.p().recip()
        }
    }
}

/// `max(1/p - 1, n/p - n)`: the broken line entering every class threshold.
pub(crate) fn class_break(x: &SpaceParam, ctx: &DomainCtx) -> Rat {
    let rp = x.p().recip();
    let a = rp - Rat::one();
    let b = x.np(ctx) - ctx.n_rat();
    a.max(b)
}

/// Threshold of the class-`k` sector `D_k`.
pub fn dk_threshold(x: &SpaceParam, k: i64, ctx: &DomainCtx) -> Rat {
    Rat::int(k) + class_break(x, ctx)
}

/// Strict test for membership in `D_k`: `s > k + max(1/p - 1, n/p - n)`.
pub fn dk_check(x: &SpaceParam, k: i64, ctx: &DomainCtx) -> Result<SectorCheck, Error> {
    if !x.is_interior() {
        return Err(Error::BoundarySpace);
    }
    Ok(strict(x.s(), dk_threshold(x, k, ctx)))
}

pub fn in_dk(x: &SpaceParam, k: i64, ctx: &DomainCtx) -> Result<bool, Error> {
    Ok(dk_check(x, k, ctx)?.holds)
}

fn slope_term(x: &SpaceParam, ctx: &DomainCtx) -> Rat {
    // n/p - 1 + δ_{n2}/2
    x.np(ctx) - Rat::one() + ctx.delta_n2() / Rat::int(2)
}

/// Dirichlet admissibility: `s > max(1/2, n/p - 1 + δ_{n2}/2)`.
pub fn dirichlet_check(x: &SpaceParam, ctx: &DomainCtx) -> Result<SectorCheck, Error> {
    if !x.is_interior() {
        return Err(Error::BoundarySpace);
    }
    let threshold = Rat::new(1, 2).unwrap().max(slope_term(x, ctx));
    Ok(strict(x.s(), threshold))
}

pub fn dirichlet_sector(x: &SpaceParam, ctx: &DomainCtx) -> Result<bool, Error> {
    Ok(dirichlet_check(x, ctx)?.holds)
}

/// Neumann admissibility: `s > max(1/p + 1, n/p - 1 + δ_{n2}/2)`.
pub fn neumann_check(x: &SpaceParam, ctx: &DomainCtx) -> Result<SectorCheck, Error> {
    if !x.is_interior() {
        return Err(Error::BoundarySpace);
    }
    let trace_term = x.p().recip() + Rat::one();
    let threshold = trace_term.max(slope_term(x, ctx));
    Ok(strict(x.s(), threshold))
}

pub fn neumann_sector(x: &SpaceParam, ctx: &DomainCtx) -> Result<bool, Error> {
    Ok(neumann_check(x, ctx)?.holds)
}

/// The p-independent Neumann subsector `s > max(1, n/p - 1 + δ_{n2}/2)`,
/// stable under the intermediate parameters of the iteration; inside it the
/// sharp nonlinearity route is always available.
pub fn neumann_safe_check(x: &SpaceParam, ctx: &DomainCtx) -> Result<SectorCheck, Error> {
    if !x.is_interior() {
        return Err(Error::BoundarySpace);
    }
    let threshold = Rat::one().max(slope_term(x, ctx));
    Ok(strict(x.s(), threshold))
}

pub fn neumann_safe_subsector(x: &SpaceParam, ctx: &DomainCtx) -> Result<bool, Error> {
    Ok(neumann_safe_check(x, ctx)?.holds)
}

/// Wrap a sub- or superscript in braces when it is more than one character,
/// TeX style: `H^1_3` but `C^{3/2}_*`.
fn script(r: &Rat) -> String {
    let text = r.to_string();
    if text.len() > 1 {
        format!("{{{text}}}")
    } else {
        text
    }
}

/// Classical name of a space when one of the standard identifications
/// applies:
///
/// * `B^s_{2,2} = F^s_{2,2} = H^s` (the usual Sobolev space; `H^0 = L_2`);
/// * `B^s_{inf,inf} = C^s_*` for `s > 0` (Hölder-Zygmund);
/// * `B^s_{p,p} = W^s_p` for non-integer `s > 0`, `1 < p < inf`
///   (Sobolev-Slobodetskii);
/// * `F^s_{p,2} = H^s_p` for `1 < p < inf` (Bessel potentials);
/// * `F^0_{p,2} = h_p` (local Hardy).
pub fn identify_classical(x: &SpaceParam) -> Option<String> {
    let half = Rat::new(1, 2).unwrap();
    let p_recip = x.p().recip();
    let q_recip = x.q().recip();

    // p = q = 2: both scales coincide with the Sobolev space H^s.
    if *p_recip == half && *q_recip == half {
        let mut name = format!("H^{}", script(x.s()));
        if x.s().is_zero() {
            name.push_str(" = L_2");
        }
        return Some(name);
    }
    match x.scale() {
        Scale::B => {
            if x.p().is_infinite() && x.q().is_infinite() && x.s().is_positive() {
                return Some(format!("C^{}_*", script(x.s())));
            }
            if p_recip == q_recip
                && !x.p().is_infinite()
                && p_recip < &Rat::one()
                && x.s().is_positive()
                && !x.s().is_integer()
            {
                let p = x.p().value().expect("finite p");
                return Some(format!("W^{}_{}", script(x.s()), script(&p)));
            }
        }
        Scale::F => {
            if *q_recip == half && *p_recip < Rat::one() && p_recip.is_positive() {
                let p = x.p().value().expect("finite p");
                return Some(format!("H^{}_{}", script(x.s()), script(&p)));
            }
            if *q_recip == half && x.s().is_zero() && p_recip.is_positive() {
                let p = x.p().value().expect("finite p");
                return Some(format!("h_{}", script(&p)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceParam;

    fn sp(text: &str) -> SpaceParam {
        text.parse().unwrap()
    }

    fn ctx(n: u32) -> DomainCtx {
        DomainCtx::simple(n).unwrap()
    }

    #[test]
    fn sobolev_index_values() {
        assert_eq!(
            sobolev_index(&sp("F:2,2,2"), &ctx(3)).unwrap(),
            Rat::new(1, 2).unwrap()
        );
        assert_eq!(
            sobolev_index(&sp("B:1,inf,inf"), &ctx(2)).unwrap(),
            Rat::one()
        );
        assert_eq!(sobolev_index(&sp("B:1,2,2"), &ctx(2)).unwrap(), Rat::zero());
    }

    #[test]
    fn sobolev_index_boundary_opt_in() {
        let b = sp("B:1,2,2(Γ)");
        assert_eq!(
            sobolev_index(&b, &ctx(3)).unwrap_err(),
            Error::BoundaryIndex
        );
        assert_eq!(sobolev_index_boundary(&b, &ctx(3)), Rat::zero());
    }

    #[test]
    fn dk_examples() {
        let c3 = ctx(3);
        let check = dk_check(&sp("F:2,2,2"), 1, &c3).unwrap();
        assert!(check.holds);
        assert_eq!(check.threshold, Rat::new(1, 2).unwrap());

        let check = dk_check(&sp("F:1/2,2,2"), 1, &c3).unwrap();
        assert!(!check.holds);
        assert!(check.on_boundary);

        // k = s always leaves threshold s - 1/2 < s when p = q = 2.
        for s in [-3i64, 0, 2, 5] {
            let x = SpaceParam::interior(
                Scale::F,
                Rat::int(s),
                crate::rat::ExtExp::int(2).unwrap(),
                crate::rat::ExtExp::int(2).unwrap(),
            )
            .unwrap();
            assert!(in_dk(&x, s, &c3).unwrap());
        }
    }

    #[test]
    fn dirichlet_examples() {
        assert!(dirichlet_sector(&sp("F:1,2,2"), &ctx(2)).unwrap());
        let check = dirichlet_check(&sp("F:1/2,2,2"), &ctx(3)).unwrap();
        assert!(!check.holds && check.on_boundary);
        assert!(dirichlet_sector(&sp("B:3,1,1"), &ctx(3)).unwrap());
        assert_eq!(
            dirichlet_check(&sp("B:3,1,1"), &ctx(3)).unwrap().threshold,
            Rat::int(2)
        );
    }

    #[test]
    fn neumann_examples() {
        assert!(neumann_sector(&sp("F:2,2,2"), &ctx(3)).unwrap());
        let check = neumann_check(&sp("F:3/2,2,2"), &ctx(3)).unwrap();
        assert!(!check.holds && check.on_boundary);
        assert!(neumann_sector(&sp("F:5/4,8,2"), &ctx(3)).unwrap());
        assert_eq!(
            neumann_check(&sp("F:5/4,8,2"), &ctx(3)).unwrap().threshold,
            Rat::new(9, 8).unwrap()
        );
    }

    #[test]
    fn neumann_safe_examples() {
        assert!(neumann_safe_subsector(&sp("F:2,2,2"), &ctx(3)).unwrap());
        let check = neumann_safe_check(&sp("F:1,2,2"), &ctx(2)).unwrap();
        assert!(!check.holds && check.on_boundary);
        assert!(neumann_safe_subsector(&sp("F:9/8,4,2"), &ctx(3)).unwrap());
    }

    #[test]
    fn classical_names() {
        assert_eq!(
            identify_classical(&sp("B:3/2,inf,inf")).as_deref(),
            Some("C^{3/2}_*")
        );
        assert_eq!(
            identify_classical(&sp("F:0,2,2")).as_deref(),
            Some("H^0 = L_2")
        );
        assert_eq!(identify_classical(&sp("F:1,3,2")).as_deref(), Some("H^1_3"));
        assert_eq!(
            identify_classical(&sp("B:5/2,3,3")).as_deref(),
            Some("W^{5/2}_3")
        );
        assert_eq!(identify_classical(&sp("F:0,1,2")).as_deref(), Some("h_1"));
        assert_eq!(
            identify_classical(&sp("B:2,inf,inf")).as_deref(),
            Some("C^2_*")
        );
        // No identification: B with p = q but integer s, or q off the grid.
        assert_eq!(identify_classical(&sp("B:2,3,3")), None);
        assert_eq!(identify_classical(&sp("F:1,3,4")), None);
        assert_eq!(identify_classical(&sp("B:-1,inf,inf")), None);
    }

    #[test]
    fn coincidence_at_p_q_2() {
        // For p = q = 2 both scales must produce the same name.
        assert_eq!(
            identify_classical(&sp("B:7/3,2,2")),
            identify_classical(&sp("F:7/3,2,2"))
        );
    }

    #[test]
    fn boundary_space_rejected_by_sectors() {
        let b = sp("B:1,2,2(Γ)");
        assert!(dk_check(&b, 1, &ctx(3)).is_err());
        assert!(dirichlet_check(&b, &ctx(3)).is_err());
        assert!(neumann_check(&b, &ctx(3)).is_err());
    }
}

//! Space parameters, domain context, and the space-literal grammar.
//!
//! A [`SpaceParam`] names `B^s_{p,q}` or `F^s_{p,q}` over the fixed bounded
//! domain (interior) or over its boundary. The literal grammar used by the
//! CLI and the trace JSON is
//!
//! ```text
//! <scale>:<s>,<p>,<q>         e.g.  F:5/2,3,2    B:3/2,inf,inf
//! ```
//!
//! with rationals written `a/b` or as integers and `inf` for an infinite
//! exponent. Boundary spaces carry a trailing `(Γ)` (accepted on input as
//! `(Γ)` or `(Gamma)`).

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::rat::{ExtExp, Rat};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scale {
    B,
    F,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::B => write!(f, "B"),
            Scale::F => write!(f, "F"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
}

/// A point `(scale, s, p, q)` naming one space of the B/F families.
///
/// Invariants enforced at construction: the F-scale requires `p < inf`, and
/// boundary spaces are always B-scale (the boundary images of the calculus
/// are Besov spaces).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpaceParam {
    scale: Scale,
    location: Location,
    s: Rat,
    p: ExtExp,
    q: ExtExp,
}

impl SpaceParam {
    pub fn interior(scale: Scale, s: Rat, p: ExtExp, q: ExtExp) -> Result<Self, Error> {
        if scale == Scale::F && p.is_infinite() {
            return Err(Error::FScaleInfiniteP);
        }
        Ok(SpaceParam {
            scale,
            location: Location::Interior,
            s,
            p,
            q,
        })
    }

    /// A boundary space `B^s_{p,q}(Γ)`.
    pub fn boundary(s: Rat, p: ExtExp, q: ExtExp) -> Self {
        SpaceParam {
            scale: Scale::B,
            location: Location::Boundary,
            s,
            p,
            q,
        }
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn location(&self) -> Location {
        self.location
    }

    pub fn is_interior(&self) -> bool {
        self.location == Location::Interior
    }

    pub fn s(&self) -> &Rat {
        &self.s
    }

    pub fn p(&self) -> &ExtExp {
        &self.p
    }

    pub fn q(&self) -> &ExtExp {
        &self.q
    }

    /// `n/p`, the quantity every sector formula is written in.
    pub fn np(&self, ctx: &DomainCtx) -> Rat {
        ctx.n_rat() * self.p.recip()
    }

    /// Same space with a different smoothness.
    pub fn with_s(&self, s: Rat) -> SpaceParam {
        let mut out = self.clone();
        out.s = s;
        out
    }

    /// Same location/scale with all three parameters replaced.
    pub fn with_params(&self, s: Rat, p: ExtExp, q: ExtExp) -> Result<SpaceParam, Error> {
        match self.location {
            Location::Interior => SpaceParam::interior(self.scale, s, p, q),
            Location::Boundary => Ok(SpaceParam::boundary(s, p, q)),
        }
    }

    pub fn parse_literal(text: &str) -> Result<Self, Error> {
        text.parse()
    }
}

impl fmt::Display for SpaceParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{},{}", self.scale, self.s, self.p, self.q)?;
        if self.location == Location::Boundary {
            write!(f, "(Γ)")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SpaceParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for SpaceParam {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let original = text;
        let err = |reason: &str| Error::ParseSpace {
            text: original.to_string(),
            reason: reason.to_string(),
        };
        let mut body = text.trim();
        let mut boundary = false;
        for suffix in ["(Γ)", "(Gamma)"] {
            if let Some(stripped) = body.strip_suffix(suffix) {
                body = stripped.trim_end();
                boundary = true;
                break;
            }
        }
        let (scale, rest) = body
            .split_once(':')
            .ok_or_else(|| err("expected `<scale>:<s>,<p>,<q>`"))?;
        let scale = match scale.trim() {
            "B" => Scale::B,
            "F" => Scale::F,
            other => return Err(err(&format!("unknown scale `{other}` (expected B or F)"))),
        };
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(err("expected three comma-separated parameters s,p,q"));
        }
        let s: Rat = parts[0]
            .parse()
            .map_err(|_| err(&format!("bad smoothness `{}`", parts[0].trim())))?;
        let p: ExtExp = parts[1]
            .parse()
            .map_err(|_| err(&format!("bad exponent p `{}`", parts[1].trim())))?;
        let q: ExtExp = parts[2]
            .parse()
            .map_err(|_| err(&format!("bad exponent q `{}`", parts[2].trim())))?;
        if boundary {
            if scale == Scale::F {
                return Err(err("boundary spaces are B-scale"));
            }
            Ok(SpaceParam::boundary(s, p, q))
        } else {
            SpaceParam::interior(scale, s, p, q)
        }
    }
}

impl Serialize for SpaceParam {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SpaceParam {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

/// Geometric facts the calculus consumes: the dimension `n >= 2` of the
/// bounded domain, the number of boundary components, and connectedness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainCtx {
    n: u32,
    boundary_components: u32,
    connected: bool,
}

impl DomainCtx {
    pub fn new(n: u32, boundary_components: u32, connected: bool) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::DimensionTooSmall);
        }
        if boundary_components < 1 {
            return Err(Error::NoBoundaryComponents);
        }
        Ok(DomainCtx {
            n,
            boundary_components,
            connected,
        })
    }

    /// Connected domain with one boundary component.
    pub fn simple(n: u32) -> Result<Self, Error> {
        DomainCtx::new(n, 1, true)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn boundary_components(&self) -> u32 {
        self.boundary_components
    }

    pub fn connected(&self) -> bool {
        self.connected
    }

    pub fn n_rat(&self) -> Rat {
        Rat::from(self.n)
    }

    /// Kronecker `δ_{n2}`: 1 in dimension two, else 0.
    pub fn delta_n2(&self) -> Rat {
        if self.n == 2 {
            Rat::one()
        } else {
            Rat::zero()
        }
    }
}

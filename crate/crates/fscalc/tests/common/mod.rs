//! Shared helpers for the integration suites: a small deterministic RNG
//! (fixed seeds, identical streams on every platform) and exact-rational
//! samplers.

use fscalc::rat::{ExtExp, Rat};
use fscalc::space::{DomainCtx, Scale, SpaceParam};

pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len() as u64) as usize]
    }

    /// Uniform rational `lo + k/den` with `k` covering `[0, (hi-lo)*den]`.
    pub fn grid_rat(&mut self, lo: i64, hi: i64, den: i64) -> Rat {
        assert!(hi > lo && den > 0);
        let steps = ((hi - lo) * den) as u64;
        let k = self.below(steps + 1) as i64;
        Rat::int(lo) + Rat::new(k, den).unwrap()
    }

    /// Random rational in `[lo, hi]` with denominator up to `max_den`.
    pub fn rat_in(&mut self, lo: i64, hi: i64, max_den: i64) -> Rat {
        let den = 1 + self.below(max_den as u64) as i64;
        self.grid_rat(lo, hi, den)
    }
}

pub fn ctx(n: u32) -> DomainCtx {
    DomainCtx::simple(n).unwrap()
}

pub fn rat(text: &str) -> Rat {
    text.parse().unwrap()
}

pub fn sp(text: &str) -> SpaceParam {
    text.parse().unwrap()
}

pub fn exp_from_recip(recip: Rat) -> ExtExp {
    ExtExp::from_recip(recip).unwrap()
}

/// Random interior space with `s` in `[s_lo, s_hi]` and `n/p` in
/// `[0 or 1/den, np_hi]` (positive for the F-scale).
pub fn sample_interior(
    rng: &mut SplitMix64,
    scale: Scale,
    s_lo: i64,
    s_hi: i64,
    np_hi: i64,
    den: i64,
    ctx: &DomainCtx,
) -> SpaceParam {
    let s = rng.rat_in(s_lo, s_hi, den);
    let mut np = rng.rat_in(0, np_hi, den);
    if scale == Scale::F && np.is_zero() {
        np = Rat::new(1, den).unwrap();
    }
    let p = exp_from_recip(np / ctx.n_rat());
    let q = *rng.pick(&[1i64, 2, 3, 4, 0]);
    let q = if q == 0 {
        ExtExp::infinity()
    } else {
        ExtExp::int(q).unwrap()
    };
    SpaceParam::interior(scale, s, p, q).unwrap()
}

pub fn sample_scale(rng: &mut SplitMix64) -> Scale {
    if rng.below(2) == 0 {
        Scale::B
    } else {
        Scale::F
    }
}

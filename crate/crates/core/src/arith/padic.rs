//! Fixed-precision p-adic integers: residues modulo `p^K`.
//!
//! Every element carries its [`PrimeContext`]; mixing contexts is a logic
//! error and panics. Valuations are censored at `K`: a residue of zero only
//! says `v >= K`, and [`PadicValuation`] keeps that distinction visible.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::primes::require_prime;
use super::rational::{residue_mod, val_p, Rational, Valuation};
use super::ring::Ring;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    k: u32,
    modulus: u64,
}

impl PrimeContext {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        require_prime(p)?;
        if k == 0 {
            return Err(Error::ZeroPrecision);
        }
        let modulus = p
            .checked_pow(k)
            .filter(|m| *m < 1 << 63)
            .ok_or(Error::PrecisionTooLarge { p, k })?;
        Ok(PrimeContext { p, k, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    /// `p^K`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn with_precision(&self, k: u32) -> Result<Self> {
        PrimeContext::new(self.p, k)
    }

    pub fn zero(&self) -> PadicApprox {
        PadicApprox { residue: 0, ctx: *self }
    }

    pub fn one(&self) -> PadicApprox {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> PadicApprox {
        PadicApprox {
            residue: n.rem_euclid(self.modulus as i64) as u64,
            ctx: *self,
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> PadicApprox {
        let m = BigInt::from(self.modulus);
        let r = ((n % &m) + &m) % &m;
        PadicApprox { residue: r.to_u64().expect("reduced residue"), ctx: *self }
    }
}

/// Valuation of a residue known modulo `p^K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PadicValuation {
    Exact(u32),
    /// The residue vanishes modulo `p^K`; only `v >= K` is known.
    AtLeast(u32),
}

impl PadicValuation {
    /// Best known lower bound.
    pub fn lower_bound(self) -> u32 {
        match self {
            PadicValuation::Exact(v) | PadicValuation::AtLeast(v) => v,
        }
    }

    pub fn exact(self) -> Option<u32> {
        match self {
            PadicValuation::Exact(v) => Some(v),
            PadicValuation::AtLeast(_) => None,
        }
    }

    /// Is the valuation certainly `>= bound`? `None` when precision cannot tell.
    pub fn at_least(self, bound: u64) -> Option<bool> {
        match self {
            PadicValuation::Exact(v) => Some(v as u64 >= bound),
            PadicValuation::AtLeast(v) if v as u64 >= bound => Some(true),
            PadicValuation::AtLeast(_) => None,
        }
    }

    pub fn min(self, other: PadicValuation) -> PadicValuation {
        use PadicValuation::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Exact(a.min(b)),
            (Exact(a), AtLeast(b)) | (AtLeast(b), Exact(a)) => {
                if a <= b {
                    Exact(a)
                } else {
                    AtLeast(b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }
}

impl fmt::Display for PadicValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicValuation::Exact(v) => write!(f, "{v}"),
            PadicValuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Element of `Z/p^K`, read as a p-adic integer known to precision `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    residue: u64,
    ctx: PrimeContext,
}

impl PadicApprox {
    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn context(&self) -> PrimeContext {
        self.ctx
    }

    pub fn valuation(&self) -> PadicValuation {
        if self.residue == 0 {
            return PadicValuation::AtLeast(self.ctx.k);
        }
        let mut r = self.residue;
        let mut v = 0;
        while r % self.ctx.p == 0 {
            r /= self.ctx.p;
            v += 1;
        }
        PadicValuation::Exact(v)
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.ctx.p != 0
    }

    pub fn inv(&self) -> Result<PadicApprox> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let (m, a) = (self.ctx.modulus as i128, self.residue as i128);
        let (mut r0, mut r1, mut s0, mut s1) = (a, m, 1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(PadicApprox { residue: s0.rem_euclid(m) as u64, ctx: self.ctx })
    }

    /// Drop to a lower precision `k <= K`. Raising precision is refused.
    pub fn truncate(&self, k: u32) -> Result<PadicApprox> {
        if k > self.ctx.k {
            return Err(Error::PrecisionExhausted(format!(
                "cannot raise precision from {} to {k}",
                self.ctx.k
            )));
        }
        let ctx = self.ctx.with_precision(k)?;
        Ok(PadicApprox { residue: self.residue % ctx.modulus, ctx })
    }

    /// Smallest nonnegative integer representative.
    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.residue)
    }

    fn check(&self, rhs: &PadicApprox) {
        assert_eq!(self.ctx, rhs.ctx, "p-adic operands with different contexts");
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.ctx.p, self.ctx.k)
    }
}

impl Ring for PadicApprox {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
    fn is_zero(&self) -> bool {
        self.residue == 0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let s = (self.residue as u128 + rhs.residue as u128) % self.ctx.modulus as u128;
        PadicApprox { residue: s as u64, ctx: self.ctx }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let m = self.ctx.modulus as u128;
        let s = (self.residue as u128 + m - rhs.residue as u128) % m;
        PadicApprox { residue: s as u64, ctx: self.ctx }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let s = (self.residue as u128 * rhs.residue as u128) % self.ctx.modulus as u128;
        PadicApprox { residue: s as u64, ctx: self.ctx }
    }
    fn neg_ref(&self) -> Self {
        PadicApprox {
            residue: (self.ctx.modulus - self.residue) % self.ctx.modulus,
            ctx: self.ctx,
        }
    }
    fn from_u64_like(&self, n: u64) -> Self {
        PadicApprox { residue: n % self.ctx.modulus, ctx: self.ctx }
    }
}

/// Canonical image of `x` in `Z/p^K`; requires `v_p(x) >= 0`.
pub fn to_padic(x: &Rational, ctx: &PrimeContext) -> Result<PadicApprox> {
    if let Valuation::Finite(v) = val_p(x, ctx.p) {
        if v < 0 {
            return Err(Error::NegativeValuation(v));
        }
    }
    let r = residue_mod(x, &BigInt::from(ctx.modulus)).expect("denominator is a p-unit");
    Ok(PadicApprox { residue: r.to_u64().expect("reduced residue"), ctx: *ctx })
}

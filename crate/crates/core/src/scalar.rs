//! Enclosure arithmetic: an exact rational midpoint with an exact rational
//! error radius. Every operation returns an interval that contains the true
//! value, and results on exact inputs stay exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    /// The input interval spans an integer or half-integer so widely that the
    /// nearest-integer distance cannot be pinned below the width cap. The
    /// caller should refine precision and retry.
    #[error("ambiguous tie: enclosure width {width} exceeds cap {cap}")]
    AmbiguousTie { width: String, cap: String },
}

/// Width cap above which a distance enclosure that straddles a tie point is
/// rejected instead of widened: 2^-32.
pub fn default_width_cap() -> BigRational {
    rat::pow2(-32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreciseScalar {
    mid: BigRational,
    rad: BigRational,
}

impl PreciseScalar {
    pub fn new(mid: BigRational, rad: BigRational) -> Self {
        assert!(!rad.is_negative(), "radius must be nonnegative");
        PreciseScalar { mid, rad }
    }

    pub fn exact(v: BigRational) -> Self {
        PreciseScalar { mid: v, rad: BigRational::zero() }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Self::exact(BigRational::zero())
    }

    pub fn midpoint(&self) -> &BigRational {
        &self.mid
    }

    pub fn radius(&self) -> &BigRational {
        &self.rad
    }

    pub fn lo(&self) -> BigRational {
        &self.mid - &self.rad
    }

    pub fn hi(&self) -> BigRational {
        &self.mid + &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.mid.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        rat::to_f64(&self.mid)
    }

    pub fn add(&self, other: &Self) -> Self {
        PreciseScalar { mid: &self.mid + &other.mid, rad: &self.rad + &other.rad }
    }

    pub fn neg(&self) -> Self {
        PreciseScalar { mid: -&self.mid, rad: self.rad.clone() }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        PreciseScalar { mid: &self.mid * &k, rad: &self.rad * k.abs() }
    }

    /// Shift by an integer so that the midpoint lands in [0, 1). The distance
    /// to the nearest integer is invariant under this.
    pub fn reduce_mod_one(&self) -> Self {
        let n = rat::floor_int(&self.mid);
        PreciseScalar { mid: &self.mid - BigRational::from_integer(n), rad: self.rad.clone() }
    }

    /// Does the enclosure certainly lie strictly below the other one?
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi() < other.lo()
    }

    /// Enclosure of the distance to the nearest integer, always a subset of
    /// [0, 1/2]. Fails with `AmbiguousTie` when the interval straddles an
    /// integer or half-integer and the resulting enclosure would be wider
    /// than `width_cap`.
    pub fn nearest_int_distance(&self, width_cap: &BigRational) -> Result<PreciseScalar, NumericError> {
        let lo = self.lo();
        let hi = self.hi();
        let dist_lo = rat::dist_to_int(&lo);
        let dist_hi = rat::dist_to_int(&hi);
        let spans_int = rat::span_contains_int(&lo, &hi);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let spans_half = rat::span_contains_int(&(&lo - &half), &(&hi - &half));

        let out_lo = if spans_int { BigRational::zero() } else { dist_lo.clone().min(dist_hi.clone()) };
        let out_hi = if spans_half { half } else { dist_lo.max(dist_hi) };
        let width = &out_hi - &out_lo;
        if (spans_int || spans_half) && !self.rad.is_zero() && width > *width_cap {
            return Err(NumericError::AmbiguousTie {
                width: rat::decimal_string(&width, 40),
                cap: rat::decimal_string(width_cap, 40),
            });
        }
        let two = BigRational::from_integer(BigInt::from(2));
        Ok(PreciseScalar { mid: (&out_lo + &out_hi) / &two, rad: (&out_hi - &out_lo) / two })
    }
}

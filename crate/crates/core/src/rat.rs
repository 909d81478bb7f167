//! Small helpers on exact rationals used across the crate.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// 2^k as an exact rational, for any sign of `k`.
pub fn pow2(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Largest integer <= r.
pub fn floor_int(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Integer nearest to r; exact halves round up. Either choice of rounding a
/// half leaves the distance to the nearest integer at exactly 1/2.
pub fn round_nearest(r: &BigRational) -> BigInt {
    floor_int(&(r + BigRational::new(BigInt::one(), BigInt::from(2))))
}

/// Distance from r to the nearest integer, in [0, 1/2].
pub fn dist_to_int(r: &BigRational) -> BigRational {
    let n = round_nearest(r);
    (r - BigRational::from_integer(n)).abs()
}

/// True iff [lo, hi] contains an integer.
pub fn span_contains_int(lo: &BigRational, hi: &BigRational) -> bool {
    BigRational::from_integer(lo.ceil().to_integer()) <= *hi
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Render r as a plain decimal string with `digits` fractional digits
/// (round half away from zero), trailing zeros trimmed.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = BigInt::from(10u32).pow(digits);
    // round(|r| * 10^digits)
    let scaled = floor_int(&(&a * BigRational::from_integer(scale.clone()) + BigRational::new(BigInt::one(), BigInt::from(2))));
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let mut frac = format!("{:0width$}", frac_part, width = digits as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    let mut s = String::new();
    if neg && (!int_part.is_zero() || !frac.is_empty()) {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if !frac.is_empty() {
        s.push('.');
        s.push_str(&frac);
    }
    s
}

/// Parse a decimal literal like "-0.3125" or "2" into an exact rational.
/// Returns the value together with the number of fractional digits given.
pub fn parse_decimal(s: &str) -> Option<(BigRational, u32)> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_str, frac_str) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_str.chars().chain(frac_str.chars()).any(|c| !c.is_ascii_digit()) {
        return None;
    }
    if int_str.is_empty() && frac_str.is_empty() {
        return None;
    }
    let digits: String = format!("{}{}", int_str, frac_str);
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac_str.len() as u32);
    let mut v = BigRational::new(num, den);
    if neg {
        v = -v;
    }
    Some((v, frac_str.len() as u32))
}

/// Parse "p/q" or a decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else {
        parse_decimal(s).map(|(v, _)| v)
    }
}

/// Floor of the integer square root of n (n >= 0).
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(n.sign() != Sign::Minus);
    if n.is_zero() {
        return BigInt::zero();
    }
    let bits = n.bits();
    let mut x: BigInt = BigInt::one() << (bits / 2 + 1) as usize;
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_nearest_ties_up() {
        assert_eq!(round_nearest(&BigRational::new(BigInt::from(1), BigInt::from(2))), BigInt::from(1));
        assert_eq!(round_nearest(&BigRational::new(BigInt::from(-1), BigInt::from(2))), BigInt::from(0));
        assert_eq!(round_nearest(&big(3)), BigInt::from(3));
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist_to_int(&BigRational::new(BigInt::from(5), BigInt::from(4))), BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(dist_to_int(&BigRational::new(BigInt::from(1), BigInt::from(2))), BigRational::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn decimal_round_trip() {
        let (v, d) = parse_decimal("-12.0625").unwrap();
        assert_eq!(d, 4);
        assert_eq!(decimal_string(&v, 10), "-12.0625");
        assert_eq!(decimal_string(&big(5), 10), "5");
    }

    #[test]
    fn isqrt_small() {
        for n in 0u64..200 {
            let r = isqrt(&BigInt::from(n));
            let r2 = &r * &r;
            assert!(r2 <= BigInt::from(n));
            assert!((&r + 1u32) * (&r + 1u32) > BigInt::from(n));
        }
    }
}

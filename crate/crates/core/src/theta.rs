//! The pair Θ = (θ¹, θ²): construction, provenance, refinement and the
//! linear-form distance ‖m₁θ¹ + m₂θ²‖.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::rat;
use crate::scalar::{NumericError, PreciseScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("literal pair cannot be refined past its given digits ({available} bits available, {requested} requested)")]
    NotRefinable { available: u32, requested: u32 },
    #[error("refinement target {requested} not above current precision {current}")]
    NotAnUpgrade { current: u32, requested: u32 },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Exact rational components p1/q1, p2/q2.
    Rational { p1: i64, q1: i64, p2: i64, q2: i64 },
    /// Fractional parts of √d1 and √d2 (d non-square).
    Quadratic { d1: u64, d2: u64 },
    /// Seeded uniform binary streams; refinement extends the same stream.
    RandomDyadic { seed: u64 },
    /// θ¹ = Σ base^(-a_k) with a_1 = 1, a_(k+1) = ⌈λ a_k⌉; θ² = frac(√2).
    /// Produces qualitatively large ordinary exponents; no exact value claimed.
    Liouville { lambda_num: u64, lambda_den: u64, base: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    LiteralDecimal { dec1: String, dec2: String },
    Generator(GeneratorKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPair {
    theta1: PreciseScalar,
    theta2: PreciseScalar,
    precision_bits: u32,
    provenance: Provenance,
}

/// Default precision policy: 64 + 3·⌈log2 T⌉ bits for work up to height T.
pub fn default_precision_bits(t_max: u64) -> u32 {
    64 + 3 * (64 - t_max.max(2).next_power_of_two().leading_zeros() - 1)
}

impl ThetaPair {
    pub fn theta1(&self) -> &PreciseScalar {
        &self.theta1
    }

    pub fn theta2(&self) -> &PreciseScalar {
        &self.theta2
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// A pair given as decimal literals. The last printed digit bounds what is
    /// known: each component is an enclosure of width one unit in the last
    /// place, and such a pair cannot be refined.
    pub fn literal(dec1: &str, dec2: &str) -> Result<Self, ThetaError> {
        let comp = |s: &str| -> Result<(PreciseScalar, u32), ThetaError> {
            let (v, digits) = rat::parse_decimal(s)
                .ok_or_else(|| ThetaError::InvalidParams(format!("bad decimal literal {s:?}")))?;
            let ulp = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let mid = &v + &half * &ulp;
            Ok((PreciseScalar::new(mid, half * ulp).reduce_mod_one(), digits))
        };
        let (theta1, d1) = comp(dec1)?;
        let (theta2, d2) = comp(dec2)?;
        // 10^digits ~ 2^(3.32 digits); be conservative
        let bits = (3 * d1.min(d2)).max(1);
        Ok(ThetaPair {
            theta1,
            theta2,
            precision_bits: bits,
            provenance: Provenance::LiteralDecimal { dec1: dec1.to_string(), dec2: dec2.to_string() },
        })
    }

    /// Build a generator-backed pair at the requested precision.
    pub fn forge(kind: GeneratorKind, precision_bits: u32) -> Result<Self, ThetaError> {
        let (theta1, theta2) = generate(&kind, precision_bits)?;
        Ok(ThetaPair { theta1, theta2, precision_bits, provenance: Provenance::Generator(kind) })
    }

    /// Recompute the pair at a higher precision. Enclosures are nested: the
    /// refined interval lies inside every earlier one.
    pub fn refine(&self, target_bits: u32) -> Result<Self, ThetaError> {
        if target_bits <= self.precision_bits {
            return Err(ThetaError::NotAnUpgrade { current: self.precision_bits, requested: target_bits });
        }
        match &self.provenance {
            Provenance::LiteralDecimal { .. } => {
                Err(ThetaError::NotRefinable { available: self.precision_bits, requested: target_bits })
            }
            Provenance::Generator(kind) => Self::forge(kind.clone(), target_bits),
        }
    }

    /// Enclosure of ‖m₁θ¹ + m₂θ²‖.
    pub fn linear_form_distance(&self, m1: i64, m2: i64) -> Result<PreciseScalar, NumericError> {
        let s = self.theta1.mul_int(m1).add(&self.theta2.mul_int(m2));
        s.nearest_int_distance(&crate::scalar::default_width_cap())
    }
}

fn generate(kind: &GeneratorKind, bits: u32) -> Result<(PreciseScalar, PreciseScalar), ThetaError> {
    match kind {
        GeneratorKind::Rational { p1, q1, p2, q2 } => {
            if *q1 == 0 || *q2 == 0 {
                return Err(ThetaError::InvalidParams("zero denominator".into()));
            }
            Ok((
                PreciseScalar::from_ratio(*p1, *q1).reduce_mod_one(),
                PreciseScalar::from_ratio(*p2, *q2).reduce_mod_one(),
            ))
        }
        GeneratorKind::Quadratic { d1, d2 } => Ok((sqrt_fract(*d1, bits)?, sqrt_fract(*d2, bits)?)),
        GeneratorKind::RandomDyadic { seed } => {
            // one ChaCha stream per component so refining reads a longer
            // prefix of the same bit stream instead of shifted bytes
            let comp = |stream: u64| {
                let mut rng = ChaCha20Rng::seed_from_u64(*seed);
                rng.set_stream(stream);
                let nbytes = (bits as usize + 7) / 8;
                let mut buf = vec![0u8; nbytes];
                rng.fill_bytes(&mut buf);
                // keep exactly `bits` leading bits of the stream
                let excess = (nbytes * 8 - bits as usize) as u32;
                let n = BigInt::from_bytes_be(num_bigint::Sign::Plus, &buf) >> excess;
                enclosure_from_prefix(n, bits)
            };
            Ok((comp(1), comp(2)))
        }
        GeneratorKind::Liouville { lambda_num, lambda_den, base } => {
            if *lambda_den == 0 || lambda_num <= lambda_den {
                return Err(ThetaError::InvalidParams("lambda must be > 1".into()));
            }
            if *base < 2 {
                return Err(ThetaError::InvalidParams("base must be >= 2".into()));
            }
            Ok((liouville_sum(*lambda_num, *lambda_den, *base, bits), sqrt_fract(2, bits)?))
        }
    }
}

/// Enclosure [n, n+1]/2^bits written as midpoint ± half an ulp.
fn enclosure_from_prefix(n: BigInt, bits: u32) -> PreciseScalar {
    let den = BigInt::one() << (bits as usize + 1);
    let mid = BigRational::new((n << 1) + BigInt::one(), den);
    PreciseScalar::new(mid, rat::pow2(-(bits as i64) - 1))
}

/// Fractional part of √d as a radius-2^-(bits+1) enclosure.
fn sqrt_fract(d: u64, bits: u32) -> Result<PreciseScalar, ThetaError> {
    let root = rat::isqrt(&BigInt::from(d));
    if &root * &root == BigInt::from(d) {
        return Err(ThetaError::InvalidParams(format!("{d} is a perfect square")));
    }
    // isqrt(d * 4^bits) = s  =>  √d ∈ [s, s+1] / 2^bits
    let s = rat::isqrt(&(BigInt::from(d) << (2 * bits as usize)));
    let frac_num = &s - root * (BigInt::one() << bits as usize);
    Ok(enclosure_from_prefix(frac_num, bits))
}

fn liouville_sum(lnum: u64, lden: u64, base: u32, bits: u32) -> PreciseScalar {
    let lg_base = (base as f64).log2();
    let target = (bits as f64 + 2.0) / lg_base; // stop once base^-a_k is below 2^-(bits+2)
    let mut exps: Vec<BigInt> = vec![BigInt::one()];
    loop {
        let a = exps.last().unwrap();
        if a.to_f64().unwrap_or(f64::INFINITY) > target {
            break;
        }
        // ceil(lnum*a / lden)
        let next = (a * BigInt::from(lnum) + BigInt::from(lden - 1)).div_floor(&BigInt::from(lden));
        exps.push(next);
    }
    let tail_exp = exps.pop().unwrap();
    let mut sum = BigRational::zero();
    for a in &exps {
        let e = a.to_u32().expect("liouville exponent fits u32 at desk precision");
        sum += BigRational::new(BigInt::one(), BigInt::from(base).pow(e));
    }
    // tail majorization: Σ_{k>K} base^-a_k <= base^-a_(K+1) · base/(base-1)
    let te = tail_exp.to_u32().unwrap_or(u32::MAX).min(4 * (bits + 8));
    let tail = BigRational::new(BigInt::from(base), BigInt::from(base - 1))
        * BigRational::new(BigInt::one(), BigInt::from(base).pow(te));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    PreciseScalar::new(sum + &half * &tail, half * tail).reduce_mod_one()
}

/// Integer fixed-point view of a pair over a common denominator, the workhorse
/// representation for the enumeration engines: θ_i ≈ n_i / denom with
/// |θ_i − n_i/denom| ≤ err_num / denom.
#[derive(Debug, Clone)]
pub struct LinearFormTable {
    pub n1: BigInt,
    pub n2: BigInt,
    pub denom: BigInt,
    /// Midpoint error in numerator units (0 for exact pairs).
    pub err_num: BigInt,
}

impl LinearFormTable {
    pub fn build(pair: &ThetaPair) -> Self {
        let m1 = pair.theta1.midpoint();
        let m2 = pair.theta2.midpoint();
        let denom = m1.denom().lcm(m2.denom());
        let n1 = m1.numer() * (&denom / m1.denom());
        let n2 = m2.numer() * (&denom / m2.denom());
        let rad = pair.theta1.radius().max(pair.theta2.radius());
        let err_num = (rad * BigRational::from_integer(denom.clone())).ceil().to_integer();
        LinearFormTable { n1, n2, denom, err_num }
    }

    pub fn is_exact(&self) -> bool {
        self.err_num.is_zero()
    }

    /// (distance numerator, error numerator) for ‖m₁θ¹ + m₂θ²‖; the true
    /// value lies within err/denom of dist/denom.
    pub fn dist(&self, m1: i64, m2: i64) -> (BigInt, BigInt) {
        let s = (&self.n1 * m1 + &self.n2 * m2).mod_floor(&self.denom);
        let dist = (&self.denom - &s).min(s);
        let err = &self.err_num * (m1.unsigned_abs() + m2.unsigned_abs());
        (dist, err)
    }

    pub fn to_scalar(&self, dist: &BigInt, err: &BigInt) -> PreciseScalar {
        PreciseScalar::new(
            BigRational::new(dist.clone(), self.denom.clone()),
            BigRational::new(err.clone(), self.denom.clone()),
        )
    }

    /// u128 fast view, available when every intermediate fits: requires
    /// bits(denom) + bits(max |m|) + 2 ≤ 127.
    pub fn small(&self, max_abs_m: u64) -> Option<SmallTable> {
        let need = self.denom.bits() + (64 - max_abs_m.max(1).leading_zeros()) as u64 + 2;
        if need > 127 {
            return None;
        }
        Some(SmallTable {
            n1: self.n1.mod_floor(&self.denom).to_u128()?,
            n2: self.n2.mod_floor(&self.denom).to_u128()?,
            d: self.denom.to_u128()?,
            err: self.err_num.to_u128()?,
        })
    }
}

/// Same data as `LinearFormTable`, reduced into machine words.
#[derive(Debug, Clone, Copy)]
pub struct SmallTable {
    pub n1: u128,
    pub n2: u128,
    pub d: u128,
    pub err: u128,
}

impl SmallTable {
    #[inline]
    pub fn term(&self, n: u128, m: i64) -> u128 {
        if m >= 0 {
            (n * m as u128) % self.d
        } else {
            let t = (n * m.unsigned_abs() as u128) % self.d;
            if t == 0 {
                0
            } else {
                self.d - t
            }
        }
    }

    #[inline]
    pub fn dist_of_residue(&self, s: u128) -> u128 {
        s.min(self.d - s)
    }

    #[inline]
    pub fn dist(&self, m1: i64, m2: i64) -> u128 {
        let s = (self.term(self.n1, m1) + self.term(self.n2, m2)) % self.d;
        self.dist_of_residue(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::big;

    #[test]
    fn rational_pair_exact() {
        let pair = ThetaPair::forge(GeneratorKind::Rational { p1: 1, q1: 2, p2: 1, q2: 3 }, 64).unwrap();
        assert!(pair.theta1().is_exact());
        assert_eq!(pair.linear_form_distance(1, 1).unwrap(), PreciseScalar::from_ratio(1, 6));
        assert_eq!(pair.linear_form_distance(2, 3).unwrap(), PreciseScalar::zero());
        assert_eq!(pair.linear_form_distance(1, -1).unwrap(), PreciseScalar::from_ratio(1, 6));
    }

    #[test]
    fn quadratic_reference() {
        // enclosure of √2 - 1 must contain the value pinned by integer square
        // roots of 2·4^k, and radii shrink to <= 2^-bits
        let pair = ThetaPair::forge(GeneratorKind::Quadratic { d1: 2, d2: 3 }, 128).unwrap();
        let t = pair.theta1();
        assert!(*t.radius() <= rat::pow2(-128));
        let s = rat::isqrt(&(BigInt::from(2u32) << 400));
        let lo = BigRational::new(s.clone(), BigInt::one() << 200) - big(1);
        let hi = BigRational::new(s + BigInt::one(), BigInt::one() << 200) - big(1);
        assert!(t.lo() <= hi && lo <= t.hi());
    }

    #[test]
    fn perfect_square_rejected() {
        assert!(matches!(
            ThetaPair::forge(GeneratorKind::Quadratic { d1: 4, d2: 3 }, 64),
            Err(ThetaError::InvalidParams(_))
        ));
    }

    #[test]
    fn literal_not_refinable() {
        let pair = ThetaPair::literal("0.333", "0.25").unwrap();
        assert!(matches!(pair.refine(512), Err(ThetaError::NotRefinable { .. })));
    }

    #[test]
    fn refinement_is_nested() {
        for kind in [
            GeneratorKind::Quadratic { d1: 2, d2: 3 },
            GeneratorKind::RandomDyadic { seed: 7 },
            GeneratorKind::Liouville { lambda_num: 2, lambda_den: 1, base: 2 },
        ] {
            let coarse = ThetaPair::forge(kind, 64).unwrap();
            let fine = coarse.refine(256).unwrap();
            for (a, b) in [(coarse.theta1(), fine.theta1()), (coarse.theta2(), fine.theta2())] {
                assert!(a.lo() <= b.lo() && b.hi() <= a.hi(), "refined enclosure must nest");
                assert!(*b.radius() <= rat::pow2(-256));
            }
        }
    }

    #[test]
    fn random_dyadic_prefix_stable() {
        let a = ThetaPair::forge(GeneratorKind::RandomDyadic { seed: 1 }, 80).unwrap();
        let b = ThetaPair::forge(GeneratorKind::RandomDyadic { seed: 1 }, 80).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_table_matches_big() {
        let pair = ThetaPair::forge(GeneratorKind::RandomDyadic { seed: 3 }, 96).unwrap();
        let table = LinearFormTable::build(&pair);
        let small = table.small(1000).expect("fits u128");
        for (m1, m2) in [(1i64, 0i64), (3, -7), (-1000, 999), (17, 17), (0, -5)] {
            let (d, _) = table.dist(m1, m2);
            assert_eq!(d.to_u128().unwrap(), small.dist(m1, m2));
        }
    }

    #[test]
    fn precision_policy() {
        assert_eq!(default_precision_bits(2000), 64 + 3 * 11);
        assert_eq!(default_precision_bits(10_000), 64 + 3 * 14);
    }
}

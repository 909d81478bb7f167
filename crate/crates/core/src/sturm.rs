//! Sturm chains over exact rational polynomials, used to certify that a
//! bisection bracket isolates the *largest* real root: count the roots in
//! the interval above the bracket and demand zero.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::rat;

/// Coefficients in ascending degree order; trailing zeros are permitted and
/// trimmed on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    pub coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(rat::big(0));
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| rat::big(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = rat::big(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::new(vec![rat::big(0)]);
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat::big(i as i64))
                .collect(),
        )
    }

    /// Remainder of self / divisor.
    fn rem(&self, divisor: &RatPoly) -> RatPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let d = divisor.degree();
        let lead = divisor.coeffs[d].clone();
        while r.len() > 1 && r.last().map_or(false, Zero::is_zero) {
            r.pop();
        }
        while r.len() - 1 >= d && !(r.len() == 1 && r[0].is_zero()) {
            let k = r.len() - 1 - d;
            let q = r.last().unwrap() / &lead;
            for i in 0..=d {
                let t = &q * &divisor.coeffs[i];
                r[k + i] = &r[k + i] - t;
            }
            while r.len() > 1 && r.last().map_or(false, Zero::is_zero) {
                r.pop();
            }
            if r.len() - 1 < d {
                break;
            }
        }
        RatPoly::new(r)
    }
}

/// p, p′, then each term the negated remainder of the previous two.
pub fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(RatPoly::new(r.coeffs.iter().map(|c| -c).collect()));
    }
    chain
}

fn sign_variations(chain: &[RatPoly], x: &BigRational) -> usize {
    let mut vars = 0;
    let mut prev: Option<bool> = None; // true = positive
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(ps) = prev {
            if ps != s {
                vars += 1;
            }
        }
        prev = Some(s);
    }
    vars
}

/// Number of distinct real roots in the half-open interval (a, b], a < b.
pub fn count_roots(p: &RatPoly, a: &BigRational, b: &BigRational) -> usize {
    assert!(a < b, "count_roots requires a < b");
    let chain = sturm_chain(p);
    sign_variations(&chain, a) - sign_variations(&chain, b)
}

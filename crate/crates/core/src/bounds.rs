//! Closed-form bounds on the positive-coefficient exponents in terms of
//! (ω, ω̂): admissibility, the 𝔄₁/𝔄₂ split, G(ω), the combined lower bound
//! for ω₊, the uniform bound for ω̂₊ and Thurnheer's bound in terms of ω*.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("argument outside the bound's domain: {0}")]
    DomainError(String),
    #[error("point is not admissible")]
    NotAdmissible,
}

/// A point (ω, ω̂); ω may be `f64::INFINITY` with limit semantics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPoint {
    pub omega: f64,
    pub omega_hat: f64,
}

impl ExponentPoint {
    pub fn new(omega: f64, omega_hat: f64) -> Self {
        ExponentPoint { omega, omega_hat }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionClass {
    NotAdmissible,
    A1,
    A2,
}

impl RegionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionClass::NotAdmissible => "not-admissible",
            RegionClass::A1 => "A1",
            RegionClass::A2 => "A2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// max(ω̂/(ω̂−1), ω̂−1+ω̂/ω): the combined lower bound for ω₊.
    pub schmidt_combined: f64,
    /// ω/(ω−1): the lower bound for ω̂₊.
    pub uniform_plus: f64,
    pub g_value: f64,
    /// ω̂ − 1 + ω̂/ω.
    pub ooa_value: f64,
    /// max(G(ω), ω̂−1+ω̂/ω).
    pub theorem2: f64,
    pub thurnheer: Option<f64>,
    pub region: RegionClass,
}

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// ω̂ ≥ 2 together with ω ≥ ω̂(ω̂−1).
pub fn jarnik_admissible(p: &ExponentPoint) -> bool {
    p.omega_hat >= 2.0 && p.omega >= p.omega_hat * (p.omega_hat - 1.0)
}

/// Classify into the closed cell A1 (2 ≤ ω̂ ≤ φ², ω above the threshold
/// ω̂(ω̂−1)/(3ω̂−ω̂²−1)) or its complement A2; boundary equalities go to A1.
/// The threshold denominator vanishes at ω̂ = φ², where A1 needs ω = +∞.
pub fn classify_region(p: &ExponentPoint) -> RegionClass {
    if !jarnik_admissible(p) {
        return RegionClass::NotAdmissible;
    }
    let wh = p.omega_hat;
    let phi_sq = golden_ratio() * golden_ratio();
    if wh > phi_sq {
        return RegionClass::A2;
    }
    let den = 3.0 * wh - wh * wh - 1.0;
    if den <= 0.0 {
        return if p.omega.is_infinite() { RegionClass::A1 } else { RegionClass::A2 };
    }
    if p.omega >= wh * (wh - 1.0) / den {
        RegionClass::A1
    } else {
        RegionClass::A2
    }
}

/// G(ω) = ½((ω+1)/ω + √(((ω+1)/ω)² + 4)); decreases from G(2) = 2 to φ.
pub fn g_func(omega: f64) -> Result<f64, BoundError> {
    if omega < 2.0 {
        return Err(BoundError::DomainError(format!("G requires omega >= 2, got {omega}")));
    }
    if omega.is_infinite() {
        return Ok(golden_ratio());
    }
    let r = (omega + 1.0) / omega;
    Ok(0.5 * (r + (r * r + 4.0).sqrt()))
}

/// max(ω̂/(ω̂−1), ω̂−1+ω̂/ω); with ω = +∞ the second branch degrades to ω̂−1.
pub fn schmidt_lower_bound(p: &ExponentPoint) -> Result<f64, BoundError> {
    if p.omega_hat <= 1.0 || p.omega <= 0.0 {
        return Err(BoundError::DomainError("requires omega_hat > 1 and omega > 0".into()));
    }
    Ok((p.omega_hat / (p.omega_hat - 1.0)).max(ooa(p)))
}

fn ooa(p: &ExponentPoint) -> f64 {
    if p.omega.is_infinite() {
        p.omega_hat - 1.0
    } else {
        p.omega_hat - 1.0 + p.omega_hat / p.omega
    }
}

/// ω̂₊ ≥ ω/(ω−1).
pub fn uniform_plus_bound(omega: f64) -> Result<f64, BoundError> {
    if omega <= 1.0 {
        return Err(BoundError::DomainError(format!("requires omega > 1, got {omega}")));
    }
    if omega.is_infinite() {
        return Ok(1.0);
    }
    Ok(omega / (omega - 1.0))
}

/// (ω*+1)/(4ω*) + √(((ω*+1)/(4ω*))² + 1), valid for 1/2 ≤ ω* ≤ 1.
pub fn thurnheer_bound(omega_star: f64) -> Result<f64, BoundError> {
    if !(0.5..=1.0).contains(&omega_star) {
        return Err(BoundError::DomainError(format!(
            "requires 1/2 <= omega_star <= 1, got {omega_star}"
        )));
    }
    let r = (omega_star + 1.0) / (4.0 * omega_star);
    Ok(r + (r * r + 1.0).sqrt())
}

/// ω₊ ≥ max(G(ω), ω̂−1+ω̂/ω) for admissible points, with the full report.
pub fn theorem2_bound(p: &ExponentPoint) -> Result<BoundReport, BoundError> {
    let region = classify_region(p);
    if region == RegionClass::NotAdmissible {
        return Err(BoundError::NotAdmissible);
    }
    let g_value = g_func(p.omega)?;
    let ooa_value = ooa(p);
    Ok(BoundReport {
        schmidt_combined: schmidt_lower_bound(p)?,
        uniform_plus: uniform_plus_bound(p.omega)?,
        g_value,
        ooa_value,
        theorem2: g_value.max(ooa_value),
        thurnheer: None,
        region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618033988749894848;

    #[test]
    fn golden_ratio_identities() {
        let phi = golden_ratio();
        assert!((phi - 1.6180339887).abs() < 1e-9);
        assert!((phi * phi - phi - 1.0).abs() < 1e-12);
        assert!((phi - (1.0 + 1.0 / phi)).abs() < 1e-12);
    }

    #[test]
    fn jarnik_examples() {
        assert!(jarnik_admissible(&ExponentPoint::new(2.0, 2.0)));
        assert!(jarnik_admissible(&ExponentPoint::new(2.5, 2.0)));
        // 2 < 2.5 * 1.5 = 3.75
        assert!(!jarnik_admissible(&ExponentPoint::new(2.0, 2.5)));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_region(&ExponentPoint::new(2.0, 2.0)), RegionClass::A1);
        assert_eq!(classify_region(&ExponentPoint::new(4.0, 2.0)), RegionClass::A1);
        assert_eq!(classify_region(&ExponentPoint::new(3.1103, 2.2302)), RegionClass::A2);
        assert_eq!(classify_region(&ExponentPoint::new(1.0, 2.5)), RegionClass::NotAdmissible);
        // at omega_hat = phi^2 the A1 threshold needs omega = +infinity
        let phi_sq = golden_ratio() * golden_ratio();
        assert_eq!(classify_region(&ExponentPoint::new(f64::INFINITY, phi_sq)), RegionClass::A1);
        assert_eq!(classify_region(&ExponentPoint::new(1e6, phi_sq - 1e-12)), RegionClass::A2);
    }

    #[test]
    fn g_endpoints() {
        assert_eq!(g_func(2.0).unwrap(), 2.0);
        assert!((g_func(1e8).unwrap() - PHI) < 1e-7);
        assert!(g_func(1e8).unwrap() > PHI);
        assert!((g_func(4.0).unwrap() - 1.80424764).abs() < 1e-7);
        assert!(g_func(1.5).is_err());
        assert_eq!(g_func(f64::INFINITY).unwrap(), golden_ratio());
    }

    #[test]
    fn schmidt_examples() {
        assert_eq!(schmidt_lower_bound(&ExponentPoint::new(2.0, 2.0)).unwrap(), 2.0);
        // at omega_hat = phi^2, omega = inf: both branches equal phi
        let phi = golden_ratio();
        let v = schmidt_lower_bound(&ExponentPoint::new(f64::INFINITY, phi * phi)).unwrap();
        assert!((v - phi).abs() < 1e-12);
        let v = schmidt_lower_bound(&ExponentPoint::new(3.1103, 2.2302)).unwrap();
        assert!((v - 1.9472369).abs() < 1e-6);
    }

    #[test]
    fn uniform_plus_examples() {
        assert_eq!(uniform_plus_bound(2.0).unwrap(), 2.0);
        assert!((uniform_plus_bound(1e8).unwrap() - 1.0) < 2e-8);
        assert!((uniform_plus_bound(3.1103).unwrap() - 1.4738663).abs() < 1e-6);
        assert!(uniform_plus_bound(1.0).is_err());
    }

    #[test]
    fn thurnheer_examples() {
        let phi = golden_ratio();
        assert!((thurnheer_bound(1.0).unwrap() - phi).abs() < 1e-12);
        assert_eq!(thurnheer_bound(0.5).unwrap(), 2.0);
        assert!((thurnheer_bound(0.75).unwrap() - 1.741037).abs() < 1e-6);
        assert!(thurnheer_bound(0.4).is_err());
        assert!(thurnheer_bound(1.1).is_err());
    }

    #[test]
    fn theorem2_examples() {
        let r = theorem2_bound(&ExponentPoint::new(2.0, 2.0)).unwrap();
        assert_eq!(r.theorem2, 2.0);
        assert_eq!(r.region, RegionClass::A1);
        let r = theorem2_bound(&ExponentPoint::new(3.1103, 2.2302)).unwrap();
        assert!((r.theorem2 - 1.9472369).abs() < 1e-6);
        assert!((r.g_value - 1.8593382).abs() < 1e-6);
        let r = theorem2_bound(&ExponentPoint::new(4.0, 2.0)).unwrap();
        assert!((r.theorem2 - 1.80424764).abs() < 1e-7);
        assert!((r.ooa_value - 1.5).abs() < 1e-12);
        assert!(theorem2_bound(&ExponentPoint::new(2.0, 2.5)).is_err());
    }
}

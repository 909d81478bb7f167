//! Empirical ordinary and uniform Diophantine exponents from finite record
//! sequences. Estimates are finite-window surrogates for the liminf/limsup
//! definitions; they are labeled empirical everywhere and never claimed to
//! converge to the true exponents.

use thiserror::Error;

use crate::psi::{self, EngineConfig, PsiError, RecordSequence, Variant};
use crate::theta::ThetaPair;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExponentError {
    #[error("too few usable events ({0}) to estimate a slope")]
    TooFewEvents(usize),
    #[error("tail fraction must lie in (0, 1]")]
    BadTailFraction,
    #[error(transparent)]
    Psi(#[from] PsiError),
}

/// ordinary estimates the ω-type exponent (sup γ with liminf t^γ ψ(t) < ∞),
/// uniform the ω̂-type (limsup). `f64::INFINITY` is the sentinel for
/// sequences that end in an exact zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentEstimate {
    pub ordinary: f64,
    pub uniform: f64,
    /// Inclusive range of event indices (0-based) the slopes were taken from.
    pub window: (usize, usize),
    /// True when the last interval is clipped at T instead of a true next
    /// record height.
    pub truncation_flag: bool,
}

impl ExponentEstimate {
    pub fn is_infinite(&self) -> bool {
        self.ordinary.is_infinite()
    }
}

/// Slope of event k measured at the end of its validity interval, the point
/// where t^γ ψ(t) is extremal within the interval: log(1/ψ_k) / log(t_{k+1}),
/// with t_{K+1} := T + 1 for the last event.
pub fn estimate(records: &RecordSequence, tail_fraction: f64) -> Result<ExponentEstimate, ExponentError> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(ExponentError::BadTailFraction);
    }
    if records.ends_in_zero() {
        let n = records.events.len();
        return Ok(ExponentEstimate {
            ordinary: f64::INFINITY,
            uniform: f64::INFINITY,
            window: (0, n.saturating_sub(1)),
            truncation_flag: false,
        });
    }
    let n = records.events.len();
    if n < 2 {
        return Err(ExponentError::TooFewEvents(n));
    }
    let mut slopes = Vec::with_capacity(n);
    for k in 0..n {
        let t_end = if k + 1 < n {
            records.events[k + 1].t_start as f64
        } else {
            (records.t_max + 1) as f64
        };
        let psi_k = records.events[k].value.to_f64();
        slopes.push((1.0 / psi_k).ln() / t_end.ln());
    }
    let w = ((tail_fraction * n as f64).ceil() as usize).clamp(1, n);
    let k_min = n - w;
    let tail = &slopes[k_min..];
    let ordinary = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let uniform = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ExponentEstimate { ordinary, uniform, window: (k_min, n - 1), truncation_flag: true })
}

/// The five empirical exponents of one pair: ω and ω̂ from the plain variant,
/// ω* (ordinary only) from the star variant, ω₊ and ω̂₊ from the plus variant.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTable {
    pub plain: ExponentEstimate,
    pub star: ExponentEstimate,
    pub plus: ExponentEstimate,
    pub allow_zero: bool,
    pub t_max: u64,
}

impl ExponentTable {
    pub fn omega(&self) -> f64 {
        self.plain.ordinary
    }
    pub fn omega_hat(&self) -> f64 {
        self.plain.uniform
    }
    pub fn omega_star(&self) -> f64 {
        self.star.ordinary
    }
    pub fn omega_plus(&self) -> f64 {
        self.plus.ordinary
    }
    pub fn omega_hat_plus(&self) -> f64 {
        self.plus.uniform
    }
}

pub fn estimate_all(
    pair: &ThetaPair,
    t_max: u64,
    allow_zero: bool,
    tail_fraction: f64,
    cfg: &EngineConfig,
) -> Result<ExponentTable, ExponentError> {
    let run = |variant| -> Result<ExponentEstimate, ExponentError> {
        let out = psi::accelerated_records(pair, t_max, variant, allow_zero, cfg)?;
        estimate(&out.sequence, tail_fraction)
    };
    Ok(ExponentTable {
        plain: run(Variant::Plain)?,
        star: run(Variant::Star)?,
        plus: run(Variant::Plus)?,
        allow_zero,
        t_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::{RecordEvent, Witness};
    use crate::scalar::PreciseScalar;
    use crate::theta::GeneratorKind;

    fn synthetic() -> RecordSequence {
        RecordSequence {
            variant: Variant::Plain,
            allow_zero: true,
            t_max: 16,
            events: vec![
                RecordEvent {
                    t_start: 2,
                    witness: Witness::Pair(1, 0),
                    value: PreciseScalar::from_ratio(1, 8),
                },
                RecordEvent {
                    t_start: 16,
                    witness: Witness::Pair(1, 1),
                    value: PreciseScalar::from_ratio(1, 1024),
                },
            ],
        }
    }

    #[test]
    fn synthetic_formula_example() {
        // slopes: log 8 / log 16 = 3/4 and log 1024 / log 17
        let est = estimate(&synthetic(), 1.0).unwrap();
        let expected_ord = 1024f64.ln() / 17f64.ln();
        assert!((est.ordinary - expected_ord).abs() < 1e-12);
        assert!((est.ordinary - 2.4465054).abs() < 1e-6);
        assert!((est.uniform - 0.75).abs() < 1e-12);
        assert_eq!(est.window, (0, 1));
        assert!(est.truncation_flag);
    }

    #[test]
    fn zero_terminal_gives_sentinel() {
        let pair = ThetaPair::forge(GeneratorKind::Rational { p1: 1, q1: 2, p2: 1, q2: 3 }, 64).unwrap();
        let t = estimate_all(&pair, 10, true, 0.5, &EngineConfig::default()).unwrap();
        assert!(t.omega().is_infinite());
        assert!(t.omega_hat().is_infinite());
        assert!(t.omega_plus().is_infinite());
        assert!(!t.plain.truncation_flag);
    }

    #[test]
    fn ordinary_at_least_uniform() {
        let pair = ThetaPair::forge(GeneratorKind::Quadratic { d1: 2, d2: 3 }, 128).unwrap();
        let t = estimate_all(&pair, 500, true, 1.0, &EngineConfig::default()).unwrap();
        assert!(t.omega() >= t.omega_hat());
        assert!(t.omega_plus() >= t.omega_hat_plus());
    }

    #[test]
    fn prefix_cannot_have_larger_ordinary() {
        // cutting the sequence right before event j (with T chosen as t_j - 1)
        // keeps the earlier slopes identical, so the full maximum dominates
        let pair = ThetaPair::forge(GeneratorKind::RandomDyadic { seed: 5 }, 128).unwrap();
        let full = psi::records(&pair, 400, Variant::Plain, true, &EngineConfig::default()).unwrap();
        let est_full = estimate(&full, 1.0).unwrap();
        for j in 2..full.events.len() {
            let prefix = RecordSequence {
                variant: full.variant,
                allow_zero: full.allow_zero,
                t_max: full.events[j].t_start - 1,
                events: full.events[..j].to_vec(),
            };
            let est_prefix = estimate(&prefix, 1.0).unwrap();
            assert!(est_prefix.ordinary <= est_full.ordinary + 1e-12);
        }
    }

    #[test]
    fn too_few_events() {
        let mut seq = synthetic();
        seq.events.truncate(1);
        assert!(matches!(estimate(&seq, 1.0), Err(ExponentError::TooFewEvents(1))));
    }
}

//! Record (best approximation) sequences of ψ, ψ* and ψ₊ up to a height T.
//!
//! Two engines produce them: `records` is the definitional oracle (every
//! candidate in every box is evaluated), `accelerated_records` prunes
//! candidates that provably cannot improve the running minimum. Their outputs
//! are contract-equal, event for event.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::PreciseScalar;
use crate::theta::{LinearFormTable, SmallTable, ThetaError, ThetaPair};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// min over 0 < max(|m1|,|m2|) <= t of ‖m1θ¹+m2θ²‖
    Plain,
    /// min over 0 < x <= t of max_j ‖xθʲ‖
    Star,
    /// min over nonnegative (or strictly positive) m with 0 < max(m1,m2) <= t
    Plus,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Star => "star",
            Variant::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Witness {
    Pair(i64, i64),
    Single(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordEvent {
    pub t_start: u64,
    pub witness: Witness,
    pub value: PreciseScalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordSequence {
    pub variant: Variant,
    pub allow_zero: bool,
    pub t_max: u64,
    pub events: Vec<RecordEvent>,
}

impl RecordSequence {
    /// Step-function semantics: the value of the last event with t_start <= t.
    pub fn value_at(&self, t: u64) -> Option<&PreciseScalar> {
        self.events.iter().rev().find(|e| e.t_start <= t).map(|e| &e.value)
    }

    pub fn ends_in_zero(&self) -> bool {
        self.events.last().is_some_and(|e| e.value.is_exact_zero())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    /// How many times precision may be doubled before giving up on a tie.
    pub max_refine_rounds: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { max_refine_rounds: 6 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsiError {
    #[error("precision exhausted after {rounds} refinement rounds: {reason}")]
    PrecisionExhausted { rounds: u32, reason: String },
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Accelerated run outcome: the sequence plus a flag set when the pruning
/// fast path was unavailable and the engine fell back to wide-integer scans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccelOutcome {
    pub sequence: RecordSequence,
    pub fallback_used: bool,
}

// ---------------------------------------------------------------------------
// candidate bands and comparison rules
// ---------------------------------------------------------------------------

/// Certified three-way comparison of two enclosures given as numerator bands
/// (center, halfwidth) over the common denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BandCmp {
    Less,
    Equal,
    GreaterEq,
    Ambiguous,
}

fn band_cmp(dc: &BigInt, ec: &BigInt, db: &BigInt, eb: &BigInt) -> BandCmp {
    if ec.is_zero() && eb.is_zero() {
        // point bands compare exactly; this must come first so that exact
        // ties are reported Equal, not GreaterEq
        return match dc.cmp(db) {
            std::cmp::Ordering::Less => BandCmp::Less,
            std::cmp::Ordering::Equal => BandCmp::Equal,
            std::cmp::Ordering::Greater => BandCmp::GreaterEq,
        };
    }
    if dc + ec < db - eb {
        return BandCmp::Less;
    }
    if dc - ec >= db + eb {
        return BandCmp::GreaterEq;
    }
    BandCmp::Ambiguous
}

struct NeedRefine;

// ---------------------------------------------------------------------------
// shell candidate enumeration (canonical halves; see module notes below)
// ---------------------------------------------------------------------------

/// Candidates whose box norm is exactly `h`, one representative per ±pair for
/// the plain variant (m1 > 0, or m1 = 0 and m2 > 0).
fn shell_candidates(variant: Variant, allow_zero: bool, h: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    match variant {
        Variant::Plain => {
            for m2 in -h..=h {
                out.push((h, m2));
            }
            for m1 in 1..h {
                out.push((m1, h));
                out.push((m1, -h));
            }
            out.push((0, h));
        }
        Variant::Plus => {
            let lo = if allow_zero { 0 } else { 1 };
            if !allow_zero && h < 1 {
                return out;
            }
            for m2 in lo..=h {
                out.push((h, m2));
            }
            // m1 = lo..h already covers (0, h) when zeros are allowed
            for m1 in lo..h {
                out.push((m1, h));
            }
        }
        Variant::Star => out.push((h, 0)), // witness is x = h; m2 unused
    }
    out
}

// ---------------------------------------------------------------------------
// per-candidate evaluation
// ---------------------------------------------------------------------------

enum Eval<'a> {
    Big(&'a LinearFormTable),
    Small(SmallTable),
}

impl Eval<'_> {
    /// (distance numerator, error numerator) of a candidate. For the star
    /// variant the candidate is (x, _) and the value is max_j ‖xθʲ‖.
    fn value(&self, variant: Variant, m1: i64, m2: i64) -> (BigInt, BigInt) {
        match (self, variant) {
            (Eval::Big(t), Variant::Star) => {
                let (d1, e) = t.dist(m1, 0);
                let (d2, _) = t.dist(0, m1);
                (d1.max(d2), e)
            }
            (Eval::Big(t), _) => t.dist(m1, m2),
            (Eval::Small(t), Variant::Star) => {
                let d1 = t.dist(m1, 0);
                let d2 = t.dist(0, m1);
                (BigInt::from(d1.max(d2)), BigInt::from(t.err * m1.unsigned_abs() as u128))
            }
            (Eval::Small(t), _) => (
                BigInt::from(t.dist(m1, m2)),
                BigInt::from(t.err * (m1.unsigned_abs() + m2.unsigned_abs()) as u128),
            ),
        }
    }
}

// ---------------------------------------------------------------------------
// shared shell resolution
// ---------------------------------------------------------------------------

struct Band {
    dist: BigInt,
    err: BigInt,
}

struct ShellBest {
    dist: BigInt,
    err: BigInt,
    ties: Vec<(i64, i64)>,
}

/// Fold improving candidates (already filtered against `best`) into the shell
/// minimum with lexicographic tie collection. Candidate order must be the
/// canonical enumeration order; the outcome is order-independent because all
/// comparisons are certified.
fn fold_shell(
    improving: Vec<((i64, i64), BigInt, BigInt)>,
    shell: &mut Option<ShellBest>,
) -> Result<(), NeedRefine> {
    for ((m1, m2), dc, ec) in improving {
        match shell {
            None => {
                *shell = Some(ShellBest { dist: dc, err: ec, ties: vec![(m1, m2)] });
            }
            Some(sb) => match band_cmp(&dc, &ec, &sb.dist, &sb.err) {
                BandCmp::Less => {
                    *sb = ShellBest { dist: dc, err: ec, ties: vec![(m1, m2)] };
                }
                BandCmp::Equal => sb.ties.push((m1, m2)),
                BandCmp::GreaterEq => {}
                BandCmp::Ambiguous => return Err(NeedRefine),
            },
        }
    }
    Ok(())
}

/// Lexicographically smallest witness among the tied candidates and, for the
/// plain variant, their negations. Canonical plain representatives all have a
/// positive leading component, so every negation precedes every original and
/// the minimum is the negation of the lexicographic maximum.
fn final_witness(variant: Variant, ties: &[(i64, i64)]) -> Witness {
    match variant {
        Variant::Plain => {
            let w = ties.iter().max().expect("nonempty tie set");
            Witness::Pair(-w.0, -w.1)
        }
        Variant::Plus => {
            let w = ties.iter().min().expect("nonempty tie set");
            Witness::Pair(w.0, w.1)
        }
        Variant::Star => Witness::Single(ties[0].0),
    }
}

/// Classify one candidate against the current record. `Ok(None)` means it
/// provably cannot improve; `Ok(Some(..))` means it provably does.
fn against_best(
    dc: BigInt,
    ec: BigInt,
    best: &Option<Band>,
) -> Result<Option<(BigInt, BigInt)>, NeedRefine> {
    match best {
        None => Ok(Some((dc, ec))),
        Some(b) => match band_cmp(&dc, &ec, &b.dist, &b.err) {
            BandCmp::Less => Ok(Some((dc, ec))),
            BandCmp::Equal | BandCmp::GreaterEq => Ok(None),
            BandCmp::Ambiguous => Err(NeedRefine),
        },
    }
}

#[cfg(feature = "parallel")]
const PAR_SHELL_THRESHOLD: usize = 1 << 13;

/// Oracle pass over one shell: evaluate every candidate. Data-parallel when
/// the shell is large and the `parallel` feature is on.
fn oracle_shell(
    eval: &Eval<'_>,
    variant: Variant,
    cands: &[(i64, i64)],
    best: &Option<Band>,
) -> Result<Vec<((i64, i64), BigInt, BigInt)>, NeedRefine> {
    let classify = |&(m1, m2): &(i64, i64)| {
        let (dc, ec) = eval.value(variant, m1, m2);
        against_best(dc, ec, best).map(|o| o.map(|(d, e)| ((m1, m2), d, e)))
    };
    #[cfg(feature = "parallel")]
    if cands.len() >= PAR_SHELL_THRESHOLD {
        let results: Result<Vec<_>, NeedRefine> = cands.par_iter().map(classify).collect();
        return Ok(results?.into_iter().flatten().collect());
    }
    let mut out = Vec::new();
    for c in cands {
        if let Some(hit) = classify(c)? {
            out.push(hit);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// records: the definitional oracle
// ---------------------------------------------------------------------------

fn scan_records(
    pair: &ThetaPair,
    t_max: u64,
    variant: Variant,
    allow_zero: bool,
    pruned: bool,
) -> Result<(Vec<RecordEvent>, bool), NeedRefine> {
    let table = LinearFormTable::build(pair);
    let small = table.small(t_max);
    let eval = match small {
        Some(s) => Eval::Small(s),
        None => Eval::Big(&table),
    };
    let mut fallback = pruned && small.is_none();
    let mut best: Option<Band> = None;
    let mut events = Vec::new();

    for h in 1..=t_max as i64 {
        let improving = if pruned {
            match (&small, &best) {
                (Some(s), Some(b)) => {
                    match pruned_shell(*s, &table, variant, allow_zero, h, b) {
                        Some(list) => {
                            let mut out = Vec::new();
                            for ((m1, m2), dc, ec) in list {
                                if let Some((d, e)) = against_best(dc, ec, &best)? {
                                    out.push(((m1, m2), d, e));
                                }
                            }
                            out
                        }
                        None => {
                            // threshold too wide to prune anything
                            fallback = true;
                            let cands = shell_candidates(variant, allow_zero, h);
                            oracle_shell(&eval, variant, &cands, &best)?
                        }
                    }
                }
                _ => {
                    let cands = shell_candidates(variant, allow_zero, h);
                    oracle_shell(&eval, variant, &cands, &best)?
                }
            }
        } else {
            let cands = shell_candidates(variant, allow_zero, h);
            oracle_shell(&eval, variant, &cands, &best)?
        };

        let mut shell: Option<ShellBest> = None;
        fold_shell(improving, &mut shell)?;
        if let Some(sb) = shell {
            let value = table.to_scalar(&sb.dist, &sb.err);
            events.push(RecordEvent {
                t_start: h as u64,
                witness: final_witness(variant, &sb.ties),
                value,
            });
            let zero = sb.dist.is_zero() && sb.err.is_zero();
            best = Some(Band { dist: sb.dist, err: sb.err });
            if zero {
                break;
            }
        }
    }
    Ok((events, fallback))
}

/// Pruned scan of one shell in machine words: only candidates whose distance
/// could possibly undercut the current record survive to exact banding.
/// Returns None when the pruning window covers everything.
fn pruned_shell(
    s: SmallTable,
    table: &LinearFormTable,
    variant: Variant,
    allow_zero: bool,
    h: i64,
    best: &Band,
) -> Option<Vec<((i64, i64), BigInt, BigInt)>> {
    // keep candidates with dist < best + best_err + shell_err_bound
    let shell_err = match variant {
        Variant::Star => BigInt::from(h),
        _ => BigInt::from(2 * h),
    } * &table.err_num;
    let thr_big = &best.dist + &best.err + shell_err;
    let half = &table.denom >> 1;
    if thr_big > half {
        return None;
    }
    let thr = thr_big.to_u128().expect("threshold below denom/2 fits u128");
    let mut hits: Vec<(i64, i64)> = Vec::new();

    match variant {
        Variant::Star => {
            let d1 = s.dist(h, 0);
            let d2 = s.dist(0, h);
            if d1.max(d2) < thr {
                hits.push((h, 0));
            }
        }
        Variant::Plain => {
            // row m1 = h, m2 in [-h, h]
            scan_row(&s, s.term(s.n1, h), s.n2, -h, h, thr, &mut hits, |m2| (h, m2));
            // rows m2 = ±h, m1 in [1, h-1]
            scan_row(&s, s.term(s.n2, h), s.n1, 1, h - 1, thr, &mut hits, |m1| (m1, h));
            scan_row(&s, s.term(s.n2, -h), s.n1, 1, h - 1, thr, &mut hits, |m1| (m1, -h));
            if s.dist(0, h) < thr {
                hits.push((0, h));
            }
        }
        Variant::Plus => {
            let lo = if allow_zero { 0 } else { 1 };
            scan_row(&s, s.term(s.n1, h), s.n2, lo, h, thr, &mut hits, |m2| (h, m2));
            scan_row(&s, s.term(s.n2, h), s.n1, lo, h - 1, thr, &mut hits, |m1| (m1, h));
        }
    }

    let err_small = s.err;
    Some(
        hits.into_iter()
            .map(|(m1, m2)| {
                let (d, e) = if err_small == 0 && variant != Variant::Star {
                    (BigInt::from(s.dist(m1, m2)), BigInt::zero())
                } else {
                    match variant {
                        Variant::Star => {
                            let d1 = s.dist(m1, 0);
                            let d2 = s.dist(0, m1);
                            (
                                BigInt::from(d1.max(d2)),
                                BigInt::from(err_small * m1.unsigned_abs() as u128),
                            )
                        }
                        _ => (
                            BigInt::from(s.dist(m1, m2)),
                            BigInt::from(err_small * (m1.unsigned_abs() + m2.unsigned_abs()) as u128),
                        ),
                    }
                };
                ((m1, m2), d, e)
            })
            .collect(),
    )
}

/// March along a lattice row: residues step by a fixed increment, and the
/// distance test is a pair of word comparisons.
#[allow(clippy::too_many_arguments)]
#[inline]
fn scan_row(
    s: &SmallTable,
    base: u128,
    step_n: u128,
    from: i64,
    to: i64,
    thr: u128,
    hits: &mut Vec<(i64, i64)>,
    mk: impl Fn(i64) -> (i64, i64),
) {
    if from > to {
        return;
    }
    let mut cur = (base + s.term(step_n, from)) % s.d;
    let step = step_n % s.d;
    let mut m = from;
    loop {
        if cur.min(s.d - cur) < thr {
            hits.push(mk(m));
        }
        if m == to {
            break;
        }
        m += 1;
        cur += step;
        if cur >= s.d {
            cur -= s.d;
        }
    }
}

// ---------------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------------

fn with_refinement<T>(
    pair: &ThetaPair,
    cfg: &EngineConfig,
    mut f: impl FnMut(&ThetaPair) -> Result<T, NeedRefine>,
) -> Result<T, PsiError> {
    let mut work = pair.clone();
    for round in 0..=cfg.max_refine_rounds {
        match f(&work) {
            Ok(v) => return Ok(v),
            Err(NeedRefine) => {
                let target = work.precision_bits().saturating_mul(2).max(work.precision_bits() + 64);
                work = work.refine(target).map_err(|e| PsiError::PrecisionExhausted {
                    rounds: round,
                    reason: e.to_string(),
                })?;
            }
        }
    }
    Err(PsiError::PrecisionExhausted {
        rounds: cfg.max_refine_rounds,
        reason: "tie persisted at maximum precision".into(),
    })
}

/// The brute-force reference engine: exhaustive, shell by shell.
pub fn records(
    pair: &ThetaPair,
    t_max: u64,
    variant: Variant,
    allow_zero: bool,
    cfg: &EngineConfig,
) -> Result<RecordSequence, PsiError> {
    assert!(t_max >= 1, "t_max must be >= 1");
    let events = with_refinement(pair, cfg, |p| {
        scan_records(p, t_max, variant, allow_zero, false).map(|(ev, _)| ev)
    })?;
    Ok(RecordSequence { variant, allow_zero, t_max, events })
}

/// The pruned engine. Contract: identical events to `records`.
pub fn accelerated_records(
    pair: &ThetaPair,
    t_max: u64,
    variant: Variant,
    allow_zero: bool,
    cfg: &EngineConfig,
) -> Result<AccelOutcome, PsiError> {
    assert!(t_max >= 1, "t_max must be >= 1");
    let (events, fallback_used) =
        with_refinement(pair, cfg, |p| scan_records(p, t_max, variant, allow_zero, true))?;
    Ok(AccelOutcome {
        sequence: RecordSequence { variant, allow_zero, t_max, events },
        fallback_used,
    })
}

/// Exhaustive minimum over the full box at a single height, with the same
/// lexicographic tie-breaking as the record engines. Unlike `records`, ties
/// may span different heights here.
pub fn brute_force_value_at(
    pair: &ThetaPair,
    t: u64,
    variant: Variant,
    allow_zero: bool,
    cfg: &EngineConfig,
) -> Result<(PreciseScalar, Witness), PsiError> {
    assert!(t >= 1, "t must be >= 1");
    with_refinement(pair, cfg, |p| {
        let table = LinearFormTable::build(p);
        let small = table.small(t);
        let eval = match small {
            Some(s) => Eval::Small(s),
            None => Eval::Big(&table),
        };
        let mut global: Option<ShellBest> = None;
        for h in 1..=t as i64 {
            let cands = shell_candidates(variant, allow_zero, h);
            let scored: Vec<_> = cands
                .iter()
                .map(|&(m1, m2)| {
                    let (d, e) = eval.value(variant, m1, m2);
                    ((m1, m2), d, e)
                })
                .collect();
            fold_shell(scored, &mut global)?;
        }
        let gb = global.expect("box is nonempty for t >= 1");
        Ok((table.to_scalar(&gb.dist, &gb.err), final_witness(variant, &gb.ties)))
    })
}

//! Exact finite certificates for the quantitative lemmas of the
//! construction: shift defects, rigidity, return identities, the double
//! return behind weak mixing, and syndetic runs of 1s behind proximality.
//!
//! Index ranges are split across the rayon pool; reductions keep the
//! smallest index among equal candidates so reports do not depend on the
//! partitioning.

mod runs;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{Ladder, Tower};
use crate::scalar::{from_big, from_big_ratio, to_big_ratio, ExactInt, Frac};
use crate::Rational;

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "wk-report/1";

const CHUNK: u64 = 1 << 14;

/// Largest agreement range `[0, p[n]]` checked coordinate by coordinate.
pub const MAX_WM_RANGE: u64 = 1 << 24;

/// Max of `f` over `0..count`, smallest index on ties.
fn par_argmax<I, F>(count: u64, f: F) -> Result<(u64, Frac<I>)>
where
    I: ExactInt,
    F: Fn(u64) -> Result<Frac<I>> + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut best: Option<(u64, Frac<I>)> = None;
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                let v = f(i)?;
                let better = match &best {
                    None => true,
                    Some((_, b)) => v.try_cmp(b)? == Ordering::Greater,
                };
                if better {
                    best = Some((i, v));
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out: Option<(u64, Frac<I>)> = None;
    for (i, v) in best.into_iter().flatten() {
        let better = match &out {
            None => true,
            Some((_, b)) => v.try_cmp(b)? == Ordering::Greater,
        };
        if better {
            out = Some((i, v));
        }
    }
    out.ok_or_else(|| Error::Precondition("empty index range".into()))
}

/// First index in `0..count` where `pred` fails.
fn par_first_failure<F>(count: u64, pred: F) -> Result<Option<u64>>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let firsts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                if !pred(i)? {
                    return Ok(Some(i));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(firsts.into_iter().flatten().min())
}

fn big<I: ExactInt>(v: &I) -> BigInt {
    v.clone().into()
}

fn u64_to<I: ExactInt>(v: u64) -> Result<I> {
    I::from_u64(v).ok_or(Error::Overflow("index"))
}

/// Max defect of a shift over a tested range, against `eps_n = 1/n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub n: usize,
    #[serde(with = "crate::exact::int")]
    pub shift: BigInt,
    /// Inclusive range of tested arguments.
    #[serde(with = "crate::exact::int_pair")]
    pub tested_range: (BigInt, BigInt),
    pub points: u64,
    #[serde(with = "crate::exact")]
    pub max_defect: Rational,
    /// `1/n`; absent at `n = 0`, where the bound is undefined.
    #[serde(with = "crate::exact::option")]
    pub bound: Option<Rational>,
    /// `max_defect < bound`; absent when no bound applies.
    pub pass: Option<bool>,
    /// Smallest tested argument attaining `max_defect`.
    #[serde(with = "crate::exact")]
    pub argmax: Rational,
}

/// Both return identities over a grid of `[-p[n], p[n]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnReport {
    pub n: usize,
    #[serde(with = "crate::exact::int")]
    pub left_shift: BigInt,
    #[serde(with = "crate::exact::int")]
    pub right_shift: BigInt,
    pub checked: u64,
    pub all_equal: bool,
    pub first_mismatch: Option<String>,
}

/// Syndetic occurrence of runs of `p[n]/9` exact 1s in `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnesRunReport {
    pub n: usize,
    #[serde(with = "crate::exact::int")]
    pub run_length_required: BigInt,
    #[serde(with = "crate::exact::int")]
    pub gap_bound: BigInt,
    #[serde(with = "crate::exact::int_pair")]
    pub window: (BigInt, BigInt),
    pub method: RunMethod,
    pub runs_found: u64,
    #[serde(with = "crate::exact::int_pair_option")]
    pub first_run: Option<(BigInt, BigInt)>,
    /// Largest distance between consecutive qualifying run starts
    /// (the first measured from the window start).
    #[serde(with = "crate::exact::int")]
    pub worst_gap: BigInt,
    /// Start of the first length-`gap_bound` window lacking a run, if any.
    pub uncovered_window: Option<String>,
    pub pass: bool,
}

/// How runs are located.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMethod {
    /// Evaluate every coordinate of the window.
    Exhaustive,
    /// Exact plateau arithmetic on the recursion; no coordinate scan.
    Plateau,
}

/// Forward and backward returns `N`, `N + 1` to the `[0, p[n]]` cylinder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WMReport {
    pub n: usize,
    #[serde(rename = "N", with = "crate::exact::int")]
    pub big_n: BigInt,
    #[serde(with = "crate::exact::int")]
    pub agree_len: BigInt,
    pub forward_exact: bool,
    pub backward_exact: bool,
    pub first_mismatch: Option<String>,
    #[serde(with = "crate::exact")]
    pub dist_hi: Rational,
    #[serde(with = "crate::exact")]
    pub eps: Rational,
    pub pass: bool,
}

/// Integer grid inside `[-p[n], p[n]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntGrid {
    Full,
    /// `count` evenly spread points including both ends.
    Sampled(u64),
    Points(Vec<BigInt>),
}

impl IntGrid {
    fn resolve(&self, p: &BigInt) -> Result<Vec<BigInt>> {
        match self {
            IntGrid::Full => {
                let n = p.to_u64().filter(|&n| n <= 1 << 32).ok_or_else(|| {
                    Error::Precondition(format!("full grid over [-{p}, {p}] is too large; sample it"))
                })?;
                Ok((0..=2 * n).map(|i| BigInt::from(i) - p).collect())
            }
            IntGrid::Sampled(count) => {
                if *count == 0 {
                    return Err(Error::Precondition("sample count must be positive".into()));
                }
                let width = p * 2;
                let mut pts: Vec<BigInt> = (0..*count)
                    .map(|i| {
                        if *count == 1 {
                            -p.clone()
                        } else {
                            -p + Integer::div_floor(&(&width * BigInt::from(i)), &BigInt::from(count - 1))
                        }
                    })
                    .collect();
                pts.dedup();
                Ok(pts)
            }
            IntGrid::Points(pts) => {
                if let Some(t) = pts.iter().find(|t| t.abs() > *p) {
                    return Err(Error::Precondition(format!("grid point {t} lies outside [-{p}, {p}]")));
                }
                Ok(pts.clone())
            }
        }
    }
}

/// `max |b_m(t + 2p[n]) - b_m(t)|` over `t = -p[m] + i*step` in
/// `[-p[m], p[m]]`, compared with `eps_n`.
pub fn check_shift_defect<I: ExactInt>(ladder: &Ladder<I>, n: usize, m: usize, step: &Rational) -> Result<RigidityReport> {
    if m < n {
        return Err(Error::Precondition(format!("m = {m} must be at least n = {n}")));
    }
    if !step.is_positive() {
        return Err(Error::Precondition("grid step must be positive".into()));
    }
    let tower = ladder.tower();
    tower.require(m)?;
    let pm_big = tower.levels[m].p_big.clone();
    let count_big: BigInt = (Rational::from_integer(&pm_big * 2) / step).floor().to_integer() + 1;
    let count = count_big
        .to_u64()
        .ok_or_else(|| Error::Precondition(format!("grid of {count_big} points is too large")))?;
    let step_i: Ratio<I> = from_big_ratio(step)?;
    let (sn, sd) = (step_i.numer().clone(), step_i.denom().clone());
    let pm = tower.levels[m].p.clone();
    let shift = crate::scalar::add(&tower.levels[n].p, &tower.levels[n].p)?;
    let start = crate::scalar::mul(&-pm.clone(), &sd)?;
    let point = |i: u64| -> Result<Frac<I>> {
        let num = crate::scalar::add(&start, &crate::scalar::mul(&u64_to::<I>(i)?, &sn)?)?;
        Ok(Frac { num, den: sd.clone() })
    };
    let (arg_i, max) = par_argmax(count, |i| {
        let t = point(i)?;
        let a = tower.b_raw(m, &t.add_int(&shift)?)?;
        let b = tower.b_raw(m, &t)?;
        Ok(a.abs_diff(&b)?)
    })?;
    let max_defect = to_big_ratio(&max.to_ratio());
    let bound = if n == 0 { None } else { Some(Ladder::<I>::epsilon(n)?) };
    let pass = bound.as_ref().map(|b| max_defect < *b);
    Ok(RigidityReport {
        n,
        shift: big(&shift),
        tested_range: (-pm_big.clone(), pm_big),
        points: count,
        max_defect,
        bound,
        pass,
        argmax: to_big_ratio(&point(arg_i)?.to_ratio()),
    })
}

/// `max_{0 <= j < J} |alpha(j + 2p[n]) - alpha(j)|` against `1/n`.
pub fn check_rigidity<I: ExactInt>(ladder: &Ladder<I>, n: usize, j_count: u64) -> Result<RigidityReport> {
    let bound = Ladder::<I>::epsilon(n)?;
    if j_count == 0 {
        return Err(Error::Precondition("J must be at least 1".into()));
    }
    ladder.extend_to(n)?;
    let two_p = ladder.p(n).expect("extended") * 2;
    let shift: I = from_big(&two_p, "2 p[n]")?;
    let last = crate::scalar::add(&shift, &u64_to::<I>(j_count - 1)?)?;
    let tower = ladder.tower_covering(&Frac::int(last))?;
    let (arg, max) = par_argmax(j_count, |j| {
        let j = u64_to::<I>(j)?;
        let a = tower.alpha_raw(&crate::scalar::add(&j, &shift)?)?;
        Ok(a.abs_diff(&tower.alpha_raw(&j)?)?)
    })?;
    let max_defect = to_big_ratio(&max.to_ratio());
    let pass = max_defect < bound;
    Ok(RigidityReport {
        n,
        shift: two_p,
        tested_range: (BigInt::zero(), BigInt::from(j_count - 1)),
        points: j_count,
        max_defect,
        bound: Some(bound),
        pass: Some(pass),
        argmax: Rational::from_integer(BigInt::from(arg)),
    })
}

fn return_shift<I: ExactInt>(ladder: &Ladder<I>, n: usize) -> Result<(Tower<I>, I)> {
    let tower = ladder.tower_to(n + 1)?;
    let splice = tower.levels[n + 1].splice.clone();
    let left = crate::scalar::add(&splice, &splice)?;
    Ok((tower, left))
}

/// `a_inf(t) = a_inf(t - 2 p0 L[n+1] p[n]) = a_inf(t + 2 p0 L[n+1] p[n] - 1)`
/// at every grid point.
pub fn check_returns<I: ExactInt>(ladder: &Ladder<I>, n: usize, grid: &IntGrid) -> Result<ReturnReport> {
    let (tower, left) = return_shift(ladder, n)?;
    let right = left.clone() - I::one();
    let points = grid.resolve(&tower.levels[n].p_big)?;
    let points: Vec<I> = points.iter().map(|t| from_big(t, "grid point")).collect::<Result<_>>()?;
    let first = par_first_failure(points.len() as u64, |i| {
        let t = &points[i as usize];
        let v = tower.ainf_raw(&Frac::int(t.clone()))?;
        let back = tower.ainf_raw(&Frac::int(crate::scalar::sub(t, &left)?))?;
        let fwd = tower.ainf_raw(&Frac::int(crate::scalar::add(t, &right)?))?;
        Ok(v.try_cmp(&back)? == Ordering::Equal && v.try_cmp(&fwd)? == Ordering::Equal)
    })?;
    Ok(ReturnReport {
        n,
        left_shift: big(&left),
        right_shift: big(&right),
        checked: points.len() as u64,
        all_equal: first.is_none(),
        first_mismatch: first.map(|i| points[i as usize].to_string()),
    })
}

/// Default tolerance `2^(2 - p[n])` for [`check_wm_returns`].
pub fn default_wm_eps(p: u64) -> Rational {
    Rational::new(BigInt::from(4), BigInt::one() << p)
}

/// Coordinate-exact double return: `alpha(i + N) = alpha(i)` and
/// `a_inf(i - N - 1) = alpha(i)` for `i` in `[0, p[n]]`, with
/// `N = 2 p0 L[n+1] p[n] - 1`.
pub fn check_wm_returns<I: ExactInt>(ladder: &Ladder<I>, n: usize, eps: Option<Rational>) -> Result<WMReport> {
    let (tower, left) = return_shift(ladder, n)?;
    let big_n = left.clone() - I::one();
    let p = tower.levels[n].p_big.to_u64().filter(|&p| p <= MAX_WM_RANGE).ok_or_else(|| {
        Error::Precondition(format!("agreement range [0, p[{n}]] is too large to check exhaustively"))
    })?;
    let eps = eps.unwrap_or_else(|| default_wm_eps(p));
    let count = p + 1;
    let mut forward_fail = None;
    let mut backward_fail = None;
    let first = par_first_failure(count, |i| {
        let i = u64_to::<I>(i)?;
        let v = tower.alpha_raw(&i)?;
        let fwd = tower.alpha_raw(&crate::scalar::add(&i, &big_n)?)?;
        Ok(v.try_cmp(&fwd)? == Ordering::Equal)
    })?;
    if let Some(i) = first {
        forward_fail = Some(i);
    }
    let first = par_first_failure(count, |i| {
        let i = u64_to::<I>(i)?;
        let v = tower.alpha_raw(&i)?;
        let back = tower.ainf_raw(&Frac::int(crate::scalar::sub(&i, &left)?))?;
        Ok(v.try_cmp(&back)? == Ordering::Equal)
    })?;
    if let Some(i) = first {
        backward_fail = Some(i);
    }
    // Zero partial sum over p[n] + 1 coordinates leaves the tail 2^(-p[n]).
    let dist_hi = Rational::new(BigInt::one(), BigInt::one() << p);
    let forward_exact = forward_fail.is_none();
    let backward_exact = backward_fail.is_none();
    let pass = forward_exact && backward_exact && dist_hi < eps;
    Ok(WMReport {
        n,
        big_n: big(&big_n),
        agree_len: BigInt::from(count),
        forward_exact,
        backward_exact,
        first_mismatch: forward_fail
            .map(|i| format!("forward at {i}"))
            .or(backward_fail.map(|i| format!("backward at {i}"))),
        dist_hi,
        eps,
        pass,
    })
}

/// Every length-`2p[n]` window of `alpha[0, window_end]` contains `p[n]/9`
/// consecutive coordinates exactly equal to 1.
pub fn check_ones_runs<I: ExactInt>(
    ladder: &Ladder<I>,
    n: usize,
    window_end: &BigInt,
    method: RunMethod,
) -> Result<OnesRunReport> {
    if n == 0 {
        return Err(Error::Domain("run certificates start at n = 1".into()));
    }
    ladder.extend_to(n)?;
    let p = ladder.p(n).expect("extended");
    let (req, rem) = p.div_rem(&BigInt::from(9));
    if !rem.is_zero() {
        return Err(Error::Domain(format!("p[{n}] = {p} is not divisible by 9")));
    }
    let gap_bound = &p * 2;
    if *window_end < gap_bound {
        return Err(Error::Precondition(format!("window end {window_end} is below 2 p[{n}] = {gap_bound}")));
    }
    let runs: Vec<(BigInt, BigInt)> = match method {
        RunMethod::Exhaustive => {
            let end = window_end.to_u64().ok_or_else(|| Error::Precondition("window too large to scan".into()))?;
            scan_runs(ladder, end, &req)?
        }
        RunMethod::Plateau => {
            let end: I = from_big(window_end, "window end")?;
            let tower = ladder.tower_covering(&Frac::int(end.clone()))?;
            let k = tower.level_for(&Frac::int(end.clone()))?.expect("covering tower").max(n);
            let min_len: I = from_big(&req, "run length")?;
            tower
                .long_ones_runs(k, &I::zero(), &end, &min_len)?
                .into_iter()
                .map(|(s, e)| (big(&s), big(&e)))
                .collect()
        }
    };

    // Windows [s, s + W - 1] for s in [0, E - W + 1]; a block start b covers
    // the windows with s in [b - (W - req), b].
    let slack = &gap_bound - &req;
    let last_window = window_end - &gap_bound + 1;
    let mut need = BigInt::zero();
    let mut uncovered = None;
    for (s, e) in &runs {
        let (b0, b1) = (s.clone(), e - &req + 1);
        if &b0 - &slack > need {
            break;
        }
        if b1 >= need {
            need = b1 + 1;
        }
        if need > last_window {
            break;
        }
    }
    if need <= last_window {
        uncovered = Some(need.to_string());
    }
    let mut worst_gap = match runs.first() {
        Some((s, _)) => s.clone(),
        None => window_end + 1,
    };
    for w in runs.windows(2) {
        let g = &w[1].0 - &w[0].0;
        if g > worst_gap {
            worst_gap = g;
        }
    }
    Ok(OnesRunReport {
        n,
        run_length_required: req,
        gap_bound,
        window: (BigInt::zero(), window_end.clone()),
        method,
        runs_found: runs.len() as u64,
        first_run: runs.first().cloned(),
        worst_gap,
        pass: uncovered.is_none(),
        uncovered_window: uncovered,
    })
}

fn scan_runs<I: ExactInt>(ladder: &Ladder<I>, end: u64, req: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    let tower = ladder.tower_covering(&Frac::int(u64_to::<I>(end)?))?;
    let chunks = (end + 1).div_ceil(CHUNK);
    let flags: Vec<Vec<bool>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(end + 1))
                .map(|i| Ok(tower.alpha_raw(&u64_to::<I>(i)?)?.is_one()))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;
    let mut runs = Vec::new();
    let mut start: Option<u64> = None;
    for (i, one) in flags.into_iter().flatten().chain(std::iter::once(false)).enumerate() {
        let i = i as u64;
        match (one, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if BigInt::from(i - s) >= *req {
                    runs.push((BigInt::from(s), BigInt::from(i - 1)));
                }
                start = None;
            }
            _ => {}
        }
    }
    Ok(runs)
}

/// `{"schema", "lemma", "params", "pass", "report"}` envelope.
pub fn report_json<R: Serialize>(lemma: &str, params: serde_json::Value, pass: Option<bool>, report: &R) -> serde_json::Value {
    serde_json::json!({
        "schema": SCHEMA,
        "lemma": lemma,
        "params": params,
        "pass": pass,
        "report": report,
    })
}

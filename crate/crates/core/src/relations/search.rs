//! Sliding-window searches over finite horizons.
//!
//! The time range is cut into fixed segments; each segment rescales its
//! coordinates to integers over a common denominator and updates the
//! weighted prefix sums in O(1) per step. Segments are evaluated in parallel
//! waves and reduced in time order with the smallest time winning ties, so
//! results never depend on the thread count. A wave that reaches the best
//! possible value ends the search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::source::View;
use crate::error::{Error, Result};
use crate::scalar::ExactInt;
use crate::sequence::DistBracket;
use crate::Rational;

const SEGMENT: u64 = 1 << 14;
const WAVE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    Min,
    Max,
}

impl Goal {
    fn better(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Goal::Min => a < b,
            Goal::Max => a > b,
        }
    }
}

/// Best `(t, lo)` found; `lo` is the objective at `t`.
pub(crate) type Best = (u64, Rational);

fn segments(from: u64, to: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut s = from;
    loop {
        let e = s.saturating_add(SEGMENT - 1).min(to);
        out.push((s, e));
        if e == to {
            return out;
        }
        s = e + 1;
    }
}

/// Wave-parallel reduction of per-segment optima.
fn reduce_waves<F>(from: u64, to: u64, goal: Goal, stop: Option<&Rational>, f: F) -> Result<Option<Best>>
where
    F: Fn(u64, u64) -> Result<Option<Best>> + Sync,
{
    let mut best: Option<Best> = None;
    for wave in segments(from, to).chunks(WAVE) {
        let found = wave.par_iter().map(|&(s, e)| f(s, e)).collect::<Result<Vec<_>>>()?;
        for (t, v) in found.into_iter().flatten() {
            if best.as_ref().is_none_or(|(_, b)| goal.better(&v, b)) {
                best = Some((t, v));
            }
        }
        if let (Some((_, v)), Some(stop)) = (&best, stop) {
            if v == stop {
                break;
            }
        }
    }
    Ok(best)
}

/// Coordinates rescaled to integers `value * den`.
struct Scaled {
    den: BigInt,
    rows: Vec<Vec<BigInt>>,
    bits: u64,
}

fn rescale(rows: &[Vec<Rational>]) -> Scaled {
    let mut den = BigInt::one();
    for v in rows.iter().flatten() {
        let d = v.denom();
        if !d.is_one() && !(&den % d).is_zero() {
            den = den.lcm(d);
        }
    }
    let mut bits = 0;
    let rows = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let n = v.numer() * (&den / v.denom());
                    bits = bits.max(n.bits());
                    n
                })
                .collect()
        })
        .collect();
    Scaled { den, rows, bits }
}

fn narrow<I: ExactInt>(rows: &[Vec<BigInt>]) -> Vec<Vec<I>> {
    rows.iter()
        .map(|r| r.iter().map(|v| I::try_from(v.clone()).ok().expect("checked width")).collect())
        .collect()
}

/// Whether sums of `k` weighted differences fit in `i64`.
fn fits_i64(bits: u64, k: usize) -> bool {
    bits + k as u64 + 3 < 63
}

/// `lo = S / (den * 2^(k-1))`.
fn unscale<I: ExactInt>(s: &I, den: &BigInt, k: usize) -> Rational {
    Rational::new(s.clone().into(), den << (k - 1))
}

/// Objective `max_j lo(d(sigma^t x_j, sigma^t y_j))` over `t` in
/// `[from, to]`, optimized per `goal`.
pub(crate) fn sliding(
    pairs: &[(View<'_>, View<'_>)],
    from: u64,
    to: u64,
    k: usize,
    goal: Goal,
    stop: Option<&Rational>,
) -> Result<Option<Best>> {
    check_k(k)?;
    if from > to {
        return Ok(None);
    }
    reduce_waves(from, to, goal, stop, |s, e| {
        let len = (e - s) as usize + k;
        let mut rows = Vec::with_capacity(2 * pairs.len());
        for (x, y) in pairs {
            rows.push(x.values(s, len)?);
            rows.push(y.values(s, len)?);
        }
        let scaled = rescale(&rows);
        if fits_i64(scaled.bits, k) {
            Ok(Some(sliding_segment::<i64>(&narrow(&scaled.rows), s, e, k, goal, &scaled.den)))
        } else {
            Ok(Some(sliding_segment::<BigInt>(&scaled.rows, s, e, k, goal, &scaled.den)))
        }
    })
}

fn sliding_segment<I: ExactInt>(rows: &[Vec<I>], s: u64, e: u64, k: usize, goal: Goal, den: &BigInt) -> Best {
    let diffs: Vec<Vec<I>> =
        rows.chunks(2).map(|p| p[0].iter().zip(&p[1]).map(|(a, b)| (a.clone() - b.clone()).abs()).collect()).collect();
    let two = I::one() + I::one();
    let top = (1..k).fold(I::one(), |w, _| w * two.clone());
    let mut sums: Vec<I> = diffs
        .iter()
        .map(|d| d[..k].iter().fold(I::zero(), |acc, v| acc * two.clone() + v.clone()))
        .collect();
    let combined = |sums: &[I]| sums.iter().max().expect("at least one pair").clone();
    let mut best = (s, combined(&sums));
    for (off, t) in (s + 1..=e).enumerate() {
        for (sum, d) in sums.iter_mut().zip(&diffs) {
            *sum = (sum.clone() - d[off].clone() * top.clone()) * two.clone() + d[off + k].clone();
        }
        let v = combined(&sums);
        let better = match goal {
            Goal::Min => v < best.1,
            Goal::Max => v > best.1,
        };
        if better {
            best = (t, v);
        }
    }
    (best.0, unscale(&best.1, den, k))
}

/// `min_t max(lo(d(sigma^t a, a)), lo(d(sigma^t b, b)))` over `t` in
/// `[from, to]`.
pub(crate) fn return_search(a: View<'_>, b: View<'_>, from: u64, to: u64, k: usize) -> Result<Option<Best>> {
    check_k(k)?;
    if from > to {
        return Ok(None);
    }
    let prefix = [a.values(0, k)?, b.values(0, k)?];
    let zero = Rational::zero();
    reduce_waves(from, to, Goal::Min, Some(&zero), |s, e| {
        let len = (e - s) as usize + k;
        let rows = vec![prefix[0].clone(), prefix[1].clone(), a.values(s, len)?, b.values(s, len)?];
        let scaled = rescale(&rows);
        if fits_i64(scaled.bits, k) {
            Ok(Some(return_segment::<i64>(&narrow(&scaled.rows), s, e, k, &scaled.den)))
        } else {
            Ok(Some(return_segment::<BigInt>(&scaled.rows, s, e, k, &scaled.den)))
        }
    })
}

fn return_segment<I: ExactInt>(rows: &[Vec<I>], s: u64, e: u64, k: usize, den: &BigInt) -> Best {
    let two = I::one() + I::one();
    let mut weights = vec![I::one(); k];
    for i in (0..k - 1).rev() {
        weights[i] = weights[i + 1].clone() * two.clone();
    }
    let mut best: Option<(u64, I)> = None;
    for (off, t) in (s..=e).enumerate() {
        let mut worst = I::zero();
        'pair: for (prefix, row) in [(&rows[0], &rows[2]), (&rows[1], &rows[3])] {
            let mut acc = I::zero();
            for i in 0..k {
                acc = acc + (row[off + i].clone() - prefix[i].clone()).abs() * weights[i].clone();
                if best.as_ref().is_some_and(|(_, b)| acc >= *b) {
                    worst = acc;
                    break 'pair;
                }
            }
            worst = worst.max(acc);
        }
        if best.as_ref().is_none_or(|(_, b)| worst < *b) {
            best = Some((t, worst));
        }
    }
    let (t, v) = best.expect("nonempty segment");
    (t, unscale(&v, den, k))
}

/// First `t` in `[from, to]` with `x(t + i) = word(i)` for all `i`.
pub(crate) fn first_occurrence(x: View<'_>, word: &[Rational], from: u64, to: u64) -> Result<Option<u64>> {
    if word.is_empty() {
        return Err(Error::Precondition("pattern must be nonempty".into()));
    }
    if from > to {
        return Ok(None);
    }
    let mut first = None;
    for wave in segments(from, to).chunks(WAVE) {
        let found = wave
            .par_iter()
            .map(|&(s, e)| {
                let vals = x.values(s, (e - s) as usize + word.len())?;
                Ok((0..=(e - s) as usize).find(|&o| vals[o..o + word.len()] == *word).map(|o| s + o as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        first = found.into_iter().flatten().next();
        if first.is_some() {
            break;
        }
    }
    Ok(first)
}

/// Exact bracket of `d(sigma^t x, sigma^t y)` from `k` coordinates.
pub fn view_dist(x: View<'_>, y: View<'_>, t: u64, k: usize) -> Result<DistBracket> {
    check_k(k)?;
    let (a, b) = (x.values(t, k)?, y.values(t, k)?);
    Ok(DistBracket::from_partial(weighted(a.iter().zip(&b)), k))
}

/// `sum |a_i - b_i| / 2^i`.
pub(crate) fn weighted<'a>(pairs: impl Iterator<Item = (&'a Rational, &'a Rational)>) -> Rational {
    let mut lo = Rational::zero();
    let mut w = Rational::one();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for (a, b) in pairs {
        lo += (a - b).abs() * &w;
        w *= &half;
    }
    lo
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("prefix length k must be at least 1".into()));
    }
    Ok(())
}

/// Largest possible `lo` for `[0, 1]`-valued points: all `k` compared
/// coordinates differ by 1.
pub(crate) fn max_lo(k: usize) -> Rational {
    Rational::from_integer(BigInt::from(2)) - DistBracket::tail(k)
}

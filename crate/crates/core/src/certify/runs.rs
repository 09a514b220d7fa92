//! Maximal runs of exact 1s in `a_k` on integer coordinates, found without
//! scanning: every long run contains a plateau of some `c_j` (or is a copy of
//! a long run one level down), and run ends are located by walking the
//! recursion with exact integer folds.

use std::cmp::{max, min};

use crate::error::Result;
use crate::ladder::Tower;
use crate::scalar::{add, int, mul, sub, ExactInt};

fn fold_int<I: ExactInt>(t: &I, half: &I) -> Result<I> {
    let period = add(half, half)?;
    let k = add(t, half)?.div_floor(&period);
    Ok(sub(t, &mul(&k, &period)?)?)
}

impl<I: ExactInt> Tower<I> {
    /// The plateau `{c_k = 1}` containing integer `t`, if any (`k >= 1`).
    fn c_plateau(&self, k: usize, t: &I) -> Result<Option<(I, I)>> {
        let q = &self.levels[k].scale;
        let two_q = mul(&int(2), q)?;
        let four_q = mul(&int(4), q)?;
        let r = t.mod_floor(&mul(&int(6), q)?);
        if r < two_q || r > four_q {
            return Ok(None);
        }
        Ok(Some((sub(t, &(r.clone() - two_q))?, add(t, &(four_q - r))?)))
    }

    /// Largest `e <= bound` with `a_k = 1` on `[t, e]`; `None` if `a_k(t) != 1`.
    /// Requires `-p[k] <= t <= bound <= p[k]`.
    pub(crate) fn ones_extent_right(&self, k: usize, t: &I, bound: &I) -> Result<Option<I>> {
        if k == 0 {
            let v: i64 = t.to_i64().unwrap_or(i64::MAX);
            return Ok(match v {
                -3 | -2 => Some(min(int(-2), bound.clone())),
                2 | 3 => Some(min(int(3), bound.clone())),
                _ => None,
            });
        }
        let lvl = &self.levels[k];
        let prev_p = &self.levels[k - 1].p;
        let mut cur = t.clone();
        loop {
            if cur > *bound {
                return Ok(Some(bound.clone()));
            }
            if let Some((_, end)) = self.c_plateau(k, &cur)? {
                cur = min(end, bound.clone()) + I::one();
                continue;
            }
            let (shift, region_end) = if cur <= lvl.splice {
                (I::zero(), min(bound.clone(), lvl.splice.clone()))
            } else {
                (I::one(), bound.clone())
            };
            let u = fold_int(&add(&cur, &shift)?, prev_p)?;
            let sub_bound = min(add(&u, &sub(&region_end, &cur)?)?, prev_p.clone() - I::one());
            match self.ones_extent_right(k - 1, &u, &sub_bound)? {
                None => return Ok(if cur == *t { None } else { Some(cur - I::one()) }),
                Some(e) => cur = add(&cur, &(e - u))? + I::one(),
            }
        }
    }

    /// Smallest `s >= bound` with `a_k = 1` on `[s, t]`; `None` if `a_k(t) != 1`.
    pub(crate) fn ones_extent_left(&self, k: usize, t: &I, bound: &I) -> Result<Option<I>> {
        if k == 0 {
            let v: i64 = t.to_i64().unwrap_or(i64::MAX);
            return Ok(match v {
                -3 | -2 => Some(max(int(-3), bound.clone())),
                2 | 3 => Some(max(int(2), bound.clone())),
                _ => None,
            });
        }
        let lvl = &self.levels[k];
        let prev_p = &self.levels[k - 1].p;
        let mut cur = t.clone();
        loop {
            if cur < *bound {
                return Ok(Some(bound.clone()));
            }
            if let Some((start, _)) = self.c_plateau(k, &cur)? {
                cur = max(start, bound.clone()) - I::one();
                continue;
            }
            let (shift, region_start) = if cur <= lvl.splice {
                (I::zero(), bound.clone())
            } else {
                (I::one(), max(bound.clone(), lvl.splice.clone() + I::one()))
            };
            let u = fold_int(&add(&cur, &shift)?, prev_p)?;
            let sub_bound = max(sub(&u, &sub(&cur, &region_start)?)?, -prev_p.clone());
            match self.ones_extent_left(k - 1, &u, &sub_bound)? {
                None => return Ok(if cur == *t { None } else { Some(cur + I::one()) }),
                Some(s) => cur = sub(&cur, &(u - s))? - I::one(),
            }
        }
    }

    /// Intervals inside `[lo, hi]` on which `a_k = 1`, covering at least one
    /// point of every maximal run of length `>= min_len`.
    fn one_seeds(&self, k: usize, lo: &I, hi: &I, min_len: &I, out: &mut Vec<(I, I)>) -> Result<()> {
        if k == 0 {
            for (a, b) in [(int(-3), int(-2)), (int(2), int(3))] {
                let (a, b) = (max(a, lo.clone()), min(b, hi.clone()));
                if a <= b {
                    out.push((a, b));
                }
            }
            return Ok(());
        }
        let lvl = &self.levels[k];
        let q = &lvl.scale;
        let six_q = mul(&int(6), q)?;
        let mut block = sub(lo, &lo.mod_floor(&six_q))?;
        loop {
            let s = add(&block, &mul(&int(2), q)?)?;
            if s > *hi {
                break;
            }
            let e = add(&block, &mul(&int(4), q)?)?;
            let (a, b) = (max(s, lo.clone()), min(e, hi.clone()));
            if a <= b {
                out.push((a, b));
            }
            block = add(&block, &six_q)?;
        }

        // Runs of b_{k-1} have length < 2 p[k-1]; longer ones must touch a
        // plateau of c_k.
        let prev_p = &self.levels[k - 1].p;
        if *min_len > mul(&int(2), prev_p)? {
            return Ok(());
        }
        let regions = [
            (I::zero(), lo.clone(), min(hi.clone(), lvl.splice.clone())),
            (I::one(), max(lo.clone(), lvl.splice.clone() + I::one()), hi.clone()),
        ];
        let mut sub_seeds = Vec::new();
        for (shift, r0, r1) in regions {
            if r0 > r1 {
                continue;
            }
            let last = add(&r1, &shift)?;
            let mut cur = add(&r0, &shift)?;
            while cur <= last {
                let u = fold_int(&cur, prev_p)?;
                let copy_end = min(add(&u, &sub(&last, &cur)?)?, prev_p.clone() - I::one());
                sub_seeds.clear();
                self.one_seeds(k - 1, &u, &copy_end, min_len, &mut sub_seeds)?;
                let delta = sub(&sub(&cur, &u)?, &shift)?;
                for (a, b) in sub_seeds.drain(..) {
                    out.push((add(&a, &delta)?, add(&b, &delta)?));
                }
                cur = add(&cur, &(copy_end - u))? + I::one();
            }
        }
        Ok(())
    }

    /// Maximal runs (clipped to `[lo, hi]`) of `a_k = 1` with length `>= min_len`.
    pub(crate) fn long_ones_runs(&self, k: usize, lo: &I, hi: &I, min_len: &I) -> Result<Vec<(I, I)>> {
        let mut seeds = Vec::new();
        self.one_seeds(k, lo, hi, min_len, &mut seeds)?;
        seeds.sort();
        let mut runs: Vec<(I, I)> = Vec::new();
        for (a, b) in seeds {
            if runs.last().is_some_and(|(_, e)| a <= *e) {
                continue;
            }
            let s = self.ones_extent_left(k, &a, lo)?.expect("seed lies in a run");
            let e = self.ones_extent_right(k, &b, hi)?.expect("seed lies in a run");
            runs.push((s, e));
        }
        runs.retain(|(s, e)| e.clone() - s.clone() + I::one() >= *min_len);
        Ok(runs)
    }
}

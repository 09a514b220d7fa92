//! The parameter ladder and the recursive function family built on it.
//!
//! Level 0 is the tent-like base `a0`; each further level takes the maximum
//! of the previous level's periodic extension and a dilated copy of `b0`,
//! shifting the periodic part by one position past the splice point.

use std::cmp::Ordering;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_big, int, Checked, ExactInt, Frac};

/// `p[0]`.
pub const P0: u32 = 3;

/// How `L[n]` is chosen for each level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// `L[n] = p[n-1]^2`, the smallest admissible value.
    #[default]
    DefaultMinimal,
    /// User-supplied `L[1], L[2], ...`.
    Explicit(Vec<BigInt>),
}

impl Schedule {
    fn l_at(&self, n: usize, p_prev: &BigInt) -> Result<BigInt> {
        let minimum = p_prev * p_prev;
        match self {
            Schedule::DefaultMinimal => Ok(minimum),
            Schedule::Explicit(ls) => {
                let value = ls.get(n - 1).cloned().ok_or(Error::ScheduleExhausted {
                    requested: n,
                    available: ls.len(),
                })?;
                if value < minimum {
                    return Err(Error::ScheduleViolation { index: n, value, minimum });
                }
                Ok(value)
            }
        }
    }

    /// Check every explicit entry against `L[n] >= p[n-1]^2`.
    pub fn validate(&self) -> Result<()> {
        if let Schedule::Explicit(ls) = self {
            let mut p = BigInt::from(P0);
            for n in 1..=ls.len() {
                let l = self.l_at(n, &p)?;
                p = BigInt::from(P0 * P0) * l * p;
            }
        }
        Ok(())
    }
}

/// One rung of the ladder.
#[derive(Clone, Debug)]
pub struct Level<I> {
    /// `L[n]` (zero at level 0).
    pub l: I,
    pub p: I,
    /// `p[n-1] * L[n]`, the dilation of `c_n`.
    pub scale: I,
    /// `p0 * L[n] * p[n-1]`; arguments up to and including it use the
    /// unshifted periodic part.
    pub splice: I,
    pub l_big: BigInt,
    pub p_big: BigInt,
}

/// Append-only parameter tower `p[0] = 3`, `p[n] = p0^2 L[n] p[n-1]`.
///
/// Readers take cheap snapshots ([`Tower`]); extension is serialized behind a
/// write lock and never changes existing entries.
#[derive(Debug)]
pub struct Ladder<I> {
    schedule: Schedule,
    levels: RwLock<Arc<Vec<Level<I>>>>,
}

impl<I: ExactInt> Ladder<I> {
    pub fn new(schedule: Schedule, depth: usize) -> Result<Self> {
        schedule.validate()?;
        let base = Level {
            l: I::zero(),
            p: int(P0 as i64),
            scale: I::zero(),
            splice: I::zero(),
            l_big: BigInt::zero(),
            p_big: BigInt::from(P0),
        };
        let ladder = Ladder { schedule, levels: RwLock::new(Arc::new(vec![base])) };
        ladder.extend_to(depth)?;
        Ok(ladder)
    }

    pub fn default_minimal(depth: usize) -> Result<Self> {
        Self::new(Schedule::DefaultMinimal, depth)
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Highest populated level.
    pub fn depth(&self) -> usize {
        self.tower().depth()
    }

    /// Populate levels up to `depth` (no-op if already there).
    pub fn extend_to(&self, depth: usize) -> Result<()> {
        if self.depth() >= depth {
            return Ok(());
        }
        let mut guard = self.levels.write().expect("ladder lock poisoned");
        let mut levels: Vec<Level<I>> = guard.as_ref().clone();
        while levels.len() <= depth {
            let n = levels.len();
            let prev = &levels[n - 1];
            let l_big = self.schedule.l_at(n, &prev.p_big)?;
            let scale_big = &prev.p_big * &l_big;
            let splice_big = BigInt::from(P0) * &scale_big;
            let p_big = BigInt::from(P0) * &splice_big;
            levels.push(Level {
                l: from_big(&l_big, "L[n]")?,
                p: from_big(&p_big, "p[n]")?,
                scale: from_big(&scale_big, "p[n-1] L[n]")?,
                splice: from_big(&splice_big, "splice point")?,
                l_big,
                p_big,
            });
        }
        *guard = Arc::new(levels);
        Ok(())
    }

    /// Snapshot of the currently populated levels.
    pub fn tower(&self) -> Tower<I> {
        Tower { levels: self.levels.read().expect("ladder lock poisoned").clone() }
    }

    /// Snapshot populated to at least `depth`.
    pub fn tower_to(&self, depth: usize) -> Result<Tower<I>> {
        self.extend_to(depth)?;
        Ok(self.tower())
    }

    pub fn p(&self, n: usize) -> Option<BigInt> {
        self.tower().levels.get(n).map(|l| l.p_big.clone())
    }

    pub fn l(&self, n: usize) -> Option<BigInt> {
        match n {
            0 => None,
            _ => self.tower().levels.get(n).map(|l| l.l_big.clone()),
        }
    }

    /// `eps_n = 1/n`; undefined for `n = 0`.
    pub fn epsilon(n: usize) -> Result<Ratio<BigInt>> {
        if n == 0 {
            return Err(Error::Domain("eps_0 = 1/0 is undefined; levels start at 1".into()));
        }
        Ok(Ratio::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn eval_c(&self, n: usize, t: &Ratio<I>) -> Result<Ratio<I>> {
        if n == 0 {
            return Err(Error::Domain("c_n is defined for n >= 1".into()));
        }
        let tower = self.tower();
        tower.require(n)?;
        Ok(tower.c_raw(n, &Frac::from_ratio(t))?.to_ratio())
    }

    pub fn eval_a(&self, n: usize, t: &Ratio<I>) -> Result<Ratio<I>> {
        let tower = self.tower();
        tower.require(n)?;
        let t = Frac::from_ratio(t);
        tower.check_domain(n, &t)?;
        Ok(tower.a_raw(n, &t)?.to_ratio())
    }

    pub fn eval_b(&self, n: usize, t: &Ratio<I>) -> Result<Ratio<I>> {
        let tower = self.tower();
        tower.require(n)?;
        Ok(tower.b_raw(n, &Frac::from_ratio(t))?.to_ratio())
    }

    /// `a_inf(t)`, extending the ladder until `|t| <= p[n]`.
    pub fn eval_ainf(&self, t: &Ratio<I>) -> Result<Ratio<I>> {
        let t = Frac::from_ratio(t);
        Ok(self.tower_covering(&t)?.ainf_raw(&t)?.to_ratio())
    }

    pub(crate) fn tower_covering(&self, t: &Frac<I>) -> Result<Tower<I>> {
        loop {
            let tower = self.tower();
            if tower.level_for(t)?.is_some() {
                return Ok(tower);
            }
            self.extend_to(tower.depth() + 1)?;
        }
    }
}

/// `a0` on all of the real line.
pub fn eval_a0<I: ExactInt>(t: &Ratio<I>) -> Result<Ratio<I>> {
    Ok(a0_raw(&Frac::from_ratio(t))?.to_ratio())
}

/// `b0`, the `6`-periodic extension of `a0` restricted to `[-3, 3]`.
pub fn eval_b0<I: ExactInt>(t: &Ratio<I>) -> Result<Ratio<I>> {
    Ok(b0_raw(&Frac::from_ratio(t))?.to_ratio())
}

pub(crate) fn a0_raw<I: ExactInt>(x: &Frac<I>) -> Checked<Frac<I>> {
    let n = x.num.abs();
    let d = &x.den;
    // a0 is even, so work with |x|.
    if n <= *d || n > crate::scalar::mul(&int(3), d)? {
        return Ok(Frac::zero());
    }
    if n >= crate::scalar::mul(&int(2), d)? {
        return Ok(Frac::one());
    }
    Ok(Frac { num: n - d.clone(), den: d.clone() })
}

pub(crate) fn b0_raw<I: ExactInt>(x: &Frac<I>) -> Checked<Frac<I>> {
    a0_raw(&x.fold(&int(P0 as i64))?)
}

/// Immutable view of a populated ladder; all evaluation happens here.
#[derive(Clone, Debug)]
pub struct Tower<I> {
    pub(crate) levels: Arc<Vec<Level<I>>>,
}

impl<I: ExactInt> Tower<I> {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> Option<&Level<I>> {
        self.levels.get(n)
    }

    pub(crate) fn require(&self, n: usize) -> Result<()> {
        if n > self.depth() {
            return Err(Error::Depth { requested: n, available: self.depth() });
        }
        Ok(())
    }

    pub(crate) fn check_domain(&self, n: usize, t: &Frac<I>) -> Result<()> {
        let lvl = &self.levels[n];
        if !t.abs_le_int(&lvl.p)? {
            return Err(Error::OutOfDomain {
                level: n,
                t: crate::scalar::ratio_to_string(&t.to_ratio()),
                bound: lvl.p_big.clone(),
            });
        }
        Ok(())
    }

    /// Smallest populated `n` with `|t| <= p[n]`.
    pub(crate) fn level_for(&self, t: &Frac<I>) -> Result<Option<usize>> {
        for (n, lvl) in self.levels.iter().enumerate() {
            if t.abs_le_int(&lvl.p)? {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    pub(crate) fn c_raw(&self, n: usize, t: &Frac<I>) -> Checked<Frac<I>> {
        b0_raw(&t.div_int(&self.levels[n].scale)?)
    }

    /// `a_n(t)` for `|t| <= p[n]` (caller checks the domain).
    pub(crate) fn a_raw(&self, n: usize, t: &Frac<I>) -> Checked<Frac<I>> {
        if n == 0 {
            return a0_raw(t);
        }
        let c = self.c_raw(n, t)?;
        if c.is_one() {
            return Ok(c);
        }
        let lvl = &self.levels[n];
        let b = match t.cmp_int(&lvl.splice)? {
            Ordering::Greater => self.b_raw(n - 1, &t.add_int(&I::one())?)?,
            _ => self.b_raw(n - 1, t)?,
        };
        b.max(c)
    }

    /// `b_n(t)`: `a_n` on the representative of `t` in `[-p[n], p[n])`.
    pub(crate) fn b_raw(&self, n: usize, t: &Frac<I>) -> Checked<Frac<I>> {
        self.a_raw(n, &t.fold(&self.levels[n].p)?)
    }

    pub(crate) fn ainf_raw(&self, t: &Frac<I>) -> Result<Frac<I>> {
        match self.level_for(t)? {
            Some(n) => Ok(self.a_raw(n, t)?),
            None => Err(Error::Depth { requested: self.depth() + 1, available: self.depth() }),
        }
    }

    /// `alpha(i) = a_inf(i)` for an integer index.
    pub(crate) fn alpha_raw(&self, i: &I) -> Result<Frac<I>> {
        self.ainf_raw(&Frac::int(i.clone()))
    }
}

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::Ladder;
use crate::scalar::{from_big, to_big_ratio, ExactInt, Frac};
use crate::sequence::{SeqWindow, TransitiveSymbols};
use crate::Rational;

/// What an orbit source is backed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitKind {
    AlphaOrbit,
    WindowFile,
    FullShiftFixture,
    FixedPoint,
}

/// A point of the Hilbert cube read coordinate by coordinate. Access is
/// deterministic and safe from many threads.
pub trait OrbitSource: Send + Sync {
    fn kind(&self) -> OrbitKind;

    /// Coordinate `i` of the point.
    fn value(&self, i: u64) -> Result<Rational>;

    /// Coordinates `start .. start + len`.
    fn values(&self, start: u64, len: usize) -> Result<Vec<Rational>> {
        (0..len as u64).map(|j| self.value(start + j)).collect()
    }

    /// Short human-readable description.
    fn describe(&self) -> String;
}

impl fmt::Debug for dyn OrbitSource + '_ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// `sigma^base(alpha)`.
pub struct AlphaOrbit<I> {
    ladder: Ladder<I>,
    base: BigUint,
}

impl<I: ExactInt> AlphaOrbit<I> {
    pub fn new(ladder: Ladder<I>, base: BigUint) -> Self {
        AlphaOrbit { ladder, base }
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    fn index(&self, i: u64) -> Result<I> {
        from_big(&BigInt::from(&self.base + i), "alpha index")
    }
}

impl<I: ExactInt> OrbitSource for AlphaOrbit<I> {
    fn kind(&self) -> OrbitKind {
        OrbitKind::AlphaOrbit
    }

    fn value(&self, i: u64) -> Result<Rational> {
        self.values(i, 1).map(|mut v| v.pop().expect("one value"))
    }

    fn values(&self, start: u64, len: usize) -> Result<Vec<Rational>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        let last = self.index(start + len as u64 - 1)?;
        let tower = self.ladder.tower_covering(&Frac::int(last))?;
        let first = self.index(start)?;
        let mut out = Vec::with_capacity(len);
        let mut t = first;
        for _ in 0..len {
            out.push(to_big_ratio(&tower.alpha_raw(&t)?.to_ratio()));
            t = t + I::one();
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        if self.base.is_zero() {
            "alpha".into()
        } else {
            format!("alpha+{}", self.base)
        }
    }
}

/// A finite window read from coordinate 0; reads past its end fail with
/// [`Error::OrbitExhausted`].
pub struct WindowOrbit {
    values: Vec<Rational>,
    label: String,
}

impl WindowOrbit {
    pub fn new<I: ExactInt>(window: &SeqWindow<I>, label: impl Into<String>) -> Self {
        WindowOrbit { values: window.values().iter().map(to_big_ratio).collect(), label: label.into() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl OrbitSource for WindowOrbit {
    fn kind(&self) -> OrbitKind {
        OrbitKind::WindowFile
    }

    fn value(&self, i: u64) -> Result<Rational> {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.values.get(i))
            .cloned()
            .ok_or(Error::OrbitExhausted { index: i, available: self.values.len() as u64 })
    }

    fn values(&self, start: u64, len: usize) -> Result<Vec<Rational>> {
        let end = start.checked_add(len as u64).filter(|&e| e <= self.values.len() as u64);
        match end {
            Some(end) => Ok(self.values[start as usize..end as usize].to_vec()),
            None => Err(Error::OrbitExhausted {
                index: start.max(self.values.len() as u64),
                available: self.values.len() as u64,
            }),
        }
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// The transitive point of `{0,1}^N` listing all words in length-lex order,
/// generated on demand.
#[derive(Clone, Copy, Debug, Default)]
pub struct FullShiftOrbit;

impl OrbitSource for FullShiftOrbit {
    fn kind(&self) -> OrbitKind {
        OrbitKind::FullShiftFixture
    }

    fn value(&self, i: u64) -> Result<Rational> {
        Ok(bit(TransitiveSymbols::starting_at(i).next().expect("infinite")))
    }

    fn values(&self, start: u64, len: usize) -> Result<Vec<Rational>> {
        Ok(TransitiveSymbols::starting_at(start).take(len).map(bit).collect())
    }

    fn describe(&self) -> String {
        "full-shift".into()
    }
}

fn bit(b: u8) -> Rational {
    if b == 1 {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Periodic point `w w w ...`; a single-symbol word is a fixed point.
#[derive(Clone, Debug)]
pub struct PeriodicOrbit {
    word: Vec<Rational>,
}

impl PeriodicOrbit {
    pub fn new(word: Vec<Rational>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Precondition("periodic word must be nonempty".into()));
        }
        if let Some(v) = word.iter().find(|v| **v < Rational::zero() || **v > Rational::one()) {
            return Err(Error::Domain(format!("value {v} outside [0, 1]")));
        }
        Ok(PeriodicOrbit { word })
    }

    /// The fixed point `v^inf`.
    pub fn constant(v: Rational) -> Result<Self> {
        Self::new(vec![v])
    }

    /// `(0^q 1^q)^inf`, which differs from its `q`-shift everywhere.
    pub fn rigidity_witness(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Precondition("q must be at least 1".into()));
        }
        let q = q as usize;
        Self::new((0..2 * q).map(|i| if i < q { Rational::zero() } else { Rational::one() }).collect())
    }

    pub fn word(&self) -> &[Rational] {
        &self.word
    }
}

impl OrbitSource for PeriodicOrbit {
    fn kind(&self) -> OrbitKind {
        if self.word.len() == 1 {
            OrbitKind::FixedPoint
        } else {
            OrbitKind::FullShiftFixture
        }
    }

    fn value(&self, i: u64) -> Result<Rational> {
        Ok(self.word[(i % self.word.len() as u64) as usize].clone())
    }

    fn describe(&self) -> String {
        let w: Vec<String> = self.word.iter().map(crate::scalar::ratio_to_string).collect();
        format!("({})^inf", w.join(" "))
    }
}

/// `sigma^shift` applied to a source.
#[derive(Clone, Copy)]
pub struct View<'a> {
    pub source: &'a dyn OrbitSource,
    pub shift: u64,
}

impl<'a> View<'a> {
    pub fn new(source: &'a dyn OrbitSource) -> Self {
        View { source, shift: 0 }
    }

    pub fn shifted(source: &'a dyn OrbitSource, shift: u64) -> Self {
        View { source, shift }
    }

    pub fn value(&self, i: u64) -> Result<Rational> {
        self.source.value(self.offset(i)?)
    }

    pub fn values(&self, start: u64, len: usize) -> Result<Vec<Rational>> {
        self.source.values(self.offset(start)?, len)
    }

    fn offset(&self, i: u64) -> Result<u64> {
        i.checked_add(self.shift).ok_or(Error::Overflow("orbit index"))
    }
}

impl fmt::Debug for View<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma^{}({})", self.shift, self.source.describe())
    }
}

//! Points of the Bebutov system as finite windows, the shift, bracketed
//! distances, and the fixtures used by the relation engine.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::Ladder;
use crate::plfunc::PLFunc;
use crate::scalar::{from_big, to_big_ratio, ExactInt, Frac};
use crate::Rational;

/// Contiguous coordinates `offset .. offset + len` of a point in `[0,1]^N`.
#[derive(Clone, Debug)]
pub struct SeqWindow<I> {
    offset: BigUint,
    values: Vec<Ratio<I>>,
}

impl<I: ExactInt> PartialEq for SeqWindow<I> {
    fn eq(&self, other: &Self) -> bool {
        self.offset == other.offset && self.values == other.values
    }
}

impl<I: ExactInt> Eq for SeqWindow<I> {}

impl<I: ExactInt> SeqWindow<I> {
    pub fn new(offset: BigUint, values: Vec<Ratio<I>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition("a window needs at least one value".into()));
        }
        let (zero, one) = (Ratio::<I>::zero(), Ratio::<I>::one());
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| **v < zero || **v > one) {
            return Err(Error::Domain(format!("value {v} at position {i} is outside [0, 1]")));
        }
        Ok(SeqWindow { offset, values })
    }

    /// `len` copies of `value`, e.g. a prefix of the fixed point `1^inf`.
    pub fn constant(offset: BigUint, value: Ratio<I>, len: usize) -> Result<Self> {
        Self::new(offset, vec![value; len])
    }

    pub fn offset(&self) -> &BigUint {
        &self.offset
    }

    pub fn values(&self) -> &[Ratio<I>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sigma^k`: drop the first `k` coordinates.
    pub fn shift(&self, k: u64) -> Result<Self> {
        let len = self.values.len();
        match usize::try_from(k) {
            Ok(k) if k < len => Ok(SeqWindow {
                offset: &self.offset + BigUint::from(k),
                values: self.values[k..].to_vec(),
            }),
            _ => Err(Error::EmptyWindow { shift: k, len }),
        }
    }
}

/// Enclosure `[lo, hi]` of the Bebutov distance of any two infinite points
/// extending the compared prefixes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistBracket {
    #[serde(with = "crate::exact")]
    pub lo: Rational,
    #[serde(with = "crate::exact")]
    pub hi: Rational,
}

impl DistBracket {
    /// Width `2^(1-k)` of the unseen tail after `k` compared coordinates.
    pub fn tail(k: usize) -> Rational {
        Rational::new(BigInt::from(2), BigInt::one() << k)
    }

    pub fn from_partial(lo: Rational, k: usize) -> Self {
        let hi = &lo + Self::tail(k);
        DistBracket { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Bracket of `d(x, y)` from the first `k = min(len x, len y)` coordinates.
/// Both windows are read from their own coordinate 0.
pub fn bebutov_dist_bracket<I: ExactInt>(x: &SeqWindow<I>, y: &SeqWindow<I>) -> DistBracket {
    let k = x.len().min(y.len());
    let mut lo = Rational::zero();
    let mut weight = Rational::one();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for (a, b) in x.values.iter().zip(&y.values) {
        lo += (to_big_ratio(a) - to_big_ratio(b)).abs() * &weight;
        weight *= &half;
    }
    DistBracket::from_partial(lo, k)
}

/// `alpha(i) = a_inf(i)`.
pub fn alpha<I: ExactInt>(ladder: &Ladder<I>, i: &BigUint) -> Result<Ratio<I>> {
    let t: I = from_big(&BigInt::from(i.clone()), "index")?;
    let t = Frac::int(t);
    Ok(ladder.tower_covering(&t)?.ainf_raw(&t)?.to_ratio())
}

/// `alpha(start), ..., alpha(start + len - 1)`.
pub fn alpha_window<I: ExactInt>(ladder: &Ladder<I>, start: &BigUint, len: usize) -> Result<SeqWindow<I>> {
    if len == 0 {
        return Err(Error::Precondition("window length must be at least 1".into()));
    }
    let first: I = from_big(&BigInt::from(start.clone()), "index")?;
    let last = crate::scalar::add(&first, &I::from_usize(len - 1).ok_or(Error::Overflow("index"))?)?;
    let tower = ladder.tower_covering(&Frac::int(last))?;
    let mut values = Vec::with_capacity(len);
    let mut t = first;
    for _ in 0..len {
        values.push(tower.alpha_raw(&t)?.to_ratio());
        t = t + I::one();
    }
    Ok(SeqWindow { offset: start.clone(), values })
}

/// Symbol at position `i` of the concatenation of all binary words in
/// length-lexicographic order (`0, 1, 00, 01, 10, 11, 000, ...`).
pub fn transitive_symbol(i: u64) -> u8 {
    TransitiveSymbols::starting_at(i).next().expect("infinite sequence")
}

/// Streaming form of [`transitive_symbol`].
#[derive(Clone, Debug)]
pub struct TransitiveSymbols {
    word_len: u32,
    word: u64,
    pos: u32,
}

impl TransitiveSymbols {
    pub fn starting_at(i: u64) -> Self {
        // Words of length l start at (l - 2) 2^l + 2.
        let mut word_len = 1u32;
        let mut block_start = 0u64;
        loop {
            let block = u64::from(word_len) << word_len;
            if i - block_start < block {
                break;
            }
            block_start += block;
            word_len += 1;
        }
        let r = i - block_start;
        TransitiveSymbols {
            word_len,
            word: r / u64::from(word_len),
            pos: (r % u64::from(word_len)) as u32,
        }
    }
}

impl Iterator for TransitiveSymbols {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        let bit = ((self.word >> (self.word_len - 1 - self.pos)) & 1) as u8;
        self.pos += 1;
        if self.pos == self.word_len {
            self.pos = 0;
            self.word += 1;
            if self.word == 1u64 << self.word_len {
                self.word = 0;
                self.word_len += 1;
            }
        }
        Some(bit)
    }
}

/// Prefix of a transitive point of the full shift on `{0, 1}`.
pub fn full_shift_transitive_point<I: ExactInt>(len: usize) -> Result<SeqWindow<I>> {
    if len == 0 {
        return Err(Error::Precondition("window length must be at least 1".into()));
    }
    let values = TransitiveSymbols::starting_at(0)
        .take(len)
        .map(|b| Ratio::from_integer(if b == 1 { I::one() } else { I::zero() }))
        .collect();
    Ok(SeqWindow { offset: BigUint::zero(), values })
}

/// Prefix of `(0^n 1^n)^inf`, which differs from its `n`-shift in every
/// coordinate.
pub fn full_shift_rigidity_witness<I: ExactInt>(n: u64, len: usize) -> Result<SeqWindow<I>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if (len as u128) < 2 * n as u128 {
        return Err(Error::Precondition(format!("length {len} is shorter than 2n = {}", 2 * n)));
    }
    let values = (0..len as u64)
        .map(|i| Ratio::from_integer(if (i / n).is_multiple_of(2) { I::zero() } else { I::one() }))
        .collect();
    Ok(SeqWindow { offset: BigUint::zero(), values })
}

/// Parameters of the classic sup-of-dilations generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicKWSpec {
    /// Profile on `[-1, 1]` with equal end values.
    pub base: PLFunc,
    pub lipschitz: Rational,
    /// Strictly increasing dilations, each `> 1`.
    pub pj: Vec<BigInt>,
    /// Number of dilations used.
    pub truncation: usize,
}

impl ClassicKWSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.base.domain();
        let one = Rational::one();
        if *lo != -one.clone() || *hi != one {
            return Err(Error::InvalidSpec(format!("base must be given on [-1, 1], got [{lo}, {hi}]")));
        }
        if self.base.eval(&-one.clone()) != self.base.eval(&one) {
            return Err(Error::InvalidSpec("base(1) must equal base(-1)".into()));
        }
        if self.lipschitz < Rational::from_integer(BigInt::from(2)) {
            return Err(Error::InvalidSpec(format!("Lipschitz constant {} is below 2", self.lipschitz)));
        }
        let slope = self.base.max_slope();
        if slope > self.lipschitz {
            return Err(Error::InvalidSpec(format!(
                "segment slope {slope} exceeds the Lipschitz constant {}",
                self.lipschitz
            )));
        }
        if self.pj.iter().any(|p| *p <= BigInt::one()) {
            return Err(Error::InvalidSpec("every dilation must exceed 1".into()));
        }
        if self.pj.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("dilations must increase strictly".into()));
        }
        if self.truncation == 0 || self.truncation > self.pj.len() {
            return Err(Error::InvalidSpec(format!(
                "truncation {} must lie in 1..={}",
                self.truncation,
                self.pj.len()
            )));
        }
        Ok(())
    }

    /// The 2-periodic repetition of the base profile.
    fn periodic_base(&self, s: &Rational) -> Rational {
        let two = BigInt::from(2);
        let k = ((s + Rational::one()) / Rational::from_integer(two.clone())).floor();
        self.base.eval(&(s - k * Rational::from_integer(two)))
    }
}

/// `max_{j < J} a1(t / p_j)`: a lower bound for the full supremum,
/// nondecreasing in `J`.
pub fn classic_kw_eval(spec: &ClassicKWSpec, t: &Rational) -> Result<Rational> {
    spec.validate()?;
    Ok(spec.pj[..spec.truncation]
        .iter()
        .map(|p| spec.periodic_base(&(t / Rational::from_integer(p.clone()))))
        .max()
        .expect("truncation >= 1"))
}

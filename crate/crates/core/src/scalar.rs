//! Exact scalar abstraction.
//!
//! All values are ratios `Ratio<I>` over an integer type `I`. Arbitrary
//! precision (`BigInt`) never fails; fixed-width integers (`i64`, `i128`) run
//! the same algorithms much faster and report [`Error::Overflow`] instead of
//! wrapping, so results are exact whenever they are returned at all.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer types usable as the numerator/denominator of exact values.
pub trait ExactInt:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Into<BigInt>
    + TryFrom<BigInt>
    + Send
    + Sync
    + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + Into<BigInt>
        + TryFrom<BigInt>
        + Send
        + Sync
        + 'static
{
}

pub(crate) fn int<I: ExactInt>(v: i64) -> I {
    I::from_i64(v).expect("small constant fits every ExactInt")
}

pub(crate) fn from_big<I: ExactInt>(v: &BigInt, what: &'static str) -> Result<I> {
    I::try_from(v.clone()).map_err(|_| Error::Overflow(what))
}

/// Overflow on an evaluation hot path; kept small so `Result`s stay cheap
/// to pass around, and widened into [`Error::Overflow`] at the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Overflow(pub &'static str);

pub(crate) type Checked<T> = std::result::Result<T, Overflow>;

impl From<Overflow> for Error {
    fn from(o: Overflow) -> Self {
        Error::Overflow(o.0)
    }
}

pub(crate) fn mul<I: ExactInt>(a: &I, b: &I) -> Checked<I> {
    a.checked_mul(b).ok_or(Overflow("product"))
}

pub(crate) fn add<I: ExactInt>(a: &I, b: &I) -> Checked<I> {
    a.checked_add(b).ok_or(Overflow("sum"))
}

pub(crate) fn sub<I: ExactInt>(a: &I, b: &I) -> Checked<I> {
    a.checked_sub(b).ok_or(Overflow("difference"))
}

/// Widen any exact ratio to the arbitrary-precision representation.
pub fn to_big_ratio<I: ExactInt>(r: &Ratio<I>) -> Ratio<BigInt> {
    Ratio::new_raw(r.numer().clone().into(), r.denom().clone().into())
}

/// Narrow an arbitrary-precision ratio, failing if it does not fit.
pub fn from_big_ratio<I: ExactInt>(r: &Ratio<BigInt>) -> Result<Ratio<I>> {
    Ok(Ratio::new_raw(
        from_big(r.numer(), "numerator")?,
        from_big(r.denom(), "denominator")?,
    ))
}

/// Canonical `"num/den"` rendering (denominator always present).
pub fn ratio_to_string<I: ExactInt>(r: &Ratio<I>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"num/den"` or a plain integer into a reduced ratio.
pub fn parse_ratio<I: ExactInt>(s: &str) -> std::result::Result<Ratio<I>, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|e| format!("bad numerator {n:?}: {e}"))?;
    let d = BigInt::from_str(d).map_err(|e| format!("bad denominator {d:?}: {e}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    let r = Ratio::new(n, d);
    from_big_ratio(&r).map_err(|e| e.to_string())
}

/// Render an exact value as a decimal with `places` fractional digits,
/// truncated toward zero. Presentation only.
pub fn render_decimal(r: &Ratio<BigInt>, places: usize) -> String {
    let neg = r.is_negative();
    let abs = r.abs();
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let (whole, frac) = scaled.div_rem(&scale);
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places)
    }
}

/// Unreduced fraction with positive denominator, used on evaluation hot
/// paths where gcd reduction would dominate. Every operation is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Frac<I> {
    pub num: I,
    pub den: I,
}

impl<I: ExactInt> Frac<I> {
    pub fn int(v: I) -> Self {
        Frac { num: v, den: I::one() }
    }

    pub fn zero() -> Self {
        Frac { num: I::zero(), den: I::one() }
    }

    pub fn one() -> Self {
        Frac { num: I::one(), den: I::one() }
    }

    pub fn from_ratio(r: &Ratio<I>) -> Self {
        Frac { num: r.numer().clone(), den: r.denom().clone() }
    }

    pub fn to_ratio(&self) -> Ratio<I> {
        Ratio::new(self.num.clone(), self.den.clone())
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn try_cmp(&self, other: &Self) -> Checked<Ordering> {
        if self.den == other.den {
            return Ok(self.num.cmp(&other.num));
        }
        Ok(mul(&self.num, &other.den)?.cmp(&mul(&other.num, &self.den)?))
    }

    pub fn max(self, other: Self) -> Checked<Self> {
        Ok(match self.try_cmp(&other)? {
            Ordering::Less => other,
            _ => self,
        })
    }

    pub fn abs_diff(&self, other: &Self) -> Checked<Self> {
        if self.den == other.den {
            return Ok(Frac { num: (self.num.clone() - other.num.clone()).abs(), den: self.den.clone() });
        }
        let a = mul(&self.num, &other.den)?;
        let b = mul(&other.num, &self.den)?;
        Ok(Frac { num: sub(&a, &b)?.abs(), den: mul(&self.den, &other.den)? })
    }

    /// `self + k` for integer `k`.
    pub fn add_int(&self, k: &I) -> Checked<Self> {
        Ok(Frac { num: add(&self.num, &mul(k, &self.den)?)?, den: self.den.clone() })
    }

    /// `self / q` for positive integer `q`.
    pub fn div_int(&self, q: &I) -> Checked<Self> {
        Ok(Frac { num: self.num.clone(), den: mul(&self.den, q)? })
    }

    /// Compare with an integer.
    pub fn cmp_int(&self, k: &I) -> Checked<Ordering> {
        Ok(self.num.cmp(&mul(k, &self.den)?))
    }

    /// `|self| <= k`.
    pub fn abs_le_int(&self, k: &I) -> Checked<bool> {
        Ok(self.num.abs() <= mul(k, &self.den)?)
    }

    /// Representative of `self` modulo `2*half` in `[-half, half)`.
    pub fn fold(&self, half: &I) -> Checked<Self> {
        let hd = mul(half, &self.den)?;
        if self.num >= -hd.clone() && self.num < hd {
            return Ok(self.clone());
        }
        let period = add(&hd, &hd)?;
        let k = add(&self.num, &hd)?.div_floor(&period);
        if k.is_zero() {
            return Ok(self.clone());
        }
        Ok(Frac { num: sub(&self.num, &mul(&k, &period)?)?, den: self.den.clone() })
    }
}

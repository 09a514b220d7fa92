//! Exact construction of a weakly mixing, proximal, uniformly rigid
//! subsystem of the Bebutov shift, finite certificates for the quantitative
//! facts behind those properties, and a finite-horizon witness engine for
//! proximal, separated and recurrent pairs.
//!
//! Every computation is exact. The core is generic over the integer type
//! underlying its rationals (see [`scalar::ExactInt`]); the aliases below
//! fix the common choices.

pub mod certify;
pub mod error;
pub mod exact;
pub mod ladder;
pub mod plfunc;
pub mod relations;
pub mod scalar;
pub mod sequence;
pub mod window_io;

use num_bigint::BigInt;
use num_rational::Ratio;

pub use error::{Error, Result};
pub use ladder::{eval_a0, eval_b0, Schedule};
pub use plfunc::PLFunc;
pub use scalar::ExactInt;
pub use sequence::{bebutov_dist_bracket, ClassicKWSpec, DistBracket};

/// Arbitrary-precision exact rational; used for all reported values.
pub type Rational = Ratio<BigInt>;
pub type Rational64 = Ratio<i64>;
pub type Rational128 = Ratio<i128>;

/// Ladder over arbitrary-precision integers (never overflows).
pub type BigLadder = ladder::Ladder<BigInt>;
/// Fast ladder for levels whose parameters fit in `i64` (depth <= 2).
pub type Ladder64 = ladder::Ladder<i64>;
/// Fast ladder for levels whose parameters fit in `i128` (depth <= 3).
pub type Ladder128 = ladder::Ladder<i128>;

pub type Window = sequence::SeqWindow<BigInt>;
pub type Window64 = sequence::SeqWindow<i64>;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Piecewise-linear function given by its breakpoints; linear between them
/// and zero outside `[x_first, x_last]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunc {
    breakpoints: Vec<(Rational, Rational)>,
}

impl PLFunc {
    pub fn new(breakpoints: Vec<(Rational, Rational)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidSpec("piecewise-linear function needs a breakpoint".into()));
        }
        for w in breakpoints.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidSpec(format!(
                    "breakpoint abscissae must increase strictly ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some((x, y)) = breakpoints.iter().find(|(_, y)| y.is_negative() || *y > Rational::one()) {
            return Err(Error::InvalidSpec(format!("value {y} at {x} is outside [0, 1]")));
        }
        Ok(PLFunc { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0].0, &self.breakpoints[self.breakpoints.len() - 1].0)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let bp = &self.breakpoints;
        let idx = bp.partition_point(|(x, _)| x < t);
        if idx < bp.len() && bp[idx].0 == *t {
            return bp[idx].1.clone();
        }
        if idx == 0 || idx == bp.len() {
            return Rational::zero();
        }
        let (x0, y0) = &bp[idx - 1];
        let (x1, y1) = &bp[idx];
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }

    /// Largest absolute segment slope (zero for a single breakpoint).
    pub fn max_slope(&self) -> Rational {
        self.breakpoints
            .windows(2)
            .map(|w| ((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

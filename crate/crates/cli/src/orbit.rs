use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use wkdyn::relations::{AlphaOrbit, FullShiftOrbit, OrbitSource, PeriodicOrbit, WindowOrbit};
use wkdyn::scalar::{parse_ratio, ExactInt};
use wkdyn::{window_io, Rational, Schedule};

/// Command-line description of a point.
///
/// `alpha`, `alpha+OFF`, `full-shift`, `const:V`, `rigid:Q`, or a window
/// file (`.json`, otherwise CSV).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitSpec {
    Alpha(BigUint),
    FullShift,
    Const(Rational),
    Rigid(u64),
    File(PathBuf),
}

impl FromStr for OrbitSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "alpha" {
            return Ok(OrbitSpec::Alpha(BigUint::default()));
        }
        if let Some(off) = s.strip_prefix("alpha+") {
            return Ok(OrbitSpec::Alpha(off.parse().with_context(|| format!("bad alpha offset {off:?}"))?));
        }
        if s == "full-shift" {
            return Ok(OrbitSpec::FullShift);
        }
        if let Some(v) = s.strip_prefix("const:") {
            return Ok(OrbitSpec::Const(parse_ratio(v).map_err(anyhow::Error::msg)?));
        }
        if let Some(q) = s.strip_prefix("rigid:") {
            let q: u64 = q.parse().with_context(|| format!("bad period {q:?}"))?;
            if q == 0 {
                bail!("rigid:Q needs Q >= 1");
            }
            return Ok(OrbitSpec::Rigid(q));
        }
        if s.is_empty() {
            bail!("empty orbit spec");
        }
        Ok(OrbitSpec::File(PathBuf::from(s)))
    }
}

impl std::fmt::Display for OrbitSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrbitSpec::Alpha(off) if off == &BigUint::default() => f.write_str("alpha"),
            OrbitSpec::Alpha(off) => write!(f, "alpha+{off}"),
            OrbitSpec::FullShift => f.write_str("full-shift"),
            OrbitSpec::Const(v) => write!(f, "const:{}", wkdyn::scalar::ratio_to_string(v)),
            OrbitSpec::Rigid(q) => write!(f, "rigid:{q}"),
            OrbitSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl OrbitSpec {
    pub fn build<I: ExactInt>(&self, schedule: &Schedule) -> Result<Box<dyn OrbitSource>> {
        Ok(match self {
            OrbitSpec::Alpha(off) => {
                Box::new(AlphaOrbit::new(wkdyn::ladder::Ladder::<I>::new(schedule.clone(), 0)?, off.clone()))
            }
            OrbitSpec::FullShift => Box::new(FullShiftOrbit),
            OrbitSpec::Const(v) => Box::new(PeriodicOrbit::constant(v.clone())?),
            OrbitSpec::Rigid(q) => Box::new(PeriodicOrbit::rigidity_witness(*q)?),
            OrbitSpec::File(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let window = if path.extension().is_some_and(|e| e == "json") {
                    window_io::from_json::<num_bigint::BigInt>(&text)
                } else {
                    window_io::from_csv::<num_bigint::BigInt>(&text)
                }
                .with_context(|| format!("parsing {}", path.display()))?;
                Box::new(WindowOrbit::new(&window, path.display().to_string()))
            }
        })
    }
}

//! Finite-horizon witnesses for proximality, separation and pair
//! recurrence of orbits under the shift, and the orbit-scrambling searches
//! built from them.
//!
//! Limits are never decided. A search reports the best exact distance
//! bracket it saw at a stated horizon and prefix length; labels follow
//! mechanically from those brackets and the caller's thresholds.

mod search;
mod source;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::DistBracket;
use crate::Rational;

pub use search::view_dist;
pub use source::{AlphaOrbit, FullShiftOrbit, OrbitKind, OrbitSource, PeriodicOrbit, View, WindowOrbit};

/// Best time of a search with the exact bracket there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Found {
    pub time: u64,
    pub bracket: DistBracket,
}

/// A search result that met its threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub time: u64,
    #[serde(with = "crate::exact")]
    pub value: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    ProximalWitnessed,
    DeltaSeparatedWitnessed,
    PairRecurrentWitnessed,
    Inconclusive,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::ProximalWitnessed => "proximal-witnessed",
            Label::DeltaSeparatedWitnessed => "delta-separated-witnessed",
            Label::PairRecurrentWitnessed => "pair-recurrent-witnessed",
            Label::Inconclusive => "inconclusive",
        }
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Label::ProximalWitnessed, Label::DeltaSeparatedWitnessed, Label::PairRecurrentWitnessed, Label::Inconclusive]
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown label {s:?}")))
    }
}

/// Raw search outcomes behind a verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Searches {
    pub prox: Option<Found>,
    pub sep: Option<Found>,
    pub recur: Option<Found>,
    /// Joint distance of both views to the fixed point at the proximality
    /// time, when that time was chosen through a fixed point.
    pub anchor: Option<Found>,
}

/// Finite evidence about one pair of points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub pair: (String, String),
    /// `(time, hi)` with `hi < tau`.
    pub prox_witness: Option<Witness>,
    /// `(time, lo)` with `lo >= delta - tau`.
    pub sep_witness: Option<Witness>,
    /// `(time, hi)` with `hi < tau`.
    pub recur_witness: Option<Witness>,
    /// Absent when no separation clause was evaluated.
    #[serde(with = "crate::exact::option")]
    pub delta: Option<Rational>,
    #[serde(with = "crate::exact")]
    pub tau: Rational,
    /// `(N, H)`: searched times `N ..= H`.
    pub horizon: (u64, u64),
    pub k: usize,
    pub labels: Vec<Label>,
    pub searches: Searches,
}

impl PairVerdict {
    pub fn has(&self, label: Label) -> bool {
        self.labels.contains(&label)
    }

    fn assemble(pair: (String, String), delta: Option<Rational>, tau: Rational, horizon: (u64, u64), k: usize, searches: Searches) -> Self {
        let prox_witness = searches
            .prox
            .as_ref()
            .filter(|f| f.bracket.hi < tau)
            .map(|f| Witness { time: f.time, value: f.bracket.hi.clone() });
        let sep_witness = match (&searches.sep, &delta) {
            (Some(f), Some(d)) if f.bracket.lo >= d - &tau => Some(Witness { time: f.time, value: f.bracket.lo.clone() }),
            _ => None,
        };
        let recur_witness = searches
            .recur
            .as_ref()
            .filter(|f| f.bracket.hi < tau)
            .map(|f| Witness { time: f.time, value: f.bracket.hi.clone() });
        let mut labels = Vec::new();
        let mut missed = false;
        for (ran, hit, label) in [
            (true, prox_witness.is_some(), Label::ProximalWitnessed),
            (delta.is_some(), sep_witness.is_some(), Label::DeltaSeparatedWitnessed),
            (true, recur_witness.is_some(), Label::PairRecurrentWitnessed),
        ] {
            if hit {
                labels.push(label);
            } else if ran {
                missed = true;
            }
        }
        if missed {
            labels.push(Label::Inconclusive);
        }
        PairVerdict { pair, prox_witness, sep_witness, recur_witness, delta, tau, horizon, k, labels, searches }
    }
}

fn check_range(n: u64, h: u64) -> Result<()> {
    if n > h {
        return Err(Error::Precondition(format!("start {n} exceeds horizon {h}")));
    }
    Ok(())
}

/// Time in `[n, h]` minimizing `d(sigma^t a, sigma^t b)` at prefix `k`.
pub fn prox_defect(a: View<'_>, b: View<'_>, n: u64, h: u64, k: usize) -> Result<Found> {
    check_range(n, h)?;
    let zero = Rational::from_integer(0.into());
    let (time, lo) = search::sliding(&[(a, b)], n, h, k, search::Goal::Min, Some(&zero))?.expect("nonempty range");
    Ok(Found { time, bracket: DistBracket::from_partial(lo, k) })
}

/// Time in `[n, h]` maximizing the lower bound of `d(sigma^t a, sigma^t b)`.
pub fn sep_sup(a: View<'_>, b: View<'_>, n: u64, h: u64, k: usize) -> Result<Found> {
    check_range(n, h)?;
    let cap = search::max_lo(k);
    let (time, lo) = search::sliding(&[(a, b)], n, h, k, search::Goal::Max, Some(&cap))?.expect("nonempty range");
    Ok(Found { time, bracket: DistBracket::from_partial(lo, k) })
}

/// Time `t >= 1` in `[n, h]` minimizing
/// `max(d(sigma^t a, a), d(sigma^t b, b))`, a simultaneous return of the
/// pair. `None` when the range holds no positive time.
pub fn pair_recur_defect(a: View<'_>, b: View<'_>, n: u64, h: u64, k: usize) -> Result<Option<Found>> {
    check_range(n, h)?;
    Ok(search::return_search(a, b, n.max(1), h, k)?
        .map(|(time, lo)| Found { time, bracket: DistBracket::from_partial(lo, k) }))
}

/// Run all three searches on `(a, b)` over `[n, h]` and label the pair.
pub fn classify_pair(
    a: View<'_>,
    b: View<'_>,
    delta: &Rational,
    n: u64,
    h: u64,
    k: usize,
    tau: &Rational,
) -> Result<PairVerdict> {
    let searches = Searches {
        prox: Some(prox_defect(a, b, n, h, k)?),
        sep: Some(sep_sup(a, b, n, h, k)?),
        recur: pair_recur_defect(a, b, n, h, k)?,
        anchor: None,
    };
    Ok(PairVerdict::assemble(describe(a, b), Some(delta.clone()), tau.clone(), (n, h), k, searches))
}

/// For each `(m, n)`, look for times where `sigma^(t+m) x` and
/// `sigma^(t+n) x` sit together near the fixed point `p`, and for
/// simultaneous returns of the pair.
pub fn fixed_point_pair_witnesses(
    x: &dyn OrbitSource,
    p: &dyn OrbitSource,
    pairs: &[(u64, u64)],
    h: u64,
    k: usize,
    tau: &Rational,
) -> Result<Vec<PairVerdict>> {
    if let Some((m, _)) = pairs.iter().find(|(m, n)| m == n) {
        return Err(Error::Precondition(format!("pair ({m}, {m}) needs distinct shifts")));
    }
    let zero = Rational::from_integer(0.into());
    let fixed = View::new(p);
    pairs
        .iter()
        .map(|&(m, n)| {
            let (a, b) = (View::shifted(x, m), View::shifted(x, n));
            let (t, lo) = search::sliding(&[(a, fixed), (b, fixed)], 0, h, k, search::Goal::Min, Some(&zero))?
                .expect("nonempty range");
            let searches = Searches {
                prox: Some(Found { time: t, bracket: view_dist(a, b, t, k)? }),
                sep: None,
                recur: pair_recur_defect(a, b, 0, h, k)?,
                anchor: Some(Found { time: t, bracket: DistBracket::from_partial(lo, k) }),
            };
            Ok(PairVerdict::assemble(describe(a, b), None, tau.clone(), (0, h), k, searches))
        })
        .collect()
}

/// Locate the first time `t <= h` where `x` reads a prefix of
/// `(0^q 1^q)^inf` long enough to separate `sigma^t x` from
/// `sigma^(t+q) x` on `k` coordinates, then search the pair
/// `(x, sigma^q x)` for proximality and simultaneous returns.
pub fn shift_pair_witnesses(
    x: &dyn OrbitSource,
    q: u64,
    delta: &Rational,
    h: u64,
    k: usize,
    tau: &Rational,
) -> Result<PairVerdict> {
    if k == 0 {
        return Err(Error::Precondition("prefix length k must be at least 1".into()));
    }
    let witness = PeriodicOrbit::rigidity_witness(q)?;
    let word = witness.values(0, k + q as usize)?;
    let (a, b) = (View::new(x), View::shifted(x, q));
    let t = search::first_occurrence(a, &word, 0, h)?.ok_or(Error::NotFoundInHorizon { horizon: h })?;
    let searches = Searches {
        prox: Some(prox_defect(a, b, 0, h, k)?),
        sep: Some(Found { time: t, bracket: view_dist(a, b, t, k)? }),
        recur: pair_recur_defect(a, b, 0, h, k)?,
        anchor: None,
    };
    Ok(PairVerdict::assemble(describe(a, b), Some(delta.clone()), tau.clone(), (0, h), k, searches))
}

fn describe(a: View<'_>, b: View<'_>) -> (String, String) {
    (format!("{a:?}"), format!("{b:?}"))
}

#[cfg(test)]
mod tests {
    use num_bigint::{BigInt, BigUint};
    use num_traits::{One, Zero};

    use super::*;
    use crate::Ladder64;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn alpha() -> AlphaOrbit<i64> {
        AlphaOrbit::new(Ladder64::default_minimal(1).unwrap(), BigUint::zero())
    }

    fn ones() -> PeriodicOrbit {
        PeriodicOrbit::constant(Rational::one()).unwrap()
    }

    #[test]
    fn identical_views_are_proximal() {
        let x = FullShiftOrbit;
        let f = prox_defect(View::new(&x), View::new(&x), 3, 100, 8).unwrap();
        assert_eq!(f.time, 3);
        assert_eq!(f.bracket, DistBracket { lo: Rational::zero(), hi: r(1, 128) });
        let s = sep_sup(View::new(&x), View::new(&x), 0, 100, 8).unwrap();
        assert_eq!(s.bracket.lo, Rational::zero());
    }

    #[test]
    fn alpha_meets_one_inside_first_run() {
        let (a, p) = (alpha(), ones());
        let f = prox_defect(View::new(&a), View::new(&p), 0, 1000, 10).unwrap();
        assert_eq!(f.time, 54);
        assert_eq!(f.bracket.hi, DistBracket::tail(10));
    }

    #[test]
    fn full_shift_meets_zero_at_first_long_zero_run() {
        let (x, z) = (FullShiftOrbit, PeriodicOrbit::constant(Rational::zero()).unwrap());
        let f = prox_defect(View::new(&x), View::new(&z), 0, 5000, 6).unwrap();
        let scan = (0u64..).find(|&t| (0..6).all(|i| crate::sequence::transitive_symbol(t + i) == 0)).unwrap();
        assert_eq!(f.time, scan);
        assert!(f.bracket.lo.is_zero());
    }

    #[test]
    fn rigidity_witness_separates_from_its_shift() {
        let w = PeriodicOrbit::rigidity_witness(3).unwrap();
        let s = sep_sup(View::new(&w), View::shifted(&w, 3), 0, 50, 12).unwrap();
        assert_eq!(s.time, 0);
        assert_eq!(s.bracket.lo, r(2, 1) - DistBracket::tail(12));
    }

    #[test]
    fn alpha_separates_from_one_at_start() {
        let (a, p) = (alpha(), ones());
        let s = sep_sup(View::new(&a), View::new(&p), 0, 1, 8).unwrap();
        assert!(s.bracket.lo >= Rational::one());
    }

    #[test]
    fn constant_orbits_return_immediately() {
        let (p, z) = (ones(), PeriodicOrbit::constant(Rational::zero()).unwrap());
        let f = pair_recur_defect(View::new(&p), View::new(&z), 0, 10, 5).unwrap().unwrap();
        assert_eq!(f.time, 1);
        assert_eq!(f.bracket, DistBracket { lo: Rational::zero(), hi: DistBracket::tail(5) });
        assert_eq!(pair_recur_defect(View::new(&p), View::new(&z), 0, 0, 5).unwrap(), None);
    }

    #[test]
    fn alpha_returns_at_rigidity_time() {
        let a = alpha();
        let f = pair_recur_defect(View::new(&a), View::new(&a), 486, 486, 12).unwrap().unwrap();
        assert!(f.bracket.hi < Rational::one() + DistBracket::tail(12));
    }

    #[test]
    fn classify_alpha_against_fixed_point() {
        let (a, p) = (alpha(), ones());
        let v = classify_pair(View::new(&a), View::new(&p), &Rational::one(), 0, 100_000, 12, &r(1, 1000)).unwrap();
        assert!(v.has(Label::ProximalWitnessed));
        assert!(v.has(Label::DeltaSeparatedWitnessed));
        assert_eq!(v.prox_witness.as_ref().unwrap().time, 54);
    }

    #[test]
    fn classify_identical_orbits() {
        let x = FullShiftOrbit;
        let v = classify_pair(View::new(&x), View::new(&x), &r(1, 2), 0, 200, 10, &r(1, 100)).unwrap();
        assert!(v.has(Label::ProximalWitnessed));
        assert!(!v.has(Label::DeltaSeparatedWitnessed));
        assert!(v.has(Label::Inconclusive));
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["labels"][0], "proximal-witnessed");
        assert_eq!(json["delta"], "1/2");
    }

    #[test]
    fn fixed_point_pairs_on_alpha() {
        let (a, p) = (alpha(), ones());
        let v = fixed_point_pair_witnesses(&a, &p, &[(0, 1)], 100_000, 10, &r(1, 100)).unwrap();
        assert_eq!(v.len(), 1);
        let w = v[0].prox_witness.as_ref().unwrap();
        assert_eq!(w.time, 54);
        assert!(matches!(fixed_point_pair_witnesses(&a, &p, &[(2, 2)], 10, 4, &r(1, 2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn shift_pair_horizon_too_short() {
        let x = FullShiftOrbit;
        let err = shift_pair_witnesses(&x, 2, &r(2, 1), 100, 16, &r(1, 1000)).unwrap_err();
        assert_eq!(err, Error::NotFoundInHorizon { horizon: 100 });
    }

    #[test]
    fn shift_pair_small_instance() {
        let x = FullShiftOrbit;
        let v = shift_pair_witnesses(&x, 1, &r(2, 1), 20_000, 6, &r(1, 16)).unwrap();
        let sep = v.sep_witness.clone().unwrap();
        assert_eq!(sep.value, r(2, 1) - DistBracket::tail(6));
        let scan = (0u64..)
            .find(|&t| (0..7).all(|i| u64::from(crate::sequence::transitive_symbol(t + i)) == i % 2))
            .unwrap();
        assert_eq!(sep.time, scan);
        assert!(v.has(Label::DeltaSeparatedWitnessed));
        assert!(v.has(Label::ProximalWitnessed));
    }

    #[test]
    fn window_sources_run_out() {
        let w = crate::sequence::full_shift_transitive_point::<i64>(40).unwrap();
        let x = WindowOrbit::new(&w, "fixture");
        assert!(matches!(x.value(40), Err(Error::OrbitExhausted { index: 40, available: 40 })));
        assert!(matches!(prox_defect(View::new(&x), View::new(&x), 0, 40, 4), Err(Error::OrbitExhausted { .. })));
        assert!(prox_defect(View::new(&x), View::new(&x), 0, 36, 4).is_ok());
    }

    #[test]
    fn labels_parse() {
        for l in ["proximal-witnessed", "delta-separated-witnessed", "pair-recurrent-witnessed", "inconclusive"] {
            assert_eq!(l.parse::<Label>().unwrap().as_str(), l);
        }
        assert!("proximal".parse::<Label>().is_err());
    }
}

//! Independent reference implementations for integration tests. Written
//! straight from the definitions with plain big rationals: no shared code
//! with the library evaluators beyond the value types.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Representative of `t` modulo `2h` in `(-h, h]`.
fn wrap(t: &Q, h: &Q) -> Q {
    let period = h * qi(2);
    let k = ((t + h) / &period).ceil() - qi(1);
    t - k * period
}

pub fn a0(t: &Q) -> Q {
    let x = t.abs();
    if x <= qi(1) || x > qi(3) {
        Q::zero()
    } else if x >= qi(2) {
        Q::one()
    } else {
        x - qi(1)
    }
}

pub fn b0(t: &Q) -> Q {
    a0(&wrap(t, &qi(3)))
}

/// Minimal ladder `L[n] = p[n-1]^2`, `p[n] = 9 L[n] p[n-1]`.
pub struct Oracle {
    pub p: Vec<Q>,
    pub l: Vec<Q>,
}

impl Oracle {
    pub fn new(levels: usize) -> Self {
        let mut p = vec![qi(3)];
        let mut l = vec![Q::zero()];
        for n in 1..=levels {
            let ln = &p[n - 1] * &p[n - 1];
            p.push(qi(9) * &ln * &p[n - 1]);
            l.push(ln);
        }
        Oracle { p, l }
    }

    pub fn c(&self, n: usize, t: &Q) -> Q {
        b0(&(t / (&self.p[n - 1] * &self.l[n])))
    }

    pub fn a(&self, n: usize, t: &Q) -> Q {
        if t.abs() > self.p[n] {
            return Q::zero();
        }
        if n == 0 {
            return a0(t);
        }
        let splice = qi(3) * &self.l[n] * &self.p[n - 1];
        let c = self.c(n, t);
        let b = if *t <= splice { self.b(n - 1, t) } else { self.b(n - 1, &(t + qi(1))) };
        b.max(c)
    }

    pub fn b(&self, n: usize, t: &Q) -> Q {
        self.a(n, &wrap(t, &self.p[n]))
    }

    /// `sup_n a_n(t)` over every level this oracle holds.
    pub fn ainf(&self, t: &Q) -> Q {
        (0..self.p.len()).map(|n| self.a(n, t)).max().unwrap()
    }
}

/// Breakpoints of `b0` inside `[lo, hi]`, together with the ends.
fn b0_knots(lo: &Q, hi: &Q, scale: &Q, shift: &Q) -> Vec<Q> {
    // b0(s) has kinks at every integer s; argument is (t + shift) / scale.
    let mut out = vec![lo.clone(), hi.clone()];
    let mut s = ((lo + shift) / scale).floor();
    while &s * scale - shift <= *hi {
        let t = &s * scale - shift;
        if t >= *lo {
            out.push(t);
        }
        s += qi(1);
    }
    out
}

/// Pointwise max of two piecewise-linear functions on `[lo, hi]` given
/// their joint kink set, inserting crossing points.
fn max_breakpoints(knots: &mut Vec<Q>, f: &dyn Fn(&Q) -> Q, g: &dyn Fn(&Q) -> Q) -> Vec<(Q, Q)> {
    knots.sort();
    knots.dedup();
    let mut pts = Vec::new();
    for w in knots.windows(2) {
        let (x0, x1) = (&w[0], &w[1]);
        let (d0, d1) = (f(x0) - g(x0), f(x1) - g(x1));
        pts.push((x0.clone(), f(x0).max(g(x0))));
        if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
            let x = x0 + (x1 - x0) * &d0 / (&d0 - &d1);
            pts.push((x.clone(), f(&x).max(g(&x))));
        }
    }
    let last = knots.last().unwrap();
    pts.push((last.clone(), f(last).max(g(last))));
    pts
}

/// Breakpoints of `a_1` on `[-p1, p1]` built as the max of the two
/// piecewise-linear pieces on each side of the splice point.
pub fn a1_breakpoints() -> Vec<(Q, Q)> {
    let (p1, splice, scale) = (qi(243), qi(81), qi(27));
    let c1 = |t: &Q| b0(&(t / qi(27)));
    let left_b = |t: &Q| b0(t);
    let right_b = |t: &Q| b0(&(t + qi(1)));

    let mut left = b0_knots(&-p1.clone(), &splice, &qi(1), &Q::zero());
    left.extend(b0_knots(&-p1.clone(), &splice, &scale, &Q::zero()));
    let mut pts = max_breakpoints(&mut left, &left_b, &c1);

    // Just right of the splice the shifted branch applies; a jump would show
    // up as a value mismatch at the splice point itself.
    let mut right = b0_knots(&splice, &p1, &qi(1), &qi(1));
    right.extend(b0_knots(&splice, &p1, &scale, &Q::zero()));
    let right_pts = max_breakpoints(&mut right, &right_b, &c1);
    assert_eq!(right_pts[0].1, pts.last().unwrap().1, "a_1 is continuous at the splice");
    pts.extend(right_pts.into_iter().skip(1));
    pts
}

/// `sum_{i<k} |x(t+i) - y(t+i)| / 2^i` by direct summation.
pub fn naive_lo(x: &dyn Fn(u64) -> Q, y: &dyn Fn(u64) -> Q, t: u64, k: usize) -> Q {
    let mut s = Q::zero();
    let mut w = Q::one();
    for i in 0..k as u64 {
        s += (x(t + i) - y(t + i)).abs() * &w;
        w /= qi(2);
    }
    s
}

pub fn tail(k: usize) -> Q {
    Q::new(BigInt::from(2), BigInt::one() << k)
}

/// Argmin (or argmax) over `[from, to]`, smallest time on ties.
pub fn naive_best(from: u64, to: u64, maximize: bool, f: &dyn Fn(u64) -> Q) -> (u64, Q) {
    let mut best = (from, f(from));
    for t in from + 1..=to {
        let v = f(t);
        if (maximize && v > best.1) || (!maximize && v < best.1) {
            best = (t, v);
        }
    }
    best
}

/// Random `[0, 1]`-valued window; small alphabets make ties and exact
/// zeros common.
pub fn random_window(rng: &mut impl rand::Rng, len: usize) -> Vec<Q> {
    let dens = [1i64, 2, 3, 27];
    let coarse = rng.gen_bool(0.5);
    (0..len)
        .map(|_| {
            let d = if coarse { 2 } else { dens[rng.gen_range(0..dens.len())] };
            q(rng.gen_range(0..=d), d)
        })
        .collect()
}

/// Compare the library searches on two finite windows with a direct
/// re-scan. Returns a description of the first disagreement.
pub fn compare_with_naive(a: &[Q], b: &[Q], from: u64, to: u64, k: usize) -> Result<(), String> {
    use wkdyn::relations::{pair_recur_defect, prox_defect, sep_sup, View, WindowOrbit};
    use wkdyn::sequence::SeqWindow;

    let wa = WindowOrbit::new(&SeqWindow::new(Default::default(), a.to_vec()).unwrap(), "a");
    let wb = WindowOrbit::new(&SeqWindow::new(Default::default(), b.to_vec()).unwrap(), "b");
    let (va, vb) = (View::new(&wa), View::new(&wb));
    let fa = |i: u64| a[i as usize].clone();
    let fb = |i: u64| b[i as usize].clone();

    let lo = |t: u64| naive_lo(&fa, &fb, t, k);
    let want = naive_best(from, to, false, &lo);
    let got = prox_defect(va, vb, from, to, k).map_err(|e| e.to_string())?;
    if (got.time, &got.bracket.lo, &got.bracket.hi) != (want.0, &want.1, &(&want.1 + tail(k))) {
        return Err(format!("prox: got {got:?}, want {want:?}"));
    }
    let want = naive_best(from, to, true, &lo);
    let got = sep_sup(va, vb, from, to, k).map_err(|e| e.to_string())?;
    if (got.time, &got.bracket.lo) != (want.0, &want.1) {
        return Err(format!("sep: got {got:?}, want {want:?}"));
    }

    let back = |f: &dyn Fn(u64) -> Q, t: u64| {
        let mut s = Q::zero();
        let mut w = Q::one();
        for i in 0..k as u64 {
            s += (f(t + i) - f(i)).abs() * &w;
            w /= qi(2);
        }
        s
    };
    let got = pair_recur_defect(va, vb, from, to, k).map_err(|e| e.to_string())?;
    let start = from.max(1);
    if start > to {
        return if got.is_none() { Ok(()) } else { Err(format!("recur: got {got:?} on an empty range")) };
    }
    let want = naive_best(start, to, false, &|t| back(&fa, t).max(back(&fb, t)));
    match got {
        Some(g) if (g.time, &g.bracket.lo, &g.bracket.hi) == (want.0, &want.1, &(&want.1 + tail(k))) => Ok(()),
        g => Err(format!("recur: got {g:?}, want {want:?}")),
    }
}

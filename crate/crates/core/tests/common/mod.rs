// Seeded generators shared by the integration tests.
#![allow(dead_code)]

use extendlab::{Endpoint, Interval, Poly, Rational, RationalFunc, RationalSet};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;
pub type Q = Rational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A multiple of `1/den` in `[lo, hi]`.
pub fn grid_value(rng: &mut Rng8, lo: i64, hi: i64, den: i64) -> Q {
    q(rng.gen_range(lo * den..=hi * den), den)
}

/// A rational in `[lo, hi]` with a random denominator below 100.
pub fn rational_in(rng: &mut Rng8, lo: &Q, hi: &Q) -> Q {
    let (a, b) = (lo.to_f64().unwrap(), hi.to_f64().unwrap());
    for _ in 0..100 {
        let den: i64 = rng.gen_range(1..100);
        let k_lo = (a * den as f64).floor() as i64;
        let k_hi = (b * den as f64).ceil() as i64;
        let x = q(rng.gen_range(k_lo..=k_hi), den);
        if *lo <= x && x <= *hi {
            return x;
        }
    }
    (lo + hi) / Q::from_integer(2.into())
}

fn endpoint(rng: &mut Rng8, v: Q) -> Endpoint<Q> {
    if rng.gen_bool(0.5) {
        Endpoint::Closed(v)
    } else {
        Endpoint::Open(v)
    }
}

/// Up to `max_pieces` pieces with endpoints on the quarter grid of `[-10, 10]`,
/// some of them singletons, optionally with unbounded outer ends.
pub fn random_set(rng: &mut Rng8, max_pieces: usize, unbounded: bool) -> RationalSet {
    let m = rng.gen_range(1..=max_pieces);
    let mut grid: Vec<i64> = (-40..=40).collect();
    grid.shuffle(rng);
    let mut cuts: Vec<i64> = grid[..2 * m].to_vec();
    cuts.sort();
    let mut raw = Vec::new();
    for k in 0..m {
        let (a, b) = (q(cuts[2 * k], 4), q(cuts[2 * k + 1], 4));
        if rng.gen_bool(0.15) {
            raw.push(Interval::point(a));
            continue;
        }
        let lo = if unbounded && k == 0 && rng.gen_bool(0.2) {
            Endpoint::Unbounded
        } else {
            endpoint(rng, a)
        };
        let hi = if unbounded && k == m - 1 && rng.gen_bool(0.2) {
            Endpoint::Unbounded
        } else {
            endpoint(rng, b)
        };
        raw.push(Interval::new(lo, hi).unwrap());
    }
    RationalSet::canonicalize(raw)
}

/// A single bounded interval with quarter-grid endpoints in `[-10, 10]`.
pub fn random_interval(rng: &mut Rng8) -> RationalSet {
    let a = rng.gen_range(-40..=30);
    let b = rng.gen_range(a + 4..=40);
    let lo = endpoint(rng, q(a, 4));
    let hi = endpoint(rng, q(b, 4));
    RationalSet::interval(Interval::new(lo, hi).unwrap())
}

pub fn random_open(rng: &mut Rng8) -> RationalSet {
    let m = rng.gen_range(1..=3);
    let mut raw = Vec::new();
    for _ in 0..m {
        let a = rng.gen_range(-60..=50);
        let b = rng.gen_range(a + 1..=60);
        let lo = if rng.gen_bool(0.1) { Endpoint::Unbounded } else { Endpoint::Open(q(a, 4)) };
        let hi = if rng.gen_bool(0.1) { Endpoint::Unbounded } else { Endpoint::Open(q(b, 4)) };
        raw.push(Interval::new(lo, hi).unwrap());
    }
    RationalSet::canonicalize(raw)
}

pub fn random_closed(rng: &mut Rng8) -> RationalSet {
    let m = rng.gen_range(1..=3);
    let mut raw = Vec::new();
    for _ in 0..m {
        let a = rng.gen_range(-48..=48);
        if rng.gen_bool(0.2) {
            raw.push(Interval::point(q(a, 4)));
            continue;
        }
        let b = rng.gen_range(a..=a + 24);
        let lo = if rng.gen_bool(0.1) { Endpoint::Unbounded } else { Endpoint::Closed(q(a, 4)) };
        let hi = if rng.gen_bool(0.1) { Endpoint::Unbounded } else { Endpoint::Closed(q(b, 4)) };
        raw.push(Interval::new(lo, hi).unwrap());
    }
    RationalSet::canonicalize(raw)
}

/// Finite stand-ins for the ends of a piece, ten units past any unbounded end.
pub fn finite_ends(iv: &Interval<Q>) -> (Q, Q) {
    let lo = iv.lo().value().cloned();
    let hi = iv.hi().value().cloned();
    let ten = q(10, 1);
    match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => (a.clone(), a + ten),
        (None, Some(b)) => (b.clone() - ten, b),
        (None, None) => (-ten.clone(), ten),
    }
}

pub fn random_point_in(rng: &mut Rng8, s: &RationalSet) -> Q {
    let iv = s.pieces().choose(rng).expect("nonempty set").clone();
    let (a, b) = finite_ends(&iv);
    loop {
        let x = rational_in(rng, &a, &b);
        if iv.contains(&x) {
            return x;
        }
    }
}

/// Endpoints of the pieces of every set given, each nudged by `±1/1000`.
pub fn edge_points(sets: &[&RationalSet]) -> Vec<Q> {
    let eps = q(1, 1000);
    let mut out = Vec::new();
    for s in sets {
        for b in s.boundary_points() {
            out.push(b.clone() - eps.clone());
            out.push(b.clone() + eps.clone());
            out.push(b);
        }
    }
    out
}

pub fn random_affine(rng: &mut Rng8) -> Poly<Q> {
    Poly::linear(grid_value(rng, -5, 5, 4), grid_value(rng, -3, 3, 4))
}

/// A piecewise-affine function on `a`, each piece cut at up to `max_cuts`
/// interior quarter-grid points. Unbounded pieces get constant expressions
/// when `bounded` is set.
pub fn random_pw_affine(rng: &mut Rng8, a: &RationalSet, max_cuts: usize, bounded: bool) -> RationalFunc {
    let mut pieces = Vec::new();
    for iv in a.pieces() {
        if iv.is_singleton() {
            pieces.push((iv.clone(), Poly::constant(grid_value(rng, -5, 5, 4))));
            continue;
        }
        let (lo, hi) = finite_ends(iv);
        let four = q(4, 1);
        let lo_k: i64 = (lo * four.clone()).to_integer().try_into().unwrap();
        let hi_k: i64 = (hi * four).to_integer().try_into().unwrap();
        let mut inner: Vec<i64> = ((lo_k + 1)..hi_k).collect();
        inner.shuffle(rng);
        let k = rng.gen_range(0..=max_cuts).min(inner.len());
        let mut cuts: Vec<Q> = inner[..k].iter().map(|&c| q(c, 4)).collect();
        cuts.sort();
        let mut left = iv.lo().clone();
        for c in cuts {
            pieces.push((Interval::new(left, Endpoint::Open(c.clone())).unwrap(), Poly::zero()));
            left = Endpoint::Closed(c);
        }
        pieces.push((Interval::new(left, iv.hi().clone()).unwrap(), Poly::zero()));
    }
    let pieces = pieces
        .into_iter()
        .map(|(iv, p)| {
            let expr = if !p.is_zero() {
                p
            } else if bounded && !iv.is_bounded() {
                Poly::constant(grid_value(rng, -5, 5, 4))
            } else {
                random_affine(rng)
            };
            (iv, expr)
        })
        .collect();
    RationalFunc::new(pieces).unwrap()
}

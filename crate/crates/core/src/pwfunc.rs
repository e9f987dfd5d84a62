//! Piecewise-polynomial functions over [`RealSet`] domains.
//!
//! A [`PiecewiseFunc`] is a finite list of disjoint intervals, each carrying a
//! polynomial. The operations here are the ones the extension operators are
//! built from: the vector-lattice operations, composition, preimages,
//! suprema, and continuous approximation sequences that realize Baire-one
//! membership as an eventually-exact limit.
//!
//! Most results are exact. When a split point is an irrational root, the
//! operation refines it to a tolerance and reports [`Precision::Approx`]
//! together with the slack it introduced.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::parse::{Cursor, ParseError};
use crate::poly::Poly;
use crate::realset::{lower_cmp, parse_set, Endpoint, Interval, RealSet};
use crate::roots::{isolate_roots, RootBracket};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FuncError<T: Scalar> {
    #[error("{0} is outside the domain")]
    OutsideDomain(T),
    #[error("domains differ: {left} vs {right}")]
    DomainMismatch { left: RealSet<T>, right: RealSet<T> },
    #[error("set is not contained in the domain; missing {missing}")]
    NotSubset { missing: RealSet<T> },
    #[error("pieces overlap: {0} and {1}")]
    Overlap(Interval<T>, Interval<T>),
    #[error("value {value} at {witness} leaves the domain of the outer function")]
    RangeViolation { witness: T, value: T },
    #[error("{0} needs irrational breakpoints")]
    Inexact(String),
    #[error("the function is unbounded on the requested set")]
    Unbounded,
    #[error("index must be at least 1, got {0}")]
    BadIndex(usize),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
}

/// How faithful a computed result is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Precision<T> {
    Exact,
    /// Every uncertain region has width at most `slack`.
    Approx { slack: T },
}

impl<T: Scalar> Precision<T> {
    pub fn is_exact(&self) -> bool {
        matches!(self, Precision::Exact)
    }

    fn from_slack(slack: Option<T>) -> Self {
        match slack {
            None => Precision::Exact,
            Some(slack) => Precision::Approx { slack },
        }
    }
}

impl<T: Scalar> Serialize for Precision<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Precision::Exact => serializer.serialize_str("EXACT"),
            Precision::Approx { slack } => serializer.collect_str(&format_args!("APPROX(slack={slack})")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece<T> {
    pub interval: Interval<T>,
    pub expr: Poly<T>,
}

/// Invariant: pieces are sorted, pairwise disjoint, and their union is the
/// domain. Singleton pieces carry constant polynomials, touching pieces with
/// equal polynomials are merged, and a shared breakpoint where both sides
/// agree belongs to the right piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseFunc<T> {
    domain: RealSet<T>,
    pieces: Vec<Piece<T>>,
}

/// The preimage of a target set. `set` is exact in [`Precision::Exact`] mode
/// and an outer approximation otherwise; `inner` is always contained in the
/// true preimage and differs from `set` only inside regions of width at most
/// the slack.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct PreimageResult<T: Scalar> {
    pub set: RealSet<T>,
    pub inner: RealSet<T>,
    pub precision: Precision<T>,
}

/// A function produced by splitting at crossing points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeResult<T> {
    pub func: PiecewiseFunc<T>,
    pub precision: Precision<T>,
}

/// A supremum, either exact or enclosed in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormResult<T> {
    pub exact: Option<T>,
    pub lo: T,
    pub hi: T,
    /// Whether the supremum is a value taken on the set rather than a limit.
    pub attained: bool,
}

impl<T: Scalar> NormResult<T> {
    fn exact(value: T, attained: bool) -> Self {
        NormResult {
            exact: Some(value.clone()),
            lo: value.clone(),
            hi: value,
            attained,
        }
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, v: &T) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    fn negated(self) -> Self {
        NormResult {
            exact: self.exact.map(|v| -v),
            lo: -self.hi,
            hi: -self.lo,
            attained: self.attained,
        }
    }

    /// The larger of two suprema.
    fn max(self, other: Self) -> Self {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => {
                if a > b {
                    self
                } else if b > a {
                    other
                } else {
                    NormResult::exact(a.clone(), self.attained || other.attained)
                }
            }
            (Some(a), None) if *a >= other.hi => self,
            (None, Some(b)) if *b >= self.hi => other,
            _ => NormResult {
                exact: None,
                attained: (self.attained && other.attained)
                    || (self.lo >= other.hi && self.attained)
                    || (other.lo >= self.hi && other.attained),
                lo: self.lo.max(other.lo),
                hi: self.hi.max(other.hi),
            },
        }
    }
}

impl<T: Scalar> Serialize for NormResult<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("NormResult", 4)?;
        s.serialize_field("exact", &self.exact.as_ref().map(ToString::to_string))?;
        s.serialize_field("enclosure", &[self.lo.to_string(), self.hi.to_string()])?;
        s.serialize_field("attained", &self.attained)?;
        s.end()
    }
}

/// A point where a polynomial crosses a level, exact or bracketed.
#[derive(Clone, Debug)]
enum Crossing<T> {
    Exact { at: T, tag: usize },
    Zone { bracket: RootBracket<T>, tag: usize },
}

impl<T: Scalar> Crossing<T> {
    fn lo(&self) -> &T {
        match self {
            Crossing::Exact { at, .. } => at,
            Crossing::Zone { bracket, .. } => bracket.lo(),
        }
    }

    fn hi(&self) -> &T {
        match self {
            Crossing::Exact { at, .. } => at,
            Crossing::Zone { bracket, .. } => bracket.hi(),
        }
    }

    fn tag(&self) -> usize {
        match self {
            Crossing::Exact { tag, .. } | Crossing::Zone { tag, .. } => *tag,
        }
    }

    /// The point used as a breakpoint.
    fn split_point(&self) -> T {
        match self {
            Crossing::Exact { at, .. } => at.clone(),
            Crossing::Zone { bracket, .. } => bracket.midpoint(),
        }
    }
}

/// Roots of every polynomial in `polys` within `within`, sorted and pairwise
/// strictly separated; irrational ones are bracketed to width `tol`.
fn crossings<T: Scalar>(polys: &[Poly<T>], within: &Interval<T>, tol: &T) -> Vec<Crossing<T>> {
    let mut found = Vec::new();
    for (tag, p) in polys.iter().enumerate() {
        if p.is_constant() {
            continue;
        }
        for bracket in isolate_roots(p, within).expect("non-constant polynomial") {
            found.push(match bracket.exact_root() {
                Some(at) => Crossing::Exact { at, tag },
                None => Crossing::Zone {
                    bracket: bracket.refine(tol).expect("positive tolerance"),
                    tag,
                },
            });
        }
    }
    found.sort_by(|a, b| a.lo().cmp(b.lo()));
    // separate zones from their neighbours
    loop {
        let clash = (1..found.len()).find(|&i| found[i - 1].hi() >= found[i].lo());
        let Some(i) = clash else { break };
        let (left, right) = found.split_at_mut(i);
        let (a, b) = (&mut left[i - 1], &mut right[0]);
        match (&mut *a, &mut *b) {
            (Crossing::Exact { at: x, .. }, Crossing::Exact { at: y, .. }) => {
                debug_assert!(x != y, "distinct levels cannot share a root");
                unreachable!("sorted exact roots are strictly increasing")
            }
            (Crossing::Zone { bracket, .. }, Crossing::Exact { at, .. })
            | (Crossing::Exact { at, .. }, Crossing::Zone { bracket, .. }) => {
                *bracket = bracket.exclude(at);
            }
            (Crossing::Zone { bracket: p, .. }, Crossing::Zone { bracket: q, .. }) => {
                if p.width() >= q.width() {
                    *p = p.bisect();
                } else {
                    *q = q.bisect();
                }
            }
        }
        found.sort_by(|a, b| a.lo().cmp(b.lo()));
    }
    found
}

/// A point strictly between two crossings (or the interval ends) where no
/// tracked polynomial vanishes.
fn region_sample<T: Scalar>(lo: Option<&T>, hi: Option<&T>) -> T {
    match (lo, hi) {
        (Some(a), Some(b)) if a == b => a.clone(),
        _ => crate::realset::gap_sample(lo, hi),
    }
}

fn bound_after<T: Scalar>(start: &Endpoint<T>, crossing: Option<&Crossing<T>>) -> Option<T> {
    crossing.map(|c| c.hi().clone()).or_else(|| start.value().cloned())
}

impl<T: Scalar> PiecewiseFunc<T> {
    /// Builds a function from arbitrary disjoint pieces.
    pub fn new(pieces: Vec<(Interval<T>, Poly<T>)>) -> Result<Self, FuncError<T>> {
        let mut pieces: Vec<Piece<T>> = pieces
            .into_iter()
            .map(|(interval, expr)| Piece { interval, expr })
            .collect();
        pieces.sort_by_key(|p| p.interval.sample());
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                if a.interval.intersect(&b.interval).is_some() {
                    return Err(FuncError::Overlap(a.interval.clone(), b.interval.clone()));
                }
            }
        }
        Ok(Self::assemble(pieces))
    }

    /// Normalizes disjoint pieces into the canonical layout.
    fn assemble(mut pieces: Vec<Piece<T>>) -> Self {
        let domain = RealSet::canonicalize(pieces.iter().map(|p| p.interval.clone()).collect());
        pieces.sort_by(|a, b| lower_cmp(a.interval.lo(), b.interval.lo()));
        let mut out: Vec<Piece<T>> = Vec::with_capacity(pieces.len());
        for mut piece in pieces {
            if piece.interval.is_singleton() {
                let at = piece.interval.lo().value().unwrap().clone();
                piece.expr = Poly::constant(piece.expr.eval(&at));
            }
            while let Some(last) = out.last_mut() {
                let Some(b) = shared_point(&last.interval, &piece.interval) else { break };
                if last.expr == piece.expr {
                    let merged = last.interval.hull(&piece.interval);
                    piece.interval = merged;
                    out.pop();
                } else if last.interval.is_singleton() && piece.expr.eval(&b) == last.expr.eval(&b) {
                    piece.interval = last.interval.hull(&piece.interval);
                    out.pop();
                } else if piece.interval.is_singleton() && last.expr.eval(&b) == piece.expr.eval(&b) {
                    last.interval = last.interval.hull(&piece.interval);
                    piece = out.pop().unwrap();
                } else {
                    if last.interval.hi().is_included() && last.expr.eval(&b) == piece.expr.eval(&b) {
                        // a breakpoint where both sides agree belongs to the right
                        last.interval = last.interval.with_hi(Endpoint::Open(b.clone()));
                        piece.interval = piece.interval.with_lo(Endpoint::Closed(b));
                    }
                    break;
                }
            }
            out.push(piece);
        }
        PiecewiseFunc { domain, pieces: out }
    }

    pub fn empty() -> Self {
        PiecewiseFunc {
            domain: RealSet::empty(),
            pieces: Vec::new(),
        }
    }

    /// One polynomial over the whole of `domain`.
    pub fn from_poly(domain: &RealSet<T>, expr: Poly<T>) -> Self {
        Self::assemble(
            domain
                .pieces()
                .iter()
                .map(|iv| Piece {
                    interval: iv.clone(),
                    expr: expr.clone(),
                })
                .collect(),
        )
    }

    pub fn constant(domain: &RealSet<T>, c: T) -> Self {
        Self::from_poly(domain, Poly::constant(c))
    }

    pub fn identity(domain: &RealSet<T>) -> Self {
        Self::from_poly(domain, Poly::x())
    }

    pub fn domain(&self) -> &RealSet<T> {
        &self.domain
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    /// Glues functions with disjoint domains.
    pub fn glue(&self, other: &Self) -> Result<Self, FuncError<T>> {
        let overlap = self.domain.intersect(&other.domain);
        if let Some(iv) = overlap.pieces().first() {
            return Err(FuncError::Overlap(iv.clone(), iv.clone()));
        }
        Ok(Self::assemble(self.pieces.iter().chain(&other.pieces).cloned().collect()))
    }

    fn piece_at(&self, x: &T) -> Option<&Piece<T>> {
        let idx = self.pieces.partition_point(|p| p.interval.lies_below(x));
        self.pieces.get(idx).filter(|p| p.interval.contains(x))
    }

    pub fn eval(&self, x: &T) -> Result<T, FuncError<T>> {
        self.piece_at(x)
            .map(|p| p.expr.eval(x))
            .ok_or_else(|| FuncError::OutsideDomain(x.clone()))
    }

    fn require_same_domain(&self, other: &Self) -> Result<(), FuncError<T>> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(FuncError::DomainMismatch {
                left: self.domain.clone(),
                right: other.domain.clone(),
            })
        }
    }

    /// Pairs of overlapping pieces on the common refinement.
    fn refine_with<'a>(&'a self, other: &'a Self) -> impl Iterator<Item = (Interval<T>, &'a Poly<T>, &'a Poly<T>)> + 'a {
        self.pieces.iter().flat_map(move |a| {
            other.pieces.iter().filter_map(move |b| {
                a.interval
                    .intersect(&b.interval)
                    .map(|iv| (iv, &a.expr, &b.expr))
            })
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, FuncError<T>> {
        self.require_same_domain(other)?;
        Ok(Self::assemble(
            self.refine_with(other)
                .map(|(interval, p, q)| Piece { interval, expr: p + q })
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FuncError<T>> {
        self.add(&other.negate())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map_exprs(|p| p.scale(c))
    }

    pub fn negate(&self) -> Self {
        self.map_exprs(|p| -p)
    }

    /// `alpha * self + beta * other`.
    pub fn linear_combination(&self, alpha: &T, other: &Self, beta: &T) -> Result<Self, FuncError<T>> {
        self.scale(alpha).add(&other.scale(beta))
    }

    fn map_exprs(&self, f: impl Fn(&Poly<T>) -> Poly<T>) -> Self {
        Self::assemble(
            self.pieces
                .iter()
                .map(|p| Piece {
                    interval: p.interval.clone(),
                    expr: f(&p.expr),
                })
                .collect(),
        )
    }

    pub fn lattice_max(&self, other: &Self) -> Result<LatticeResult<T>, FuncError<T>> {
        self.lattice_max_tol(other, &crate::default_tolerance())
    }

    pub fn lattice_min(&self, other: &Self) -> Result<LatticeResult<T>, FuncError<T>> {
        self.lattice_min_tol(other, &crate::default_tolerance())
    }

    pub fn abs(&self) -> LatticeResult<T> {
        self.abs_tol(&crate::default_tolerance())
    }

    pub fn abs_tol(&self, tol: &T) -> LatticeResult<T> {
        self.lattice_max_tol(&self.negate(), tol)
            .expect("a function shares its own domain")
    }

    pub fn lattice_min_tol(&self, other: &Self, tol: &T) -> Result<LatticeResult<T>, FuncError<T>> {
        let max = self.negate().lattice_max_tol(&other.negate(), tol)?;
        Ok(LatticeResult {
            func: max.func.negate(),
            precision: max.precision,
        })
    }

    /// Pointwise maximum. Pieces are split where the two sides cross; each
    /// crossing point belongs to the piece on its right.
    pub fn lattice_max_tol(&self, other: &Self, tol: &T) -> Result<LatticeResult<T>, FuncError<T>> {
        self.require_same_domain(other)?;
        if !tol.is_positive() {
            return Err(FuncError::NonPositiveTolerance);
        }
        let mut out = Vec::new();
        let mut slack: Option<T> = None;
        for (iv, p, q) in self.refine_with(other) {
            let diff = p - q;
            if diff.is_zero() || iv.is_singleton() {
                let at = iv.sample();
                let expr = if diff.eval(&at).is_negative() { q } else { p };
                out.push(Piece { interval: iv, expr: expr.clone() });
                continue;
            }
            let cuts = crossings(std::slice::from_ref(&diff), &iv, tol);
            for c in &cuts {
                if let Crossing::Zone { bracket, .. } = c {
                    slack = Some(slack.map_or(bracket.width(), |s| s.max(bracket.width())));
                }
            }
            let mut start = iv.lo().clone();
            for k in 0..=cuts.len() {
                let end = match cuts.get(k) {
                    Some(c) => Endpoint::Open(c.split_point()),
                    None => iv.hi().clone(),
                };
                let region_lo = bound_after(iv.lo(), k.checked_sub(1).map(|j| &cuts[j]));
                let region_hi = cuts.get(k).map(|c| c.lo().clone()).or_else(|| iv.hi().value().cloned());
                let at = region_sample(region_lo.as_ref(), region_hi.as_ref());
                if let Ok(segment) = Interval::new(start.clone(), end) {
                    let expr = if diff.eval(&at).is_negative() { q } else { p };
                    out.push(Piece { interval: segment, expr: expr.clone() });
                }
                if let Some(c) = cuts.get(k) {
                    start = Endpoint::Closed(c.split_point());
                }
            }
        }
        Ok(LatticeResult {
            func: Self::assemble(out),
            precision: Precision::from_slack(slack),
        })
    }

    /// `self(inner(x))`. Requires the range of `inner` inside the domain of
    /// `self`, and rational breakpoints for the result.
    pub fn compose(&self, inner: &Self) -> Result<Self, FuncError<T>> {
        let tol = crate::default_tolerance::<T>();
        let mut out = Vec::new();
        for g_piece in &inner.pieces {
            let mut covered = RealSet::empty();
            for f_piece in &self.pieces {
                let target = RealSet::interval(f_piece.interval.clone());
                let pre = piece_preimage(&g_piece.interval, &g_piece.expr, &target, &tol);
                if !pre.precision.is_exact() {
                    return Err(FuncError::Inexact(format!(
                        "preimage of {} under {} on {}",
                        f_piece.interval, g_piece.expr, g_piece.interval
                    )));
                }
                let expr = f_piece.expr.compose(&g_piece.expr);
                for iv in pre.set.pieces() {
                    out.push(Piece {
                        interval: iv.clone(),
                        expr: expr.clone(),
                    });
                }
                covered = covered.union(&pre.set);
            }
            let missing = RealSet::interval(g_piece.interval.clone()).difference(&covered);
            if let Some(witness) = missing.sample_point() {
                let value = g_piece.expr.eval(&witness);
                return Err(FuncError::RangeViolation { witness, value });
            }
        }
        Ok(Self::assemble(out))
    }

    pub fn preimage(&self, target: &RealSet<T>) -> PreimageResult<T> {
        self.preimage_tol(target, &crate::default_tolerance())
    }

    pub fn preimage_tol(&self, target: &RealSet<T>, tol: &T) -> PreimageResult<T> {
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        let mut slack: Option<T> = None;
        for piece in &self.pieces {
            let pre = piece_preimage(&piece.interval, &piece.expr, target, tol);
            outer.extend(pre.set.pieces().iter().cloned());
            inner.extend(pre.inner.pieces().iter().cloned());
            if let Precision::Approx { slack: s } = pre.precision {
                slack = Some(slack.map_or(s.clone(), |t| t.max(s)));
            }
        }
        PreimageResult {
            set: RealSet::canonicalize(outer),
            inner: RealSet::canonicalize(inner),
            precision: Precision::from_slack(slack),
        }
    }

    /// Supremum of the function over `over`; `None` when `over` is empty.
    pub fn supremum(&self, over: &RealSet<T>, eps: &T) -> Result<Option<NormResult<T>>, FuncError<T>> {
        if !eps.is_positive() {
            return Err(FuncError::NonPositiveTolerance);
        }
        let missing = over.difference(&self.domain);
        if !missing.is_empty() {
            return Err(FuncError::NotSubset { missing });
        }
        let mut best: Option<NormResult<T>> = None;
        for piece in &self.pieces {
            for part in over.pieces() {
                if let Some(iv) = piece.interval.intersect(part) {
                    let local = interval_supremum(&piece.expr, &iv, eps)?;
                    best = Some(match best {
                        None => local,
                        Some(b) => b.max(local),
                    });
                }
            }
        }
        Ok(best)
    }

    /// Infimum of the function over `over`; `None` when `over` is empty.
    pub fn infimum(&self, over: &RealSet<T>, eps: &T) -> Result<Option<NormResult<T>>, FuncError<T>> {
        Ok(self.negate().supremum(over, eps)?.map(NormResult::negated))
    }

    /// `sup |f|` over `over`, taking limits at excluded endpoints. The empty
    /// set has norm zero.
    pub fn sup_norm(&self, over: &RealSet<T>, eps: &T) -> Result<NormResult<T>, FuncError<T>> {
        let upper = self.supremum(over, eps)?;
        let lower = self.negate().supremum(over, eps)?;
        Ok(match (upper, lower) {
            (Some(a), Some(b)) => a.max(b),
            _ => NormResult::exact(T::zero(), false),
        })
    }

    pub fn restrict(&self, subset: &RealSet<T>) -> Result<Self, FuncError<T>> {
        let missing = subset.difference(&self.domain);
        if !missing.is_empty() {
            return Err(FuncError::NotSubset { missing });
        }
        let mut out = Vec::new();
        for piece in &self.pieces {
            for part in subset.pieces() {
                if let Some(interval) = piece.interval.intersect(part) {
                    out.push(Piece {
                        interval,
                        expr: piece.expr.clone(),
                    });
                }
            }
        }
        Ok(Self::assemble(out))
    }

    /// Points inside a connected part of the domain where the function jumps:
    /// the value there differs from a one-sided limit.
    pub fn jump_points(&self) -> Vec<T> {
        let mut jumps = Vec::new();
        for pair in self.pieces.windows(2) {
            let (left, right) = (&pair[0], &pair[1]);
            let Some(b) = shared_point(&left.interval, &right.interval) else { continue };
            if left.expr.eval(&b) != right.expr.eval(&b) {
                jumps.push(b);
            }
        }
        jumps.dedup();
        jumps
    }

    /// Whether the function is continuous on every connected part of its domain.
    pub fn is_continuous(&self) -> bool {
        self.jump_points().is_empty()
    }

    /// The n-th continuous approximant. At every jump point `b` a linear ramp
    /// of width `min(1/n, half the piece)` is carved out of each adjacent piece
    /// that does not own `b`, so the approximant still takes the value `f(b)`
    /// at `b` and agrees with `f` at distance at least `1/n` from every jump.
    pub fn continuous_approximation(&self, n: usize) -> Result<Self, FuncError<T>> {
        if n < 1 {
            return Err(FuncError::BadIndex(n));
        }
        let width = T::one() / T::from_usize(n).expect("index fits the scalar");
        let mut out = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate() {
            if piece.interval.is_singleton() {
                out.push(piece.clone());
                continue;
            }
            let target_from = |other: Option<&Piece<T>>, on_left: bool| -> Option<(T, T)> {
                let other = other?;
                let b = if on_left {
                    shared_point(&other.interval, &piece.interval)?
                } else {
                    shared_point(&piece.interval, &other.interval)?
                };
                if !other.interval.contains(&b) {
                    return None;
                }
                let v = other.expr.eval(&b);
                (v != piece.expr.eval(&b)).then_some((b, v))
            };
            let left = target_from(i.checked_sub(1).map(|j| &self.pieces[j]), true);
            let right = target_from(self.pieces.get(i + 1), false);
            let w = match piece.interval.length() {
                Some(len) => width.clone().min(len / T::two()),
                None => width.clone(),
            };
            let p = &piece.expr;
            let mut mid_lo = piece.interval.lo().clone();
            let mut mid_hi = piece.interval.hi().clone();
            let mut ramp_end = None;
            if let Some((b, v)) = &left {
                let e = b.clone() + w.clone();
                out.push(Piece {
                    interval: Interval::new(Endpoint::Open(b.clone()), Endpoint::Closed(e.clone())).unwrap(),
                    expr: Poly::through(b, v, &e, &p.eval(&e)),
                });
                mid_lo = Endpoint::Open(e.clone());
                ramp_end = Some(e);
            }
            if let Some((b, v)) = &right {
                let s = b.clone() - w.clone();
                let lo = if ramp_end.as_ref() == Some(&s) {
                    Endpoint::Open(s.clone())
                } else {
                    Endpoint::Closed(s.clone())
                };
                out.push(Piece {
                    interval: Interval::new(lo, Endpoint::Open(b.clone())).unwrap(),
                    expr: Poly::through(&s, &p.eval(&s), b, v),
                });
                mid_hi = Endpoint::Open(s);
            }
            if let Ok(interval) = Interval::new(mid_lo, mid_hi) {
                out.push(Piece {
                    interval,
                    expr: p.clone(),
                });
            }
        }
        Ok(Self::assemble(out))
    }

    /// Equality as functions: same domain and the same value everywhere.
    pub fn canonical_equal(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// A point where the two functions differ (in value or in domain membership).
    pub fn first_difference(&self, other: &Self) -> Option<T> {
        if self.domain != other.domain {
            let sym = self
                .domain
                .difference(&other.domain)
                .union(&other.domain.difference(&self.domain));
            return sym.sample_point();
        }
        for (iv, p, q) in self.refine_with(other) {
            if iv.is_singleton() {
                let at = iv.sample();
                if p.eval(&at) != q.eval(&at) {
                    return Some(at);
                }
            } else if p != q {
                let diff = p - q;
                let probes = diff.degree().unwrap_or(0) + 1;
                return distinct_points(&iv, probes)
                    .into_iter()
                    .find(|x| !diff.eval(x).is_zero());
            }
        }
        None
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cursor = Cursor::new(text);
        if cursor.eat_word("empty") {
            cursor.finish()?;
            return Ok(Self::empty());
        }
        let mut pieces = Vec::new();
        loop {
            let at = cursor.position();
            let set: RealSet<T> = parse_set(&mut cursor)?;
            cursor.expect(':')?;
            let expr = Poly::parse_from(&mut cursor)?;
            for iv in set.pieces() {
                pieces.push((iv.clone(), expr.clone(), at));
            }
            if !cursor.eat(';') || cursor.at_end() {
                break;
            }
        }
        cursor.finish()?;
        for (i, (a, _, _)) in pieces.iter().enumerate() {
            if let Some((_, _, at)) = pieces[i + 1..].iter().find(|(b, _, _)| a.intersect(b).is_some()) {
                return Err(cursor.error_at("piece overlaps an earlier piece", *at));
            }
        }
        Ok(Self::new(pieces.into_iter().map(|(iv, p, _)| (iv, p)).collect()).expect("overlaps checked"))
    }
}

/// The finite point where two disjoint intervals meet, when one of them
/// includes it and their union is connected.
fn shared_point<T: Scalar>(left: &Interval<T>, right: &Interval<T>) -> Option<T> {
    let (a, b) = (left.hi(), right.lo());
    let (Some(x), Some(y)) = (a.value(), b.value()) else { return None };
    (x == y && (a.is_included() != b.is_included())).then(|| x.clone())
}

/// `count` distinct points of a non-degenerate interval.
fn distinct_points<T: Scalar>(iv: &Interval<T>, count: usize) -> Vec<T> {
    let center = iv.sample();
    let step = match iv.length() {
        Some(len) => len / T::from_usize(2 * count + 2).unwrap(),
        None => T::one(),
    };
    let dir = if iv.hi().value().is_none() { T::one() } else { -T::one() };
    (0..count)
        .map(|k| center.clone() + dir.clone() * step.clone() * T::from_usize(k).unwrap())
        .collect()
}

/// Preimage of `target` under the polynomial `p` restricted to `iv`.
fn piece_preimage<T: Scalar>(iv: &Interval<T>, p: &Poly<T>, target: &RealSet<T>, tol: &T) -> PreimageResult<T> {
    let levels = target.boundary_points();
    let shifted: Vec<Poly<T>> = levels.iter().map(|c| p - &Poly::constant(c.clone())).collect();
    let cuts = crossings(&shifted, iv, tol);
    let hit = |x: &T| target.contains(&p.eval(x));
    let mut outer = Vec::new();
    let mut inner = Vec::new();
    let mut slack: Option<T> = None;
    let mut push = |cell: Interval<T>, in_outer: bool, in_inner: bool| {
        if let Some(cell) = cell.intersect(iv) {
            if in_outer {
                outer.push(cell.clone());
            }
            if in_inner {
                inner.push(cell);
            }
        }
    };
    for k in 0..=cuts.len() {
        let lo = match k.checked_sub(1) {
            Some(j) => Endpoint::Open(cuts[j].hi().clone()),
            None => iv.lo().clone(),
        };
        let hi = match cuts.get(k) {
            Some(c) => Endpoint::Open(c.lo().clone()),
            None => iv.hi().clone(),
        };
        if let Ok(gap) = Interval::new(lo, hi) {
            let inside = hit(&gap.sample());
            push(gap, inside, inside);
        }
        match cuts.get(k) {
            Some(Crossing::Exact { at, .. }) => {
                let inside = hit(at);
                push(Interval::point(at.clone()), inside, inside);
            }
            Some(zone @ Crossing::Zone { bracket, .. }) => {
                let level = &levels[zone.tag()];
                let left = hit(bracket.lo());
                let right = hit(bracket.hi());
                let root = target.contains(level);
                let cell = Interval::closed(bracket.lo().clone(), bracket.hi().clone());
                push(cell, left || right || root, left && right && root);
                slack = Some(slack.map_or(bracket.width(), |s: T| s.max(bracket.width())));
            }
            None => {}
        }
    }
    PreimageResult {
        set: RealSet::canonicalize(outer),
        inner: RealSet::canonicalize(inner),
        precision: Precision::from_slack(slack),
    }
}

/// Supremum of `p` over the nonempty interval `iv`.
fn interval_supremum<T: Scalar>(p: &Poly<T>, iv: &Interval<T>, eps: &T) -> Result<NormResult<T>, FuncError<T>> {
    if !p.is_constant() {
        let grows_right = iv.hi().value().is_none() && p.sign_at_pos_inf() > 0;
        let grows_left = iv.lo().value().is_none() && p.sign_at_neg_inf() > 0;
        if grows_right || grows_left {
            return Err(FuncError::Unbounded);
        }
    }
    let mut best: Option<NormResult<T>> = None;
    let mut offer = |candidate: NormResult<T>| {
        best = Some(match best.take() {
            None => candidate,
            Some(b) => b.max(candidate),
        });
    };
    let sample = iv.sample();
    offer(NormResult::exact(p.eval(&sample), true));
    for end in [iv.lo(), iv.hi()] {
        if let Some(e) = end.value() {
            offer(NormResult::exact(p.eval(e), end.is_included()));
        }
    }
    let slope = p.derivative();
    if !slope.is_constant() {
        let interior = Interval::new(open_end(iv.lo()), open_end(iv.hi())).ok();
        for bracket in interior
            .iter()
            .flat_map(|inner| isolate_roots(&slope, inner).expect("non-constant derivative"))
        {
            match bracket.exact_root() {
                Some(r) => offer(NormResult::exact(p.eval(&r), true)),
                None => {
                    let mut zone = bracket;
                    loop {
                        let (lo, hi) = p.range_enclosure(zone.lo(), zone.hi());
                        if hi.clone() - lo <= *eps {
                            let at_mid = p.eval(&zone.midpoint());
                            offer(NormResult {
                                exact: None,
                                lo: at_mid,
                                hi,
                                attained: true,
                            });
                            break;
                        }
                        zone = zone.bisect();
                        if zone.is_exact() {
                            offer(NormResult::exact(p.eval(zone.lo()), true));
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

fn open_end<T: Scalar>(end: &Endpoint<T>) -> Endpoint<T> {
    match end.value() {
        Some(v) => Endpoint::Open(v.clone()),
        None => Endpoint::Unbounded,
    }
}

impl<T: Scalar> fmt::Display for PiecewiseFunc<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "empty");
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}: {}", piece.interval, piece.expr)?;
        }
        Ok(())
    }
}

impl<T: Scalar> Serialize for PiecewiseFunc<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

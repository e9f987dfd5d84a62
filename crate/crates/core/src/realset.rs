//! Exact subsets of the real line: finite unions of intervals and points with
//! rational endpoints, kept in a unique canonical form.
//!
//! Every set representable here is simultaneously F_sigma and G_delta. The
//! decomposition methods make that explicit by producing increasing chains of
//! closed sets that exhaust a set or its complement.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::parse::{Cursor, ParseError};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("malformed interval: {0}")]
    Malformed(String),
    #[error("decomposition index must be at least 1, got {0}")]
    BadIndex(usize),
}

/// One end of an interval. Which infinity `Unbounded` means depends on the
/// side it sits on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint<T> {
    Unbounded,
    Closed(T),
    Open(T),
}

impl<T: Scalar> Endpoint<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Closed(v) | Endpoint::Open(v) => Some(v),
        }
    }

    pub fn is_included(&self) -> bool {
        matches!(self, Endpoint::Closed(_))
    }

    pub fn is_open(&self) -> bool {
        matches!(self, Endpoint::Open(_))
    }

    fn closed(&self) -> Self {
        match self {
            Endpoint::Open(v) => Endpoint::Closed(v.clone()),
            other => other.clone(),
        }
    }

    fn opened(&self) -> Self {
        match self {
            Endpoint::Closed(v) => Endpoint::Open(v.clone()),
            other => other.clone(),
        }
    }
}

/// A nonempty interval. Singletons are `[a,a]`; empty intervals cannot be built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval<T> {
    lo: Endpoint<T>,
    hi: Endpoint<T>,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: Endpoint<T>, hi: Endpoint<T>) -> Result<Self, SetError> {
        if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
            match a.cmp(b) {
                Ordering::Greater => {
                    return Err(SetError::Malformed(format!("lower end {a} above upper end {b}")))
                }
                Ordering::Equal if !(lo.is_included() && hi.is_included()) => {
                    return Err(SetError::Malformed(format!(
                        "degenerate interval at {a} must include both ends"
                    )))
                }
                _ => {}
            }
        }
        Ok(Interval { lo, hi })
    }

    pub fn closed(a: T, b: T) -> Self {
        Self::new(Endpoint::Closed(a), Endpoint::Closed(b)).expect("closed interval with a <= b")
    }

    pub fn open(a: T, b: T) -> Self {
        Self::new(Endpoint::Open(a), Endpoint::Open(b)).expect("open interval with a < b")
    }

    pub fn point(a: T) -> Self {
        Interval {
            lo: Endpoint::Closed(a.clone()),
            hi: Endpoint::Closed(a),
        }
    }

    pub fn real_line() -> Self {
        Interval {
            lo: Endpoint::Unbounded,
            hi: Endpoint::Unbounded,
        }
    }

    pub fn lo(&self) -> &Endpoint<T> {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint<T> {
        &self.hi
    }

    pub fn is_singleton(&self) -> bool {
        matches!((&self.lo, &self.hi), (Endpoint::Closed(a), Endpoint::Closed(b)) if a == b)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.value().is_some() && self.hi.value().is_some()
    }

    /// Length, or `None` when unbounded.
    pub fn length(&self) -> Option<T> {
        Some(self.hi.value()?.clone() - self.lo.value()?.clone())
    }

    pub fn contains(&self, x: &T) -> bool {
        let above_lo = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Closed(a) => x >= a,
            Endpoint::Open(a) => x > a,
        };
        let below_hi = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Closed(b) => x <= b,
            Endpoint::Open(b) => x < b,
        };
        above_lo && below_hi
    }

    /// True when every point of the interval lies strictly below `x`.
    pub(crate) fn lies_below(&self, x: &T) -> bool {
        match &self.hi {
            Endpoint::Unbounded => false,
            Endpoint::Closed(b) => b < x,
            Endpoint::Open(b) => b <= x,
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = max_lower(&self.lo, &other.lo);
        let hi = min_upper(&self.hi, &other.hi);
        Self::new(lo, hi).ok()
    }

    pub fn closure(&self) -> Self {
        Interval {
            lo: self.lo.closed(),
            hi: self.hi.closed(),
        }
    }

    /// A point of the interval away from its ends where possible.
    pub fn sample(&self) -> T {
        gap_sample(self.lo.value(), self.hi.value())
    }

    pub fn midpoint(&self) -> Option<T> {
        Some(T::midpoint(self.lo.value()?, self.hi.value()?))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        let lo = if lower_cmp(&self.lo, &other.lo) == Ordering::Greater { &other.lo } else { &self.lo };
        let hi = if upper_cmp(&self.hi, &other.hi) == Ordering::Less { &other.hi } else { &self.hi };
        Interval { lo: lo.clone(), hi: hi.clone() }
    }

    pub(crate) fn with_lo(&self, lo: Endpoint<T>) -> Self {
        Interval { lo, hi: self.hi.clone() }
    }

    pub(crate) fn with_hi(&self, hi: Endpoint<T>) -> Self {
        Interval { lo: self.lo.clone(), hi }
    }

    /// Whether `self` and `other` overlap or share an endpoint that one of
    /// them includes, so that their union is again an interval.
    pub fn touches(&self, other: &Self) -> bool {
        let (left, right) = if lower_cmp(&self.lo, &other.lo) == Ordering::Greater {
            (other, self)
        } else {
            (self, other)
        };
        match (&left.hi, &right.lo) {
            (Endpoint::Unbounded, _) | (_, Endpoint::Unbounded) => true,
            (h, l) => {
                let (hv, lv) = (h.value().unwrap(), l.value().unwrap());
                hv > lv || (hv == lv && (h.is_included() || l.is_included()))
            }
        }
    }
}

pub(crate) fn lower_cmp<T: Scalar>(a: &Endpoint<T>, b: &Endpoint<T>) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Less,
        (_, Endpoint::Unbounded) => Ordering::Greater,
        (x, y) => x
            .value()
            .unwrap()
            .cmp(y.value().unwrap())
            .then_with(|| y.is_included().cmp(&x.is_included())),
    }
}

fn upper_cmp<T: Scalar>(a: &Endpoint<T>, b: &Endpoint<T>) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Greater,
        (_, Endpoint::Unbounded) => Ordering::Less,
        (x, y) => x
            .value()
            .unwrap()
            .cmp(y.value().unwrap())
            .then_with(|| x.is_included().cmp(&y.is_included())),
    }
}

fn max_lower<T: Scalar>(a: &Endpoint<T>, b: &Endpoint<T>) -> Endpoint<T> {
    if lower_cmp(a, b) == Ordering::Less {
        b.clone()
    } else {
        a.clone()
    }
}

fn min_upper<T: Scalar>(a: &Endpoint<T>, b: &Endpoint<T>) -> Endpoint<T> {
    if upper_cmp(a, b) == Ordering::Greater {
        b.clone()
    } else {
        a.clone()
    }
}

/// A representative point of the open gap between two optional bounds.
pub(crate) fn gap_sample<T: Scalar>(lo: Option<&T>, hi: Option<&T>) -> T {
    match (lo, hi) {
        (None, None) => T::zero(),
        (None, Some(b)) => b.clone() - T::one(),
        (Some(a), None) => a.clone() + T::one(),
        (Some(a), Some(b)) => T::midpoint(a, b),
    }
}

/// A canonical finite union of pairwise separated intervals, sorted by lower end.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealSet<T> {
    pieces: Vec<Interval<T>>,
}

impl<T: Scalar> Default for RealSet<T> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<T: Scalar> RealSet<T> {
    pub fn empty() -> Self {
        RealSet { pieces: Vec::new() }
    }

    pub fn real_line() -> Self {
        RealSet {
            pieces: vec![Interval::real_line()],
        }
    }

    pub fn interval(iv: Interval<T>) -> Self {
        RealSet { pieces: vec![iv] }
    }

    pub fn point(x: T) -> Self {
        Self::interval(Interval::point(x))
    }

    /// Builds the canonical form of an arbitrary finite union.
    pub fn canonicalize(raw: Vec<Interval<T>>) -> Self {
        let points = endpoint_values(raw.iter());
        from_cells(points, |x| raw.iter().any(|iv| iv.contains(x)))
    }

    pub fn pieces(&self) -> &[Interval<T>] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_real_line(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0] == Interval::real_line()
    }

    pub fn is_bounded(&self) -> bool {
        self.pieces.iter().all(Interval::is_bounded)
    }

    pub fn contains(&self, x: &T) -> bool {
        let idx = self.pieces.partition_point(|iv| iv.lies_below(x));
        self.pieces.get(idx).is_some_and(|iv| iv.contains(x))
    }

    /// The piece containing `x`, if any.
    pub fn component_of(&self, x: &T) -> Option<&Interval<T>> {
        let idx = self.pieces.partition_point(|iv| iv.lies_below(x));
        self.pieces.get(idx).filter(|iv| iv.contains(x))
    }

    /// Sorted finite endpoint values of all pieces.
    pub fn boundary_points(&self) -> Vec<T> {
        endpoint_values(self.pieces.iter())
    }

    pub fn union(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        from_cells(self.boundary_points(), |x| !self.contains(x))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn closure(&self) -> Self {
        Self::canonicalize(self.pieces.iter().map(Interval::closure).collect())
    }

    pub fn interior(&self) -> Self {
        let opened = self
            .pieces
            .iter()
            .filter(|iv| !iv.is_singleton())
            .map(|iv| Interval {
                lo: iv.lo.opened(),
                hi: iv.hi.opened(),
            })
            .collect();
        Self::canonicalize(opened)
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn is_open(&self) -> bool {
        self.interior() == *self
    }

    /// Some point of the set, preferring the middle of its first piece.
    pub fn sample_point(&self) -> Option<T> {
        self.pieces.first().map(Interval::sample)
    }

    /// The n-th member of an increasing chain of closed subsets whose union is
    /// `self`: every excluded finite endpoint moves inward by `1/n`, never past
    /// the middle of its piece.
    pub fn fsigma_decomposition(&self, n: usize) -> Result<Self, SetError> {
        if n < 1 {
            return Err(SetError::BadIndex(n));
        }
        let step = T::one() / T::from_usize(n).expect("index fits the scalar");
        let shrunk = self
            .pieces
            .iter()
            .map(|iv| shrink_piece(iv, &step))
            .collect();
        Ok(Self::canonicalize(shrunk))
    }

    /// The n-th closed set of the chain exhausting the complement.
    pub fn gdelta_codecomposition(&self, n: usize) -> Result<Self, SetError> {
        self.complement().fsigma_decomposition(n)
    }

    /// Smallest `n` with `x` in the n-th closed set of the decomposition, if
    /// it is at most `n_max`.
    pub fn first_cover_index(&self, x: &T, n_max: usize) -> Option<usize> {
        let piece = self.component_of(x)?;
        (1..=n_max).find(|&n| {
            let step = T::one() / T::from_usize(n).expect("index fits the scalar");
            shrink_piece(piece, &step).contains(x)
        })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cursor = Cursor::new(text);
        let set = parse_set(&mut cursor)?;
        cursor.finish()?;
        Ok(set)
    }
}

fn shrink_piece<T: Scalar>(iv: &Interval<T>, step: &T) -> Interval<T> {
    let mid = iv.midpoint();
    let lo = match (&iv.lo, &mid) {
        (Endpoint::Open(a), Some(m)) => Endpoint::Closed((a.clone() + step.clone()).min(m.clone())),
        (Endpoint::Open(a), None) => Endpoint::Closed(a.clone() + step.clone()),
        (other, _) => other.clone(),
    };
    let hi = match (&iv.hi, &mid) {
        (Endpoint::Open(b), Some(m)) => Endpoint::Closed((b.clone() - step.clone()).max(m.clone())),
        (Endpoint::Open(b), None) => Endpoint::Closed(b.clone() - step.clone()),
        (other, _) => other.clone(),
    };
    // both ends capped at the midpoint can only meet, never cross
    Interval::new(lo, hi).unwrap_or_else(|_| Interval::point(mid.expect("bounded piece")))
}

fn endpoint_values<'a, T: Scalar>(pieces: impl Iterator<Item = &'a Interval<T>>) -> Vec<T> {
    let mut points: Vec<T> = pieces
        .flat_map(|iv| iv.lo.value().into_iter().chain(iv.hi.value()))
        .cloned()
        .collect();
    points.sort();
    points.dedup();
    points
}

fn combine<T: Scalar>(a: &RealSet<T>, b: &RealSet<T>, op: impl Fn(bool, bool) -> bool) -> RealSet<T> {
    let points = endpoint_values(a.pieces.iter().chain(b.pieces.iter()));
    from_cells(points, |x| op(a.contains(x), b.contains(x)))
}

/// Rebuilds a canonical set from a membership predicate that is constant on
/// each elementary cell cut out by `points` (the points themselves and the
/// open gaps between them).
fn from_cells<T: Scalar>(points: Vec<T>, member: impl Fn(&T) -> bool) -> RealSet<T> {
    let mut pieces = Vec::new();
    let mut start: Option<Endpoint<T>> = None;
    let gap_count = points.len() + 1;
    for gap in 0..gap_count {
        let lo = gap.checked_sub(1).map(|i| &points[i]);
        let hi = points.get(gap);
        let gap_in = member(&gap_sample(lo, hi));
        match (gap_in, &start) {
            (true, None) => start = Some(lo.map_or(Endpoint::Unbounded, |a| Endpoint::Open(a.clone()))),
            (false, Some(_)) => {
                let lo_end = start.take().unwrap();
                let a = lo.expect("a run that ends at a gap started at a point");
                pieces.push(Interval {
                    lo: lo_end,
                    hi: Endpoint::Closed(a.clone()),
                });
            }
            _ => {}
        }
        let Some(p) = hi else { break };
        let point_in = member(p);
        match (point_in, &start) {
            (true, None) => start = Some(Endpoint::Closed(p.clone())),
            (false, Some(_)) => pieces.push(Interval {
                lo: start.take().unwrap(),
                hi: Endpoint::Open(p.clone()),
            }),
            _ => {}
        }
    }
    if let Some(lo) = start {
        pieces.push(Interval {
            lo,
            hi: Endpoint::Unbounded,
        });
    }
    RealSet { pieces }
}

impl<T: Scalar> fmt::Display for Endpoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "inf"),
        }
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo.is_included() { '[' } else { '(' };
        let close = if self.hi.is_included() { ']' } else { ')' };
        match self.lo.value() {
            Some(a) => write!(f, "{open}{a},")?,
            None => write!(f, "{open}-inf,")?,
        }
        write!(f, "{}{close}", self.hi)
    }
}

impl<T: Scalar> fmt::Display for RealSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "empty");
        }
        for (i, iv) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

impl<T: Scalar> Serialize for RealSet<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<T: Scalar> Serialize for Interval<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn parse_bound<T: Scalar>(cursor: &mut Cursor<'_>, lower: bool) -> Result<Option<T>, ParseError> {
    let at = cursor.position();
    for word in ["-inf", "+inf", "inf", "-∞", "+∞", "∞"] {
        if cursor.eat_word(word) {
            let negative = word.starts_with('-');
            return if negative == lower {
                Ok(None)
            } else {
                Err(cursor.error_at("infinite bound on the wrong side", at))
            };
        }
    }
    cursor.rational().map(Some)
}

pub(crate) fn parse_interval<T: Scalar>(cursor: &mut Cursor<'_>) -> Result<Interval<T>, ParseError> {
    let at = cursor.position();
    match cursor.bump() {
        Some('{') => {
            let x = cursor.rational()?;
            cursor.expect('}')?;
            Ok(Interval::point(x))
        }
        Some(open @ ('[' | '(')) => {
            let lo = parse_bound(cursor, true)?;
            cursor.expect(',')?;
            let hi = parse_bound(cursor, false)?;
            let close = match cursor.bump() {
                Some(c @ (']' | ')')) => c,
                _ => return Err(cursor.error_at("expected ']' or ')'", cursor.position().saturating_sub(1))),
            };
            let lo = match lo {
                None if open == '[' => return Err(cursor.error_at("infinite end cannot be included", at)),
                None => Endpoint::Unbounded,
                Some(v) if open == '[' => Endpoint::Closed(v),
                Some(v) => Endpoint::Open(v),
            };
            let hi = match hi {
                None if close == ']' => {
                    return Err(cursor.error_at("infinite end cannot be included", cursor.position() - 1))
                }
                None => Endpoint::Unbounded,
                Some(v) if close == ']' => Endpoint::Closed(v),
                Some(v) => Endpoint::Open(v),
            };
            Interval::new(lo, hi).map_err(|e| cursor.error_at(e.to_string(), at))
        }
        Some(c) => Err(cursor.error_at(format!("expected an interval, found '{c}'"), at)),
        None => Err(cursor.error_at("expected an interval, found end of input", at)),
    }
}

pub(crate) fn parse_set<T: Scalar>(cursor: &mut Cursor<'_>) -> Result<RealSet<T>, ParseError> {
    if cursor.eat_word("empty") || cursor.eat_word("∅") {
        return Ok(RealSet::empty());
    }
    if cursor.eat_word("R") || cursor.eat_word("ℝ") {
        return Ok(RealSet::real_line());
    }
    let mut raw = vec![parse_interval(cursor)?];
    while cursor.eat_word("U") || cursor.eat_word("∪") {
        raw.push(parse_interval(cursor)?);
    }
    Ok(RealSet::canonicalize(raw))
}

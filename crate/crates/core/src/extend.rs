//! Extension operators from functions on `A` to functions on the line, and
//! exact checks of their properties.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::pwfunc::{FuncError, NormResult, PiecewiseFunc, Precision};
use crate::realset::{Endpoint, Interval, RealSet};
use crate::retraction::{Retraction, RetractionError};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtendError<T: Scalar> {
    #[error("f is defined on {got}, expected {expected}")]
    DomainMismatch { expected: RealSet<T>, got: RealSet<T> },
    #[error("anchor {0} is not in the domain")]
    AnchorOutside(T),
    #[error("the set {0} is not open")]
    NotOpen(RealSet<T>),
    #[error("{0} has no exact representation")]
    Inexact(String),
    #[error("index must be at least 1, got {0}")]
    BadIndex(usize),
    #[error("need at least one function to verify")]
    NoFunctions,
    #[error(transparent)]
    Func(#[from] FuncError<T>),
    #[error(transparent)]
    Retraction(#[from] RetractionError<T>),
}

/// `f -> f o phi` for a retraction, or the extension by the constant `f(x0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorKind<T: Scalar> {
    PhiStar(Retraction<T>),
    ConstantAnchor { a: RealSet<T>, x0: T },
}

impl<T: Scalar> OperatorKind<T> {
    pub fn constant_anchor(a: &RealSet<T>, x0: T) -> Result<Self, ExtendError<T>> {
        if !a.contains(&x0) {
            return Err(ExtendError::AnchorOutside(x0));
        }
        Ok(OperatorKind::ConstantAnchor { a: a.clone(), x0 })
    }

    pub fn set(&self) -> &RealSet<T> {
        match self {
            OperatorKind::PhiStar(r) => r.set(),
            OperatorKind::ConstantAnchor { a, .. } => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::PhiStar(_) => "phi-star",
            OperatorKind::ConstantAnchor { .. } => "constant-anchor",
        }
    }

    pub fn apply(&self, f: &PiecewiseFunc<T>) -> Result<PiecewiseFunc<T>, ExtendError<T>> {
        match self {
            OperatorKind::PhiStar(r) => phi_star(f, r),
            OperatorKind::ConstantAnchor { x0, .. } => constant_extend(f, x0),
        }
    }
}

fn require_domain<T: Scalar>(f: &PiecewiseFunc<T>, a: &RealSet<T>) -> Result<(), ExtendError<T>> {
    if f.domain() == a {
        Ok(())
    } else {
        Err(ExtendError::DomainMismatch {
            expected: a.clone(),
            got: f.domain().clone(),
        })
    }
}

/// `f o phi`.
pub fn phi_star<T: Scalar>(f: &PiecewiseFunc<T>, r: &Retraction<T>) -> Result<PiecewiseFunc<T>, ExtendError<T>> {
    require_domain(f, r.set())?;
    Ok(f.compose(r.phi())?)
}

/// `f` on its domain and `f(x0)` everywhere else.
pub fn constant_extend<T: Scalar>(f: &PiecewiseFunc<T>, x0: &T) -> Result<PiecewiseFunc<T>, ExtendError<T>> {
    let value = f.eval(x0).map_err(|_| ExtendError::AnchorOutside(x0.clone()))?;
    let rest = PiecewiseFunc::constant(&f.domain().complement(), value);
    Ok(f.glue(&rest)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AnchorCase {
    #[serde(rename = "f(x0) in U")]
    ValueInside,
    #[serde(rename = "f(x0) not in U")]
    ValueOutside,
}

impl fmt::Display for AnchorCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnchorCase::ValueInside => "f(x0) in U",
            AnchorCase::ValueOutside => "f(x0) not in U",
        })
    }
}

/// The preimage of an open set under the constant-anchor extension, by the
/// case formula and directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct AnchorPreimage<T: Scalar> {
    pub case: AnchorCase,
    pub formula: RealSet<T>,
    pub direct: RealSet<T>,
    pub agree: bool,
    pub precision: Precision<T>,
}

pub fn constant_extend_preimage<T: Scalar>(
    f: &PiecewiseFunc<T>,
    x0: &T,
    u: &RealSet<T>,
) -> Result<AnchorPreimage<T>, ExtendError<T>> {
    if !u.is_open() {
        return Err(ExtendError::NotOpen(u.clone()));
    }
    let extended = constant_extend(f, x0)?;
    let pre = f.preimage(u);
    let case = if u.contains(&f.eval(x0)?) {
        AnchorCase::ValueInside
    } else {
        AnchorCase::ValueOutside
    };
    let formula = match case {
        AnchorCase::ValueInside => pre.set.union(&f.domain().complement()),
        AnchorCase::ValueOutside => pre.set,
    };
    let direct = extended.preimage(u);
    Ok(AnchorPreimage {
        case,
        agree: formula == direct.set,
        formula,
        direct: direct.set,
        precision: direct.precision,
    })
}

/// One index of the chain `K_n = A ∩ G_n` exhausting `f^{-1}(U)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ChainStep<T: Scalar> {
    pub n: usize,
    pub k: RealSet<T>,
    pub g: RealSet<T>,
    /// Whether `K_n = A ∩ G_n`.
    pub k_is_trace: bool,
    pub phi_preimage: RealSet<T>,
    /// `phi^{-1}(G_1) ∪ ... ∪ phi^{-1}(G_n)`.
    pub union: RealSet<T>,
}

/// The full countable union contributed by one piece of `f^{-1}(U)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ChainStage<T: Scalar> {
    pub piece: Interval<T>,
    /// From this index on every endpoint of `phi^{-1}(G_n)` is affine in `1/n`.
    pub regular_from: usize,
    /// `phi^{-1}` of the piece, as the union over all `n`.
    pub limit: RealSet<T>,
    pub union: RealSet<T>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct PreimageChainTrace<T: Scalar> {
    pub u: RealSet<T>,
    pub preimage: RealSet<T>,
    pub steps: Vec<ChainStep<T>>,
    pub stages: Vec<ChainStage<T>>,
    pub direct: RealSet<T>,
    /// Number of stages after which the union equals the direct preimage.
    pub stabilization_index: Option<usize>,
}

impl<T: Scalar> PreimageChainTrace<T> {
    pub fn final_union(&self) -> RealSet<T> {
        self.stages.last().map(|s| s.union.clone()).unwrap_or_default()
    }

    pub fn agrees(&self) -> bool {
        self.stabilization_index.is_some()
    }
}

fn inv<T: Scalar>(n: usize) -> T {
    T::one() / T::from_usize(n).expect("index fits the scalar")
}

fn ceil_index<T: Scalar>(x: &T) -> usize {
    x.ceil_int().to_usize().unwrap_or(usize::MAX).max(1)
}

/// The preimage of `U` under `f o phi` assembled from the chain of closed
/// sets exhausting `f^{-1}(U)`, listing the first `steps` indices and then
/// one exact countable union per piece.
pub fn phi_star_preimage_chain<T: Scalar>(
    f: &PiecewiseFunc<T>,
    r: &Retraction<T>,
    u: &RealSet<T>,
    steps: usize,
) -> Result<PreimageChainTrace<T>, ExtendError<T>> {
    require_domain(f, r.set())?;
    if !u.is_open() {
        return Err(ExtendError::NotOpen(u.clone()));
    }
    let pre = f.preimage(u);
    if !pre.precision.is_exact() {
        return Err(ExtendError::Inexact(format!("preimage of {u}")));
    }
    let extended = phi_star(f, r)?;
    let direct = extended.preimage(u);
    if !direct.precision.is_exact() {
        return Err(ExtendError::Inexact(format!("preimage of {u} under the extension")));
    }
    if r.g().pieces().iter().any(|p| !p.expr.is_affine()) {
        return Err(ExtendError::Inexact("chain limits for non-affine g".into()));
    }
    let p = pre.set;
    let phi_pre = |g: &RealSet<T>| -> Result<RealSet<T>, ExtendError<T>> {
        let out = r.phi().preimage(g);
        if out.precision.is_exact() {
            Ok(out.set)
        } else {
            Err(ExtendError::Inexact(format!("preimage of {g} under phi")))
        }
    };

    let mut trace_steps = Vec::new();
    let mut union = RealSet::empty();
    for n in 1..=steps {
        let k = p.fsigma_decomposition(n).map_err(|_| ExtendError::BadIndex(n))?;
        let g = k.clone();
        let lifted = phi_pre(&g)?;
        union = union.union(&lifted);
        trace_steps.push(ChainStep {
            n,
            k_is_trace: r.set().intersect(&g) == k,
            k,
            g,
            phi_preimage: lifted,
            union: union.clone(),
        });
    }

    let mut stages = Vec::new();
    let mut union = RealSet::empty();
    let mut stabilization_index = (union == direct.set).then_some(0);
    for piece in p.pieces() {
        let single = RealSet::interval(piece.clone());
        let from = regular_index(piece, r.g());
        let at = |n: usize| -> Result<RealSet<T>, ExtendError<T>> {
            phi_pre(&single.fsigma_decomposition(n).expect("positive index"))
        };
        let limit = extrapolate(from, [at(from)?, at(from + 1)?, at(from + 2)?, at(2 * from + 3)?])?;
        union = union.union(&limit);
        stages.push(ChainStage {
            piece: piece.clone(),
            regular_from: from,
            limit,
            union: union.clone(),
        });
        if stabilization_index.is_none() && union == direct.set {
            stabilization_index = Some(stages.len());
        }
    }
    Ok(PreimageChainTrace {
        u: u.clone(),
        preimage: p,
        steps: trace_steps,
        stages,
        direct: direct.set,
        stabilization_index,
    })
}

/// An index past which the shrunk piece has left its midpoint cap and its
/// moving ends have crossed every value where an affine piece of `g` starts
/// or stops.
fn regular_index<T: Scalar>(piece: &Interval<T>, g: &PiecewiseFunc<T>) -> usize {
    let mut events = vec![1usize];
    if let Some(half) = piece.length().map(|len| len / T::two()) {
        if half.is_positive() {
            events.push(ceil_index(&(T::one() / half)));
        }
    }
    let levels: Vec<T> = g
        .pieces()
        .iter()
        .flat_map(|p| {
            [p.interval.lo(), p.interval.hi()]
                .into_iter()
                .filter_map(|e| e.value())
                .map(|v| p.expr.eval(v))
                .collect::<Vec<_>>()
        })
        .collect();
    for level in levels {
        if let Endpoint::Open(a) = piece.lo() {
            if level > *a {
                events.push(ceil_index(&(T::one() / (level.clone() - a.clone()))));
            }
        }
        if let Endpoint::Open(b) = piece.hi() {
            if level < *b {
                events.push(ceil_index(&(T::one() / (b.clone() - level.clone()))));
            }
        }
    }
    events.into_iter().max().unwrap() + 1
}

/// The union of an increasing chain of sets whose endpoints are affine in
/// `1/n` from index `from` on, given the members at `from`, `from + 1`,
/// `from + 2` and `2 from + 3` (the last one is a check).
fn extrapolate<T: Scalar>(from: usize, sets: [RealSet<T>; 4]) -> Result<RealSet<T>, ExtendError<T>> {
    let ts: [T; 4] = [inv(from), inv(from + 1), inv(from + 2), inv(2 * from + 3)];
    let shape = |s: &RealSet<T>| -> Vec<(u8, u8)> {
        let kind = |e: &Endpoint<T>| match e {
            Endpoint::Unbounded => 0,
            Endpoint::Closed(_) => 1,
            Endpoint::Open(_) => 2,
        };
        s.pieces().iter().map(|iv| (kind(iv.lo()), kind(iv.hi()))).collect()
    };
    let irregular = || ExtendError::Inexact("a chain whose endpoints are not affine in 1/n".into());
    if sets.iter().any(|s| shape(s) != shape(&sets[0])) {
        return Err(irregular());
    }
    let mut pieces = Vec::new();
    for i in 0..sets[0].pieces().len() {
        let ends = |pick: fn(&Interval<T>) -> &Endpoint<T>, lower: bool| -> Result<Endpoint<T>, ExtendError<T>> {
            let values: Vec<Option<T>> = sets.iter().map(|s| pick(&s.pieces()[i]).value().cloned()).collect();
            let Some(v0) = values[0].clone() else { return Ok(Endpoint::Unbounded) };
            let v1 = values[1].clone().unwrap();
            let slope = (v1.clone() - v0.clone()) / (ts[1].clone() - ts[0].clone());
            let predict = |t: &T| v0.clone() + slope.clone() * (t.clone() - ts[0].clone());
            if (2..4).any(|j| values[j].as_ref() != Some(&predict(&ts[j]))) {
                return Err(irregular());
            }
            let limit = predict(&T::zero());
            if slope.is_zero() {
                return Ok(pick(&sets[0].pieces()[i]).clone());
            }
            // the chain increases, so moving ends approach the limit from inside
            if lower != slope.is_positive() {
                return Err(irregular());
            }
            Ok(Endpoint::Open(limit))
        };
        let lo = ends(Interval::lo, true)?;
        let hi = ends(Interval::hi, false)?;
        pieces.push(Interval::new(lo, hi).map_err(|_| irregular())?);
    }
    Ok(RealSet::canonicalize(pieces))
}

/// Outcome of one property check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub status: Status,
    /// A counterexample point, or the reason for the status.
    pub witness: Option<String>,
}

impl Check {
    fn pass() -> Self {
        Check {
            status: Status::Pass,
            witness: None,
        }
    }

    fn with(status: Status, witness: impl Into<String>) -> Self {
        Check {
            status,
            witness: Some(witness.into()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status != Status::Fail
    }

    /// Combines per-input checks: any failure wins, then inconclusive, then pass.
    fn merge(checks: impl IntoIterator<Item = Check>) -> Check {
        let mut out: Option<Check> = None;
        for c in checks {
            let rank = |s: Status| match s {
                Status::Fail => 3,
                Status::Inconclusive => 2,
                Status::Pass => 1,
                Status::NotApplicable => 0,
            };
            out = Some(match out {
                Some(o) if rank(o.status) >= rank(c.status) => o,
                _ => c,
            });
        }
        out.unwrap_or_else(|| Check::with(Status::NotApplicable, "no inputs"))
    }
}

/// The two suprema compared by the isometry check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct NormPair<T: Scalar> {
    pub function: String,
    pub on_set: NormResult<T>,
    pub on_line: NormResult<T>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct OperatorReport<T: Scalar> {
    pub operator: &'static str,
    pub extension: Check,
    pub linear: Check,
    pub positive: Check,
    pub unity: Check,
    pub isometry: Check,
    pub norms: Vec<NormPair<T>>,
}

impl<T: Scalar> OperatorReport<T> {
    pub fn passed(&self) -> bool {
        [&self.extension, &self.linear, &self.positive, &self.unity, &self.isometry]
            .iter()
            .all(|c| c.is_ok())
    }
}

/// Checks the operator against every function in `fs`. Linearity is checked
/// on `alpha f_i + beta f_{i+1}` (cyclically) for each coefficient pair.
pub fn verify_operator<T: Scalar>(
    kind: &OperatorKind<T>,
    fs: &[PiecewiseFunc<T>],
    coeffs: &[(T, T)],
    eps: &T,
) -> Result<OperatorReport<T>, ExtendError<T>> {
    if fs.is_empty() {
        return Err(ExtendError::NoFunctions);
    }
    let a = kind.set();
    for f in fs {
        require_domain(f, a)?;
    }
    let extended: Vec<PiecewiseFunc<T>> = fs.iter().map(|f| kind.apply(f)).collect::<Result<_, _>>()?;
    let line = RealSet::real_line();

    let extension = Check::merge(fs.iter().zip(&extended).map(|(f, e)| {
        let back = e.restrict(a).expect("extension covers the line");
        match back.first_difference(f) {
            None => Check::pass(),
            Some(x) => Check::with(Status::Fail, format!("restriction differs from f at {x}")),
        }
    }));

    let mut linear = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        let j = (i + 1) % fs.len();
        for (alpha, beta) in coeffs {
            let combo = f.linear_combination(alpha, &fs[j], beta)?;
            let lhs = kind.apply(&combo)?;
            let rhs = extended[i].linear_combination(alpha, &extended[j], beta)?;
            linear.push(match lhs.first_difference(&rhs) {
                None => Check::pass(),
                Some(x) => Check::with(Status::Fail, format!("T({alpha} f{i} + {beta} f{j}) differs at {x}")),
            });
        }
    }
    let linear = Check::merge(linear);

    let one = kind.apply(&PiecewiseFunc::constant(a, T::one()))?;
    let unity = match one.first_difference(&PiecewiseFunc::constant(&line, T::one())) {
        None => Check::pass(),
        Some(x) => Check::with(Status::Fail, format!("T(1)({x}) = {}", one.eval(&x)?)),
    };

    let mut positive = Vec::new();
    for (i, (f, e)) in fs.iter().zip(&extended).enumerate() {
        let below = match f.infimum(a, eps) {
            Ok(Some(inf)) => inf,
            Ok(None) => continue,
            Err(FuncError::Unbounded) => {
                positive.push(Check::with(Status::NotApplicable, format!("f{i} is unbounded below")));
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        if below.lo.is_negative() {
            let status = if below.hi.is_negative() { Status::NotApplicable } else { Status::Inconclusive };
            positive.push(Check::with(status, format!("inf of f{i} is in [{}, {}]", below.lo, below.hi)));
            continue;
        }
        positive.push(match e.infimum(&line, eps) {
            Ok(Some(inf)) if !inf.lo.is_negative() => Check::pass(),
            Ok(Some(inf)) if inf.hi.is_negative() => {
                Check::with(Status::Fail, format!("inf of T(f{i}) is in [{}, {}]", inf.lo, inf.hi))
            }
            Ok(Some(inf)) => Check::with(Status::Inconclusive, format!("inf of T(f{i}) is in [{}, {}]", inf.lo, inf.hi)),
            Ok(None) => Check::pass(),
            Err(FuncError::Unbounded) => Check::with(Status::Fail, format!("T(f{i}) is unbounded below")),
            Err(err) => return Err(err.into()),
        });
    }
    let positive = Check::merge(positive);

    let mut norms = Vec::new();
    let mut isometry = Vec::new();
    let two_eps = T::two() * eps.clone();
    for (i, (f, e)) in fs.iter().zip(&extended).enumerate() {
        let on_set = match f.sup_norm(a, eps) {
            Ok(n) => n,
            Err(FuncError::Unbounded) => {
                isometry.push(Check::with(Status::NotApplicable, format!("f{i} is unbounded")));
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        let on_line = match e.sup_norm(&line, eps) {
            Ok(n) => n,
            Err(FuncError::Unbounded) => {
                isometry.push(Check::with(Status::Fail, format!("T(f{i}) is unbounded")));
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        isometry.push(match (&on_set.exact, &on_line.exact) {
            (Some(x), Some(y)) if x == y => Check::pass(),
            (Some(x), Some(y)) => Check::with(Status::Fail, format!("norms {x} and {y} of f{i}")),
            _ => {
                let lo = on_set.lo.clone().min(on_line.lo.clone());
                let hi = on_set.hi.clone().max(on_line.hi.clone());
                if on_set.hi < on_line.lo || on_line.hi < on_set.lo {
                    Check::with(Status::Fail, format!("disjoint norm enclosures for f{i}"))
                } else if hi - lo <= two_eps {
                    Check::pass()
                } else {
                    Check::with(Status::Inconclusive, format!("norm enclosures for f{i} overlap"))
                }
            }
        });
        norms.push(NormPair {
            function: format!("f{i}"),
            on_set,
            on_line,
        });
    }

    Ok(OperatorReport {
        operator: kind.name(),
        extension,
        linear,
        positive,
        unity,
        isometry: Check::merge(isometry),
        norms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaireRoute {
    /// `f_n o phi_n`, used when `A` is an interval.
    Composition,
    /// Continuous approximants of `f o phi` itself.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SampleTrace<T: Scalar> {
    #[serde(with = "crate::scalar::as_text")]
    pub x: T,
    #[serde(with = "crate::scalar::as_text")]
    pub target: T,
    /// Smallest `n` with `h_m(x) = target` for every `m` from `n` to `n_max`.
    pub index: Option<usize>,
    /// The index predicted from the distance to the jumps and the cover index.
    pub bound: usize,
}

impl<T: Scalar> SampleTrace<T> {
    pub fn within_bound(&self) -> bool {
        self.index.is_some_and(|n| n <= self.bound)
    }
}

impl<T: Scalar> BaireReport<T> {
    /// Samples that have not settled by `n_max` but are not predicted to yet.
    pub fn pending(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| s.index.is_none() && s.bound > self.n_max)
            .count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct BaireReport<T: Scalar> {
    pub route: BaireRoute,
    pub n_max: usize,
    /// `n` for which the approximant has a jump.
    pub discontinuous: Vec<usize>,
    pub samples: Vec<SampleTrace<T>>,
}

impl<T: Scalar> BaireReport<T> {
    /// No approximant jumps, and every sample settles by its bound unless
    /// that bound lies beyond `n_max`.
    pub fn passed(&self) -> bool {
        self.discontinuous.is_empty()
            && self
                .samples
                .iter()
                .all(|s| s.within_bound() || (s.index.is_none() && s.bound > self.n_max))
    }
}

/// `max(1, ceil(1 / dist(y, jumps)))`, or 1 at a jump.
fn ramp_bound<T: Scalar>(y: &T, jumps: &[T]) -> usize {
    jumps
        .iter()
        .map(|b| (b.clone() - y.clone()).abs())
        .min()
        .filter(|d| d.is_positive())
        .map_or(1, |d| ceil_index(&(T::one() / d)))
}

/// Smallest `n` with `x` in the n-th closed set exhausting its component of
/// `A` or of the complement.
fn cover_bound<T: Scalar>(r: &Retraction<T>, x: &T) -> usize {
    let a = r.set();
    let side = if a.contains(x) { a.clone() } else { a.complement() };
    let component = side.component_of(x).expect("x lies in one of the two sides");
    let dist = [component.lo(), component.hi()]
        .into_iter()
        .filter(|e| e.is_open())
        .filter_map(|e| e.value())
        .map(|v| (v.clone() - x.clone()).abs())
        .min();
    let cap = dist.map_or(1, |d| ceil_index(&(T::one() / d)) + 1);
    side.first_cover_index(x, cap).unwrap_or(cap)
}

/// Continuous functions converging to `f o phi` at each sample, with each
/// sample's stabilization index.
pub fn baire_witness<T: Scalar>(
    f: &PiecewiseFunc<T>,
    r: &Retraction<T>,
    n_max: usize,
    samples: &[T],
) -> Result<BaireReport<T>, ExtendError<T>> {
    if n_max < 1 {
        return Err(ExtendError::BadIndex(n_max));
    }
    let h = phi_star(f, r)?;
    let route = if r.set().pieces().len() == 1 {
        BaireRoute::Composition
    } else {
        BaireRoute::Direct
    };
    let f_jumps = f.jump_points();
    let h_jumps = h.jump_points();
    let targets: Vec<T> = samples.iter().map(|x| h.eval(x)).collect::<Result<_, _>>()?;
    let mut last_miss = vec![0usize; samples.len()];
    let mut discontinuous = Vec::new();
    for n in 1..=n_max {
        let approx = match route {
            BaireRoute::Composition => f.continuous_approximation(n)?.compose(&r.retraction_approx(n)?)?,
            BaireRoute::Direct => h.continuous_approximation(n)?,
        };
        if !approx.is_continuous() {
            discontinuous.push(n);
        }
        for (k, x) in samples.iter().enumerate() {
            if approx.eval(x)? != targets[k] {
                last_miss[k] = n;
            }
        }
    }
    let samples = samples
        .iter()
        .zip(targets)
        .zip(last_miss)
        .map(|((x, target), miss)| SampleTrace {
            bound: match route {
                BaireRoute::Composition => cover_bound(r, x).max(ramp_bound(&r.apply(x), &f_jumps)),
                BaireRoute::Direct => ramp_bound(x, &h_jumps),
            },
            index: (miss < n_max).then_some(miss + 1),
            x: x.clone(),
            target,
        })
        .collect();
    Ok(BaireReport {
        route,
        n_max,
        discontinuous,
        samples,
    })
}

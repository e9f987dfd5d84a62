//! Witness-producing classifiers for continuity, piecewise continuity and
//! the first Borel classes, plus a small gallery of symbolic examples.
//!
//! Every representable function has F_sigma preimages of open and of closed
//! sets, so the preimage classifiers return the witnessing chains rather
//! than a verdict. Functions separating the classes live in the gallery.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::pwfunc::{FuncError, PiecewiseFunc, Precision};
use crate::realset::{Endpoint, Interval, RealSet};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError<T: Scalar> {
    #[error("piecewise continuity is judged on the whole line, not on {0}")]
    DomainNotLine(RealSet<T>),
    #[error("the set {0} is not open")]
    NotOpen(RealSet<T>),
    #[error("the set {0} is not closed")]
    NotClosed(RealSet<T>),
    #[error("index must be at least 1, got {0}")]
    BadIndex(usize),
    #[error(transparent)]
    Func(#[from] FuncError<T>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ContinuityReport<T: Scalar> {
    pub continuous: bool,
    /// Breakpoints inside a component of the domain where the one-sided
    /// limits disagree.
    #[serde(with = "crate::scalar::as_text_seq")]
    pub jumps: Vec<T>,
}

pub fn is_continuous<T: Scalar>(f: &PiecewiseFunc<T>) -> ContinuityReport<T> {
    let jumps = f.jump_points();
    ContinuityReport {
        continuous: jumps.is_empty(),
        jumps,
    }
}

/// One closed set of the cover, with the continuity check on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct PcLevel<T: Scalar> {
    pub n: usize,
    pub set: RealSet<T>,
    pub continuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct PcReport<T: Scalar> {
    pub piecewise_continuous: bool,
    #[serde(with = "crate::scalar::as_text_seq")]
    pub jumps: Vec<T>,
    pub levels: Vec<PcLevel<T>>,
}

/// `X_n`: the line minus an open window of width `1/n` on each side of each
/// jump that does not own the jump point.
pub fn pc_level<T: Scalar>(f: &PiecewiseFunc<T>, n: usize) -> Result<RealSet<T>, ClassifyError<T>> {
    if n < 1 {
        return Err(ClassifyError::BadIndex(n));
    }
    if !f.domain().is_real_line() {
        return Err(ClassifyError::DomainNotLine(f.domain().clone()));
    }
    let w = T::one() / T::from_usize(n).expect("index fits the scalar");
    let mut windows = Vec::new();
    for pair in f.pieces().windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let Some(b) = left.interval.hi().value() else { continue };
        if left.expr.eval(b) == right.expr.eval(b) {
            continue;
        }
        if !left.interval.contains(b) && !left.interval.is_singleton() {
            windows.push(Interval::open(b.clone() - w.clone(), b.clone()));
        }
        if !right.interval.contains(b) && !right.interval.is_singleton() {
            windows.push(Interval::open(b.clone(), b.clone() + w.clone()));
        }
    }
    Ok(RealSet::canonicalize(windows).complement())
}

/// The first `n_max` sets of an increasing closed cover of the line on each
/// of which `f` is continuous.
pub fn is_piecewise_continuous<T: Scalar>(f: &PiecewiseFunc<T>, n_max: usize) -> Result<PcReport<T>, ClassifyError<T>> {
    if n_max < 1 {
        return Err(ClassifyError::BadIndex(n_max));
    }
    let mut levels = Vec::new();
    for n in 1..=n_max {
        let set = pc_level(f, n)?;
        let continuous = f.restrict(&set)?.is_continuous();
        levels.push(PcLevel { n, set, continuous });
    }
    Ok(PcReport {
        piecewise_continuous: levels.iter().all(|l| l.continuous),
        jumps: f.jump_points(),
        levels,
    })
}

/// A preimage with the first members of a closed chain exhausting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct PreimageWitness<T: Scalar> {
    pub target: RealSet<T>,
    pub preimage: RealSet<T>,
    pub precision: Precision<T>,
    pub closed: bool,
    pub chain: Vec<RealSet<T>>,
}

fn witness<T: Scalar>(f: &PiecewiseFunc<T>, target: &RealSet<T>, levels: usize) -> PreimageWitness<T> {
    let pre = f.preimage(target);
    let chain = (1..=levels)
        .map(|n| pre.set.fsigma_decomposition(n).expect("positive index"))
        .collect();
    PreimageWitness {
        target: target.clone(),
        closed: pre.set.is_closed(),
        preimage: pre.set,
        precision: pre.precision,
        chain,
    }
}

/// Preimages of open sets, each shown to be a countable union of closed sets.
pub fn fcb_witness<T: Scalar>(
    f: &PiecewiseFunc<T>,
    opens: &[RealSet<T>],
    levels: usize,
) -> Result<Vec<PreimageWitness<T>>, ClassifyError<T>> {
    if let Some(bad) = opens.iter().find(|u| !u.is_open()) {
        return Err(ClassifyError::NotOpen(bad.clone()));
    }
    Ok(opens.iter().map(|u| witness(f, u, levels)).collect())
}

/// Preimages of closed sets, each shown to be a countable union of closed sets.
pub fn flb_witness<T: Scalar>(
    f: &PiecewiseFunc<T>,
    closeds: &[RealSet<T>],
    levels: usize,
) -> Result<Vec<PreimageWitness<T>>, ClassifyError<T>> {
    if let Some(bad) = closeds.iter().find(|c| !c.is_closed()) {
        return Err(ClassifyError::NotClosed(bad.clone()));
    }
    Ok(closeds.iter().map(|c| witness(f, c, levels)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct FuncClassReport<T: Scalar> {
    pub continuity: ContinuityReport<T>,
    /// Absent when the domain is not the whole line.
    pub piecewise: Option<PcReport<T>>,
    pub fcb_witnessed: bool,
    pub flb_witnessed: bool,
    pub open_preimages: Vec<PreimageWitness<T>>,
    pub closed_preimages: Vec<PreimageWitness<T>>,
}

/// Open and closed test sets cut at the values of `f` at its breakpoints.
fn probe_sets<T: Scalar>(f: &PiecewiseFunc<T>) -> (Vec<RealSet<T>>, Vec<RealSet<T>>) {
    let mut values: Vec<T> = f
        .pieces()
        .iter()
        .flat_map(|p| {
            [p.interval.lo(), p.interval.hi()]
                .into_iter()
                .filter_map(Endpoint::value)
                .map(|x| p.expr.eval(x))
                .collect::<Vec<_>>()
        })
        .collect();
    values.sort();
    values.dedup();
    if values.is_empty() {
        values.push(T::zero());
    }
    let mut opens = Vec::new();
    let mut closeds = Vec::new();
    for v in &values {
        opens.push(RealSet::interval(Interval::new(Endpoint::Unbounded, Endpoint::Open(v.clone())).unwrap()));
        opens.push(RealSet::interval(Interval::new(Endpoint::Open(v.clone()), Endpoint::Unbounded).unwrap()));
        closeds.push(RealSet::point(v.clone()));
    }
    for pair in values.windows(2) {
        opens.push(RealSet::interval(Interval::open(pair[0].clone(), pair[1].clone())));
        closeds.push(RealSet::interval(Interval::closed(pair[0].clone(), pair[1].clone())));
    }
    (opens, closeds)
}

/// All classifiers at once, with test sets derived from the breakpoint values.
pub fn classify<T: Scalar>(f: &PiecewiseFunc<T>, levels: usize) -> Result<FuncClassReport<T>, ClassifyError<T>> {
    let piecewise = if f.domain().is_real_line() {
        Some(is_piecewise_continuous(f, levels)?)
    } else {
        None
    };
    let (opens, closeds) = probe_sets(f);
    let open_preimages = fcb_witness(f, &opens, levels)?;
    let closed_preimages = flb_witness(f, &closeds, levels)?;
    let chained = |ws: &[PreimageWitness<T>]| {
        ws.iter()
            .all(|w| w.chain.iter().all(|c| c.is_closed() && c.is_subset(&w.preimage)))
    };
    Ok(FuncClassReport {
        continuity: is_continuous(f),
        piecewise,
        fcb_witnessed: chained(&open_preimages),
        flb_witnessed: chained(&closed_preimages),
        open_preimages,
        closed_preimages,
    })
}

/// `1/q` at `p/q` in lowest terms with `q > 0`; 1 at the integers.
pub fn riemann_eval<T: Scalar>(x: &T) -> T {
    T::one() / x.denom_scalar()
}

/// Membership of a gallery function in one class, with its justification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: &'static str,
    pub member: bool,
    pub reason: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluator {
    Riemann,
    /// Not computable on any representable input.
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub definition: &'static str,
    #[serde(serialize_with = "evaluator_name")]
    pub evaluator: Evaluator,
    pub classifications: Vec<Classification>,
}

fn evaluator_name<S: Serializer>(e: &Evaluator, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match e {
        Evaluator::Riemann => "exact on rationals",
        Evaluator::Symbolic => "none",
    })
}

impl GalleryEntry {
    /// The value at a rational, when the entry can be evaluated there.
    pub fn eval<T: Scalar>(&self, x: &T) -> Option<T> {
        match self.evaluator {
            Evaluator::Riemann => Some(riemann_eval(x)),
            Evaluator::Symbolic => None,
        }
    }
}

pub fn gallery() -> Vec<GalleryEntry> {
    vec![
        GalleryEntry {
            name: "riemann",
            definition: "1/q at x = p/q in lowest terms (q > 0), 0 at irrational x",
            evaluator: Evaluator::Riemann,
            classifications: vec![
                Classification {
                    class: "first Borel class",
                    member: true,
                    reason: "an open set containing 0 pulls back to the line minus a closed discrete set of rationals, \
                             and one missing 0 pulls back to a countable set; both are F_sigma",
                },
                Classification {
                    class: "first level Borel class",
                    member: false,
                    reason: "the preimage of the closed set {0} is the set of irrationals, which is not F_sigma",
                },
                Classification {
                    class: "representable",
                    member: false,
                    reason: "infinitely many jumps on every interval; only evaluated pointwise on rationals",
                },
            ],
        },
        GalleryEntry {
            name: "rational-domain",
            definition: "a Baire-one function on the rationals of [0,1] with no Baire-one extension to the line",
            evaluator: Evaluator::Symbolic,
            classifications: vec![
                Classification {
                    class: "extendable",
                    member: false,
                    reason: "its domain is F_sigma but not G_delta, outside the ambiguous sets this library handles",
                },
                Classification {
                    class: "representable",
                    member: false,
                    reason: "the rationals of [0,1] are not a finite union of intervals",
                },
            ],
        },
    ]
}

pub fn gallery_entry(name: &str) -> Option<GalleryEntry> {
    gallery().into_iter().find(|e| e.name == name)
}

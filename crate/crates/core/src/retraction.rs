//! The algebraic retraction onto a set `A`: the identity on `A` and a
//! continuous map `g` into `A` off it.

use serde::Serialize;
use thiserror::Error;

use crate::poly::Poly;
use crate::pwfunc::{FuncError, PiecewiseFunc, Precision};
use crate::realset::{Endpoint, Interval, RealSet, SetError};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RetractionError<T: Scalar> {
    #[error("the set is empty, so nothing retracts onto it")]
    EmptySet,
    #[error("g must be defined exactly on the complement {expected}, got {got}")]
    DomainMismatch { expected: RealSet<T>, got: RealSet<T> },
    #[error("g({witness}) = {value} is not in the set")]
    RangeViolation { witness: T, value: T },
    #[error("g jumps at {0} inside a component of the complement")]
    Discontinuous(T),
    #[error("anchor {0} is not in the set")]
    AnchorOutside(T),
    #[error("expected {expected} anchors, one per complement component, got {got}")]
    AnchorCount { expected: usize, got: usize },
    #[error("the set {0} is not closed")]
    NotClosed(RealSet<T>),
    #[error("could not decide whether g stays in the set on {0}")]
    Undecided(RealSet<T>),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Func(#[from] FuncError<T>),
}

/// How [`default_g`] picks the constant value on each complement component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnchorPolicy<T> {
    /// The endpoint shared with a neighbouring piece of `A` when `A` contains
    /// it (the smaller one on ties), else the midpoint of the nearest piece.
    NearestMemberEndpoint,
    /// Always the midpoint of the nearest piece (the smaller one on ties).
    MidpointFallback,
    /// One anchor per complement component, left to right.
    Explicit(Vec<T>),
}

/// A continuous map from the complement of `a` into `a`, constant on each
/// component of the complement.
pub fn default_g<T: Scalar>(a: &RealSet<T>, policy: &AnchorPolicy<T>) -> Result<PiecewiseFunc<T>, RetractionError<T>> {
    if a.is_empty() {
        return Err(RetractionError::EmptySet);
    }
    let complement = a.complement();
    let components = complement.pieces();
    let anchors: Vec<T> = match policy {
        AnchorPolicy::Explicit(list) => {
            if list.len() != components.len() {
                return Err(RetractionError::AnchorCount {
                    expected: components.len(),
                    got: list.len(),
                });
            }
            if let Some(bad) = list.iter().find(|x| !a.contains(x)) {
                return Err(RetractionError::AnchorOutside(bad.clone()));
            }
            list.clone()
        }
        _ => components
            .iter()
            .map(|c| {
                let left = c.lo().value().and_then(|v| a.component_of(v).map(|p| (v, p)));
                let right = c.hi().value().and_then(|v| a.component_of(v).map(|p| (v, p)));
                let neighbours = [left_neighbour(a, c), right_neighbour(a, c)];
                if matches!(policy, AnchorPolicy::NearestMemberEndpoint) {
                    if let Some((v, _)) = left.or(right) {
                        return v.clone();
                    }
                }
                let nearest = neighbours
                    .into_iter()
                    .flatten()
                    .next()
                    .expect("a nonempty set borders every complement component");
                // unbounded pieces use the point at distance one from their end
                nearest.sample()
            })
            .collect(),
    };
    let mut pieces = Vec::new();
    for (c, v) in components.iter().zip(anchors) {
        pieces.push((c.clone(), Poly::constant(v)));
    }
    Ok(PiecewiseFunc::new(pieces)?)
}

fn left_neighbour<'a, T: Scalar>(a: &'a RealSet<T>, c: &Interval<T>) -> Option<&'a Interval<T>> {
    let v = c.lo().value()?;
    a.pieces().iter().rev().find(|p| p.hi().value() == Some(v))
}

fn right_neighbour<'a, T: Scalar>(a: &'a RealSet<T>, c: &Interval<T>) -> Option<&'a Interval<T>> {
    let v = c.hi().value()?;
    a.pieces().iter().find(|p| p.lo().value() == Some(v))
}

/// `phi` restricted to `a` is the identity and `phi = g` off `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Retraction<T: Scalar> {
    phi: PiecewiseFunc<T>,
    a: RealSet<T>,
    g: PiecewiseFunc<T>,
}

/// A closed set on which a function was checked for continuity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ContinuityWitness<T: Scalar> {
    pub on: RealSet<T>,
    /// Breakpoints of the restricted function inside a component of `on`.
    #[serde(with = "crate::scalar::as_text_seq")]
    pub checked: Vec<T>,
    /// Those among them where the one-sided limits differ.
    #[serde(with = "crate::scalar::as_text_seq")]
    pub jumps: Vec<T>,
}

impl<T: Scalar> ContinuityWitness<T> {
    pub fn is_continuous(&self) -> bool {
        self.jumps.is_empty()
    }
}

/// Checks that `f` restricted to `on` has matching one-sided limits at every
/// breakpoint interior to a component of `on`.
pub fn continuity_on<T: Scalar>(f: &PiecewiseFunc<T>, on: &RealSet<T>) -> Result<ContinuityWitness<T>, FuncError<T>> {
    let restricted = f.restrict(on)?;
    let checked = restricted
        .pieces()
        .windows(2)
        .filter_map(|w| {
            let (x, y) = (w[0].interval.hi(), w[1].interval.lo());
            match (x.value(), y.value()) {
                (Some(p), Some(q)) if p == q && x.is_included() != y.is_included() => Some(p.clone()),
                _ => None,
            }
        })
        .collect();
    Ok(ContinuityWitness {
        on: on.clone(),
        checked,
        jumps: restricted.jump_points(),
    })
}

/// Both routes to the preimage of a closed set under the retraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct FlbPreimage<T: Scalar> {
    /// `(A ∩ F) ∪ g^{-1}(F)`.
    pub formula: RealSet<T>,
    /// `phi^{-1}(F)` computed directly.
    pub direct: RealSet<T>,
    pub agree: bool,
    pub precision: Precision<T>,
}

impl<T: Scalar> Retraction<T> {
    /// Glues the identity on `a` with `g`, after checking that `g` lives on
    /// the complement, maps into `a`, and is continuous on each component.
    pub fn build(a: &RealSet<T>, g: &PiecewiseFunc<T>) -> Result<Self, RetractionError<T>> {
        let complement = a.complement();
        if g.domain() != &complement {
            return Err(RetractionError::DomainMismatch {
                expected: complement,
                got: g.domain().clone(),
            });
        }
        if a.is_empty() {
            return Err(RetractionError::EmptySet);
        }
        let inside = g.preimage(a);
        let outside = complement.difference(&inside.set);
        if let Some(witness) = outside.sample_point() {
            let value = g.eval(&witness)?;
            return Err(RetractionError::RangeViolation { witness, value });
        }
        let undecided = complement.difference(&inside.inner);
        if !undecided.is_empty() {
            return Err(RetractionError::Undecided(undecided));
        }
        if let Some(at) = g.jump_points().into_iter().next() {
            return Err(RetractionError::Discontinuous(at));
        }
        let phi = PiecewiseFunc::identity(a).glue(g)?;
        Ok(Retraction {
            phi,
            a: a.clone(),
            g: g.clone(),
        })
    }

    /// The retraction with `g` from [`default_g`].
    pub fn with_policy(a: &RealSet<T>, policy: &AnchorPolicy<T>) -> Result<Self, RetractionError<T>> {
        if a.is_real_line() {
            return Self::build(a, &PiecewiseFunc::empty());
        }
        Self::build(a, &default_g(a, policy)?)
    }

    pub fn phi(&self) -> &PiecewiseFunc<T> {
        &self.phi
    }

    pub fn set(&self) -> &RealSet<T> {
        &self.a
    }

    pub fn g(&self) -> &PiecewiseFunc<T> {
        &self.g
    }

    pub fn apply(&self, x: &T) -> T {
        self.phi.eval(x).expect("phi is defined on the whole line")
    }

    /// `H_n`: the n-th closed set exhausting `A` joined with the n-th closed
    /// set exhausting its complement.
    pub fn pc_decomposition(&self, n: usize) -> Result<RealSet<T>, RetractionError<T>> {
        let f = self.a.fsigma_decomposition(n)?;
        let g = self.a.gdelta_codecomposition(n)?;
        Ok(f.union(&g))
    }

    /// Continuity of `phi` on `H_n`.
    pub fn pc_witness(&self, n: usize) -> Result<ContinuityWitness<T>, RetractionError<T>> {
        let h = self.pc_decomposition(n)?;
        Ok(continuity_on(&self.phi, &h)?)
    }

    /// The smallest `n <= n_max` with `x` in `H_n`.
    pub fn cover_index(&self, x: &T, n_max: usize) -> Option<usize> {
        if self.a.contains(x) {
            self.a.first_cover_index(x, n_max)
        } else {
            self.a.complement().first_cover_index(x, n_max)
        }
    }

    /// The preimage of a closed set, by the case formula and directly.
    pub fn flb_preimage(&self, f: &RealSet<T>) -> Result<FlbPreimage<T>, RetractionError<T>> {
        if !f.is_closed() {
            return Err(RetractionError::NotClosed(f.clone()));
        }
        let through_g = self.g.preimage(f);
        let formula = self.a.intersect(f).union(&through_g.set);
        let direct = self.phi.preimage(f);
        let precision = match (through_g.precision, direct.precision.clone()) {
            (Precision::Exact, p) => p,
            (p, _) => p,
        };
        Ok(FlbPreimage {
            agree: formula == direct.set,
            formula,
            direct: direct.set,
            precision,
        })
    }

    /// `phi_n`: equal to `phi` on `H_n` and affine across each gap of `H_n`.
    pub fn retraction_approx(&self, n: usize) -> Result<PiecewiseFunc<T>, RetractionError<T>> {
        let h = self.pc_decomposition(n)?;
        let mut out = self.phi.restrict(&h)?;
        for gap in h.complement().pieces() {
            let (Some(c), Some(d)) = (gap.lo().value(), gap.hi().value()) else {
                unreachable!("the closed sets H_n keep every unbounded end")
            };
            let ramp = Poly::through(c, &self.apply(c), d, &self.apply(d));
            let piece = Interval::new(Endpoint::Open(c.clone()), Endpoint::Open(d.clone()))?;
            out = out.glue(&PiecewiseFunc::from_poly(&RealSet::interval(piece), ramp))?;
        }
        Ok(out)
    }
}

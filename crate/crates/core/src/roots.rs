//! Real-root isolation over exact rationals with Sturm sequences.
//!
//! Counting is exact: no floating point enters a certification path.
//! Multiplicities are collapsed through the square-free part, since callers
//! only need root locations.

use thiserror::Error;

use crate::poly::{sign, Poly};
use crate::realset::Interval;
use crate::scalar::{simplest_between, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
}

/// The Sturm chain `p, p', -rem(p, p'), ...` of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence<T> {
    chain: Vec<Poly<T>>,
}

impl<T: Scalar> SturmSequence<T> {
    pub fn new(p: &Poly<T>) -> Self {
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let prev = chain.last().unwrap();
            let rem = prev.div_rem(&next).1;
            chain.push(next);
            next = -&rem;
        }
        SturmSequence { chain }
    }

    pub fn chain(&self) -> &[Poly<T>] {
        &self.chain
    }

    pub fn variations_at(&self, x: &T) -> usize {
        variations(self.chain.iter().map(|p| sign(&p.eval(x))))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        variations(self.chain.iter().map(Poly::sign_at_neg_inf))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        variations(self.chain.iter().map(Poly::sign_at_pos_inf))
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count_in(&self, a: &T, b: &T) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    /// Number of distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// A closed interval holding exactly one root of a square-free polynomial.
/// Either `lo == hi` is the root, or the polynomial is nonzero with opposite
/// signs at both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBracket<T> {
    poly: Poly<T>,
    lo: T,
    hi: T,
}

impl<T: Scalar> RootBracket<T> {
    pub fn poly(&self) -> &Poly<T> {
        &self.poly
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> T {
        T::midpoint(&self.lo, &self.hi)
    }

    /// One bisection step.
    pub fn bisect(&self) -> Self {
        if self.is_exact() {
            return self.clone();
        }
        let m = self.midpoint();
        let at_mid = sign(&self.poly.eval(&m));
        let (lo, hi) = if at_mid == 0 {
            (m.clone(), m)
        } else if at_mid != sign(&self.poly.eval(&self.lo)) {
            (self.lo.clone(), m)
        } else {
            (m, self.hi.clone())
        };
        RootBracket {
            poly: self.poly.clone(),
            lo,
            hi,
        }
    }

    /// Bisects until the width is at most `eps`.
    pub fn refine(&self, eps: &T) -> Result<Self, RootError> {
        self.refine_counted(eps).map(|(b, _)| b)
    }

    /// Like [`refine`](Self::refine), also returning the number of bisections.
    pub fn refine_counted(&self, eps: &T) -> Result<(Self, usize), RootError> {
        if !eps.is_positive() {
            return Err(RootError::NonPositiveTolerance);
        }
        let mut bracket = self.clone();
        let mut steps = 0;
        while bracket.width() > *eps {
            bracket = bracket.bisect();
            steps += 1;
        }
        Ok((bracket, steps))
    }

    /// The root itself when it is rational.
    ///
    /// A rational root `a/b` of an integral polynomial has `b` dividing the
    /// leading coefficient `c`. Once the bracket is narrower than `1/c^2` it
    /// holds no other rational with denominator at most `c`, so the simplest
    /// rational inside is the only candidate.
    pub fn exact_root(&self) -> Option<T> {
        if self.is_exact() {
            return Some(self.lo.clone());
        }
        let denominators = self
            .poly
            .coeffs()
            .iter()
            .fold(T::one(), |acc, c| acc.lcm_int(&c.denom_scalar()));
        let lead = (self.poly.leading() * denominators).abs();
        let eps = T::one() / (T::two() * lead.clone() * lead);
        let narrow = self.refine(&eps).expect("positive tolerance");
        if narrow.is_exact() {
            return Some(narrow.lo);
        }
        let candidate = simplest_between(&narrow.lo, &narrow.hi);
        self.poly.eval(&candidate).is_zero().then_some(candidate)
    }

    /// Shrinks this bracket until it no longer contains `x` (which must not
    /// be its root).
    pub fn exclude(&self, x: &T) -> Self {
        let mut bracket = self.clone();
        while bracket.lo <= *x && *x <= bracket.hi && !bracket.is_exact() {
            bracket = bracket.bisect();
        }
        bracket
    }
}

/// A bound `R` with every real root of `p` inside `(-R, R)`, from the
/// Fujiwara bound rounded up to a power of two.
pub fn root_bound<T: Scalar>(p: &Poly<T>) -> T {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return T::one();
    }
    let lead = p.leading().abs();
    let ratios: Vec<T> = (1..=n)
        .map(|i| {
            let c = p.coeff(n - i).abs() / lead.clone();
            if i == n {
                c / T::two()
            } else {
                c
            }
        })
        .collect();
    let mut base = T::one();
    loop {
        let mut power = T::one();
        let fits = ratios.iter().all(|r| {
            power = power.clone() * base.clone();
            *r <= power
        });
        if fits {
            return T::two() * base + T::one();
        }
        base = base * T::two();
    }
}

/// Isolates every distinct real root of `p` lying in `within`, in increasing
/// order.
pub fn isolate_roots<T: Scalar>(p: &Poly<T>, within: &Interval<T>) -> Result<Vec<RootBracket<T>>, RootError> {
    let q = p.squarefree_part().ok_or(RootError::ZeroPolynomial)?;
    if q.is_constant() {
        return Ok(Vec::new());
    }
    let bound = root_bound(&q);
    let lo = match within.lo().value() {
        Some(a) if *a > -bound.clone() => a.clone(),
        _ => -bound.clone(),
    };
    let hi = match within.hi().value() {
        Some(b) if *b < bound => b.clone(),
        _ => bound,
    };
    if lo > hi {
        return Ok(Vec::new());
    }
    let sturm = SturmSequence::new(&q);
    let mut found = Vec::new();
    if q.eval(&lo).is_zero() {
        found.push(RootBracket {
            poly: q.clone(),
            lo: lo.clone(),
            hi: lo.clone(),
        });
    }
    let (vlo, vhi) = (sturm.variations_at(&lo), sturm.variations_at(&hi));
    isolate_in(&q, &sturm, lo, hi, vlo, vhi, &mut found);
    found.retain(|b| !b.is_exact() || within.contains(&b.lo));
    Ok(found)
}

fn isolate_in<T: Scalar>(
    q: &Poly<T>,
    sturm: &SturmSequence<T>,
    a: T,
    b: T,
    va: usize,
    vb: usize,
    out: &mut Vec<RootBracket<T>>,
) {
    let count = va - vb;
    if count == 0 {
        return;
    }
    if count == 1 && !q.eval(&a).is_zero() {
        let (lo, hi) = if q.eval(&b).is_zero() { (b.clone(), b) } else { (a, b) };
        out.push(RootBracket { poly: q.clone(), lo, hi });
        return;
    }
    let m = T::midpoint(&a, &b);
    let vm = sturm.variations_at(&m);
    isolate_in(q, sturm, a, m.clone(), va, vm, out);
    isolate_in(q, sturm, m, b, vm, vb, out);
}

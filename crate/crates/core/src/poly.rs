//! Dense univariate polynomials over an exact scalar field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::parse::{Cursor, ParseError};
use crate::scalar::Scalar;

const MAX_EXPONENT: usize = 64;

/// Coefficients lowest degree first; never has a trailing zero, so the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `intercept + slope * x`.
    pub fn linear(intercept: T, slope: T) -> Self {
        Self::new(vec![intercept, slope])
    }

    /// The affine polynomial through `(x0, y0)` and `(x1, y1)`, `x0 != x1`.
    pub fn through(x0: &T, y0: &T, x1: &T, y1: &T) -> Self {
        let slope = (y1.clone() - y0.clone()) / (x1.clone() - x0.clone());
        Self::linear(y0.clone() - slope.clone() * x0.clone(), slope)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_affine(&self) -> bool {
        self.coeffs.len() <= 2
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("degree fits the scalar"))
                .collect(),
        )
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        Self::new(self.coeffs.iter().map(|c| c.clone() / lead.clone()).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let factor = rem[k + dd].clone() / lead.clone();
            if !factor.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - factor.clone() * d.clone();
                }
            }
            quot[k] = factor;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `self / gcd(self, self')`: the same real roots, all simple.
    pub fn squarefree_part(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let g = self.gcd(&self.derivative());
        Some(self.div_rem(&g).0)
    }

    /// Sign of `self` as `x -> +inf`.
    pub fn sign_at_pos_inf(&self) -> i32 {
        sign(&self.leading())
    }

    /// Sign of `self` as `x -> -inf`.
    pub fn sign_at_neg_inf(&self) -> i32 {
        match self.degree() {
            None => 0,
            Some(d) if d % 2 == 0 => sign(&self.leading()),
            Some(_) => -sign(&self.leading()),
        }
    }

    /// Enclosure of the values on `[lo, hi]` by interval Horner evaluation.
    pub fn range_enclosure(&self, lo: &T, hi: &T) -> (T, T) {
        let mut acc = (T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            let products = [
                acc.0.clone() * lo.clone(),
                acc.0.clone() * hi.clone(),
                acc.1.clone() * lo.clone(),
                acc.1.clone() * hi.clone(),
            ];
            let min = products.iter().min().unwrap().clone();
            let max = products.iter().max().unwrap().clone();
            acc = (min + c.clone(), max + c.clone());
        }
        acc
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cursor = Cursor::new(text);
        let p = parse_expr(&mut cursor)?;
        cursor.finish()?;
        Ok(p)
    }

    pub(crate) fn parse_from(cursor: &mut Cursor<'_>) -> Result<Self, ParseError> {
        parse_expr(cursor)
    }
}

pub(crate) fn sign<T: Scalar>(x: &T) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: Self) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let var = match power {
                0 => String::new(),
                1 => "x".to_string(),
                k => format!("x^{k}"),
            };
            if power == 0 {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{magnitude}*{var}")?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Serialize for Poly<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn parse_expr<T: Scalar>(cursor: &mut Cursor<'_>) -> Result<Poly<T>, ParseError> {
    let mut acc = if cursor.eat('-') {
        -&parse_term(cursor)?
    } else {
        cursor.eat('+');
        parse_term(cursor)?
    };
    loop {
        if cursor.eat('+') {
            acc = &acc + &parse_term(cursor)?;
        } else if cursor.eat('-') {
            acc = &acc - &parse_term(cursor)?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term<T: Scalar>(cursor: &mut Cursor<'_>) -> Result<Poly<T>, ParseError> {
    let mut acc = parse_power(cursor)?;
    loop {
        match cursor.peek() {
            Some('*') => {
                cursor.bump();
                acc = &acc * &parse_power(cursor)?;
            }
            Some('/') => {
                cursor.bump();
                let at = cursor.position();
                let divisor = parse_power(cursor)?;
                if !divisor.is_constant() {
                    return Err(cursor.error_at("can only divide by a constant", at));
                }
                if divisor.is_zero() {
                    return Err(cursor.error_at("division by zero", at));
                }
                acc = acc.scale(&(T::one() / divisor.leading()));
            }
            Some('x' | '(') => acc = &acc * &parse_power(cursor)?,
            _ => return Ok(acc),
        }
    }
}

fn parse_power<T: Scalar>(cursor: &mut Cursor<'_>) -> Result<Poly<T>, ParseError> {
    let base = parse_atom(cursor)?;
    if !cursor.eat('^') {
        return Ok(base);
    }
    cursor.skip_ws();
    let at = cursor.position();
    let digits: String = cursor.rest().chars().take_while(char::is_ascii_digit).collect();
    if digits.is_empty() {
        return Err(cursor.error("expected a non-negative integer exponent"));
    }
    let exponent: usize = digits
        .parse()
        .ok()
        .filter(|&e| e <= MAX_EXPONENT)
        .ok_or_else(|| cursor.error_at(format!("exponent above {MAX_EXPONENT}"), at))?;
    for _ in 0..digits.len() {
        cursor.bump();
    }
    Ok((0..exponent).fold(Poly::one(), |acc, _| &acc * &base))
}

fn parse_atom<T: Scalar>(cursor: &mut Cursor<'_>) -> Result<Poly<T>, ParseError> {
    match cursor.peek() {
        Some('x') => {
            cursor.bump();
            Ok(Poly::x())
        }
        Some('(') => {
            cursor.bump();
            let inner = parse_expr(cursor)?;
            cursor.expect(')')?;
            Ok(inner)
        }
        Some('-') => {
            cursor.bump();
            Ok(-&parse_atom(cursor)?)
        }
        Some(c) if c.is_ascii_digit() || c == '.' => Ok(Poly::constant(cursor.unsigned_number()?)),
        Some(c) => Err(cursor.error(format!("unexpected '{c}' in polynomial"))),
        None => Err(cursor.error("expected a polynomial term, found end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn p(text: &str) -> Poly<Q> {
        Poly::parse(text).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("x^2 - x").eval(&q(1, 2)), q(-1, 4));
        assert_eq!(p("x^2").compose(&p("x + 1")), p("x^2 + 2*x + 1"));
        assert_eq!(p("3*x^3").derivative(), p("9*x^2"));
        assert_eq!(&p("x") + &p("1 - x"), Poly::one());
        assert_eq!(p("x + x"), p("2x"));
        assert_eq!(Poly::<Q>::zero().degree(), None);
        assert_eq!(p("0*x^3 + 2").degree(), Some(0));
    }

    #[test]
    fn division_and_gcd() {
        let (quot, rem) = p("x^3 - 1").div_rem(&p("x - 1"));
        assert_eq!(quot, p("x^2 + x + 1"));
        assert!(rem.is_zero());
        assert_eq!(p("(x-1)^2*(x+2)").gcd(&p("(x-1)*(x-3)")), p("x - 1"));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(p("(x-1)^2").squarefree_part().unwrap().monic(), p("x - 1"));
        assert_eq!(p("x^2 - 2").squarefree_part().unwrap().monic(), p("x^2 - 2"));
        // x^3 - x^2 = x^2 (x - 1); gcd with 3x^2 - 2x is x
        assert_eq!(p("x^3 - x^2").squarefree_part().unwrap().monic(), p("x^2 - x"));
        assert!(Poly::<Q>::zero().squarefree_part().is_none());
    }

    #[test]
    fn grammar_round_trip() {
        for text in ["3/2*x^2 - x + 1/3", "-x^3 + 7", "x", "0", "-5/2"] {
            assert_eq!(p(text).to_string(), text);
        }
        assert_eq!(p("1.5x"), p("3/2*x"));
        assert_eq!(p("(x+1)/2"), p("1/2*x + 1/2"));
    }

    #[test]
    fn grammar_errors() {
        assert_eq!(Poly::<Q>::parse("x/x").unwrap_err().position, 2);
        assert!(Poly::<Q>::parse("x^").is_err());
        assert!(Poly::<Q>::parse("x +").is_err());
        assert!(Poly::<Q>::parse("y").is_err());
        assert!(Poly::<Q>::parse("1/0").is_err());
    }

    #[test]
    fn enclosure_contains_values() {
        let poly = p("x^3 - 2*x + 1");
        let (lo, hi) = poly.range_enclosure(&q(-1, 1), &q(2, 1));
        for k in -10..=20 {
            let v = poly.eval(&q(k, 10));
            assert!(lo <= v && v <= hi);
        }
    }
}

//! Sparse multivariate polynomials over ℤ and ℚ, evaluated exactly.

use crate::error::{Error, Result};
use crate::jsonutil;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A monomial exponent vector paired with its coefficient.
pub type Term<C> = (Vec<u32>, C);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<C> {
    pub arity: usize,
    pub terms: Vec<Term<C>>,
}

/// Terms serialize as `[[exponents], coefficient]` pairs.
#[derive(Serialize, Deserialize)]
struct PolyRepr {
    arity: usize,
    terms: Vec<(Vec<u32>, jsonutil::IntRepr)>,
}

impl Serialize for Polynomial<BigInt> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), jsonutil::IntRepr::from_bigint(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial<BigInt> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|(e, c)| Ok((e, c.to_bigint().map_err(serde::de::Error::custom)?)))
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Ok(Polynomial::new(repr.arity, terms))
    }
}

impl Serialize for Polynomial<BigRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), jsonutil::IntRepr::from_ratio(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial<BigRational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|(e, c)| Ok((e, c.to_ratio().map_err(serde::de::Error::custom)?)))
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Ok(Polynomial::new(repr.arity, terms))
    }
}

impl<C> Polynomial<C>
where
    C: Clone + Zero + PartialEq + for<'a> std::ops::AddAssign<&'a C>,
    for<'a> &'a C: std::ops::Mul<&'a C, Output = C>,
{
    pub fn new(arity: usize, terms: Vec<Term<C>>) -> Self {
        Polynomial { arity, terms }.normalized()
    }

    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: vec![] }
    }

    pub fn constant(arity: usize, c: C) -> Self {
        Polynomial::new(arity, vec![(vec![0; arity], c)])
    }

    /// The monomial x_i.
    pub fn var(arity: usize, i: usize, one: C) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Polynomial::new(arity, vec![(e, one)])
    }

    fn normalized(self) -> Self {
        let mut map: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (mut e, c) in self.terms {
            e.resize(self.arity, 0);
            match map.get_mut(&e) {
                Some(acc) => *acc += &c,
                None => {
                    map.insert(e, c);
                }
            }
        }
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { arity: self.arity, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> C {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::zero)
    }

    pub fn eval_with<X>(&self, xs: &[X], lift: impl Fn(&C) -> X) -> Result<X>
    where
        X: Clone + Zero + for<'a> std::ops::AddAssign<&'a X>,
        for<'a> &'a X: std::ops::Mul<&'a X, Output = X>,
    {
        if xs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: xs.len(),
            });
        }
        let mut acc = X::zero();
        for (e, c) in &self.terms {
            let mut t = lift(c);
            for (x, &k) in xs.iter().zip(e) {
                for _ in 0..k {
                    t = &t * x;
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.clone());
        Polynomial { arity: self.arity, terms }.normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                terms.push((e, ca * cb));
            }
        }
        Polynomial { arity: self.arity, terms }.normalized()
    }

    pub fn scale(&self, c: &C) -> Self {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), c * x))
                .collect(),
        }
        .normalized()
    }

    pub fn pow(&self, k: u32, one: C) -> Self {
        let mut acc = Polynomial::constant(self.arity, one);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute x_i ← x_i + shift_i.
    pub fn shift_args(&self, shift: &[C], one: C) -> Self {
        assert_eq!(shift.len(), self.arity);
        let mut acc = Polynomial::zero(self.arity);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(self.arity, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let lin = Polynomial::new(
                    self.arity,
                    vec![
                        ({
                            let mut ev = vec![0; self.arity];
                            ev[i] = 1;
                            ev
                        }, one.clone()),
                        (vec![0; self.arity], shift[i].clone()),
                    ],
                );
                term = term.mul(&lin.pow(k, one.clone()));
            }
            acc = acc.add(&term);
        }
        acc
    }
}

pub type IntPoly = Polynomial<BigInt>;
pub type RatPoly = Polynomial<BigRational>;

impl IntPoly {
    pub fn from_terms(arity: usize, terms: &[(&[u32], i64)]) -> Self {
        Polynomial::new(
            arity,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigInt::from(*c)))
                .collect(),
        )
    }

    pub fn eval(&self, xs: &[BigInt]) -> Result<BigInt> {
        self.eval_with(xs, |c| c.clone())
    }

    /// Overflow-checked machine-integer evaluation, used on hot grid loops.
    pub fn eval_i64(&self, xs: &[i64]) -> Option<i64> {
        if xs.len() != self.arity {
            return None;
        }
        let mut acc: i64 = 0;
        for (e, c) in &self.terms {
            let mut t = c.to_i64()?;
            for (&x, &k) in xs.iter().zip(e) {
                for _ in 0..k {
                    t = t.checked_mul(x)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    /// Substitute the single variable: p(c − t) as a polynomial in t.
    /// Only for arity-1 polynomials.
    pub fn compose_c_minus_t(&self, c: &BigInt) -> IntPoly {
        assert_eq!(self.arity, 1);
        let lin = IntPoly::new(
            1,
            vec![(vec![1], BigInt::from(-1)), (vec![0], c.clone())],
        );
        let mut acc = IntPoly::zero(1);
        for (e, coef) in &self.terms {
            let t = lin.pow(e[0], BigInt::from(1)).scale(coef);
            acc = acc.add(&t);
        }
        acc
    }

    /// Coefficients by ascending degree (arity-1 polynomials).
    pub fn coeffs_univariate(&self) -> Vec<BigInt> {
        assert_eq!(self.arity, 1);
        let deg = self.degree() as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        out
    }

    pub fn to_rational(&self) -> RatPoly {
        Polynomial::new(
            self.arity,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        )
    }

    /// Sum of |coefficients| of non-constant terms.
    pub fn nonconstant_coef_l1(&self) -> BigInt {
        self.terms
            .iter()
            .filter(|(e, _)| e.iter().any(|&x| x > 0))
            .map(|(_, c)| c.abs())
            .sum()
    }

    /// Every monomial touches at most one variable.
    pub fn is_diagonal(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, _)| e.iter().filter(|&&x| x > 0).count() <= 1)
    }

    /// Split a diagonal polynomial into per-variable univariate parts plus the
    /// constant. Returns `None` when not diagonal.
    pub fn diagonal_split(&self) -> Option<(Vec<IntPoly>, BigInt)> {
        if !self.is_diagonal() {
            return None;
        }
        let mut parts = vec![IntPoly::zero(1); self.arity];
        let mut constant = BigInt::zero();
        for (e, c) in &self.terms {
            match e.iter().position(|&x| x > 0) {
                None => constant += c,
                Some(i) => {
                    parts[i] = parts[i].add(&IntPoly::new(1, vec![(vec![e[i]], c.clone())]));
                }
            }
        }
        Some((parts, constant))
    }
}

impl RatPoly {
    pub fn eval_rat(&self, xs: &[BigRational]) -> Result<BigRational> {
        self.eval_with(xs, |c| c.clone())
    }

    pub fn eval_at_ints(&self, xs: &[BigInt]) -> Result<BigRational> {
        let xs: Vec<BigRational> = xs
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        self.eval_rat(&xs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_exact_bigint() {
        // t^4 at t = 10^6 exceeds i64; BigInt path must be exact.
        let p = IntPoly::from_terms(1, &[(&[4], 1)]);
        let big = BigInt::from(1_000_000i64);
        let v = p.eval(&[big.clone()]).unwrap();
        assert_eq!(v, (&big * &big) * (&big * &big));
        assert_eq!(p.eval_i64(&[1_000_000]), None);
        assert_eq!(p.eval_i64(&[10]), Some(10_000));
    }

    #[test]
    fn shift_args_binomial() {
        // (t + 3)^2 = t^2 + 6t + 9.
        let p = IntPoly::from_terms(1, &[(&[2], 1)]);
        let q = p.shift_args(&[BigInt::from(3)], BigInt::from(1));
        assert_eq!(q, IntPoly::from_terms(1, &[(&[2], 1), (&[1], 6), (&[0], 9)]));
    }

    #[test]
    fn compose_reflection() {
        // p(t) = t^2 gives p(c - t) = t^2 - 2ct + c^2.
        let p = IntPoly::from_terms(1, &[(&[2], 1)]);
        let q = p.compose_c_minus_t(&BigInt::from(5));
        assert_eq!(
            q,
            IntPoly::from_terms(1, &[(&[2], 1), (&[1], -10), (&[0], 25)])
        );
    }

    #[test]
    fn diagonal_split_works() {
        let p = IntPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], 7)]);
        let (parts, c) = p.diagonal_split().unwrap();
        assert_eq!(c, BigInt::from(7));
        assert_eq!(parts[0], IntPoly::from_terms(1, &[(&[2], 1)]));
        let cross = IntPoly::from_terms(2, &[(&[1, 1], 1)]);
        assert!(cross.diagonal_split().is_none());
    }
}

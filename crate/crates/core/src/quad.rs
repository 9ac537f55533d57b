//! Exact arithmetic in the quadratic extension ℚ(√n): values p + q√n with
//! rational p, q. Floors are computed by refining rational brackets of √n
//! until the integer part is determined; integrality is decided symbolically
//! first (perfect-square radicands normalize away, so q ≠ 0 forces an
//! irrational value and the refinement terminates).

use crate::error::{Error, Result};
use crate::jsonutil;
use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

const REFINE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadVal {
    #[serde(with = "jsonutil::ratio")]
    pub p: BigRational,
    #[serde(with = "jsonutil::ratio")]
    pub q: BigRational,
    /// Radicand; 0 whenever the value is rational.
    #[serde(with = "jsonutil::bigint")]
    pub n: BigInt,
}

fn rat(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

impl QuadVal {
    pub fn new(p: BigRational, q: BigRational, n: BigInt) -> Self {
        QuadVal { p, q, n }.normalized()
    }

    pub fn rational(p: BigRational) -> Self {
        QuadVal {
            p,
            q: BigRational::zero(),
            n: BigInt::zero(),
        }
    }

    pub fn integer(v: i64) -> Self {
        QuadVal::rational(rat(v))
    }

    /// √n itself.
    pub fn sqrt_of(n: BigInt) -> Self {
        QuadVal::new(BigRational::zero(), BigRational::one(), n)
    }

    fn normalized(mut self) -> Self {
        if self.n.is_negative() {
            panic!("negative radicand");
        }
        if self.q.is_zero() {
            self.n = BigInt::zero();
            return self;
        }
        let root = self.n.sqrt();
        if &root * &root == self.n {
            // Perfect square: fold into the rational part.
            self.p += &self.q * BigRational::from_integer(root);
            self.q = BigRational::zero();
            self.n = BigInt::zero();
        }
        self
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.p.is_integer()
    }

    fn same_field(&self, other: &QuadVal) -> bool {
        self.q.is_zero() || other.q.is_zero() || self.n == other.n
    }

    fn field_radicand(&self, other: &QuadVal) -> BigInt {
        if self.q.is_zero() {
            other.n.clone()
        } else {
            self.n.clone()
        }
    }

    pub fn add(&self, other: &QuadVal) -> QuadVal {
        assert!(self.same_field(other), "mixed radicands");
        QuadVal::new(
            &self.p + &other.p,
            &self.q + &other.q,
            self.field_radicand(other),
        )
    }

    pub fn neg(&self) -> QuadVal {
        QuadVal {
            p: -&self.p,
            q: -&self.q,
            n: self.n.clone(),
        }
    }

    pub fn sub(&self, other: &QuadVal) -> QuadVal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QuadVal) -> QuadVal {
        assert!(self.same_field(other), "mixed radicands");
        let n = self.field_radicand(other);
        let nr = BigRational::from_integer(n.clone());
        QuadVal::new(
            &self.p * &other.p + &nr * &self.q * &other.q,
            &self.p * &other.q + &self.q * &other.p,
            n,
        )
    }

    pub fn is_zero_val(&self) -> bool {
        // After normalization q ≠ 0 implies irrational, hence nonzero.
        self.q.is_zero() && self.p.is_zero()
    }

    /// Exact multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<QuadVal> {
        if self.is_zero_val() {
            return None;
        }
        if self.q.is_zero() {
            return Some(QuadVal::rational(self.p.recip()));
        }
        // 1 / (p + q√n) = (p − q√n) / (p² − q²n)
        let nr = BigRational::from_integer(self.n.clone());
        let denom = &self.p * &self.p - &self.q * &self.q * &nr;
        // q ≠ 0 and irrational √n make the denominator nonzero.
        Some(QuadVal::new(
            &self.p / &denom,
            -(&self.q / &denom),
            self.n.clone(),
        ))
    }

    pub fn div(&self, other: &QuadVal) -> Option<QuadVal> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Exact sign via case analysis and squaring; no refinement needed.
    pub fn sign(&self) -> Ordering {
        if self.q.is_zero() {
            return self.p.cmp(&BigRational::zero());
        }
        let zero = BigRational::zero();
        let nr = BigRational::from_integer(self.n.clone());
        let q2n = &self.q * &self.q * &nr;
        let p2 = &self.p * &self.p;
        if self.q > zero {
            if self.p >= zero {
                Ordering::Greater
            } else {
                // p < 0 < q√n: sign of q²n − p².
                q2n.cmp(&p2)
            }
        } else {
            // q < 0.
            if self.p <= zero {
                Ordering::Less
            } else {
                p2.cmp(&q2n)
            }
        }
    }

    pub fn cmp_val(&self, other: &QuadVal) -> Ordering {
        self.sub(other).sign()
    }

    /// ⌊p + q√n⌋, exact. Rational values floor directly; irrational values are
    /// bracketed by refining √n until both ends share an integer part.
    pub fn floor(&self) -> Result<BigInt> {
        if self.q.is_zero() {
            return Ok(self.p.floor().to_integer());
        }
        // Bracket √n between consecutive rationals, starting at ⌊√n⌋.
        let root = self.n.sqrt();
        let mut lo = BigRational::from_integer(root.clone());
        let mut hi = BigRational::from_integer(root + 1);
        let nr = BigRational::from_integer(self.n.clone());
        for _ in 0..REFINE_CAP {
            let (vlo, vhi) = if self.q.is_positive() {
                (&self.p + &self.q * &lo, &self.p + &self.q * &hi)
            } else {
                (&self.p + &self.q * &hi, &self.p + &self.q * &lo)
            };
            let flo = vlo.floor().to_integer();
            let fhi = vhi.floor().to_integer();
            if flo == fhi {
                return Ok(flo);
            }
            let mid = (&lo + &hi) / rat(2);
            if &mid * &mid <= nr {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::PrecisionCap(self.to_string()))
    }

    pub fn ceil(&self) -> Result<BigInt> {
        Ok(-self.neg().floor()?)
    }
}

impl fmt::Display for QuadVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn rational_floor() {
        assert_eq!(QuadVal::rational(r(7, 2)).floor().unwrap(), BigInt::from(3));
        assert_eq!(
            QuadVal::rational(r(-7, 2)).floor().unwrap(),
            BigInt::from(-4)
        );
        assert_eq!(QuadVal::integer(5).floor().unwrap(), BigInt::from(5));
    }

    #[test]
    fn surd_floor() {
        // √2 ≈ 1.414
        let s2 = QuadVal::sqrt_of(BigInt::from(2));
        assert_eq!(s2.floor().unwrap(), BigInt::from(1));
        assert_eq!(s2.ceil().unwrap(), BigInt::from(2));
        // 3 − 2√2 ≈ 0.172
        let v = QuadVal::new(r(3, 1), r(-2, 1), BigInt::from(2));
        assert_eq!(v.floor().unwrap(), BigInt::zero());
        assert_eq!(v.neg().floor().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn perfect_square_normalizes() {
        // 1 + 2√25 = 11, exactly an integer.
        let v = QuadVal::new(r(1, 1), r(2, 1), BigInt::from(25));
        assert!(v.is_integer());
        assert_eq!(v.floor().unwrap(), BigInt::from(11));
    }

    #[test]
    fn near_integer_floor() {
        // (√2)² = 2 via mul, exactly.
        let s2 = QuadVal::sqrt_of(BigInt::from(2));
        let two = s2.mul(&s2);
        assert!(two.is_integer());
        assert_eq!(two.floor().unwrap(), BigInt::from(2));
        // 99/70 is a convergent of √2; 99/70 − √2 ≈ 7e-5 > 0.
        let v = QuadVal::new(r(99, 70), r(-1, 1), BigInt::from(2));
        assert_eq!(v.sign(), Ordering::Greater);
        assert_eq!(v.floor().unwrap(), BigInt::zero());
    }

    #[test]
    fn division_exact() {
        // (1 + √2) / (1 + √2) = 1
        let v = QuadVal::new(r(1, 1), r(1, 1), BigInt::from(2));
        let one = v.div(&v).unwrap();
        assert!(one.is_integer());
        assert_eq!(one.p, r(1, 1));
    }

    #[test]
    fn sign_cases() {
        let v = QuadVal::new(r(-1, 1), r(1, 1), BigInt::from(2)); // √2 − 1 > 0
        assert_eq!(v.sign(), Ordering::Greater);
        let w = QuadVal::new(r(-2, 1), r(1, 1), BigInt::from(2)); // √2 − 2 < 0
        assert_eq!(w.sign(), Ordering::Less);
        let z = QuadVal::integer(0);
        assert_eq!(z.sign(), Ordering::Equal);
    }
}

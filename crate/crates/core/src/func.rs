//! Integer-valued functions on ℤᵏ with exact evaluation: integer polynomials,
//! floors/ceilings of rational and quadratic-surd expressions, finite tables,
//! and rule-backed lazily extended tables with synchronized memoization.

use crate::error::{Error, Result};
use crate::group::SublatticeSpec;
use crate::jsonutil;
use crate::poly::{IntPoly, RatPoly};
use crate::quad::QuadVal;
use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FloorMode {
    Floor,
    /// The composition ⌊f⌋ + ⌈f − ⌊f⌋⌉, which equals ⌈f⌉.
    Ceil,
}

impl FloorMode {
    fn apply(&self, v: &QuadVal) -> Result<BigInt> {
        match self {
            FloorMode::Floor => v.floor(),
            FloorMode::Ceil => v.ceil(),
        }
    }
}

/// Floor/ceiling of an exactly represented real expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurdFloorFn {
    pub arity: usize,
    /// Radicand of the ambient quadratic field; 0 for purely rational data.
    #[serde(with = "jsonutil::bigint")]
    pub radicand: BigInt,
    pub kind: SurdKind,
    pub mode: FloorMode,
    /// Replacement values at poles of the rational part, keyed by input point.
    #[serde(default)]
    pub pole_values: Vec<PoleValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleValue {
    #[serde(with = "jsonutil::bigint_vec")]
    pub at: Vec<BigInt>,
    #[serde(with = "jsonutil::ratio")]
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurdKind {
    /// num(x)/den(x) evaluated at the integer input.
    Rational { num: RatPoly, den: RatPoly },
    /// Height of a clockwise-rotated graph along its fiber direction:
    /// α_t = (f(−t/√n) − (k/√n)·t) / √n for a rational function f = num/den.
    RotationHeight {
        num: RatPoly,
        den: RatPoly,
        #[serde(with = "jsonutil::bigint")]
        k: BigInt,
    },
}

fn horner_quad(p: &RatPoly, arg: &QuadVal) -> QuadVal {
    debug_assert_eq!(p.arity, 1);
    let coeffs = {
        let deg = p.degree() as usize;
        let mut out = vec![BigRational::zero(); deg + 1];
        for (e, c) in &p.terms {
            out[e[0] as usize] = c.clone();
        }
        out
    };
    let mut acc = QuadVal::rational(BigRational::zero());
    for c in coeffs.iter().rev() {
        acc = acc.mul(arg).add(&QuadVal::rational(c.clone()));
    }
    acc
}

impl SurdFloorFn {
    /// ⌈f⌉ or ⌊f⌋ of a rational function at integer arguments.
    pub fn rational_fn(
        num: RatPoly,
        den: RatPoly,
        mode: FloorMode,
        pole_values: Vec<PoleValue>,
    ) -> Self {
        SurdFloorFn {
            arity: num.arity,
            radicand: BigInt::zero(),
            kind: SurdKind::Rational { num, den },
            mode,
            pole_values,
        }
    }

    pub fn rotation_height(
        radicand: BigInt,
        num: RatPoly,
        den: RatPoly,
        k: BigInt,
        mode: FloorMode,
        pole_values: Vec<PoleValue>,
    ) -> Self {
        SurdFloorFn {
            arity: 1,
            radicand,
            kind: SurdKind::RotationHeight { num, den, k },
            mode,
            pole_values,
        }
    }

    fn pole_value_at(&self, xs: &[BigInt]) -> Result<BigRational> {
        self.pole_values
            .iter()
            .find(|pv| pv.at == xs)
            .map(|pv| pv.value.clone())
            .ok_or_else(|| {
                Error::MissingPoleValue(format!(
                    "({})",
                    xs.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ))
            })
    }

    /// The exact real value before flooring.
    pub fn value(&self, xs: &[BigInt]) -> Result<QuadVal> {
        if xs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: xs.len(),
            });
        }
        match &self.kind {
            SurdKind::Rational { num, den } => {
                let d = den.eval_at_ints(xs)?;
                let f = if d.is_zero() {
                    self.pole_value_at(xs)?
                } else {
                    num.eval_at_ints(xs)? / d
                };
                Ok(QuadVal::rational(f))
            }
            SurdKind::RotationHeight { num, den, k } => {
                let n = &self.radicand;
                let t = &xs[0];
                let nr = BigRational::from_integer(n.clone());
                // arg = −t/√n = (−t/n)·√n
                let arg = QuadVal::new(
                    BigRational::zero(),
                    BigRational::from_integer(-t) / nr.clone(),
                    n.clone(),
                );
                let dval = horner_quad(den, &arg);
                let fval = if dval.is_zero_val() {
                    QuadVal::rational(self.pole_value_at(xs)?)
                } else {
                    horner_quad(num, &arg)
                        .div(&dval)
                        .expect("nonzero denominator")
                };
                // (k/√n)·t = (k·t/n)·√n
                let slope = QuadVal::new(
                    BigRational::zero(),
                    BigRational::from_integer(k * t) / nr.clone(),
                    n.clone(),
                );
                // 1/√n = (1/n)·√n
                let inv_sqrt = QuadVal::new(
                    BigRational::zero(),
                    BigRational::from_integer(BigInt::one()) / nr,
                    n.clone(),
                );
                Ok(fval.sub(&slope).mul(&inv_sqrt))
            }
        }
    }

    pub fn eval(&self, xs: &[BigInt]) -> Result<BigInt> {
        self.mode.apply(&self.value(xs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableDefault {
    Value(#[serde(with = "jsonutil::bigint")] BigInt),
    Error,
}

/// Finite explicit map with a default policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableFn {
    pub arity: usize,
    pub entries: Vec<TableEntry>,
    pub default: TableDefault,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    #[serde(with = "jsonutil::bigint_vec")]
    pub at: Vec<BigInt>,
    #[serde(with = "jsonutil::bigint")]
    pub value: BigInt,
}

impl TableFn {
    pub fn eval(&self, xs: &[BigInt]) -> Result<BigInt> {
        if xs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: xs.len(),
            });
        }
        for e in &self.entries {
            if e.at == xs {
                return Ok(e.value.clone());
            }
        }
        match &self.default {
            TableDefault::Value(v) => Ok(v.clone()),
            TableDefault::Error => Err(Error::TableMiss(format!(
                "({})",
                xs.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ))),
        }
    }
}

/// Rule behind a lazily extended table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenRule {
    /// v(x) = −max u(B(−x, ‖x‖² + 1)).
    BallModeration { u: Box<IntFunction> },
    /// x ↦ base^|x|.
    PowAbs {
        #[serde(with = "jsonutil::bigint")]
        base: BigInt,
    },
    /// x ↦ the |x|-th odd prime (|x| ≥ 1).
    NthOddPrime,
    /// One coordinate of v′(x) = v(x) − c_x, the canonical representative
    /// shift landing v′ in the sublattice.
    SubgroupReduced {
        v: Box<VectorFunction>,
        sub: SublatticeSpec,
        component: usize,
    },
    /// x ↦ inner(x + shift).
    ArgShift {
        inner: Box<IntFunction>,
        #[serde(with = "jsonutil::bigint_vec")]
        shift: Vec<BigInt>,
    },
}

/// Rule-backed function with internally synchronized memoization; concurrent
/// evaluation is safe and clones share the cache.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratedFn {
    pub arity: usize,
    pub rule: GenRule,
    #[serde(skip, default)]
    cache: Arc<Mutex<BTreeMap<Vec<BigInt>, BigInt>>>,
}

impl PartialEq for GeneratedFn {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.rule == other.rule
    }
}

/// Integer points y with ‖y − center‖² < radius_sq.
pub fn ball_points(center: &[BigInt], radius_sq: &BigInt) -> Vec<Vec<BigInt>> {
    if radius_sq <= &BigInt::zero() {
        return vec![];
    }
    let r = (radius_sq - 1u8).sqrt();
    let mut pts: Vec<Vec<BigInt>> = vec![vec![]];
    for c in center {
        let mut next = Vec::new();
        let mut x = c - &r;
        let hi = c + &r;
        while x <= hi {
            for p in &pts {
                let mut p2 = p.clone();
                p2.push(x.clone());
                next.push(p2);
            }
            x += 1;
        }
        pts = next;
    }
    pts.retain(|p| {
        let d: BigInt = p
            .iter()
            .zip(center)
            .map(|(x, c)| {
                let d = x - c;
                &d * &d
            })
            .sum();
        &d < radius_sq
    });
    pts.sort();
    pts
}

fn nth_odd_prime(k: u64) -> BigInt {
    assert!(k >= 1);
    let mut count = 0u64;
    let mut n = 1u64;
    loop {
        n += 2;
        if (3..).take_while(|d| d * d <= n).step_by(2).all(|d| n % d != 0) {
            count += 1;
            if count == k {
                return BigInt::from(n);
            }
        }
    }
}

impl GeneratedFn {
    pub fn new(arity: usize, rule: GenRule) -> Self {
        GeneratedFn {
            arity,
            rule,
            cache: Arc::default(),
        }
    }

    fn compute(&self, xs: &[BigInt]) -> Result<BigInt> {
        match &self.rule {
            GenRule::BallModeration { u } => {
                let norm_sq: BigInt = xs.iter().map(|x| x * x).sum();
                let center: Vec<BigInt> = xs.iter().map(|x| -x).collect();
                let mut best: Option<BigInt> = None;
                for y in ball_points(&center, &(norm_sq + 1u8)) {
                    let v = u.eval(&y)?;
                    best = Some(match best {
                        None => v,
                        Some(b) => b.max(v),
                    });
                }
                Ok(-best.expect("ball is nonempty"))
            }
            GenRule::PowAbs { base } => {
                let e = xs[0].abs().to_u32().ok_or_else(|| {
                    Error::InvalidArgument(format!("exponent |{}| too large", xs[0]))
                })?;
                Ok(base.pow(e))
            }
            GenRule::NthOddPrime => {
                let k = xs[0].abs().to_u64().ok_or_else(|| {
                    Error::InvalidArgument(format!("index |{}| too large", xs[0]))
                })?;
                if k == 0 {
                    return Err(Error::InvalidArgument(
                        "odd-prime sequence starts at index 1".into(),
                    ));
                }
                Ok(nth_odd_prime(k))
            }
            GenRule::SubgroupReduced { v, sub, component } => {
                if sub.index().is_none() {
                    return Err(Error::InfiniteIndex);
                }
                let vals = v.eval(xs)?;
                let rep = sub.hnf().reduce(&vals);
                Ok(&vals[*component] - &rep[*component])
            }
            GenRule::ArgShift { inner, shift } => {
                let shifted: Vec<BigInt> = xs.iter().zip(shift).map(|(x, s)| x + s).collect();
                inner.eval(&shifted)
            }
        }
    }

    pub fn eval(&self, xs: &[BigInt]) -> Result<BigInt> {
        if xs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: xs.len(),
            });
        }
        if let Some(v) = self.cache.lock().unwrap().get(xs) {
            return Ok(v.clone());
        }
        let v = self.compute(xs)?;
        self.cache
            .lock()
            .unwrap()
            .insert(xs.to_vec(), v.clone());
        Ok(v)
    }
}

/// A computable function ℤᵏ → ℤ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntFunction {
    Poly(IntPoly),
    SurdFloor(SurdFloorFn),
    Table(TableFn),
    Generated(GeneratedFn),
}

impl IntFunction {
    pub fn poly(arity: usize, terms: &[(&[u32], i64)]) -> Self {
        IntFunction::Poly(IntPoly::from_terms(arity, terms))
    }

    pub fn constant(arity: usize, c: i64) -> Self {
        IntFunction::poly(arity, &[(&vec![0u32; arity][..], c)])
    }

    pub fn arity(&self) -> usize {
        match self {
            IntFunction::Poly(p) => p.arity,
            IntFunction::SurdFloor(s) => s.arity,
            IntFunction::Table(t) => t.arity,
            IntFunction::Generated(g) => g.arity,
        }
    }

    pub fn eval(&self, xs: &[BigInt]) -> Result<BigInt> {
        match self {
            IntFunction::Poly(p) => p.eval(xs),
            IntFunction::SurdFloor(s) => s.eval(xs),
            IntFunction::Table(t) => t.eval(xs),
            IntFunction::Generated(g) => g.eval(xs),
        }
    }

    pub fn eval_ints(&self, xs: &[i64]) -> Result<BigInt> {
        let xs: Vec<BigInt> = xs.iter().map(|&v| BigInt::from(v)).collect();
        self.eval(&xs)
    }

    /// Checked machine-integer fast path; `None` when unavailable or overflowing.
    pub fn eval_i64(&self, xs: &[i64]) -> Option<i64> {
        match self {
            IntFunction::Poly(p) => p.eval_i64(xs),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&IntPoly> {
        match self {
            IntFunction::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// x ↦ self(x + shift). Polynomials shift symbolically, everything else
    /// through a rule-backed wrapper.
    pub fn shift_args(&self, shift: &[BigInt]) -> Self {
        match self {
            IntFunction::Poly(p) => {
                IntFunction::Poly(p.shift_args(shift, BigInt::one()))
            }
            other => IntFunction::Generated(GeneratedFn::new(
                other.arity(),
                GenRule::ArgShift {
                    inner: Box::new(other.clone()),
                    shift: shift.to_vec(),
                },
            )),
        }
    }
}

/// A function ℤᵏ → ℤᵐ given componentwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFunction {
    pub components: Vec<IntFunction>,
}

impl VectorFunction {
    pub fn new(components: Vec<IntFunction>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument(
                "vector function needs at least one component".into(),
            ));
        }
        let a = components[0].arity();
        for c in &components {
            if c.arity() != a {
                return Err(Error::ArityMismatch {
                    expected: a,
                    got: c.arity(),
                });
            }
        }
        Ok(VectorFunction { components })
    }

    pub fn scalar(f: IntFunction) -> Self {
        VectorFunction { components: vec![f] }
    }

    pub fn arity(&self) -> usize {
        self.components[0].arity()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, xs: &[BigInt]) -> Result<Vec<BigInt>> {
        self.components.iter().map(|c| c.eval(xs)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn ceil_of_rational_fn() {
        // f(x) = 1/x with f(0) = -11; the floor+ceil combination is ceil.
        let num = RatPoly::constant(1, BigRational::one());
        let den = RatPoly::var(1, 0, BigRational::one());
        let f = SurdFloorFn::rational_fn(
            num,
            den,
            FloorMode::Ceil,
            vec![PoleValue {
                at: vec![big(0)],
                value: BigRational::from_integer(big(-11)),
            }],
        );
        assert_eq!(f.eval(&[big(2)]).unwrap(), big(1)); // ⌈1/2⌉
        assert_eq!(f.eval(&[big(-2)]).unwrap(), big(0)); // ⌈-1/2⌉
        assert_eq!(f.eval(&[big(0)]).unwrap(), big(-11));
        assert_eq!(f.eval(&[big(1)]).unwrap(), big(1));
    }

    #[test]
    fn missing_pole_is_an_error() {
        let num = RatPoly::constant(1, BigRational::one());
        let den = RatPoly::var(1, 0, BigRational::one());
        let f = SurdFloorFn::rational_fn(num, den, FloorMode::Floor, vec![]);
        assert!(matches!(
            f.eval(&[big(0)]),
            Err(Error::MissingPoleValue(_))
        ));
    }

    #[test]
    fn rotation_height_45_parabola() {
        // f(x) = x², 45°: α_t = (t²/2 + t/√2)/√2 = t²/(2√2) + t/2.
        let num = RatPoly::new(
            1,
            vec![(vec![2], BigRational::one())],
        );
        let den = RatPoly::constant(1, BigRational::one());
        let alpha = SurdFloorFn::rotation_height(
            big(2),
            num,
            den,
            big(-1),
            FloorMode::Floor,
            vec![],
        );
        // α_2 = 4/(2√2) + 1 = √2 + 1 ≈ 2.414 → floor 2.
        assert_eq!(alpha.eval(&[big(2)]).unwrap(), big(2));
        // α_1 = 1/(2√2) + 1/2 ≈ 0.854 → floor 0.
        assert_eq!(alpha.eval(&[big(1)]).unwrap(), big(0));
        // α_{-2} = √2 − 1 ≈ 0.414 → floor 0.
        assert_eq!(alpha.eval(&[big(-2)]).unwrap(), big(0));
    }

    #[test]
    fn table_defaults() {
        let t = TableFn {
            arity: 1,
            entries: vec![TableEntry {
                at: vec![big(3)],
                value: big(9),
            }],
            default: TableDefault::Error,
        };
        assert_eq!(t.eval(&[big(3)]).unwrap(), big(9));
        assert!(matches!(t.eval(&[big(4)]), Err(Error::TableMiss(_))));
    }

    #[test]
    fn pow_abs_and_primes() {
        let p = GeneratedFn::new(1, GenRule::PowAbs { base: big(3) });
        assert_eq!(p.eval(&[big(-4)]).unwrap(), big(81));
        assert_eq!(p.eval(&[big(0)]).unwrap(), big(1));
        let q = GeneratedFn::new(1, GenRule::NthOddPrime);
        assert_eq!(q.eval(&[big(1)]).unwrap(), big(3));
        assert_eq!(q.eval(&[big(4)]).unwrap(), big(11));
        assert_eq!(q.eval(&[big(-2)]).unwrap(), big(5));
    }

    #[test]
    fn ball_points_line() {
        // B(−3, 10) on ℤ: (y+3)² < 10 ⇔ y ∈ [−6, 0].
        let pts = ball_points(&[big(-3)], &big(10));
        assert_eq!(pts.len(), 7);
        assert_eq!(pts[0], vec![big(-6)]);
        assert_eq!(pts[6], vec![big(0)]);
    }

    #[test]
    fn subgroup_reduced_values() {
        // v(t) = t reduced into 3ℤ: v'(0)=0, v'(1)=0, v'(2)=0, v'(4)=3.
        let v = VectorFunction::scalar(IntFunction::poly(1, &[(&[1], 1)]));
        let sub = SublatticeSpec::scaled(1, 3).unwrap();
        let f = GeneratedFn::new(
            1,
            GenRule::SubgroupReduced {
                v: Box::new(v),
                sub,
                component: 0,
            },
        );
        assert_eq!(f.eval(&[big(0)]).unwrap(), big(0));
        assert_eq!(f.eval(&[big(1)]).unwrap(), big(0));
        assert_eq!(f.eval(&[big(2)]).unwrap(), big(0));
        assert_eq!(f.eval(&[big(4)]).unwrap(), big(3));
    }

    #[test]
    fn shift_args_polynomial() {
        let f = IntFunction::poly(1, &[(&[2], 1)]);
        let g = f.shift_args(&[big(1)]);
        assert_eq!(g.eval(&[big(2)]).unwrap(), big(9));
    }
}

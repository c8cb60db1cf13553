//! The field Q(t) with a canonical representative for every element.
//!
//! A value is stored as `num / den` with
//! - `gcd(num, den) = 1` in Q[t],
//! - the coefficients of `num` and `den` jointly coprime,
//! - `lead(den) > 0`.
//!
//! Equal field elements therefore compare equal structurally.

use super::poly::IntPoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: IntPoly,
    den: IntPoly,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun { num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: IntPoly::one(), den: IntPoly::one() }
    }

    pub fn from_int(k: impl Into<BigInt>) -> Self {
        RatFun::from_poly(IntPoly::constant(k))
    }

    pub fn from_ratio(q: &BigRational) -> Self {
        RatFun::normalize_content(IntPoly::constant(q.numer().clone()), IntPoly::constant(q.denom().clone()))
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFun { num: p, den: IntPoly::one() }
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(k: i64) -> Self {
        if k >= 0 {
            RatFun::from_poly(IntPoly::monomial(1, k as usize))
        } else {
            RatFun { num: IntPoly::one(), den: IntPoly::monomial(1, (-k) as usize) }
        }
    }

    /// Builds `num / den` and normalizes it.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let g = num.gcd(&den);
        if g.is_one() {
            Ok(RatFun::normalize_content(num, den))
        } else {
            Ok(RatFun::normalize_content(num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap()))
        }
    }

    /// Assumes `num` and `den` are already coprime in Q[t].
    fn normalize_content(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return RatFun::zero();
        }
        let mut c = num.content().gcd(&den.content());
        if den.lead().unwrap().is_negative() {
            c = -c;
        }
        RatFun { num: num.div_scalar_exact(&c), den: den.div_scalar_exact(&c) }
    }

    pub fn numer(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in Q.
    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    pub fn recip(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun::normalize_content(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFun) -> Result<RatFun> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: i64) -> Result<RatFun> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut out = RatFun::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    pub fn scale_int(&self, k: i64) -> RatFun {
        self * &RatFun::from_int(k)
    }

    /// Multiplication by `t^k`.
    pub fn mul_t_pow(&self, k: i64) -> RatFun {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        self * &RatFun::t_pow(k)
    }

    /// Adams operator `t -> t^l`. Coprimality survives the substitution, so no gcd is needed.
    pub fn adams(&self, l: usize) -> RatFun {
        assert!(l >= 1, "Adams operators are indexed by l >= 1");
        RatFun { num: self.num.substitute_pow(l), den: self.den.substitute_pow(l) }
    }

    /// The substitution `t -> 1/t`.
    pub fn invert_var(&self) -> RatFun {
        if self.is_zero() {
            return RatFun::zero();
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        let n = self.num.reversed();
        let d = self.den.reversed();
        let shift = dd - dn;
        let (n, d) = if shift >= 0 { (n.shift(shift as usize), d) } else { (n, d.shift((-shift) as usize)) };
        RatFun::normalize_content(n, d)
    }

    /// Exact value at `t = q`.
    pub fn eval(&self, q: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(Error::Pole { at: q.to_string(), denominator: self.den.to_string() });
        }
        Ok(self.num.eval(q) / d)
    }

    pub fn eval_int(&self, q: i64) -> Result<BigRational> {
        self.eval(&BigRational::from_integer(BigInt::from(q)))
    }

    /// Recognizes an element of Z[t].
    pub fn as_polynomial(&self) -> Result<IntPoly> {
        let fail = |rem: String| Error::NotPolynomial {
            numerator: self.num.to_string(),
            denominator: self.den.to_string(),
            remainder: rem,
        };
        if self.den.degree() != Some(0) {
            return Err(fail(self.num.pseudo_rem(&self.den).to_string()));
        }
        let d = &self.den.coeffs()[0];
        if d.is_one() {
            return Ok(self.num.clone());
        }
        let bad: Vec<String> = self
            .num
            .coeffs()
            .iter()
            .filter(|c| !c.is_multiple_of(d))
            .map(|c| format!("{}/{}", c.mod_floor(d), d))
            .collect();
        Err(fail(bad.join(",")))
    }

    /// Constant value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.is_constant() {
            return None;
        }
        Some(BigRational::new(self.num.coeff(0), self.den.coeff(0)))
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let n = &self.num + &rhs.num;
            return RatFun::new(n, self.den.clone()).unwrap();
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFun::normalize_content(n, &self.den * &rhs.den);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = rhs.den.div_exact(&g).unwrap();
        let n = &(&self.num * &d1) + &(&rhs.num * &b1);
        if n.is_zero() {
            return RatFun::zero();
        }
        let h = n.gcd(&g);
        let (n, g) = if h.is_one() { (n, g) } else { (n.div_exact(&h).unwrap(), g.div_exact(&h).unwrap()) };
        RatFun::normalize_content(n, &(&g * &b1) * &d1)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let cut = |p: &IntPoly, g: &IntPoly| if g.is_one() { p.clone() } else { p.div_exact(g).unwrap() };
        let n = &cut(&self.num, &g1) * &cut(&rhs.num, &g2);
        let d = &cut(&self.den, &g2) * &cut(&rhs.den, &g1);
        RatFun::normalize_content(n, d)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<IntPoly> for RatFun {
    fn from(p: IntPoly) -> Self {
        RatFun::from_poly(p)
    }
}

impl From<i64> for RatFun {
    fn from(k: i64) -> Self {
        RatFun::from_int(k)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

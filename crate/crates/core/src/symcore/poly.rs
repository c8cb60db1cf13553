//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored by ascending degree and the highest one is never zero,
//! so structural equality is polynomial equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(1)
    }

    pub fn t() -> Self {
        IntPoly::monomial(1, 1)
    }

    pub fn constant(k: impl Into<BigInt>) -> Self {
        IntPoly::from_coeffs(vec![k.into()])
    }

    /// `k * t^deg`
    pub fn monomial(k: impl Into<BigInt>, deg: usize) -> Self {
        let k = k.into();
        if k.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); deg + 1];
        c[deg] = k;
        IntPoly { c }
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.c.last()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.lead().unwrap().is_negative() {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    pub fn max_norm(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly { c: self.c.iter().map(|x| x * k).collect() }
    }

    /// Divides every coefficient by `k`, which must divide all of them.
    pub fn div_scalar_exact(&self, k: &BigInt) -> IntPoly {
        if k.is_one() {
            return self.clone();
        }
        IntPoly { c: self.c.iter().map(|x| x / k).collect() }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        IntPoly { c }
    }

    /// Division by `t^k`; the caller guarantees `valuation >= k`.
    pub fn unshift(&self, k: usize) -> IntPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        debug_assert!(self.valuation().unwrap() >= k);
        IntPoly { c: self.c[k..].to_vec() }
    }

    /// The substitution `t -> t^l`.
    pub fn substitute_pow(&self, l: usize) -> IntPoly {
        assert!(l >= 1, "substitute_pow needs l >= 1");
        if l == 1 || self.is_zero() {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); (self.c.len() - 1) * l + 1];
        for (k, x) in self.c.iter().enumerate() {
            c[k * l] = x.clone();
        }
        IntPoly { c }
    }

    /// `t^deg * f(1/t)`.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.c.clone();
        c.reverse();
        IntPoly::from_coeffs(c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + BigRational::from_integer(a.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Exact quotient in Z[t], or `None` when `d` does not divide `self` there.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dd = d.degree().unwrap();
        let ld = d.lead().unwrap();
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (quo, rem) = top.div_rem(ld);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &quo * dj;
                }
            }
            q[k] = quo;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(IntPoly::from_coeffs(q))
        } else {
            None
        }
    }

    /// Remainder of the pseudo-division of `self` by `d` (scaled by powers of `lead(d)`).
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero(), "pseudo-division by the zero polynomial");
        let dd = d.degree().unwrap();
        let ld = d.lead().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.lead().unwrap().clone();
            let g = lr.gcd(&ld);
            let a = &ld / &g;
            let b = &lr / &g;
            let mut c = r.scale(&a).c;
            for (j, dj) in d.c.iter().enumerate() {
                c[dr - dd + j] -= &b * dj;
            }
            r = IntPoly::from_coeffs(c);
        }
        r
    }

    /// Primitive gcd with positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let va = self.valuation().unwrap();
        let vb = other.valuation().unwrap();
        let a = self.unshift(va).primitive_part();
        let b = other.unshift(vb).primitive_part();
        let g = if a.degree() == Some(0) || b.degree() == Some(0) {
            IntPoly::one()
        } else if a == b {
            a
        } else {
            heuristic_gcd(&a, &b).unwrap_or_else(|| prs_gcd(&a, &b))
        };
        g.shift(va.min(vb))
    }
}

/// Evaluate-and-lift gcd: works on large integer images and verifies the lift by division.
fn heuristic_gcd(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let na = a.max_norm();
    let nb = b.max_norm();
    let mut xi: BigInt = BigInt::from(2) * na.min(nb) + 29;
    let maxdeg = a.degree().unwrap().max(b.degree().unwrap()) as u64;
    for _ in 0..6 {
        if xi.bits() * maxdeg > 40_000 {
            return None;
        }
        let gamma = a.eval_int(&xi).gcd(&b.eval_int(&xi));
        let g = lift_adic(gamma, &xi).primitive_part();
        if !g.is_zero() && a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
            return Some(g);
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn lift_adic(mut gamma: BigInt, xi: &BigInt) -> IntPoly {
    let half: BigInt = xi / 2;
    let mut out = Vec::new();
    while !gamma.is_zero() {
        let mut c = gamma.mod_floor(xi);
        if c > half {
            c -= xi;
        }
        gamma = (&gamma - &c) / xi;
        out.push(c);
    }
    IntPoly::from_coeffs(out)
}

fn prs_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut a, mut b) = if a.degree() >= b.degree() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return b.primitive_part();
        }
        if r.degree() == Some(0) {
            return IntPoly::one();
        }
        a = b;
        b = r.primitive_part();
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let (long, short) = if self.c.len() >= rhs.c.len() { (self, rhs) } else { (rhs, self) };
        let mut c = long.c.clone();
        for (x, y) in c.iter_mut().zip(short.c.iter()) {
            *x += y;
        }
        IntPoly::from_coeffs(c)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = self.c.clone();
        c.resize(n, BigInt::zero());
        for (x, y) in c.iter_mut().zip(rhs.c.iter()) {
            *x -= y;
        }
        IntPoly::from_coeffs(c)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        if rhs.c.len() == 1 {
            return self.scale(&rhs.c[0]);
        }
        if self.c.len() == 1 {
            return rhs.scale(&self.c[0]);
        }
        let mut c = vec![BigInt::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.c.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        IntPoly::from_coeffs(c)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { c: self.c.iter().map(|x| -x).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

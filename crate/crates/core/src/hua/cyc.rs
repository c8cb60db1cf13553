//! Rational functions of the shape `t^s * N(t) / prod_k (1 - t^k)^{m_k}`.
//!
//! Every summand of the Hua-type sums has this shape, and adding two of them
//! only needs the componentwise maximum of the exponent vectors, so large sums
//! never touch a polynomial gcd until the final conversion to `RatFun`.

use crate::symcore::{IntPoly, RatFun};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycFrac {
    shift: i64,
    num: IntPoly,
    /// `den[k]` is the multiplicity of `1 - t^k`; index 0 is unused.
    den: Vec<u32>,
}

fn one_minus_tk(k: usize) -> IntPoly {
    let mut c = vec![BigInt::zero(); k + 1];
    c[0] = BigInt::one();
    c[k] = -BigInt::one();
    IntPoly::from_coeffs(c)
}

/// Multiplies by `(1 - t^k)` without a general product.
fn mul_one_minus(p: &IntPoly, k: usize) -> IntPoly {
    if p.is_zero() {
        return IntPoly::zero();
    }
    let src = p.coeffs();
    let mut c = vec![BigInt::zero(); src.len() + k];
    for (i, x) in src.iter().enumerate() {
        c[i] += x;
        c[i + k] -= x;
    }
    IntPoly::from_coeffs(c)
}

impl CycFrac {
    pub fn zero() -> Self {
        CycFrac { shift: 0, num: IntPoly::zero(), den: Vec::new() }
    }

    pub fn one() -> Self {
        CycFrac { shift: 0, num: IntPoly::one(), den: Vec::new() }
    }

    pub fn t_pow(s: i64) -> Self {
        CycFrac { shift: s, num: IntPoly::one(), den: Vec::new() }
    }

    pub fn from_int(k: i64) -> Self {
        CycFrac { shift: 0, num: IntPoly::constant(k), den: Vec::new() }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `[inf, n]_t = prod_{k=1}^n (1 - t^k)^{-1}`; zero for negative `n`.
    pub fn pochhammer(n: i64) -> Self {
        if n < 0 {
            return CycFrac::zero();
        }
        let n = n as usize;
        let mut den = vec![0u32; n + 1];
        for d in den.iter_mut().skip(1) {
            *d = 1;
        }
        CycFrac { shift: 0, num: IntPoly::one(), den }.normalized()
    }

    /// `[inf, a - b]_t / [inf, a]_t = prod_{k=a-b+1}^{a} (1 - t^k)`; zero when `b > a`.
    pub fn pochhammer_ratio(a: i64, b: i64) -> Self {
        if b > a || a - b < 0 {
            return CycFrac::zero();
        }
        let mut num = IntPoly::one();
        for k in (a - b + 1)..=a {
            num = mul_one_minus(&num, k as usize);
        }
        CycFrac { shift: 0, num, den: Vec::new() }
    }

    pub fn mul_t_pow(mut self, s: i64) -> Self {
        if !self.is_zero() {
            self.shift += s;
        }
        self
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return CycFrac::zero();
        }
        let v = self.num.valuation().unwrap();
        if v > 0 {
            self.num = self.num.unshift(v);
            self.shift += v as i64;
        }
        while self.den.last() == Some(&0) {
            self.den.pop();
        }
        self
    }

    pub fn mul(&self, other: &CycFrac) -> CycFrac {
        if self.is_zero() || other.is_zero() {
            return CycFrac::zero();
        }
        let n = self.den.len().max(other.den.len());
        let den = (0..n)
            .map(|k| self.den.get(k).copied().unwrap_or(0) + other.den.get(k).copied().unwrap_or(0))
            .collect();
        CycFrac { shift: self.shift + other.shift, num: &self.num * &other.num, den }.normalized()
    }

    fn lifted_num(&self, den: &[u32], shift: i64) -> IntPoly {
        let mut num = self.num.shift((self.shift - shift) as usize);
        for (k, &m) in den.iter().enumerate().skip(1) {
            let have = self.den.get(k).copied().unwrap_or(0);
            for _ in have..m {
                num = mul_one_minus(&num, k);
            }
        }
        num
    }

    pub fn add(&self, other: &CycFrac) -> CycFrac {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let n = self.den.len().max(other.den.len());
        let den: Vec<u32> = (0..n)
            .map(|k| self.den.get(k).copied().unwrap_or(0).max(other.den.get(k).copied().unwrap_or(0)))
            .collect();
        let shift = self.shift.min(other.shift);
        let num = &self.lifted_num(&den, shift) + &other.lifted_num(&den, shift);
        CycFrac { shift, num, den }.normalized()
    }

    pub fn add_assign(&mut self, other: &CycFrac) {
        *self = self.add(other);
    }

    pub fn neg(&self) -> CycFrac {
        CycFrac { shift: self.shift, num: -&self.num, den: self.den.clone() }
    }

    /// The substitution `t -> 1/t`, using `1 - t^{-k} = -t^{-k}(1 - t^k)`.
    pub fn invert_var(&self) -> CycFrac {
        if self.is_zero() {
            return CycFrac::zero();
        }
        let deg = self.num.degree().unwrap() as i64;
        let mut shift = -self.shift - deg;
        let mut sign_flips = 0u64;
        for (k, &m) in self.den.iter().enumerate().skip(1) {
            shift += k as i64 * m as i64;
            sign_flips += m as u64;
        }
        let mut num = self.num.reversed();
        if sign_flips % 2 == 1 {
            num = -num;
        }
        CycFrac { shift, num, den: self.den.clone() }.normalized()
    }

    pub fn to_ratfun(&self) -> RatFun {
        if self.is_zero() {
            return RatFun::zero();
        }
        let mut d = IntPoly::one();
        for (k, &m) in self.den.iter().enumerate().skip(1) {
            for _ in 0..m {
                d = &d * &one_minus_tk(k);
            }
        }
        let base = RatFun::new(self.num.clone(), d).expect("cyclotomic denominator is nonzero");
        base.mul_t_pow(self.shift)
    }
}

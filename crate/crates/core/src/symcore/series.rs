//! Truncated power series in commuting variables `z_i`, one per vertex, with
//! coefficients in Q(t). Truncation is componentwise: a monomial `z^v` is kept
//! iff `v <= box` in every coordinate.

use super::ratfun::RatFun;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A vector of nonnegative integers indexed by the vertices of a quiver.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other <= self`.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(DimVector)
    }

    pub fn scale(&self, l: u32) -> DimVector {
        DimVector(self.0.iter().map(|a| a * l).collect())
    }

    pub fn dot(&self, w: &[i64]) -> i64 {
        self.0.iter().zip(w).map(|(&a, &b)| a as i64 * b).sum()
    }

    /// Every `v <= self`, ordered by total degree and then lexicographically.
    pub fn points_below(&self) -> Vec<DimVector> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &b in &self.0 {
            out = out
                .into_iter()
                .flat_map(|pre: Vec<u32>| {
                    (0..=b).map(move |x| {
                        let mut v = pre.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        let mut pts: Vec<DimVector> = out.into_iter().map(DimVector).collect();
        pts.sort_by(graded_cmp);
        pts
    }
}

/// Total degree first, then lexicographic.
pub fn graded_cmp(a: &DimVector, b: &DimVector) -> std::cmp::Ordering {
    a.total().cmp(&b.total()).then_with(|| a.0.cmp(&b.0))
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<u32>> for DimVector {
    fn from(v: Vec<u32>) -> Self {
        DimVector(v)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiSeries {
    bound: DimVector,
    terms: BTreeMap<DimVector, RatFun>,
}

impl MultiSeries {
    pub fn zero(bound: DimVector) -> Self {
        MultiSeries { bound, terms: BTreeMap::new() }
    }

    pub fn one(bound: DimVector) -> Self {
        let mut s = MultiSeries::zero(bound);
        let z = DimVector::zero(s.bound.len());
        s.terms.insert(z, RatFun::one());
        s
    }

    /// Builds a series, silently dropping keys outside the box.
    pub fn from_terms(bound: DimVector, terms: impl IntoIterator<Item = (DimVector, RatFun)>) -> Self {
        let mut s = MultiSeries::zero(bound);
        for (v, c) in terms {
            s.add_term(v, c);
        }
        s
    }

    pub fn bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn nvars(&self) -> usize {
        self.bound.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DimVector, &RatFun)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v: &DimVector) -> RatFun {
        self.terms.get(v).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn constant_term(&self) -> RatFun {
        self.coeff(&DimVector::zero(self.nvars()))
    }

    /// Adds `c z^v` when `v` lies in the box.
    pub fn add_term(&mut self, v: DimVector, c: RatFun) {
        assert_eq!(v.len(), self.nvars(), "monomial arity mismatch");
        if c.is_zero() || !v.le(&self.bound) {
            return;
        }
        let sum = match self.terms.get(&v) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&v);
        } else {
            self.terms.insert(v, sum);
        }
    }

    /// Replaces the box by a smaller one, dropping terms outside it.
    pub fn truncate(&self, bound: &DimVector) -> Result<MultiSeries> {
        if !bound.le(&self.bound) {
            return Err(Error::Shape(format!("cannot widen box {} to {}", self.bound, bound)));
        }
        Ok(MultiSeries::from_terms(bound.clone(), self.terms.iter().map(|(v, c)| (v.clone(), c.clone()))))
    }

    fn check_same(&self, other: &MultiSeries) -> Result<()> {
        if self.bound != other.bound {
            return Err(Error::Shape(format!("boxes {} and {} differ", self.bound, other.bound)));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(v.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiSeries {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &RatFun) -> MultiSeries {
        self.map_coeffs(|c| c * k)
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFun) -> RatFun) -> MultiSeries {
        MultiSeries::from_terms(self.bound.clone(), self.terms.iter().map(|(v, c)| (v.clone(), f(c))))
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_same(other)?;
        let mut acc: BTreeMap<DimVector, RatFun> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (w, b) in &other.terms {
                let v = u.add(w);
                if !v.le(&self.bound) {
                    continue;
                }
                let prod = a * b;
                let e = acc.entry(v).or_insert_with(RatFun::zero);
                *e = &*e + &prod;
            }
        }
        Ok(MultiSeries::from_terms(self.bound.clone(), acc))
    }

    /// Multiplicative inverse by a graded recursive solve.
    pub fn inverse(&self) -> Result<MultiSeries> {
        let c0 = self.constant_term();
        let inv0 = c0.recip().map_err(|_| Error::ConstantTerm("cannot invert a series with zero constant term".into()))?;
        let mut g: BTreeMap<DimVector, RatFun> = BTreeMap::new();
        let zero = DimVector::zero(self.nvars());
        g.insert(zero.clone(), inv0.clone());
        for v in self.bound.points_below().into_iter().skip(1) {
            let mut s = RatFun::zero();
            for (u, fu) in self.terms.range(..) {
                if u.is_zero() || !u.le(&v) {
                    continue;
                }
                if let Some(gv) = g.get(&v.checked_sub(u).unwrap()) {
                    s = &s + &(fu * gv);
                }
            }
            if !s.is_zero() {
                g.insert(v, -(&s * &inv0));
            }
        }
        Ok(MultiSeries::from_terms(self.bound.clone(), g))
    }

    /// Adams operator: `c(t) z^v -> c(t^l) z^{lv}`, dropping what leaves the box.
    pub fn adams(&self, l: u32) -> MultiSeries {
        assert!(l >= 1, "Adams operators are indexed by l >= 1");
        MultiSeries::from_terms(
            self.bound.clone(),
            self.terms.iter().filter_map(|(v, c)| {
                let lv = v.scale(l);
                lv.le(&self.bound).then(|| (lv, c.adams(l as usize)))
            }),
        )
    }

    /// `c z^v -> t^{w.v} c z^v`.
    pub fn monomial_twist(&self, w: &[i64]) -> MultiSeries {
        assert_eq!(w.len(), self.nvars(), "twist vector arity mismatch");
        MultiSeries::from_terms(self.bound.clone(), self.terms.iter().map(|(v, c)| (v.clone(), c.mul_t_pow(v.dot(w)))))
    }

    /// Applies `t -> 1/t` to every coefficient.
    pub fn invert_var(&self) -> MultiSeries {
        self.map_coeffs(|c| c.invert_var())
    }

    /// Largest `l` such that some nonzero monomial still fits after scaling by `l`.
    fn adams_depth(&self) -> u32 {
        self.bound.0.iter().copied().max().unwrap_or(0)
    }

    fn require_zero_constant(&self) -> Result<()> {
        if !self.constant_term().is_zero() {
            return Err(Error::ConstantTerm(format!("Exp needs zero constant term, found {}", self.constant_term())));
        }
        Ok(())
    }

    /// `exp(g)` for a series without constant term, via `|v| F_v = sum_u |u| g_u F_{v-u}`.
    pub fn exp(&self) -> Result<MultiSeries> {
        self.require_zero_constant()?;
        let mut f: BTreeMap<DimVector, RatFun> = BTreeMap::new();
        f.insert(DimVector::zero(self.nvars()), RatFun::one());
        for v in self.bound.points_below().into_iter().skip(1) {
            let mut s = RatFun::zero();
            for (u, gu) in &self.terms {
                if !u.le(&v) {
                    continue;
                }
                if let Some(fv) = f.get(&v.checked_sub(u).unwrap()) {
                    s = &s + &(&(gu * fv).scale_int(u.total() as i64));
                }
            }
            if !s.is_zero() {
                let n = v.total() as i64;
                f.insert(v, &s * &inv_int(n));
            }
        }
        Ok(MultiSeries::from_terms(self.bound.clone(), f))
    }

    /// `log(F)` for a series with constant term 1.
    pub fn log(&self) -> Result<MultiSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTerm(format!("Log needs constant term 1, found {}", self.constant_term())));
        }
        let mut g: BTreeMap<DimVector, RatFun> = BTreeMap::new();
        for v in self.bound.points_below().into_iter().skip(1) {
            let n = v.total() as i64;
            let mut s = self.coeff(&v).scale_int(n);
            for (u, gu) in &g {
                if !u.le(&v) || *u == v {
                    continue;
                }
                let rest = v.checked_sub(u).unwrap();
                if let Some(fr) = self.terms.get(&rest) {
                    s = &s - &(&(gu * fr).scale_int(u.total() as i64));
                }
            }
            if !s.is_zero() {
                g.insert(v, &s * &inv_int(n));
            }
        }
        Ok(MultiSeries::from_terms(self.bound.clone(), g))
    }

    /// Plethystic exponential `exp(sum_l psi_l(f) / l)`.
    pub fn pleth_exp(&self) -> Result<MultiSeries> {
        self.require_zero_constant()?;
        let mut acc = MultiSeries::zero(self.bound.clone());
        for l in 1..=self.adams_depth() {
            let a = self.adams(l);
            if a.terms.is_empty() {
                continue;
            }
            acc = acc.add(&a.scale(&inv_int(l as i64)))?;
        }
        acc.exp()
    }

    /// Plethystic logarithm `sum_l mu(l)/l psi_l(log F)`.
    pub fn pleth_log(&self) -> Result<MultiSeries> {
        let g = self.log()?;
        let mut acc = MultiSeries::zero(self.bound.clone());
        for l in 1..=self.adams_depth() {
            let m = mobius(l as u64);
            if m == 0 {
                continue;
            }
            let a = g.adams(l);
            if a.terms.is_empty() {
                continue;
            }
            acc = acc.add(&a.scale(&RatFun::from_int(m).checked_div(&RatFun::from_int(l as i64)).unwrap()))?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms sorted by total degree, then lexicographically.
    pub fn graded_terms(&self) -> Vec<(DimVector, RatFun)> {
        let mut v: Vec<(DimVector, RatFun)> = self.terms.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        v.sort_by(|a, b| graded_cmp(&a.0, &b.0));
        v
    }
}

fn inv_int(n: i64) -> RatFun {
    RatFun::from_int(1).checked_div(&RatFun::from_int(n)).unwrap()
}

/// The Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    assert!(n >= 1);
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiSeries[box {}]{{", self.bound)?;
        for (i, (v, c)) in self.graded_terms().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}: {c}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::IntPoly;

    fn one_var(b: u32, coeffs: &[i64]) -> MultiSeries {
        MultiSeries::from_terms(
            DimVector(vec![b]),
            coeffs.iter().enumerate().map(|(k, &c)| (DimVector(vec![k as u32]), RatFun::from_int(c))),
        )
    }

    fn t() -> RatFun {
        RatFun::t_pow(1)
    }

    #[test]
    fn products_in_the_box() {
        assert_eq!(one_var(2, &[1, 1]).mul(&one_var(2, &[1, -1])).unwrap(), one_var(2, &[1, 0, -1]));
        let geo = one_var(3, &[1, 1, 1, 1]);
        assert_eq!(geo.mul(&one_var(3, &[1, -1])).unwrap(), one_var(3, &[1]));
        assert!(one_var(2, &[1]).mul(&one_var(3, &[1])).is_err());
    }

    #[test]
    fn inverse_of_one_minus_z() {
        assert_eq!(one_var(4, &[1, -1]).inverse().unwrap(), one_var(4, &[1, 1, 1, 1, 1]));
        assert_eq!(one_var(4, &[1]).inverse().unwrap(), one_var(4, &[1]));
        assert!(one_var(4, &[0, 1]).inverse().is_err());
    }

    #[test]
    fn adams_truncates() {
        let s = MultiSeries::from_terms(DimVector(vec![2]), [(DimVector(vec![1]), t())]);
        let expect = MultiSeries::from_terms(DimVector(vec![2]), [(DimVector(vec![2]), RatFun::t_pow(2))]);
        assert_eq!(s.adams(2), expect);
        assert!(one_var(2, &[0, 1]).adams(3).is_zero());
    }

    #[test]
    fn exp_of_z_is_geometric() {
        assert_eq!(one_var(5, &[0, 1]).pleth_exp().unwrap(), one_var(5, &[1, 1, 1, 1, 1, 1]));
        assert_eq!(one_var(5, &[]).pleth_exp().unwrap(), one_var(5, &[1]));
        assert!(one_var(5, &[1]).pleth_exp().is_err());
        assert_eq!(one_var(5, &[1, 1, 1, 1, 1, 1]).pleth_log().unwrap(), one_var(5, &[0, 1]));
    }

    #[test]
    fn commuting_pairs_series_first_coefficient() {
        // q z / ((q-1)(1-z))
        let q = t();
        let c = q.checked_div(&(&q - &RatFun::one())).unwrap();
        let f = MultiSeries::from_terms(DimVector(vec![3]), (1..=3).map(|k| (DimVector(vec![k]), c.clone())));
        let e = f.pleth_exp().unwrap();
        assert_eq!(e.coeff(&DimVector(vec![1])), c);
    }

    #[test]
    fn twist() {
        let z = MultiSeries::from_terms(DimVector(vec![2]), [(DimVector(vec![1]), RatFun::one())]);
        let tz = MultiSeries::from_terms(DimVector(vec![2]), [(DimVector(vec![1]), RatFun::t_pow(2))]);
        assert_eq!(z.monomial_twist(&[2]), tz);
        assert_eq!(z.monomial_twist(&[0]), z);
        assert_eq!(tz.monomial_twist(&[-2]), z);
    }

    #[test]
    fn mobius_values() {
        let m: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(m, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn points_below_order() {
        let pts = DimVector(vec![1, 1]).points_below();
        let raw: Vec<Vec<u32>> = pts.into_iter().map(|d| d.0).collect();
        assert_eq!(raw, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let _ = IntPoly::zero();
    }
}

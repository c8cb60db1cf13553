//! Characters of the generalized quantum group of a quiver, root
//! multiplicities of its Lie algebra, and the comparison of those
//! multiplicities with constant terms of Kac polynomials.
//!
//! A weight `lambda` only ever enters through its pairings `(i, lambda)`, so
//! it is passed as that vector. Characters are stored normalized by the
//! highest weight: the key `alpha` holds the coefficient of `e^{-alpha}`.

use crate::error::{Error, Result};
use crate::hua::{kac_table, Flavor, HuaOptions};
use crate::quiver::Quiver;
use crate::symcore::{mobius, DimVector, MultiSeries, RatFun};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSeries {
    pub quiver: Quiver,
    pub bound: DimVector,
    pub terms: BTreeMap<DimVector, BigInt>,
}

impl CharSeries {
    pub fn coeff(&self, v: &DimVector) -> BigInt {
        self.terms.get(v).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&DimVector::zero(self.bound.len()))
    }

    pub fn to_series(&self) -> MultiSeries {
        MultiSeries::from_terms(self.bound.clone(), self.terms.iter().map(|(k, c)| (k.clone(), RatFun::from_int(c.clone()))))
    }

    pub fn from_series(quiver: &Quiver, s: &MultiSeries) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, c) in s.terms() {
            let p = c.as_polynomial()?;
            if p.degree().unwrap_or(0) > 0 {
                return Err(Error::Consistency(format!("character coefficient at {k} depends on t")));
            }
            let v = p.coeff(0);
            if !v.is_zero() {
                terms.insert(k.clone(), v);
            }
        }
        Ok(CharSeries { quiver: quiver.clone(), bound: s.bound().clone(), terms })
    }

    pub fn mul(&self, other: &CharSeries) -> Result<CharSeries> {
        CharSeries::from_series(&self.quiver, &self.to_series().mul(&other.to_series())?)
    }

    pub fn inverse(&self) -> Result<CharSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTerm(format!("character has constant term {}, expected 1", self.constant_term())));
        }
        CharSeries::from_series(&self.quiver, &self.to_series().inverse()?)
    }
}

/// An element `s = -sum_k l_k i_k` of the set of admissible sums, with one
/// entry per vertex (repeated isotropic entries merged into their total).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrthogonalSum {
    pub entries: Vec<(usize, u32)>,
}

impl OrthogonalSum {
    /// `-s` as a dimension vector.
    pub fn degree(&self, n: usize) -> DimVector {
        let mut v = vec![0; n];
        for &(i, l) in &self.entries {
            v[i] += l;
        }
        DimVector(v)
    }
}

fn check_pairings(q: &Quiver, lambda: &[i64], bx: &DimVector) -> Result<()> {
    q.check_dim(bx)?;
    if lambda.len() != q.n() {
        return Err(Error::Shape(format!("{} pairings given for {} vertices", lambda.len(), q.n())));
    }
    Ok(())
}

fn sym_ij(q: &Quiver, i: usize, j: usize) -> i64 {
    let n = q.n();
    let ei: Vec<i64> = (0..n).map(|k| (k == i) as i64).collect();
    let ej: Vec<i64> = (0..n).map(|k| (k == j) as i64).collect();
    q.sym(&ei, &ej)
}

/// Every admissible sum of pairwise orthogonal imaginary vertices
/// perpendicular to `lambda`, with `-s <= box`; the empty sum comes first.
pub fn sigma_enum(q: &Quiver, lambda: &[i64], bx: &DimVector) -> Result<Vec<OrthogonalSum>> {
    check_pairings(q, lambda, bx)?;
    let cand: Vec<usize> = (0..q.n()).filter(|&i| q.is_imaginary(i) && lambda[i] == 0 && bx.0[i] > 0).collect();
    let mut out = Vec::new();
    fn rec(q: &Quiver, bx: &DimVector, cand: &[usize], start: usize, cur: &mut Vec<(usize, u32)>, out: &mut Vec<OrthogonalSum>) {
        out.push(OrthogonalSum { entries: cur.clone() });
        for k in start..cand.len() {
            let i = cand[k];
            if cur.iter().any(|&(j, _)| sym_ij(q, i, j) != 0) {
                continue;
            }
            for l in 1..=bx.0[i] {
                cur.push((i, l));
                rec(q, bx, cand, k + 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(q, bx, &cand, 0, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Coefficient of `x^l` in `prod_{k>=1} (1 - x^k)`, by the pentagonal number theorem.
pub fn euler_phi(l: u32) -> i64 {
    let l = l as i64;
    let mut n = 0i64;
    loop {
        for m in [n, -n] {
            if m * (3 * m - 1) / 2 == l {
                return if m.rem_euclid(2) == 0 { 1 } else { -1 };
            }
        }
        if n * (3 * n - 1) / 2 > l {
            return 0;
        }
        n += 1;
    }
}

pub fn epsilon_weight(q: &Quiver, s: &OrthogonalSum) -> i64 {
    let mut out = 1;
    for &(i, l) in &s.entries {
        out *= if q.is_isotropic(i) { euler_phi(l) } else { -1 };
    }
    out
}

/// A Weyl group element reached by the search, as its matrix on `Z^I`
/// together with `(lambda + rho) - w(lambda + rho)` and its sign.
struct WeylElement {
    matrix: Vec<Vec<i64>>,
    shift: Vec<i64>,
    sign: i64,
}

fn weyl_elements(q: &Quiver, lambda: &[i64], bx: &DimVector) -> Vec<WeylElement> {
    let n = q.n();
    let real: Vec<usize> = (0..n).filter(|&i| q.is_real(i)).collect();
    let pair: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| sym_ij(q, i, j)).collect()).collect();
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut out = vec![WeylElement { matrix: id, shift: vec![0; n], sign: 1 }];
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    seen.insert(vec![0; n], ());
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for &i in &real {
            let cur = &out[k];
            // (lambda + rho, i) = lambda_i + 1 for a real vertex.
            let c = lambda[i] + 1 - (0..n).map(|j| cur.shift[j] * pair[j][i]).sum::<i64>();
            if c <= 0 {
                continue;
            }
            let mut shift = cur.shift.clone();
            shift[i] += c;
            if shift.iter().zip(&bx.0).any(|(&a, &b)| a > b as i64) || seen.contains_key(&shift) {
                continue;
            }
            // s_i(x) = x - (x, i) i applied after w.
            let mut matrix = cur.matrix.clone();
            for col in 0..n {
                let p: i64 = (0..n).map(|r| cur.matrix[r][col] * pair[r][i]).sum();
                matrix[i][col] -= p;
            }
            seen.insert(shift.clone(), ());
            let sign = -cur.sign;
            out.push(WeylElement { matrix, shift, sign });
            queue.push_back(out.len() - 1);
        }
    }
    out
}

/// `sum_w eps(w) e^{-rho + w(lambda + rho)} w(S_lambda)`, truncated to the box.
pub fn weyl_denominator_series(q: &Quiver, lambda: &[i64], bx: &DimVector) -> Result<CharSeries> {
    let sigma = sigma_enum(q, lambda, bx)?;
    let n = q.n();
    let mut terms: BTreeMap<DimVector, BigInt> = BTreeMap::new();
    for w in weyl_elements(q, lambda, bx) {
        for s in &sigma {
            let eps = epsilon_weight(q, s);
            if eps == 0 {
                continue;
            }
            let d = s.degree(n);
            let wd: Vec<i64> = (0..n).map(|r| (0..n).map(|c| w.matrix[r][c] * d.0[c] as i64).sum()).collect();
            let alpha: Vec<i64> = (0..n).map(|r| w.shift[r] + wd[r]).collect();
            if alpha.iter().any(|&a| a < 0) {
                return Err(Error::Consistency(format!("Weyl translate of {:?} left the positive cone", s.entries)));
            }
            let alpha = DimVector(alpha.iter().map(|&a| a as u32).collect());
            if alpha.le(bx) {
                *terms.entry(alpha).or_default() += BigInt::from(w.sign * eps);
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(CharSeries { quiver: q.clone(), bound: bx.clone(), terms })
}

/// Character of the negative half, the inverse of the `lambda = 0` series.
pub fn ch_uq_minus(q: &Quiver, bx: &DimVector) -> Result<CharSeries> {
    weyl_denominator_series(q, &vec![0; q.n()], bx)?.inverse()
}

/// Character of the simple module of highest weight `lambda`.
pub fn ch_highest_weight(q: &Quiver, lambda: &[i64], bx: &DimVector) -> Result<CharSeries> {
    if lambda.iter().any(|&x| x < 0) {
        return Err(Error::Invalid(format!("weight with pairings {lambda:?} is not dominant")));
    }
    weyl_denominator_series(q, lambda, bx)?.mul(&ch_uq_minus(q, bx)?)
}

/// Exponents `m_alpha` with `Ch(U^-) = prod_alpha (1 - z^alpha)^{-m_alpha}`,
/// read off one degree at a time.
pub fn root_multiplicities(q: &Quiver, bx: &DimVector) -> Result<BTreeMap<DimVector, BigInt>> {
    let mut cur = ch_uq_minus(q, bx)?.to_series();
    let mut out = BTreeMap::new();
    for alpha in bx.points_below() {
        if alpha.is_zero() {
            continue;
        }
        let c = cur.coeff(&alpha).as_polynomial()?;
        if c.degree().unwrap_or(0) > 0 {
            return Err(Error::Consistency(format!("coefficient at {alpha} depends on t")));
        }
        let m = c.coeff(0);
        if m.is_negative() {
            return Err(Error::Consistency(format!("negative multiplicity {m} at {alpha}")));
        }
        if !m.is_zero() {
            let factor = one_minus_pow(&alpha, &m, bx)?;
            cur = cur.mul(&factor)?;
        }
        out.insert(alpha, m);
    }
    Ok(out)
}

/// `(1 - z^alpha)^m`, truncated.
fn one_minus_pow(alpha: &DimVector, m: &BigInt, bx: &DimVector) -> Result<MultiSeries> {
    let mut terms = Vec::new();
    let mut binom = BigInt::one();
    let mut k = 0u32;
    loop {
        let deg = alpha.scale(k);
        if !deg.le(bx) || BigInt::from(k) > *m {
            break;
        }
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        terms.push((deg, RatFun::from_int(sign * &binom)));
        binom = binom * (m - BigInt::from(k)) / BigInt::from(k + 1);
        k += 1;
    }
    Ok(MultiSeries::from_terms(bx.clone(), terms))
}

/// Number of `k`-ary Lyndon words of length `n`.
pub fn necklace(k: u64, n: u64) -> BigInt {
    assert!(k >= 1 && n >= 1, "necklace needs k, n >= 1");
    let mut s = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            s += BigInt::from(mobius(n / d)) * BigInt::from(k).pow(d as u32);
        }
    }
    let (q, r) = s.div_rem(&BigInt::from(n));
    assert!(r.is_zero());
    q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantTermRow {
    pub alpha: DimVector,
    pub multiplicity: BigInt,
    pub constant_term: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantTermReport {
    pub quiver: Quiver,
    pub flavor: Flavor,
    pub rows: Vec<ConstantTermRow>,
}

impl ConstantTermReport {
    pub fn failing(&self) -> Vec<DimVector> {
        self.rows.iter().filter(|r| r.multiplicity != r.constant_term).map(|r| r.alpha.clone()).collect()
    }

    pub fn holds(&self) -> bool {
        self.failing().is_empty()
    }
}

/// Compares root multiplicities with the constant terms of the Kac
/// polynomials of the given flavor.
pub fn constant_term_check(q: &Quiver, flavor: Flavor, bx: &DimVector, opts: HuaOptions) -> Result<ConstantTermReport> {
    let mult = root_multiplicities(q, bx)?;
    let table = kac_table(q, flavor, bx, opts)?;
    let rows = mult
        .into_iter()
        .map(|(alpha, m)| {
            let c = table.get(&alpha).coeff(0);
            ConstantTermRow { alpha, multiplicity: m, constant_term: c }
        })
        .collect();
    Ok(ConstantTermReport { quiver: q.clone(), flavor, rows })
}

/// `dim g_Q[alpha] = A^1_alpha(0)` on every `alpha` in the box.
pub fn kac_constant_term_check(q: &Quiver, bx: &DimVector, opts: HuaOptions) -> Result<ConstantTermReport> {
    constant_term_check(q, Flavor::Nil1, bx, opts)
}

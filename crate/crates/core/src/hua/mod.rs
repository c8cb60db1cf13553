//! Hua-type generating functions and the Kac polynomials extracted from them.
//!
//! Three flavors share one pipeline. For an I-partition `nu` with columns
//! `nu_k`, every summand has the form `prod_k t^{<nu_k,nu_k>} W(nu_k - nu_{k+1})`
//! where the column weight `W` is `[inf,u]`, `H(u)` or (for sequences of
//! I-partitions, grouped by column) the sum of the nilpotent stratum weights.
//! `r_series` sums over chains of columns by dynamic programming;
//! `r_series_enumerated` sums the summands one by one and is kept as a second
//! route for testing.

mod cyc;
mod partitions;

pub use cyc::CycFrac;
pub use partitions::{enum_ipartition_seqs, enum_ipartitions, partitions_of, IPartition, IPartitionSeq};

use crate::error::{Error, Result};
use crate::quiver::{as_i64, Quiver};
use crate::symcore::{DimVector, IntPoly, MultiSeries, RatFun};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Plain,
    Nil1,
    Nil0,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Plain, Flavor::Nil1, Flavor::Nil0];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Plain => "plain",
            Flavor::Nil1 => "nil1",
            Flavor::Nil0 => "nil0",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Flavor::Plain),
            "nil1" => Ok(Flavor::Nil1),
            "nil0" => Ok(Flavor::Nil0),
            _ => Err(Error::Invalid(format!("unknown flavor {s:?} (expected plain, nil1 or nil0)"))),
        }
    }
}

/// Which closed form to use for the loop factor `H(n,g)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HForm {
    /// Includes the flag-count factor `[inf, e_1]`.
    #[default]
    WithFlagFactor,
    /// Drops that factor; it does not reproduce the nilpotent volumes and
    /// is kept only for comparison.
    WithoutFlagFactor,
}

/// Index set of the pairing sum inside the weight `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BReading {
    /// `sum over l1 >= l2 of <v^(l1), v^(l2)>`, which is what the stratum
    /// volumes of nilpotent representations produce.
    #[default]
    Descending,
    /// `sum over l1 <= l2`.
    Ascending,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct HuaOptions {
    pub h_form: HForm,
    pub b_reading: BReading,
}

/// `[inf, n]_t = prod_{k=1}^n (1 - t^k)^{-1}`.
pub fn inf_pochhammer(n: u32) -> RatFun {
    CycFrac::pochhammer(n as i64).to_ratfun()
}

fn h_cache() -> &'static Mutex<HashMap<(u32, u32, HForm), CycFrac>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, HForm), CycFrac>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The loop factor `H(n,g)_t` as a cyclotomic fraction.
///
/// For `g >= 1` it is a sum over compositions `e` of `n`; the exponent
/// `(g-1) sum_{k<l} e_k e_l + g sum e_k^2` is accumulated step by step, so the
/// compositions are folded into a table indexed by (partial sum, last part).
pub fn h_loop_cyc(n: u32, g: u32, form: HForm) -> CycFrac {
    if g == 0 {
        return CycFrac::pochhammer(n as i64);
    }
    if n == 0 {
        return CycFrac::one();
    }
    if let Some(h) = h_cache().lock().unwrap().get(&(n, g, form)) {
        return h.clone();
    }
    let (ni, gi) = (n as i64, g as i64);
    let mut table: Vec<Vec<CycFrac>> = vec![vec![CycFrac::zero(); n as usize + 1]; n as usize + 1];
    for e in 1..=ni {
        let start = match form {
            HForm::WithFlagFactor => CycFrac::pochhammer(e),
            HForm::WithoutFlagFactor => CycFrac::one(),
        };
        table[e as usize][e as usize] = start.mul_t_pow(gi * e * e);
    }
    for s in 1..=ni {
        for e in 1..=s {
            let cur = table[s as usize][e as usize].clone();
            if cur.is_zero() {
                continue;
            }
            for e2 in 1..=(ni - s) {
                let step = CycFrac::pochhammer_ratio(gi * e, e2)
                    .mul(&CycFrac::pochhammer(e2))
                    .mul_t_pow(gi * e2 * e2 + (gi - 1) * e2 * s);
                if step.is_zero() {
                    continue;
                }
                let add = cur.mul(&step);
                table[(s + e2) as usize][e2 as usize].add_assign(&add);
            }
        }
    }
    let mut total = CycFrac::zero();
    for e in 1..=n as usize {
        total.add_assign(&table[n as usize][e]);
    }
    h_cache().lock().unwrap().insert((n, g, form), total.clone());
    total
}

pub fn h_loop(n: u32, g: u32) -> RatFun {
    h_loop_cyc(n, g, HForm::WithFlagFactor).to_ratfun()
}

pub fn h_loop_without_flag_factor(n: u32, g: u32) -> RatFun {
    h_loop_cyc(n, g, HForm::WithoutFlagFactor).to_ratfun()
}

/// `H(u)_t = prod_i H(u_i, g_i)_t`.
pub fn h_vec_cyc(q: &Quiver, u: &DimVector, form: HForm) -> CycFrac {
    u.0.iter()
        .enumerate()
        .fold(CycFrac::one(), |acc, (i, &n)| acc.mul(&h_loop_cyc(n, q.loop_count(i) as u32, form)))
}

/// `H(v, w, t) = prod_i [inf, s_i - w_i]_t / [inf, s_i]_t` with `s_i` the
/// inflow of `v` at `i`.
pub fn h_head_cyc(q: &Quiver, v: &DimVector, w: &DimVector) -> CycFrac {
    let mut acc = CycFrac::one();
    for i in 0..q.n() {
        let s = q.inflow(&v.0, i) as i64;
        acc = acc.mul(&CycFrac::pochhammer_ratio(s, w.0[i] as i64));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

pub fn h_head(q: &Quiver, v: &DimVector, w: &DimVector) -> Result<RatFun> {
    q.check_dim(v)?;
    q.check_dim(w)?;
    Ok(h_head_cyc(q, v, w).to_ratfun())
}

fn poch_vec(u: &DimVector) -> CycFrac {
    u.0.iter().fold(CycFrac::one(), |acc, &n| acc.mul(&CycFrac::pochhammer(n as i64)))
}

fn sq_sum(u: &DimVector) -> i64 {
    u.0.iter().map(|&x| (x as i64) * (x as i64)).sum()
}

/// Weight `o` of a tuple `(v_1, ..., v_s)`:
/// `-sum_i (i-1)<v_i,v_i> - sum_{i<j} i (v_i,v_j)`.
pub fn o_weight(q: &Quiver, vs: &[DimVector]) -> Result<i64> {
    let a: Vec<Vec<i64>> = vs.iter().map(|v| q.check_dim(v).map(|_| as_i64(v))).collect::<Result<_>>()?;
    let mut o = 0;
    for (i, vi) in a.iter().enumerate() {
        o -= i as i64 * q.euler(vi, vi);
        for vj in &a[i + 1..] {
            o -= (i as i64 + 1) * q.sym(vi, vj);
        }
    }
    Ok(o)
}

/// Weight `a` of a stratum `(v^(1), v^(2), ...)`:
/// `sum_{l>k} <v^(k), v^(l)> + sum_{i,l} (v^(l)_i)^2`.
pub fn a_weight(q: &Quiver, vs: &[DimVector]) -> Result<i64> {
    let a: Vec<Vec<i64>> = vs.iter().map(|v| q.check_dim(v).map(|_| as_i64(v))).collect::<Result<_>>()?;
    let mut s: i64 = vs.iter().map(sq_sum).sum();
    for (k, vk) in a.iter().enumerate() {
        for vl in &a[k + 1..] {
            s += q.euler(vk, vl);
        }
    }
    Ok(s)
}

/// The pairing sum of one column `(v^(1), v^(2), ...)` under the chosen reading.
fn column_pairing(q: &Quiver, col: &[Vec<i64>], reading: BReading) -> i64 {
    let mut s = 0;
    for (l1, x) in col.iter().enumerate() {
        for (l2, y) in col.iter().enumerate() {
            let keep = match reading {
                BReading::Descending => l1 >= l2,
                BReading::Ascending => l1 <= l2,
            };
            if keep {
                s += q.euler(x, y);
            }
        }
    }
    s
}

/// Weight `b` of a sequence of I-partitions.
pub fn b_weight(q: &Quiver, seq: &IPartitionSeq, reading: BReading) -> Result<i64> {
    if seq.nvert() != q.n() {
        return Err(Error::Shape(format!("sequence over {} vertices, quiver has {}", seq.nvert(), q.n())));
    }
    let mut b = 0;
    for k in 1..=seq.length() {
        let nk = as_i64(&seq.column(k));
        b += q.euler(&nk, &nk);
        let col: Vec<DimVector> = (1..=seq.items().len()).map(|l| seq.step(l, k)).collect();
        let coli: Vec<Vec<i64>> = col.iter().map(as_i64).collect();
        b -= column_pairing(q, &coli, reading);
        b += col.iter().map(sq_sum).sum::<i64>();
    }
    Ok(b)
}

/// The index of a single Hua summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HuaIndex {
    Partition(IPartition),
    Sequence(IPartitionSeq),
}

fn x_plain_cyc(q: &Quiver, nu: &IPartition, flavor: Flavor, opts: HuaOptions) -> CycFrac {
    let mut acc = CycFrac::one();
    for k in 1..=nu.length() {
        let nk = nu.column(k);
        let step = nu.step(k);
        let w = match flavor {
            Flavor::Plain => poch_vec(&step),
            _ => h_vec_cyc(q, &step, opts.h_form),
        };
        acc = acc.mul(&w).mul_t_pow(q.euler_sq(&nk));
    }
    acc
}

fn x_nil0_cyc(q: &Quiver, seq: &IPartitionSeq, opts: HuaOptions) -> Result<CycFrac> {
    let mut acc = CycFrac::t_pow(b_weight(q, seq, opts.b_reading)?);
    let len = seq.items().len();
    for k in 1..=seq.length() {
        for l in 1..=len {
            let v = seq.step(l, k);
            let next = seq.step(l + 1, k);
            acc = acc.mul(&poch_vec(&v)).mul(&h_head_cyc(q, &v, &next));
            if acc.is_zero() {
                return Ok(acc);
            }
        }
    }
    Ok(acc)
}

fn x_summand_cyc(q: &Quiver, flavor: Flavor, idx: &HuaIndex, opts: HuaOptions) -> Result<CycFrac> {
    match (flavor, idx) {
        (Flavor::Plain | Flavor::Nil1, HuaIndex::Partition(nu)) => {
            if nu.nvert() != q.n() {
                return Err(Error::Shape(format!("I-partition over {} vertices, quiver has {}", nu.nvert(), q.n())));
            }
            Ok(x_plain_cyc(q, nu, flavor, opts))
        }
        (Flavor::Nil0, HuaIndex::Sequence(seq)) => x_nil0_cyc(q, seq, opts),
        (f, _) => Err(Error::Shape(format!("flavor {f} takes {}", if f == Flavor::Nil0 { "a sequence of I-partitions" } else { "a single I-partition" }))),
    }
}

/// The summand `X`, `X^1` or `X^0` at formal `t`.
pub fn x_summand(q: &Quiver, flavor: Flavor, idx: &HuaIndex, opts: HuaOptions) -> Result<RatFun> {
    Ok(x_summand_cyc(q, flavor, idx, opts)?.to_ratfun())
}

/// Column weights `W(u)` for every `u <= box`, at formal `t`.
///
/// Plain: `[inf,u]`. Nil1: `H(u)`. Nil0: the sum over sequences of nonzero
/// vectors `c^(1), c^(2), ...` adding up to `u` of
/// `t^{sum |c^(l)|^2 - pairing} prod_l [inf, c^(l)] H(c^(l), c^(l+1))`.
pub fn column_weights(q: &Quiver, flavor: Flavor, bx: &DimVector, opts: HuaOptions) -> BTreeMap<DimVector, CycFrac> {
    let pts = bx.points_below();
    match flavor {
        Flavor::Plain => pts.into_iter().map(|u| (u.clone(), poch_vec(&u))).collect(),
        Flavor::Nil1 => pts.into_iter().map(|u| (u.clone(), h_vec_cyc(q, &u, opts.h_form))).collect(),
        Flavor::Nil0 => nil0_column_weights(q, bx, &pts, opts.b_reading),
    }
}

fn nil0_column_weights(q: &Quiver, bx: &DimVector, pts: &[DimVector], reading: BReading) -> BTreeMap<DimVector, CycFrac> {
    // states[(prefix sum, last vector)]
    let mut states: HashMap<(DimVector, DimVector), CycFrac> = HashMap::new();
    let nonzero: Vec<&DimVector> = pts.iter().filter(|p| !p.is_zero()).collect();
    for c in &nonzero {
        let w = poch_vec(c).mul_t_pow(sq_sum(c) - q.euler_sq(c));
        states.insert(((*c).clone(), (*c).clone()), w);
    }
    let mut out = BTreeMap::new();
    out.insert(DimVector::zero(bx.len()), CycFrac::one());
    for p in pts.iter().filter(|p| !p.is_zero()) {
        let mut total = CycFrac::zero();
        for last in p.points_below() {
            let Some(cur) = states.get(&(p.clone(), last.clone())).cloned() else { continue };
            total.add_assign(&cur);
            let room = bx.checked_sub(p).unwrap();
            for c in room.points_below().iter().filter(|c| !c.is_zero()) {
                let h = h_head_cyc(q, &last, c);
                if h.is_zero() {
                    continue;
                }
                let np = p.add(c);
                let (ci, npi) = (as_i64(c), as_i64(&np));
                let pair = match reading {
                    BReading::Descending => q.euler(&ci, &npi),
                    BReading::Ascending => q.euler(&npi, &ci),
                };
                let step = h.mul(&poch_vec(c)).mul_t_pow(sq_sum(c) - pair);
                let add = cur.mul(&step);
                states.entry((np, c.clone())).or_insert_with(CycFrac::zero).add_assign(&add);
            }
        }
        out.insert(p.clone(), total);
    }
    out
}

/// `sum X(t) t^{-w . nu_1} z^{|nu|}` via chains of columns.
fn chain_sum(q: &Quiver, w: &[i64], bx: &DimVector, weights: &BTreeMap<DimVector, CycFrac>) -> BTreeMap<DimVector, CycFrac> {
    // g[(m, d)]: chains whose top column is m and whose columns add up to d.
    let pts = bx.points_below();
    let mut g: HashMap<(DimVector, DimVector), CycFrac> = HashMap::new();
    let zero = DimVector::zero(bx.len());
    g.insert((zero.clone(), zero.clone()), CycFrac::one());
    let mut out = BTreeMap::new();
    for d in &pts {
        let mut coeff = CycFrac::zero();
        if d.is_zero() {
            coeff = CycFrac::one();
        }
        for m in d.points_below().iter().filter(|m| !m.is_zero()) {
            let rest = d.checked_sub(m).unwrap();
            let mut acc = CycFrac::zero();
            for m2 in m.points_below() {
                if !m2.le(&rest) {
                    continue;
                }
                let Some(prev) = g.get(&(m2.clone(), rest.clone())) else { continue };
                let wt = &weights[&m.checked_sub(&m2).unwrap()];
                acc.add_assign(&prev.mul(wt));
            }
            if acc.is_zero() {
                continue;
            }
            let acc = acc.mul_t_pow(q.euler_sq(m));
            coeff.add_assign(&acc.clone().mul_t_pow(-m.dot(w)));
            g.insert((m.clone(), d.clone()), acc);
        }
        if !coeff.is_zero() {
            out.insert(d.clone(), coeff);
        }
    }
    out
}

fn check_w(q: &Quiver, w: &[i64], bx: &DimVector) -> Result<()> {
    q.check_dim(bx)?;
    if w.len() != q.n() {
        return Err(Error::Shape(format!("framing vector has {} entries, quiver has {} vertices", w.len(), q.n())));
    }
    Ok(())
}

fn to_series(bx: &DimVector, m: BTreeMap<DimVector, CycFrac>) -> MultiSeries {
    MultiSeries::from_terms(bx.clone(), m.into_iter().map(|(v, c)| (v, c.invert_var().to_ratfun())))
}

/// `r(w) = sum X(t^{-1}) t^{w . nu_1} z^{|nu|}` truncated to `box`.
pub fn r_series(q: &Quiver, w: &[i64], flavor: Flavor, bx: &DimVector, opts: HuaOptions) -> Result<MultiSeries> {
    check_w(q, w, bx)?;
    let weights = column_weights(q, flavor, bx, opts);
    Ok(to_series(bx, chain_sum(q, w, bx, &weights)))
}

/// Same series as [`r_series`], summed one index at a time.
pub fn r_series_enumerated(q: &Quiver, w: &[i64], flavor: Flavor, bx: &DimVector, opts: HuaOptions) -> Result<MultiSeries> {
    check_w(q, w, bx)?;
    let items: Vec<(HuaIndex, DimVector, DimVector)> = match flavor {
        Flavor::Nil0 => enum_ipartition_seqs(bx)
            .into_iter()
            .map(|s| {
                let (size, top) = (s.size(), s.column(1));
                (HuaIndex::Sequence(s), size, top)
            })
            .collect(),
        _ => enum_ipartitions(bx)
            .into_iter()
            .map(|p| {
                let (size, top) = (p.size(), p.column(1));
                (HuaIndex::Partition(p), size, top)
            })
            .collect(),
    };
    let partial: Vec<(DimVector, CycFrac)> = items
        .par_iter()
        .map(|(idx, size, top)| {
            x_summand_cyc(q, flavor, idx, opts).map(|x| (size.clone(), x.mul_t_pow(-top.dot(w))))
        })
        .collect::<Result<_>>()?;
    let mut acc: BTreeMap<DimVector, CycFrac> = BTreeMap::new();
    for (v, x) in partial {
        acc.entry(v).or_insert_with(CycFrac::zero).add_assign(&x);
    }
    Ok(to_series(bx, acc))
}

/// Kac polynomials of one flavor on every dimension vector of a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KacTable {
    pub quiver: Quiver,
    pub flavor: Flavor,
    pub bound: DimVector,
    /// Nonzero `v` only; the zero vector is never stored.
    pub polys: BTreeMap<DimVector, IntPoly>,
    /// Dimension vectors whose polynomial has a negative coefficient.
    pub negative_coefficients: Vec<DimVector>,
}

impl KacTable {
    pub fn get(&self, v: &DimVector) -> IntPoly {
        self.polys.get(v).cloned().unwrap_or_else(IntPoly::zero)
    }

    /// `sum A_v z^v / (t - 1)` as a series.
    pub fn as_series_over_t_minus_1(&self) -> MultiSeries {
        let tm1 = RatFun::from_poly(IntPoly::from_i64(&[-1, 1]));
        MultiSeries::from_terms(
            self.bound.clone(),
            self.polys.iter().map(|(v, a)| (v.clone(), RatFun::from_poly(a.clone()).checked_div(&tm1).unwrap())),
        )
    }
}

/// `A_v = (t - 1) * [z^v] Log r(0)` for every nonzero `v <= box`.
pub fn kac_table(q: &Quiver, flavor: Flavor, bx: &DimVector, opts: HuaOptions) -> Result<KacTable> {
    let r = r_series(q, &vec![0; q.n()], flavor, bx, opts)?;
    kac_from_r(q, flavor, bx, &r)
}

pub(crate) fn kac_from_r(q: &Quiver, flavor: Flavor, bx: &DimVector, r: &MultiSeries) -> Result<KacTable> {
    let lg = r.pleth_log()?;
    let tm1 = RatFun::from_poly(IntPoly::from_i64(&[-1, 1]));
    let mut polys = BTreeMap::new();
    let mut negative = Vec::new();
    for v in bx.points_below().into_iter().skip(1) {
        let c = &lg.coeff(&v) * &tm1;
        let p = c.as_polynomial().map_err(|e| Error::Recognition { v: v.0.clone(), detail: e.to_string() })?;
        if flavor == Flavor::Plain && !p.is_zero() {
            let want = 1 - q.euler_sq(&v);
            let deg = p.degree().unwrap() as i64;
            if deg != want || !p.lead().unwrap().is_one() {
                return Err(Error::Recognition {
                    v: v.0.clone(),
                    detail: format!("expected a monic polynomial of degree {want}, got {p}"),
                });
            }
        }
        if p.coeffs().iter().any(|x| x.is_negative()) {
            negative.push(v.clone());
        }
        if !p.is_zero() {
            polys.insert(v, p);
        }
    }
    Ok(KacTable { quiver: q.clone(), flavor, bound: bx.clone(), polys, negative_coefficients: negative })
}

/// Closed-form stack volume of the flavored representations of dimension `v`
/// over a field with `qv` elements: `qv^{-<v,v>} W(v)(1/qv)`.
pub fn vol_rep_closed(q: &Quiver, flavor: Flavor, v: &DimVector, qv: &BigRational, opts: HuaOptions) -> Result<BigRational> {
    q.check_dim(v)?;
    let w = column_weights(q, flavor, v, opts);
    vol_from_weight(q, v, &w[v], qv)
}

fn vol_from_weight(q: &Quiver, v: &DimVector, w: &CycFrac, qv: &BigRational) -> Result<BigRational> {
    if qv.is_zero() {
        return Err(Error::Pole { at: "0".into(), denominator: "t".into() });
    }
    let inv = qv.recip();
    let val = w.to_ratfun().eval(&inv)?;
    Ok(val * pow_rat(qv, -q.euler_sq(v)))
}

pub(crate) fn pow_rat(x: &BigRational, e: i64) -> BigRational {
    let mut r = BigRational::one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        r *= &base;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeRow {
    pub v: DimVector,
    pub stratified: BigRational,
    pub from_kac: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeReport {
    pub flavor: Flavor,
    pub q: BigRational,
    pub rows: Vec<VolumeRow>,
}

impl VolumeReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.stratified == r.from_kac)
    }

    pub fn mismatches(&self) -> Vec<DimVector> {
        self.rows.iter().filter(|r| r.stratified != r.from_kac).map(|r| r.v.clone()).collect()
    }
}

/// Tuples `(v_1, ..., v_s)` with `v_s != 0` and `sum_i i v_i = v`.
fn weighted_tuples(v: &DimVector) -> Vec<Vec<DimVector>> {
    fn rec(rest: &DimVector, i: u32, cur: &mut Vec<DimVector>, out: &mut Vec<Vec<DimVector>>) {
        if rest.is_zero() {
            if cur.last().is_none_or(|x| !x.is_zero()) {
                out.push(cur.clone());
            }
            return;
        }
        if rest.0.iter().all(|&x| x < i) {
            return;
        }
        let cap = DimVector(rest.0.iter().map(|&x| x / i).collect());
        for c in cap.points_below() {
            let next = rest.checked_sub(&c.scale(i)).unwrap();
            cur.push(c);
            rec(&next, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(v, 1, &mut Vec::new(), &mut out);
    out
}

/// Compares the stack volume of pairs (representation, nilpotent
/// endomorphism), assembled over Jordan types from closed-form volumes,
/// with `Exp(sum A_v z^v / (t-1))` at `t = qv`.
pub fn nilpair_volume_check(q: &Quiver, flavor: Flavor, bx: &DimVector, qv: &BigRational, opts: HuaOptions) -> Result<VolumeReport> {
    q.check_dim(bx)?;
    let table = kac_table(q, flavor, bx, opts)?;
    let rhs = table.as_series_over_t_minus_1().pleth_exp()?;
    let weights = column_weights(q, flavor, bx, opts);
    let mut vols: HashMap<DimVector, BigRational> = HashMap::new();
    for u in bx.points_below() {
        vols.insert(u.clone(), vol_from_weight(q, &u, &weights[&u], qv)?);
    }
    let mut rows = Vec::new();
    for v in bx.points_below() {
        let mut lhs = BigRational::zero();
        for tuple in weighted_tuples(&v) {
            let o = o_weight(q, &tuple)?;
            let mut term = pow_rat(qv, o);
            for u in &tuple {
                term *= &vols[u];
            }
            lhs += term;
        }
        let r = rhs.coeff(&v).eval(qv)?;
        rows.push(VolumeRow { v, stratified: lhs, from_kac: r });
    }
    Ok(VolumeReport { flavor, q: qv.clone(), rows })
}

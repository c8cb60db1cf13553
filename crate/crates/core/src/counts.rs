//! Counting series and polynomials derived from the Kac polynomials:
//! nilpotent-variety point counts, moment-map fibers, Nakajima varieties,
//! the Grassmannian stratification of their Lagrangian subvarieties and the
//! restriction to a full subquiver.

use crate::error::{Error, Result};
use crate::hua::{kac_table, pow_rat, r_series, Flavor, HuaOptions, KacTable};
use crate::quiver::{as_i64, Quiver};
use crate::symcore::{rat, DimVector, IntPoly, MultiSeries, RatFun};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountKind {
    /// `sum |Lambda^b_v| q^{<v,v>} / |G_v| z^v` for a flavor.
    Lambda(Flavor),
    /// `sum |mu_v^{-1}(0)| q^{<v,v>} / |G_v| z^v`.
    MuFiber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    pub quiver: Quiver,
    pub kind: CountKind,
    pub series: MultiSeries,
}

impl CountSeries {
    /// `[z^v]` at `t = q`. The coefficients are only meaningful away from
    /// `t = 1`, so `q = 1` is rejected even when the value would be finite.
    pub fn eval_coeff(&self, v: &DimVector, qv: &BigRational) -> Result<BigRational> {
        if qv.is_one() {
            return Err(Error::Pole { at: "1".into(), denominator: "1 - t".into() });
        }
        self.series.coeff(v).eval(qv)
    }

    /// The point count `coeff * |G_v| * q^{-<v,v>}`.
    pub fn point_count(&self, v: &DimVector, qv: &BigRational) -> Result<BigRational> {
        Ok(self.eval_coeff(v, qv)? * group_order(v, qv) * pow_rat(qv, -self.quiver.euler_sq(v)))
    }
}

/// `|G_v(F_q)| = prod_i prod_{k<v_i} (q^{v_i} - q^k)`.
pub fn group_order(v: &DimVector, qv: &BigRational) -> BigRational {
    let mut r = BigRational::one();
    for &n in &v.0 {
        let top = pow_rat(qv, n as i64);
        for k in 0..n {
            r *= &top - pow_rat(qv, k as i64);
        }
    }
    r
}

fn one_minus_inv_t() -> RatFun {
    // 1 - t^{-1}
    &RatFun::one() - &RatFun::t_pow(-1)
}

/// `Exp(1/(1 - t^{-1}) sum A_v(t^{-1}) z^v)` from a table.
pub fn p_series_from_table(table: &KacTable) -> Result<CountSeries> {
    let d = one_minus_inv_t();
    let inner = MultiSeries::from_terms(
        table.bound.clone(),
        table.polys.iter().map(|(v, a)| (v.clone(), RatFun::from_poly(a.clone()).invert_var().checked_div(&d).unwrap())),
    );
    Ok(CountSeries { quiver: table.quiver.clone(), kind: CountKind::Lambda(table.flavor), series: inner.pleth_exp()? })
}

pub fn p_series(q: &Quiver, flavor: Flavor, bx: &DimVector, opts: HuaOptions) -> Result<CountSeries> {
    p_series_from_table(&kac_table(q, flavor, bx, opts)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    /// Coefficients where the identity fails, with the offending value.
    pub failures: Vec<(DimVector, String)>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn compare(a: &MultiSeries, b: &MultiSeries) -> IdentityReport {
        let pts = a.bound().points_below();
        let failures = pts
            .iter()
            .filter_map(|v| {
                let (x, y) = (a.coeff(v), b.coeff(v));
                (x != y).then(|| (v.clone(), format!("{x} != {y}")))
            })
            .collect();
        IdentityReport { checked: pts.len(), failures }
    }
}

/// Checks `P^b(t, z) * r^b(0, t^{-1}, z) = 1` inside the box.
pub fn reciprocal_identity_check(q: &Quiver, flavor: Flavor, bx: &DimVector, opts: HuaOptions) -> Result<IdentityReport> {
    let p = p_series(q, flavor, bx, opts)?;
    let r = r_series(q, &vec![0; q.n()], flavor, bx, opts)?.invert_var();
    let prod = p.series.mul(&r)?;
    Ok(IdentityReport::compare(&prod, &MultiSeries::one(bx.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub value: BigRational,
    /// False signals either a bug or a field too small for the count to be
    /// polynomial; callers report it as a finding.
    pub integral: bool,
}

impl Prediction {
    fn new(value: BigRational) -> Self {
        let integral = value.is_integer();
        Prediction { value, integral }
    }
}

/// Predicted `|Lambda^b_v(F_q)|`.
pub fn predicted_lambda_count(q: &Quiver, flavor: Flavor, v: &DimVector, qv: &BigRational, opts: HuaOptions) -> Result<Prediction> {
    q.check_dim(v)?;
    Ok(Prediction::new(p_series(q, flavor, v, opts)?.point_count(v, qv)?))
}

/// `Exp(t/(t-1) sum A_v(t) z^v)` with the plain Kac polynomials.
pub fn mu_fiber_series(q: &Quiver, bx: &DimVector, opts: HuaOptions) -> Result<CountSeries> {
    let table = kac_table(q, Flavor::Plain, bx, opts)?;
    let f = RatFun::t_pow(1).checked_div(&RatFun::from_poly(IntPoly::from_i64(&[-1, 1]))).unwrap();
    let inner = MultiSeries::from_terms(bx.clone(), table.polys.iter().map(|(v, a)| (v.clone(), &RatFun::from_poly(a.clone()) * &f)));
    Ok(CountSeries { quiver: q.clone(), kind: CountKind::MuFiber, series: inner.pleth_exp()? })
}

/// Predicted `|mu_v^{-1}(0)(F_q)|`.
pub fn predicted_mu_fiber_count(q: &Quiver, v: &DimVector, qv: &BigRational, opts: HuaOptions) -> Result<Prediction> {
    q.check_dim(v)?;
    Ok(Prediction::new(mu_fiber_series(q, v, opts)?.point_count(v, qv)?))
}

/// Gaussian binomial `[n choose k]_t` as a polynomial.
pub fn gauss_binomial(n: u32, k: u32) -> IntPoly {
    if k > n {
        return IntPoly::zero();
    }
    // Pascal rule [n,k] = [n-1,k-1] + t^k [n-1,k].
    let mut row = vec![IntPoly::one()];
    for m in 1..=n {
        let mut next = vec![IntPoly::one(); m as usize + 1];
        for j in 1..m as usize {
            next[j] = &row[j - 1] + &row[j].shift(j);
        }
        row = next;
    }
    row[k as usize].clone()
}

/// `|Gr^w_{w'}|` as a polynomial in `t`: the product of Gaussian binomials.
pub fn gauss_grassmannian(w: &DimVector, wp: &DimVector) -> Result<RatFun> {
    if w.len() != wp.len() || !wp.le(w) {
        return Err(Error::Invalid(format!("{wp} is not below {w}")));
    }
    let p = w.0.iter().zip(&wp.0).fold(IntPoly::one(), |acc, (&a, &b)| &acc * &gauss_binomial(a, b));
    Ok(RatFun::from_poly(p))
}

/// `sum_{w'} (-1)^{w'} t^{w'(w'-1)/2 - a w'} [w choose w']_t`, which vanishes
/// for `0 <= a < w` and equals `prod_{k=1}^w (1 - t^{-k})` for `a = w`.
pub fn qbinomial_alternating_sum(w: u32, a: u32) -> RatFun {
    let mut s = RatFun::zero();
    for wp in 0..=w {
        let e = (wp as i64) * (wp as i64 - 1) / 2 - (a as i64) * wp as i64;
        let mut term = RatFun::from_poly(gauss_binomial(w, wp)).mul_t_pow(e);
        if wp % 2 == 1 {
            term = -term;
        }
        s = &s + &term;
    }
    s
}

/// Checks the alternating-sum identity for every `0 <= a <= w <= wmax`.
pub fn qbinomial_identity_check(wmax: u32) -> Vec<(u32, u32)> {
    let mut bad = Vec::new();
    for w in 0..=wmax {
        let mut tail = RatFun::one();
        for k in 1..=w {
            tail = &tail * &(&RatFun::one() - &RatFun::t_pow(-(k as i64)));
        }
        for a in 0..=w {
            let want = if a == w { tail.clone() } else { RatFun::zero() };
            if qbinomial_alternating_sum(w, a) != want {
                bad.push((w, a));
            }
        }
    }
    bad
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NakajimaVariant {
    M,
    M0,
    M1,
    L,
    L0,
    L1,
}

impl NakajimaVariant {
    pub const ALL: [NakajimaVariant; 6] =
        [NakajimaVariant::M, NakajimaVariant::M0, NakajimaVariant::M1, NakajimaVariant::L, NakajimaVariant::L0, NakajimaVariant::L1];

    pub fn flavor(self) -> Flavor {
        match self {
            NakajimaVariant::M | NakajimaVariant::L => Flavor::Plain,
            NakajimaVariant::M0 | NakajimaVariant::L0 => Flavor::Nil0,
            NakajimaVariant::M1 | NakajimaVariant::L1 => Flavor::Nil1,
        }
    }

    pub fn is_lagrangian(self) -> bool {
        matches!(self, NakajimaVariant::L | NakajimaVariant::L0 | NakajimaVariant::L1)
    }

    /// The partner variant across Poincare duality.
    pub fn dual(self) -> NakajimaVariant {
        match self {
            NakajimaVariant::M => NakajimaVariant::L,
            NakajimaVariant::M0 => NakajimaVariant::L0,
            NakajimaVariant::M1 => NakajimaVariant::L1,
            NakajimaVariant::L => NakajimaVariant::M,
            NakajimaVariant::L0 => NakajimaVariant::M0,
            NakajimaVariant::L1 => NakajimaVariant::M1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NakajimaVariant::M => "M",
            NakajimaVariant::M0 => "M0",
            NakajimaVariant::M1 => "M1",
            NakajimaVariant::L => "L",
            NakajimaVariant::L0 => "L0",
            NakajimaVariant::L1 => "L1",
        }
    }
}

impl fmt::Display for NakajimaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NakajimaVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NakajimaVariant::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown variety variant {s:?} (expected M, M0, M1, L, L0 or L1)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakajimaPoly {
    pub v: DimVector,
    pub w: DimVector,
    pub variant: NakajimaVariant,
    pub poly: IntPoly,
    pub half_dim: i64,
}

/// `d(v,w) = v.w - (v,v)/2`.
pub fn half_dim(q: &Quiver, v: &DimVector, w: &DimVector) -> Result<i64> {
    q.check_dim(v)?;
    q.check_dim(w)?;
    let vv = q.sym(&as_i64(v), &as_i64(v));
    if vv % 2 != 0 {
        return Err(Error::Consistency(format!("(v,v) = {vv} is odd for v = {v}")));
    }
    Ok(v.dot(&as_i64(w)) - vv / 2)
}

/// Counting polynomials of one variant for every `v <= box` at framing `w`.
pub fn nakajima_polys(
    q: &Quiver,
    w: &DimVector,
    variant: NakajimaVariant,
    bx: &DimVector,
    opts: HuaOptions,
) -> Result<BTreeMap<DimVector, NakajimaPoly>> {
    q.check_dim(w)?;
    q.check_dim(bx)?;
    let f = variant.flavor();
    let rw = r_series(q, &as_i64(w), f, bx, opts)?;
    let r0 = r_series(q, &vec![0; q.n()], f, bx, opts)?;
    let mut ratio = rw.mul(&r0.inverse()?)?;
    if variant.is_lagrangian() {
        ratio = ratio.invert_var();
    }
    let mut out = BTreeMap::new();
    for v in bx.points_below() {
        let d = half_dim(q, &v, w)?;
        let c = ratio.coeff(&v).mul_t_pow(d);
        let poly = c.as_polynomial().map_err(|e| Error::Recognition { v: v.0.clone(), detail: format!("{variant}: {e}") })?;
        if poly.coeffs().iter().any(|x| x.is_negative()) {
            return Err(Error::Consistency(format!("{variant}({v},{w}) has a negative coefficient: {poly}")));
        }
        out.insert(v.clone(), NakajimaPoly { v, w: w.clone(), variant, poly, half_dim: d });
    }
    Ok(out)
}

pub fn nakajima_poly(q: &Quiver, v: &DimVector, w: &DimVector, variant: NakajimaVariant, opts: HuaOptions) -> Result<NakajimaPoly> {
    let mut all = nakajima_polys(q, w, variant, v, opts)?;
    Ok(all.remove(v).expect("v is inside its own box"))
}

/// `t^{2d} P(t^{-1})`, the dual polynomial.
pub fn dual_poly(p: &IntPoly, d: i64) -> Result<IntPoly> {
    RatFun::from_poly(p.clone()).invert_var().mul_t_pow(2 * d).as_polynomial()
}

/// Checks `P(L-variant)(t) = t^{2d} P(M-variant)(t^{-1})` for every `v <= box`.
pub fn nakajima_duality_check(q: &Quiver, w: &DimVector, bx: &DimVector, opts: HuaOptions) -> Result<Vec<(DimVector, NakajimaVariant)>> {
    let mut bad = Vec::new();
    for m in [NakajimaVariant::M, NakajimaVariant::M0, NakajimaVariant::M1] {
        let ms = nakajima_polys(q, w, m, bx, opts)?;
        let ls = nakajima_polys(q, w, m.dual(), bx, opts)?;
        for (v, pm) in &ms {
            if dual_poly(&pm.poly, pm.half_dim)? != ls[v].poly {
                bad.push((v.clone(), m));
            }
        }
    }
    Ok(bad)
}

/// `u(w,w') = sum_i (w_i - w'_i)(w_i - w'_i - 1)/2`.
pub fn u_weight(w: &DimVector, wp: &DimVector) -> Result<i64> {
    if w.len() != wp.len() || !wp.le(w) {
        return Err(Error::Invalid(format!("{wp} is not below {w}")));
    }
    Ok(w.0.iter().zip(&wp.0).map(|(&a, &b)| (a - b) as i64 * (a as i64 - b as i64 - 1) / 2).sum())
}

fn l_count(q: &Quiver, v: &DimVector, w: &DimVector, qv: &BigRational, opts: HuaOptions) -> Result<BigRational> {
    Ok(nakajima_poly(q, v, w, NakajimaVariant::L, opts)?.poly.eval(qv))
}

/// `|L(v,w)_{w'}(F_q)| = |Gr^w_{w'}| * |L(v,w')_{w'}|`, with the second factor
/// obtained by Mobius inversion over the Grassmannian stratification.
pub fn l_strata_count(q: &Quiver, v: &DimVector, w: &DimVector, wp: &DimVector, qv: &BigRational, opts: HuaOptions) -> Result<BigRational> {
    q.check_dim(v)?;
    let gr = gauss_grassmannian(w, wp)?.eval(qv)?;
    let mut inner = BigRational::zero();
    for wpp in wp.points_below() {
        let sign = if (wp.total() - wpp.total()) % 2 == 0 { 1 } else { -1 };
        let term = pow_rat(qv, u_weight(wp, &wpp)?) * gauss_grassmannian(wp, &wpp)?.eval(qv)? * l_count(q, v, &wpp, qv, opts)?;
        inner += term * rat(sign);
    }
    Ok(gr * inner)
}

/// `|Lambda_v(F_q)|` through the stratification with `w = w' = v`.
pub fn lambda_via_strata(q: &Quiver, v: &DimVector, qv: &BigRational, opts: HuaOptions) -> Result<BigRational> {
    l_strata_count(q, v, v, v, qv, opts)
}

/// Checks `sum_{w' <= w} |L(v,w)_{w'}| = |L(v,w)|`.
pub fn strata_resummation_check(q: &Quiver, v: &DimVector, w: &DimVector, qv: &BigRational, opts: HuaOptions) -> Result<bool> {
    let mut s = BigRational::zero();
    for wp in w.points_below() {
        s += l_strata_count(q, v, w, &wp, qv, opts)?;
    }
    Ok(s == l_count(q, v, w, qv, opts)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalReport {
    /// `v` supported on `J` where the nilpotent Kac polynomials of the
    /// quiver and of the subquiver differ.
    pub restriction_failures: Vec<DimVector>,
    pub factorization: IdentityReport,
}

impl CrystalReport {
    pub fn holds(&self) -> bool {
        self.restriction_failures.is_empty() && self.factorization.holds()
    }
}

/// Embeds a series over the subquiver on `j` into the variables of `q`.
fn embed(series: &MultiSeries, j: &[usize], bx: &DimVector) -> MultiSeries {
    MultiSeries::from_terms(
        bx.clone(),
        series.terms().map(|(u, c)| {
            let mut v = vec![0u32; bx.len()];
            for (a, &i) in j.iter().enumerate() {
                v[i] = u.0[a];
            }
            (DimVector(v), c.clone())
        }),
    )
}

/// Restriction to the full subquiver on `J` and the factorization
/// `P^0_Q = P^0_{Q_J} * Exp(1/(1-t^{-1}) sum_{v not in N^J} A^0_v(t^{-1}) z^v)`.
pub fn crystal_factorization_check(q: &Quiver, j: &[usize], bx: &DimVector, opts: HuaOptions) -> Result<CrystalReport> {
    q.check_dim(bx)?;
    let mut j: Vec<usize> = j.to_vec();
    j.sort_unstable();
    j.dedup();
    let sub = q.subquiver(&j)?;
    let full = kac_table(q, Flavor::Nil0, bx, opts)?;
    let sub_box = DimVector(j.iter().map(|&i| bx.0[i]).collect());
    let sub_table = kac_table(&sub, Flavor::Nil0, &sub_box, opts)?;
    let on_j = |v: &DimVector| v.0.iter().enumerate().all(|(i, &x)| x == 0 || j.contains(&i));

    let mut restriction_failures = Vec::new();
    for u in sub_box.points_below().into_iter().skip(1) {
        let mut v = vec![0u32; q.n()];
        for (a, &i) in j.iter().enumerate() {
            v[i] = u.0[a];
        }
        let v = DimVector(v);
        if full.get(&v) != sub_table.get(&u) {
            restriction_failures.push(v);
        }
    }

    let lhs = p_series_from_table(&full)?.series;
    let sub_p = embed(&p_series_from_table(&sub_table)?.series, &j, bx);
    let d = one_minus_inv_t();
    let rest = MultiSeries::from_terms(
        bx.clone(),
        full.polys
            .iter()
            .filter(|(v, _)| !on_j(v))
            .map(|(v, a)| (v.clone(), RatFun::from_poly(a.clone()).invert_var().checked_div(&d).unwrap())),
    )
    .pleth_exp()?;
    let rhs = sub_p.mul(&rest)?;
    Ok(CrystalReport { restriction_failures, factorization: IdentityReport::compare(&lhs, &rhs) })
}

/// `exp(sum_{l=1}^{depth} A(q^l) u^l / l)` up to `u^depth`.
pub fn zeta_from_poly(a: &IntPoly, qv: &BigRational, depth: usize) -> Vec<BigRational> {
    let g: Vec<BigRational> = (0..=depth)
        .map(|l| if l == 0 { BigRational::zero() } else { a.eval(&pow_rat(qv, l as i64)) / BigRational::from_integer(BigInt::from(l)) })
        .collect();
    // n f_n = sum_{k=1}^n k g_k f_{n-k}
    let mut f = vec![BigRational::zero(); depth + 1];
    f[0] = BigRational::one();
    for n in 1..=depth {
        let mut s = BigRational::zero();
        for k in 1..=n {
            s += &g[k] * &f[n - k] * rat(k as i64);
        }
        f[n] = s / rat(n as i64);
    }
    f
}

/// Zeta series of the plain Kac polynomial `A_v` at `q`.
pub fn zeta_series(q: &Quiver, v: &DimVector, qv: &BigRational, depth: usize, opts: HuaOptions) -> Result<Vec<BigRational>> {
    q.check_dim(v)?;
    if v.is_zero() {
        return Err(Error::Invalid("the zeta series needs a nonzero dimension vector".into()));
    }
    let a = kac_table(q, Flavor::Plain, v, opts)?.get(v);
    Ok(zeta_from_poly(&a, qv, depth))
}

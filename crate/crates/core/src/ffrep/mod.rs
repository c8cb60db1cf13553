//! Brute-force point counts over prime fields.
//!
//! Representations are enumerated exhaustively, with one simplification: the
//! matrix of the first arrow is only taken up to the action of `G_v`, and each
//! orbit representative is weighted by the orbit size. Every count computed
//! here is a `G_v`-invariant function, so the weighted sum is exact.

pub mod linalg;

use crate::counts::NakajimaVariant;
use crate::error::{Error, Result};
use crate::hua::Flavor;
use crate::quiver::Quiver;
use crate::symcore::DimVector;
use linalg::{all_subspaces, kernel_of_rows, Fp, Mat, Span};
use rayon::prelude::*;
use std::collections::HashSet;
use std::time::{Duration, Instant};

/// Default bound on the number of field-element tuples a count may visit.
pub const DEFAULT_CAP: u128 = 1 << 24;

/// Largest total dimension accepted by the exhaustive restricted-flag search.
pub const FLAG_SEARCH_MAX_DIM: usize = 4;

/// Largest algebra (as a set) scanned by [`radical_and_units`] by default.
pub const RADICAL_CAP: u128 = 1 << 12;

/// Conjugacy classes of a loop matrix are only computed below this many matrices.
const ORBIT_TABLE_MAX: u128 = 1 << 20;

/// `QKW_CAP` overrides [`DEFAULT_CAP`].
pub fn default_cap() -> u128 {
    std::env::var("QKW_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// A representation over `F_p`, optionally with matrices for the reversed
/// arrows of the doubled quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFRep {
    pub quiver: Quiver,
    pub v: DimVector,
    pub field: Fp,
    /// `x[h]` is `v[head] x v[tail]`.
    pub x: Vec<Mat>,
    /// `xs[h]` is `v[tail] x v[head]`.
    pub xs: Option<Vec<Mat>>,
}

impl FFRep {
    pub fn new(quiver: &Quiver, v: &DimVector, p: u32, x: Vec<Mat>, xs: Option<Vec<Mat>>) -> Result<Self> {
        quiver.check_dim(v)?;
        let field = Fp::new(p)?;
        let d = dims(v);
        let shape_err = |k: usize, what: &str| Error::Invalid(format!("matrix for {what} arrow #{k} has the wrong shape"));
        if x.len() != quiver.arrows().len() {
            return Err(Error::Invalid("one matrix per arrow expected".into()));
        }
        for (k, (&(s, t), m)) in quiver.arrows().iter().zip(&x).enumerate() {
            if m.rows != d[t] || m.cols != d[s] || m.d.iter().any(|&e| e as u32 >= p) {
                return Err(shape_err(k, "forward"));
            }
        }
        if let Some(xs) = &xs {
            if xs.len() != quiver.arrows().len() {
                return Err(Error::Invalid("one reversed matrix per arrow expected".into()));
            }
            for (k, (&(s, t), m)) in quiver.arrows().iter().zip(xs).enumerate() {
                if m.rows != d[s] || m.cols != d[t] || m.d.iter().any(|&e| e as u32 >= p) {
                    return Err(shape_err(k, "reversed"));
                }
            }
        }
        Ok(FFRep { quiver: quiver.clone(), v: v.clone(), field, x, xs })
    }

    pub fn zero(quiver: &Quiver, v: &DimVector, p: u32, doubled: bool) -> Result<Self> {
        let d = dims(v);
        let x = quiver.arrows().iter().map(|&(s, t)| Mat::zeros(d[t], d[s])).collect();
        let xs = doubled.then(|| quiver.arrows().iter().map(|&(s, t)| Mat::zeros(d[s], d[t])).collect());
        FFRep::new(quiver, v, p, x, xs)
    }

    fn frame(&self) -> Frame<'_> {
        Frame { f: self.field, dims: dims(&self.v), arrows: self.quiver.arrows() }
    }

    fn reversed(&self) -> Result<&[Mat]> {
        self.xs.as_deref().ok_or_else(|| Error::Invalid("representation carries no reversed-arrow matrices".into()))
    }
}

fn dims(v: &DimVector) -> Vec<usize> {
    v.0.iter().map(|&x| x as usize).collect()
}

/// A linear map `V_src -> V_dst` between vertex spaces.
type Edge<'a> = (usize, usize, &'a Mat);

struct Frame<'a> {
    f: Fp,
    dims: Vec<usize>,
    arrows: &'a [(usize, usize)],
}

type Graded = Vec<Span>;

impl Frame<'_> {
    fn forward<'m>(&self, x: &'m [Mat]) -> Vec<Edge<'m>> {
        self.arrows.iter().zip(x).map(|(&(s, t), m)| (s, t, m)).collect()
    }

    fn backward<'m>(&self, xs: &'m [Mat]) -> Vec<Edge<'m>> {
        self.arrows.iter().zip(xs).map(|(&(s, t), m)| (t, s, m)).collect()
    }

    fn full(&self) -> Graded {
        self.dims.iter().map(|&n| Span::full(n)).collect()
    }

    /// `sum_e e(k)`.
    fn image(&self, edges: &[Edge], k: &Graded) -> Graded {
        let mut out: Vec<Vec<Vec<u8>>> = self.dims.iter().map(|_| Vec::new()).collect();
        for &(s, t, m) in edges {
            for b in &k[s].basis {
                out[t].push(m.apply(b, self.f));
            }
        }
        out.into_iter().zip(&self.dims).map(|(vs, &n)| Span::from_vecs(n, vs, self.f)).collect()
    }

    /// Smallest graded subspace containing `k` and stable under `edges`.
    fn closure(&self, edges: &[Edge], mut k: Graded) -> Graded {
        if edges.is_empty() {
            return k;
        }
        loop {
            let img = self.image(edges, &k);
            let next: Graded = k.iter().zip(img).map(|(a, b)| a.join(b.basis, self.f)).collect();
            if next == k {
                return k;
            }
            k = next;
        }
    }

    fn contains(&self, big: &Graded, small: &Graded) -> bool {
        big.iter().zip(small).all(|(a, b)| a.contains_span(b, self.f))
    }

    /// Iterates `K -> closure_close(strict(K))` from the whole space and
    /// reports whether it reaches zero. The sequence is decreasing, so it
    /// either hits zero or becomes stationary.
    fn descends_to_zero(&self, strict: &[Edge], close: &[Edge]) -> bool {
        let mut k = self.full();
        loop {
            if k.iter().all(Span::is_zero) {
                return true;
            }
            let next = self.closure(close, self.image(strict, &k));
            if next == k {
                return false;
            }
            k = next;
        }
    }

    fn nilpotent(&self, x: &[Mat]) -> bool {
        self.descends_to_zero(&self.forward(x), &[])
    }

    fn one_nilpotent(&self, x: &[Mat]) -> bool {
        let loops: Vec<Edge> = self.forward(x).into_iter().filter(|e| e.0 == e.1).collect();
        self.descends_to_zero(&loops, &[])
    }

    fn semi_nilpotent(&self, x: &[Mat], xs: &[Mat]) -> bool {
        self.descends_to_zero(&self.forward(x), &self.backward(xs))
    }

    fn doubled_nilpotent(&self, x: &[Mat], xs: &[Mat]) -> bool {
        let mut all = self.forward(x);
        all.extend(self.backward(xs));
        self.descends_to_zero(&all, &[])
    }

    /// Restricted-flag search that only tries the smallest admissible next
    /// step at each vertex. Any admissible flag below a larger step can be
    /// intersected down to one below the smallest step, so this loses nothing.
    fn strongly_semi_nilpotent(&self, x: &[Mat], xs: &[Mat]) -> bool {
        let fwd = self.forward(x);
        let back = self.backward(xs);
        let mut dead = HashSet::new();
        self.ssn_minimal(&fwd, &back, self.full(), &mut dead)
    }

    fn ssn_minimal(&self, fwd: &[Edge], back: &[Edge], w: Graded, dead: &mut HashSet<Graded>) -> bool {
        if w.iter().all(Span::is_zero) {
            return true;
        }
        if dead.contains(&w) {
            return false;
        }
        let img = self.image(fwd, &w);
        for i in 0..w.len() {
            if w[i].is_zero() {
                continue;
            }
            let mut seed = w.clone();
            seed[i] = img[i].clone();
            let next = self.closure(back, seed);
            if next != w && self.ssn_minimal(fwd, back, next, dead) {
                return true;
            }
        }
        dead.insert(w);
        false
    }

    /// Restricted-flag search over every admissible subspace at every step.
    fn strongly_semi_nilpotent_exhaustive(&self, x: &[Mat], xs: &[Mat]) -> bool {
        let fwd = self.forward(x);
        let back = self.backward(xs);
        let subspaces: Vec<Vec<Span>> = self.dims.iter().map(|&n| all_subspaces(n, self.f)).collect();
        let mut dead = HashSet::new();
        self.ssn_all(&fwd, &back, &subspaces, self.full(), &mut dead)
    }

    fn ssn_all(&self, fwd: &[Edge], back: &[Edge], subs: &[Vec<Span>], w: Graded, dead: &mut HashSet<Graded>) -> bool {
        if w.iter().all(Span::is_zero) {
            return true;
        }
        if dead.contains(&w) {
            return false;
        }
        let img = self.image(fwd, &w);
        for i in 0..w.len() {
            for u in &subs[i] {
                if u.dim() >= w[i].dim() || !w[i].contains_span(u, self.f) {
                    continue;
                }
                let mut next = w.clone();
                next[i] = u.clone();
                if !self.contains(&next, &img) || !self.contains(&next, &self.image(back, &next)) {
                    continue;
                }
                if self.ssn_all(fwd, back, subs, next, dead) {
                    return true;
                }
            }
        }
        dead.insert(w);
        false
    }

    fn end_basis(&self, x: &[Mat]) -> Vec<Vec<u8>> {
        let offs = block_offsets(&self.dims);
        let n = *offs.last().unwrap();
        let f = self.f;
        let mut rows = Vec::new();
        for (&(s, t), m) in self.arrows.iter().zip(x) {
            let (ds, dt) = (self.dims[s], self.dims[t]);
            // (phi_t x - x phi_s)[r][c] = 0
            for r in 0..dt {
                for c in 0..ds {
                    let mut row = vec![0u8; n];
                    for k in 0..dt {
                        let e = &mut row[offs[t] + r * dt + k];
                        *e = f.add(*e, m.get(k, c));
                    }
                    for k in 0..ds {
                        let e = &mut row[offs[s] + k * ds + c];
                        *e = f.sub(*e, m.get(r, k));
                    }
                    rows.push(row);
                }
            }
        }
        kernel_of_rows(&mut rows, n, f)
    }

    /// Basis of the solutions `(x*, q)` of the moment-map equation for fixed
    /// `x` and `p`; `q` is only an unknown when `w_frame` is given.
    fn moment_kernel(&self, x: &[Mat], framing: Option<(&[usize], &[Mat])>) -> (Vec<Vec<u8>>, usize) {
        let f = self.f;
        let d = &self.dims;
        let eq_offs = block_offsets(d);
        let mut unk_offs = vec![0usize];
        for &(s, t) in self.arrows {
            unk_offs.push(unk_offs.last().unwrap() + d[s] * d[t]);
        }
        let q_offs: Vec<usize> = match framing {
            Some((w, _)) => {
                let mut o = vec![*unk_offs.last().unwrap()];
                for i in 0..d.len() {
                    o.push(o.last().unwrap() + d[i] * w[i]);
                }
                o
            }
            None => vec![*unk_offs.last().unwrap()],
        };
        let n = *q_offs.last().unwrap();
        let neq = *eq_offs.last().unwrap();
        let mut rows = vec![vec![0u8; n]; neq];
        for (h, (&(s, t), m)) in self.arrows.iter().zip(x).enumerate() {
            let (ds, dt) = (d[s], d[t]);
            // x*_h x_h at vertex s: unknown (r, b) of x*_h times x_h[b][c]
            for r in 0..ds {
                for c in 0..ds {
                    let row = &mut rows[eq_offs[s] + r * ds + c];
                    for b in 0..dt {
                        let e = &mut row[unk_offs[h] + r * dt + b];
                        *e = f.add(*e, m.get(b, c));
                    }
                }
            }
            // - x_h x*_h at vertex t: x_h[r][a] times unknown (a, c) of x*_h
            for r in 0..dt {
                for c in 0..dt {
                    let row = &mut rows[eq_offs[t] + r * dt + c];
                    for a in 0..ds {
                        let e = &mut row[unk_offs[h] + a * dt + c];
                        *e = f.sub(*e, m.get(r, a));
                    }
                }
            }
        }
        if let Some((w, p)) = framing {
            for i in 0..d.len() {
                for r in 0..d[i] {
                    for c in 0..d[i] {
                        let row = &mut rows[eq_offs[i] + r * d[i] + c];
                        for k in 0..w[i] {
                            let e = &mut row[q_offs[i] + r * w[i] + k];
                            *e = f.add(*e, p[i].get(k, c));
                        }
                    }
                }
            }
        }
        (kernel_of_rows(&mut rows, n, f), n)
    }

    /// Splits a flat solution vector into the reversed-arrow matrices and
    /// (when framed) the `q` matrices.
    fn split_solution(&self, sol: &[u8], w: Option<&[usize]>) -> (Vec<Mat>, Vec<Mat>) {
        let d = &self.dims;
        let mut pos = 0;
        let mut take = |rows: usize, cols: usize| {
            let m = Mat { rows, cols, d: sol[pos..pos + rows * cols].to_vec() };
            pos += rows * cols;
            m
        };
        let xs = self.arrows.iter().map(|&(s, t)| take(d[s], d[t])).collect();
        let q = match w {
            Some(w) => (0..d.len()).map(|i| take(d[i], w[i])).collect(),
            None => Vec::new(),
        };
        (xs, q)
    }

    /// No nonzero graded subspace inside `ker p` is stable under all maps.
    /// Tracks the annihilator of the largest such subspace.
    fn stable(&self, x: &[Mat], xs: &[Mat], p: &[Mat]) -> bool {
        let f = self.f;
        let d = &self.dims;
        let mut cons: Vec<Span> =
            (0..d.len()).map(|i| Span::from_vecs(d[i], (0..p[i].rows).map(|r| p[i].d[r * d[i]..(r + 1) * d[i]].to_vec()).collect(), f)).collect();
        let mut edges = self.forward(x);
        edges.extend(self.backward(xs));
        loop {
            let mut next = cons.clone();
            for &(s, t, m) in &edges {
                // A vector u at s survives only if m u satisfies the constraints at t.
                let pulled: Vec<Vec<u8>> = cons[t]
                    .basis
                    .iter()
                    .map(|c| (0..d[s]).map(|j| (0..d[t]).fold(0u8, |acc, k| f.add(acc, f.mul(c[k], m.get(k, j))))).collect())
                    .collect();
                next[s] = next[s].join(pulled, f);
            }
            if next == cons {
                return cons.iter().zip(d).all(|(c, &n)| c.dim() == n);
            }
            cons = next;
        }
    }

    /// Dimension of `{phi : phi commutes with every map, p phi = 0, phi q = 0}`.
    fn stabilizer_dim(&self, x: &[Mat], xs: &[Mat], p: &[Mat], q: &[Mat]) -> usize {
        let f = self.f;
        let d = &self.dims;
        let offs = block_offsets(d);
        let n = *offs.last().unwrap();
        let mut rows = Vec::new();
        let mut edges = self.forward(x);
        edges.extend(self.backward(xs));
        for &(s, t, m) in &edges {
            for r in 0..d[t] {
                for c in 0..d[s] {
                    let mut row = vec![0u8; n];
                    for k in 0..d[t] {
                        let e = &mut row[offs[t] + r * d[t] + k];
                        *e = f.add(*e, m.get(k, c));
                    }
                    for k in 0..d[s] {
                        let e = &mut row[offs[s] + k * d[s] + c];
                        *e = f.sub(*e, m.get(r, k));
                    }
                    rows.push(row);
                }
            }
        }
        for i in 0..d.len() {
            // (p_i phi_i)[r][c] = sum_k p[r][k] phi[k][c]
            for r in 0..p[i].rows {
                for c in 0..d[i] {
                    let mut row = vec![0u8; n];
                    for k in 0..d[i] {
                        row[offs[i] + k * d[i] + c] = p[i].get(r, k);
                    }
                    rows.push(row);
                }
            }
            // (phi_i q_i)[r][c] = sum_k phi[r][k] q[k][c]
            if let Some(qi) = q.get(i) {
                for r in 0..d[i] {
                    for c in 0..qi.cols {
                        let mut row = vec![0u8; n];
                        for k in 0..d[i] {
                            row[offs[i] + r * d[i] + k] = qi.get(k, c);
                        }
                        rows.push(row);
                    }
                }
            }
        }
        kernel_of_rows(&mut rows, n, f).len()
    }
}

fn block_offsets(d: &[usize]) -> Vec<usize> {
    let mut o = vec![0];
    for &n in d {
        o.push(o.last().unwrap() + n * n);
    }
    o
}

pub fn is_nilpotent_rep(x: &FFRep) -> bool {
    x.frame().nilpotent(&x.x)
}

pub fn is_one_nilpotent(x: &FFRep) -> bool {
    x.frame().one_nilpotent(&x.x)
}

pub fn is_semi_nilpotent(x: &FFRep) -> Result<bool> {
    Ok(x.frame().semi_nilpotent(&x.x, x.reversed()?))
}

/// Nilpotency of the doubled representation `(x, x*)`.
pub fn is_doubled_nilpotent(x: &FFRep) -> Result<bool> {
    Ok(x.frame().doubled_nilpotent(&x.x, x.reversed()?))
}

/// Exhaustive restricted-flag search; refuses total dimension above
/// [`FLAG_SEARCH_MAX_DIM`].
pub fn is_strongly_semi_nilpotent(x: &FFRep) -> Result<bool> {
    let total = x.v.total() as usize;
    if total > FLAG_SEARCH_MAX_DIM {
        return Err(Error::Capacity(format!(
            "restricted-flag search is limited to total dimension {FLAG_SEARCH_MAX_DIM}, got {total}"
        )));
    }
    Ok(x.frame().strongly_semi_nilpotent_exhaustive(&x.x, x.reversed()?))
}

/// Same predicate as [`is_strongly_semi_nilpotent`], searching only minimal
/// steps; no dimension limit.
pub fn is_strongly_semi_nilpotent_minimal(x: &FFRep) -> Result<bool> {
    Ok(x.frame().strongly_semi_nilpotent(&x.x, x.reversed()?))
}

/// A subalgebra of `prod_i M_{d_i}(F_p)` given by a basis of flattened
/// block-diagonal elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndAlgebra {
    pub field: Fp,
    pub dims: Vec<usize>,
    pub basis: Vec<Vec<u8>>,
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn block(&self, a: &[u8], i: usize) -> Mat {
        let offs = block_offsets(&self.dims);
        Mat { rows: self.dims[i], cols: self.dims[i], d: a[offs[i]..offs[i + 1]].to_vec() }
    }

    fn flat_len(&self) -> usize {
        *block_offsets(&self.dims).last().unwrap()
    }

    pub fn one(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.flat_len());
        for &n in &self.dims {
            out.extend(Mat::identity(n).d);
        }
        out
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(a.len());
        for i in 0..self.dims.len() {
            out.extend(self.block(a, i).mul(&self.block(b, i), self.field).d);
        }
        out
    }

    pub fn sub(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    pub fn is_unit(&self, a: &[u8]) -> bool {
        (0..self.dims.len()).all(|i| self.block(a, i).is_invertible(self.field))
    }

    /// Every element, as combinations of the basis.
    fn elements(&self) -> Vec<Vec<u8>> {
        let f = self.field;
        let mut out = vec![vec![0u8; self.flat_len()]];
        for b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * f.p() as usize);
            for e in &out {
                for c in 0..f.p() as u8 {
                    next.push(e.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect());
                }
            }
            out = next;
        }
        out
    }
}

pub fn end_algebra(x: &FFRep) -> EndAlgebra {
    let fr = x.frame();
    EndAlgebra { field: x.field, basis: fr.end_basis(&x.x), dims: fr.dims }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadicalInfo {
    pub radical_dim: usize,
    pub units: u128,
}

/// Jacobson radical `{a : 1 - b a is a unit for all b}` and the number of
/// units, both by scanning every element.
pub fn radical_and_units(a: &EndAlgebra, cap: u128) -> Result<RadicalInfo> {
    let size = checked_pow(a.field.p(), a.dim())?;
    if size > cap {
        return Err(Error::Capacity(format!("algebra of dimension {} has {size} elements, above the cap {cap}", a.dim())));
    }
    let elems = a.elements();
    let one = a.one();
    let units: Vec<bool> = elems.iter().map(|e| a.is_unit(e)).collect();
    let mut rad = 0u128;
    for x in &elems {
        if elems.iter().all(|b| a.is_unit(&a.sub(&one, &a.mul(b, x)))) {
            rad += 1;
        }
    }
    let mut radical_dim = 0;
    let mut r = rad;
    while r > 1 {
        if r % a.field.p() as u128 != 0 {
            return Err(Error::Consistency(format!("radical has {rad} elements, not a power of {}", a.field.p())));
        }
        r /= a.field.p() as u128;
        radical_dim += 1;
    }
    Ok(RadicalInfo { radical_dim, units: units.iter().filter(|&&u| u).count() as u128 })
}

/// Tests `A / rad A = F_p` without scanning: every basis element must be a
/// scalar plus a nilpotent, and the algebra generated by those nilpotent
/// parts must be nilpotent.
pub fn is_abs_indecomposable(a: &EndAlgebra) -> bool {
    let f = a.field;
    let total: usize = a.dims.iter().sum();
    if total == 0 || a.dim() == 0 {
        return false;
    }
    let one = a.one();
    let mut gens = Vec::new();
    for b in &a.basis {
        let lam = (0..f.p() as u8).find(|&l| {
            let shifted: Vec<u8> = b.iter().zip(&one).map(|(&x, &e)| f.sub(x, f.mul(l, e))).collect();
            (0..a.dims.len()).all(|i| a.block(&shifted, i).pow_is_zero(a.dims[i], f))
        });
        let Some(l) = lam else { return false };
        gens.push(b.iter().zip(&one).map(|(&x, &e)| f.sub(x, f.mul(l, e))).collect::<Vec<u8>>());
    }
    let n = a.flat_len();
    let mut s = Span::from_vecs(n, gens.clone(), f);
    for _ in 0..=total {
        if s.is_zero() {
            return true;
        }
        let prods: Vec<Vec<u8>> = s.basis.iter().flat_map(|x| gens.iter().map(|g| a.mul(x, g))).collect();
        s = Span::from_vecs(n, prods, f);
    }
    s.is_zero()
}

fn checked_pow(p: u32, e: usize) -> Result<u128> {
    (p as u128).checked_pow(e as u32).ok_or_else(|| Error::Capacity(format!("{p}^{e} does not fit in 128 bits")))
}

/// `|G_v(F_p)| = prod_i |GL_{v_i}(F_p)|`.
pub fn group_order(v: &DimVector, p: u32) -> Result<u128> {
    let mut out = 1u128;
    for &n in &v.0 {
        let pn = checked_pow(p, n as usize)?;
        for k in 0..n {
            out = out
                .checked_mul(pn - checked_pow(p, k as usize)?)
                .ok_or_else(|| Error::Capacity("group order does not fit in 128 bits".into()))?;
        }
    }
    Ok(out)
}

/// Number of `rows x cols` matrices of rank `r`.
fn rank_count(p: u128, rows: usize, cols: usize, r: usize) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..r {
        num *= (p.pow(rows as u32) - p.pow(i as u32)) * (p.pow(cols as u32) - p.pow(i as u32));
        den *= p.pow(r as u32) - p.pow(i as u32);
    }
    num / den
}

/// Orbit representatives of one slot together with orbit sizes.
fn slot_orbits(f: Fp, rows: usize, cols: usize, is_loop: bool) -> Option<Vec<(Mat, u128)>> {
    let p = f.p() as u128;
    if !is_loop {
        return Some(
            (0..=rows.min(cols))
                .map(|r| {
                    let mut m = Mat::zeros(rows, cols);
                    for i in 0..r {
                        m.set(i, i, 1);
                    }
                    (m, rank_count(p, rows, cols, r))
                })
                .collect(),
        );
    }
    let n = rows;
    let size = p.checked_pow((n * n) as u32)?;
    if size > ORBIT_TABLE_MAX {
        return None;
    }
    let decode = |mut k: usize| {
        let mut m = Mat::zeros(n, n);
        for e in m.d.iter_mut() {
            *e = (k % p as usize) as u8;
            k /= p as usize;
        }
        m
    };
    let encode = |m: &Mat| m.d.iter().rev().fold(0usize, |acc, &e| acc * p as usize + e as usize);
    // Generators of GL_n: elementary transvections and one diagonal matrix.
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut g = Mat::identity(n);
                g.set(i, j, 1);
                let mut gi = Mat::identity(n);
                gi.set(i, j, f.neg(1));
                gens.push((g, gi));
            }
        }
    }
    if n > 0 && f.p() > 2 {
        let r = f.primitive_root();
        let mut g = Mat::identity(n);
        g.set(0, 0, r);
        let mut gi = Mat::identity(n);
        gi.set(0, 0, f.inv(r));
        gens.push((g, gi));
    }
    let size = size as usize;
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for k in 0..size {
        let m = decode(k);
        for (g, gi) in &gens {
            let c = encode(&g.mul(&m, f).mul(gi, f));
            let (a, b) = (find(&mut parent, k), find(&mut parent, c));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut counts = vec![0u128; size];
    for k in 0..size {
        let r = find(&mut parent, k);
        counts[r] += 1;
    }
    Some((0..size).filter(|&k| counts[k] > 0).map(|k| (decode(k), counts[k])).collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    visited: u64,
    count: u128,
    weight: u128,
}

impl Tally {
    fn scaled(self, w: u128) -> Tally {
        Tally { visited: self.visited, count: self.count * w, weight: self.weight * w }
    }

    fn merge(self, o: Tally) -> Tally {
        Tally { visited: self.visited + o.visited, count: self.count + o.count, weight: self.weight + o.weight }
    }
}

const CHUNK: u128 = 1 << 12;

/// Sums `visit` over every tuple of matrices with the given shapes.
///
/// `loops[k]` is `Some(is_loop)` for slots holding an arrow matrix. One such
/// slot, the one whose orbits shrink the enumeration most, is taken only up to
/// `G_v` and weighted by orbit size.
fn sum_over_slots<V>(f: Fp, shapes: &[(usize, usize)], loops: &[Option<bool>], visit: V) -> Result<Tally>
where
    V: Fn(&[Mat]) -> Result<Tally> + Sync,
{
    let p = f.p() as u128;
    let mut best: Option<(usize, Vec<(Mat, u128)>)> = None;
    let mut best_gain = 1u128;
    for (k, (&(r, c), kind)) in shapes.iter().zip(loops).enumerate() {
        let Some(is_loop) = *kind else { continue };
        let Some(size) = p.checked_pow((r * c) as u32) else { continue };
        if is_loop && size > ORBIT_TABLE_MAX {
            continue;
        }
        let Some(orbits) = slot_orbits(f, r, c, is_loop) else { continue };
        let gain = size / orbits.len() as u128;
        if gain > best_gain {
            best_gain = gain;
            best = Some((k, orbits));
        }
    }
    let (fixed, shards): (Option<usize>, Vec<(Option<Mat>, u128)>) = match best {
        Some((k, o)) => (Some(k), o.into_iter().map(|(m, w)| (Some(m), w)).collect()),
        None => (None, vec![(None, 1)]),
    };
    let positions: Vec<(usize, usize)> = shapes
        .iter()
        .enumerate()
        .filter(|&(k, _)| Some(k) != fixed)
        .flat_map(|(k, &(r, c))| (0..r * c).map(move |e| (k, e)))
        .collect();
    let total = checked_pow(f.p(), positions.len())?;
    let mut items = Vec::new();
    for si in 0..shards.len() {
        let mut start = 0u128;
        while start < total {
            items.push((si, start, (start + CHUNK).min(total)));
            start += CHUNK;
        }
    }
    items
        .into_par_iter()
        .map(|(si, start, end)| {
            let (head, w) = &shards[si];
            let mut mats: Vec<Mat> = shapes.iter().map(|&(r, c)| Mat::zeros(r, c)).collect();
            if let (Some(k), Some(m)) = (fixed, head) {
                mats[k] = m.clone();
            }
            let mut digits = vec![0u8; positions.len()];
            let mut k = start;
            for (d, &(slot, e)) in digits.iter_mut().zip(&positions) {
                *d = (k % p) as u8;
                k /= p;
                mats[slot].d[e] = *d;
            }
            let mut acc = Tally::default();
            for idx in start..end {
                acc = acc.merge(visit(&mats)?);
                if idx + 1 == end {
                    break;
                }
                for (d, &(slot, e)) in digits.iter_mut().zip(&positions) {
                    *d += 1;
                    if (*d as u128) < p {
                        mats[slot].d[e] = *d;
                        break;
                    }
                    *d = 0;
                    mats[slot].d[e] = 0;
                }
            }
            Ok(acc.scaled(*w))
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

/// Calls `g` on every vector of the span of `basis`.
fn for_each_combination(basis: &[Vec<u8>], n: usize, f: Fp, mut g: impl FnMut(&[u8]) -> Result<()>) -> Result<()> {
    let mut cur = vec![0u8; n];
    let mut digits = vec![0u8; basis.len()];
    loop {
        g(&cur)?;
        let mut j = 0;
        loop {
            if j == basis.len() {
                return Ok(());
            }
            // Stepping a digit, including its wrap to zero, adds one copy of its vector.
            for (c, &b) in cur.iter_mut().zip(&basis[j]) {
                *c = f.add(*c, b);
            }
            digits[j] += 1;
            if (digits[j] as u32) < f.p() {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
}

/// Slot kinds for the arrows of `q` followed by `extra` non-arrow slots.
fn arrow_kinds(q: &Quiver, extra: usize) -> Vec<Option<bool>> {
    q.arrows().iter().map(|&(s, t)| Some(s == t)).chain(std::iter::repeat(None).take(extra)).collect()
}

fn arrow_shapes(q: &Quiver, d: &[usize]) -> Vec<(usize, usize)> {
    q.arrows().iter().map(|&(s, t)| (d[t], d[s])).collect()
}

fn check_cap(space: u128, cap: u128, what: &str) -> Result<()> {
    if space > cap {
        return Err(Error::Capacity(format!("{what} has {space} points to visit, above the cap {cap}")));
    }
    Ok(())
}

fn exponent_space(p: u32, e: usize, cap: u128, what: &str) -> Result<u128> {
    let space = checked_pow(p, e).map_err(|_| Error::Capacity(format!("{what}: {p}^{e} points, above the cap {cap}")))?;
    check_cap(space, cap, what)?;
    Ok(space)
}

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub cap: u128,
    /// Re-derive every automorphism count by the exhaustive radical scan
    /// whenever the endomorphism algebra is small enough.
    pub cross_check_radical: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { cap: default_cap(), cross_check_radical: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub quiver: Quiver,
    pub v: DimVector,
    pub p: u32,
    pub flavor: Flavor,
    /// `|E_v(F_p)|`.
    pub search_space: u128,
    /// Representations actually examined after orbit reduction.
    pub reps_visited: u64,
    /// Number of points of `E_v(F_p)` of the requested flavor.
    pub flavored: u128,
    /// Sum of `|Aut(x)|` over flavored absolutely indecomposable `x`.
    pub abs_indec_weight: u128,
    pub group_order: u128,
    pub a_value: u128,
    pub elapsed: Duration,
    pub cap: u128,
}

/// Counts absolutely indecomposable representations of the given flavor
/// up to isomorphism, as `sum |Aut(x)| / |G_v|`.
pub fn census_abs_indec(q: &Quiver, v: &DimVector, p: u32, flavor: Flavor, opts: &CensusOptions) -> Result<CensusReport> {
    let start = Instant::now();
    q.check_dim(v)?;
    let f = Fp::new(p)?;
    let d = dims(v);
    let shapes = arrow_shapes(q, &d);
    let entries: usize = shapes.iter().map(|&(r, c)| r * c).sum();
    let search_space = exponent_space(p, entries, opts.cap, "representation space")?;
    let fr = Frame { f, dims: d.clone(), arrows: q.arrows() };
    let tally = sum_over_slots(f, &shapes, &arrow_kinds(q, 0), |x| {
        let mut t = Tally { visited: 1, ..Tally::default() };
        let ok = match flavor {
            Flavor::Plain => true,
            Flavor::Nil1 => fr.one_nilpotent(x),
            Flavor::Nil0 => fr.nilpotent(x),
        };
        if !ok {
            return Ok(t);
        }
        t.count = 1;
        let alg = EndAlgebra { field: f, dims: d.clone(), basis: fr.end_basis(x) };
        let fast = is_abs_indecomposable(&alg);
        let aut = if fast { (p as u128 - 1) * (p as u128).pow(alg.dim() as u32 - 1) } else { 0 };
        if opts.cross_check_radical && checked_pow(p, alg.dim())? <= RADICAL_CAP {
            let info = radical_and_units(&alg, RADICAL_CAP)?;
            let slow = alg.dim() - info.radical_dim == 1;
            if slow != fast || (slow && info.units != aut) {
                return Err(Error::Consistency(format!(
                    "radical scan disagrees with the local-algebra test (dim End = {}, radical dim = {}, units = {})",
                    alg.dim(),
                    info.radical_dim,
                    info.units
                )));
            }
        }
        t.weight = aut;
        Ok(t)
    })?;
    let group_order = group_order(v, p)?;
    if tally.weight % group_order != 0 {
        return Err(Error::Consistency(format!(
            "automorphism weight {} is not divisible by |G_v| = {group_order}",
            tally.weight
        )));
    }
    Ok(CensusReport {
        quiver: q.clone(),
        v: v.clone(),
        p,
        flavor,
        search_space,
        reps_visited: tally.visited,
        flavored: tally.count,
        abs_indec_weight: tally.weight,
        group_order,
        a_value: tally.weight / group_order,
        elapsed: start.elapsed(),
        cap: opts.cap,
    })
}

/// Points `(x, x*)` with vanishing moment map satisfying the flavor's
/// nilpotency condition: doubled nilpotency (plain), strong semi-nilpotency
/// (nil1) or semi-nilpotency (nil0).
pub fn lambda_count(q: &Quiver, v: &DimVector, p: u32, flavor: Flavor, cap: u128) -> Result<u128> {
    q.check_dim(v)?;
    let f = Fp::new(p)?;
    let d = dims(v);
    let shapes = arrow_shapes(q, &d);
    let entries: usize = shapes.iter().map(|&(r, c)| r * c).sum();
    exponent_space(p, 2 * entries, cap, "doubled representation space")?;
    let fr = Frame { f, dims: d, arrows: q.arrows() };
    let tally = sum_over_slots(f, &shapes, &arrow_kinds(q, 0), |x| {
        let (basis, n) = fr.moment_kernel(x, None);
        let mut count = 0u128;
        for_each_combination(&basis, n, f, |sol| {
            let (xs, _) = fr.split_solution(sol, None);
            let ok = match flavor {
                Flavor::Plain => fr.doubled_nilpotent(x, &xs),
                Flavor::Nil1 => fr.strongly_semi_nilpotent(x, &xs),
                Flavor::Nil0 => fr.semi_nilpotent(x, &xs),
            };
            count += ok as u128;
            Ok(())
        })?;
        Ok(Tally { visited: 1, count, weight: 0 })
    })?;
    Ok(tally.count)
}

/// `|mu_v^{-1}(0)(F_p)|`.
pub fn mu_fiber_count(q: &Quiver, v: &DimVector, p: u32, cap: u128) -> Result<u128> {
    q.check_dim(v)?;
    let f = Fp::new(p)?;
    let d = dims(v);
    let shapes = arrow_shapes(q, &d);
    let entries: usize = shapes.iter().map(|&(r, c)| r * c).sum();
    exponent_space(p, 2 * entries, cap, "doubled representation space")?;
    let fr = Frame { f, dims: d, arrows: q.arrows() };
    let tally = sum_over_slots(f, &shapes, &arrow_kinds(q, 0), |x| {
        let (basis, _) = fr.moment_kernel(x, None);
        Ok(Tally { visited: 1, count: (p as u128).pow(basis.len() as u32), weight: 0 })
    })?;
    Ok(tally.count)
}

/// Points of the framed variety of the given variant, counted as stable
/// solutions divided by `|G_v(F_p)|`.
pub fn nakajima_count(q: &Quiver, v: &DimVector, w: &DimVector, p: u32, variant: NakajimaVariant, cap: u128) -> Result<u128> {
    q.check_dim(v)?;
    q.check_dim(w)?;
    let f = Fp::new(p)?;
    let d = dims(v);
    let wd = dims(w);
    let mut shapes = arrow_shapes(q, &d);
    let entries: usize = shapes.iter().map(|&(r, c)| r * c).sum();
    let framing: usize = d.iter().zip(&wd).map(|(a, b)| a * b).sum();
    exponent_space(p, 2 * entries + 2 * framing, cap, "framed doubled representation space")?;
    shapes.extend((0..d.len()).map(|i| (wd[i], d[i])));
    let narrows = q.arrows().len();
    let d_len = d.len();
    let fr = Frame { f, dims: d, arrows: q.arrows() };
    let tally = sum_over_slots(f, &shapes, &arrow_kinds(q, d_len), |mats| {
        let (x, pm) = mats.split_at(narrows);
        let pre = match variant {
            NakajimaVariant::M0 => fr.nilpotent(x),
            NakajimaVariant::M1 => fr.one_nilpotent(x),
            _ => true,
        };
        if !pre {
            return Ok(Tally { visited: 1, ..Tally::default() });
        }
        let framed = (!variant.is_lagrangian()).then_some(wd.as_slice());
        let (basis, n) = fr.moment_kernel(x, framed.map(|w| (w, pm)));
        let mut count = 0u128;
        for_each_combination(&basis, n, f, |sol| {
            let (xs, qm) = fr.split_solution(sol, framed);
            let ok = match variant {
                NakajimaVariant::L => fr.doubled_nilpotent(x, &xs),
                NakajimaVariant::L0 => fr.semi_nilpotent(x, &xs),
                NakajimaVariant::L1 => fr.strongly_semi_nilpotent(x, &xs),
                _ => true,
            };
            if !ok || !fr.stable(x, &xs, pm) {
                return Ok(());
            }
            if fr.stabilizer_dim(x, &xs, pm, &qm) != 0 {
                return Err(Error::Consistency("a stable point has a nontrivial stabilizer".into()));
            }
            count += 1;
            Ok(())
        })?;
        Ok(Tally { visited: 1, count, weight: 0 })
    })?;
    let g = group_order(v, p)?;
    if tally.count % g != 0 {
        return Err(Error::Consistency(format!("{} stable points are not divisible by |G_v| = {g}", tally.count)));
    }
    Ok(tally.count / g)
}

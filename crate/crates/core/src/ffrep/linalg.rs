//! Dense linear algebra over a prime field `F_p` with `p < 256`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..256).contains(&p) || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::Invalid(format!("{p} is not a prime below 256")));
        }
        Ok(Fp { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.p) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.p - b as u32) % self.p) as u8
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.p) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        ((self.p - a as u32) % self.p) as u8
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        let mut r = 1u32;
        let mut b = a as u32;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r as u8
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u8 {
        if self.p == 2 {
            return 1;
        }
        let order = self.p - 1;
        let mut factors = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.p)
            .find(|&g| factors.iter().all(|&f| pow_mod(g, order / f, self.p) != 1))
            .expect("prime fields have primitive roots") as u8
    }
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub d: Vec<u8>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, d: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.d[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut d = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            d.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, d }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.d[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u8) {
        self.d[r * self.cols + c] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, o: &Mat, f: Fp) -> Mat {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, o.cols);
        let p = f.p();
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut s = 0u32;
                for k in 0..self.cols {
                    s += self.get(i, k) as u32 * o.get(k, j) as u32;
                }
                out.d[i * o.cols + j] = (s % p) as u8;
            }
        }
        out
    }

    pub fn sub(&self, o: &Mat, f: Fp) -> Mat {
        Mat { rows: self.rows, cols: self.cols, d: self.d.iter().zip(&o.d).map(|(&a, &b)| f.sub(a, b)).collect() }
    }

    pub fn add(&self, o: &Mat, f: Fp) -> Mat {
        Mat { rows: self.rows, cols: self.cols, d: self.d.iter().zip(&o.d).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn scale(&self, k: u8, f: Fp) -> Mat {
        Mat { rows: self.rows, cols: self.cols, d: self.d.iter().map(|&a| f.mul(a, k)).collect() }
    }

    pub fn apply(&self, v: &[u8], f: Fp) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let s: u32 = (0..self.cols).map(|k| self.get(i, k) as u32 * v[k] as u32).sum();
                (s % f.p()) as u8
            })
            .collect()
    }

    pub fn rank(&self, f: Fp) -> usize {
        let mut rows: Vec<Vec<u8>> = (0..self.rows).map(|i| self.d[i * self.cols..(i + 1) * self.cols].to_vec()).collect();
        rref(&mut rows, self.cols, f).len()
    }

    pub fn is_invertible(&self, f: Fp) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    /// Basis of the right kernel `{y : A y = 0}`.
    pub fn kernel(&self, f: Fp) -> Vec<Vec<u8>> {
        let mut rows: Vec<Vec<u8>> = (0..self.rows).map(|i| self.d[i * self.cols..(i + 1) * self.cols].to_vec()).collect();
        kernel_of_rows(&mut rows, self.cols, f)
    }

    pub fn pow_is_zero(&self, e: usize, f: Fp) -> bool {
        if e == 0 {
            return self.rows == 0;
        }
        let mut acc = self.clone();
        for _ in 1..e {
            if acc.is_zero() {
                return true;
            }
            acc = acc.mul(self, f);
        }
        acc.is_zero()
    }
}

/// Reduces `rows` (vectors of length `n`) to reduced row echelon form in
/// place, dropping zero rows, and returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<u8>>, n: usize, f: Fp) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let k = rows[i][c];
                for j in 0..n {
                    let t = f.mul(k, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Kernel basis of the linear map whose matrix has the given rows.
pub fn kernel_of_rows(rows: &mut Vec<Vec<u8>>, n: usize, f: Fp) -> Vec<Vec<u8>> {
    let pivots = rref(rows, n, f);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u8; n];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[r][fc]);
            }
            v
        })
        .collect()
}

/// A subspace of `F_p^n`, kept as a reduced echelon basis so that equal
/// subspaces have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub n: usize,
    pub basis: Vec<Vec<u8>>,
}

impl Span {
    pub fn zero(n: usize) -> Self {
        Span { n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Span {
            n,
            basis: (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v
                })
                .collect(),
        }
    }

    pub fn from_vecs(n: usize, mut vecs: Vec<Vec<u8>>, f: Fp) -> Self {
        rref(&mut vecs, n, f);
        Span { n, basis: vecs }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn join(&self, vecs: impl IntoIterator<Item = Vec<u8>>, f: Fp) -> Span {
        let mut all = self.basis.clone();
        all.extend(vecs);
        Span::from_vecs(self.n, all, f)
    }

    pub fn contains_span(&self, o: &Span, f: Fp) -> bool {
        self.join(o.basis.iter().cloned(), f).dim() == self.dim()
    }
}

/// Every subspace of `F_p^n`; only for tiny `n`.
pub fn all_subspaces(n: usize, f: Fp) -> Vec<Span> {
    let total = (f.p() as usize).pow(n as u32);
    let vectors: Vec<Vec<u8>> = (1..total).map(|mut k| {
        let mut v = vec![0u8; n];
        for x in v.iter_mut() {
            *x = (k % f.p() as usize) as u8;
            k /= f.p() as usize;
        }
        v
    }).collect();
    let mut seen = std::collections::HashSet::new();
    let mut layer = vec![Span::zero(n)];
    seen.insert(Span::zero(n));
    let mut out = vec![Span::zero(n)];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in &layer {
            for v in &vectors {
                let t = s.join([v.clone()], f);
                if t.dim() > s.dim() && seen.insert(t.clone()) {
                    next.push(t.clone());
                    out.push(t);
                }
            }
        }
        layer = next;
    }
    out
}

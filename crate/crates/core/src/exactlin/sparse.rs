//! Field-generic sparse column storage and column reduction.
//!
//! Columns are sorted `(row, value)` lists with no explicit zeros. Reduction
//! uses the lowest (largest-index) nonzero row of a column as its pivot.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type SpVec<E> = Vec<(usize, E)>;

pub(crate) trait Arith: Sync {
    type E: Clone + PartialEq + Send + Sync + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn from_i64(&self, v: i64) -> Self::E;
}

#[derive(Clone, Copy)]
pub(crate) struct ModP(pub u32);

impl Arith for ModP {
    type E = u32;
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1 % self.0
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.0 as u64) as u32
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.0 - *a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        // Fermat: a^(p-2)
        let p = self.0 as u64;
        let mut base = *a as u64 % p;
        let mut exp = p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc as u32
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }
}

#[derive(Clone, Copy)]
pub(crate) struct Rat;

impl Arith for Rat {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// `x + c*y` for sorted sparse vectors.
pub(crate) fn axpy<A: Arith>(a: &A, x: &[(usize, A::E)], c: &A::E, y: &[(usize, A::E)]) -> SpVec<A::E> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            let v = a.mul(c, &y[j].1);
            if !a.is_zero(&v) {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = a.add(&x[i].1, &a.mul(c, &y[j].1));
            if !a.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn scale<A: Arith>(a: &A, c: &A::E, x: &[(usize, A::E)]) -> SpVec<A::E> {
    if a.is_zero(c) {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, a.mul(c, v))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct SpMat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<SpVec<E>>,
}

impl<E: Clone + PartialEq + Send + Sync + Debug> SpMat<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SpMat { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&E> {
        let col = &self.data[j];
        col.binary_search_by_key(&i, |(r, _)| *r).ok().map(|k| &col[k].1)
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SpVec<E>> = vec![Vec::new(); self.rows];
        for (j, col) in self.data.iter().enumerate() {
            for (i, v) in col {
                data[*i].push((j, v.clone()));
            }
        }
        SpMat { rows: self.cols, cols: self.rows, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        SpMat { rows: self.rows, cols: idx.len(), data: idx.iter().map(|&j| self.data[j].clone()).collect() }
    }

    /// Keep rows `idx` (in that order, which must be increasing for sortedness
    /// to be preserved without a resort).
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut map: HashMap<usize, usize> = HashMap::with_capacity(idx.len());
        for (new, &old) in idx.iter().enumerate() {
            map.insert(old, new);
        }
        let data = self
            .data
            .iter()
            .map(|col| {
                let mut c: SpVec<E> =
                    col.iter().filter_map(|(i, v)| map.get(i).map(|&n| (n, v.clone()))).collect();
                c.sort_by_key(|(i, _)| *i);
                c
            })
            .collect();
        SpMat { rows: idx.len(), cols: self.cols, data }
    }
}

pub(crate) fn mul<A: Arith>(a: &A, x: &SpMat<A::E>, y: &SpMat<A::E>) -> SpMat<A::E> {
    assert_eq!(x.cols, y.rows, "matrix product shape mismatch {}x{} * {}x{}", x.rows, x.cols, y.rows, y.cols);
    let mut acc: Vec<Option<A::E>> = vec![None; x.rows];
    let mut touched: Vec<usize> = Vec::new();
    let data = y
        .data
        .iter()
        .map(|ycol| {
            for (k, yv) in ycol {
                for (i, xv) in &x.data[*k] {
                    let prod = a.mul(xv, yv);
                    match &mut acc[*i] {
                        Some(s) => *s = a.add(s, &prod),
                        slot @ None => {
                            *slot = Some(prod);
                            touched.push(*i);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let col: SpVec<A::E> = touched
                .drain(..)
                .filter_map(|i| acc[i].take().filter(|v| !a.is_zero(v)).map(|v| (i, v)))
                .collect();
            col
        })
        .collect();
    SpMat { rows: x.rows, cols: y.cols, data }
}

pub(crate) fn lincomb<A: Arith>(a: &A, x: &SpMat<A::E>, cx: i64, y: &SpMat<A::E>, cy: i64) -> SpMat<A::E> {
    assert_eq!((x.rows, x.cols), (y.rows, y.cols), "matrix sum shape mismatch");
    let (cx, cy) = (a.from_i64(cx), a.from_i64(cy));
    let data = x
        .data
        .iter()
        .zip(&y.data)
        .map(|(u, v)| axpy(a, &scale(a, &cx, u), &cy, v))
        .collect();
    SpMat { rows: x.rows, cols: x.cols, data }
}

/// Column echelon data: every stored column has a distinct pivot (its lowest
/// nonzero row). With tracking, `reduced[k] = sum_i track[k][i] * original_i`.
pub(crate) struct Echelon<E> {
    reduced: Vec<SpVec<E>>,
    track: Vec<SpVec<E>>,
    pivot_of_row: HashMap<usize, usize>,
    /// Original column index of each stored (independent) column.
    pub origin: Vec<usize>,
    /// Kernel vectors (coefficients on original columns) found during insertion.
    pub kernel: Vec<SpVec<E>>,
    tracking: bool,
}

impl<E: Clone + PartialEq + Send + Sync + Debug> Echelon<E> {
    pub fn new(tracking: bool) -> Self {
        Echelon {
            reduced: Vec::new(),
            track: Vec::new(),
            pivot_of_row: HashMap::new(),
            origin: Vec::new(),
            kernel: Vec::new(),
            tracking,
        }
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Reduce `v` against the stored columns; returns the remainder and, when
    /// tracking, the coefficients `t` with `v = remainder + sum t_i original_i`.
    /// Stored columns satisfy `reduced_k = sum_i track_k[i] original_i`.
    pub fn reduce<A: Arith<E = E>>(&self, a: &A, mut v: SpVec<E>) -> (SpVec<E>, SpVec<E>) {
        let mut t: SpVec<E> = Vec::new();
        while let Some((low, val)) = v.last() {
            let Some(&k) = self.pivot_of_row.get(low) else { break };
            let piv = &self.reduced[k];
            let c = a.mul(val, &a.inv(&piv.last().unwrap().1));
            v = axpy(a, &v, &a.neg(&c), piv);
            if self.tracking {
                t = axpy(a, &t, &c, &self.track[k]);
            }
        }
        (v, t)
    }

    /// Insert original column number `index`; returns true if it was independent.
    pub fn insert<A: Arith<E = E>>(&mut self, a: &A, index: usize, v: SpVec<E>) -> bool {
        let (rem, t) = self.reduce(a, v);
        if rem.is_empty() {
            if self.tracking {
                // original_index - t = 0
                let kv = axpy(a, &[(index, a.one())], &a.neg(&a.one()), &t);
                self.kernel.push(kv);
            }
            false
        } else {
            let low = rem.last().unwrap().0;
            self.pivot_of_row.insert(low, self.reduced.len());
            if self.tracking {
                let tv = axpy(a, &[(index, a.one())], &a.neg(&a.one()), &t);
                self.track.push(tv);
            }
            self.reduced.push(rem);
            self.origin.push(index);
            true
        }
    }

    pub fn from_columns<A: Arith<E = E>>(a: &A, m: &SpMat<E>, tracking: bool) -> Self {
        let mut e = Echelon::new(tracking);
        for (j, col) in m.data.iter().enumerate() {
            e.insert(a, j, col.clone());
        }
        e
    }
}

pub(crate) fn rank<A: Arith>(a: &A, m: &SpMat<A::E>) -> usize {
    // Reduce along the shorter side.
    if m.rows < m.cols {
        Echelon::from_columns(a, &m.transpose(), false).rank()
    } else {
        Echelon::from_columns(a, m, false).rank()
    }
}

/// Kernel basis as columns, with kernel vectors ordered by their leading column.
pub(crate) fn kernel<A: Arith>(a: &A, m: &SpMat<A::E>) -> SpMat<A::E> {
    let e = Echelon::from_columns(a, m, true);
    SpMat { rows: m.cols, cols: e.kernel.len(), data: e.kernel }
}

/// Solve `basis * x = targets` column by column. `basis` must have independent
/// columns; returns `None` if some target is outside the column span.
pub(crate) fn solve<A: Arith>(a: &A, basis: &SpMat<A::E>, targets: &SpMat<A::E>) -> Option<SpMat<A::E>> {
    assert_eq!(basis.rows, targets.rows, "solve: row mismatch");
    let e = Echelon::from_columns(a, basis, true);
    debug_assert!(e.kernel.is_empty(), "solve: dependent basis");
    let mut data = Vec::with_capacity(targets.cols);
    for col in &targets.data {
        let (rem, t) = e.reduce(a, col.clone());
        if !rem.is_empty() {
            return None;
        }
        data.push(t);
    }
    Some(SpMat { rows: basis.cols, cols: targets.cols, data })
}

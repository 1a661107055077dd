use std::ops::Range;

use num_rational::BigRational;

use super::field::{Field, Scalar};
use super::sparse::{self, Arith, ModP, Rat, SpMat, SpVec};
use super::subspace::Subspace;

/// An exact matrix over a [`Field`]. Vectors are columns; storage is sparse
/// column-major with canonical entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: Field,
    store: Store,
}

#[derive(Clone, Debug, PartialEq)]
enum Store {
    Q(SpMat<BigRational>),
    P(SpMat<u32>),
}

macro_rules! map_store {
    ($field:expr, $store:expr, |$m:ident, $a:ident| $body:expr) => {{
        let field = $field;
        match $store {
            Store::Q($m) => {
                let $a = &Rat;
                Matrix { field, store: Store::Q($body) }
            }
            Store::P($m) => {
                let $a = &ModP(field.characteristic());
                Matrix { field, store: Store::P($body) }
            }
        }
    }};
}

macro_rules! query_store {
    ($field:expr, $store:expr, |$m:ident, $a:ident| $body:expr) => {{
        match $store {
            Store::Q($m) => {
                let $a = &Rat;
                $body
            }
            Store::P($m) => {
                let $a = &ModP($field.characteristic());
                $body
            }
        }
    }};
}

macro_rules! zip_store {
    ($lhs:expr, $rhs:expr, |$x:ident, $y:ident, $a:ident| $body:expr) => {{
        assert_eq!($lhs.field, $rhs.field, "field mismatch");
        let field = $lhs.field;
        match (&$lhs.store, &$rhs.store) {
            (Store::Q($x), Store::Q($y)) => {
                let $a = &Rat;
                Matrix { field, store: Store::Q($body) }
            }
            (Store::P($x), Store::P($y)) => {
                let $a = &ModP(field.characteristic());
                Matrix { field, store: Store::P($body) }
            }
            _ => unreachable!("store/field mismatch"),
        }
    }};
}

fn to_elem_q(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rational(q) => q.clone(),
        Scalar::Modular(_) => panic!("modular scalar in rational matrix"),
    }
}

fn to_elem_p(s: &Scalar) -> u32 {
    match s {
        Scalar::Modular(v) => *v,
        Scalar::Rational(_) => panic!("rational scalar in modular matrix"),
    }
}

fn assemble<A: Arith>(
    a: &A,
    rows: usize,
    cols: usize,
    entries: impl IntoIterator<Item = (usize, usize, A::E)>,
) -> SpMat<A::E> {
    let mut data: Vec<SpVec<A::E>> = vec![Vec::new(); cols];
    for (i, j, v) in entries {
        assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
        data[j].push((i, v));
    }
    for col in &mut data {
        col.sort_by_key(|(i, _)| *i);
        let mut merged: SpVec<A::E> = Vec::with_capacity(col.len());
        for (i, v) in col.drain(..) {
            match merged.last_mut() {
                Some((li, lv)) if *li == i => *lv = a.add(lv, &v),
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|(_, v)| !a.is_zero(v));
        *col = merged;
    }
    SpMat { rows, cols, data }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        match field {
            Field::Rationals => Matrix { field, store: Store::Q(SpMat::zeros(rows, cols)) },
            Field::Prime(_) => Matrix { field, store: Store::P(SpMat::zeros(rows, cols)) },
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        Matrix::from_entries(field, n, n, (0..n).map(|i| (i, i, 1)))
    }

    /// Build from `(row, col, integer)` triples; repeated positions add up.
    pub fn from_entries(
        field: Field,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Matrix {
        match field {
            Field::Rationals => {
                let a = &Rat;
                let e = entries.into_iter().map(|(i, j, v)| (i, j, a.from_i64(v)));
                Matrix { field, store: Store::Q(assemble(a, rows, cols, e)) }
            }
            Field::Prime(p) => {
                let a = &ModP(p);
                let e = entries.into_iter().map(|(i, j, v)| (i, j, a.from_i64(v)));
                Matrix { field, store: Store::P(assemble(a, rows, cols, e)) }
            }
        }
    }

    /// Build from a row-major slice of integers.
    pub fn from_i64(field: Field, rows: usize, cols: usize, values: &[i64]) -> Matrix {
        assert_eq!(values.len(), rows * cols, "from_i64: wrong number of entries");
        Matrix::from_entries(
            field,
            rows,
            cols,
            values.iter().enumerate().map(|(k, v)| (k / cols.max(1), k % cols.max(1), *v)),
        )
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Matrix {
        Matrix::from_entries(
            field,
            rows,
            cols,
            (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| (i, j, f(i, j))),
        )
    }

    /// Build from row-major scalars of this field.
    pub fn from_scalars(field: Field, rows: usize, cols: usize, values: &[Scalar]) -> Matrix {
        assert_eq!(values.len(), rows * cols, "from_scalars: wrong number of entries");
        let pos = |k: usize| (k / cols.max(1), k % cols.max(1));
        match field {
            Field::Rationals => {
                let e = values.iter().enumerate().map(|(k, s)| (pos(k).0, pos(k).1, to_elem_q(s)));
                Matrix { field, store: Store::Q(assemble(&Rat, rows, cols, e)) }
            }
            Field::Prime(p) => {
                let e = values.iter().enumerate().map(|(k, s)| (pos(k).0, pos(k).1, to_elem_p(s) % p));
                Matrix { field, store: Store::P(assemble(&ModP(p), rows, cols, e)) }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        query_store!(self.field, &self.store, |m, _a| m.rows)
    }

    pub fn cols(&self) -> usize {
        query_store!(self.field, &self.store, |m, _a| m.cols)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn nnz(&self) -> usize {
        query_store!(self.field, &self.store, |m, _a| m.nnz())
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows() && j < self.cols(), "index out of range");
        match &self.store {
            Store::Q(m) => Scalar::Rational(m.get(i, j).cloned().unwrap_or_else(|| Rat.zero())),
            Store::P(m) => Scalar::Modular(m.get(i, j).copied().unwrap_or(0)),
        }
    }

    /// Dense row-major view (for serialization and small displays).
    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        zip_store!(self, other, |x, y, a| sparse::mul(a, x, y))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        zip_store!(self, other, |x, y, a| sparse::lincomb(a, x, 1, y, 1))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        zip_store!(self, other, |x, y, a| sparse::lincomb(a, x, 1, y, -1))
    }

    pub fn scale(&self, c: i64) -> Matrix {
        map_store!(self.field, &self.store, |m, a| {
            let c = a.from_i64(c);
            SpMat { rows: m.rows, cols: m.cols, data: m.data.iter().map(|col| sparse::scale(a, &c, col)).collect() }
        })
    }

    pub fn neg(&self) -> Matrix {
        self.scale(-1)
    }

    pub fn transpose(&self) -> Matrix {
        map_store!(self.field, &self.store, |m, _a| m.transpose())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        map_store!(self.field, &self.store, |m, _a| m.select_cols(idx))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        map_store!(self.field, &self.store, |m, _a| m.select_rows(idx))
    }

    /// Contiguous sub-block.
    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Matrix {
        let r: Vec<usize> = rows.collect();
        let c: Vec<usize> = cols.collect();
        self.select_cols(&c).select_rows(&r)
    }

    /// Assemble a block matrix; `blocks` are `(block_row, block_col, matrix)`,
    /// repeated positions add up, absent blocks are zero.
    pub fn from_blocks<'a>(
        field: Field,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: impl IntoIterator<Item = (usize, usize, &'a Matrix)>,
    ) -> Matrix {
        let row_off = offsets(row_sizes);
        let col_off = offsets(col_sizes);
        let rows = *row_off.last().unwrap();
        let cols = *col_off.last().unwrap();
        let blocks: Vec<(usize, usize, &Matrix)> = blocks.into_iter().collect();
        for (bi, bj, m) in &blocks {
            assert_eq!(m.field, field, "from_blocks: field mismatch");
            assert_eq!(
                m.shape(),
                (row_sizes[*bi], col_sizes[*bj]),
                "from_blocks: block ({bi},{bj}) has wrong shape"
            );
        }
        match field {
            Field::Rationals => {
                let e = blocks.iter().flat_map(|(bi, bj, m)| {
                    let Store::Q(s) = &m.store else { unreachable!() };
                    let (ro, co) = (row_off[*bi], col_off[*bj]);
                    s.data.iter().enumerate().flat_map(move |(j, col)| col.iter().map(move |(i, v)| (ro + i, co + j, v.clone())))
                });
                Matrix { field, store: Store::Q(assemble(&Rat, rows, cols, e)) }
            }
            Field::Prime(p) => {
                let e = blocks.iter().flat_map(|(bi, bj, m)| {
                    let Store::P(s) = &m.store else { unreachable!() };
                    let (ro, co) = (row_off[*bi], col_off[*bj]);
                    s.data.iter().enumerate().flat_map(move |(j, col)| col.iter().map(move |(i, v)| (ro + i, co + j, *v)))
                });
                Matrix { field, store: Store::P(assemble(&ModP(p), rows, cols, e)) }
            }
        }
    }

    pub fn block_diag(field: Field, parts: &[&Matrix]) -> Matrix {
        let rs: Vec<usize> = parts.iter().map(|m| m.rows()).collect();
        let cs: Vec<usize> = parts.iter().map(|m| m.cols()).collect();
        Matrix::from_blocks(field, &rs, &cs, parts.iter().enumerate().map(|(k, m)| (k, k, *m)))
    }

    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cs: Vec<usize> = parts.iter().map(|m| m.cols()).collect();
        Matrix::from_blocks(field, &[rows], &cs, parts.iter().enumerate().map(|(k, m)| (0, k, *m)))
    }

    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rs: Vec<usize> = parts.iter().map(|m| m.rows()).collect();
        Matrix::from_blocks(field, &rs, &[cols], parts.iter().enumerate().map(|(k, m)| (k, 0, *m)))
    }

    pub fn rank(&self) -> usize {
        query_store!(self.field, &self.store, |m, a| sparse::rank(a, m))
    }

    /// Basis of `{v : Mv = 0}`.
    pub fn kernel(&self) -> Subspace {
        let basis = map_store!(self.field, &self.store, |m, a| sparse::kernel(a, m));
        Subspace::from_independent(basis)
    }

    /// Column space, with a basis chosen among the columns of `self`.
    pub fn image(&self) -> Subspace {
        Subspace::span(self)
    }

    /// Solve `self * x = targets` for `x`; `self` must have independent columns.
    pub fn solve(&self, targets: &Matrix) -> Option<Matrix> {
        assert_eq!(self.field, targets.field, "field mismatch");
        match (&self.store, &targets.store) {
            (Store::Q(b), Store::Q(t)) => {
                sparse::solve(&Rat, b, t).map(|m| Matrix { field: self.field, store: Store::Q(m) })
            }
            (Store::P(b), Store::P(t)) => sparse::solve(&ModP(self.field.characteristic()), b, t)
                .map(|m| Matrix { field: self.field, store: Store::P(m) }),
            _ => unreachable!(),
        }
    }

    /// Indices of a maximal independent set of columns, chosen greedily left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        query_store!(self.field, &self.store, |m, a| sparse::Echelon::from_columns(a, m, false).origin)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows() == self.cols() && self.rank() == self.rows()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_invertible() {
            return None;
        }
        self.solve(&Matrix::identity(self.field, self.rows()))
    }

    pub fn is_identity(&self) -> bool {
        self.rows() == self.cols() && *self == Matrix::identity(self.field, self.rows())
    }
}

pub(crate) fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut off = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    off.push(0);
    for s in sizes {
        acc += s;
        off.push(acc);
    }
    off
}

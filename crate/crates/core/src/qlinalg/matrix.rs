use std::collections::BTreeMap;

use super::field::{Field, Rationals};
use super::Rational;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `y + a * x` on sparse vectors.
pub fn axpy<F: Field>(field: &F, y: &SparseVec<F::El>, a: &F::El, x: &SparseVec<F::El>) -> SparseVec<F::El> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            let v = field.mul(a, &x[j].1);
            if !field.is_zero(&v) {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(&y[i].1, &field.mul(a, &x[j].1));
            if !field.is_zero(&v) {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Collects `(index, value)` pairs into a sparse vector, summing duplicates.
pub fn collect_vec<F: Field, I>(field: &F, items: I) -> SparseVec<F::El>
where
    I: IntoIterator<Item = (usize, F::El)>,
{
    let mut acc: BTreeMap<usize, F::El> = BTreeMap::new();
    for (i, v) in items {
        match acc.get_mut(&i) {
            Some(slot) => *slot = field.add(slot, &v),
            None => {
                acc.insert(i, v);
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect()
}

/// Column-major sparse matrix over an arbitrary field. Entries within a
/// column are sorted by row and never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<E>>,
}

/// Sparse matrix with exact rational entries.
pub type SparseMatrix = Mat<Rational>;

impl<E: Clone> Mat<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Columns must already be canonical (sorted, zero-free, in range).
    pub fn from_columns(rows: usize, columns: Vec<SparseVec<E>>) -> Self {
        for col in &columns {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(col.iter().all(|(r, _)| *r < rows));
        }
        Mat { rows, cols: columns.len(), columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec<E> {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<E>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Entries in canonical row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, E)> {
        let mut out: Vec<(usize, usize, E)> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())))
            .collect();
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&E> {
        let col = &self.columns[c];
        col.binary_search_by_key(&r, |(i, _)| *i).ok().map(|k| &col[k].1)
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<SparseVec<E>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                columns[*r].push((c, v.clone()));
            }
        }
        Mat { rows: self.cols, cols: self.rows, columns }
    }

    /// Relabels rows by `row_perm[old] = new` and columns by `col_perm[old] = new`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut columns: Vec<SparseVec<E>> = vec![Vec::new(); self.cols];
        for (c, col) in self.columns.iter().enumerate() {
            let mut moved: SparseVec<E> = col.iter().map(|(r, v)| (row_perm[*r], v.clone())).collect();
            moved.sort_by_key(|(r, _)| *r);
            columns[col_perm[c]] = moved;
        }
        Mat { rows: self.rows, cols: self.cols, columns }
    }

    /// Submatrix on the given rows and columns, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut row_map = vec![usize::MAX; self.rows];
        for (new, old) in rows.iter().enumerate() {
            row_map[*old] = new;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                let mut col: SparseVec<E> = self.columns[c]
                    .iter()
                    .filter(|(r, _)| row_map[*r] != usize::MAX)
                    .map(|(r, v)| (row_map[*r], v.clone()))
                    .collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        Mat { rows: rows.len(), cols: cols.len(), columns }
    }

    /// Applies `f` entrywise; `None` aborts the whole conversion.
    pub fn try_map<E2, T>(&self, mut f: T) -> Option<Mat<E2>>
    where
        T: FnMut(&E) -> Option<E2>,
        E2: Clone,
    {
        let mut columns = Vec::with_capacity(self.cols);
        for col in &self.columns {
            let mut out = Vec::with_capacity(col.len());
            for (r, v) in col {
                out.push((*r, f(v)?));
            }
            columns.push(out);
        }
        Some(Mat { rows: self.rows, cols: self.cols, columns })
    }
}

impl<E: Clone + PartialEq> Mat<E> {
    pub fn from_triplets<F, I>(field: &F, rows: usize, cols: usize, entries: I) -> Self
    where
        F: Field<El = E>,
        I: IntoIterator<Item = (usize, usize, E)>,
    {
        let mut buckets: Vec<Vec<(usize, E)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            buckets[c].push((r, v));
        }
        let columns = buckets.into_iter().map(|b| collect_vec(field, b)).collect();
        Mat { rows, cols, columns }
    }

    pub fn identity<F: Field<El = E>>(field: &F, n: usize) -> Self {
        Mat { rows: n, cols: n, columns: (0..n).map(|i| vec![(i, field.one())]).collect() }
    }

    /// Drops entries that became zero (e.g. after reduction into a field).
    pub fn pruned<F: Field<El = E>>(mut self, field: &F) -> Self {
        for col in &mut self.columns {
            col.retain(|(_, v)| !field.is_zero(v));
        }
        self
    }

    pub fn apply<F: Field<El = E>>(&self, field: &F, v: &SparseVec<E>) -> SparseVec<E> {
        let mut acc: SparseVec<E> = Vec::new();
        for (j, x) in v {
            acc = axpy(field, &acc, x, &self.columns[*j]);
        }
        acc
    }

    pub fn mul<F: Field<El = E>>(&self, field: &F, other: &Mat<E>) -> Mat<E> {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let columns = other.columns.iter().map(|v| self.apply(field, v)).collect();
        Mat { rows: self.rows, cols: other.cols, columns }
    }

    pub fn add<F: Field<El = E>>(&self, field: &F, other: &Mat<E>) -> Mat<E> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        let one = field.one();
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| axpy(field, a, &one, b))
            .collect();
        Mat { rows: self.rows, cols: self.cols, columns }
    }

    pub fn sub<F: Field<El = E>>(&self, field: &F, other: &Mat<E>) -> Mat<E> {
        self.add(field, &other.scaled(field, &field.neg(&field.one())))
    }

    pub fn scaled<F: Field<El = E>>(&self, field: &F, a: &E) -> Mat<E> {
        if field.is_zero(a) {
            return Mat::zero(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, field.mul(a, v))).collect())
            .collect();
        Mat { rows: self.rows, cols: self.cols, columns }
    }

    pub fn trace<F: Field<El = E>>(&self, field: &F) -> E {
        let mut t = field.zero();
        for c in 0..self.cols.min(self.rows) {
            if let Some(v) = self.get(c, c) {
                t = field.add(&t, v);
            }
        }
        t
    }
}

impl SparseMatrix {
    /// Builds from a dense table of integers (rows of equal length).
    pub fn from_dense_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let entries = rows.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), c, "ragged dense input");
            row.iter().enumerate().map(move |(j, v)| (i, j, Rationals.from_i64(*v)))
        });
        Mat::from_triplets(&Rationals, r, c, entries)
    }

    pub fn eye(n: usize) -> Self {
        Mat::identity(&Rationals, n)
    }

    pub fn times(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(&Rationals, other)
    }

    pub fn plus(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&Rationals, other)
    }

    pub fn minus(&self, other: &SparseMatrix) -> SparseMatrix {
        self.sub(&Rationals, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::q;

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense_i64(&[&[1, 2], &[0, 3]]);
        let b = SparseMatrix::from_dense_i64(&[&[1, 0], &[4, 1]]);
        let ab = a.times(&b);
        assert_eq!(ab, SparseMatrix::from_dense_i64(&[&[9, 2], &[12, 3]]));
        assert_eq!(a.transpose(), SparseMatrix::from_dense_i64(&[&[1, 0], &[2, 3]]));
    }

    #[test]
    fn entries_are_row_major_and_zero_free() {
        let m = SparseMatrix::from_triplets(
            &Rationals,
            2,
            2,
            vec![(1, 0, q(1, 1)), (0, 1, q(2, 1)), (0, 1, q(-2, 1)), (0, 0, q(1, 2))],
        );
        let e = m.entries();
        assert_eq!(e, vec![(0, 0, q(1, 2)), (1, 0, q(1, 1))]);
    }

    #[test]
    fn axpy_cancels() {
        let x: SparseVec<Rational> = vec![(0, q(1, 1)), (3, q(2, 1))];
        let y: SparseVec<Rational> = vec![(3, q(-4, 1)), (5, q(1, 1))];
        let z = axpy(&Rationals, &y, &q(2, 1), &x);
        assert_eq!(z, vec![(0, q(2, 1)), (5, q(1, 1))]);
    }
}

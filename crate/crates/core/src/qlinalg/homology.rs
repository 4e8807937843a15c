use std::collections::HashMap;

use super::echelon::{kernel_over, Echelon};
use super::field::Field;
use super::matrix::{Mat, SparseVec};
use super::LinalgError;

/// A chosen basis of `ker(d_out) / im(d_in)` together with the elimination
/// data needed to express any cycle in it.
///
/// Boundaries are inserted first, then cycles; the class representatives are
/// the echelon rows contributed by cycles, so reduction coefficients on those
/// rows are homology coordinates.
#[derive(Clone, Debug)]
pub struct HomologyBasis<F: Field> {
    ech: Echelon<F>,
    boundary_rank: usize,
    class_rows: Vec<usize>,
    class_pos: HashMap<usize, usize>,
    dim: usize,
}

impl<F: Field> HomologyBasis<F> {
    pub fn new(field: &F, d_in: &Mat<F::El>, d_out: &Mat<F::El>) -> Result<Self, LinalgError> {
        if d_in.rows() != d_out.cols() {
            return Err(LinalgError::Shape(format!(
                "incoming map has {} rows but outgoing map has {} columns",
                d_in.rows(),
                d_out.cols()
            )));
        }
        if !d_out.mul(field, d_in).is_zero() {
            return Err(LinalgError::NotAComplex("outgoing ∘ incoming differential is non-zero".into()));
        }
        let mut ech = Echelon::new(field.clone());
        for col in d_in.columns() {
            ech.insert(col);
        }
        let boundary_rank = ech.rank();
        let mut class_rows = Vec::new();
        for z in kernel_over(field, d_out) {
            if let Some(r) = ech.insert(&z) {
                class_rows.push(r);
            }
        }
        let class_pos = class_rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        Ok(HomologyBasis { ech, boundary_rank, class_rows, class_pos, dim: d_out.cols() })
    }

    pub fn classes(&self) -> usize {
        self.class_rows.len()
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary_rank
    }

    pub fn chain_dim(&self) -> usize {
        self.dim
    }

    pub fn representative(&self, i: usize) -> &SparseVec<F::El> {
        self.ech.row(self.class_rows[i])
    }

    /// Coordinates of the class of `cycle`; `None` if `cycle` is not a cycle.
    pub fn coordinates(&self, cycle: &SparseVec<F::El>) -> Option<Vec<F::El>> {
        let red = self.ech.reduce(cycle);
        if !red.residual.is_empty() {
            return None;
        }
        let field = self.ech.field();
        let mut out = vec![field.zero(); self.classes()];
        for (r, a) in red.coefficients {
            if let Some(&i) = self.class_pos.get(&r) {
                out[i] = a;
            }
        }
        Some(out)
    }

    /// Rank of the span of the classes of `cycles`; `None` if one is not a cycle.
    pub fn image_rank(&self, cycles: &[SparseVec<F::El>]) -> Option<usize> {
        let field = self.ech.field().clone();
        let mut ech = Echelon::new(field.clone());
        for z in cycles {
            let coords = self.coordinates(z)?;
            let v: SparseVec<F::El> = coords
                .into_iter()
                .enumerate()
                .filter(|(_, a)| !field.is_zero(a))
                .collect();
            ech.insert(&v);
        }
        Some(ech.rank())
    }
}

/// Dense square matrix over `F` (homology actions are small).
pub fn dense_to_mat<F: Field>(field: &F, rows: usize, columns: &[Vec<F::El>]) -> Mat<F::El> {
    let cols = columns
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .filter(|(_, a)| !field.is_zero(a))
                .map(|(i, a)| (i, a.clone()))
                .collect()
        })
        .collect();
    Mat::from_columns(rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::field::Rationals;
    use crate::qlinalg::matrix::SparseMatrix;

    #[test]
    fn circle_like_complex() {
        // Q^2 --[1 -1]--> Q : outgoing of the middle term is zero, incoming is (1,1)^T
        let d_in = SparseMatrix::from_dense_i64(&[&[1], &[1]]);
        let d_out = SparseMatrix::zero(0, 2);
        let h = HomologyBasis::new(&Rationals, &d_in, &d_out).unwrap();
        assert_eq!(h.classes(), 1);
        let v = vec![(0, Rationals.from_i64(3)), (1, Rationals.from_i64(3))];
        assert_eq!(h.coordinates(&v).unwrap(), vec![Rationals.from_i64(0)]);
        let w = vec![(0, Rationals.from_i64(1))];
        assert_eq!(h.image_rank(&[w]).unwrap(), 1);
    }

    #[test]
    fn rejects_non_complex() {
        let d_in = SparseMatrix::eye(2);
        let d_out = SparseMatrix::eye(2);
        assert!(HomologyBasis::new(&Rationals, &d_in, &d_out).is_err());
    }
}

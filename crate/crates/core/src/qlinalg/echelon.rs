use std::collections::{BTreeMap, HashMap};

use super::field::Field;
use super::matrix::{Mat, SparseVec};

/// Incremental echelon basis. Every stored row has a distinct lead index,
/// lead coefficient one, and no entries below its lead. Rows are never
/// modified once stored, so rows inserted first keep spanning what they
/// spanned; reduction coefficients are therefore unique.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    rows: Vec<SparseVec<F::El>>,
    lead_of: HashMap<usize, usize>,
}

/// Result of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction<E> {
    /// What is left; empty iff the vector lies in the span.
    pub residual: SparseVec<E>,
    /// `(row index, coefficient)` such that `v = residual + sum coeff * row`.
    pub coefficients: Vec<(usize, E)>,
}

fn sub_scaled<F: Field>(field: &F, work: &mut BTreeMap<usize, F::El>, a: &F::El, row: &[(usize, F::El)]) {
    for (j, x) in row {
        let delta = field.mul(a, x);
        match work.get_mut(j) {
            Some(slot) => {
                *slot = field.sub(slot, &delta);
                if field.is_zero(slot) {
                    work.remove(j);
                }
            }
            None => {
                work.insert(*j, field.neg(&delta));
            }
        }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F) -> Self {
        Echelon { field, rows: Vec::new(), lead_of: HashMap::new() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &SparseVec<F::El> {
        &self.rows[i]
    }

    /// Full reduction: every entry sitting on a lead is eliminated.
    pub fn reduce(&self, v: &SparseVec<F::El>) -> Reduction<F::El> {
        self.reduce_inner(v, true)
    }

    fn reduce_inner(&self, v: &SparseVec<F::El>, full: bool) -> Reduction<F::El> {
        let mut work: BTreeMap<usize, F::El> = v.iter().cloned().collect();
        let mut coefficients = Vec::new();
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).next().map(|(k, _)| *k);
            let Some(c) = next else { break };
            match self.lead_of.get(&c) {
                Some(&r) => {
                    let a = work.remove(&c).expect("present");
                    sub_scaled(&self.field, &mut work, &a, &self.rows[r][1..]);
                    coefficients.push((r, a));
                }
                None => {
                    if !full {
                        break;
                    }
                    cursor = c + 1;
                }
            }
        }
        Reduction { residual: work.into_iter().collect(), coefficients }
    }

    pub fn contains(&self, v: &SparseVec<F::El>) -> bool {
        self.reduce(v).residual.is_empty()
    }

    /// Inserts `v` if it is independent of the stored rows; returns the new
    /// row index.
    pub fn insert(&mut self, v: &SparseVec<F::El>) -> Option<usize> {
        let red = self.reduce_inner(v, false);
        self.push_normalized(red.residual)
    }

    fn push_normalized(&mut self, residual: SparseVec<F::El>) -> Option<usize> {
        let (lead, lead_val) = residual.first().cloned()?;
        let inv = self.field.inv(&lead_val);
        let row: SparseVec<F::El> = residual
            .into_iter()
            .map(|(j, x)| (j, self.field.mul(&inv, &x)))
            .collect();
        let idx = self.rows.len();
        self.rows.push(row);
        self.lead_of.insert(lead, idx);
        Some(idx)
    }
}

/// Row relabelling that puts sparse rows first; used as a static pivot order.
fn sparsity_order<E: Clone>(m: &Mat<E>) -> (Vec<usize>, Vec<usize>) {
    let mut row_count = vec![0usize; m.rows()];
    for col in m.columns() {
        for (r, _) in col {
            row_count[*r] += 1;
        }
    }
    let mut rows: Vec<usize> = (0..m.rows()).collect();
    rows.sort_by_key(|&r| (row_count[r], r));
    let mut row_perm = vec![0usize; m.rows()];
    for (new, old) in rows.iter().enumerate() {
        row_perm[*old] = new;
    }
    let mut cols: Vec<usize> = (0..m.cols()).collect();
    cols.sort_by_key(|&c| (m.column(c).len(), c));
    (row_perm, cols)
}

pub fn rank_over<F: Field>(field: &F, m: &Mat<F::El>) -> usize {
    let (row_perm, col_order) = sparsity_order(m);
    let mut ech = Echelon::new(field.clone());
    for c in col_order {
        let mut v: SparseVec<F::El> = m.column(c).iter().map(|(r, x)| (row_perm[*r], x.clone())).collect();
        v.sort_by_key(|(r, _)| *r);
        ech.insert(&v);
        if ech.rank() == m.rows() {
            break;
        }
    }
    ech.rank()
}

/// Basis of the kernel; each vector has a distinguished column with
/// coefficient one that no earlier vector touches.
pub fn kernel_over<F: Field>(field: &F, m: &Mat<F::El>) -> Vec<SparseVec<F::El>> {
    let mut rows: Vec<SparseVec<F::El>> = Vec::new();
    let mut combos: Vec<BTreeMap<usize, F::El>> = Vec::new();
    let mut lead_of: HashMap<usize, usize> = HashMap::new();
    let mut kernel = Vec::new();
    for j in 0..m.cols() {
        let mut work: BTreeMap<usize, F::El> = m.column(j).iter().cloned().collect();
        let mut combo: BTreeMap<usize, F::El> = BTreeMap::new();
        combo.insert(j, field.one());
        loop {
            let Some((&c, _)) = work.iter().next() else { break };
            match lead_of.get(&c) {
                Some(&r) => {
                    let a = work.remove(&c).expect("present");
                    sub_scaled(field, &mut work, &a, &rows[r][1..]);
                    let cr: Vec<(usize, F::El)> = combos[r].iter().map(|(k, v)| (*k, v.clone())).collect();
                    sub_scaled(field, &mut combo, &a, &cr);
                }
                None => break,
            }
        }
        if work.is_empty() {
            kernel.push(combo.into_iter().collect());
        } else {
            let (&lead, lead_val) = work.iter().next().expect("nonempty");
            let inv = field.inv(lead_val);
            let row: SparseVec<F::El> = work.iter().map(|(k, v)| (*k, field.mul(&inv, v))).collect();
            let combo_scaled = combo.iter().map(|(k, v)| (*k, field.mul(&inv, v))).collect();
            lead_of.insert(lead, rows.len());
            rows.push(row);
            combos.push(combo_scaled);
        }
    }
    kernel
}

/// Reduced row echelon form of the row space spanned by `vectors`, returned
/// as rows with pivot entry one and zeros in every other pivot column.
pub fn rref_rows<F: Field>(field: &F, vectors: &[SparseVec<F::El>]) -> (Vec<SparseVec<F::El>>, Vec<usize>) {
    let mut ech = Echelon::new(field.clone());
    for v in vectors {
        ech.insert(v);
    }
    let mut rows: Vec<SparseVec<F::El>> = ech.rows.clone();
    rows.sort_by_key(|r| r[0].0);
    let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    // back substitution, last pivot first
    for i in (0..rows.len()).rev() {
        let pivot_row = rows[i].clone();
        let p = pivots[i];
        for row in rows.iter_mut().take(i) {
            if let Ok(k) = row.binary_search_by_key(&p, |(j, _)| *j) {
                let a = field.neg(&row[k].1);
                *row = super::matrix::axpy(field, row, &a, &pivot_row);
            }
        }
    }
    (rows, pivots)
}

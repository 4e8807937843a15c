//! Exact and multi-modular sparse linear algebra.
//!
//! Everything is generic over [`Field`]; the public entry points take a
//! [`RankMode`] and dispatch either to the rationals or to a list of large
//! primes. Modular ranks are lower bounds for the rational rank and agree
//! with it for all but finitely many primes, so the maximum over the primes
//! is reported together with whether two primes agree on it.

mod echelon;
mod field;
mod homology;
mod matrix;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use echelon::{kernel_over, rank_over, rref_rows, Echelon, Reduction};
pub use field::{is_prime_u64, Field, PrimeField, Rationals};
pub use homology::{dense_to_mat, HomologyBasis};
pub use matrix::{axpy, collect_vec, Mat, SparseMatrix, SparseVec};

pub type Rational = BigRational;

/// `n / d` as a reduced rational.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Default moduli, all just below 2^31.
pub const DEFAULT_PRIMES: [u64; 3] = [2147483647, 2147483629, 2147483587];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("rank of projector ({rank}) differs from its trace ({trace})")]
    TraceMismatch { rank: usize, trace: String },
    #[error("invalid prime list: {0}")]
    InvalidPrimes(String),
    #[error("every prime in {0:?} divides a denominator")]
    AllPrimesFailed(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMode {
    Exact,
    Modular(Vec<u64>),
}

impl RankMode {
    pub fn modular_default() -> Self {
        RankMode::Modular(DEFAULT_PRIMES[..2].to_vec())
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        let RankMode::Modular(ps) = self else { return Ok(()) };
        if ps.is_empty() {
            return Err(LinalgError::InvalidPrimes("empty".into()));
        }
        for (i, p) in ps.iter().enumerate() {
            if *p <= 1 << 20 || *p >= 1 << 32 {
                return Err(LinalgError::InvalidPrimes(format!("{p} is outside (2^20, 2^32)")));
            }
            if !is_prime_u64(*p) {
                return Err(LinalgError::InvalidPrimes(format!("{p} is not prime")));
            }
            if ps[..i].contains(p) {
                return Err(LinalgError::InvalidPrimes(format!("{p} repeated")));
            }
        }
        Ok(())
    }
}

/// How a number was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Arithmetic {
    Exact,
    Modular { primes: Vec<u64>, agree: bool },
}

impl Arithmetic {
    /// Combines provenance of several computations feeding one number.
    pub fn merge(&self, other: &Arithmetic) -> Arithmetic {
        match (self, other) {
            (Arithmetic::Exact, x) | (x, Arithmetic::Exact) => x.clone(),
            (Arithmetic::Modular { primes: a, agree: x }, Arithmetic::Modular { primes: b, agree: y }) => {
                let mut primes = a.clone();
                for p in b {
                    if !primes.contains(p) {
                        primes.push(*p);
                    }
                }
                Arithmetic::Modular { primes, agree: *x && *y }
            }
        }
    }

    pub fn is_trustworthy(&self) -> bool {
        match self {
            Arithmetic::Exact => true,
            Arithmetic::Modular { agree, .. } => *agree,
        }
    }
}

/// Reduces a rational matrix into `field`; `None` if a denominator vanishes.
pub fn to_field<F: Field>(field: &F, m: &SparseMatrix) -> Option<Mat<F::El>> {
    m.try_map(|v| field.from_rational(v)).map(|x| x.pruned(field))
}

/// Runs `task` over each usable prime, skipping primes that divide a
/// denominator. Returns `(prime, value)` pairs in list order.
pub fn per_prime<T>(
    primes: &[u64],
    mut task: impl FnMut(&PrimeField) -> Option<T>,
) -> Result<Vec<(u64, T)>, LinalgError> {
    let mut out = Vec::new();
    for p in primes {
        let f = PrimeField::new(*p);
        if let Some(v) = task(&f) {
            out.push((*p, v));
        }
    }
    if out.is_empty() {
        return Err(LinalgError::AllPrimesFailed(primes.to_vec()));
    }
    Ok(out)
}

/// Rank together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    pub arithmetic: Arithmetic,
}

/// Picks the maximum of per-prime values and whether two primes agree on it.
fn max_agreeing(values: &[(u64, usize)]) -> (usize, Arithmetic) {
    let best = values.iter().map(|(_, r)| *r).max().expect("non-empty");
    let hits = values.iter().filter(|(_, r)| *r == best).count();
    let primes = values.iter().map(|(p, _)| *p).collect();
    (best, Arithmetic::Modular { primes, agree: hits >= 2 })
}

pub fn rank_detailed(m: &SparseMatrix, mode: &RankMode) -> Result<RankOutcome, LinalgError> {
    mode.validate()?;
    match mode {
        RankMode::Exact => Ok(RankOutcome { rank: rank_over(&Rationals, m), arithmetic: Arithmetic::Exact }),
        RankMode::Modular(ps) => {
            let values = per_prime(ps, |f| to_field(f, m).map(|mp| rank_over(f, &mp)))?;
            let (rank, arithmetic) = max_agreeing(&values);
            Ok(RankOutcome { rank, arithmetic })
        }
    }
}

pub fn rank(m: &SparseMatrix, mode: &RankMode) -> Result<usize, LinalgError> {
    rank_detailed(m, mode).map(|o| o.rank)
}

/// Kernel basis over the rationals: `cols - rank` independent vectors.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec<Rational>> {
    kernel_over(&Rationals, m)
}

/// `dim ker(d_out) - rank(d_in)` after checking `d_out * d_in = 0`.
pub fn homology_dimension(d_in: &SparseMatrix, d_out: &SparseMatrix, mode: &RankMode) -> Result<usize, LinalgError> {
    homology_dimension_detailed(d_in, d_out, mode).map(|(d, _)| d)
}

pub fn homology_dimension_detailed(
    d_in: &SparseMatrix,
    d_out: &SparseMatrix,
    mode: &RankMode,
) -> Result<(usize, Arithmetic), LinalgError> {
    mode.validate()?;
    if d_in.rows() != d_out.cols() {
        return Err(LinalgError::Shape(format!(
            "incoming map lands in dimension {} but outgoing map starts from {}",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let n = d_out.cols();
    match mode {
        RankMode::Exact => {
            if !d_out.times(d_in).is_zero() {
                return Err(LinalgError::NotAComplex("outgoing ∘ incoming differential is non-zero".into()));
            }
            let r_out = rank_over(&Rationals, d_out);
            let r_in = rank_over(&Rationals, d_in);
            Ok((n - r_out - r_in, Arithmetic::Exact))
        }
        RankMode::Modular(ps) => {
            let mut composition_failed = false;
            let values = per_prime(ps, |f| {
                let a = to_field(f, d_in)?;
                let b = to_field(f, d_out)?;
                if !b.mul(f, &a).is_zero() {
                    composition_failed = true;
                }
                Some((rank_over(f, &a), rank_over(f, &b)))
            })?;
            if composition_failed {
                return Err(LinalgError::NotAComplex("outgoing ∘ incoming differential is non-zero".into()));
            }
            let r_in: Vec<(u64, usize)> = values.iter().map(|(p, (a, _))| (*p, *a)).collect();
            let r_out: Vec<(u64, usize)> = values.iter().map(|(p, (_, b))| (*p, *b)).collect();
            let (ri, ai) = max_agreeing(&r_in);
            let (ro, ao) = max_agreeing(&r_out);
            Ok((n - ri - ro, ai.merge(&ao)))
        }
    }
}

/// Rank of an idempotent, which is the dimension of its image. Exact mode
/// also checks the rank against the trace.
pub fn projector_invariant_dim(p: &SparseMatrix, mode: &RankMode) -> Result<usize, LinalgError> {
    mode.validate()?;
    if p.rows() != p.cols() {
        return Err(LinalgError::Shape(format!("projector is {}x{}", p.rows(), p.cols())));
    }
    match mode {
        RankMode::Exact => {
            if p.times(p) != *p {
                return Err(LinalgError::NotIdempotent);
            }
            let r = rank_over(&Rationals, p);
            let t = p.trace(&Rationals);
            if !t.is_integer() || t.to_integer().to_usize() != Some(r) {
                return Err(LinalgError::TraceMismatch { rank: r, trace: t.to_string() });
            }
            Ok(r)
        }
        RankMode::Modular(ps) => {
            let mut not_idempotent = false;
            let values = per_prime(ps, |f| {
                let m = to_field(f, p)?;
                if m.mul(f, &m) != m {
                    not_idempotent = true;
                }
                Some(rank_over(f, &m))
            })?;
            if not_idempotent {
                return Err(LinalgError::NotIdempotent);
            }
            Ok(max_agreeing(&values).0)
        }
    }
}

/// Rank and trace agreement for an idempotent over any field.
pub fn idempotent_rank_over<F: Field>(field: &F, p: &Mat<F::El>) -> Result<usize, LinalgError> {
    if p.mul(field, p) != *p {
        return Err(LinalgError::NotIdempotent);
    }
    let r = rank_over(field, p);
    let t = p.trace(field);
    if t != field.from_i64(r as i64) {
        return Err(LinalgError::TraceMismatch { rank: r, trace: format!("{t:?}") });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact() -> RankMode {
        RankMode::Exact
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::zero(3, 3), &exact()).unwrap(), 0);
        assert_eq!(rank(&SparseMatrix::eye(3), &exact()).unwrap(), 3);
        let m = SparseMatrix::from_dense_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&m, &exact()).unwrap(), 1);
        assert_eq!(rank(&m, &RankMode::modular_default()).unwrap(), 1);
    }

    #[test]
    fn modular_rank_reports_agreement() {
        let m = SparseMatrix::from_dense_i64(&[&[1, 2], &[3, 4]]);
        let out = rank_detailed(&m, &RankMode::modular_default()).unwrap();
        assert_eq!(out.rank, 2);
        assert!(out.arithmetic.is_trustworthy());
    }

    #[test]
    fn modular_skips_prime_dividing_denominator() {
        let p = 1048583u64;
        let m = SparseMatrix::from_triplets(
            &Rationals,
            1,
            1,
            vec![(0, 0, Rational::new(BigInt::from(1), BigInt::from(p)))],
        );
        assert_eq!(rank(&m, &RankMode::Modular(vec![p, 2147483647])).unwrap(), 1);
        assert_eq!(rank(&m, &RankMode::Modular(vec![p])), Err(LinalgError::AllPrimesFailed(vec![p])));
    }

    #[test]
    fn prime_list_validation() {
        assert!(RankMode::Modular(vec![]).validate().is_err());
        assert!(RankMode::Modular(vec![101]).validate().is_err());
        assert!(RankMode::Modular(vec![2147483647, 2147483647]).validate().is_err());
        assert!(RankMode::Modular(vec![2147483649]).validate().is_err());
        assert!(RankMode::Modular(DEFAULT_PRIMES.to_vec()).validate().is_ok());
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::eye(2)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zero(1, 2)).len(), 2);
        let m = SparseMatrix::from_dense_i64(&[&[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].1, -v[1].1.clone());
    }

    #[test]
    fn homology_dimension_examples() {
        let mode = exact();
        // 0 -> Q^2 -> 0
        assert_eq!(homology_dimension(&SparseMatrix::zero(2, 0), &SparseMatrix::zero(0, 2), &mode).unwrap(), 2);
        // Q^2 --id--> Q^2 -> 0
        assert_eq!(homology_dimension(&SparseMatrix::eye(2), &SparseMatrix::zero(0, 2), &mode).unwrap(), 0);
        let two = SparseMatrix::from_dense_i64(&[&[2]]);
        assert_eq!(homology_dimension(&two, &SparseMatrix::zero(0, 1), &mode).unwrap(), 0);
        assert_eq!(
            homology_dimension(&two, &SparseMatrix::zero(0, 1), &RankMode::modular_default()).unwrap(),
            0
        );
    }

    #[test]
    fn homology_dimension_rejects_bad_complex() {
        let err = homology_dimension(&SparseMatrix::eye(1), &SparseMatrix::eye(1), &exact()).unwrap_err();
        assert!(matches!(err, LinalgError::NotAComplex(_)));
        let err = homology_dimension(&SparseMatrix::eye(2), &SparseMatrix::eye(1), &exact()).unwrap_err();
        assert!(matches!(err, LinalgError::Shape(_)));
    }

    #[test]
    fn projector_examples() {
        assert_eq!(projector_invariant_dim(&SparseMatrix::eye(4), &exact()).unwrap(), 4);
        let half_swap = SparseMatrix::from_triplets(
            &Rationals,
            2,
            2,
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j, q(1, 2)))),
        );
        assert_eq!(projector_invariant_dim(&half_swap, &exact()).unwrap(), 1);
        assert_eq!(projector_invariant_dim(&half_swap, &RankMode::modular_default()).unwrap(), 1);
        assert_eq!(projector_invariant_dim(&SparseMatrix::zero(3, 3), &exact()).unwrap(), 0);
        let not_proj = SparseMatrix::from_dense_i64(&[&[2]]);
        assert_eq!(projector_invariant_dim(&not_proj, &exact()), Err(LinalgError::NotIdempotent));
    }
}

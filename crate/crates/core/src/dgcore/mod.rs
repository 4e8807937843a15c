//! Finite dg categories, dg functors and natural transformations.

mod category;
mod construct;
mod functor;
mod perm;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qlinalg::{Rational, SparseVec};

pub use category::{validate_category, BasisElement, CategoryBuilder, DgCategory};
pub use construct::{opposite, tensor, tensor_power};
pub use functor::{
    compose_functors, permutation_functor, permutation_functor_on, star, tensor_functor, validate_functor, validate_nat_transform, DgFunctor,
    NatTransform,
};
pub use perm::Permutation;

pub(crate) use category::minus_one_pow;

/// Finite linear combination of basis elements, sorted and zero-free.
pub type LinComb = SparseVec<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("unknown {0}")]
    Unknown(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("tensor power must have at least one factor")]
    EmptyTensorPower,
    #[error("categories do not match: {0}")]
    Mismatch(String),
}

/// Which axiom a diagnostic is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    UnitDegree,
    UnitClosed,
    ComposeTyping,
    ComposeDegree,
    DiffTyping,
    DiffSquare,
    Associativity,
    LeftUnit,
    RightUnit,
    Leibniz,
    ObjectMap,
    HomTyping,
    PreservesUnits,
    PreservesComposition,
    CommutesWithDiff,
    ComponentTyping,
    Naturality,
    ComponentClosed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub axiom: Axiom,
    pub elements: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} [{}]: {}", self.axiom, self.elements.join(", "), self.detail)
    }
}

/// Graded dimensions; degrees with dimension zero are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims(BTreeMap<i64, u64>);

impl GradedDims {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, u64)>>(pairs: I) -> Self {
        let mut g = GradedDims::new();
        for (d, n) in pairs {
            g.add(d, n);
        }
        g
    }

    /// Dimensions listed for consecutive degrees starting at `first`.
    pub fn from_slice(first: i64, dims: &[u64]) -> Self {
        Self::from_pairs(dims.iter().enumerate().map(|(i, n)| (first + i as i64, *n)))
    }

    pub fn get(&self, degree: i64) -> u64 {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn set(&mut self, degree: i64, n: u64) {
        if n == 0 {
            self.0.remove(&degree);
        } else {
            self.0.insert(degree, n);
        }
    }

    pub fn add(&mut self, degree: i64, n: u64) {
        let v = self.get(degree) + n;
        self.set(degree, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.0.iter().map(|(d, n)| (*d, *n))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    /// Dimensions on `lo..=hi`, zeros included.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<u64> {
        (lo..=hi).map(|d| self.get(d)).collect()
    }

    /// Keeps only degrees in `lo..=hi`.
    pub fn restricted(&self, lo: i64, hi: i64) -> GradedDims {
        GradedDims(self.0.range(lo..=hi).map(|(d, n)| (*d, *n)).collect())
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_dims_drops_zeros() {
        let g = GradedDims::from_slice(-2, &[1, 0, 3]);
        assert_eq!(g.iter().collect::<Vec<_>>(), vec![(-2, 1), (0, 3)]);
        assert_eq!(g.window(-3, 0), vec![0, 1, 0, 3]);
        assert_eq!(g.total(), 4);
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"-2":1,"0":3}"#);
    }
}

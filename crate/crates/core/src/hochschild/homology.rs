use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::complex::{truncation_obstruction, StandardComplex};
use super::HochschildError;
use crate::dgcore::GradedDims;
use crate::qlinalg::{homology_dimension_detailed, to_field, Arithmetic, Field, HomologyBasis, RankMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub dim: u64,
    pub certificate: Certificate,
    pub arithmetic: Arithmetic,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Homology per total (cohomological) degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub degrees: BTreeMap<i64, DegreeHomology>,
}

impl HomologySummary {
    pub fn dims(&self) -> GradedDims {
        GradedDims::from_pairs(self.degrees.iter().map(|(k, h)| (*k, h.dim)))
    }

    pub fn dim(&self, k: i64) -> u64 {
        self.degrees.get(&k).map_or(0, |h| h.dim)
    }

    /// Dimensions at homological degrees `lo..=hi`, i.e. total degrees `-lo..=-hi`.
    pub fn homological(&self, lo: i64, hi: i64) -> Vec<u64> {
        (lo..=hi).map(|m| self.dim(-m)).collect()
    }

    pub fn all_exact(&self) -> bool {
        self.degrees.values().all(|h| h.certificate == Certificate::Exact)
    }

    pub fn all_trustworthy(&self) -> bool {
        self.degrees.values().all(|h| h.arithmetic.is_trustworthy())
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.degrees.values().fold(Arithmetic::Exact, |a, h| a.merge(&h.arithmetic))
    }
}

fn certify(sc: &StandardComplex, k: i64) -> (Certificate, Option<String>) {
    match truncation_obstruction(sc.category().degree_bounds(), sc.max_level(), k) {
        None => (Certificate::Exact, None),
        Some(m) => (
            Certificate::Heuristic,
            Some(format!(
                "level {m} lies beyond the truncation at {} and can reach degrees {}..={}; compare with a larger level",
                sc.max_level(),
                k - 1,
                k + 1
            )),
        ),
    }
}

/// Homology of the truncated total complex in each requested total degree.
pub fn total_homology(
    sc: &StandardComplex,
    degrees: RangeInclusive<i64>,
    mode: &RankMode,
) -> Result<HomologySummary, HochschildError> {
    let mut out = HomologySummary::default();
    for k in degrees {
        let d_in = sc.total_differential(k - 1);
        let d_out = sc.total_differential(k);
        let (dim, arithmetic) = homology_dimension_detailed(&d_in, &d_out, mode)?;
        let (certificate, reason) = certify(sc, k);
        out.degrees.insert(k, DegreeHomology { dim: dim as u64, certificate, arithmetic, reason });
    }
    Ok(out)
}

/// Chosen homology bases over one field, per total degree.
#[derive(Clone, Debug)]
pub struct HomologyBases<F: Field> {
    field: F,
    bases: BTreeMap<i64, HomologyBasis<F>>,
}

impl<F: Field> HomologyBases<F> {
    /// `None` if a structure constant cannot be reduced into `field`.
    pub fn new(field: &F, sc: &StandardComplex, degrees: RangeInclusive<i64>) -> Result<Option<Self>, HochschildError> {
        let mut bases = BTreeMap::new();
        for k in degrees {
            let (Some(d_in), Some(d_out)) =
                (to_field(field, &sc.total_differential(k - 1)), to_field(field, &sc.total_differential(k)))
            else {
                return Ok(None);
            };
            bases.insert(k, HomologyBasis::new(field, &d_in, &d_out)?);
        }
        Ok(Some(HomologyBases { field: field.clone(), bases }))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn get(&self, k: i64) -> Option<&HomologyBasis<F>> {
        self.bases.get(&k)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.bases.keys().copied()
    }

    pub fn dims(&self) -> GradedDims {
        GradedDims::from_pairs(self.bases.iter().map(|(k, b)| (*k, b.classes() as u64)))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dgcore::{tensor, DgCategory, Permutation};
    use crate::fixtures;
    use crate::hochschild::{build_complex, TwistSpec};

    fn exact() -> RankMode {
        RankMode::Exact
    }

    fn dims(c: DgCategory, twist: TwistSpec, n: usize, normalized: bool, hi: i64) -> Vec<u64> {
        let sc = build_complex(Arc::new(c), &twist, n, normalized).unwrap();
        let h = total_homology(&sc, -hi..=0, &exact()).unwrap();
        assert!(h.all_exact());
        h.homological(0, hi)
    }

    #[test]
    fn ground_field_is_concentrated_in_degree_zero() {
        for normalized in [true, false] {
            assert_eq!(dims(fixtures::ground_field(), TwistSpec::Identity, 4, normalized, 3), vec![1, 0, 0, 0]);
        }
    }

    /// Independent oracle: the 2-periodic resolution of `k[x]/x²` over its
    /// enveloping algebra gives the complex `D ← D ← D ← …` whose maps,
    /// after tensoring with `D` over the enveloping algebra, are `x - x = 0`
    /// and `x + x = 2x` alternately.
    fn dual_numbers_oracle(top: usize) -> Vec<u64> {
        use crate::qlinalg::{homology_dimension, SparseMatrix};
        let zero = SparseMatrix::zero(2, 2);
        let two_x = SparseMatrix::from_dense_i64(&[&[0, 0], &[2, 0]]);
        let map_into = |m: usize| -> SparseMatrix {
            // map from homological degree m + 1 to m
            if m % 2 == 0 {
                zero.clone()
            } else {
                two_x.clone()
            }
        };
        (0..=top)
            .map(|m| {
                let d_in = map_into(m);
                let d_out = if m == 0 { SparseMatrix::zero(0, 2) } else { map_into(m - 1) };
                homology_dimension(&d_in, &d_out, &RankMode::Exact).unwrap() as u64
            })
            .collect()
    }

    #[test]
    fn dual_numbers_against_periodic_resolution() {
        let oracle = dual_numbers_oracle(4);
        assert_eq!(oracle, vec![2, 1, 1, 1, 1]);
        assert_eq!(dims(fixtures::dual_numbers(), TwistSpec::Identity, 5, true, 4), oracle);
        assert_eq!(dims(fixtures::dual_numbers(), TwistSpec::Identity, 5, false, 4), oracle);
    }

    #[test]
    fn normalized_and_full_agree() {
        let swap = TwistSpec::Permutation { n: 2, perm: Permutation::from_cycles(2, "(1 2)").unwrap() };
        let cases: Vec<(DgCategory, TwistSpec)> = vec![
            (fixtures::ground_field(), TwistSpec::Identity),
            (fixtures::dual_numbers(), TwistSpec::Identity),
            (tensor(&fixtures::dual_numbers(), &fixtures::dual_numbers()), TwistSpec::Identity),
            (fixtures::dual_numbers(), swap),
            (fixtures::quiver_a2(), TwistSpec::Identity),
            (fixtures::exterior(-1), TwistSpec::Identity),
        ];
        for (c, t) in cases {
            let c = Arc::new(c);
            let a = build_complex(c.clone(), &t, 3, true).unwrap();
            let b = build_complex(c, &t, 3, false).unwrap();
            let ha = total_homology(&a, -4..=1, &exact()).unwrap();
            let hb = total_homology(&b, -4..=1, &exact()).unwrap();
            for (k, x) in &ha.degrees {
                if x.certificate == Certificate::Exact {
                    assert_eq!(x.dim, hb.degrees[k].dim, "degree {k} for {}", t.label());
                }
            }
        }
    }

    #[test]
    fn swap_twist_on_dual_numbers_squared() {
        let swap = TwistSpec::Permutation { n: 2, perm: Permutation::from_cycles(2, "(1 2)").unwrap() };
        assert_eq!(dims(fixtures::dual_numbers(), swap, 4, true, 3), vec![2, 1, 1, 1]);
    }

    #[test]
    fn modular_agrees_with_exact() {
        let sc = build_complex(Arc::new(fixtures::dual_numbers()), &TwistSpec::Identity, 4, true).unwrap();
        let e = total_homology(&sc, -3..=0, &exact()).unwrap();
        let m = total_homology(&sc, -3..=0, &RankMode::modular_default()).unwrap();
        assert_eq!(e.dims(), m.dims());
        assert!(m.all_trustworthy());
    }

    #[test]
    fn beyond_truncation_is_heuristic() {
        let sc = build_complex(Arc::new(fixtures::dual_numbers()), &TwistSpec::Identity, 2, true).unwrap();
        let h = total_homology(&sc, -3..=0, &exact()).unwrap();
        assert_eq!(h.degrees[&-1].certificate, Certificate::Exact);
        assert_eq!(h.degrees[&-2].certificate, Certificate::Heuristic);
        assert!(h.degrees[&-2].reason.is_some());
    }

    #[test]
    fn homology_bases_match_dimensions() {
        let sc = build_complex(Arc::new(fixtures::dual_numbers()), &TwistSpec::Identity, 4, true).unwrap();
        let b = HomologyBases::new(&crate::qlinalg::Rationals, &sc, -3..=0).unwrap().unwrap();
        assert_eq!(b.dims(), GradedDims::from_slice(-3, &[1, 1, 1, 2]));
    }
}

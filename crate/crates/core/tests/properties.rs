use std::collections::BTreeMap;
use std::sync::Arc;

use hhwb_core::contraction::{random_bimodule, warmup_factorization, FiniteAlgebra};
use hhwb_core::decomposition::{partitions, rhs_dims, super_sym_power_dims};
use hhwb_core::dgcore::{
    compose_functors, opposite, permutation_functor, tensor, validate_category, DgCategory, DgFunctor, GradedDims,
    Permutation,
};
use hhwb_core::fixtures;
use hhwb_core::hochschild::{total_homology, StandardComplex};
use hhwb_core::kunneth::shuffles;
use hhwb_core::qlinalg::{
    idempotent_rank_over, kernel_basis, q, rank, rank_over, to_field, Mat, RankMode, Rationals, SparseMatrix,
};
use proptest::prelude::*;

const PRIMES: [u64; 2] = [2_147_483_629, 2_147_483_587];

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..5], c), r)
    })
}

fn sparse(rows: &[Vec<i64>]) -> SparseMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    SparseMatrix::from_dense_i64(&refs)
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn corpus() -> Vec<DgCategory> {
    vec![
        fixtures::ground_field(),
        fixtures::dual_numbers(),
        fixtures::truncated_polynomial(3),
        fixtures::quiver_a2(),
        fixtures::path_algebra_a2(),
        fixtures::exterior(-1),
        fixtures::contractible_dg(),
    ]
}

fn homology(c: DgCategory) -> GradedDims {
    let c = Arc::new(c);
    let sc = StandardComplex::new(c.clone(), Arc::new(DgFunctor::identity(c)), 3, true).unwrap();
    total_homology(&sc, -2..=0, &RankMode::Exact).unwrap().dims()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn modular_rank_agrees_with_one_prime(rows in matrix()) {
        let m = sparse(&rows);
        let exact = rank(&m, &RankMode::Exact).unwrap();
        let agree = PRIMES.iter().any(|p| rank(&m, &RankMode::Modular(vec![*p])).unwrap() == exact);
        prop_assert!(agree);
    }

    #[test]
    fn kernel_vectors_are_killed(rows in matrix()) {
        let m = sparse(&rows);
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.len(), m.cols() - rank(&m, &RankMode::Exact).unwrap());
        for v in &ker {
            prop_assert!(m.apply(&Rationals, v).is_empty());
        }
    }

    #[test]
    fn rank_ignores_row_and_column_order(
        (rows, rp, cp) in matrix().prop_flat_map(|rows| {
            let (r, c) = (rows.len(), rows[0].len());
            (Just(rows), shuffled(r), shuffled(c))
        })
    ) {
        let m = sparse(&rows);
        let moved = m.permuted(&rp, &cp);
        prop_assert_eq!(rank(&m, &RankMode::Exact).unwrap(), rank(&moved, &RankMode::Exact).unwrap());
    }

    /// `E D E⁻¹` with `E` unitriangular and `D` a 0/1 diagonal.
    #[test]
    fn idempotent_rank_is_trace(
        diag in prop::collection::vec(any::<bool>(), 1..6),
        upper in prop::collection::vec(-3i64..4, 15),
    ) {
        let n = diag.len();
        let f = Rationals;
        let mut e = vec![vec![0i64; n]; n];
        let mut k = 0;
        for i in 0..n {
            e[i][i] = 1;
            for j in i + 1..n {
                e[i][j] = upper[k];
                k += 1;
            }
        }
        let e = to_field(&f, &sparse(&e)).unwrap();
        // inverse of a unitriangular matrix by back substitution on columns
        let mut inv_cols = Vec::new();
        for j in 0..n {
            let mut x = vec![q(0, 1); n];
            for i in (0..n).rev() {
                let mut s = if i == j { q(1, 1) } else { q(0, 1) };
                for (r, v) in (i + 1..n).filter_map(|r| e.get(i, r).map(|v| (r, v.clone()))) {
                    s -= v * x[r].clone();
                }
                x[i] = s;
            }
            inv_cols.push(x.into_iter().enumerate().filter(|(_, v)| *v != q(0, 1)).collect());
        }
        let e_inv = Mat::from_columns(n, inv_cols);
        prop_assert_eq!(e.mul(&f, &e_inv), Mat::identity(&f, n));
        let d = Mat::from_triplets(&f, n, n, diag.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| (i, i, q(1, 1))));
        let p = e.mul(&f, &d).mul(&f, &e_inv);
        let r = idempotent_rank_over(&f, &p).unwrap();
        prop_assert_eq!(r, diag.iter().filter(|b| **b).count());
        prop_assert_eq!(r, rank_over(&f, &p));
    }

    #[test]
    fn constructions_validate(i in 0usize..7, j in 0usize..7) {
        let cs = corpus();
        let (a, b) = (&cs[i], &cs[j]);
        prop_assert!(validate_category(&opposite(a)).is_empty());
        prop_assert_eq!(&opposite(&opposite(a)), a);
        prop_assert!(validate_category(&tensor(a, b)).is_empty());
    }

    #[test]
    fn strict_action_law(n in 1usize..4, i in 0usize..24, j in 0usize..24, which in 0usize..3) {
        let c = [fixtures::dual_numbers(), fixtures::exterior(-1), fixtures::quiver_a2()][which].clone();
        let all = Permutation::all(n);
        let (g, h) = (&all[i % all.len()], &all[j % all.len()]);
        let rg = permutation_functor(&c, n, g).unwrap();
        let rh = permutation_functor(&c, n, h).unwrap();
        let both = permutation_functor(&c, n, &g.then(h)).unwrap();
        prop_assert_eq!(compose_functors(&rh, &rg).unwrap(), both);
    }

    #[test]
    fn permutation_group_laws(images in shuffled(5), other in shuffled(5), third in shuffled(5)) {
        let (a, b, c) = (
            Permutation::from_images(images).unwrap(),
            Permutation::from_images(other).unwrap(),
            Permutation::from_images(third).unwrap(),
        );
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.to_string().parse::<Permutation>().unwrap(), a.clone());
        let size: usize = a.cycle_type().iter().sum();
        prop_assert_eq!(size, 5);
    }

    #[test]
    fn dims_ignore_basis_order(which in 0usize..7, seed in any::<u64>()) {
        let c = corpus().swap_remove(which);
        let nb = c.num_basis();
        let mut order: Vec<usize> = (0..nb).collect();
        let mut s = seed;
        for i in (1..nb).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let re = c.reorder_basis(&order).unwrap();
        prop_assert!(validate_category(&re).is_empty());
        prop_assert_eq!(homology(re), homology(c));
    }

    #[test]
    fn shuffle_counts_are_binomial(k in 0usize..6, l in 0usize..6) {
        let binom = (1..=k).fold(1usize, |acc, i| acc * (l + i) / i);
        prop_assert_eq!(shuffles(k, l).len(), binom);
    }

    #[test]
    fn series_is_a_product(
        h in prop::collection::btree_map(-3i64..1, 1u64..3, 0..3),
        n in 1usize..5,
    ) {
        let h = GradedDims::from_pairs(h);
        let direct = rhs_dims(&h, n, false).unwrap();
        // the x^0 and x^1 terms of every factor
        prop_assert_eq!(super_sym_power_dims(&h, 1).unwrap(), h.clone());
        prop_assert!(super_sym_power_dims(&h, 0).unwrap().get(0) == 1);
        let mut by_partition = GradedDims::new();
        for lambda in partitions(n) {
            let mut term: BTreeMap<i64, u64> = BTreeMap::from([(0, 1)]);
            for a in lambda.multiplicities().values() {
                let s = super_sym_power_dims(&h, *a).unwrap();
                let mut next = BTreeMap::new();
                for (p, x) in &term {
                    for (q, y) in s.iter() {
                        *next.entry(p + q).or_insert(0) += x * y;
                    }
                }
                term = next;
            }
            for (k, v) in term {
                by_partition.add(k, v);
            }
        }
        prop_assert_eq!(direct, by_partition);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn warmup_factorization_on_random_bimodules(seed in any::<u64>(), which in 0usize..2) {
        let a = FiniteAlgebra::new([fixtures::dual_numbers(), fixtures::ground_field()][which].clone()).unwrap();
        let m = random_bimodule(&a, seed);
        let r = warmup_factorization(&a, &m, "random").unwrap();
        prop_assert!(r.passed(), "{:?}", r);
        let again = warmup_factorization(&a, &random_bimodule(&a, seed), "random").unwrap();
        prop_assert_eq!(r, again);
    }
}

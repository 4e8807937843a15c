//! Small dg categories used throughout the tests and bundled with the CLI.

use std::sync::Arc;

use crate::dgcore::{CategoryBuilder, DgCategory, DgFunctor};
use crate::qlinalg::q;

/// One object, hom spanned by the unit.
pub fn ground_field() -> DgCategory {
    CategoryBuilder::new().object("o").unit("o", "1").build().expect("valid fixture")
}

/// `k[x]/x²` with `x` in degree 0.
pub fn dual_numbers() -> DgCategory {
    truncated_polynomial(2)
}

/// `k[x]/xⁿ` in degree 0; basis `1, x, x2, …`.
pub fn truncated_polynomial(n: usize) -> DgCategory {
    assert!(n >= 1);
    let name = |k: usize| match k {
        0 => "1".to_string(),
        1 => "x".to_string(),
        _ => format!("x{k}"),
    };
    let mut b = CategoryBuilder::new().object("o").unit("o", "1");
    for k in 1..n {
        b = b.morphism(&name(k), "o", "o", 0);
    }
    for i in 1..n {
        for j in 1..n {
            if i + j < n {
                b = b.compose(&name(i), &name(j), &[(&name(i + j), q(1, 1))]);
            }
        }
    }
    b.build().expect("valid fixture")
}

/// `k[x]/x³` with the product `x∘x` overwritten to `1`; not associative.
pub fn broken_truncated_polynomial() -> DgCategory {
    CategoryBuilder::new()
        .object("o")
        .unit("o", "1")
        .morphism("x", "o", "o", 0)
        .morphism("x2", "o", "o", 0)
        .compose("x", "x", &[("1", q(1, 1))])
        .build()
        .expect("structurally well-formed")
}

/// Path category of the quiver `1 → 2`.
pub fn quiver_a2() -> DgCategory {
    CategoryBuilder::new()
        .object("1")
        .object("2")
        .unit("1", "e1")
        .unit("2", "e2")
        .morphism("a", "1", "2", 0)
        .build()
        .expect("valid fixture")
}

/// The path algebra of `1 → 2` as a one-object algebra: unit `1 = e1 + e2`,
/// idempotent `e = e2` and arrow `a` with `e∘a = a` and `a∘e = 0`.
pub fn path_algebra_a2() -> DgCategory {
    CategoryBuilder::new()
        .object("o")
        .unit("o", "1")
        .morphism("e", "o", "o", 0)
        .morphism("a", "o", "o", 0)
        .compose("e", "e", &[("e", q(1, 1))])
        .compose("e", "a", &[("a", q(1, 1))])
        .build()
        .expect("valid fixture")
}

/// Exterior algebra on one generator `y` of the given degree.
pub fn exterior(degree: i64) -> DgCategory {
    CategoryBuilder::new()
        .object("o")
        .unit("o", "1")
        .morphism("y", "o", "o", degree)
        .build()
        .expect("valid fixture")
}

/// Unit plus an acyclic pair `s` (degree -1), `t` (degree 0) with `ds = t`
/// and all products of `s, t` zero; quasi-isomorphic to the ground field.
pub fn contractible_dg() -> DgCategory {
    CategoryBuilder::new()
        .object("o")
        .unit("o", "1")
        .morphism("s", "o", "o", -1)
        .morphism("t", "o", "o", 0)
        .diff("s", &[("t", q(1, 1))])
        .build()
        .expect("valid fixture")
}

/// The automorphism `x ↦ -x` of the dual numbers.
pub fn negation(d: Arc<DgCategory>) -> DgFunctor {
    let one = d.basis_index("1").expect("dual numbers");
    let x = d.basis_index("x").expect("dual numbers");
    let mut images = vec![Vec::new(); d.num_basis()];
    images[one] = vec![(one, q(1, 1))];
    images[x] = vec![(x, q(-1, 1))];
    DgFunctor::new(d.clone(), d, vec![0], images).expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::validate_category;

    #[test]
    fn truncated_polynomials_validate() {
        for n in 1..6 {
            let c = truncated_polynomial(n);
            assert_eq!(c.num_basis(), n);
            assert!(validate_category(&c).is_empty());
        }
    }

    #[test]
    fn path_algebra_is_associative_and_not_commutative() {
        let c = path_algebra_a2();
        assert!(validate_category(&c).is_empty());
        let (e, a) = (c.basis_index("e").unwrap(), c.basis_index("a").unwrap());
        assert_ne!(c.compose_basis(e, a), c.compose_basis(a, e));
    }
}

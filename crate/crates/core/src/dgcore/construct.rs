use std::collections::HashMap;

use super::category::minus_one_pow;
use super::{BasisElement, DgCategory, DgError, LinComb};
use crate::qlinalg::{collect_vec, Rational, Rationals};

/// Opposite category: homs transposed, `g ∘op f = (-1)^{|f||g|} f ∘ g`.
pub fn opposite(c: &DgCategory) -> DgCategory {
    let basis = c
        .basis()
        .iter()
        .map(|b| BasisElement { name: b.name.clone(), src: b.tgt, tgt: b.src, degree: b.degree })
        .collect();
    let compose = c
        .compose_table()
        .iter()
        .map(|(&(g, f), v)| {
            let s = minus_one_pow(c.degree(g) * c.degree(f));
            ((f, g), v.iter().map(|(k, a)| (*k, a * &s)).collect())
        })
        .collect();
    let diff = (0..c.num_basis()).map(|i| c.diff_basis(i).clone()).collect();
    DgCategory::new(c.objects().to_vec(), basis, c.units().to_vec(), compose, diff)
        .expect("opposite of a well-formed presentation is well-formed")
}

fn tensor_lc(x: &LinComb, y: &LinComb, width: usize, sign: &Rational) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for (i, a) in x {
        for (j, b) in y {
            out.push((i * width + j, a * b * sign));
        }
    }
    out
}

/// Tensor product. Pair `(i, j)` of basis elements has index `i * |B| + j`,
/// likewise for objects.
pub fn tensor(a: &DgCategory, b: &DgCategory) -> DgCategory {
    let (na, nb) = (a.num_basis(), b.num_basis());
    let ob = b.num_objects();
    let objects = a
        .objects()
        .iter()
        .flat_map(|x| b.objects().iter().map(move |y| format!("{x}⊗{y}")))
        .collect();
    let mut basis = Vec::with_capacity(na * nb);
    for ea in a.basis() {
        for eb in b.basis() {
            basis.push(BasisElement {
                name: format!("{}⊗{}", ea.name, eb.name),
                src: ea.src * ob + eb.src,
                tgt: ea.tgt * ob + eb.tgt,
                degree: ea.degree + eb.degree,
            });
        }
    }
    let units = (0..a.num_objects())
        .flat_map(|x| (0..ob).map(move |y| (x, y)))
        .map(|(x, y)| a.unit(x) * nb + b.unit(y))
        .collect();
    let mut compose: HashMap<(usize, usize), LinComb> = HashMap::new();
    for (&(f, f2), ff) in a.compose_table() {
        for (&(g, g2), gg) in b.compose_table() {
            let sign = minus_one_pow(b.degree(g) * a.degree(f2));
            compose.insert((f * nb + g, f2 * nb + g2), collect_vec(&Rationals, tensor_lc(ff, gg, nb, &sign)));
        }
    }
    let one = Rational::from_integer(1.into());
    let mut diff = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            let mut terms = tensor_lc(a.diff_basis(i), &vec![(j, one.clone())], nb, &one);
            terms.extend(tensor_lc(&vec![(i, one.clone())], b.diff_basis(j), nb, &minus_one_pow(a.degree(i))));
            diff.push(collect_vec(&Rationals, terms));
        }
    }
    DgCategory::new(objects, basis, units, compose, diff).expect("tensor of well-formed presentations is well-formed")
}

/// `c ⊗ c ⊗ … ⊗ c`, bracketed from the left, so indices are mixed-radix with
/// the first factor most significant.
pub fn tensor_power(c: &DgCategory, n: usize) -> Result<DgCategory, DgError> {
    if n == 0 {
        return Err(DgError::EmptyTensorPower);
    }
    let mut acc = c.clone();
    for _ in 1..n {
        acc = tensor(&acc, c);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::{validate_category, CategoryBuilder};
    use crate::fixtures;
    use crate::qlinalg::q;

    fn odd_pair() -> DgCategory {
        // f, g of degree 1 with g∘f = h of degree 2; squares vanish
        CategoryBuilder::new()
            .object("a")
            .object("b")
            .object("c")
            .unit("a", "1a")
            .unit("b", "1b")
            .unit("c", "1c")
            .morphism("f", "a", "b", 1)
            .morphism("g", "b", "c", 1)
            .morphism("h", "a", "c", 2)
            .compose("g", "f", &[("h", q(1, 1))])
            .build()
            .unwrap()
    }

    #[test]
    fn opposite_of_unit_and_dual_numbers() {
        let k = fixtures::ground_field();
        assert_eq!(opposite(&k), k);
        let d = fixtures::dual_numbers();
        assert_eq!(opposite(&d), d);
    }

    #[test]
    fn opposite_flips_odd_structure_constant() {
        let c = odd_pair();
        let op = opposite(&c);
        assert!(validate_category(&op).is_empty());
        let (f, g, h) = (c.basis_index("f").unwrap(), c.basis_index("g").unwrap(), c.basis_index("h").unwrap());
        assert_eq!(op.compose_basis(f, g), &[(h, q(-1, 1))]);
        assert_eq!(opposite(&op), c);
    }

    #[test]
    fn tensor_dimensions() {
        let k = fixtures::ground_field();
        let d = fixtures::dual_numbers();
        let kd = tensor(&k, &d);
        assert_eq!(kd.hom(0, 0).len(), d.hom(0, 0).len());
        let dd = tensor(&d, &d);
        assert_eq!(dd.num_objects(), 1);
        assert_eq!(dd.hom(0, 0).len(), 4);
        assert!(validate_category(&dd).is_empty());
        assert_eq!(tensor_power(&d, 1).unwrap(), d);
        assert_eq!(tensor_power(&d, 3).unwrap().hom(0, 0).len(), 8);
        let k5 = tensor_power(&k, 5).unwrap();
        assert_eq!((k5.num_objects(), k5.num_basis()), (1, 1));
        assert!(tensor_power(&d, 0).is_err());
    }

    #[test]
    fn interchange_sign_for_odd_elements() {
        let c = odd_pair();
        let t = tensor(&c, &c);
        assert!(validate_category(&t).is_empty());
        let n = c.num_basis();
        let (f, g, h) = (c.basis_index("f").unwrap(), c.basis_index("g").unwrap(), c.basis_index("h").unwrap());
        // (g⊗g)∘(f⊗f) = (-1)^{|g||f|} (g∘f)⊗(g∘f)
        assert_eq!(t.compose_basis(g * n + g, f * n + f), &[(h * n + h, q(-1, 1))]);
    }

    #[test]
    fn generated_categories_validate() {
        for c in [fixtures::exterior(-1), fixtures::contractible_dg(), fixtures::quiver_a2()] {
            assert!(validate_category(&opposite(&c)).is_empty());
            let t = tensor(&c, &fixtures::exterior(1));
            assert!(validate_category(&t).is_empty(), "{:?}", validate_category(&t));
            assert!(validate_category(&tensor_power(&c, 3).unwrap()).is_empty());
        }
    }

    #[test]
    fn tensor_is_associative_after_rebracketing() {
        let (a, b, c) = (fixtures::exterior(-1), fixtures::contractible_dg(), fixtures::quiver_a2());
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        // either bracketing yields the same mixed-radix flattening
        assert_eq!(left.num_basis(), right.num_basis());
        for i in 0..left.num_basis() {
            assert_eq!(left.element(i), right.element(i));
            assert_eq!(left.diff_basis(i), right.diff_basis(i));
        }
        assert_eq!(left.compose_table(), right.compose_table());
    }
}

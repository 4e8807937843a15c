use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use super::category::{add, minus_one_pow, scale};
use super::{tensor, tensor_power, Axiom, DgCategory, DgError, Diagnostic, LinComb, Permutation};
use crate::qlinalg::{collect_vec, Rational, Rationals, SparseMatrix};

/// Strict dg functor given by its object map and the image of every basis
/// element.
#[derive(Clone, Debug, PartialEq)]
pub struct DgFunctor {
    source: Arc<DgCategory>,
    target: Arc<DgCategory>,
    object_map: Vec<usize>,
    images: Vec<LinComb>,
}

fn same_category(a: &Arc<DgCategory>, b: &Arc<DgCategory>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl DgFunctor {
    pub fn new(
        source: Arc<DgCategory>,
        target: Arc<DgCategory>,
        object_map: Vec<usize>,
        images: Vec<LinComb>,
    ) -> Result<Self, DgError> {
        if object_map.len() != source.num_objects() || object_map.iter().any(|o| *o >= target.num_objects()) {
            return Err(DgError::Malformed("object map does not fit the categories".into()));
        }
        if images.len() != source.num_basis() {
            return Err(DgError::Malformed("functor must give the image of every basis element".into()));
        }
        if images.iter().flatten().any(|(k, _)| *k >= target.num_basis()) {
            return Err(DgError::Malformed("image refers to an unknown target basis element".into()));
        }
        let images = images.into_iter().map(|v| collect_vec(&Rationals, v)).collect();
        Ok(DgFunctor { source, target, object_map, images })
    }

    pub fn identity(c: Arc<DgCategory>) -> Self {
        let object_map = (0..c.num_objects()).collect();
        let images = (0..c.num_basis()).map(|i| vec![(i, Rational::one())]).collect();
        DgFunctor { source: c.clone(), target: c, object_map, images }
    }

    pub fn source(&self) -> &Arc<DgCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgCategory> {
        &self.target
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn on_object(&self, o: usize) -> usize {
        self.object_map[o]
    }

    pub fn apply_basis(&self, i: usize) -> &LinComb {
        &self.images[i]
    }

    pub fn apply(&self, x: &LinComb) -> LinComb {
        let mut out = Vec::new();
        for (i, a) in x {
            out.extend(self.images[*i].iter().map(|(k, v)| (*k, v * a)));
        }
        collect_vec(&Rationals, out)
    }

    pub fn is_identity(&self) -> bool {
        same_category(&self.source, &self.target)
            && self.object_map.iter().enumerate().all(|(i, o)| i == *o)
            && self.images.iter().enumerate().all(|(i, v)| v.len() == 1 && v[0].0 == i && v[0].1.is_one())
    }

    /// Matrix of `hom(a, b) → hom(F a, F b)` in the local hom bases.
    pub fn hom_matrix(&self, a: usize, b: usize) -> SparseMatrix {
        let cols = self.source.hom(a, b);
        let rows = self.target.hom(self.object_map[a], self.object_map[b]);
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let entries = cols.iter().enumerate().flat_map(|(j, f)| {
            self.images[*f]
                .iter()
                .filter_map(|(k, v)| pos.get(k).map(|r| (*r, j, v.clone())))
                .collect::<Vec<_>>()
        });
        SparseMatrix::from_triplets(&Rationals, rows.len(), cols.len(), entries)
    }

    /// Matrix on the whole global basis.
    pub fn matrix(&self) -> SparseMatrix {
        let cols = self.images.clone();
        SparseMatrix::from_columns(self.target.num_basis(), cols)
    }
}

/// `f ∘ g` (apply `g` first).
pub fn compose_functors(f: &DgFunctor, g: &DgFunctor) -> Result<DgFunctor, DgError> {
    if !same_category(&g.target, &f.source) {
        return Err(DgError::Mismatch("target of the inner functor is not the source of the outer".into()));
    }
    let object_map = g.object_map.iter().map(|o| f.object_map[*o]).collect();
    let images = g.images.iter().map(|v| f.apply(v)).collect();
    Ok(DgFunctor { source: g.source.clone(), target: f.target.clone(), object_map, images })
}

fn radix_digits(mut idx: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    out
}

fn radix_index(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, d| acc * base + d)
}

/// `ρ_h` on an already built tensor power of `base`: factor `i` moves to
/// slot `h(i)`, with the Koszul sign of the rearrangement.
pub fn permutation_functor_on(base: &DgCategory, power: &Arc<DgCategory>, h: &Permutation) -> DgFunctor {
    let n = h.len();
    let (nb, no) = (base.num_basis(), base.num_objects());
    let object_map = (0..power.num_objects())
        .map(|o| {
            let d = radix_digits(o, no, n);
            let mut out = vec![0; n];
            for i in 0..n {
                out[h.apply(i)] = d[i];
            }
            radix_index(&out, no)
        })
        .collect();
    let images = (0..power.num_basis())
        .map(|b| {
            let d = radix_digits(b, nb, n);
            let mut out = vec![0; n];
            let mut parity = 0i64;
            for i in 0..n {
                out[h.apply(i)] = d[i];
                for j in i + 1..n {
                    if h.apply(i) > h.apply(j) {
                        parity += base.degree(d[i]) * base.degree(d[j]);
                    }
                }
            }
            vec![(radix_index(&out, nb), minus_one_pow(parity))]
        })
        .collect();
    DgFunctor { source: power.clone(), target: power.clone(), object_map, images }
}

/// `ρ_h` on `c^{⊗n}`.
pub fn permutation_functor(c: &DgCategory, n: usize, h: &Permutation) -> Result<DgFunctor, DgError> {
    if h.len() != n {
        return Err(DgError::InvalidPermutation(format!("{h} does not act on {n} points")));
    }
    let power = Arc::new(tensor_power(c, n)?);
    Ok(permutation_functor_on(c, &power, h))
}

/// `F ⊗ G` between tensor categories; both functors have degree zero so no
/// sign enters.
pub fn tensor_functor(f: &DgFunctor, g: &DgFunctor) -> DgFunctor {
    let source = Arc::new(tensor(&f.source, &g.source));
    let target = Arc::new(tensor(&f.target, &g.target));
    let (sb, tb) = (g.source.num_basis(), g.target.num_basis());
    let (so, to) = (g.source.num_objects(), g.target.num_objects());
    let object_map = (0..source.num_objects()).map(|o| f.object_map[o / so] * to + g.object_map[o % so]).collect();
    let images = (0..source.num_basis())
        .map(|b| {
            let (x, y) = (&f.images[b / sb], &g.images[b % sb]);
            let terms = x.iter().flat_map(|(i, a)| y.iter().map(move |(j, c)| (i * tb + j, a * c)));
            collect_vec(&Rationals, terms)
        })
        .collect();
    DgFunctor { source, target, object_map, images }
}

fn names(c: &DgCategory, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|i| c.element(*i).name.clone()).collect()
}

pub fn validate_functor(f: &DgFunctor) -> Vec<Diagnostic> {
    let (s, t) = (&*f.source, &*f.target);
    let mut out = Vec::new();
    let diag = |axiom, ids: &[usize], detail: String| Diagnostic { axiom, elements: names(s, ids), detail };
    for (i, b) in s.basis().iter().enumerate() {
        let (fs, ft) = (f.object_map[b.src], f.object_map[b.tgt]);
        let ok = f.images[i].iter().all(|(k, _)| {
            let e = t.element(*k);
            e.src == fs && e.tgt == ft && e.degree == b.degree
        });
        if !ok {
            out.push(diag(Axiom::HomTyping, &[i], "image leaves hom(F src, F tgt) or changes degree".into()));
        }
        if f.apply(s.diff_basis(i)) != t.diff(&f.images[i]) {
            out.push(diag(Axiom::CommutesWithDiff, &[i], "F(df) ≠ dF(f)".into()));
        }
    }
    for o in 0..s.num_objects() {
        let want = vec![(t.unit(f.object_map[o]), Rational::one())];
        if f.images[s.unit(o)] != want {
            out.push(diag(Axiom::PreservesUnits, &[s.unit(o)], format!("F(1) ≠ 1 at {}", s.objects()[o])));
        }
    }
    for fi in 0..s.num_basis() {
        for &gi in s.outgoing(s.element(fi).tgt) {
            let lhs = f.apply(&s.compose_basis(gi, fi).to_vec());
            let rhs = t.compose(&f.images[gi], &f.images[fi]);
            if lhs != rhs {
                out.push(diag(Axiom::PreservesComposition, &[gi, fi], "F(g∘f) ≠ F(g)∘F(f)".into()));
            }
        }
    }
    out
}

/// Transformation `from ⇒ to` of a fixed degree, one component per source
/// object.
#[derive(Clone, Debug, PartialEq)]
pub struct NatTransform {
    pub from: Arc<DgFunctor>,
    pub to: Arc<DgFunctor>,
    pub degree: i64,
    pub components: Vec<LinComb>,
}

impl NatTransform {
    pub fn identity(f: Arc<DgFunctor>) -> Self {
        let components = f.object_map.iter().map(|o| vec![(f.target.unit(*o), Rational::one())]).collect();
        NatTransform { from: f.clone(), to: f, degree: 0, components }
    }

    pub fn is_closed(&self) -> bool {
        self.components.iter().all(|c| self.from.target.diff(c).is_empty())
    }
}

pub fn validate_nat_transform(a: &NatTransform) -> Vec<Diagnostic> {
    let (f, g) = (&a.from, &a.to);
    let mut out = Vec::new();
    if !same_category(&f.source, &g.source) || !same_category(&f.target, &g.target) {
        out.push(Diagnostic {
            axiom: Axiom::ComponentTyping,
            elements: Vec::new(),
            detail: "functors have different source or target".into(),
        });
        return out;
    }
    let (s, t) = (&*f.source, &*f.target);
    if a.components.len() != s.num_objects() {
        out.push(Diagnostic {
            axiom: Axiom::ComponentTyping,
            elements: Vec::new(),
            detail: "one component per object required".into(),
        });
        return out;
    }
    for (o, comp) in a.components.iter().enumerate() {
        let ok = comp.iter().all(|(k, _)| {
            *k < t.num_basis() && {
                let e = t.element(*k);
                e.src == f.object_map[o] && e.tgt == g.object_map[o] && e.degree == a.degree
            }
        });
        if !ok {
            out.push(Diagnostic {
                axiom: Axiom::ComponentTyping,
                elements: vec![s.objects()[o].clone()],
                detail: "component is not in hom(F c, G c) of the stated degree".into(),
            });
            return out;
        }
    }
    for (i, b) in s.basis().iter().enumerate() {
        let lhs = t.compose(&g.images[i], &a.components[b.src]);
        let rhs = scale(&t.compose(&a.components[b.tgt], &f.images[i]), &minus_one_pow(a.degree * b.degree));
        if !add(&lhs, &scale(&rhs, &-Rational::one())).is_empty() {
            out.push(Diagnostic {
                axiom: Axiom::Naturality,
                elements: names(s, &[i]),
                detail: "G(f)∘α ≠ ±α∘F(f)".into(),
            });
        }
    }
    out
}

/// Components of `α1 ⋆ α2`: `(α1)_{φ2(c)} ∘ φ1((α2)_c)` for each object `c`
/// of the source of `φ2`.
pub fn star(phi1: &DgFunctor, alpha1: &[LinComb], phi2: &DgFunctor, alpha2: &[LinComb]) -> Vec<LinComb> {
    (0..phi2.source.num_objects())
        .map(|c| {
            let inner = phi1.apply(&alpha2[c]);
            phi1.target.compose(&alpha1[phi2.object_map[c]], &inner)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::validate_category;
    use crate::fixtures;
    use crate::qlinalg::q;

    #[test]
    fn identity_permutation_is_identity_functor() {
        let d = fixtures::dual_numbers();
        let r = permutation_functor(&d, 3, &Permutation::identity(3)).unwrap();
        assert!(r.is_identity());
        assert!(validate_functor(&r).is_empty());
    }

    #[test]
    fn swap_on_even_generators() {
        let d = fixtures::dual_numbers();
        let swap = Permutation::from_cycles(2, "(1 2)").unwrap();
        let r = permutation_functor(&d, 2, &swap).unwrap();
        let dd = r.source().clone();
        let x1 = dd.basis_index("x⊗1").unwrap();
        let one_x = dd.basis_index("1⊗x").unwrap();
        assert_eq!(r.apply_basis(x1), &vec![(one_x, q(1, 1))]);
        let twice = compose_functors(&r, &r).unwrap();
        assert!(twice.is_identity());
    }

    #[test]
    fn swap_on_odd_generators_has_sign() {
        let e = fixtures::exterior(1);
        let swap = Permutation::from_cycles(2, "(1 2)").unwrap();
        let r = permutation_functor(&e, 2, &swap).unwrap();
        assert!(validate_functor(&r).is_empty());
        let p = r.source();
        let yy = p.basis_index("y⊗y").unwrap();
        assert_eq!(r.apply_basis(yy), &vec![(yy, q(-1, 1))]);
        assert_eq!(r.matrix().times(&r.matrix()), SparseMatrix::eye(p.num_basis()));
    }

    #[test]
    fn example_composition_law() {
        let d = fixtures::dual_numbers();
        let a = Permutation::from_cycles(3, "(1 2)").unwrap();
        let b = Permutation::from_cycles(3, "(2 3)").unwrap();
        let ra = permutation_functor(&d, 3, &a).unwrap();
        let power = ra.source().clone();
        let rb = permutation_functor_on(&d, &power, &b);
        let lhs = compose_functors(&ra, &rb).unwrap();
        let rhs = permutation_functor_on(&d, &power, &b.then(&a));
        assert_eq!(lhs.hom_matrix(0, 0), rhs.hom_matrix(0, 0));
        assert_eq!(lhs.hom_matrix(0, 0).rows(), 8);
    }

    #[test]
    fn strict_action_law_up_to_four_factors() {
        for base in [fixtures::exterior(1), fixtures::contractible_dg()] {
            for n in 1..=4usize {
                let power = Arc::new(tensor_power(&base, n).unwrap());
                let group = Permutation::all(n);
                let funcs: Vec<DgFunctor> = group.iter().map(|g| permutation_functor_on(&base, &power, g)).collect();
                for (g, rg) in group.iter().zip(&funcs) {
                    for (g2, rg2) in group.iter().zip(&funcs) {
                        let lhs = compose_functors(rg, rg2).unwrap();
                        let rhs = permutation_functor_on(&base, &power, &g2.then(g));
                        assert_eq!(lhs, rhs, "n = {n}, g = {g}, g' = {g2}");
                    }
                }
            }
        }
    }

    #[test]
    fn functor_examples_on_dual_numbers() {
        let d = Arc::new(fixtures::dual_numbers());
        let id = DgFunctor::identity(d.clone());
        assert!(validate_functor(&id).is_empty());
        let neg = fixtures::negation(d.clone());
        assert!(validate_functor(&neg).is_empty());
        let one = d.basis_index("1").unwrap();
        let bad = DgFunctor::new(d.clone(), d.clone(), vec![0], vec![vec![(one, q(1, 1))], vec![(one, q(1, 1))]]).unwrap();
        let diags = validate_functor(&bad);
        assert!(diags.iter().any(|x| x.axiom == Axiom::PreservesComposition), "{diags:?}");
        assert_eq!(compose_functors(&id, &neg).unwrap(), neg);
    }

    #[test]
    fn nat_transform_examples() {
        let d = Arc::new(fixtures::dual_numbers());
        let id = Arc::new(DgFunctor::identity(d.clone()));
        assert!(validate_nat_transform(&NatTransform::identity(id.clone())).is_empty());
        let neg = Arc::new(fixtures::negation(d.clone()));
        let one = d.basis_index("1").unwrap();
        let x = d.basis_index("x").unwrap();
        let broken = NatTransform { from: id.clone(), to: neg, degree: 0, components: vec![vec![(one, q(1, 1))]] };
        let diags = validate_nat_transform(&broken);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].elements, vec!["x".to_string()]);
        let central = NatTransform { from: id.clone(), to: id, degree: 0, components: vec![vec![(x, q(1, 1))]] };
        assert!(validate_nat_transform(&central).is_empty());
        assert!(central.is_closed());
    }

    #[test]
    fn tensor_functor_validates() {
        let d = Arc::new(fixtures::dual_numbers());
        let e = Arc::new(fixtures::exterior(1));
        let f = tensor_functor(&fixtures::negation(d), &DgFunctor::identity(e));
        assert!(validate_category(f.source()).is_empty());
        assert!(validate_functor(&f).is_empty());
    }
}

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{Axiom, DgError, Diagnostic, LinComb};
use crate::qlinalg::{axpy, collect_vec, Rational, Rationals};

/// One basis vector of some hom complex `hom(src, tgt)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: i64,
}

/// Finite presentation of a small dg category.
///
/// Hom complexes are spanned by the global basis list; `compose[(g, f)]` is
/// `g ∘ f` for `f: a → b`, `g: b → c`, omitted pairs compose to zero. The
/// differential has degree +1.
#[derive(Clone, PartialEq)]
pub struct DgCategory {
    objects: Vec<String>,
    basis: Vec<BasisElement>,
    units: Vec<usize>,
    compose: HashMap<(usize, usize), LinComb>,
    diff: Vec<LinComb>,
    homs: HashMap<(usize, usize), Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    by_name: HashMap<String, usize>,
}

impl fmt::Debug for DgCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DgCategory")
            .field("objects", &self.objects)
            .field("basis", &self.basis.len())
            .field("compose_entries", &self.compose.len())
            .finish()
    }
}

pub(crate) fn minus_one_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub(crate) fn scale(lc: &LinComb, a: &Rational) -> LinComb {
    if a.is_zero() {
        return Vec::new();
    }
    lc.iter().map(|(i, v)| (*i, v * a)).collect()
}

pub(crate) fn add(x: &LinComb, y: &LinComb) -> LinComb {
    axpy(&Rationals, x, &Rational::one(), y)
}

impl DgCategory {
    /// Structural checks only (names, indices, unit placement); the dg axioms
    /// are checked by [`validate_category`].
    pub fn new(
        objects: Vec<String>,
        basis: Vec<BasisElement>,
        units: Vec<usize>,
        compose: HashMap<(usize, usize), LinComb>,
        diff: Vec<LinComb>,
    ) -> Result<Self, DgError> {
        let mut seen = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if seen.insert(o.clone(), i).is_some() {
                return Err(DgError::Duplicate(format!("object {o}")));
            }
        }
        let mut by_name = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if b.src >= objects.len() || b.tgt >= objects.len() {
                return Err(DgError::Malformed(format!("basis element {} has an unknown endpoint", b.name)));
            }
            if by_name.insert(b.name.clone(), i).is_some() {
                return Err(DgError::Duplicate(format!("basis element {}", b.name)));
            }
        }
        if units.len() != objects.len() {
            return Err(DgError::Malformed("one unit per object required".into()));
        }
        for (o, u) in units.iter().enumerate() {
            let Some(b) = basis.get(*u) else {
                return Err(DgError::Malformed(format!("unit of {} is not a basis element", objects[o])));
            };
            if b.src != o || b.tgt != o {
                return Err(DgError::Malformed(format!("unit {} of {} is not an endomorphism of it", b.name, objects[o])));
            }
        }
        if diff.len() != basis.len() {
            return Err(DgError::Malformed("differential must list every basis element".into()));
        }
        let n = basis.len();
        let in_range = |lc: &LinComb| lc.iter().all(|(i, _)| *i < n);
        if !diff.iter().all(in_range) || !compose.values().all(in_range) {
            return Err(DgError::Malformed("linear combination refers to an unknown basis element".into()));
        }
        if compose.keys().any(|(g, f)| *g >= n || *f >= n) {
            return Err(DgError::Malformed("composition table refers to an unknown basis element".into()));
        }
        let compose = compose
            .into_iter()
            .map(|(k, v)| (k, collect_vec(&Rationals, v)))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        let diff = diff.into_iter().map(|v| collect_vec(&Rationals, v)).collect();
        let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut outgoing = vec![Vec::new(); objects.len()];
        for (i, b) in basis.iter().enumerate() {
            homs.entry((b.src, b.tgt)).or_default().push(i);
            outgoing[b.src].push(i);
        }
        Ok(DgCategory { objects, basis, units, compose, diff, homs, outgoing, by_name })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn num_basis(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, i: usize) -> &BasisElement {
        &self.basis[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn unit(&self, object: usize) -> usize {
        self.units[object]
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn is_unit(&self, i: usize) -> bool {
        let b = &self.basis[i];
        b.src == b.tgt && self.units[b.src] == i
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Basis of `hom(src, tgt)` in global order.
    pub fn hom(&self, src: usize, tgt: usize) -> &[usize] {
        self.homs.get(&(src, tgt)).map_or(&[], Vec::as_slice)
    }

    /// Basis elements with the given source.
    pub fn outgoing(&self, src: usize) -> &[usize] {
        &self.outgoing[src]
    }

    pub fn compose_table(&self) -> &HashMap<(usize, usize), LinComb> {
        &self.compose
    }

    /// `g ∘ f` on basis elements.
    pub fn compose_basis(&self, g: usize, f: usize) -> &[(usize, Rational)] {
        self.compose.get(&(g, f)).map_or(&[], Vec::as_slice)
    }

    /// Bilinear extension of composition.
    pub fn compose(&self, g: &LinComb, f: &LinComb) -> LinComb {
        let mut out = Vec::new();
        for (gi, ga) in g {
            for (fi, fa) in f {
                let prod = self.compose_basis(*gi, *fi);
                if !prod.is_empty() {
                    out.extend(prod.iter().map(|(k, v)| (*k, v * ga * fa)));
                }
            }
        }
        collect_vec(&Rationals, out)
    }

    pub fn diff_basis(&self, i: usize) -> &LinComb {
        &self.diff[i]
    }

    pub fn diff(&self, x: &LinComb) -> LinComb {
        let mut out = Vec::new();
        for (i, a) in x {
            out.extend(self.diff[*i].iter().map(|(k, v)| (*k, v * a)));
        }
        collect_vec(&Rationals, out)
    }

    pub fn has_nonzero_differential(&self) -> bool {
        self.diff.iter().any(|d| !d.is_empty())
    }

    /// `(min, max)` of basis degrees; `None` for an empty basis.
    pub fn degree_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.basis.iter().map(|b| b.degree).min()?;
        let hi = self.basis.iter().map(|b| b.degree).max()?;
        Some((lo, hi))
    }

    /// Same category with basis elements listed in a different order:
    /// `order[new] = old`.
    pub fn reorder_basis(&self, order: &[usize]) -> Result<DgCategory, DgError> {
        let n = self.basis.len();
        let mut new_of = vec![usize::MAX; n];
        for (new, old) in order.iter().enumerate() {
            if *old >= n || new_of[*old] != usize::MAX {
                return Err(DgError::Malformed("reordering is not a permutation of the basis".into()));
            }
            new_of[*old] = new;
        }
        if order.len() != n {
            return Err(DgError::Malformed("reordering is not a permutation of the basis".into()));
        }
        let remap = |lc: &LinComb| -> LinComb { collect_vec(&Rationals, lc.iter().map(|(i, v)| (new_of[*i], v.clone()))) };
        let basis = order.iter().map(|o| self.basis[*o].clone()).collect();
        let units = self.units.iter().map(|u| new_of[*u]).collect();
        let compose = self
            .compose
            .iter()
            .map(|((g, f), v)| ((new_of[*g], new_of[*f]), remap(v)))
            .collect();
        let diff = order.iter().map(|o| remap(&self.diff[*o])).collect();
        DgCategory::new(self.objects.clone(), basis, units, compose, diff)
    }
}

/// Convenience builder addressing everything by name.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    basis: Vec<BasisElement>,
    units: Vec<(String, String)>,
    compose: Vec<(String, String, Vec<(String, Rational)>)>,
    diff: Vec<(String, Vec<(String, Rational)>)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    /// Adds a basis element of `hom(src, tgt)`.
    pub fn morphism(mut self, name: &str, src: &str, tgt: &str, degree: i64) -> Self {
        let src = self.objects.iter().position(|o| o == src).unwrap_or(usize::MAX);
        let tgt = self.objects.iter().position(|o| o == tgt).unwrap_or(usize::MAX);
        self.basis.push(BasisElement { name: name.to_string(), src, tgt, degree });
        self
    }

    /// Declares `name` as a degree 0 endomorphism of `object` and its unit.
    pub fn unit(mut self, object: &str, name: &str) -> Self {
        self = self.morphism(name, object, object, 0);
        self.units.push((object.to_string(), name.to_string()));
        self
    }

    pub fn compose(mut self, g: &str, f: &str, result: &[(&str, Rational)]) -> Self {
        let result = result.iter().map(|(n, v)| (n.to_string(), v.clone())).collect();
        self.compose.push((g.to_string(), f.to_string(), result));
        self
    }

    pub fn diff(mut self, x: &str, result: &[(&str, Rational)]) -> Self {
        let result = result.iter().map(|(n, v)| (n.to_string(), v.clone())).collect();
        self.diff.push((x.to_string(), result));
        self
    }

    /// Adds the unit laws `1 ∘ f = f` and `f ∘ 1 = f` for every basis element.
    pub fn build(self) -> Result<DgCategory, DgError> {
        let index: HashMap<&str, usize> = self.basis.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();
        let look = |n: &str| index.get(n).copied().ok_or_else(|| DgError::Unknown(format!("basis element {n}")));
        if self.basis.iter().any(|b| b.src == usize::MAX || b.tgt == usize::MAX) {
            return Err(DgError::Unknown("object named by a morphism".into()));
        }
        let mut units = vec![usize::MAX; self.objects.len()];
        for (o, u) in &self.units {
            let oi = self.objects.iter().position(|x| x == o).ok_or_else(|| DgError::Unknown(format!("object {o}")))?;
            units[oi] = look(u)?;
        }
        if units.contains(&usize::MAX) {
            return Err(DgError::Malformed("every object needs a unit".into()));
        }
        let mut compose: HashMap<(usize, usize), LinComb> = HashMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            let one = vec![(i, Rational::one())];
            compose.insert((units[b.tgt], i), one.clone());
            compose.insert((i, units[b.src]), one);
        }
        for (g, f, res) in &self.compose {
            let lc = res.iter().map(|(n, v)| Ok((look(n)?, v.clone()))).collect::<Result<Vec<_>, DgError>>()?;
            compose.insert((look(g)?, look(f)?), collect_vec(&Rationals, lc));
        }
        let mut diff = vec![Vec::new(); self.basis.len()];
        for (x, res) in &self.diff {
            let lc = res.iter().map(|(n, v)| Ok((look(n)?, v.clone()))).collect::<Result<Vec<_>, DgError>>()?;
            diff[look(x)?] = collect_vec(&Rationals, lc);
        }
        DgCategory::new(self.objects, self.basis, units, compose, diff)
    }
}

fn names(c: &DgCategory, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|i| c.basis[*i].name.clone()).collect()
}

fn typed_in(c: &DgCategory, lc: &LinComb, src: usize, tgt: usize, degree: i64) -> bool {
    lc.iter().all(|(k, _)| {
        let b = &c.basis[*k];
        b.src == src && b.tgt == tgt && b.degree == degree
    })
}

/// Checks every dg-category axiom on basis elements. Empty output means valid.
pub fn validate_category(c: &DgCategory) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let diag = |axiom, ids: &[usize], detail: String| Diagnostic { axiom, elements: names(c, ids), detail };

    for (o, &u) in c.units.iter().enumerate() {
        if c.basis[u].degree != 0 {
            out.push(diag(Axiom::UnitDegree, &[u], format!("unit of {} has degree {}", c.objects[o], c.basis[u].degree)));
        }
        if !c.diff[u].is_empty() {
            out.push(diag(Axiom::UnitClosed, &[u], "differential of a unit is non-zero".into()));
        }
    }

    let mut keys: Vec<&(usize, usize)> = c.compose.keys().collect();
    keys.sort();
    for &(g, f) in keys {
        let (bg, bf) = (&c.basis[g], &c.basis[f]);
        let res = &c.compose[&(g, f)];
        if bf.tgt != bg.src {
            out.push(diag(Axiom::ComposeTyping, &[g, f], "composition defined on a non-composable pair".into()));
            continue;
        }
        if !res.iter().all(|(k, _)| c.basis[*k].src == bf.src && c.basis[*k].tgt == bg.tgt) {
            out.push(diag(Axiom::ComposeTyping, &[g, f], "result lies outside hom(src f, tgt g)".into()));
        }
        if let Some((k, _)) = res.iter().find(|(k, _)| c.basis[*k].degree != bg.degree + bf.degree) {
            out.push(diag(
                Axiom::ComposeDegree,
                &[g, f, *k],
                format!("degrees {} + {} give {}", bg.degree, bf.degree, c.basis[*k].degree),
            ));
        }
    }

    for (i, b) in c.basis.iter().enumerate() {
        let d = &c.diff[i];
        if !typed_in(c, d, b.src, b.tgt, b.degree + 1) {
            out.push(diag(Axiom::DiffTyping, &[i], "differential leaves the hom complex or has wrong degree".into()));
        }
        if !c.diff(d).is_empty() {
            out.push(diag(Axiom::DiffSquare, &[i], "d∘d is non-zero".into()));
        }
        let one = vec![(i, Rational::one())];
        let u_t = vec![(c.units[b.tgt], Rational::one())];
        let u_s = vec![(c.units[b.src], Rational::one())];
        if c.compose(&u_t, &one) != one {
            out.push(diag(Axiom::LeftUnit, &[c.units[b.tgt], i], "1 ∘ f ≠ f".into()));
        }
        if c.compose(&one, &u_s) != one {
            out.push(diag(Axiom::RightUnit, &[i, c.units[b.src]], "f ∘ 1 ≠ f".into()));
        }
    }

    // Leibniz and associativity over composable basis pairs and triples.
    for f in 0..c.basis.len() {
        let bf = &c.basis[f];
        for &g in c.outgoing(bf.tgt) {
            let bg = &c.basis[g];
            let gv = vec![(g, Rational::one())];
            let fv = vec![(f, Rational::one())];
            let gf = c.compose(&gv, &fv);
            let lhs = c.diff(&gf);
            let rhs = add(
                &c.compose(&c.diff_basis(g).clone(), &fv),
                &scale(&c.compose(&gv, c.diff_basis(f)), &minus_one_pow(bg.degree)),
            );
            if lhs != rhs {
                out.push(diag(Axiom::Leibniz, &[g, f], "d(g∘f) ≠ dg∘f + (-1)^|g| g∘df".into()));
            }
            for &h in c.outgoing(bg.tgt) {
                let hv = vec![(h, Rational::one())];
                let left = c.compose(&c.compose(&hv, &gv), &fv);
                let right = c.compose(&hv, &gf);
                if left != right {
                    out.push(diag(Axiom::Associativity, &[h, g, f], "(h∘g)∘f ≠ h∘(g∘f)".into()));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qlinalg::q;

    #[test]
    fn fixtures_validate() {
        for c in [
            fixtures::ground_field(),
            fixtures::dual_numbers(),
            fixtures::quiver_a2(),
            fixtures::exterior(-1),
            fixtures::exterior(1),
            fixtures::contractible_dg(),
            fixtures::truncated_polynomial(3),
        ] {
            assert!(validate_category(&c).is_empty(), "{:?}", validate_category(&c));
        }
    }

    #[test]
    fn dual_numbers_with_square_one_is_still_an_algebra() {
        // k[x]/(x^2 - 1) is associative, so this injection alone breaks nothing
        let c = CategoryBuilder::new()
            .object("o")
            .unit("o", "1")
            .morphism("x", "o", "o", 0)
            .compose("x", "x", &[("1", q(1, 1))])
            .build()
            .unwrap();
        assert!(validate_category(&c).is_empty());
    }

    #[test]
    fn broken_cubic_reports_associativity() {
        let diags = validate_category(&fixtures::broken_truncated_polynomial());
        assert!(diags.iter().any(|d| d.axiom == Axiom::Associativity), "{diags:?}");
    }

    #[test]
    fn degree_violation_is_reported() {
        let c = CategoryBuilder::new()
            .object("o")
            .unit("o", "1")
            .morphism("y", "o", "o", 1)
            .compose("y", "y", &[("1", q(1, 1))])
            .build()
            .unwrap();
        let diags = validate_category(&c);
        assert!(diags.iter().any(|d| d.axiom == Axiom::ComposeDegree));
    }

    #[test]
    fn leibniz_violation_is_reported() {
        // t idempotent, ds = t, t∘s = 0: d(t∘s) = 0 but t∘ds = t
        let c = CategoryBuilder::new()
            .object("o")
            .unit("o", "1")
            .morphism("s", "o", "o", -1)
            .morphism("t", "o", "o", 0)
            .compose("t", "t", &[("t", q(1, 1))])
            .diff("s", &[("t", q(1, 1))])
            .build()
            .unwrap();
        let diags = validate_category(&c);
        assert!(diags.iter().any(|d| d.axiom == Axiom::Leibniz), "{diags:?}");
    }

    #[test]
    fn reorder_round_trip() {
        let c = fixtures::quiver_a2();
        let n = c.num_basis();
        let order: Vec<usize> = (0..n).rev().collect();
        let r = c.reorder_basis(&order).unwrap();
        assert!(validate_category(&r).is_empty());
        assert_eq!(r.reorder_basis(&order).unwrap(), c);
    }
}

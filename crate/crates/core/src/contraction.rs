//! Algebra-level contraction of the swap-twisted diagonal: enveloping
//! embeddings, one- and two-sided modules, balanced tensor products and the
//! factorization `^σA₂ ⊗_{A₂^e} M ≅ A ⊗_{A^e_12} (A ⊗_{A^e_21} M)`.
//!
//! Index conventions: `A ⊗ B` has basis `(i, j)` at `i·dim B + j`, so
//! `A₂^e = (A ⊗ A) ⊗ (A ⊗ A)^op` has `(f₁, f₂, f₁', f₂')` at
//! `((f₁·d + f₂)·d² + f₁'·d + f₂')`. A tensor `N ⊗ M` of modules puts
//! `(i, j)` at `i·dim M + j`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dgcore::{opposite, tensor, DgCategory, LinComb};
use crate::qlinalg::{collect_vec, q, Echelon, Rational, Rationals, SparseMatrix, SparseVec};

#[derive(Debug, Error)]
pub enum ContractionError {
    #[error("not a finite algebra: {0}")]
    NotAnAlgebra(String),
    #[error("invalid algebra map {name}: {detail}")]
    InvalidMap { name: String, detail: String },
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("incompatible actions: {0}")]
    Incompatible(String),
}

/// A one-object dg category concentrated in degree zero with zero
/// differential; the product is `a·b = a∘b`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    cat: Arc<DgCategory>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat) || *self.cat == *other.cat
    }
}

impl FiniteAlgebra {
    pub fn new(cat: DgCategory) -> Result<Self, ContractionError> {
        if cat.num_objects() != 1 {
            return Err(ContractionError::NotAnAlgebra(format!("{} objects", cat.num_objects())));
        }
        if let Some(i) = (0..cat.num_basis()).find(|&i| cat.degree(i) != 0) {
            return Err(ContractionError::NotAnAlgebra(format!("{} has degree {}", cat.element(i).name, cat.degree(i))));
        }
        if cat.has_nonzero_differential() {
            return Err(ContractionError::NotAnAlgebra("nonzero differential".into()));
        }
        Ok(FiniteAlgebra { cat: Arc::new(cat) })
    }

    pub fn category(&self) -> &Arc<DgCategory> {
        &self.cat
    }

    pub fn dim(&self) -> usize {
        self.cat.num_basis()
    }

    pub fn unit(&self) -> usize {
        self.cat.unit(0)
    }

    pub fn mul(&self, a: &LinComb, b: &LinComb) -> LinComb {
        self.cat.compose(a, b)
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        self.cat.compose_basis(a, b)
    }

    pub fn opposite(&self) -> FiniteAlgebra {
        FiniteAlgebra { cat: Arc::new(opposite(&self.cat)) }
    }

    pub fn tensor(&self, other: &FiniteAlgebra) -> FiniteAlgebra {
        FiniteAlgebra { cat: Arc::new(tensor(&self.cat, &other.cat)) }
    }

    /// `A ⊗ A^op`.
    pub fn enveloping(&self) -> FiniteAlgebra {
        self.tensor(&self.opposite())
    }

    /// Matrix of `x ↦ a·x`.
    pub fn left_mul(&self, a: usize) -> SparseMatrix {
        let cols = (0..self.dim()).map(|x| self.mul_basis(a, x).to_vec()).collect();
        SparseMatrix::from_columns(self.dim(), cols)
    }

    /// Matrix of `x ↦ x·a`.
    pub fn right_mul(&self, a: usize) -> SparseMatrix {
        let cols = (0..self.dim()).map(|x| self.mul_basis(x, a).to_vec()).collect();
        SparseMatrix::from_columns(self.dim(), cols)
    }
}

fn basis_vec(i: usize) -> LinComb {
    vec![(i, q(1, 1))]
}

/// Unital algebra homomorphism given by the images of basis elements.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    name: String,
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    matrix: SparseMatrix,
}

impl AlgebraMap {
    pub fn new(
        name: &str,
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        images: Vec<LinComb>,
    ) -> Result<Self, ContractionError> {
        let bad = |detail: String| ContractionError::InvalidMap { name: name.to_string(), detail };
        if images.len() != source.dim() {
            return Err(bad(format!("{} images for {} basis elements", images.len(), source.dim())));
        }
        let matrix = SparseMatrix::from_columns(target.dim(), images);
        let map = AlgebraMap { name: name.to_string(), source, target, matrix };
        if map.image(map.source.unit()) != &basis_vec(map.target.unit()) {
            return Err(bad("unit is not preserved".into()));
        }
        for a in 0..map.source.dim() {
            for b in 0..map.source.dim() {
                let lhs = map.apply(&map.source.mul_basis(a, b).to_vec());
                let rhs = map.target.mul(map.image(a), map.image(b));
                if lhs != rhs {
                    return Err(bad(format!("product of basis {a} and {b} is not preserved")));
                }
            }
        }
        Ok(map)
    }

    pub fn identity(a: &FiniteAlgebra) -> AlgebraMap {
        let images = (0..a.dim()).map(basis_vec).collect();
        AlgebraMap::new("id", a.clone(), a.clone(), images).expect("identity is an algebra map")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    pub fn image(&self, b: usize) -> &LinComb {
        self.matrix.column(b)
    }

    pub fn apply(&self, x: &LinComb) -> LinComb {
        self.matrix.apply(&Rationals, x)
    }

    /// Every image of `self` commutes with every image of `other`.
    pub fn images_commute(&self, other: &AlgebraMap) -> bool {
        let t = &self.target;
        (0..self.source.dim()).all(|a| {
            (0..other.source.dim()).all(|b| {
                let (x, y) = (self.image(a), other.image(b));
                t.mul(x, y) == t.mul(y, x)
            })
        })
    }
}

/// The four embeddings `A^e → A₂^e`.
#[derive(Clone, Debug)]
pub struct Embeddings {
    pub e11: AlgebraMap,
    pub e12: AlgebraMap,
    pub e21: AlgebraMap,
    pub e22: AlgebraMap,
}

impl Embeddings {
    pub fn all(&self) -> [&AlgebraMap; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }
}

pub fn enveloping_embeddings(a: &FiniteAlgebra) -> Result<Embeddings, ContractionError> {
    let d = a.dim();
    let u = a.unit();
    let ae = a.enveloping();
    let a2e = a.tensor(a).enveloping();
    let slot = |f1: usize, f2: usize, g1: usize, g2: usize| (f1 * d + f2) * d * d + g1 * d + g2;
    let build = |name: &str, place: &dyn Fn(usize, usize) -> usize| {
        let images = (0..d * d).map(|i| basis_vec(place(i / d, i % d))).collect();
        AlgebraMap::new(name, ae.clone(), a2e.clone(), images)
    };
    Ok(Embeddings {
        e11: build("e11", &|f, g| slot(f, u, g, u))?,
        e12: build("e12", &|f, g| slot(f, u, u, g))?,
        e21: build("e21", &|f, g| slot(u, f, g, u))?,
        e22: build("e22", &|f, g| slot(u, f, u, g))?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A one-sided module; `action[b]` is the matrix of `v ↦ b·v` (left) or
/// `v ↦ v·b` (right) on column vectors.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    algebra: FiniteAlgebra,
    side: Side,
    dim: usize,
    action: Vec<SparseMatrix>,
}

fn check_shape(dim: usize, m: &SparseMatrix) -> bool {
    m.rows() == dim && m.cols() == dim
}

fn combine(action: &[SparseMatrix], dim: usize, x: &LinComb) -> SparseMatrix {
    x.iter().fold(SparseMatrix::zero(dim, dim), |acc, (b, c)| acc.plus(&action[*b].scaled(&Rationals, c)))
}

impl FiniteModule {
    pub fn new(algebra: FiniteAlgebra, side: Side, dim: usize, action: Vec<SparseMatrix>) -> Result<Self, ContractionError> {
        let bad = ContractionError::InvalidModule;
        if action.len() != algebra.dim() || !action.iter().all(|m| check_shape(dim, m)) {
            return Err(bad("action matrices have the wrong shape".into()));
        }
        if action[algebra.unit()] != SparseMatrix::eye(dim) {
            return Err(bad("unit does not act as the identity".into()));
        }
        for a in 0..algebra.dim() {
            for b in 0..algebra.dim() {
                let lhs = combine(&action, dim, &algebra.mul_basis(a, b).to_vec());
                let rhs = match side {
                    Side::Left => action[a].times(&action[b]),
                    Side::Right => action[b].times(&action[a]),
                };
                if lhs != rhs {
                    return Err(bad(format!("action of basis {a}·{b} is not associative")));
                }
            }
        }
        Ok(FiniteModule { algebra, side, dim, action })
    }

    /// `A` acting on itself by multiplication, `copies` times.
    pub fn regular(algebra: &FiniteAlgebra, side: Side, copies: usize) -> FiniteModule {
        let d = algebra.dim();
        let action = (0..d)
            .map(|b| {
                let m = match side {
                    Side::Left => algebra.left_mul(b),
                    Side::Right => algebra.right_mul(b),
                };
                let entries = (0..copies)
                    .flat_map(|k| m.entries().into_iter().map(move |(r, c, v)| (k * d + r, k * d + c, v)));
                SparseMatrix::from_triplets(&Rationals, copies * d, copies * d, entries)
            })
            .collect();
        FiniteModule { algebra: algebra.clone(), side, dim: copies * d, action }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, b: usize) -> &SparseMatrix {
        &self.action[b]
    }

    pub fn act(&self, x: &LinComb, v: &SparseVec<Rational>) -> SparseVec<Rational> {
        combine(&self.action, self.dim, x).apply(&Rationals, v)
    }

    /// Restriction of scalars along `map` into this module's algebra.
    pub fn pullback(&self, map: &AlgebraMap) -> Result<FiniteModule, ContractionError> {
        if *map.target() != self.algebra {
            return Err(ContractionError::Incompatible(format!("{} does not land in the acting algebra", map.name())));
        }
        let action = (0..map.source().dim()).map(|b| combine(&self.action, self.dim, map.image(b))).collect();
        Ok(FiniteModule { algebra: map.source().clone(), side: self.side, dim: self.dim, action })
    }

    /// Quotient by the submodule generated by `generators`.
    pub fn quotient(&self, generators: &[SparseVec<Rational>]) -> FiniteModule {
        let mut sub = Echelon::new(Rationals);
        for v in generators {
            for b in 0..self.algebra.dim() {
                sub.insert(&self.action[b].apply(&Rationals, v));
            }
        }
        let (keep, coords) = complement(&sub, self.dim);
        let action = self
            .action
            .iter()
            .map(|m| {
                let cols = keep.iter().map(|&j| coords(&m.apply(&Rationals, &basis_vec(j)))).collect();
                SparseMatrix::from_columns(keep.len(), cols)
            })
            .collect();
        FiniteModule { algebra: self.algebra.clone(), side: self.side, dim: keep.len(), action }
    }
}

type Coordinates<'a> = Box<dyn Fn(&SparseVec<Rational>) -> SparseVec<Rational> + 'a>;

/// Non-pivot indices of a subspace and the map sending a vector to the
/// coordinates of its class on those indices.
fn complement(sub: &Echelon<Rationals>, dim: usize) -> (Vec<usize>, Coordinates<'_>) {
    let pivots: std::collections::BTreeSet<usize> = (0..sub.rank()).map(|i| sub.row(i)[0].0).collect();
    let keep: Vec<usize> = (0..dim).filter(|j| !pivots.contains(j)).collect();
    let position: std::collections::HashMap<usize, usize> = keep.iter().enumerate().map(|(p, j)| (*j, p)).collect();
    let coords = Box::new(move |v: &SparseVec<Rational>| {
        sub.reduce(v).residual.into_iter().map(|(j, x)| (position[&j], x)).collect()
    });
    (keep, coords)
}

/// A two-sided module over one algebra.
#[derive(Clone, Debug)]
pub struct FiniteBimodule {
    algebra: FiniteAlgebra,
    dim: usize,
    left: Vec<SparseMatrix>,
    right: Vec<SparseMatrix>,
}

impl FiniteBimodule {
    pub fn new(
        algebra: FiniteAlgebra,
        dim: usize,
        left: Vec<SparseMatrix>,
        right: Vec<SparseMatrix>,
    ) -> Result<Self, ContractionError> {
        FiniteModule::new(algebra.clone(), Side::Left, dim, left.clone())?;
        FiniteModule::new(algebra.clone(), Side::Right, dim, right.clone())?;
        for (a, l) in left.iter().enumerate() {
            for (b, r) in right.iter().enumerate() {
                if l.times(r) != r.times(l) {
                    return Err(ContractionError::InvalidModule(format!(
                        "left action of basis {a} and right action of basis {b} do not commute"
                    )));
                }
            }
        }
        Ok(FiniteBimodule { algebra, dim, left, right })
    }

    pub fn diagonal(a: &FiniteAlgebra) -> FiniteBimodule {
        let left = (0..a.dim()).map(|b| a.left_mul(b)).collect();
        let right = (0..a.dim()).map(|b| a.right_mul(b)).collect();
        FiniteBimodule::new(a.clone(), a.dim(), left, right).expect("diagonal bimodule")
    }

    /// `A ⊗ A` with the outer actions; free of rank one over `A^e`.
    pub fn free(a: &FiniteAlgebra) -> FiniteBimodule {
        let env = a.enveloping();
        FiniteBimodule::from_left_enveloping(&FiniteModule::regular(&env, Side::Left, 1), a)
            .expect("free bimodule")
    }

    pub fn zero(a: &FiniteAlgebra) -> FiniteBimodule {
        let z = vec![SparseMatrix::zero(0, 0); a.dim()];
        FiniteBimodule { algebra: a.clone(), dim: 0, left: z.clone(), right: z }
    }

    /// `A` with the left action pulled back along an automorphism `σ`:
    /// `f·m = σ(f)m`.
    pub fn twisted_diagonal(a: &FiniteAlgebra, sigma: &AlgebraMap) -> Result<FiniteBimodule, ContractionError> {
        if *sigma.source() != *a || *sigma.target() != *a {
            return Err(ContractionError::Incompatible(format!("{} is not an endomorphism", sigma.name())));
        }
        let diag = FiniteBimodule::diagonal(a);
        let left = (0..a.dim()).map(|b| combine(&diag.left, a.dim(), sigma.image(b))).collect();
        FiniteBimodule::new(a.clone(), a.dim(), left, diag.right)
    }

    /// Reads `(f ⊗ g')·m = f m g` off a left module over `A ⊗ A^op`.
    pub fn from_left_enveloping(m: &FiniteModule, a: &FiniteAlgebra) -> Result<FiniteBimodule, ContractionError> {
        let d = a.dim();
        if m.side() != Side::Left || m.algebra().dim() != d * d {
            return Err(ContractionError::Incompatible("expected a left module over the enveloping algebra".into()));
        }
        let u = a.unit();
        let left = (0..d).map(|f| m.action(f * d + u).clone()).collect();
        let right = (0..d).map(|g| m.action(u * d + g).clone()).collect();
        FiniteBimodule::new(a.clone(), m.dim(), left, right)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self, b: usize) -> &SparseMatrix {
        &self.left[b]
    }

    pub fn right(&self, b: usize) -> &SparseMatrix {
        &self.right[b]
    }

    /// `(f ⊗ g')·m = f m g` over `env = A ⊗ A^op`.
    pub fn as_left_enveloping(&self) -> FiniteModule {
        self.enveloping(Side::Left)
    }

    /// `m·(f ⊗ g') = g' m f` over `env = A ⊗ A^op`.
    pub fn as_right_enveloping(&self) -> FiniteModule {
        self.enveloping(Side::Right)
    }

    fn enveloping(&self, side: Side) -> FiniteModule {
        let d = self.algebra.dim();
        let action = (0..d * d)
            .map(|i| {
                let (f, g) = (i / d, i % d);
                match side {
                    Side::Left => self.left[f].times(&self.right[g]),
                    Side::Right => self.left[g].times(&self.right[f]),
                }
            })
            .collect();
        FiniteModule::new(self.algebra.enveloping(), side, self.dim, action).expect("commuting actions")
    }
}

/// The swap automorphism `(a, b) ↦ (b, a)` of `A ⊗ A`.
pub fn swap_automorphism(a: &FiniteAlgebra) -> AlgebraMap {
    let d = a.dim();
    let a2 = a.tensor(a);
    let images = (0..d * d).map(|i| basis_vec((i % d) * d + i / d)).collect();
    AlgebraMap::new("swap", a2.clone(), a2, images).expect("swap is an algebra map")
}

/// `^σA₂` as a right `A₂^e`-module:
/// `(a, b)·(f₁, f₂, f₁', f₂') = (f₂' a f₁, f₁' b f₂)`.
pub fn twisted_module(a: &FiniteAlgebra, sigma: &AlgebraMap) -> Result<FiniteModule, ContractionError> {
    Ok(FiniteBimodule::twisted_diagonal(&a.tensor(a), sigma)?.as_right_enveloping())
}

/// The cokernel of `N ⊗ R ⊗ M → N ⊗ M`, `(n, r, m) ↦ n·r ⊗ m − n ⊗ e(r)·m`.
#[derive(Clone, Debug)]
pub struct Balanced {
    left_dim: usize,
    right_dim: usize,
    relations: Echelon<Rationals>,
}

impl Balanced {
    /// Dimension of `N ⊗ M` before dividing out.
    pub fn space_dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    pub fn dim(&self) -> usize {
        self.space_dim() - self.relations.rank()
    }

    pub fn relations(&self) -> &Echelon<Rationals> {
        &self.relations
    }

    /// Projection `N ⊗ M → N ⊗_R M` on the non-pivot coordinates.
    pub fn projection(&self) -> SparseMatrix {
        let (keep, coords) = complement(&self.relations, self.space_dim());
        let cols = (0..self.space_dim()).map(|j| coords(&basis_vec(j))).collect();
        SparseMatrix::from_columns(keep.len(), cols)
    }

    /// The left action of `via.source()` on the quotient through
    /// `n ⊗ m ↦ n ⊗ via(s)·m`; fails unless it preserves the relations.
    pub fn residual_left(&self, m: &FiniteModule, via: &AlgebraMap) -> Result<FiniteModule, ContractionError> {
        let restricted = m.pullback(via)?;
        let (keep, coords) = complement(&self.relations, self.space_dim());
        let rd = self.right_dim;
        let lift = |s: usize, v: &SparseVec<Rational>| -> SparseVec<Rational> {
            let mut out = Vec::new();
            for (idx, x) in v {
                let (i, j) = (idx / rd, idx % rd);
                let image = restricted.action(s).column(j);
                out.extend(image.iter().map(|(r, y)| (i * rd + r, x * y)));
            }
            collect_vec(&Rationals, out)
        };
        for r in 0..self.relations.rank() {
            for s in 0..restricted.algebra().dim() {
                if !self.relations.contains(&lift(s, self.relations.row(r))) {
                    return Err(ContractionError::Incompatible(format!(
                        "{} does not commute with the balancing relations",
                        via.name()
                    )));
                }
            }
        }
        let action = (0..restricted.algebra().dim())
            .map(|s| {
                let cols = keep.iter().map(|&j| coords(&lift(s, &basis_vec(j)))).collect();
                SparseMatrix::from_columns(keep.len(), cols)
            })
            .collect();
        FiniteModule::new(restricted.algebra().clone(), Side::Left, keep.len(), action)
    }
}

/// `N ⊗_{R} e^*(M)` for a right `R`-module `N`, a left module `M` over the
/// target of `e : R → S`.
pub fn tensor_over(n: &FiniteModule, m: &FiniteModule, e: &AlgebraMap) -> Result<Balanced, ContractionError> {
    if n.side() != Side::Right || m.side() != Side::Left {
        return Err(ContractionError::Incompatible("need a right module on the left and a left module on the right".into()));
    }
    if *n.algebra() != *e.source() {
        return Err(ContractionError::Incompatible(format!("right module is not over the source of {}", e.name())));
    }
    let m = m.pullback(e)?;
    let md = m.dim();
    let mut relations = Echelon::new(Rationals);
    for r in 0..e.source().dim() {
        let (nr, rm) = (n.action(r), m.action(r));
        for i in 0..n.dim() {
            for j in 0..md {
                let mut v: Vec<(usize, Rational)> = nr.column(i).iter().map(|(k, x)| (k * md + j, x.clone())).collect();
                v.extend(rm.column(j).iter().map(|(k, x)| (i * md + k, -x)));
                relations.insert(&collect_vec(&Rationals, v));
            }
        }
    }
    Ok(Balanced { left_dim: n.dim(), right_dim: md, relations })
}

/// Both sides of the factorization as quotients of `A ⊗ A ⊗ M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarmupReport {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub module_dim: usize,
    pub space_dim: usize,
    /// `dim ^σA₂ ⊗_{A₂^e} M`.
    pub lhs_dim: usize,
    /// `dim A ⊗_{A^e_12} (A ⊗_{A^e_21} M)` from the lifted relations.
    pub rhs_dim: usize,
    /// The same right side computed as two successive balanced tensors.
    pub nested_dim: usize,
    pub kernel_pi_rank: usize,
    pub kernel_p_rank: usize,
    pub joint_rank: usize,
    pub kernels_equal: bool,
}

impl WarmupReport {
    pub fn passed(&self) -> bool {
        self.kernels_equal && self.lhs_dim == self.rhs_dim && self.rhs_dim == self.nested_dim
    }
}

/// Compares `ker π` and `ker p₂p₁` inside `A ⊗ A ⊗ M` for a bimodule `M`
/// over `A ⊗ A`.
pub fn warmup_factorization(a: &FiniteAlgebra, m: &FiniteBimodule, label: &str) -> Result<WarmupReport, ContractionError> {
    let a2 = a.tensor(a);
    if *m.algebra() != a2 {
        return Err(ContractionError::Incompatible("module is not over A ⊗ A".into()));
    }
    let d = a.dim();
    let md = m.dim();
    let ml = m.as_left_enveloping();
    let emb = enveloping_embeddings(a)?;
    let sigma_a2 = twisted_module(a, &swap_automorphism(a))?;
    let pi = tensor_over(&sigma_a2, &ml, &AlgebraMap::identity(ml.algebra()))?;

    // A as a right A^e-module: b·(f ⊗ g') = g' b f
    let diag = FiniteBimodule::diagonal(a).as_right_enveloping();
    let (m21, m12) = (ml.pullback(&emb.e21)?, ml.pullback(&emb.e12)?);
    let idx = |x: usize, y: usize, j: usize| (x * d + y) * md + j;
    let mut p = Echelon::new(Rationals);
    for r in 0..d * d {
        let (rb, r21, r12) = (diag.action(r), m21.action(r), m12.action(r));
        for x in 0..d {
            for y in 0..d {
                for j in 0..md {
                    // a ⊗ (b·r ⊗ m − b ⊗ e21(r)m)
                    let mut v: Vec<(usize, Rational)> = rb.column(y).iter().map(|(k, c)| (idx(x, *k, j), c.clone())).collect();
                    v.extend(r21.column(j).iter().map(|(k, c)| (idx(x, y, *k), -c)));
                    p.insert(&collect_vec(&Rationals, v));
                    // a·r ⊗ b ⊗ m − a ⊗ b ⊗ e12(r)m
                    let mut w: Vec<(usize, Rational)> = rb.column(x).iter().map(|(k, c)| (idx(*k, y, j), c.clone())).collect();
                    w.extend(r12.column(j).iter().map(|(k, c)| (idx(x, y, *k), -c)));
                    p.insert(&collect_vec(&Rationals, w));
                }
            }
        }
    }
    let mut joint = pi.relations().clone();
    for i in 0..p.rank() {
        joint.insert(p.row(i));
    }

    let ae_id = AlgebraMap::identity(&a.enveloping());
    let inner = tensor_over(&diag, &ml, &emb.e21)?;
    let inner_module = inner.residual_left(&ml, &emb.e12)?;
    let outer = tensor_over(&diag, &inner_module, &ae_id)?;

    let space_dim = d * d * md;
    let (rp, rpp, rj) = (pi.relations().rank(), p.rank(), joint.rank());
    Ok(WarmupReport {
        label: label.to_string(),
        seed: None,
        module_dim: md,
        space_dim,
        lhs_dim: space_dim - rp,
        rhs_dim: space_dim - rpp,
        nested_dim: outer.dim(),
        kernel_pi_rank: rp,
        kernel_p_rank: rpp,
        joint_rank: rj,
        kernels_equal: rp == rpp && rp == rj,
    })
}

/// A pseudo-random bimodule over `A ⊗ A`: a free module of rank one or two
/// over `A₂^e` divided by the submodule generated by up to two sparse
/// integer vectors. Deterministic in `seed`.
pub fn random_bimodule(a: &FiniteAlgebra, seed: u64) -> FiniteBimodule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a2 = a.tensor(a);
    let env = a2.enveloping();
    let free = FiniteModule::regular(&env, Side::Left, rng.gen_range(1..=2));
    let gens: Vec<SparseVec<Rational>> = (0..rng.gen_range(0..=2))
        .map(|_| {
            let entries = (0..rng.gen_range(1..=3)).map(|_| {
                let c = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
                (rng.gen_range(0..free.dim()), q(c, 1))
            });
            collect_vec(&Rationals, entries.collect::<Vec<_>>())
        })
        .collect();
    FiniteBimodule::from_left_enveloping(&free.quotient(&gens), &a2).expect("quotient of a free module")
}

/// Diagonal, free, zero and `count` seeded random bimodules over `A ⊗ A`.
pub fn warmup_corpus(a: &FiniteAlgebra, seed: u64, count: usize) -> Vec<(String, Option<u64>, FiniteBimodule)> {
    let a2 = a.tensor(a);
    let mut out = vec![
        ("diagonal".to_string(), None, FiniteBimodule::diagonal(&a2)),
        ("free".to_string(), None, FiniteBimodule::free(&a2)),
        ("zero".to_string(), None, FiniteBimodule::zero(&a2)),
    ];
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        out.push((format!("random-{s}"), Some(s), random_bimodule(a, s)));
    }
    out
}

/// Runs [`warmup_factorization`] on every corpus member in parallel.
pub fn warmup_suite(a: &FiniteAlgebra, seed: u64, count: usize) -> Result<Vec<WarmupReport>, ContractionError> {
    use rayon::prelude::*;
    warmup_corpus(a, seed, count)
        .into_par_iter()
        .map(|(label, s, m)| {
            let mut r = warmup_factorization(a, &m, &label)?;
            r.seed = s;
            Ok(r)
        })
        .collect()
}

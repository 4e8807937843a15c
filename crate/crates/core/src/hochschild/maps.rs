use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_traits::One;

use super::complex::{truncation_obstruction, unit_coefficient, Chain, StandardComplex, Term};
use super::homology::HomologyBases;
use super::HochschildError;
use crate::dgcore::{compose_functors, minus_one_pow, validate_nat_transform, DgCategory, DgFunctor, LinComb, NatTransform};
use crate::qlinalg::{per_prime, to_field, Field, Mat, Rational, Rationals, RankMode, SparseMatrix, SparseVec};

/// Degree-zero map of truncated complexes, one matrix per level.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMapData {
    pub levels: Vec<SparseMatrix>,
}

impl ChainMapData {
    pub fn identity(sc: &StandardComplex) -> Self {
        ChainMapData { levels: sc.level_dims().into_iter().map(SparseMatrix::eye).collect() }
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Block `C^k(src) → C^k(tgt)` of the map.
    pub fn total_block(&self, src: &StandardComplex, tgt: &StandardComplex, k: i64) -> SparseMatrix {
        let cols = src.block(k);
        let rows = tgt.block(k).len();
        let mut entries = Vec::new();
        for (col, &(m, i)) in cols.iter().enumerate() {
            if m >= self.levels.len() {
                continue;
            }
            for (r, v) in self.levels[m].column(i) {
                entries.push((tgt.block_position(m, *r), col, v.clone()));
            }
        }
        SparseMatrix::from_triplets(&Rationals, rows, cols.len(), entries)
    }
}

fn same(a: &Arc<DgCategory>, b: &Arc<DgCategory>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Expands `x_1 ⊗ … ⊗ x_m` of linear combinations into basis tuples.
fn expand(slots: &[&LinComb]) -> Vec<(Vec<usize>, Rational)> {
    let mut acc: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::one())];
    for s in slots {
        let mut next = Vec::with_capacity(acc.len() * s.len());
        for (t, a) in &acc {
            for (k, v) in s.iter() {
                let mut t2 = t.clone();
                t2.push(*k);
                next.push((t2, a * v));
            }
        }
        acc = next;
    }
    acc
}

/// Chain map `m[a_1|…] ↦ (α_{c_0} ∘ φ(m))[φ(a_1)|…]` of the pair `(φ, α)`,
/// where `α: φF ⇒ F'φ`.
pub fn induced_chain_map(
    phi: &DgFunctor,
    alpha: &NatTransform,
    src: &StandardComplex,
    tgt: &StandardComplex,
) -> Result<ChainMapData, HochschildError> {
    if !same(phi.source(), src.category()) || !same(phi.target(), tgt.category()) {
        return Err(HochschildError::Mismatch("functor does not go between the complexes' categories".into()));
    }
    if src.is_normalized() != tgt.is_normalized() {
        return Err(HochschildError::Mismatch("normalized and full complexes cannot be mixed".into()));
    }
    let from = compose_functors(phi, src.functor())?;
    let to = compose_functors(tgt.functor(), phi)?;
    if *alpha.from != from || *alpha.to != to {
        return Err(HochschildError::InvalidTransform("expected a transformation φF ⇒ F'φ".into()));
    }
    if alpha.degree != 0 || !alpha.is_closed() {
        return Err(HochschildError::InvalidTransform("transformation must be closed of degree 0".into()));
    }
    let diags = validate_nat_transform(alpha);
    if !diags.is_empty() {
        let text: Vec<String> = diags.iter().map(ToString::to_string).collect();
        return Err(HochschildError::InvalidTransform(text.join("; ")));
    }
    Ok(induced_unchecked(phi, &alpha.components, src, tgt))
}

/// `(φ, id)_*` for a functor commuting strictly with the twists, `φF = F'φ`.
pub fn induced_commuting(
    phi: &DgFunctor,
    src: &StandardComplex,
    tgt: &StandardComplex,
) -> Result<ChainMapData, HochschildError> {
    let from = Arc::new(compose_functors(phi, src.functor())?);
    let to = compose_functors(tgt.functor(), phi)?;
    if *from != to {
        return Err(HochschildError::Mismatch("functor does not commute with the twists".into()));
    }
    induced_chain_map(phi, &NatTransform::identity(from), src, tgt)
}

fn induced_unchecked(phi: &DgFunctor, alpha: &[LinComb], src: &StandardComplex, tgt: &StandardComplex) -> ChainMapData {
    let t = phi.target();
    let top = src.max_level().min(tgt.max_level());
    let levels = (0..=top)
        .map(|m| {
            let cols = src
                .level(m)
                .chains()
                .iter()
                .map(|ch| {
                    let coef = t.compose(&alpha[ch.base], phi.apply_basis(ch.coefficient));
                    let mut slots: Vec<&LinComb> = vec![&coef];
                    slots.extend(ch.bars.iter().map(|b| phi.apply_basis(*b)));
                    let terms: Vec<Term> =
                        expand(&slots).into_iter().map(|(mut tup, v)| (tup.remove(0), tup, v)).collect();
                    tgt.terms_to_vec(m, terms)
                })
                .collect();
            SparseMatrix::from_columns(tgt.level(m).len(), cols)
        })
        .collect();
    ChainMapData { levels }
}

/// Levelwise `a ∘ b`.
pub fn compose_chain_maps(a: &ChainMapData, b: &ChainMapData) -> ChainMapData {
    ChainMapData { levels: a.levels.iter().zip(&b.levels).map(|(x, y)| x.times(y)).collect() }
}

/// `D f = f D` on every level of `src` where `f` is defined.
pub fn check_chain_map(cm: &ChainMapData, src: &StandardComplex, tgt: &StandardComplex) -> Result<(), String> {
    for m in 0..cm.levels.len() {
        let f = &cm.levels[m];
        if tgt.d1(m).times(f) != f.times(src.d1(m)) {
            return Err(format!("map does not commute with d1 on level {m}"));
        }
        if m >= 1 && tgt.d2(m).times(f) != cm.levels[m - 1].times(src.d2(m)) {
            return Err(format!("map does not commute with d2 on level {m}"));
        }
    }
    Ok(())
}

/// Homotopy `H` from level `k` to `k + 1`, for `k < N`: cyclic insertion of
/// the coefficient into the bar with unit coefficient.
pub fn homotopy_h(sc: &StandardComplex) -> Vec<SparseMatrix> {
    let c = sc.category();
    let f = sc.functor();
    (0..sc.max_level())
        .map(|k| {
            let cols = sc
                .level(k)
                .chains()
                .iter()
                .map(|ch| sc.terms_to_vec(k + 1, homotopy_terms(c, f, ch)))
                .collect();
            SparseMatrix::from_columns(sc.level(k + 1).len(), cols)
        })
        .collect()
}

fn homotopy_terms(c: &DgCategory, f: &DgFunctor, ch: &Chain) -> Vec<Term> {
    let k = ch.bars.len();
    let mut a = Vec::with_capacity(k + 1);
    a.push(ch.coefficient);
    a.extend_from_slice(&ch.bars);
    let deg = |i: usize| c.degree(a[i]);
    let singles: Vec<LinComb> = a.iter().map(|x| vec![(*x, Rational::one())]).collect();
    let mut out = Vec::new();
    for j in 0..=k {
        // [F(a_{k-j+1}) | … | F(a_k) | a_0 | … | a_{k-j}]
        let moved: i64 = (k + 1 - j..=k).map(deg).sum();
        let kept: i64 = (0..=k - j).map(deg).sum();
        let sign = minus_one_pow((j * k) as i64 + moved * kept);
        let mut slots: Vec<&LinComb> = (k + 1 - j..=k).map(|i| f.apply_basis(a[i])).collect();
        slots.extend((0..=k - j).map(|i| &singles[i]));
        let base = c.element(a[k - j]).src;
        let unit = unit_coefficient(c, f.on_object(base))[0].0;
        for (bars, v) in expand(&slots) {
            out.push((unit, bars, v * &sign));
        }
    }
    out
}

/// Checks `d̄1 H + H d̄1 = 0` and `d2 H + H d2 = 1 - (F, id)_*` on levels
/// `0..N`.
pub fn check_homotopy(sc: &StandardComplex, h: &[SparseMatrix], f_id: &ChainMapData) -> Result<(), String> {
    for m in 0..sc.max_level() {
        let lhs = sc.d1(m + 1).times(&h[m]).plus(&h[m].times(sc.d1(m)));
        if !lhs.is_zero() {
            return Err(format!("d̄1 H + H d̄1 ≠ 0 on level {m}"));
        }
        let mut lhs = sc.d2(m + 1).times(&h[m]);
        if m >= 1 {
            lhs = lhs.plus(&h[m - 1].times(sc.d2(m)));
        }
        let rhs = SparseMatrix::eye(sc.level(m).len()).minus(&f_id.levels[m]);
        if lhs != rhs {
            return Err(format!("d2 H + H d2 ≠ 1 - (F, id)_* on level {m}"));
        }
    }
    Ok(())
}

/// Action on homology, per degree: exact over the rationals or one matrix
/// per prime.
#[derive(Clone, Debug, PartialEq)]
pub enum ActionMatrix {
    Exact(SparseMatrix),
    Modular(Vec<(u64, Mat<u64>)>),
}

fn level_matrices<F: Field>(field: &F, cm: &ChainMapData) -> Option<Vec<Mat<F::El>>> {
    cm.levels.iter().map(|m| to_field(field, m)).collect()
}

/// Matrix of the map induced on homology in degree `k`, columns indexed by
/// the source classes and rows by the target classes.
pub fn action_over<F: Field>(
    field: &F,
    cm: &ChainMapData,
    src: &StandardComplex,
    src_bases: &HomologyBases<F>,
    tgt: &StandardComplex,
    tgt_bases: &HomologyBases<F>,
    k: i64,
) -> Option<Mat<F::El>> {
    let levels = level_matrices(field, cm)?;
    let (sb, tb) = (src_bases.get(k)?, tgt_bases.get(k)?);
    let block = src.block(k);
    let columns = (0..sb.classes())
        .map(|i| {
            let rep = sb.representative(i);
            let mut image: SparseVec<F::El> = Vec::new();
            for (p, a) in rep {
                let (m, ci) = block[*p];
                let pushed: SparseVec<F::El> =
                    levels[m].column(ci).iter().map(|(r, v)| (tgt.block_position(m, *r), field.mul(a, v))).collect();
                image.extend(pushed);
            }
            let image = crate::qlinalg::collect_vec(field, image);
            let coords = tb.coordinates(&image).expect("a chain map sends cycles to cycles");
            coords.into_iter().enumerate().filter(|(_, v)| !field.is_zero(v)).collect()
        })
        .collect();
    Some(Mat::from_columns(tb.classes(), columns))
}

/// Action of an endomorphism chain map of `sc` on homology. Degrees without
/// an exact truncation certificate are refused unless `allow_heuristic`.
pub fn homology_action(
    cm: &ChainMapData,
    sc: &StandardComplex,
    degrees: RangeInclusive<i64>,
    mode: &RankMode,
    allow_heuristic: bool,
) -> Result<BTreeMap<i64, ActionMatrix>, HochschildError> {
    mode.validate()?;
    if !allow_heuristic {
        for k in degrees.clone() {
            if let Some(m) = truncation_obstruction(sc.category().degree_bounds(), sc.max_level(), k) {
                return Err(HochschildError::NotCertified { degree: k, reason: format!("level {m} is missing") });
            }
        }
    }
    let mut out = BTreeMap::new();
    match mode {
        RankMode::Exact => {
            let bases = HomologyBases::new(&Rationals, sc, degrees.clone())?.expect("rationals accept everything");
            for k in degrees {
                let m = action_over(&Rationals, cm, sc, &bases, sc, &bases, k).expect("rational action");
                out.insert(k, ActionMatrix::Exact(m));
            }
        }
        RankMode::Modular(ps) => {
            let mut err = None;
            let per = per_prime(ps, |f| {
                let bases = match HomologyBases::new(f, sc, degrees.clone()) {
                    Ok(b) => b?,
                    Err(e) => {
                        err = Some(e);
                        return None;
                    }
                };
                degrees.clone().map(|k| action_over(f, cm, sc, &bases, sc, &bases, k).map(|m| (k, m))).collect::<Option<Vec<_>>>()
            });
            if let Some(e) = err {
                return Err(e);
            }
            let mut by_degree: BTreeMap<i64, Vec<(u64, Mat<u64>)>> = BTreeMap::new();
            for (p, mats) in per? {
                for (k, m) in mats {
                    by_degree.entry(k).or_default().push((p, m));
                }
            }
            for (k, v) in by_degree {
                out.insert(k, ActionMatrix::Modular(v));
            }
        }
    }
    Ok(out)
}

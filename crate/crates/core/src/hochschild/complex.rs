use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;

use super::HochschildError;
use crate::dgcore::{
    minus_one_pow, permutation_functor_on, tensor_power, validate_functor, DgCategory, DgFunctor, LinComb, Permutation,
};
use crate::qlinalg::{Rational, Rationals, SparseMatrix};

/// Coefficient twist of the standard complex.
#[derive(Clone, Debug)]
pub enum TwistSpec {
    Identity,
    Functor(Arc<DgFunctor>),
    /// `ρ_perm` on the `n`-fold tensor power of the given category.
    Permutation { n: usize, perm: Permutation },
}

impl TwistSpec {
    pub fn label(&self) -> String {
        match self {
            TwistSpec::Identity => "id".into(),
            TwistSpec::Functor(_) => "functor".into(),
            TwistSpec::Permutation { n, perm } => format!("perm:{n}:{perm}"),
        }
    }

    /// Category of the complex together with the twisting endofunctor.
    pub fn resolve(&self, c: Arc<DgCategory>) -> Result<(Arc<DgCategory>, Arc<DgFunctor>), HochschildError> {
        match self {
            TwistSpec::Identity => Ok((c.clone(), Arc::new(DgFunctor::identity(c)))),
            TwistSpec::Functor(f) => {
                if **f.source() != *c || **f.target() != *c {
                    return Err(HochschildError::NotEndofunctor);
                }
                let diags = validate_functor(f);
                if !diags.is_empty() {
                    return Err(HochschildError::InvalidFunctor(diags));
                }
                Ok((f.source().clone(), f.clone()))
            }
            TwistSpec::Permutation { n, perm } => {
                if perm.len() != *n {
                    return Err(HochschildError::Mismatch(format!("{perm} does not act on {n} points")));
                }
                let power = Arc::new(tensor_power(&c, *n)?);
                let f = permutation_functor_on(&c, &power, perm);
                Ok((power, Arc::new(f)))
            }
        }
    }
}

/// One basis chain `a_0[a_1|…|a_m]`; `a_0 ∈ C(c_1, F(c_0))`,
/// `a_i ∈ C(c_{i+1}, c_i)` with `c_{m+1} = c_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub base: usize,
    pub coefficient: usize,
    pub bars: Vec<usize>,
    pub degree: i64,
}

impl Chain {
    pub fn level(&self) -> usize {
        self.bars.len()
    }

    fn key(&self) -> Vec<usize> {
        let mut k = Vec::with_capacity(self.bars.len() + 1);
        k.push(self.coefficient);
        k.extend_from_slice(&self.bars);
        k
    }
}

#[derive(Clone, Debug, Default)]
pub struct Level {
    chains: Vec<Chain>,
    index: HashMap<Vec<usize>, usize>,
}

impl Level {
    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Index of `coefficient[bars]`, if it is a basis chain.
    pub fn find(&self, coefficient: usize, bars: &[usize]) -> Option<usize> {
        let mut k = Vec::with_capacity(bars.len() + 1);
        k.push(coefficient);
        k.extend_from_slice(bars);
        self.index.get(&k).copied()
    }
}

/// Truncated standard complex with twisted coefficients.
#[derive(Clone, Debug)]
pub struct StandardComplex {
    category: Arc<DgCategory>,
    functor: Arc<DgFunctor>,
    twist_label: String,
    max_level: usize,
    normalized: bool,
    levels: Vec<Level>,
    d1: Vec<SparseMatrix>,
    d2: Vec<SparseMatrix>,
    blocks: BTreeMap<i64, Vec<(usize, usize)>>,
    block_pos: Vec<Vec<usize>>,
}

pub(crate) type Term = (usize, Vec<usize>, Rational);

impl StandardComplex {
    /// Builds levels `0..=max_level` of the complex of `category` twisted by
    /// the endofunctor `functor`.
    pub fn new(
        category: Arc<DgCategory>,
        functor: Arc<DgFunctor>,
        max_level: usize,
        normalized: bool,
    ) -> Result<Self, HochschildError> {
        if !(Arc::ptr_eq(functor.source(), &category) || **functor.source() == *category)
            || !(Arc::ptr_eq(functor.target(), &category) || **functor.target() == *category)
        {
            return Err(HochschildError::NotEndofunctor);
        }
        let mut sc = StandardComplex {
            category,
            functor,
            twist_label: String::new(),
            max_level,
            normalized,
            levels: Vec::new(),
            d1: Vec::new(),
            d2: Vec::new(),
            blocks: BTreeMap::new(),
            block_pos: Vec::new(),
        };
        for m in 0..=max_level {
            let level = sc.enumerate_level(m);
            sc.levels.push(level);
        }
        for m in 0..=max_level {
            let d1 = sc.build_d1(m);
            let d2 = sc.build_d2(m);
            sc.d1.push(d1);
            sc.d2.push(d2);
        }
        for (m, level) in sc.levels.iter().enumerate() {
            let mut pos = Vec::with_capacity(level.len());
            for (i, ch) in level.chains.iter().enumerate() {
                let block = sc.blocks.entry(ch.degree).or_default();
                pos.push(block.len());
                block.push((m, i));
            }
            sc.block_pos.push(pos);
        }
        Ok(sc)
    }

    pub fn category(&self) -> &Arc<DgCategory> {
        &self.category
    }

    pub fn functor(&self) -> &Arc<DgFunctor> {
        &self.functor
    }

    pub fn twist_label(&self) -> &str {
        &self.twist_label
    }

    pub(crate) fn set_twist_label(&mut self, label: String) {
        self.twist_label = label;
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn level(&self, m: usize) -> &Level {
        &self.levels[m]
    }

    pub fn level_dims(&self) -> Vec<usize> {
        self.levels.iter().map(Level::len).collect()
    }

    /// Sign-altered internal differential `(-1)^m d_1` on level `m`.
    pub fn d1(&self, m: usize) -> &SparseMatrix {
        &self.d1[m]
    }

    /// Face differential from level `m` to level `m - 1` (zero rows at `m = 0`).
    pub fn d2(&self, m: usize) -> &SparseMatrix {
        &self.d2[m]
    }

    /// Chains of total degree `k` as `(level, index)`.
    pub fn block(&self, k: i64) -> &[(usize, usize)] {
        self.blocks.get(&k).map_or(&[], Vec::as_slice)
    }

    /// Position of chain `(m, i)` inside its total-degree block.
    pub fn block_position(&self, m: usize, i: usize) -> usize {
        self.block_pos[m][i]
    }

    pub fn total_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }

    fn slot_allowed(&self, slot: usize) -> bool {
        !(self.normalized && self.category.is_unit(slot))
    }

    fn enumerate_level(&self, m: usize) -> Level {
        let c = &*self.category;
        let mut level = Level::default();
        for c0 in 0..c.num_objects() {
            // bars are built from a_m backwards; `rev` holds a_m, a_{m-1}, …
            let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), c0)];
            let mut paths = Vec::new();
            while let Some((rev, at)) = stack.pop() {
                if rev.len() == m {
                    paths.push((rev, at));
                    continue;
                }
                for &a in c.outgoing(at).iter().rev() {
                    if self.slot_allowed(a) {
                        let mut r = rev.clone();
                        r.push(a);
                        stack.push((r, c.element(a).tgt));
                    }
                }
            }
            let fc0 = self.functor.on_object(c0);
            for (rev, c1) in paths {
                let bars: Vec<usize> = rev.into_iter().rev().collect();
                let bar_degree: i64 = bars.iter().map(|b| c.degree(*b)).sum();
                for &a0 in c.hom(c1, fc0) {
                    let ch = Chain {
                        base: c0,
                        coefficient: a0,
                        bars: bars.clone(),
                        degree: c.degree(a0) + bar_degree - m as i64,
                    };
                    let idx = level.chains.len();
                    level.index.insert(ch.key(), idx);
                    level.chains.push(ch);
                }
            }
        }
        level
    }

    fn column(&self, target_level: usize, terms: Vec<Term>) -> Vec<(usize, Rational)> {
        let lv = &self.levels[target_level];
        let mut out = Vec::with_capacity(terms.len());
        for (coef, bars, v) in terms {
            if bars.iter().any(|b| !self.slot_allowed(*b)) {
                continue;
            }
            let i = lv.find(coef, &bars).expect("term of a differential is a basis chain");
            out.push((i, v));
        }
        crate::qlinalg::collect_vec(&Rationals, out)
    }

    /// `d_1` terms of a chain, without the level sign.
    pub(crate) fn d1_terms(&self, ch: &Chain) -> Vec<Term> {
        let c = &*self.category;
        let mut out = Vec::new();
        let mut before = c.degree(ch.coefficient);
        for (k, v) in c.diff_basis(ch.coefficient) {
            out.push((*k, ch.bars.clone(), v.clone()));
        }
        for i in 0..ch.bars.len() {
            let s = minus_one_pow(before);
            for (k, v) in c.diff_basis(ch.bars[i]) {
                let mut bars = ch.bars.clone();
                bars[i] = *k;
                out.push((ch.coefficient, bars, v * &s));
            }
            before += c.degree(ch.bars[i]);
        }
        out
    }

    pub(crate) fn d2_terms(&self, ch: &Chain) -> Vec<Term> {
        let c = &*self.category;
        let m = ch.bars.len();
        let mut out = Vec::new();
        if m == 0 {
            return out;
        }
        let a = &ch.bars;
        for (k, v) in c.compose_basis(ch.coefficient, a[0]) {
            out.push((*k, a[1..].to_vec(), v.clone()));
        }
        for i in 1..m {
            let s = minus_one_pow(i as i64);
            for (k, v) in c.compose_basis(a[i - 1], a[i]) {
                let mut bars = Vec::with_capacity(m - 1);
                bars.extend_from_slice(&a[..i - 1]);
                bars.push(*k);
                bars.extend_from_slice(&a[i + 1..]);
                out.push((ch.coefficient, bars, v * &s));
            }
        }
        let last = a[m - 1];
        let inner: i64 = c.degree(ch.coefficient) + a[..m - 1].iter().map(|b| c.degree(*b)).sum::<i64>();
        let s = minus_one_pow(m as i64 + c.degree(last) * inner);
        let wrapped = c.compose(self.functor.apply_basis(last), &vec![(ch.coefficient, Rational::one())]);
        for (k, v) in wrapped {
            out.push((k, a[..m - 1].to_vec(), v * &s));
        }
        out
    }

    fn build_d1(&self, m: usize) -> SparseMatrix {
        let s = minus_one_pow(m as i64);
        let cols = self.levels[m]
            .chains
            .iter()
            .map(|ch| {
                let terms = self.d1_terms(ch).into_iter().map(|(k, b, v)| (k, b, v * &s)).collect();
                self.column(m, terms)
            })
            .collect();
        SparseMatrix::from_columns(self.levels[m].len(), cols)
    }

    fn build_d2(&self, m: usize) -> SparseMatrix {
        if m == 0 {
            return SparseMatrix::zero(0, self.levels[0].len());
        }
        let cols = self.levels[m].chains.iter().map(|ch| self.column(m - 1, self.d2_terms(ch))).collect();
        SparseMatrix::from_columns(self.levels[m - 1].len(), cols)
    }

    /// Sparse vector in level `target_level` from raw terms; unit bar slots
    /// are dropped in normalized mode.
    pub(crate) fn terms_to_vec(&self, target_level: usize, terms: Vec<Term>) -> Vec<(usize, Rational)> {
        self.column(target_level, terms)
    }

    /// Total differential `C^k → C^{k+1}` of the truncated complex.
    pub fn total_differential(&self, k: i64) -> SparseMatrix {
        let src = self.block(k);
        let tgt_len = self.block(k + 1).len();
        let mut entries = Vec::new();
        for (col, &(m, i)) in src.iter().enumerate() {
            for (r, v) in self.d1[m].column(i) {
                entries.push((self.block_pos[m][*r], col, v.clone()));
            }
            if m > 0 {
                for (r, v) in self.d2[m].column(i) {
                    entries.push((self.block_pos[m - 1][*r], col, v.clone()));
                }
            }
        }
        SparseMatrix::from_triplets(&Rationals, tgt_len, src.len(), entries)
    }

    /// Exact identities `d1² = 0`, `d2² = 0`, `d1 d2 + d2 d1 = 0` on every
    /// level; returns the first failure.
    pub fn check_square_zero(&self) -> Result<(), String> {
        for m in 0..=self.max_level {
            if !self.d1[m].times(&self.d1[m]).is_zero() {
                return Err(format!("d1∘d1 ≠ 0 on level {m}"));
            }
            if m >= 2 && !self.d2[m - 1].times(&self.d2[m]).is_zero() {
                return Err(format!("d2∘d2 ≠ 0 on level {m}"));
            }
            if m >= 1 && !self.d1[m - 1].times(&self.d2[m]).plus(&self.d2[m].times(&self.d1[m])).is_zero() {
                return Err(format!("d1∘d2 + d2∘d1 ≠ 0 on level {m}"));
            }
        }
        for k in self.total_degrees().collect::<Vec<_>>() {
            let a = self.total_differential(k);
            let b = self.total_differential(k + 1);
            if !b.times(&a).is_zero() {
                return Err(format!("total differential squares to non-zero at degree {k}"));
            }
        }
        Ok(())
    }
}

/// Resolves the twist and builds the complex.
pub fn build_complex(
    c: Arc<DgCategory>,
    twist: &TwistSpec,
    max_level: usize,
    normalized: bool,
) -> Result<StandardComplex, HochschildError> {
    let (cat, f) = twist.resolve(c)?;
    let mut sc = StandardComplex::new(cat, f, max_level, normalized)?;
    sc.set_twist_label(twist.label());
    Ok(sc)
}

/// Whether chains at level `m` can have total degree in `lo..=hi` given hom
/// degrees in `[dmin, dmax]`.
fn level_reaches(m: usize, (dmin, dmax): (i64, i64), lo: i64, hi: i64) -> bool {
    let m = m as i64;
    let low = (m + 1) * dmin - m;
    let high = (m + 1) * dmax - m;
    low <= hi && high >= lo
}

/// Truncation certificate for total degree `k`: `None` if every level that
/// can touch degrees `k-1..=k+1` is present, otherwise the first missing
/// level that does.
pub fn truncation_obstruction(bounds: Option<(i64, i64)>, max_level: usize, k: i64) -> Option<usize> {
    let (dmin, dmax) = bounds?;
    let span = k.unsigned_abs() as usize + dmin.unsigned_abs() as usize + dmax.unsigned_abs() as usize + 4;
    let last = max_level + 1 + 2 * span;
    (max_level + 1..=last).find(|&m| level_reaches(m, (dmin, dmax), k - 1, k + 1))
}

/// Smallest truncation level `≤ cap` certifying every degree in `lo..=hi`.
pub fn minimal_level(bounds: Option<(i64, i64)>, lo: i64, hi: i64, cap: usize) -> Option<usize> {
    (0..=cap).find(|&n| (lo..=hi).all(|k| truncation_obstruction(bounds, n, k).is_none()))
}

pub(crate) fn unit_coefficient(c: &DgCategory, object: usize) -> LinComb {
    vec![(c.unit(object), Rational::one())]
}

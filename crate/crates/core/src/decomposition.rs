//! Partitions, cyclic twists and centralizers, invariants of twisted
//! Hochschild homology, and the super-symmetric power series they are
//! compared against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dgcore::{permutation_functor_on, tensor_power, DgCategory, DgError, GradedDims, Permutation};
use crate::hochschild::{
    action_over, induced_commuting, minimal_level, total_homology, truncation_obstruction, Certificate, ChainMapData,
    HochschildError, HomologyBases, HomologySummary, StandardComplex,
};
use crate::qlinalg::{idempotent_rank_over, per_prime, Arithmetic, Field, LinalgError, Mat, RankMode, Rationals};

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("homology has both positive and negative degrees; the series is only a truncation")]
    MixedSign,
    #[error("generator {generator} does not commute with {sigma}")]
    NotCentral { generator: String, sigma: String },
    #[error("dimension overflow in the series")]
    Overflow,
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Parts stored weakly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, DecompositionError> {
        if parts.contains(&0) {
            return Err(DecompositionError::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        parts.sort_unstable();
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `i ↦ a_i`, the number of parts equal to `i`.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `Π i^{a_i} a_i!`.
    pub fn centralizer_order(&self) -> u128 {
        self.multiplicities().iter().map(|(&i, &a)| (i as u128).pow(a as u32) * factorial(a)).product()
    }

    /// `Π a_i!`, the order of the block-permuting subgroup.
    pub fn block_group_order(&self) -> u128 {
        self.multiplicities().values().map(|&a| factorial(a)).product()
    }

    /// Number of permutations with this cycle type.
    pub fn class_size(&self) -> u128 {
        factorial(self.size()) / self.centralizer_order()
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl fmt::Display for Partition {
    /// Non-increasing, e.g. `(2,1,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().rev().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = DecompositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Partition::new(Vec::new());
        }
        let parts = body
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| DecompositionError::InvalidPartition(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n`: reverse lexicographic in the non-increasing form,
/// starting with `(n)`.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            let mut parts = cur.clone();
            parts.reverse();
            out.push(Partition { parts });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Consecutive blocks `{start, …, start + len - 1}` of `sigma_of(λ)`,
/// largest parts first.
fn blocks(lambda: &Partition) -> Vec<(usize, usize)> {
    let mut start = 0;
    lambda
        .parts
        .iter()
        .rev()
        .map(|&len| {
            let b = (start, len);
            start += len;
            b
        })
        .collect()
}

/// Block-cyclic permutation with cycles `(1 … λ₁)(λ₁+1 … λ₁+λ₂)…`, parts in
/// non-increasing order.
pub fn sigma_of(lambda: &Partition) -> Permutation {
    let mut images: Vec<usize> = (0..lambda.size()).collect();
    for (start, len) in blocks(lambda) {
        for i in 0..len {
            images[start + i] = start + (i + 1) % len;
        }
    }
    Permutation::from_images(images).expect("block cycles")
}

/// Generators of `C(σ_λ) = C ⋊ S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerPresentation {
    pub n: usize,
    pub partition: Partition,
    pub sigma: Permutation,
    /// One rotation per part of size at least two.
    pub c_generators: Vec<Permutation>,
    /// Swaps of adjacent blocks of equal size.
    pub s_generators: Vec<Permutation>,
}

pub fn centralizer_gens(lambda: &Partition) -> Result<CentralizerPresentation, DecompositionError> {
    let n = lambda.size();
    let sigma = sigma_of(lambda);
    let bs = blocks(lambda);
    let mut c_generators = Vec::new();
    for &(start, len) in bs.iter().filter(|(_, len)| *len >= 2) {
        let mut images: Vec<usize> = (0..n).collect();
        for i in 0..len {
            images[start + i] = start + (i + 1) % len;
        }
        c_generators.push(Permutation::from_images(images)?);
    }
    let mut s_generators = Vec::new();
    for w in bs.windows(2) {
        let ((s1, l1), (s2, l2)) = (w[0], w[1]);
        if l1 != l2 {
            continue;
        }
        let mut images: Vec<usize> = (0..n).collect();
        for i in 0..l1 {
            images[s1 + i] = s2 + i;
            images[s2 + i] = s1 + i;
        }
        s_generators.push(Permutation::from_images(images)?);
    }
    for g in c_generators.iter().chain(&s_generators) {
        if !g.commutes_with(&sigma) {
            return Err(DecompositionError::NotCentral { generator: g.to_string(), sigma: sigma.to_string() });
        }
    }
    Ok(CentralizerPresentation { n, partition: lambda.clone(), sigma, c_generators, s_generators })
}

/// Subgroup generated by `gens`, sorted.
pub fn closure(n: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    let id = Permutation::identity(n);
    let mut frontier = vec![id.clone()];
    seen.insert(id);
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

impl CentralizerPresentation {
    pub fn s_group(&self) -> Vec<Permutation> {
        closure(self.n, &self.s_generators)
    }

    /// All of `C(σ_λ)`.
    pub fn full_group(&self) -> Vec<Permutation> {
        let gens: Vec<Permutation> = self.c_generators.iter().chain(&self.s_generators).cloned().collect();
        closure(self.n, &gens)
    }
}

/// Run parameters shared by the summand computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionOptions {
    /// Fixed truncation; `None` picks the smallest certifying level.
    pub max_level: Option<usize>,
    /// Upper bound for the automatic choice.
    pub level_cap: usize,
    pub normalized: bool,
    pub mode: RankMode,
    /// Also average over the whole centralizer.
    pub strict: bool,
    pub check_rotations: bool,
    pub allow_truncated: bool,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions {
            max_level: None,
            level_cap: 8,
            normalized: true,
            mode: RankMode::Exact,
            strict: false,
            check_rotations: true,
            allow_truncated: false,
        }
    }
}

impl DecompositionOptions {
    fn level_for(&self, bounds: Option<(i64, i64)>, degrees: &RangeInclusive<i64>) -> usize {
        self.max_level.unwrap_or_else(|| {
            minimal_level(bounds, *degrees.start(), *degrees.end(), self.level_cap).unwrap_or(self.level_cap)
        })
    }
}

/// Complex of `C^{⊗n}` twisted by `ρ_{σ_λ}`.
fn summand_complex(
    c: &DgCategory,
    power: &Arc<DgCategory>,
    lambda: &Partition,
    degrees: &RangeInclusive<i64>,
    opts: &DecompositionOptions,
) -> Result<StandardComplex, DecompositionError> {
    let sigma = sigma_of(lambda);
    let twist = Arc::new(permutation_functor_on(c, power, &sigma));
    let level = opts.level_for(power.degree_bounds(), degrees);
    let mut sc = StandardComplex::new(power.clone(), twist, level, opts.normalized)?;
    sc.set_twist_label(format!("perm:{}:{}", lambda.size(), sigma));
    Ok(sc)
}

/// Homology of `(C^{⊗n}, ρ_{σ_λ})` before taking invariants.
pub fn twisted_summand_dims(
    c: &DgCategory,
    lambda: &Partition,
    degrees: RangeInclusive<i64>,
    opts: &DecompositionOptions,
) -> Result<HomologySummary, DecompositionError> {
    let power = Arc::new(tensor_power(c, lambda.size())?);
    let sc = summand_complex(c, &power, lambda, &degrees, opts)?;
    Ok(total_homology(&sc, degrees, &opts.mode)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandDegree {
    pub twisted_dim: u64,
    pub invariant_dim: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_invariant_dim: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotations_trivial: Option<bool>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandReport {
    pub partition: Partition,
    pub sigma: String,
    pub max_level: usize,
    pub group_order: u64,
    pub degrees: BTreeMap<i64, SummandDegree>,
    pub arithmetic: Arithmetic,
}

impl SummandReport {
    pub fn invariant_dims(&self) -> GradedDims {
        GradedDims::from_pairs(self.degrees.iter().map(|(k, d)| (*k, d.invariant_dim)))
    }

    pub fn twisted_dims(&self) -> GradedDims {
        GradedDims::from_pairs(self.degrees.iter().map(|(k, d)| (*k, d.twisted_dim)))
    }

    fn trusted(&self, k: i64) -> bool {
        self.arithmetic.is_trustworthy() && self.degrees.get(&k).is_some_and(|d| d.certificate == Certificate::Exact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct FieldSummand {
    twisted: usize,
    invariant: usize,
    strict: Option<usize>,
    rotations_trivial: Option<bool>,
}

fn averaged_rank<F: Field>(
    field: &F,
    maps: &[ChainMapData],
    sc: &StandardComplex,
    bases: &HomologyBases<F>,
    k: i64,
) -> Result<Option<usize>, DecompositionError> {
    let dim = bases.get(k).map_or(0, |b| b.classes());
    let mut sum: Mat<F::El> = Mat::zero(dim, dim);
    for cm in maps {
        let Some(a) = action_over(field, cm, sc, bases, sc, bases, k) else { return Ok(None) };
        sum = sum.add(field, &a);
    }
    let inv = field.inv(&field.from_i64(maps.len() as i64));
    Ok(Some(idempotent_rank_over(field, &sum.scaled(field, &inv))?))
}

fn summand_over<F: Field>(
    field: &F,
    sc: &StandardComplex,
    group: &[ChainMapData],
    full: Option<&[ChainMapData]>,
    rotations: Option<&[ChainMapData]>,
    degrees: &RangeInclusive<i64>,
) -> Result<Option<BTreeMap<i64, FieldSummand>>, DecompositionError> {
    let Some(bases) = HomologyBases::new(field, sc, degrees.clone())? else { return Ok(None) };
    let mut out = BTreeMap::new();
    for k in degrees.clone() {
        let twisted = bases.get(k).map_or(0, |b| b.classes());
        let Some(invariant) = averaged_rank(field, group, sc, &bases, k)? else { return Ok(None) };
        let strict = match full {
            Some(maps) => match averaged_rank(field, maps, sc, &bases, k)? {
                Some(r) => Some(r),
                None => return Ok(None),
            },
            None => None,
        };
        let rotations_trivial = match rotations {
            Some(maps) => {
                let id = Mat::identity(field, twisted);
                let mut all = true;
                for cm in maps {
                    let Some(a) = action_over(field, cm, sc, &bases, sc, &bases, k) else { return Ok(None) };
                    all &= a == id;
                }
                Some(all)
            }
            None => None,
        };
        out.insert(k, FieldSummand { twisted, invariant, strict, rotations_trivial });
    }
    Ok(Some(out))
}

fn chain_maps(
    c: &DgCategory,
    power: &Arc<DgCategory>,
    sc: &StandardComplex,
    perms: &[Permutation],
) -> Result<Vec<ChainMapData>, DecompositionError> {
    perms
        .iter()
        .map(|g| {
            if g.is_identity() {
                return Ok(ChainMapData::identity(sc));
            }
            let rho = permutation_functor_on(c, power, g);
            Ok(induced_commuting(&rho, sc, sc)?)
        })
        .collect()
}

/// Invariants of the block-permuting group on the `λ`-summand, averaged in
/// every requested total degree.
pub fn invariant_dims(
    c: &DgCategory,
    lambda: &Partition,
    degrees: RangeInclusive<i64>,
    opts: &DecompositionOptions,
) -> Result<SummandReport, DecompositionError> {
    let power = Arc::new(tensor_power(c, lambda.size())?);
    summand_report(c, &power, lambda, &degrees, opts)
}

fn summand_report(
    c: &DgCategory,
    power: &Arc<DgCategory>,
    lambda: &Partition,
    degrees: &RangeInclusive<i64>,
    opts: &DecompositionOptions,
) -> Result<SummandReport, DecompositionError> {
    opts.mode.validate()?;
    let pres = centralizer_gens(lambda)?;
    let sc = summand_complex(c, power, lambda, degrees, opts)?;
    let s_perms = pres.s_group();
    let group = chain_maps(c, power, &sc, &s_perms)?;
    let full = if opts.strict { Some(chain_maps(c, power, &sc, &pres.full_group())?) } else { None };
    let rotations = if opts.check_rotations { Some(chain_maps(c, power, &sc, &pres.c_generators)?) } else { None };
    let (full, rotations) = (full.as_deref(), rotations.as_deref());

    let (values, arithmetic) = match &opts.mode {
        RankMode::Exact => {
            let v = summand_over(&Rationals, &sc, &group, full, rotations, degrees)?.expect("rationals");
            (v, Arithmetic::Exact)
        }
        RankMode::Modular(ps) => {
            let mut err = None;
            let per = per_prime(ps, |f| match summand_over(f, &sc, &group, full, rotations, degrees) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    None
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            let per = per?;
            let primes: Vec<u64> = per.iter().map(|(p, _)| *p).collect();
            let agree = per.len() >= 2 && per.windows(2).all(|w| w[0].1 == w[1].1);
            // homology mod p can only grow, so the smallest answer is the best guess
            let best = per
                .into_iter()
                .min_by_key(|(_, v)| v.values().map(|x| x.twisted).sum::<usize>())
                .expect("non-empty")
                .1;
            (best, Arithmetic::Modular { primes, agree })
        }
    };
    let bounds = sc.category().degree_bounds();
    let degrees = values
        .into_iter()
        .map(|(k, v)| {
            let certificate = match truncation_obstruction(bounds, sc.max_level(), k) {
                None => Certificate::Exact,
                Some(_) => Certificate::Heuristic,
            };
            let d = SummandDegree {
                twisted_dim: v.twisted as u64,
                invariant_dim: v.invariant as u64,
                strict_invariant_dim: v.strict.map(|x| x as u64),
                rotations_trivial: v.rotations_trivial,
                certificate,
            };
            (k, d)
        })
        .collect();
    Ok(SummandReport {
        partition: lambda.clone(),
        sigma: pres.sigma.to_string(),
        max_level: sc.max_level(),
        group_order: s_perms.len() as u64,
        degrees,
        arithmetic,
    })
}

/// Graded dimensions as a series: `coeffs[j]` is the `x^j` coefficient, a
/// Laurent polynomial in `q` keyed by degree.
type Series = Vec<BTreeMap<i64, u128>>;

fn series_mul(a: &Series, b: &Series, top: usize) -> Result<Series, DecompositionError> {
    let mut out: Series = vec![BTreeMap::new(); top + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j > top {
                break;
            }
            for (p, u) in x {
                for (q, v) in y {
                    let prod = u.checked_mul(*v).ok_or(DecompositionError::Overflow)?;
                    let slot = out[i + j].entry(p + q).or_insert(0);
                    *slot = slot.checked_add(prod).ok_or(DecompositionError::Overflow)?;
                }
            }
        }
    }
    Ok(out)
}

fn binomial(n: u128, k: u128) -> Result<u128, DecompositionError> {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i).ok_or(DecompositionError::Overflow)? / (i + 1);
    }
    Ok(r)
}

fn to_dims(m: &BTreeMap<i64, u128>) -> Result<GradedDims, DecompositionError> {
    m.iter()
        .filter(|(_, v)| **v > 0)
        .map(|(k, v)| u64::try_from(*v).map(|v| (*k, v)).map_err(|_| DecompositionError::Overflow))
        .collect::<Result<Vec<_>, _>>()
        .map(GradedDims::from_pairs)
}

/// The `x^a` coefficient of `Π_{k even}(1−q^k x)^{−h_k} Π_{k odd}(1+q^k x)^{h_k}`.
pub fn super_sym_power_dims(h: &GradedDims, a: usize) -> Result<GradedDims, DecompositionError> {
    let mut acc: Series = vec![BTreeMap::new(); a + 1];
    acc[0].insert(0, 1);
    for (k, hk) in h.iter() {
        let factor: Series = (0..=a)
            .map(|j| {
                let c = if k.rem_euclid(2) == 0 {
                    binomial(hk as u128 + j as u128 - 1 + u128::from(hk == 0), j as u128)
                        .map(|v| if hk == 0 && j > 0 { 0 } else { v })
                } else {
                    if j as u64 > hk {
                        Ok(0)
                    } else {
                        binomial(hk as u128, j as u128)
                    }
                };
                c.map(|c| {
                    let mut m = BTreeMap::new();
                    if c > 0 {
                        m.insert(k * j as i64, c);
                    }
                    m
                })
            })
            .collect::<Result<_, _>>()?;
        acc = series_mul(&acc, &factor, a)?;
    }
    to_dims(&acc[a])
}

fn convolve(a: &GradedDims, b: &GradedDims) -> Result<GradedDims, DecompositionError> {
    let mut out: BTreeMap<i64, u128> = BTreeMap::new();
    for (p, x) in a.iter() {
        for (q, y) in b.iter() {
            let slot = out.entry(p + q).or_insert(0);
            *slot = slot.checked_add(x as u128 * y as u128).ok_or(DecompositionError::Overflow)?;
        }
    }
    to_dims(&out)
}

pub fn is_one_signed(h: &GradedDims) -> bool {
    h.iter().all(|(k, _)| k <= 0) || h.iter().all(|(k, _)| k >= 0)
}

/// The `t^n` part of `S^•(⊕_{i≥1} H t^i)`: the sum over partitions of `n` of
/// `⊗_i Sym^{a_i}(H)`.
pub fn rhs_dims(h: &GradedDims, n: usize, allow_truncated: bool) -> Result<GradedDims, DecompositionError> {
    if !allow_truncated && !is_one_signed(h) {
        return Err(DecompositionError::MixedSign);
    }
    let mut total: BTreeMap<i64, u128> = BTreeMap::new();
    for lambda in partitions(n) {
        let mut term = GradedDims::from_pairs([(0, 1)]);
        for (_, a) in lambda.multiplicities() {
            term = convolve(&term, &super_sym_power_dims(h, a)?)?;
        }
        for (k, v) in term.iter() {
            *total.entry(k).or_insert(0) += v as u128;
        }
    }
    to_dims(&total)
}

/// Degrees a one-signed answer in `degrees` can draw on from the factors.
fn factor_range(degrees: &RangeInclusive<i64>) -> RangeInclusive<i64> {
    (*degrees.start()).min(0)..=(*degrees.end()).max(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCheck {
    pub partition: Partition,
    pub direct: GradedDims,
    pub convolved: GradedDims,
    pub compared: Vec<i64>,
    pub equal: bool,
}

/// `HH(C^{⊗n}, σ_λ)` against the convolution over the parts `λ_i` of
/// `HH(C^{⊗λ_i}, σ_{(λ_i)})`, on the certified degrees.
pub fn kunneth_factor_check(
    c: &DgCategory,
    lambda: &Partition,
    degrees: RangeInclusive<i64>,
    opts: &DecompositionOptions,
) -> Result<FactorCheck, DecompositionError> {
    let direct = twisted_summand_dims(c, lambda, degrees.clone(), opts)?;
    let wide = factor_range(&degrees);
    let mut factors: BTreeMap<usize, HomologySummary> = BTreeMap::new();
    for &p in lambda.parts() {
        if !factors.contains_key(&p) {
            let single = Partition::new(vec![p])?;
            factors.insert(p, twisted_summand_dims(c, &single, wide.clone(), opts)?);
        }
    }
    let factors_ok = factors.values().all(|h| h.all_exact() && h.all_trustworthy());
    let mut convolved = GradedDims::from_pairs([(0, 1)]);
    for p in lambda.parts() {
        convolved = convolve(&convolved, &factors[p].dims())?;
    }
    let one_signed = factors.values().all(|h| is_one_signed(&h.dims()));
    let compared: Vec<i64> = degrees
        .filter(|k| {
            factors_ok
                && one_signed
                && direct.degrees[k].certificate == Certificate::Exact
                && direct.degrees[k].arithmetic.is_trustworthy()
        })
        .collect();
    let equal = compared.iter().all(|&k| direct.dim(k) == convolved.get(k));
    Ok(FactorCheck { partition: lambda.clone(), direct: direct.dims(), convolved, compared, equal })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Mismatch,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVerdict {
    pub homological: i64,
    pub lhs: u64,
    pub rhs: u64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub n: usize,
    /// Total degrees compared.
    pub degrees: Vec<i64>,
    pub base_max_level: usize,
    pub base_homology: HomologySummary,
    pub summands: Vec<SummandReport>,
    pub lhs: GradedDims,
    pub rhs: GradedDims,
    pub verdicts: BTreeMap<i64, DegreeVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disclaimer: Option<String>,
}

impl DecompositionReport {
    pub fn all_equal(&self) -> bool {
        self.verdicts.values().all(|v| v.verdict == Verdict::Equal)
    }

    pub fn any_mismatch(&self) -> bool {
        self.verdicts.values().any(|v| v.verdict == Verdict::Mismatch)
    }
}

/// Both sides of the symmetric power decomposition in the `t^n` part.
pub fn verify_decomposition(
    c: &DgCategory,
    n: usize,
    degrees: RangeInclusive<i64>,
    opts: &DecompositionOptions,
) -> Result<DecompositionReport, DecompositionError> {
    opts.mode.validate()?;
    let wide = factor_range(&degrees);
    let base = Arc::new(c.clone());
    let base_level = opts.level_for(c.degree_bounds(), &wide);
    let base_sc = StandardComplex::new(
        base.clone(),
        Arc::new(crate::dgcore::DgFunctor::identity(base)),
        base_level,
        opts.normalized,
    )?;
    let base_homology = total_homology(&base_sc, wide.clone(), &opts.mode)?;
    let h = base_homology.dims();
    let one_signed = is_one_signed(&h);
    let mixed = c.degree_bounds().is_some_and(|(lo, hi)| lo < 0 && hi > 0) || !one_signed;
    let disclaimer = mixed.then(|| {
        "homology may live in both positive and negative degrees; the series uses only the computed window".to_string()
    });
    if mixed && !opts.allow_truncated && !one_signed {
        return Err(DecompositionError::MixedSign);
    }
    let rhs = rhs_dims(&h, n, true)?;

    let power = Arc::new(tensor_power(c, n)?);
    let summands = partitions(n)
        .par_iter()
        .map(|lambda| summand_report(c, &power, lambda, &degrees, opts))
        .collect::<Result<Vec<_>, _>>()?;

    let mut lhs = GradedDims::new();
    for s in &summands {
        for (k, d) in &s.degrees {
            lhs.add(*k, d.invariant_dim);
        }
    }
    // with one-signed homology the degree k part of the series only sees H between 0 and k
    let base_ok = |k: i64| {
        !mixed
            && (k.min(0)..=k.max(0)).all(|j| {
                base_homology
                    .degrees
                    .get(&j)
                    .is_some_and(|d| d.certificate == Certificate::Exact && d.arithmetic.is_trustworthy())
            })
    };
    let verdicts = degrees
        .clone()
        .map(|k| {
            let trusted = base_ok(k) && summands.iter().all(|s| s.trusted(k));
            let (l, r) = (lhs.get(k), rhs.get(k));
            let verdict = match (trusted, l == r) {
                (false, _) => Verdict::Heuristic,
                (true, true) => Verdict::Equal,
                (true, false) => Verdict::Mismatch,
            };
            (k, DegreeVerdict { homological: -k, lhs: l, rhs: r, verdict })
        })
        .collect();
    Ok(DecompositionReport {
        n,
        degrees: degrees.collect(),
        base_max_level: base_level,
        base_homology,
        summands,
        lhs,
        rhs,
        verdicts,
        disclaimer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partitions(1), vec![part(&[1])]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(0), vec![part(&[])]);
        let counts: Vec<usize> = (1..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions(3)[0], part(&[3]));
        assert_eq!(part(&[1, 2]).to_string(), "(2,1)");
        assert_eq!("(2,1)".parse::<Partition>().unwrap(), part(&[2, 1]));
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 0..=8 {
            let total: u128 = partitions(n).iter().map(Partition::class_size).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn class_sizes_match_enumeration() {
        for n in 1..=5 {
            let mut counts: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
            for g in Permutation::all(n) {
                *counts.entry(g.cycle_type()).or_insert(0) += 1;
            }
            for lambda in partitions(n) {
                assert_eq!(counts[lambda.parts()], lambda.class_size());
            }
        }
    }

    #[test]
    fn sigma_examples() {
        assert!(sigma_of(&part(&[1, 1, 1])).is_identity());
        assert_eq!(sigma_of(&part(&[2, 1])), Permutation::from_cycles(3, "(1 2)(3)").unwrap());
        assert_eq!(sigma_of(&part(&[3])), Permutation::from_cycles(3, "(1 2 3)").unwrap());
        for n in 1..=6 {
            for lambda in partitions(n) {
                assert_eq!(sigma_of(&lambda).cycle_type(), lambda.parts());
            }
        }
    }

    #[test]
    fn centralizer_examples() {
        let c = centralizer_gens(&part(&[4])).unwrap();
        assert_eq!(c.c_generators.len(), 1);
        assert!(c.s_generators.is_empty());
        let c = centralizer_gens(&part(&[2, 2])).unwrap();
        assert_eq!(c.s_generators, vec![Permutation::from_cycles(4, "(1 3)(2 4)").unwrap()]);
        assert!(c.s_generators[0].commutes_with(&Permutation::from_cycles(4, "(1 2)(3 4)").unwrap()));
        let c = centralizer_gens(&part(&[1, 1])).unwrap();
        assert_eq!(c.s_generators, vec![Permutation::from_cycles(2, "(1 2)").unwrap()]);
        assert_eq!(c.s_group().len(), 2);
    }

    #[test]
    fn centralizers_up_to_six() {
        for n in 1..=6 {
            let all = Permutation::all(n);
            for lambda in partitions(n) {
                let pres = centralizer_gens(&lambda).unwrap();
                for g in pres.c_generators.iter().chain(&pres.s_generators) {
                    assert!(g.commutes_with(&pres.sigma));
                }
                assert_eq!(pres.s_group().len() as u128, lambda.block_group_order());
                let full = pres.full_group();
                assert_eq!(full.len() as u128, lambda.centralizer_order());
                let brute = all.iter().filter(|g| g.commutes_with(&pres.sigma)).count();
                assert_eq!(brute, full.len());
            }
        }
    }

    /// Counts multisets of a graded basis (odd elements used at most once)
    /// with total weight `n`, where each basis element of `h` appears once
    /// per weight `1..=n`.
    fn brute_series(h: &GradedDims, n: usize) -> GradedDims {
        let mut gens: Vec<(i64, usize)> = Vec::new();
        for (k, d) in h.iter() {
            for _ in 0..d {
                for w in 1..=n {
                    gens.push((k, w));
                }
            }
        }
        fn go(gens: &[(i64, usize)], i: usize, left: usize, deg: i64, out: &mut GradedDims) {
            if left == 0 {
                out.add(deg, 1);
                return;
            }
            if i == gens.len() {
                return;
            }
            let (k, w) = gens[i];
            let max = if k.rem_euclid(2) == 0 { left / w } else { (left / w).min(1) };
            for m in 0..=max {
                go(gens, i + 1, left - m * w, deg + m as i64 * k, out);
            }
        }
        let mut out = GradedDims::new();
        go(&gens, 0, n, 0, &mut out);
        out
    }

    fn h_dual() -> GradedDims {
        GradedDims::from_slice(-3, &[1, 1, 1, 2])
    }

    #[test]
    fn super_sym_examples() {
        let one = GradedDims::from_pairs([(0, 1)]);
        let h = GradedDims::from_pairs([(0, 2)]);
        assert_eq!(super_sym_power_dims(&h, 0).unwrap(), one);
        assert_eq!(super_sym_power_dims(&h, 2).unwrap(), GradedDims::from_pairs([(0, 3)]));
        assert!(super_sym_power_dims(&GradedDims::from_pairs([(-1, 1)]), 2).unwrap().is_empty());
        assert_eq!(super_sym_power_dims(&h_dual(), 2).unwrap().window(-3, 0), vec![3, 2, 2, 3]);
    }

    #[test]
    fn rhs_examples() {
        let one = GradedDims::from_pairs([(0, 1)]);
        for n in 1..=10 {
            assert_eq!(rhs_dims(&one, n, false).unwrap().get(0), partitions(n).len() as u64);
        }
        assert_eq!(rhs_dims(&h_dual(), 2, false).unwrap().window(-3, 0), vec![4, 3, 3, 5]);
        assert_eq!(rhs_dims(&h_dual(), 3, false).unwrap().window(-2, 0), vec![9, 8, 10]);
        assert!(rhs_dims(&GradedDims::new(), 1, false).unwrap().is_empty());
        let mixed = GradedDims::from_pairs([(-1, 1), (1, 1)]);
        assert!(matches!(rhs_dims(&mixed, 2, false), Err(DecompositionError::MixedSign)));
        assert!(rhs_dims(&mixed, 2, true).is_ok());
    }

    #[test]
    fn series_against_brute_force() {
        let cases = [
            GradedDims::from_pairs([(0, 1)]),
            h_dual(),
            GradedDims::from_pairs([(-1, 2), (0, 1)]),
            GradedDims::from_pairs([(1, 1), (2, 2), (3, 1)]),
        ];
        for h in &cases {
            for n in 1..=4 {
                assert_eq!(rhs_dims(h, n, false).unwrap(), brute_series(h, n), "{h} n={n}");
            }
        }
    }

    #[test]
    fn summand_examples() {
        let opts = DecompositionOptions::default();
        let k = fixtures::ground_field();
        for lambda in partitions(3) {
            let h = twisted_summand_dims(&k, &lambda, -2..=0, &opts).unwrap();
            assert_eq!(h.homological(0, 2), vec![1, 0, 0]);
        }
        let d = fixtures::dual_numbers();
        let h = twisted_summand_dims(&d, &part(&[2]), -3..=0, &opts).unwrap();
        assert_eq!(h.homological(0, 3), vec![2, 1, 1, 1]);
        let h = twisted_summand_dims(&d, &part(&[1, 1]), -3..=0, &opts).unwrap();
        assert_eq!(h.homological(0, 3), vec![4, 4, 5, 6]);
    }

    #[test]
    fn invariant_examples() {
        let opts = DecompositionOptions { strict: true, ..Default::default() };
        let d = fixtures::dual_numbers();
        let r = invariant_dims(&d, &part(&[1, 1]), -3..=0, &opts).unwrap();
        assert_eq!(r.invariant_dims().window(-3, 0), vec![3, 2, 2, 3]);
        assert_eq!(r.group_order, 2);
        let r = invariant_dims(&d, &part(&[2]), -3..=0, &opts).unwrap();
        assert_eq!(r.invariant_dims(), r.twisted_dims());
        assert!(r.degrees.values().all(|x| x.rotations_trivial == Some(true)));
        assert!(r.degrees.values().all(|x| x.strict_invariant_dim == Some(x.invariant_dim)));
        let k = fixtures::ground_field();
        let r = invariant_dims(&k, &part(&[1, 1, 1]), -1..=0, &opts).unwrap();
        assert_eq!(r.invariant_dims().get(0), 1);
    }

    #[test]
    fn cyclic_summand_equals_untwisted() {
        let opts = DecompositionOptions::default();
        for c in [fixtures::ground_field(), fixtures::dual_numbers(), fixtures::path_algebra_a2()] {
            let base = twisted_summand_dims(&c, &part(&[1]), -2..=0, &opts).unwrap();
            for n in 2..=3 {
                let h = twisted_summand_dims(&c, &part(&[n]), -2..=0, &opts).unwrap();
                assert_eq!(h.dims(), base.dims());
            }
        }
    }

    #[test]
    fn factor_check_examples() {
        let opts = DecompositionOptions::default();
        let d = fixtures::dual_numbers();
        let r = kunneth_factor_check(&d, &part(&[2, 1]), -2..=0, &opts).unwrap();
        assert!(r.equal);
        assert_eq!(r.compared, vec![-2, -1, 0]);
        assert_eq!(r.direct.window(-2, 0), vec![5, 4, 4]);
        let r = kunneth_factor_check(&d, &part(&[1, 1]), -2..=0, &opts).unwrap();
        assert!(r.equal);
        let r = kunneth_factor_check(&fixtures::ground_field(), &part(&[2, 2]), -1..=0, &opts).unwrap();
        assert!(r.equal && r.direct.get(0) == 1);
    }

    #[test]
    fn decomposition_small_cases() {
        let opts = DecompositionOptions::default();
        let k = fixtures::ground_field();
        let r = verify_decomposition(&k, 4, 0..=0, &opts).unwrap();
        assert!(r.all_equal());
        assert_eq!(r.lhs.get(0), 5);
        let d = fixtures::dual_numbers();
        let r = verify_decomposition(&d, 2, -3..=0, &opts).unwrap();
        assert!(r.all_equal(), "{:?}", r.verdicts);
        assert_eq!(r.lhs.window(-3, 0), vec![4, 3, 3, 5]);
    }

    #[test]
    fn truncated_levels_are_heuristic() {
        let opts = DecompositionOptions { max_level: Some(1), ..Default::default() };
        let d = fixtures::dual_numbers();
        let r = verify_decomposition(&d, 2, -2..=0, &opts).unwrap();
        assert_eq!(r.verdicts[&0].verdict, Verdict::Equal);
        assert_eq!(r.verdicts[&-2].verdict, Verdict::Heuristic);
    }
}

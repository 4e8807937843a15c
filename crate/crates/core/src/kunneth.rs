//! Shuffle map into the standard complex of a tensor category and the
//! Künneth checks built on it.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dgcore::{minus_one_pow, permutation_functor_on, tensor_functor, DgCategory, GradedDims, Permutation};
use crate::hochschild::{
    induced_commuting, truncation_obstruction, Chain, HochschildError, HomologyBases, StandardComplex,
};
use crate::qlinalg::{
    collect_vec, per_prime, rank_over, to_field, Arithmetic, Field, LinalgError, Mat, RankMode, Rational, Rationals,
    SparseMatrix, SparseVec,
};

#[derive(Debug, Error)]
pub enum KunnethError {
    #[error("target complex is not over the tensor category with the tensor twist")]
    TargetMismatch,
    #[error("target needs level {needed} but only has {have}")]
    Truncation { needed: usize, have: usize },
    #[error("the symmetry check needs identical factors")]
    FactorsDiffer,
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `(k, l)` shuffles as sequences of `true` (an `f` slot) and `false` (a `g`
/// slot), in lexicographic order with `g` first.
pub fn shuffles(k: usize, l: usize) -> Vec<Vec<bool>> {
    if k == 0 {
        return vec![vec![false; l]];
    }
    if l == 0 {
        return vec![vec![true; k]];
    }
    let mut out = Vec::new();
    for mut rest in shuffles(k, l - 1) {
        rest.insert(0, false);
        out.push(rest);
    }
    for mut rest in shuffles(k - 1, l) {
        rest.insert(0, true);
        out.push(rest);
    }
    out
}

/// The target complex of the shuffle map: the tensor category twisted by
/// `F ⊗ G`.
pub fn tensor_target(
    a: &StandardComplex,
    b: &StandardComplex,
    max_level: usize,
) -> Result<StandardComplex, KunnethError> {
    if a.is_normalized() != b.is_normalized() {
        return Err(KunnethError::Hochschild(HochschildError::Mismatch("normalized and full factors".into())));
    }
    let f = tensor_functor(a.functor(), b.functor());
    let cat = f.source().clone();
    Ok(StandardComplex::new(cat, Arc::new(f), max_level, a.is_normalized())?)
}

/// Sign attached to each shuffle term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShuffleSign {
    /// `(-1)^{|σ|+ε}` alone. A map of bicomplexes; a chain map of total
    /// complexes only when every internal degree of the first factor is even.
    Literal,
    /// `(-1)^{|σ|+ε+q·l}` with `q` the internal degree of the first chain and
    /// `l` the level of the second. A chain map for `Dx⊗y + (-1)^{|x|} x⊗Dy`.
    Koszul,
}

/// Blocks of `Sh` from `A_k ⊗ B_l` (pair `(i, j)` at column `i·|B_l| + j`)
/// into level `k + l` of the target.
#[derive(Clone, Debug)]
pub struct ShuffleMap {
    pub blocks: BTreeMap<(usize, usize), SparseMatrix>,
    pub terms: BTreeMap<(usize, usize), usize>,
}

impl ShuffleMap {
    pub fn block(&self, k: usize, l: usize) -> &SparseMatrix {
        &self.blocks[&(k, l)]
    }
}

fn shuffle_terms(
    ca: &DgCategory,
    cb: &DgCategory,
    x: &Chain,
    y: &Chain,
    patterns: &[Vec<bool>],
    sign: ShuffleSign,
) -> Vec<(usize, Vec<usize>, Rational)> {
    let nb = cb.num_basis();
    let mut fa = vec![x.coefficient];
    fa.extend_from_slice(&x.bars);
    let mut gb = vec![y.coefficient];
    gb.extend_from_slice(&y.bars);
    let n_deg = cb.degree(y.coefficient);
    let coef = x.coefficient * nb + y.coefficient;
    let mut out = Vec::with_capacity(patterns.len());
    for pat in patterns {
        let (mut i, mut j) = (0usize, 0usize);
        let mut parity = match sign {
            ShuffleSign::Literal => 0,
            ShuffleSign::Koszul => (x.degree + x.bars.len() as i64) * y.bars.len() as i64,
        };
        let mut g_degree_placed = 0i64;
        let mut bars = Vec::with_capacity(pat.len());
        for &is_f in pat {
            if is_f {
                i += 1;
                let f = fa[i];
                parity += j as i64 + ca.degree(f) * (n_deg + g_degree_placed);
                let b = cb.element(gb[j]).src;
                bars.push(f * nb + cb.unit(b));
            } else {
                j += 1;
                let g = gb[j];
                g_degree_placed += cb.degree(g);
                let c = ca.element(fa[i]).src;
                bars.push(ca.unit(c) * nb + g);
            }
        }
        out.push((coef, bars, minus_one_pow(parity)));
    }
    out
}

/// Builds every block with `k + l ≤ target.max_level()`.
pub fn shuffle_map(
    a: &StandardComplex,
    b: &StandardComplex,
    target: &StandardComplex,
    sign: ShuffleSign,
) -> Result<ShuffleMap, KunnethError> {
    let expected = tensor_functor(a.functor(), b.functor());
    if **target.functor() != expected {
        return Err(KunnethError::TargetMismatch);
    }
    let (ca, cb) = (a.category(), b.category());
    let mut blocks = BTreeMap::new();
    let mut terms = BTreeMap::new();
    for k in 0..=a.max_level() {
        for l in 0..=b.max_level() {
            if k + l > target.max_level() {
                continue;
            }
            let patterns = shuffles(k, l);
            let (ak, bl) = (a.level(k).chains(), b.level(l).chains());
            let mut cols = Vec::with_capacity(ak.len() * bl.len());
            for x in ak {
                for y in bl {
                    cols.push(target.terms_to_vec(k + l, shuffle_terms(ca, cb, x, y, &patterns, sign)));
                }
            }
            terms.insert((k, l), patterns.len());
            blocks.insert((k, l), SparseMatrix::from_columns(target.level(k + l).len(), cols));
        }
    }
    Ok(ShuffleMap { blocks, terms })
}

fn kron(x: &SparseMatrix, y: &SparseMatrix) -> SparseMatrix {
    let mut entries = Vec::with_capacity(x.nnz() * y.nnz());
    for (r1, c1, v1) in x.entries() {
        for (r2, c2, v2) in y.entries() {
            entries.push((r1 * y.rows() + r2, c1 * y.cols() + c2, &v1 * &v2));
        }
    }
    SparseMatrix::from_triplets(&Rationals, x.rows() * y.rows(), x.cols() * y.cols(), entries)
}

fn degree_signs(sc: &StandardComplex, m: usize) -> SparseMatrix {
    let cols = sc.level(m).chains().iter().enumerate().map(|(i, ch)| vec![(i, minus_one_pow(ch.degree))]).collect();
    SparseMatrix::from_columns(sc.level(m).len(), cols)
}

/// `D_T ∘ Sh = Sh ∘ (D ⊗ 1 + (-1)^{|x|} 1 ⊗ D)` on every block with
/// `k + l ≤ N - 1`; returns the first failing block.
pub fn check_shuffle_chain_map(
    sh: &ShuffleMap,
    a: &StandardComplex,
    b: &StandardComplex,
    target: &StandardComplex,
) -> Result<usize, String> {
    let mut checked = 0;
    let top = target.max_level();
    for (&(k, l), s) in &sh.blocks {
        if k + l + 1 > top {
            continue;
        }
        let ib = SparseMatrix::eye(b.level(l).len());
        let ia = SparseMatrix::eye(a.level(k).len());
        let sa = degree_signs(a, k);
        let same_level = kron(a.d1(k), &ib).plus(&kron(&sa, b.d1(l)));
        if target.d1(k + l).times(s) != s.times(&same_level) {
            return Err(format!("internal differential fails on block ({k}, {l})"));
        }
        let mut rhs = SparseMatrix::zero(target.level((k + l).saturating_sub(1)).len().max(0), ia.rows() * ib.rows());
        if k + l == 0 {
            checked += 1;
            continue;
        }
        if k >= 1 {
            rhs = rhs.plus(&sh.block(k - 1, l).times(&kron(a.d2(k), &ib)));
        }
        if l >= 1 {
            rhs = rhs.plus(&sh.block(k, l - 1).times(&kron(&sa, b.d2(l))));
        }
        if target.d2(k + l).times(s) != rhs {
            return Err(format!("face differential fails on block ({k}, {l})"));
        }
        checked += 1;
    }
    Ok(checked)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethDegree {
    pub source_dim: u64,
    pub target_dim: u64,
    pub convolved_dim: u64,
    pub rank: u64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethReport {
    pub chain_map: Result<usize, String>,
    pub degrees: BTreeMap<i64, KunnethDegree>,
    pub arithmetic: Arithmetic,
}

impl KunnethReport {
    /// Chain map identity holds and every certified degree is an isomorphism
    /// matching the convolution.
    pub fn passed(&self) -> bool {
        self.chain_map.is_ok()
            && self.arithmetic.is_trustworthy()
            && self.degrees.values().filter(|d| d.certified).all(|d| {
                d.rank == d.source_dim && d.rank == d.target_dim && d.source_dim == d.convolved_dim
            })
    }

    pub fn target_dims(&self) -> GradedDims {
        GradedDims::from_pairs(self.degrees.iter().map(|(k, d)| (*k, d.target_dim)))
    }
}

/// Standard convolution of graded dimensions.
pub fn dims_convolve(h1: &GradedDims, h2: &GradedDims) -> GradedDims {
    let mut out = GradedDims::new();
    for (p, x) in h1.iter() {
        for (q, y) in h2.iter() {
            out.add(p + q, x * y);
        }
    }
    out
}

fn certified(sc: &StandardComplex, k: i64) -> bool {
    truncation_obstruction(sc.category().degree_bounds(), sc.max_level(), k).is_none()
}

fn factor_degrees(sc: &StandardComplex) -> Vec<i64> {
    sc.total_degrees().filter(|k| certified(sc, *k)).collect()
}

fn span(ds: &[i64]) -> Option<RangeInclusive<i64>> {
    Some(*ds.iter().min()?..=*ds.iter().max()?)
}

/// Per target degree: (source dim, target dim, rank) over one field.
type FieldOutcome = BTreeMap<i64, (u64, u64, u64)>;

fn homology_map_over<F: Field>(
    field: &F,
    sh: &ShuffleMap,
    a: &StandardComplex,
    b: &StandardComplex,
    target: &StandardComplex,
    degrees: &[i64],
) -> Result<Option<FieldOutcome>, KunnethError> {
    let (da, db) = (factor_degrees(a), factor_degrees(b));
    let (Some(ra), Some(rb)) = (span(&da), span(&db)) else {
        return Ok(Some(degrees.iter().map(|k| (*k, (0, 0, 0))).collect()));
    };
    let Some(ha) = HomologyBases::new(field, a, ra)? else { return Ok(None) };
    let Some(hb) = HomologyBases::new(field, b, rb)? else { return Ok(None) };
    let Some(lo) = degrees.iter().min() else { return Ok(Some(BTreeMap::new())) };
    let hi = degrees.iter().max().expect("non-empty");
    let Some(ht) = HomologyBases::new(field, target, *lo..=*hi)? else { return Ok(None) };
    let mut blocks: BTreeMap<(usize, usize), Mat<F::El>> = BTreeMap::new();
    for (key, m) in &sh.blocks {
        let Some(mf) = to_field(field, m) else { return Ok(None) };
        blocks.insert(*key, mf);
    }
    let mut out = BTreeMap::new();
    for &t in degrees {
        let tb = ht.get(t).expect("requested degree");
        let mut columns: Vec<SparseVec<F::El>> = Vec::new();
        for &p in &da {
            let q = t - p;
            let (Some(pa), Some(qb)) = (ha.get(p), hb.get(q)) else { continue };
            let (block_a, block_b) = (a.block(p), b.block(q));
            for i in 0..pa.classes() {
                for j in 0..qb.classes() {
                    let mut image: SparseVec<F::El> = Vec::new();
                    for (pu, u) in pa.representative(i) {
                        let (k, xi) = block_a[*pu];
                        for (pv, v) in qb.representative(j) {
                            let (l, yj) = block_b[*pv];
                            let Some(s) = blocks.get(&(k, l)) else { continue };
                            let col = xi * b.level(l).len() + yj;
                            let uv = field.mul(u, v);
                            image.extend(
                                s.column(col).iter().map(|(r, w)| (target.block_position(k + l, *r), field.mul(&uv, w))),
                            );
                        }
                    }
                    let image = collect_vec(field, image);
                    let coords = tb.coordinates(&image).expect("shuffle map sends cycles to cycles");
                    columns.push(coords.into_iter().enumerate().filter(|(_, v)| !field.is_zero(v)).collect());
                }
            }
        }
        let m = Mat::from_columns(tb.classes(), columns);
        out.insert(t, (m.cols() as u64, m.rows() as u64, rank_over(field, &m) as u64));
    }
    Ok(Some(out))
}

/// Chain map identity plus the induced map on homology in the requested
/// target degrees.
pub fn kunneth_verify(
    a: &StandardComplex,
    b: &StandardComplex,
    degrees: RangeInclusive<i64>,
    mode: &RankMode,
    sign: ShuffleSign,
) -> Result<KunnethReport, KunnethError> {
    mode.validate()?;
    let top = a.max_level().min(b.max_level());
    let target = tensor_target(a, b, top)?;
    let sh = shuffle_map(a, b, &target, sign)?;
    let chain_map = check_shuffle_chain_map(&sh, a, b, &target);
    if chain_map.is_err() {
        // cycles need not map to cycles
        return Ok(KunnethReport { chain_map, degrees: BTreeMap::new(), arithmetic: Arithmetic::Exact });
    }
    let degrees: Vec<i64> = degrees.collect();
    let (values, arithmetic) = match mode {
        RankMode::Exact => {
            (homology_map_over(&Rationals, &sh, a, b, &target, &degrees)?.expect("rationals"), Arithmetic::Exact)
        }
        RankMode::Modular(ps) => {
            let mut err = None;
            let per = per_prime(ps, |f| match homology_map_over(f, &sh, a, b, &target, &degrees) {
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
            let best = per.into_iter().max_by_key(|(_, v)| v.values().map(|x| x.2).sum::<u64>()).expect("non-empty").1;
            (best, Arithmetic::Modular { primes, agree })
        }
    };
    // convolution of the factor homology dimensions on their certified degrees
    let ha = factor_dims(a, mode)?;
    let hb = factor_dims(b, mode)?;
    let conv = dims_convolve(&ha, &hb);
    let degrees = values
        .into_iter()
        .map(|(t, (s, tg, r))| {
            let ok = certified(&target, t)
                && a.total_degrees().all(|p| b.block(t - p).is_empty() || (certified(a, p) && certified(b, t - p)));
            (t, KunnethDegree { source_dim: s, target_dim: tg, convolved_dim: conv.get(t), rank: r, certified: ok })
        })
        .collect();
    Ok(KunnethReport { chain_map, degrees, arithmetic })
}

fn factor_dims(sc: &StandardComplex, mode: &RankMode) -> Result<GradedDims, KunnethError> {
    let ds = factor_degrees(sc);
    let Some(r) = span(&ds) else { return Ok(GradedDims::new()) };
    let h = crate::hochschild::total_homology(sc, r, mode)?;
    Ok(h.dims())
}

/// `Sh ∘ τ = (ρ_swap, id)_* ∘ Sh` on blocks with `k + l ≤ N - 1`, where
/// `τ(x ⊗ y) = (-1)^{|x||y|} y ⊗ x`. Returns the number of blocks compared.
pub fn s2_check(a: &StandardComplex, sign: ShuffleSign) -> Result<usize, KunnethError> {
    let target = tensor_target(a, a, a.max_level())?;
    let sh = shuffle_map(a, a, &target, sign)?;
    let swap = Permutation::from_cycles(2, "(1 2)").expect("valid");
    let rho = permutation_functor_on(a.category(), target.category(), &swap);
    let star = induced_commuting(&rho, &target, &target)?;
    let mut compared = 0;
    for (&(k, l), s) in &sh.blocks {
        if k + l + 1 > target.max_level() {
            continue;
        }
        let (xs, ys) = (a.level(k).chains(), a.level(l).chains());
        let other = sh.block(l, k);
        let cols = (0..xs.len())
            .flat_map(|i| (0..ys.len()).map(move |j| (i, j)))
            .map(|(i, j)| {
                let sign = minus_one_pow(xs[i].degree * ys[j].degree);
                other.column(j * xs.len() + i).iter().map(|(r, v)| (*r, v * &sign)).collect()
            })
            .collect();
        let lhs = SparseMatrix::from_columns(s.rows(), cols);
        let rhs = star.levels[k + l].times(s);
        if lhs != rhs {
            return Err(KunnethError::Hochschild(HochschildError::Mismatch(format!(
                "symmetry fails on block ({k}, {l})"
            ))));
        }
        compared += 1;
    }
    Ok(compared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::{tensor, DgFunctor};
    use crate::fixtures;
    use crate::hochschild::{build_complex, TwistSpec};
    use crate::qlinalg::q;

    fn cx(c: DgCategory, n: usize, normalized: bool) -> StandardComplex {
        build_complex(Arc::new(c), &TwistSpec::Identity, n, normalized).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn shuffle_counts() {
        for k in 0..5 {
            for l in 0..5 {
                let s = shuffles(k, l);
                assert_eq!(s.len(), binom(k + l, k));
                assert!(s.iter().all(|p| p.iter().filter(|x| **x).count() == k));
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let unit = GradedDims::from_slice(0, &[1]);
        let h = GradedDims::from_slice(0, &[2, 1, 1, 1]);
        assert_eq!(dims_convolve(&unit, &h), h);
        let sq = dims_convolve(&h, &h);
        assert_eq!(sq.window(0, 3), vec![4, 4, 5, 6]);
        assert!(dims_convolve(&GradedDims::new(), &h).is_empty());
    }

    /// One odd generator `f` (degree 1) and one odd coefficient `n`.
    fn odd_pair() -> (StandardComplex, StandardComplex, StandardComplex) {
        let e = Arc::new(fixtures::exterior(1));
        let a = build_complex(e.clone(), &TwistSpec::Identity, 2, true).unwrap();
        let b = build_complex(e, &TwistSpec::Identity, 2, true).unwrap();
        let t = tensor_target(&a, &b, 2).unwrap();
        (a, b, t)
    }

    #[test]
    fn explicit_small_shuffles() {
        let (a, b, t) = odd_pair();
        let sh = shuffle_map(&a, &b, &t, ShuffleSign::Literal).unwrap();
        let e = a.category();
        let (one, y) = (e.basis_index("1").unwrap(), e.basis_index("y").unwrap());
        let tc = t.category();
        let idx = |x: usize, z: usize| x * e.num_basis() + z;
        // m[] ⊗ n[] ↦ (m⊗n)[]
        let s00 = sh.block(0, 0);
        let col = a.level(0).find(y, &[]).unwrap() * b.level(0).len() + b.level(0).find(y, &[]).unwrap();
        assert_eq!(s00.column(col), &vec![(t.level(0).find(idx(y, y), &[]).unwrap(), q(1, 1))]);
        // m[f] ⊗ n[] with |f| = |n| = 1: sign -1
        let s10 = sh.block(1, 0);
        let col = a.level(1).find(one, &[y]).unwrap() * b.level(0).len() + b.level(0).find(y, &[]).unwrap();
        let tgt = t.level(1).find(idx(one, y), &[idx(y, one)]).unwrap();
        assert_eq!(s10.column(col), &vec![(tgt, q(-1, 1))]);
        // m[f] ⊗ n[g] with m = 1, n = y, |f| = |g| = 1
        let s11 = sh.block(1, 1);
        let col = a.level(1).find(one, &[y]).unwrap() * b.level(1).len() + b.level(1).find(y, &[y]).unwrap();
        let fg = t.level(2).find(idx(one, y), &[idx(y, one), idx(one, y)]).unwrap();
        let gf = t.level(2).find(idx(one, y), &[idx(one, y), idx(y, one)]).unwrap();
        // (-1)^{|f||n|} [f⊗1|1⊗g] + (-1)^{1+|f||n|+|f||g|} [1⊗g|f⊗1]
        let mut want = vec![(fg, q(-1, 1)), (gf, q(-1, 1))];
        want.sort_by_key(|x| x.0);
        assert_eq!(s11.column(col), &want);
        assert_eq!(sh.terms[&(1, 1)], 2);
        let _ = tc;
    }

    fn corpus() -> Vec<DgCategory> {
        vec![
            fixtures::ground_field(),
            fixtures::dual_numbers(),
            fixtures::exterior(1),
            fixtures::exterior(-1),
            fixtures::contractible_dg(),
            fixtures::quiver_a2(),
            tensor(&fixtures::dual_numbers(), &fixtures::exterior(1)),
        ]
    }

    fn all_even(c: &DgCategory) -> bool {
        (0..c.num_basis()).all(|i| c.degree(i) % 2 == 0)
    }

    fn chain_map_holds(x: &DgCategory, y: &DgCategory, normalized: bool, sign: ShuffleSign) -> bool {
        let a = cx(x.clone(), 3, normalized);
        let b = cx(y.clone(), 3, normalized);
        let t = tensor_target(&a, &b, 3).unwrap();
        let sh = shuffle_map(&a, &b, &t, sign).unwrap();
        check_shuffle_chain_map(&sh, &a, &b, &t).is_ok()
    }

    #[test]
    fn koszul_sign_is_a_chain_map_on_corpus() {
        let cs = corpus();
        for normalized in [true, false] {
            for x in &cs {
                for y in &cs {
                    assert!(chain_map_holds(x, y, normalized, ShuffleSign::Koszul), "{:?} {:?}", x.objects(), y.objects());
                }
            }
        }
    }

    #[test]
    fn literal_sign_needs_an_even_first_factor() {
        let cs = corpus();
        for normalized in [true, false] {
            for x in cs.iter().filter(|c| all_even(c)) {
                for y in &cs {
                    assert!(chain_map_holds(x, y, normalized, ShuffleSign::Literal));
                }
            }
        }
        // y[] ⊗ 1[x]: the face 1·x on the second factor picks up (-1)^{|y|} in
        // the source but no sign in the target.
        assert!(!chain_map_holds(&fixtures::exterior(1), &fixtures::dual_numbers(), true, ShuffleSign::Literal));
        assert!(!chain_map_holds(&fixtures::exterior(1), &fixtures::ground_field(), false, ShuffleSign::Literal));
    }

    #[test]
    fn signs_agree_on_even_categories() {
        let d = cx(fixtures::dual_numbers(), 3, false);
        let t = tensor_target(&d, &d, 3).unwrap();
        let x = shuffle_map(&d, &d, &t, ShuffleSign::Literal).unwrap();
        let y = shuffle_map(&d, &d, &t, ShuffleSign::Koszul).unwrap();
        assert_eq!(x.blocks, y.blocks);
    }

    #[test]
    fn twisted_factors() {
        let d = Arc::new(fixtures::dual_numbers());
        let neg = Arc::new(fixtures::negation(d.clone()));
        let a = build_complex(d.clone(), &TwistSpec::Functor(neg), 3, true).unwrap();
        let b = build_complex(d, &TwistSpec::Identity, 3, true).unwrap();
        let t = tensor_target(&a, &b, 3).unwrap();
        let sh = shuffle_map(&a, &b, &t, ShuffleSign::Literal).unwrap();
        check_shuffle_chain_map(&sh, &a, &b, &t).unwrap();
        let report = kunneth_verify(&a, &b, -2..=0, &RankMode::Exact, ShuffleSign::Literal).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn kunneth_examples() {
        let k = kunneth_verify(&cx(fixtures::ground_field(), 2, true), &cx(fixtures::ground_field(), 2, true), -1..=0, &RankMode::Exact, ShuffleSign::Literal)
            .unwrap();
        assert!(k.passed());
        assert_eq!(k.degrees[&0].rank, 1);
        let d = cx(fixtures::dual_numbers(), 4, true);
        let r = kunneth_verify(&d, &d, -3..=0, &RankMode::Exact, ShuffleSign::Literal).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.target_dims().window(-3, 0), vec![6, 5, 4, 4]);
        let dk = kunneth_verify(&d, &cx(fixtures::ground_field(), 4, true), -3..=0, &RankMode::modular_default(), ShuffleSign::Literal).unwrap();
        assert!(dk.passed());
        assert_eq!(dk.target_dims().window(-3, 0), vec![1, 1, 1, 2]);
    }

    #[test]
    fn symmetry_examples() {
        for c in corpus().into_iter().filter(|c| c.num_objects() == 1) {
            for normalized in [true, false] {
                let a = cx(c.clone(), 3, normalized);
                assert!(s2_check(&a, ShuffleSign::Koszul).unwrap() > 0);
                assert_eq!(s2_check(&a, ShuffleSign::Literal).is_ok(), all_even(&c));
            }
        }
        let q = cx(fixtures::quiver_a2(), 3, true);
        assert!(s2_check(&q, ShuffleSign::Literal).unwrap() > 0);
    }

    #[test]
    fn target_must_match() {
        let a = cx(fixtures::dual_numbers(), 2, true);
        let wrong = build_complex(
            Arc::new(tensor(&fixtures::dual_numbers(), &fixtures::dual_numbers())),
            &TwistSpec::Functor(Arc::new(DgFunctor::identity(Arc::new(fixtures::ground_field())))),
            2,
            true,
        );
        assert!(wrong.is_err());
        let e = cx(fixtures::exterior(1), 2, true);
        let t = tensor_target(&a, &e, 2).unwrap();
        assert!(shuffle_map(&a, &a, &t, ShuffleSign::Literal).is_err());
    }
}

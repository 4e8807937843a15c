//! JSON presentations of categories, endofunctors and transformations.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use hhwb_core::dgcore::{
    validate_category, validate_functor, validate_nat_transform, CategoryBuilder, DgCategory, DgError, DgFunctor,
    Diagnostic, LinComb, NatTransform,
};
use hhwb_core::qlinalg::{collect_vec, q, Rational, Rationals};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bundled;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Syntax { path: String, source: serde_json::Error },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Category(#[from] DgError),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub basis: String,
    pub num: i64,
    #[serde(default = "one")]
    pub den: i64,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomEntry {
    pub src: String,
    pub tgt: String,
    pub basis: String,
    pub degree: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeEntry {
    pub g: String,
    pub f: String,
    pub result: Vec<Term>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageEntry {
    pub basis: String,
    pub result: Vec<Term>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorEntry {
    pub name: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub images: Vec<ImageEntry>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformEntry {
    pub name: String,
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub degree: i64,
    pub components: BTreeMap<String, Vec<Term>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    #[serde(default)]
    pub homs: Vec<HomEntry>,
    pub units: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<ComposeEntry>,
    #[serde(default)]
    pub diff: Vec<ImageEntry>,
    #[serde(default)]
    pub functors: Vec<FunctorEntry>,
    #[serde(default)]
    pub transformations: Vec<TransformEntry>,
}

/// Where the text came from and its digest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputInfo {
    pub source: String,
    pub sha256: String,
}

pub struct LoadedInput {
    pub info: InputInfo,
    pub category: Arc<DgCategory>,
    pub functors: BTreeMap<String, Arc<DgFunctor>>,
    pub transformations: BTreeMap<String, NatTransform>,
}

impl LoadedInput {
    /// Every diagnostic from the category, then the functors, then the
    /// transformations, each prefixed by its name.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out: Vec<String> = validate_category(&self.category).iter().map(ToString::to_string).collect();
        if !out.is_empty() {
            return out;
        }
        for (name, f) in &self.functors {
            out.extend(validate_functor(f).iter().map(|d: &Diagnostic| format!("functor {name}: {d}")));
        }
        for (name, t) in &self.transformations {
            out.extend(validate_nat_transform(t).iter().map(|d| format!("transformation {name}: {d}")));
        }
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Reads `path`, falling back to the bundled fixture of the same stem.
pub fn read_source(path: &str) -> Result<(String, String), InputError> {
    let p = Path::new(path);
    for candidate in [p.to_path_buf(), p.with_extension("json")] {
        if candidate.is_file() {
            let text = std::fs::read_to_string(&candidate)
                .map_err(|source| InputError::Io { path: candidate.display().to_string(), source })?;
            return Ok((candidate.display().to_string(), text));
        }
    }
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or(path);
    match bundled::fixture(stem) {
        Some(text) => Ok((format!("bundled:{stem}"), text.to_string())),
        None => Err(InputError::Io {
            path: path.to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or bundled fixture"),
        }),
    }
}

pub fn load(path: &str) -> Result<LoadedInput, InputError> {
    let (source, text) = read_source(path)?;
    parse(&source, &text)
}

fn rational(t: &Term) -> Result<Rational, InputError> {
    if t.den == 0 {
        return Err(InputError::Schema(format!("coefficient of {} has zero denominator", t.basis)));
    }
    Ok(q(t.num, t.den))
}

fn pairs(terms: &[Term]) -> Result<Vec<(&str, Rational)>, InputError> {
    terms.iter().map(|t| Ok((t.basis.as_str(), rational(t)?))).collect()
}

fn lincomb(c: &DgCategory, terms: &[Term], owner: &str) -> Result<LinComb, InputError> {
    let mut out: LinComb = Vec::new();
    for t in terms {
        let i = c
            .basis_index(&t.basis)
            .ok_or_else(|| InputError::Schema(format!("{owner}: unknown basis element {}", t.basis)))?;
        out.push((i, rational(t)?));
    }
    Ok(collect_vec(&Rationals, out))
}

pub fn parse(source: &str, text: &str) -> Result<LoadedInput, InputError> {
    let file: CategoryFile =
        serde_json::from_str(text).map_err(|e| InputError::Syntax { path: source.to_string(), source: e })?;
    let info = InputInfo { source: source.to_string(), sha256: sha256_hex(text.as_bytes()) };
    let category = Arc::new(build_category(&file)?);
    let mut functors = BTreeMap::new();
    for f in &file.functors {
        let functor = build_functor(&category, f)?;
        if functors.insert(f.name.clone(), Arc::new(functor)).is_some() {
            return Err(InputError::Schema(format!("functor {} defined twice", f.name)));
        }
    }
    let mut transformations = BTreeMap::new();
    for t in &file.transformations {
        let look = |n: &str| {
            functors.get(n).cloned().ok_or_else(|| InputError::Schema(format!("transformation {}: unknown functor {n}", t.name)))
        };
        let (from, to) = (look(&t.from)?, look(&t.to)?);
        let mut components = vec![Vec::new(); category.num_objects()];
        for (obj, terms) in &t.components {
            let o = category
                .object_index(obj)
                .ok_or_else(|| InputError::Schema(format!("transformation {}: unknown object {obj}", t.name)))?;
            components[o] = lincomb(&category, terms, &t.name)?;
        }
        let nt = NatTransform { from, to, degree: t.degree, components };
        if transformations.insert(t.name.clone(), nt).is_some() {
            return Err(InputError::Schema(format!("transformation {} defined twice", t.name)));
        }
    }
    Ok(LoadedInput { info, category, functors, transformations })
}

/// Units come first in object order, then the remaining homs in file order.
fn build_category(file: &CategoryFile) -> Result<DgCategory, InputError> {
    let mut b = CategoryBuilder::new();
    for o in &file.objects {
        b = b.object(o);
    }
    for o in &file.objects {
        let u = file.units.get(o).ok_or_else(|| InputError::Schema(format!("object {o} has no unit")))?;
        b = b.unit(o, u);
    }
    for o in file.units.keys() {
        if !file.objects.contains(o) {
            return Err(InputError::Schema(format!("unit given for unknown object {o}")));
        }
    }
    for h in &file.homs {
        for o in [&h.src, &h.tgt] {
            if !file.objects.contains(o) {
                return Err(InputError::Schema(format!("hom {} names unknown object {o}", h.basis)));
            }
        }
        if let Some((o, _)) = file.units.iter().find(|(_, u)| **u == h.basis) {
            if h.src != *o || h.tgt != *o || h.degree != 0 {
                return Err(InputError::Schema(format!("unit {} must be a degree 0 endomorphism of {o}", h.basis)));
            }
            continue;
        }
        b = b.morphism(&h.basis, &h.src, &h.tgt, h.degree);
    }
    for c in &file.compose {
        b = b.compose(&c.g, &c.f, &pairs(&c.result)?);
    }
    for d in &file.diff {
        b = b.diff(&d.basis, &pairs(&d.result)?);
    }
    Ok(b.build()?)
}

fn build_functor(c: &Arc<DgCategory>, f: &FunctorEntry) -> Result<DgFunctor, InputError> {
    let mut object_map = Vec::with_capacity(c.num_objects());
    for o in c.objects() {
        let img = f.objects.get(o).ok_or_else(|| InputError::Schema(format!("functor {}: object {o} unmapped", f.name)))?;
        let t = c
            .object_index(img)
            .ok_or_else(|| InputError::Schema(format!("functor {}: unknown object {img}", f.name)))?;
        object_map.push(t);
    }
    let mut images = vec![Vec::new(); c.num_basis()];
    for e in &f.images {
        let i = c
            .basis_index(&e.basis)
            .ok_or_else(|| InputError::Schema(format!("functor {}: unknown basis element {}", f.name, e.basis)))?;
        images[i] = lincomb(c, &e.result, &f.name)?;
    }
    Ok(DgFunctor::new(c.clone(), c.clone(), object_map, images)?)
}

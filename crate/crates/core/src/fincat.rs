//! Finite categories given by explicit composition tables.
//!
//! A [`FinCategory`] is built from a [`RawCategory`] by [`validate_category`],
//! which checks typing, totality of the table over composable pairs and
//! associativity. Identities are implicit: every object `X` carries an
//! identity named `1_X`, placed before all declared morphisms.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Index of an object within its category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub u32);

/// Index of a morphism within its category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Name given to the identity of the object called `obj`.
pub fn identity_name(obj: &str) -> String {
    format!("1_{obj}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMorphism {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub line: usize,
}

/// A composition row `g ∘ f = h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawComposite {
    pub g: String,
    pub f: String,
    pub h: String,
    pub line: usize,
}

/// An unvalidated composition table. Line numbers are `0` when the table was
/// assembled in code rather than parsed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub name: String,
    pub line: usize,
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub composites: Vec<RawComposite>,
}

impl RawCategory {
    pub fn new(name: impl Into<String>) -> Self {
        RawCategory {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn object(mut self, name: impl Into<String>) -> Self {
        self.objects.push(name.into());
        self
    }

    pub fn morphism(
        mut self,
        name: impl Into<String>,
        dom: impl Into<String>,
        cod: impl Into<String>,
    ) -> Self {
        self.morphisms.push(RawMorphism {
            name: name.into(),
            dom: dom.into(),
            cod: cod.into(),
            line: 0,
        });
        self
    }

    /// Adds the row `g ∘ f = h`.
    pub fn composite(
        mut self,
        g: impl Into<String>,
        f: impl Into<String>,
        h: impl Into<String>,
    ) -> Self {
        self.composites.push(RawComposite {
            g: g.into(),
            f: f.into(),
            h: h.into(),
            line: 0,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("line {line}: DuplicateName `{name}`")]
    DuplicateName { name: String, line: usize },
    #[error("line {line}: UnknownName `{name}`")]
    UnknownName { name: String, line: usize },
    #[error("line {line}: BadTyping {detail}")]
    BadTyping { detail: String, line: usize },
    #[error("line {line}: RedundantIdentityRow `{row}` (identities compose implicitly)")]
    RedundantIdentityRow { row: String, line: usize },
    #[error("line {line}: ConflictingComposite `{g} ∘ {f}` already defined")]
    ConflictingComposite { g: String, f: String, line: usize },
    #[error("MissingComposite `{g} ∘ {f}`")]
    MissingComposite { g: String, f: String },
    #[error("NonAssociative ({h} ∘ {g}) ∘ {f} = {left} but {h} ∘ ({g} ∘ {f}) = {right}")]
    NonAssociative {
        h: String,
        g: String,
        f: String,
        left: String,
        right: String,
    },
}

impl CategoryError {
    /// Short tag used in one-line diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            CategoryError::DuplicateName { .. } => "DuplicateName",
            CategoryError::UnknownName { .. } => "UnknownName",
            CategoryError::BadTyping { .. } => "BadTyping",
            CategoryError::RedundantIdentityRow { .. } => "RedundantIdentityRow",
            CategoryError::ConflictingComposite { .. } => "ConflictingComposite",
            CategoryError::MissingComposite { .. } => "MissingComposite",
            CategoryError::NonAssociative { .. } => "NonAssociative",
        }
    }
}

/// Every violation found while validating one table, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationErrors {
    pub category: String,
    pub errors: Vec<CategoryError>,
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "category {}: ", self.category)?;
        match self.errors.first() {
            Some(first) if self.errors.len() == 1 => write!(f, "{first}"),
            Some(first) => write!(f, "{first} (and {} more)", self.errors.len() - 1),
            None => write!(f, "invalid"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// Monomorphism/epimorphism flags of a single morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MorphismFlags {
    pub mono: bool,
    pub epi: bool,
    pub split_mono: bool,
    pub split_epi: bool,
    pub iso: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParallelPair {
    pub f1: MorId,
    pub f2: MorId,
}

impl ParallelPair {
    pub fn new(f1: MorId, f2: MorId) -> Self {
        ParallelPair { f1, f2 }
    }
}

/// A pair `d, c: G1 → G0` with a common section `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReflexiveGraph {
    pub d: MorId,
    pub c: MorId,
    pub e: MorId,
}

impl ReflexiveGraph {
    pub fn pair(&self) -> ParallelPair {
        ParallelPair::new(self.d, self.c)
    }
}

/// Lazily computed per-category data. Filled at most once per category.
#[derive(Default)]
pub(crate) struct Derived {
    pub(crate) regular_epi: OnceLock<Vec<bool>>,
    pub(crate) mono: OnceLock<Vec<bool>>,
    pub(crate) regular: OnceLock<crate::report::Report>,
}

impl Clone for Derived {
    fn clone(&self) -> Self {
        Derived::default()
    }
}

impl fmt::Debug for Derived {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Derived")
    }
}

/// A validated finite category. Immutable once built.
#[derive(Debug, Clone)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    /// `comp[g * m + f]` is `g ∘ f` when composable.
    comp: Vec<Option<MorId>>,
    /// `hom[x * n + y]` lists morphisms `x → y` in morphism order.
    hom: Vec<Vec<MorId>>,
    pub(crate) derived: Derived,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.comp == other.comp
    }
}

impl Eq for FinCategory {}

/// Validates a raw table, reporting every violation that can be found.
///
/// Associativity is only checked once the table is well typed and total.
pub fn validate_category(raw: &RawCategory) -> Result<FinCategory, ValidationErrors> {
    let mut errors = Vec::new();
    let mut obj_index: HashMap<&str, ObjId> = HashMap::new();
    let mut objects = Vec::new();
    for name in &raw.objects {
        if obj_index.contains_key(name.as_str()) {
            errors.push(CategoryError::DuplicateName {
                name: name.clone(),
                line: raw.line,
            });
            continue;
        }
        obj_index.insert(name, ObjId(objects.len() as u32));
        objects.push(name.clone());
    }

    let mut morphisms: Vec<Morphism> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| Morphism {
            name: identity_name(o),
            dom: ObjId(i as u32),
            cod: ObjId(i as u32),
        })
        .collect();
    let identities: Vec<MorId> = (0..objects.len()).map(|i| MorId(i as u32)).collect();
    let mut mor_index: HashMap<String, MorId> = morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| (m.name.clone(), MorId(i as u32)))
        .collect();

    for rm in &raw.morphisms {
        if mor_index.contains_key(&rm.name) {
            errors.push(CategoryError::DuplicateName {
                name: rm.name.clone(),
                line: rm.line,
            });
            continue;
        }
        let dom = obj_index.get(rm.dom.as_str()).copied();
        let cod = obj_index.get(rm.cod.as_str()).copied();
        for (end, name) in [(dom, &rm.dom), (cod, &rm.cod)] {
            if end.is_none() {
                errors.push(CategoryError::UnknownName {
                    name: name.clone(),
                    line: rm.line,
                });
            }
        }
        if let (Some(dom), Some(cod)) = (dom, cod) {
            mor_index.insert(rm.name.clone(), MorId(morphisms.len() as u32));
            morphisms.push(Morphism {
                name: rm.name.clone(),
                dom,
                cod,
            });
        }
    }

    let m = morphisms.len();
    let mut comp: Vec<Option<MorId>> = vec![None; m * m];
    for (f, mf) in morphisms.iter().enumerate() {
        comp[mf.cod.index() * m + f] = Some(MorId(f as u32));
        comp[f * m + mf.dom.index()] = Some(MorId(f as u32));
    }
    let mut explicit = vec![false; m * m];

    for row in &raw.composites {
        let lookup = |name: &str, errors: &mut Vec<CategoryError>| {
            let found = mor_index.get(name).copied();
            if found.is_none() {
                errors.push(CategoryError::UnknownName {
                    name: name.to_string(),
                    line: row.line,
                });
            }
            found
        };
        let g = lookup(&row.g, &mut errors);
        let f = lookup(&row.f, &mut errors);
        let h = lookup(&row.h, &mut errors);
        let (Some(g), Some(f), Some(h)) = (g, f, h) else {
            continue;
        };
        let (mg, mf, mh) = (
            &morphisms[g.index()],
            &morphisms[f.index()],
            &morphisms[h.index()],
        );
        if g.index() < objects.len() || f.index() < objects.len() {
            errors.push(CategoryError::RedundantIdentityRow {
                row: format!("comp {} {} = {}", row.g, row.f, row.h),
                line: row.line,
            });
            continue;
        }
        if mf.cod != mg.dom {
            errors.push(CategoryError::BadTyping {
                detail: format!(
                    "`{} ∘ {}`: {} has codomain {} but {} has domain {}",
                    row.g,
                    row.f,
                    row.f,
                    objects[mf.cod.index()],
                    row.g,
                    objects[mg.dom.index()]
                ),
                line: row.line,
            });
            continue;
        }
        if mh.dom != mf.dom || mh.cod != mg.cod {
            errors.push(CategoryError::BadTyping {
                detail: format!(
                    "`{} ∘ {} = {}`: expected {} -> {} but {} is {} -> {}",
                    row.g,
                    row.f,
                    row.h,
                    objects[mf.dom.index()],
                    objects[mg.cod.index()],
                    row.h,
                    objects[mh.dom.index()],
                    objects[mh.cod.index()]
                ),
                line: row.line,
            });
            continue;
        }
        let cell = g.index() * m + f.index();
        if explicit[cell] {
            errors.push(CategoryError::ConflictingComposite {
                g: row.g.clone(),
                f: row.f.clone(),
                line: row.line,
            });
            continue;
        }
        explicit[cell] = true;
        comp[cell] = Some(h);
    }

    for (f, mf) in morphisms.iter().enumerate() {
        for (g, mg) in morphisms.iter().enumerate() {
            if mf.cod == mg.dom && comp[g * m + f].is_none() {
                errors.push(CategoryError::MissingComposite {
                    g: mg.name.clone(),
                    f: mf.name.clone(),
                });
            }
        }
    }

    if errors.is_empty() {
        'assoc: for f in 0..m {
            for g in 0..m {
                let Some(gf) = comp[g * m + f] else { continue };
                for h in 0..m {
                    let Some(hg) = comp[h * m + g] else { continue };
                    let left = comp[hg.index() * m + f].expect("typed");
                    let right = comp[h * m + gf.index()].expect("typed");
                    if left != right {
                        errors.push(CategoryError::NonAssociative {
                            h: morphisms[h].name.clone(),
                            g: morphisms[g].name.clone(),
                            f: morphisms[f].name.clone(),
                            left: morphisms[left.index()].name.clone(),
                            right: morphisms[right.index()].name.clone(),
                        });
                        break 'assoc;
                    }
                }
            }
        }
    }

    if !errors.is_empty() {
        return Err(ValidationErrors {
            category: raw.name.clone(),
            errors,
        });
    }

    let n = objects.len();
    let mut hom = vec![Vec::new(); n * n];
    for (i, mor) in morphisms.iter().enumerate() {
        hom[mor.dom.index() * n + mor.cod.index()].push(MorId(i as u32));
    }
    Ok(FinCategory {
        name: raw.name.clone(),
        objects,
        morphisms,
        identities,
        comp,
        hom,
        derived: Derived::default(),
    })
}

impl FinCategory {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Same category under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> FinCategory {
        FinCategory {
            name: name.into(),
            ..self.clone()
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl DoubleEndedIterator<Item = ObjId> + ExactSizeIterator + Clone {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl DoubleEndedIterator<Item = MorId> + ExactSizeIterator + Clone {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x.index()]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f.index()].name
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f.index()]
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f.index()].dom
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f.index()].cod
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x.index()]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        f.index() < self.objects.len()
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(|i| ObjId(i as u32))
    }

    pub fn find_morphism(&self, name: &str) -> Option<MorId> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .map(|i| MorId(i as u32))
    }

    /// `g ∘ f`, or `None` if `cod f ≠ dom g`.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.comp[g.index() * self.morphisms.len() + f.index()]
    }

    /// `g ∘ f`.
    ///
    /// # Panics
    ///
    /// If the pair is not composable.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "{}: {} ∘ {} is not composable",
                self.name,
                self.morphism_name(g),
                self.morphism_name(f)
            )
        })
    }

    /// `h ∘ g ∘ f`.
    pub fn compose3(&self, h: MorId, g: MorId, f: MorId) -> MorId {
        self.compose(h, self.compose(g, f))
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> &[MorId] {
        &self.hom[x.index() * self.objects.len() + y.index()]
    }

    /// Morphisms with codomain `y`, in morphism order.
    pub fn into_object(&self, y: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&f| self.cod(f) == y)
    }

    /// Morphisms with domain `x`, in morphism order.
    pub fn out_of(&self, x: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&f| self.dom(f) == x)
    }

    /// Every ordered parallel pair, `f1` major.
    pub fn parallel_pairs(&self) -> impl Iterator<Item = ParallelPair> + '_ {
        self.morphisms().flat_map(move |f1| {
            self.hom(self.dom(f1), self.cod(f1))
                .iter()
                .map(move |&f2| ParallelPair::new(f1, f2))
        })
    }

    pub fn is_parallel(&self, p: ParallelPair) -> bool {
        self.dom(p.f1) == self.dom(p.f2) && self.cod(p.f1) == self.cod(p.f2)
    }

    /// True when every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    pub fn describe(&self, f: MorId) -> String {
        let m = self.morphism(f);
        format!(
            "{}: {} -> {}",
            m.name,
            self.object_name(m.dom),
            self.object_name(m.cod)
        )
    }

    pub fn describe_pair(&self, p: ParallelPair) -> String {
        format!(
            "({}, {})",
            self.morphism_name(p.f1),
            self.morphism_name(p.f2)
        )
    }

    /// The table as raw rows: declared morphisms in order, one row per
    /// composable pair of non-identities.
    pub fn to_raw(&self) -> RawCategory {
        let n = self.objects.len();
        let mut raw = RawCategory::new(self.name.clone());
        raw.objects = self.objects.clone();
        for mor in &self.morphisms[n..] {
            raw.morphisms.push(RawMorphism {
                name: mor.name.clone(),
                dom: self.objects[mor.dom.index()].clone(),
                cod: self.objects[mor.cod.index()].clone(),
                line: 0,
            });
        }
        for f in self.morphisms().skip(n) {
            for g in self.morphisms().skip(n) {
                if let Some(h) = self.try_compose(g, f) {
                    raw.composites.push(RawComposite {
                        g: self.morphism_name(g).to_string(),
                        f: self.morphism_name(f).to_string(),
                        h: self.morphism_name(h).to_string(),
                        line: 0,
                    });
                }
            }
        }
        raw
    }

    pub fn is_mono(&self, f: MorId) -> bool {
        self.derived
            .mono
            .get_or_init(|| self.morphisms().map(|g| self.mono_search(g)).collect())[f.index()]
    }

    fn mono_search(&self, f: MorId) -> bool {
        let x = self.dom(f);
        self.objects().all(|z| {
            let hom = self.hom(z, x);
            hom.iter().enumerate().all(|(i, &a)| {
                hom[i + 1..]
                    .iter()
                    .all(|&b| self.compose(f, a) != self.compose(f, b))
            })
        })
    }

    pub fn is_epi(&self, f: MorId) -> bool {
        let y = self.cod(f);
        self.objects().all(|z| {
            let hom = self.hom(y, z);
            hom.iter().enumerate().all(|(i, &a)| {
                hom[i + 1..]
                    .iter()
                    .all(|&b| self.compose(a, f) != self.compose(b, f))
            })
        })
    }

    /// A right inverse `s` with `f ∘ s = 1`, first in hom order.
    pub fn section(&self, f: MorId) -> Option<MorId> {
        let id = self.identity(self.cod(f));
        self.hom(self.cod(f), self.dom(f))
            .iter()
            .copied()
            .find(|&s| self.compose(f, s) == id)
    }

    /// A left inverse `r` with `r ∘ f = 1`, first in hom order.
    pub fn retraction(&self, f: MorId) -> Option<MorId> {
        let id = self.identity(self.dom(f));
        self.hom(self.cod(f), self.dom(f))
            .iter()
            .copied()
            .find(|&r| self.compose(r, f) == id)
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (x, y) = (self.dom(f), self.cod(f));
        self.hom(y, x).iter().copied().find(|&g| {
            self.compose(g, f) == self.identity(x) && self.compose(f, g) == self.identity(y)
        })
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    pub fn are_isomorphic_objects(&self, x: ObjId, y: ObjId) -> bool {
        self.hom(x, y).iter().any(|&f| self.is_iso(f))
    }
}

/// Decides all five flags of `f` by exhaustive search.
pub fn morphism_flags(cat: &FinCategory, f: MorId) -> MorphismFlags {
    MorphismFlags {
        mono: cat.is_mono(f),
        epi: cat.is_epi(f),
        split_mono: cat.retraction(f).is_some(),
        split_epi: cat.section(f).is_some(),
        iso: cat.is_iso(f),
    }
}

/// Witness `(a, b)` with `a ≠ b` identified by both legs, if any.
pub fn joint_mono_violation(cat: &FinCategory, p: ParallelPair) -> Option<(MorId, MorId)> {
    let x = cat.dom(p.f1);
    for z in cat.objects() {
        let hom = cat.hom(z, x);
        for (i, &a) in hom.iter().enumerate() {
            for &b in &hom[i + 1..] {
                if cat.compose(p.f1, a) == cat.compose(p.f1, b)
                    && cat.compose(p.f2, a) == cat.compose(p.f2, b)
                {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

pub fn is_jointly_monic(cat: &FinCategory, p: ParallelPair) -> bool {
    joint_mono_violation(cat, p).is_none()
}

pub fn enumerate_reflexive_graphs(cat: &FinCategory) -> Vec<ReflexiveGraph> {
    let mut out = Vec::new();
    for d in cat.morphisms() {
        let (g1, g0) = (cat.dom(d), cat.cod(d));
        let id = cat.identity(g0);
        for &e in cat.hom(g0, g1) {
            if cat.compose(d, e) != id {
                continue;
            }
            for &c in cat.hom(g1, g0) {
                if cat.compose(c, e) == id {
                    out.push(ReflexiveGraph { d, c, e });
                }
            }
        }
    }
    out
}

/// The full subcategory of a parent on a subset of its objects, materialised
/// as its own [`FinCategory`] together with the inclusion maps.
#[derive(Debug, Clone)]
pub struct FullSubcategory {
    category: FinCategory,
    objects: Vec<ObjId>,
    mor_to_parent: Vec<MorId>,
    mor_from_parent: Vec<Option<MorId>>,
    obj_from_parent: Vec<Option<ObjId>>,
}

impl FullSubcategory {
    /// `objects` are taken in parent order; duplicates are ignored.
    pub fn new(parent: &FinCategory, objects: &[ObjId]) -> FullSubcategory {
        let keep: Vec<bool> = parent.objects().map(|x| objects.contains(&x)).collect();
        let objects: Vec<ObjId> = parent.objects().filter(|x| keep[x.index()]).collect();
        Self::build(parent, objects, format!("{}|sub", parent.name()))
    }

    pub fn named(parent: &FinCategory, objects: &[ObjId], name: impl Into<String>) -> Self {
        let mut sub = Self::new(parent, objects);
        sub.category.name = name.into();
        sub
    }

    fn build(parent: &FinCategory, objects: Vec<ObjId>, name: String) -> FullSubcategory {
        let mut obj_from_parent = vec![None; parent.object_count()];
        for (i, &x) in objects.iter().enumerate() {
            obj_from_parent[x.index()] = Some(ObjId(i as u32));
        }
        // Identities first, then the remaining morphisms in parent order, so
        // the sub-table has the same layout a validated table would have.
        let mut mor_to_parent: Vec<MorId> = objects.iter().map(|&x| parent.identity(x)).collect();
        mor_to_parent.extend(parent.morphisms().filter(|&f| {
            !parent.is_identity(f)
                && obj_from_parent[parent.dom(f).index()].is_some()
                && obj_from_parent[parent.cod(f).index()].is_some()
        }));
        let mut mor_from_parent = vec![None; parent.morphism_count()];
        for (i, &f) in mor_to_parent.iter().enumerate() {
            mor_from_parent[f.index()] = Some(MorId(i as u32));
        }
        let morphisms: Vec<Morphism> = mor_to_parent
            .iter()
            .map(|&f| Morphism {
                name: parent.morphism_name(f).to_string(),
                dom: obj_from_parent[parent.dom(f).index()].unwrap(),
                cod: obj_from_parent[parent.cod(f).index()].unwrap(),
            })
            .collect();
        let m = morphisms.len();
        let mut comp = vec![None; m * m];
        for (gi, &g) in mor_to_parent.iter().enumerate() {
            for (fi, &f) in mor_to_parent.iter().enumerate() {
                if let Some(h) = parent.try_compose(g, f) {
                    comp[gi * m + fi] = mor_from_parent[h.index()];
                }
            }
        }
        let n = objects.len();
        let mut hom = vec![Vec::new(); n * n];
        for (i, mor) in morphisms.iter().enumerate() {
            hom[mor.dom.index() * n + mor.cod.index()].push(MorId(i as u32));
        }
        let category = FinCategory {
            name,
            objects: objects
                .iter()
                .map(|&x| parent.object_name(x).to_string())
                .collect(),
            morphisms,
            identities: (0..n).map(|i| MorId(i as u32)).collect(),
            comp,
            hom,
            derived: Derived::default(),
        };
        FullSubcategory {
            category,
            objects,
            mor_to_parent,
            mor_from_parent,
            obj_from_parent,
        }
    }

    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    /// Parent objects in the subcategory, in parent order.
    pub fn parent_objects(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn contains_object(&self, x: ObjId) -> bool {
        self.obj_from_parent
            .get(x.index())
            .is_some_and(|o| o.is_some())
    }

    pub fn to_parent(&self, f: MorId) -> MorId {
        self.mor_to_parent[f.index()]
    }

    pub fn object_to_parent(&self, x: ObjId) -> ObjId {
        self.objects[x.index()]
    }

    pub fn from_parent(&self, f: MorId) -> Option<MorId> {
        self.mor_from_parent[f.index()]
    }

    pub fn object_from_parent(&self, x: ObjId) -> Option<ObjId> {
        self.obj_from_parent[x.index()]
    }

    pub fn parent_object_count(&self) -> usize {
        self.obj_from_parent.len()
    }
}

//! Enumerated finite categories.
//!
//! A [`FinCat`] stores its composition as a dense table indexed by morphism
//! ids. Candidates are assembled as a [`RawCategory`] and only become a
//! `FinCat` once [`validate_category`] reports no violations, so every
//! `FinCat` in circulation satisfies the identity and associativity laws.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::classes::MorClass;
use crate::error::{Error, Result};
use crate::limits::{self, Cospan, PullbackCone};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MorId(pub u32);

impl ObjId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub label: String,
    pub dom: usize,
    pub cod: usize,
}

/// A category candidate, exactly as read from input. Nothing is assumed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    /// Identity morphism per object, if declared.
    pub identities: Vec<Option<usize>>,
    /// `(g, f) -> h` meaning `g ∘ f = h`.
    pub compose: BTreeMap<(usize, usize), usize>,
}

impl RawCategory {
    pub fn new(name: impl Into<String>) -> Self {
        RawCategory {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Adds an object together with its identity morphism `1_<label>`.
    pub fn add_object(&mut self, label: impl Into<String>) -> usize {
        let label = label.into();
        let obj = self.objects.len();
        let id = self.morphisms.len();
        self.morphisms.push(RawMorphism {
            label: format!("1_{label}"),
            dom: obj,
            cod: obj,
        });
        self.objects.push(label);
        self.identities.push(Some(id));
        obj
    }

    pub fn add_morphism(&mut self, label: impl Into<String>, dom: usize, cod: usize) -> usize {
        self.morphisms.push(RawMorphism {
            label: label.into(),
            dom,
            cod,
        });
        self.morphisms.len() - 1
    }

    pub fn set_compose(&mut self, g: usize, f: usize, h: usize) {
        self.compose.insert((g, f), h);
    }

    /// Fills in `1 ∘ f = f` and `f ∘ 1 = f` wherever no entry was given.
    pub fn fill_identity_composites(&mut self) {
        for (m, mor) in self.morphisms.iter().enumerate() {
            if let Some(Some(id)) = self.identities.get(mor.cod) {
                self.compose.entry((*id, m)).or_insert(m);
            }
            if let Some(Some(id)) = self.identities.get(mor.dom) {
                self.compose.entry((m, *id)).or_insert(m);
            }
        }
    }

    /// Completes a partial composition table by associativity.
    ///
    /// Repeatedly uses `h∘(g∘f) = (h∘g)∘f` to derive unknown composites from
    /// known ones. Two different derived values for one pair are reported as
    /// an ambiguity; pairs that stay undetermined are reported as well.
    pub fn close_composition(&mut self) -> std::result::Result<(), ClosureError> {
        self.fill_identity_composites();
        let n = self.morphisms.len();
        let composable = |g: usize, f: usize, ms: &[RawMorphism]| ms[f].cod == ms[g].dom;
        loop {
            let mut changed = false;
            let known: Vec<((usize, usize), usize)> =
                self.compose.iter().map(|(k, v)| (*k, *v)).collect();
            for &((g, f), gf) in &known {
                for h in 0..n {
                    if !composable(h, g, &self.morphisms) {
                        continue;
                    }
                    // h ∘ (g ∘ f) versus (h ∘ g) ∘ f
                    let left = self.compose.get(&(h, gf)).copied();
                    let hg = self.compose.get(&(h, g)).copied();
                    let right = hg.and_then(|hg| self.compose.get(&(hg, f)).copied());
                    match (left, hg, right) {
                        (Some(l), Some(_), Some(r)) if l != r => {
                            return Err(ClosureError::Ambiguous {
                                pair: (h, gf),
                                first: l,
                                second: r,
                            });
                        }
                        (None, Some(_), Some(r)) => {
                            self.compose.insert((h, gf), r);
                            changed = true;
                        }
                        (Some(l), Some(hg), None) => {
                            self.compose.insert((hg, f), l);
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut missing = Vec::new();
        for g in 0..n {
            for f in 0..n {
                if composable(g, f, &self.morphisms) && !self.compose.contains_key(&(g, f)) {
                    missing.push((g, f));
                }
            }
        }
        if missing.is_empty() {
            Ok(())
        } else {
            Err(ClosureError::Undetermined(missing))
        }
    }

    /// Builds a raw category from concrete morphism values, composing with
    /// `compose` and identifying results by equality.
    pub fn from_concrete<M, F>(
        name: &str,
        objects: &[String],
        morphisms: &[(M, usize, usize, String)],
        identity: impl Fn(usize) -> M,
        compose: F,
    ) -> Result<RawCategory>
    where
        M: Eq + Hash + Clone,
        F: Fn(&M, &M) -> M,
    {
        let mut raw = RawCategory::new(name);
        raw.objects = objects.to_vec();
        let mut index: HashMap<(M, usize, usize), usize> = HashMap::new();
        for (i, (m, d, c, label)) in morphisms.iter().enumerate() {
            if index.insert((m.clone(), *d, *c), i).is_some() {
                return Err(Error::Input(format!("duplicate concrete morphism {label}")));
            }
            raw.morphisms.push(RawMorphism {
                label: label.clone(),
                dom: *d,
                cod: *c,
            });
        }
        raw.identities = (0..objects.len())
            .map(|o| index.get(&(identity(o), o, o)).copied())
            .collect();
        for (gi, (g, gd, gc, _)) in morphisms.iter().enumerate() {
            for (fi, (f, fd, fc, _)) in morphisms.iter().enumerate() {
                if fc != gd {
                    continue;
                }
                let h = compose(g, f);
                match index.get(&(h, *fd, *gc)) {
                    Some(&hi) => {
                        raw.compose.insert((gi, fi), hi);
                    }
                    None => {
                        return Err(Error::Input(format!(
                            "composite of {} after {} is not among the listed morphisms",
                            morphisms[gi].3, morphisms[fi].3
                        )))
                    }
                }
            }
        }
        Ok(raw)
    }

    pub fn build(&self) -> std::result::Result<FinCat, CategoryReport> {
        let report = validate_category(self);
        if report.is_ok() {
            Ok(FinCat::from_validated(self))
        } else {
            Err(report)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureError {
    Ambiguous {
        pair: (usize, usize),
        first: usize,
        second: usize,
    },
    Undetermined(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CategoryViolation {
    BadEndpoint { mor: usize },
    MissingIdentity { obj: usize },
    IdentityNotEndo { obj: usize, mor: usize },
    UndefinedComposite { g: usize, f: usize },
    NonComposablePair { g: usize, f: usize },
    CompositeTyping { g: usize, f: usize, h: usize },
    LeftIdentity { f: usize, got: usize },
    RightIdentity { f: usize, got: usize },
    Associativity { h: usize, g: usize, f: usize, left: usize, right: usize },
}

impl CategoryViolation {
    pub fn law(&self) -> &'static str {
        match self {
            CategoryViolation::BadEndpoint { .. } => "endpoint",
            CategoryViolation::MissingIdentity { .. } => "identity-missing",
            CategoryViolation::IdentityNotEndo { .. } => "identity-typing",
            CategoryViolation::UndefinedComposite { .. } => "totality",
            CategoryViolation::NonComposablePair { .. } => "composability",
            CategoryViolation::CompositeTyping { .. } => "composite-typing",
            CategoryViolation::LeftIdentity { .. } => "left-identity",
            CategoryViolation::RightIdentity { .. } => "right-identity",
            CategoryViolation::Associativity { .. } => "associativity",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryReport {
    pub violations: Vec<CategoryViolation>,
}

impl CategoryReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every category law exhaustively. Violations are data, not errors.
pub fn validate_category(raw: &RawCategory) -> CategoryReport {
    use CategoryViolation as V;
    let mut violations = Vec::new();
    let nobj = raw.objects.len();
    let n = raw.morphisms.len();
    for (m, mor) in raw.morphisms.iter().enumerate() {
        if mor.dom >= nobj || mor.cod >= nobj {
            violations.push(V::BadEndpoint { mor: m });
        }
    }
    if !violations.is_empty() {
        return CategoryReport { violations };
    }
    let mut ids = vec![None; nobj];
    for obj in 0..nobj {
        match raw.identities.get(obj).copied().flatten() {
            None => violations.push(V::MissingIdentity { obj }),
            Some(m) if m >= n || raw.morphisms[m].dom != obj || raw.morphisms[m].cod != obj => {
                violations.push(V::IdentityNotEndo { obj, mor: m })
            }
            Some(m) => ids[obj] = Some(m),
        }
    }
    let composable = |g: usize, f: usize| raw.morphisms[f].cod == raw.morphisms[g].dom;
    for (&(g, f), &h) in &raw.compose {
        if g >= n || f >= n || h >= n {
            violations.push(V::NonComposablePair { g, f });
            continue;
        }
        if !composable(g, f) {
            violations.push(V::NonComposablePair { g, f });
        } else if raw.morphisms[h].dom != raw.morphisms[f].dom
            || raw.morphisms[h].cod != raw.morphisms[g].cod
        {
            violations.push(V::CompositeTyping { g, f, h });
        }
    }
    for g in 0..n {
        for f in 0..n {
            if composable(g, f) && !raw.compose.contains_key(&(g, f)) {
                violations.push(V::UndefinedComposite { g, f });
            }
        }
    }
    if !violations.is_empty() {
        return CategoryReport { violations };
    }
    let c = |g: usize, f: usize| raw.compose[&(g, f)];
    for f in 0..n {
        let mor = &raw.morphisms[f];
        let (Some(idc), Some(idd)) = (ids[mor.cod], ids[mor.dom]) else {
            continue;
        };
        let left = c(idc, f);
        if left != f {
            violations.push(V::LeftIdentity { f, got: left });
        }
        let right = c(f, idd);
        if right != f {
            violations.push(V::RightIdentity { f, got: right });
        }
    }
    for f in 0..n {
        for g in 0..n {
            if !composable(g, f) {
                continue;
            }
            let gf = c(g, f);
            for h in 0..n {
                if !composable(h, g) {
                    continue;
                }
                let left = c(h, gf);
                let right = c(c(h, g), f);
                if left != right {
                    violations.push(V::Associativity {
                        h,
                        g,
                        f,
                        left,
                        right,
                    });
                }
            }
        }
    }
    CategoryReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub dom: ObjId,
    pub cod: ObjId,
    pub label: String,
}

/// A validated finite category. Immutable; cheap to share.
#[derive(Debug)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    table: Vec<Option<MorId>>,
    homs: Vec<Vec<MorId>>,
    out_of: Vec<Vec<MorId>>,
    into: Vec<Vec<MorId>>,
    inverses: Vec<Option<MorId>>,
    pub(crate) pullback_memo: Vec<OnceLock<Option<PullbackCone>>>,
}

impl Clone for FinCat {
    fn clone(&self) -> Self {
        FinCat {
            name: self.name.clone(),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            table: self.table.clone(),
            homs: self.homs.clone(),
            out_of: self.out_of.clone(),
            into: self.into.clone(),
            inverses: self.inverses.clone(),
            pullback_memo: self.pullback_memo.clone(),
        }
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.table == other.table
    }
}

impl FinCat {
    fn from_validated(raw: &RawCategory) -> FinCat {
        let nobj = raw.objects.len();
        let n = raw.morphisms.len();
        let morphisms: Vec<Morphism> = raw
            .morphisms
            .iter()
            .map(|m| Morphism {
                dom: ObjId(m.dom as u32),
                cod: ObjId(m.cod as u32),
                label: m.label.clone(),
            })
            .collect();
        let mut table = vec![None; n * n];
        for (&(g, f), &h) in &raw.compose {
            table[g * n + f] = Some(MorId(h as u32));
        }
        let mut homs = vec![Vec::new(); nobj * nobj];
        let mut out_of = vec![Vec::new(); nobj];
        let mut into = vec![Vec::new(); nobj];
        for (i, m) in morphisms.iter().enumerate() {
            homs[m.dom.idx() * nobj + m.cod.idx()].push(MorId(i as u32));
            out_of[m.dom.idx()].push(MorId(i as u32));
            into[m.cod.idx()].push(MorId(i as u32));
        }
        let identities: Vec<MorId> = raw
            .identities
            .iter()
            .map(|i| MorId(i.expect("validated") as u32))
            .collect();
        let mut cat = FinCat {
            name: raw.name.clone(),
            objects: raw.objects.clone(),
            morphisms,
            identities,
            table,
            homs,
            out_of,
            into,
            inverses: Vec::new(),
            pullback_memo: (0..n * n).map(|_| OnceLock::new()).collect(),
        };
        cat.inverses = cat
            .morphism_ids()
            .map(|m| {
                let (d, c) = (cat.dom(m), cat.cod(m));
                cat.hom(c, d).iter().copied().find(|&r| {
                    cat.comp(r, m) == cat.identity(d) && cat.comp(m, r) == cat.identity(c)
                })
            })
            .collect();
        cat
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn object_label(&self, o: ObjId) -> &str {
        &self.objects[o.idx()]
    }

    pub fn label(&self, m: MorId) -> &str {
        &self.morphisms[m.idx()].label
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m.idx()]
    }

    pub fn find_object(&self, label: &str) -> Option<ObjId> {
        self.objects
            .iter()
            .position(|o| o == label)
            .map(|i| ObjId(i as u32))
    }

    pub fn find_morphism(&self, label: &str) -> Option<MorId> {
        self.morphisms
            .iter()
            .position(|m| m.label == label)
            .map(|i| MorId(i as u32))
    }

    #[inline]
    pub fn dom(&self, m: MorId) -> ObjId {
        self.morphisms[m.idx()].dom
    }

    #[inline]
    pub fn cod(&self, m: MorId) -> ObjId {
        self.morphisms[m.idx()].cod
    }

    #[inline]
    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.idx()]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identity(self.dom(m)) == m
    }

    /// `g ∘ f`, or `None` when `cod f ≠ dom g`.
    #[inline]
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.table[g.idx() * self.morphisms.len() + f.idx()]
    }

    /// `g ∘ f` for a pair already known to be composable.
    #[inline]
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        match self.compose(g, f) {
            Some(h) => h,
            None => panic!(
                "composite {} ∘ {} is undefined in {}",
                self.label(g),
                self.label(f),
                self.name
            ),
        }
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a.idx() * self.objects.len() + b.idx()]
    }

    pub fn out_of(&self, a: ObjId) -> &[MorId] {
        &self.out_of[a.idx()]
    }

    pub fn into(&self, b: ObjId) -> &[MorId] {
        &self.into[b.idx()]
    }

    pub fn inverse(&self, m: MorId) -> Option<MorId> {
        self.inverses[m.idx()]
    }

    pub fn is_iso(&self, m: MorId) -> bool {
        self.inverses[m.idx()].is_some()
    }

    /// All isomorphisms with the given domain.
    pub fn isos_from(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.out_of(a).iter().copied().filter(|&m| self.is_iso(m))
    }

    pub fn isos_into(&self, b: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.into(b).iter().copied().filter(|&m| self.is_iso(m))
    }

    pub fn is_mono(&self, m: MorId) -> bool {
        let d = self.dom(m);
        self.object_ids().all(|x| {
            let hom = self.hom(x, d);
            let mut images: Vec<MorId> = hom.iter().map(|&g| self.comp(m, g)).collect();
            images.sort_unstable();
            images.dedup();
            images.len() == hom.len()
        })
    }

    pub fn is_epi(&self, m: MorId) -> bool {
        let c = self.cod(m);
        self.object_ids().all(|x| {
            let hom = self.hom(c, x);
            let mut images: Vec<MorId> = hom.iter().map(|&g| self.comp(g, m)).collect();
            images.sort_unstable();
            images.dedup();
            images.len() == hom.len()
        })
    }

    /// Raw form, suitable for printing or re-validation.
    pub fn to_raw(&self) -> RawCategory {
        let n = self.morphisms.len();
        let mut compose = BTreeMap::new();
        for g in 0..n {
            for f in 0..n {
                if let Some(h) = self.table[g * n + f] {
                    compose.insert((g, f), h.idx());
                }
            }
        }
        RawCategory {
            name: self.name.clone(),
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| RawMorphism {
                    label: m.label.clone(),
                    dom: m.dom.idx(),
                    cod: m.cod.idx(),
                })
                .collect(),
            identities: self.identities.iter().map(|m| Some(m.idx())).collect(),
            compose,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFlags {
    pub mono: bool,
    pub epi: bool,
    pub section: bool,
    pub retraction: bool,
    pub iso: bool,
}

pub fn morphism_flags(cat: &FinCat, m: MorId) -> Result<MorphismFlags> {
    if m.idx() >= cat.num_morphisms() {
        return Err(Error::Input(format!("unknown morphism id {}", m.0)));
    }
    let (d, c) = (cat.dom(m), cat.cod(m));
    let section = cat
        .hom(c, d)
        .iter()
        .any(|&r| cat.comp(r, m) == cat.identity(d));
    let retraction = cat
        .hom(c, d)
        .iter()
        .any(|&r| cat.comp(m, r) == cat.identity(c));
    Ok(MorphismFlags {
        mono: cat.is_mono(m),
        epi: cat.is_epi(m),
        section,
        retraction,
        iso: section && retraction,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalPredicates {
    pub initial: Vec<ObjId>,
    pub terminal: Vec<ObjId>,
    pub strict_initial: Vec<ObjId>,
    pub strictly_connected: bool,
}

pub fn global_predicates(cat: &FinCat) -> GlobalPredicates {
    let initial: Vec<ObjId> = cat
        .object_ids()
        .filter(|&i| cat.object_ids().all(|x| cat.hom(i, x).len() == 1))
        .collect();
    let terminal: Vec<ObjId> = cat
        .object_ids()
        .filter(|&t| cat.object_ids().all(|x| cat.hom(x, t).len() == 1))
        .collect();
    let strict_initial: Vec<ObjId> = initial
        .iter()
        .copied()
        .filter(|&i| cat.into(i).iter().all(|&m| cat.is_iso(m)))
        .collect();
    let strictly_connected = cat.object_ids().all(|a| {
        cat.object_ids()
            .all(|b| !cat.hom(a, b).is_empty() || strict_initial.contains(&b))
    });
    GlobalPredicates {
        initial,
        terminal,
        strict_initial,
        strictly_connected,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Covariant,
    /// Arrows reversed: `m: a → b` is sent to `G(b) → G(a)`.
    Contravariant,
}

/// Functor data between enumerated categories.
///
/// `mmap` may be partial: a contravariant functor on the subcategory spanned
/// by a class `S` is stored as a map defined on the members of `S` only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorData {
    pub name: String,
    pub omap: Vec<ObjId>,
    pub mmap: Vec<Option<MorId>>,
    pub variance: Variance,
}

impl FunctorData {
    pub fn identity(cat: &FinCat) -> FunctorData {
        FunctorData {
            name: format!("id_{}", cat.name()),
            omap: cat.object_ids().collect(),
            mmap: cat.morphism_ids().map(Some).collect(),
            variance: Variance::Covariant,
        }
    }

    /// The identity on the members of `class`, as a contravariant map into
    /// the category itself (the `G = identity-on-S` of a trivial pair).
    pub fn restricted(&self, class: &MorClass) -> FunctorData {
        FunctorData {
            name: self.name.clone(),
            omap: self.omap.clone(),
            mmap: self
                .mmap
                .iter()
                .enumerate()
                .map(|(i, m)| if class.contains(MorId(i as u32)) { *m } else { None })
                .collect(),
            variance: self.variance,
        }
    }

    pub fn obj(&self, o: ObjId) -> ObjId {
        self.omap[o.idx()]
    }

    pub fn mor(&self, m: MorId) -> Option<MorId> {
        self.mmap[m.idx()]
    }

    /// Value on a morphism that must be in the domain of definition.
    pub fn at(&self, m: MorId) -> MorId {
        self.mmap[m.idx()].unwrap_or_else(|| panic!("functor {} undefined on {m}", self.name))
    }

    pub fn is_total(&self) -> bool {
        self.mmap.iter().all(Option::is_some)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum FunctorViolation {
    Shape { detail: String },
    Typing { mor: MorId },
    Identity { obj: ObjId },
    Composition { g: MorId, f: MorId },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorReport {
    pub violations: Vec<FunctorViolation>,
}

impl FunctorReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive functoriality check on the domain of definition of `func`.
pub fn validate_functor(func: &FunctorData, source: &FinCat, target: &FinCat) -> FunctorReport {
    use FunctorViolation as V;
    let mut violations = Vec::new();
    if func.omap.len() != source.num_objects() || func.mmap.len() != source.num_morphisms() {
        violations.push(V::Shape {
            detail: format!(
                "functor {} has {} object and {} morphism entries, source has {} and {}",
                func.name,
                func.omap.len(),
                func.mmap.len(),
                source.num_objects(),
                source.num_morphisms()
            ),
        });
        return FunctorReport { violations };
    }
    if func.omap.iter().any(|o| o.idx() >= target.num_objects())
        || func.mmap.iter().flatten().any(|m| m.idx() >= target.num_morphisms())
    {
        violations.push(V::Shape {
            detail: format!("functor {} maps outside its target", func.name),
        });
        return FunctorReport { violations };
    }
    let contra = func.variance == Variance::Contravariant;
    for m in source.morphism_ids() {
        let Some(fm) = func.mor(m) else { continue };
        let (d, c) = (func.obj(source.dom(m)), func.obj(source.cod(m)));
        let ok = if contra {
            target.dom(fm) == c && target.cod(fm) == d
        } else {
            target.dom(fm) == d && target.cod(fm) == c
        };
        if !ok {
            violations.push(V::Typing { mor: m });
        }
    }
    if !violations.is_empty() {
        return FunctorReport { violations };
    }
    for o in source.object_ids() {
        if let Some(fid) = func.mor(source.identity(o)) {
            if fid != target.identity(func.obj(o)) {
                violations.push(V::Identity { obj: o });
            }
        }
    }
    for g in source.morphism_ids() {
        let Some(fg) = func.mor(g) else { continue };
        for &f in source.into(source.dom(g)) {
            let Some(ff) = func.mor(f) else { continue };
            let Some(fgf) = func.mor(source.comp(g, f)) else {
                continue;
            };
            let expected = if contra {
                target.comp(ff, fg)
            } else {
                target.comp(fg, ff)
            };
            if fgf != expected {
                violations.push(V::Composition { g, f });
            }
        }
    }
    FunctorReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcFailure {
    /// The class member being pulled back.
    pub s: MorId,
    /// The morphism it is pulled back along.
    pub f: MorId,
    pub apex: ObjId,
    /// Pulled-back copy of `s` (apex → dom f).
    pub s_prime: MorId,
    /// Pulled-back copy of `f` (apex → dom s).
    pub f_prime: MorId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcReport {
    pub typing: Vec<String>,
    pub failures: Vec<BcFailure>,
    pub squares_checked: usize,
}

impl BcReport {
    pub fn is_ok(&self) -> bool {
        self.typing.is_empty() && self.failures.is_empty()
    }
}

/// Beck–Chevalley check for a covariant `f_func` and a contravariant `g_func`
/// defined on `class`: for every pullback square `f∘s' = s∘f'` with `s` in the
/// class, `F f' ∘ G s' = G s ∘ F f` must hold. Every limit cone is tested,
/// not only the canonical one.
pub fn check_bc_pair(
    f_func: &FunctorData,
    g_func: &FunctorData,
    source: &FinCat,
    class: &MorClass,
    target: &FinCat,
) -> Result<BcReport> {
    if f_func.variance != Variance::Covariant || g_func.variance != Variance::Contravariant {
        return Err(Error::Input(
            "Beck-Chevalley pair needs a covariant F and a contravariant G".into(),
        ));
    }
    let mut report = BcReport::default();
    let fr = validate_functor(f_func, source, target);
    if !fr.is_ok() || !f_func.is_total() {
        report
            .typing
            .push(format!("F is not a total functor: {:?}", fr.violations));
    }
    let gr = validate_functor(g_func, source, target);
    if !gr.is_ok() {
        report.typing.push(format!("G is not a functor: {:?}", gr.violations));
    }
    if let Some(s) = class.iter().find(|&s| g_func.mor(s).is_none()) {
        report
            .typing
            .push(format!("G undefined on class member {}", source.label(s)));
    }
    if f_func.omap != g_func.omap {
        report.typing.push("F and G differ on objects".into());
    }
    if !report.typing.is_empty() {
        return Ok(report);
    }
    for s in class.iter() {
        for &f in source.into(source.cod(s)) {
            let cones = limits::enumerate_pullbacks(source, Cospan { f, s });
            for cone in cones.all {
                report.squares_checked += 1;
                let s_prime = cone.p;
                let f_prime = cone.q;
                let Some(gs_prime) = g_func.mor(s_prime) else {
                    report.typing.push(format!(
                        "G undefined on pulled-back leg {}",
                        source.label(s_prime)
                    ));
                    continue;
                };
                let left = target.comp(f_func.at(f_prime), gs_prime);
                let right = target.comp(g_func.at(s), f_func.at(f));
                if left != right {
                    report.failures.push(BcFailure {
                        s,
                        f,
                        apex: cone.apex,
                        s_prime,
                        f_prime,
                    });
                }
            }
        }
    }
    Ok(report)
}

//! Parsed instance files, before any mathematical validation.

use std::collections::BTreeMap;

use crate::backends::{BSpan, CertRelation, Certificate, TemplateInputs};
use crate::classes::MorClass;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, FunctorData, MorId, RawCategory};
use crate::limits::Ofs;
use crate::structures::RestrictionCat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryDecl {
    pub raw: RawCategory,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    All,
    Isos,
    Monos,
    Epis,
    Explicit(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub category: usize,
    pub spec: ClassSpec,
    pub auto_close_isos: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OfsDecl {
    pub name: String,
    pub category: usize,
    pub p: usize,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorDecl {
    pub source: usize,
    pub target: usize,
    pub data: FunctorData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionDecl {
    pub name: String,
    pub category: usize,
    pub bar: Vec<usize>,
    pub hat: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub inputs: TemplateInputs,
    /// Relation for proof search; `az` when omitted.
    pub relation: Option<CertRelation>,
    pub target: Option<BSpan>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub categories: Vec<CategoryDecl>,
    pub classes: Vec<ClassDecl>,
    pub ofs: Vec<OfsDecl>,
    pub functors: Vec<FunctorDecl>,
    pub restrictions: Vec<RestrictionDecl>,
    pub problems: Vec<Problem>,
    pub certificates: Vec<Certificate>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidInstance(msg)
}

impl Document {
    pub fn category_index(&self, name: &str) -> Option<usize> {
        self.categories.iter().position(|c| c.raw.name == name)
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// The validated category, or an invalid-instance error naming the
    /// first violated law.
    pub fn build_category(&self, idx: usize) -> Result<FinCat> {
        let decl = &self.categories[idx];
        decl.raw.build().map_err(|r| {
            let first = r.violations.first().map(|v| v.law()).unwrap_or("unknown");
            invalid(format!("{} is not a category ({} law fails)", decl.raw.name, first))
        })
    }

    pub fn resolve_class(&self, idx: usize, cat: &FinCat) -> MorClass {
        let decl = &self.classes[idx];
        let mut class = match &decl.spec {
            ClassSpec::All => MorClass::all(cat),
            ClassSpec::Isos => MorClass::isos(cat),
            ClassSpec::Monos => MorClass::from_predicate(cat, |m| cat.is_mono(m)),
            ClassSpec::Epis => MorClass::from_predicate(cat, |m| cat.is_epi(m)),
            ClassSpec::Explicit(ms) => MorClass::from_ids(cat, ms.iter().map(|&m| MorId(m as u32))),
        };
        if decl.auto_close_isos {
            let base: Vec<MorId> = class.iter().collect();
            for m in cat.morphism_ids().filter(|&m| cat.is_iso(m)) {
                class.insert(m);
            }
            for x in base {
                for phi in cat.isos_into(cat.dom(x)).collect::<Vec<_>>() {
                    for psi in cat.isos_from(cat.cod(x)).collect::<Vec<_>>() {
                        class.insert(cat.comp(psi, cat.comp(x, phi)));
                    }
                }
            }
        }
        class
    }

    /// The designated class: the one named `S`, else the first declared.
    pub fn designated_class(&self) -> Option<usize> {
        self.class_index("S").or(if self.classes.is_empty() { None } else { Some(0) })
    }

    pub fn restriction_cat(&self, idx: usize) -> Result<(RestrictionCat, Option<Vec<MorId>>)> {
        let decl = &self.restrictions[idx];
        let cat = self.build_category(decl.category)?;
        let ids = |v: &[usize]| v.iter().map(|&m| MorId(m as u32)).collect::<Vec<_>>();
        let x = RestrictionCat::new(cat, ids(&decl.bar))?;
        Ok((x, decl.hat.as_deref().map(ids)))
    }
}

/// Everything the enumerated commands need about the designated instance.
pub struct Resolved {
    pub cat: FinCat,
    pub class: MorClass,
    pub class_name: String,
    pub ofs: Option<Ofs>,
    pub custom: BTreeMap<String, MorClass>,
}

impl Resolved {
    pub fn from_document(doc: &Document) -> Result<Resolved> {
        let ci = doc
            .designated_class()
            .ok_or_else(|| invalid("the file declares no class".into()))?;
        let cat_idx = doc.classes[ci].category;
        let cat = doc.build_category(cat_idx)?;
        let class = doc.resolve_class(ci, &cat);
        let mut custom = BTreeMap::new();
        for (i, c) in doc.classes.iter().enumerate() {
            if c.category == cat_idx {
                custom.insert(c.name.clone(), doc.resolve_class(i, &cat));
            }
        }
        let ofs = doc
            .ofs
            .iter()
            .find(|o| o.category == cat_idx && o.s == ci)
            .map(|o| Ofs {
                p: doc.resolve_class(o.p, &cat),
                s: doc.resolve_class(o.s, &cat),
            });
        Ok(Resolved {
            cat,
            class,
            class_name: doc.classes[ci].name.clone(),
            ofs,
            custom,
        })
    }
}

use serde::{Deserialize, Serialize};

use super::{RangeCat, RestrictionCat};
use crate::classes::MorClass;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, RawCategory, RawMorphism};
use crate::limits::{self, Ofs, OfsReport};

/// The wide subcategory on a set of morphisms, with the inclusion map.
#[derive(Clone, Debug)]
pub struct Subcategory {
    pub cat: FinCat,
    /// Ambient id of each morphism of `cat`.
    pub incl: Vec<MorId>,
    /// Inverse of `incl`.
    pub back: Vec<Option<MorId>>,
}

impl Subcategory {
    pub fn to_ambient(&self, m: MorId) -> MorId {
        self.incl[m.idx()]
    }

    pub fn from_ambient(&self, m: MorId) -> Option<MorId> {
        self.back[m.idx()]
    }
}

/// Wide subcategory of `cat` on the morphisms flagged in `keep`, which
/// must contain the identities and be closed under composition.
pub fn wide_subcategory(cat: &FinCat, keep: &[bool], name: &str) -> Result<Subcategory> {
    let incl: Vec<MorId> = cat.morphism_ids().filter(|m| keep[m.idx()]).collect();
    let mut back = vec![None; cat.num_morphisms()];
    for (i, &m) in incl.iter().enumerate() {
        back[m.idx()] = Some(MorId(i as u32));
    }
    let mut raw = RawCategory::new(name);
    raw.objects = cat.object_ids().map(|o| cat.object_label(o).to_string()).collect();
    raw.morphisms = incl
        .iter()
        .map(|&m| RawMorphism {
            label: cat.label(m).to_string(),
            dom: cat.dom(m).idx(),
            cod: cat.cod(m).idx(),
        })
        .collect();
    raw.identities = cat.object_ids().map(|o| back[cat.identity(o).idx()].map(|m| m.idx())).collect();
    for (gi, &g) in incl.iter().enumerate() {
        for &f in cat.into(cat.dom(g)) {
            let Some(fi) = back[f.idx()] else { continue };
            let h = cat.comp(g, f);
            let hi = back[h.idx()].ok_or_else(|| {
                Error::InvalidInstance(format!(
                    "{name} is not closed under composition: {} ∘ {}",
                    cat.label(g),
                    cat.label(f)
                ))
            })?;
            raw.compose.insert((gi, fi.idx()), hi.idx());
        }
    }
    let built = raw
        .build()
        .map_err(|r| Error::InvalidInstance(format!("{name} is not a category: {:?}", r.violations.first())))?;
    Ok(Subcategory {
        cat: built,
        incl,
        back,
    })
}

pub fn total(x: &RestrictionCat) -> Result<Subcategory> {
    let keep: Vec<bool> = x.cat.morphism_ids().map(|m| x.is_total(m)).collect();
    wide_subcategory(&x.cat, &keep, &format!("Total({})", x.cat.name()))
}

/// All restricted inverses of `i`: `i⁻∘i = ī` and `i∘i⁻ = bar(i⁻)`.
pub fn restricted_inverses(x: &RestrictionCat, i: MorId) -> Vec<MorId> {
    let c = &x.cat;
    c.hom(c.cod(i), c.dom(i))
        .iter()
        .copied()
        .filter(|&j| c.comp(j, i) == x.bar(i) && c.comp(i, j) == x.bar(j))
        .collect()
}

#[derive(Clone, Debug)]
pub struct TotalData {
    pub total: Subcategory,
    /// Total restricted isomorphisms, as a class on `total.cat`.
    pub reiso: MorClass,
    /// Restricted inverse (an ambient morphism) per morphism of `total.cat`.
    pub inverse: Vec<Option<MorId>>,
    /// Members with more than one restricted inverse.
    pub duplicate_inverses: Vec<MorId>,
    /// Range surjections, when a range operator is given.
    pub rasur: Option<MorClass>,
    pub ofs_report: Option<OfsReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalSummary {
    pub total_morphisms: usize,
    pub reiso: usize,
    pub duplicate_inverses: usize,
    pub rasur: Option<usize>,
    pub factorization_system: Option<bool>,
}

impl TotalData {
    pub fn summary(&self) -> TotalSummary {
        TotalSummary {
            total_morphisms: self.total.cat.num_morphisms(),
            reiso: self.reiso.len(),
            duplicate_inverses: self.duplicate_inverses.len(),
            rasur: self.rasur.as_ref().map(MorClass::len),
            factorization_system: self.ofs_report.as_ref().map(OfsReport::is_ok),
        }
    }
}

pub fn total_and_classes(x: &RestrictionCat, range: Option<&RangeCat>) -> Result<TotalData> {
    let total = total(x)?;
    let t = &total.cat;
    let mut reiso = MorClass::empty(t);
    let mut inverse = vec![None; t.num_morphisms()];
    let mut duplicate_inverses = Vec::new();
    for m in t.morphism_ids() {
        let inv = restricted_inverses(x, total.to_ambient(m));
        if let Some(&first) = inv.first() {
            reiso.insert(m);
            inverse[m.idx()] = Some(first);
            if inv.len() > 1 {
                duplicate_inverses.push(m);
            }
        }
    }
    let (rasur, ofs_report) = match range {
        Some(r) => {
            let rs = MorClass::from_predicate(t, |m| {
                let a = total.to_ambient(m);
                r.hat(a) == x.cat.identity(x.cat.cod(a))
            });
            let report = limits::validate_ofs(
                t,
                &Ofs {
                    p: rs.clone(),
                    s: reiso.clone(),
                },
            );
            (Some(rs), Some(report))
        }
        None => (None, None),
    };
    Ok(TotalData {
        total,
        reiso,
        inverse,
        duplicate_inverses,
        rasur,
        ofs_report,
    })
}

//! Pullbacks, products and orthogonal factorization systems, all found by
//! exhaustive search over the enumerated hom-sets.

use serde::{Deserialize, Serialize};

use crate::classes::{self, MorClass};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};

/// `A --f--> P <--s-- B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cospan {
    pub f: MorId,
    pub s: MorId,
}

impl Cospan {
    pub fn new(cat: &FinCat, f: MorId, s: MorId) -> Result<Cospan> {
        if cat.cod(f) != cat.cod(s) {
            return Err(Error::Input(format!(
                "{} and {} do not share a codomain",
                cat.label(f),
                cat.label(s)
            )));
        }
        Ok(Cospan { f, s })
    }

    pub fn feet(&self, cat: &FinCat) -> (ObjId, ObjId) {
        (cat.dom(self.f), cat.dom(self.s))
    }
}

/// A commuting square `f∘p = s∘q` over a cospan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PullbackCone {
    pub apex: ObjId,
    /// Leg to the foot of `f`; this is the pullback of `s` along `f`.
    pub p: MorId,
    /// Leg to the foot of `s`; this is the pullback of `f` along `s`.
    pub q: MorId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pullbacks {
    pub all: Vec<PullbackCone>,
    pub canonical: Option<PullbackCone>,
}

fn commuting_cones_at(cat: &FinCat, co: Cospan, z: ObjId) -> Vec<(MorId, MorId)> {
    let (a, b) = co.feet(cat);
    let mut out = Vec::new();
    for &x in cat.hom(z, a) {
        let fx = cat.comp(co.f, x);
        for &y in cat.hom(z, b) {
            if cat.comp(co.s, y) == fx {
                out.push((x, y));
            }
        }
    }
    out
}

/// Universal property test: `u ↦ (p∘u, q∘u)` must be a bijection from
/// `hom(Z, apex)` onto the commuting cones at `Z`, for every object `Z`.
fn is_limit_with_counts(cat: &FinCat, cone: PullbackCone, counts: &[usize]) -> bool {
    cat.object_ids().all(|z| {
        let hom = cat.hom(z, cone.apex);
        if hom.len() != counts[z.idx()] {
            return false;
        }
        let mut images: Vec<(MorId, MorId)> = hom
            .iter()
            .map(|&u| (cat.comp(cone.p, u), cat.comp(cone.q, u)))
            .collect();
        images.sort_unstable();
        images.dedup();
        images.len() == hom.len()
    })
}

fn cone_counts(cat: &FinCat, co: Cospan) -> Vec<usize> {
    cat.object_ids()
        .map(|z| commuting_cones_at(cat, co, z).len())
        .collect()
}

pub fn is_pullback(cat: &FinCat, co: Cospan, cone: PullbackCone) -> bool {
    let (a, b) = co.feet(cat);
    if cat.dom(cone.p) != cone.apex
        || cat.dom(cone.q) != cone.apex
        || cat.cod(cone.p) != a
        || cat.cod(cone.q) != b
        || cat.comp(co.f, cone.p) != cat.comp(co.s, cone.q)
    {
        return false;
    }
    is_limit_with_counts(cat, cone, &cone_counts(cat, co))
}

/// Every limit cone over `co`, in lexicographic `(apex, p, q)` order.
pub fn enumerate_pullbacks(cat: &FinCat, co: Cospan) -> Pullbacks {
    let counts = cone_counts(cat, co);
    let mut all = Vec::new();
    for apex in cat.object_ids() {
        // hom(apex, apex) must match the cone count at the apex itself
        if cat.hom(apex, apex).len() != counts[apex.idx()] {
            continue;
        }
        for (p, q) in commuting_cones_at(cat, co, apex) {
            let cone = PullbackCone { apex, p, q };
            if is_limit_with_counts(cat, cone, &counts) {
                all.push(cone);
            }
        }
    }
    let canonical = all.first().copied();
    Pullbacks { all, canonical }
}

/// Canonical pullback of the cospan `⟨f, s⟩`, memoized per category.
pub fn pullback(cat: &FinCat, f: MorId, s: MorId) -> Option<PullbackCone> {
    if cat.cod(f) != cat.cod(s) {
        return None;
    }
    let n = cat.num_morphisms();
    *cat.pullback_memo[f.idx() * n + s.idx()]
        .get_or_init(|| enumerate_pullbacks(cat, Cospan { f, s }).canonical)
}

pub fn kernel_pair(cat: &FinCat, s: MorId) -> Option<PullbackCone> {
    pullback(cat, s, s)
}

/// A product cone `A <-pa- P -pb-> B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCone {
    pub apex: ObjId,
    pub pa: MorId,
    pub pb: MorId,
}

pub fn binary_product(cat: &FinCat, a: ObjId, b: ObjId) -> Option<ProductCone> {
    let counts: Vec<usize> = cat
        .object_ids()
        .map(|z| cat.hom(z, a).len() * cat.hom(z, b).len())
        .collect();
    for apex in cat.object_ids() {
        if cat.hom(apex, apex).len() != counts[apex.idx()] {
            continue;
        }
        for &pa in cat.hom(apex, a) {
            for &pb in cat.hom(apex, b) {
                let ok = cat.object_ids().all(|z| {
                    let hom = cat.hom(z, apex);
                    if hom.len() != counts[z.idx()] {
                        return false;
                    }
                    let mut images: Vec<(MorId, MorId)> = hom
                        .iter()
                        .map(|&u| (cat.comp(pa, u), cat.comp(pb, u)))
                        .collect();
                    images.sort_unstable();
                    images.dedup();
                    images.len() == hom.len()
                });
                if ok {
                    return Some(ProductCone { apex, pa, pb });
                }
            }
        }
    }
    None
}

pub fn terminal_object(cat: &FinCat) -> Option<ObjId> {
    cat.object_ids()
        .find(|&t| cat.object_ids().all(|x| cat.hom(x, t).len() == 1))
}

/// The product as the pullback of `!_A` and `!_B` over the terminal object,
/// provided both are in `class`.
pub fn terminal_pullback_product(
    cat: &FinCat,
    a: ObjId,
    b: ObjId,
    class: &MorClass,
) -> Option<ProductCone> {
    let t = terminal_object(cat)?;
    let ta = cat.hom(a, t)[0];
    let tb = cat.hom(b, t)[0];
    if !class.contains(ta) || !class.contains(tb) {
        return None;
    }
    pullback(cat, ta, tb).map(|c| ProductCone {
        apex: c.apex,
        pa: c.p,
        pb: c.q,
    })
}

/// A factorization system candidate: every morphism should be `s∘p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ofs {
    pub p: MorClass,
    pub s: MorClass,
}

/// A commuting square `s∘top = bottom∘p` with `p ∈ P`, `s ∈ S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingSquare {
    pub p: MorId,
    pub s: MorId,
    pub top: MorId,
    pub bottom: MorId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OfsReport {
    pub unfactored: Vec<MorId>,
    /// Two factorizations `(mid, p, s)` of one morphism not related by an iso.
    pub non_isomorphic_factorizations: Vec<(MorId, (ObjId, MorId, MorId), (ObjId, MorId, MorId))>,
    pub missing_diagonal: Vec<LiftingSquare>,
    pub non_unique_diagonal: Vec<LiftingSquare>,
    pub iso_closure: Vec<String>,
    pub composition_closure: Vec<String>,
    pub missing_pullback: Vec<(MorId, MorId)>,
    /// `(p, s)` whose pulled-back copy of `p` leaves `P`.
    pub unstable: Vec<(MorId, MorId)>,
}

impl OfsReport {
    pub fn factorization_ok(&self) -> bool {
        self.unfactored.is_empty() && self.non_isomorphic_factorizations.is_empty()
    }

    pub fn orthogonality_ok(&self) -> bool {
        self.missing_diagonal.is_empty() && self.non_unique_diagonal.is_empty()
    }

    pub fn closure_ok(&self) -> bool {
        self.iso_closure.is_empty() && self.composition_closure.is_empty()
    }

    pub fn stability_ok(&self) -> bool {
        self.missing_pullback.is_empty() && self.unstable.is_empty()
    }

    pub fn is_ok(&self) -> bool {
        self.factorization_ok() && self.orthogonality_ok() && self.closure_ok() && self.stability_ok()
    }
}

fn factorizations(cat: &FinCat, ofs: &Ofs, f: MorId) -> Vec<(ObjId, MorId, MorId)> {
    let (a, b) = (cat.dom(f), cat.cod(f));
    let mut out = Vec::new();
    for mid in cat.object_ids() {
        for &p in cat.hom(a, mid) {
            if !ofs.p.contains(p) {
                continue;
            }
            for &s in cat.hom(mid, b) {
                if ofs.s.contains(s) && cat.comp(s, p) == f {
                    out.push((mid, p, s));
                }
            }
        }
    }
    out
}

fn diagonals(cat: &FinCat, sq: LiftingSquare) -> usize {
    cat.hom(cat.cod(sq.p), cat.dom(sq.s))
        .iter()
        .filter(|&&d| cat.comp(d, sq.p) == sq.top && cat.comp(sq.s, d) == sq.bottom)
        .count()
}

/// `p` has the unique left lifting property against `s`.
pub fn orthogonal(cat: &FinCat, p: MorId, s: MorId) -> bool {
    for &top in cat.hom(cat.dom(p), cat.dom(s)) {
        let st = cat.comp(s, top);
        for &bottom in cat.hom(cat.cod(p), cat.cod(s)) {
            if cat.comp(bottom, p) == st && diagonals(cat, LiftingSquare { p, s, top, bottom }) != 1
            {
                return false;
            }
        }
    }
    true
}

fn closure_problems(cat: &FinCat, class: &MorClass, name: &str) -> (Vec<String>, Vec<String>) {
    let mut iso = Vec::new();
    let mut comp = Vec::new();
    for m in cat.morphism_ids() {
        if cat.is_iso(m) && !class.contains(m) {
            iso.push(format!("{name} misses iso {}", cat.label(m)));
        }
    }
    for g in class.iter() {
        for &f in cat.into(cat.dom(g)) {
            if class.contains(f) && !class.contains(cat.comp(g, f)) {
                comp.push(format!(
                    "{name} contains {} and {} but not their composite",
                    cat.label(g),
                    cat.label(f)
                ));
            }
        }
    }
    (iso, comp)
}

pub fn validate_ofs(cat: &FinCat, ofs: &Ofs) -> OfsReport {
    let mut report = OfsReport::default();
    for f in cat.morphism_ids() {
        let facts = factorizations(cat, ofs, f);
        let Some(&first) = facts.first() else {
            report.unfactored.push(f);
            continue;
        };
        for &other in &facts[1..] {
            let related = cat.hom(first.0, other.0).iter().any(|&i| {
                cat.is_iso(i) && cat.comp(i, first.1) == other.1 && cat.comp(other.2, i) == first.2
            });
            if !related {
                report.non_isomorphic_factorizations.push((f, first, other));
            }
        }
    }
    for p in ofs.p.iter() {
        for s in ofs.s.iter() {
            for &top in cat.hom(cat.dom(p), cat.dom(s)) {
                let st = cat.comp(s, top);
                for &bottom in cat.hom(cat.cod(p), cat.cod(s)) {
                    if cat.comp(bottom, p) != st {
                        continue;
                    }
                    let sq = LiftingSquare { p, s, top, bottom };
                    match diagonals(cat, sq) {
                        0 => report.missing_diagonal.push(sq),
                        1 => {}
                        _ => report.non_unique_diagonal.push(sq),
                    }
                }
            }
        }
    }
    for (class, name) in [(&ofs.p, "P"), (&ofs.s, "S")] {
        let (iso, comp) = closure_problems(cat, class, name);
        report.iso_closure.extend(iso);
        report.composition_closure.extend(comp);
    }
    for p in ofs.p.iter() {
        for &s in cat.into(cat.cod(p)) {
            if !ofs.s.contains(s) {
                continue;
            }
            // cospan ⟨s, p⟩: leg p of the cone is p pulled back along s
            match pullback(cat, s, p) {
                None => report.missing_pullback.push((p, s)),
                Some(c) => {
                    if !ofs.p.contains(c.p) {
                        report.unstable.push((p, s));
                    }
                }
            }
        }
    }
    report
}

/// Least `(mid, p, s)` factorization `f = s∘p`.
pub fn factorize(cat: &FinCat, ofs: &Ofs, f: MorId) -> Result<(MorId, MorId)> {
    factorizations(cat, ofs, f)
        .first()
        .map(|&(_, p, s)| (p, s))
        .ok_or_else(|| {
            Error::InvalidInstance(format!("{} has no (P,S)-factorization", cat.label(f)))
        })
}

/// Non-iso morphisms beyond which OFS enumeration refuses to run.
pub const OFS_SEARCH_LIMIT: usize = 16;

/// All relatively stable factorization systems `(P, S)` with `S` a stable
/// class. `S` ranges over the iso-containing subsets; `P` is then forced to
/// be the left-orthogonal complement of `S`.
pub fn enumerate_all_ofs(cat: &FinCat) -> Result<Vec<Ofs>> {
    let free: Vec<MorId> = cat.morphism_ids().filter(|&m| !cat.is_iso(m)).collect();
    if free.len() > OFS_SEARCH_LIMIT {
        return Err(Error::Input(format!(
            "{} non-iso morphisms exceed the factorization-system search limit",
            free.len()
        )));
    }
    let mut found = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut s = MorClass::isos(cat);
        for (i, &m) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.insert(m);
            }
        }
        if !classes::validate_stable_class(cat, &s).is_ok() {
            continue;
        }
        let mut p = MorClass::empty(cat);
        for m in cat.morphism_ids() {
            if s.iter().all(|x| orthogonal(cat, m, x)) {
                p.insert(m);
            }
        }
        let ofs = Ofs { p, s };
        if validate_ofs(cat, &ofs).is_ok() {
            found.push(ofs);
        }
    }
    Ok(found)
}

//! Morphism classes: stability checks and the derived classes `S★`, `S∘`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId};
use crate::limits::{self, Ofs};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    User,
    All,
    Isos,
    SStar,
    SCirc,
    Derived(String),
}

/// A set of morphisms of one category, stored as a membership bitmap.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorClass {
    members: Vec<bool>,
    pub provenance: Provenance,
}

impl PartialEq for MorClass {
    /// Classes compare by membership only.
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for MorClass {}

impl MorClass {
    pub fn empty(cat: &FinCat) -> MorClass {
        MorClass {
            members: vec![false; cat.num_morphisms()],
            provenance: Provenance::User,
        }
    }

    pub fn all(cat: &FinCat) -> MorClass {
        MorClass {
            members: vec![true; cat.num_morphisms()],
            provenance: Provenance::All,
        }
    }

    pub fn isos(cat: &FinCat) -> MorClass {
        MorClass {
            members: cat.morphism_ids().map(|m| cat.is_iso(m)).collect(),
            provenance: Provenance::Isos,
        }
    }

    pub fn from_ids(cat: &FinCat, ids: impl IntoIterator<Item = MorId>) -> MorClass {
        let mut c = MorClass::empty(cat);
        for m in ids {
            c.insert(m);
        }
        c
    }

    pub fn from_predicate(cat: &FinCat, pred: impl Fn(MorId) -> bool) -> MorClass {
        MorClass {
            members: cat.morphism_ids().map(pred).collect(),
            provenance: Provenance::User,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> MorClass {
        self.provenance = provenance;
        self
    }

    #[inline]
    pub fn contains(&self, m: MorId) -> bool {
        self.members.get(m.idx()).copied().unwrap_or(false)
    }

    /// Returns true when `m` was not yet a member.
    pub fn insert(&mut self, m: MorId) -> bool {
        !std::mem::replace(&mut self.members[m.idx()], true)
    }

    pub fn iter(&self) -> impl Iterator<Item = MorId> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| MorId(i as u32))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn is_subset(&self, other: &MorClass) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    pub fn intersect(&self, other: &MorClass) -> MorClass {
        MorClass {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a && b)
                .collect(),
            provenance: Provenance::Derived("intersection".into()),
        }
    }

    pub fn labels(&self, cat: &FinCat) -> Vec<String> {
        self.iter().map(|m| cat.label(m).to_string()).collect()
    }
}

impl fmt::Display for MorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.iter().map(|m| m.0.to_string()).collect();
        write!(f, "{{{}}}", ids.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassViolation {
    MissingIso { mor: MorId },
    NotComposable { g: MorId, f: MorId },
    /// The cospan `⟨f, s⟩` has no pullback.
    NoPullback { f: MorId, s: MorId },
    LegOutside { f: MorId, s: MorId, leg: MorId },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub violations: Vec<ClassViolation>,
}

impl ClassReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self, cat: &FinCat) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| match *v {
                ClassViolation::MissingIso { mor } => format!("missing iso {}", cat.label(mor)),
                ClassViolation::NotComposable { g, f } => format!(
                    "composite {} ∘ {} leaves the class",
                    cat.label(g),
                    cat.label(f)
                ),
                ClassViolation::NoPullback { f, s } => format!(
                    "no pullback of {} along {}",
                    cat.label(s),
                    cat.label(f)
                ),
                ClassViolation::LegOutside { f, s, leg } => format!(
                    "pullback of {} along {} is {}, outside the class",
                    cat.label(s),
                    cat.label(f),
                    cat.label(leg)
                ),
            })
            .collect()
    }
}

pub fn validate_stable_class(cat: &FinCat, class: &MorClass) -> ClassReport {
    let mut violations = Vec::new();
    for m in cat.morphism_ids() {
        if cat.is_iso(m) && !class.contains(m) {
            violations.push(ClassViolation::MissingIso { mor: m });
        }
    }
    for g in class.iter() {
        for &f in cat.into(cat.dom(g)) {
            if class.contains(f) && !class.contains(cat.comp(g, f)) {
                violations.push(ClassViolation::NotComposable { g, f });
            }
        }
    }
    for s in class.iter() {
        for &f in cat.into(cat.cod(s)) {
            match limits::pullback(cat, f, s) {
                None => violations.push(ClassViolation::NoPullback { f, s }),
                Some(c) if !class.contains(c.p) => {
                    violations.push(ClassViolation::LegOutside { f, s, leg: c.p })
                }
                Some(_) => {}
            }
        }
    }
    ClassReport { violations }
}

/// `s, s∘t ∈ S ⟹ t ∈ S`; returns the first failing `(s, t)`.
pub fn weak_left_cancellation(cat: &FinCat, class: &MorClass) -> std::result::Result<(), (MorId, MorId)> {
    for s in class.iter() {
        for &t in cat.into(cat.dom(s)) {
            if class.contains(cat.comp(s, t)) && !class.contains(t) {
                return Err((s, t));
            }
        }
    }
    Ok(())
}

/// Members of the class that are not monomorphisms.
pub fn non_monic_members(cat: &FinCat, class: &MorClass) -> Vec<MorId> {
    class.iter().filter(|&m| !cat.is_mono(m)).collect()
}

/// A conjugate `v★: D₁ → D₂` between the canonical pullbacks of two
/// cospans with equal feet, induced by `v` with `v∘f = g`, `v∘s = t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjugate {
    pub f: MorId,
    pub s: MorId,
    pub g: MorId,
    pub t: MorId,
    pub v: MorId,
    pub star: MorId,
}

/// Every conjugate `v★` with `v ∈ S`, enumerated cospan by cospan.
pub fn conjugates(cat: &FinCat, class: &MorClass) -> Result<Vec<Conjugate>> {
    let mut out = Vec::new();
    for s in class.iter() {
        for &f in cat.into(cat.cod(s)) {
            let c1 = limits::pullback(cat, f, s).ok_or_else(|| {
                Error::InvalidInstance(format!(
                    "no pullback for cospan ⟨{}, {}⟩",
                    cat.label(f),
                    cat.label(s)
                ))
            })?;
            for &v in cat.out_of(cat.cod(s)) {
                if !class.contains(v) {
                    continue;
                }
                let (g, t) = (cat.comp(v, f), cat.comp(v, s));
                let c2 = limits::pullback(cat, g, t).ok_or_else(|| {
                    Error::InvalidInstance(format!(
                        "no pullback for cospan ⟨{}, {}⟩",
                        cat.label(g),
                        cat.label(t)
                    ))
                })?;
                let star = cat
                    .hom(c1.apex, c2.apex)
                    .iter()
                    .copied()
                    .find(|&x| cat.comp(c2.p, x) == c1.p && cat.comp(c2.q, x) == c1.q)
                    .ok_or_else(|| {
                        Error::Internal(format!(
                            "no comparison map for the conjugate of {}",
                            cat.label(v)
                        ))
                    })?;
                out.push(Conjugate {
                    f,
                    s,
                    g,
                    t,
                    v,
                    star,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorklistOrder {
    Fifo,
    Lifo,
}

/// Least class containing `seed` and closed under pullback along every
/// morphism (or along members of `along`, when given).
///
/// Closure under all limit cones, not just canonical ones, amounts to also
/// closing under pre- and post-composition with isomorphisms: `ψ∘x` is a
/// pullback of `x` along `ψ⁻¹`, and `x∘φ` is a pullback of `x` along `1`.
pub fn pullback_closure(
    cat: &FinCat,
    seed: &MorClass,
    along: Option<&MorClass>,
    order: WorklistOrder,
) -> Result<MorClass> {
    let mut out = seed.clone();
    let mut work: VecDeque<MorId> = seed.iter().collect();
    while let Some(x) = match order {
        WorklistOrder::Fifo => work.pop_front(),
        WorklistOrder::Lifo => work.pop_back(),
    } {
        let mut fresh = Vec::new();
        for &h in cat.into(cat.cod(x)) {
            if along.is_some_and(|a| !a.contains(h)) {
                continue;
            }
            let c = limits::pullback(cat, h, x).ok_or_else(|| {
                Error::InvalidInstance(format!(
                    "no pullback for cospan ⟨{}, {}⟩",
                    cat.label(h),
                    cat.label(x)
                ))
            })?;
            fresh.push(c.p);
        }
        fresh.extend(cat.isos_into(cat.dom(x)).map(|phi| cat.comp(x, phi)));
        fresh.extend(cat.isos_from(cat.cod(x)).map(|psi| cat.comp(psi, x)));
        for m in fresh {
            if out.insert(m) {
                work.push_back(m);
            }
        }
    }
    Ok(out)
}

pub fn compute_s_star(cat: &FinCat, class: &MorClass) -> Result<MorClass> {
    compute_s_star_with(cat, class, None, WorklistOrder::Fifo)
}

/// `S★` with explicit closure options, for comparing schedules.
pub fn compute_s_star_with(
    cat: &FinCat,
    class: &MorClass,
    along: Option<&MorClass>,
    order: WorklistOrder,
) -> Result<MorClass> {
    let mut seed = MorClass::empty(cat);
    for c in conjugates(cat, class)? {
        seed.insert(c.star);
    }
    Ok(pullback_closure(cat, &seed, along, order)?.with_provenance(Provenance::SStar))
}

/// Least pullback-stable `T` with `seed ⊆ T ⊆ ofs.s` satisfying
/// `p,q ∈ P, x ∈ S, y ∈ T, x∘q = p∘y ⟹ x ∈ T`.
pub fn relative_closure(cat: &FinCat, seed: &MorClass, ofs: &Ofs) -> Result<MorClass> {
    if !seed.is_subset(&ofs.s) {
        return Err(Error::InvalidInstance(
            "seed of the relative closure is not contained in S".into(),
        ));
    }
    let mut t = seed.clone();
    loop {
        t = pullback_closure(cat, &t, None, WorklistOrder::Fifo)?;
        if !t.is_subset(&ofs.s) {
            return Err(Error::InvalidInstance(
                "pullback closure left S; S is not pullback-stable".into(),
            ));
        }
        let mut added = false;
        let ys: Vec<MorId> = t.iter().collect();
        for y in ys {
            for &p in cat.out_of(cat.cod(y)) {
                if !ofs.p.contains(p) {
                    continue;
                }
                let py = cat.comp(p, y);
                for &q in cat.out_of(cat.dom(y)) {
                    if !ofs.p.contains(q) {
                        continue;
                    }
                    for &x in cat.hom(cat.cod(q), cat.cod(p)) {
                        if ofs.s.contains(x) && !t.contains(x) && cat.comp(x, q) == py {
                            t.insert(x);
                            added = true;
                        }
                    }
                }
            }
        }
        if !added {
            return Ok(t);
        }
    }
}

pub fn compute_s_circ(cat: &FinCat, ofs: &Ofs) -> Result<MorClass> {
    let star = compute_s_star(cat, &ofs.s)?;
    Ok(relative_closure(cat, &star, ofs)?.with_provenance(Provenance::SCirc))
}

//! Span calculus over a finite category with a stable class `S`.
//!
//! Every isomorphism class of `S`-spans gets a dense [`SpanId`]. Composition
//! of classes is tabulated eagerly, which is what makes saturation cheap.

mod partition;
mod quotient;
mod relation;

pub use partition::{saturate, Partition};
pub use quotient::{
    check_localization, induced_functor, InducedFunctor, LocalizationReport, QuotCat,
};
pub use relation::{
    cospan_preorder, leq_pairs, oracle_a_direct, oracle_a_pairs, relation, seeds,
    CospanPair, RelationContext, RelationKind,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classes::{self, MorClass};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::limits;

pub type SpanId = usize;

/// A raw span `A <-s- D -f-> B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub apex: ObjId,
    pub s: MorId,
    pub f: MorId,
}

/// An isomorphism class of `S`-spans with its least member as representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanClass {
    pub dom: ObjId,
    pub cod: ObjId,
    pub rep: Span,
    pub members: Vec<Span>,
}

#[derive(Clone, Debug)]
pub struct SpanCategory {
    pub cat: FinCat,
    pub class: MorClass,
    spans: Vec<SpanClass>,
    lookup: HashMap<Span, SpanId>,
    homs: HashMap<(ObjId, ObjId), Vec<SpanId>>,
    by_dom: Vec<Vec<SpanId>>,
    by_cod: Vec<Vec<SpanId>>,
    /// Position of each span inside `by_dom` of its domain.
    dom_pos: Vec<usize>,
    identities: Vec<SpanId>,
    /// `comp[σ][i]` is `τ∘σ` for `τ = by_dom[cod σ][i]`.
    comp: Vec<Vec<SpanId>>,
}

impl SpanCategory {
    /// Enumerates span classes and their composition. `class` must be a
    /// validated stable class.
    pub fn new(cat: &FinCat, class: &MorClass) -> Result<SpanCategory> {
        let report = classes::validate_stable_class(cat, class);
        if !report.is_ok() {
            return Err(Error::InvalidInstance(format!(
                "class is not stable: {}",
                report.describe(cat).join("; ")
            )));
        }
        let mut classes_raw: Vec<SpanClass> = Vec::new();
        let mut seen: HashMap<Span, ()> = HashMap::new();
        for apex in cat.object_ids() {
            for &s in cat.out_of(apex) {
                if !class.contains(s) {
                    continue;
                }
                for &f in cat.out_of(apex) {
                    let span = Span { apex, s, f };
                    if seen.contains_key(&span) {
                        continue;
                    }
                    let mut members: Vec<Span> = cat
                        .isos_into(apex)
                        .map(|x| Span {
                            apex: cat.dom(x),
                            s: cat.comp(s, x),
                            f: cat.comp(f, x),
                        })
                        .collect();
                    members.sort_unstable();
                    members.dedup();
                    for m in &members {
                        seen.insert(*m, ());
                    }
                    classes_raw.push(SpanClass {
                        dom: cat.cod(s),
                        cod: cat.cod(f),
                        rep: members[0],
                        members,
                    });
                }
            }
        }
        classes_raw.sort_by_key(|c| (c.dom, c.cod, c.rep));
        let nobj = cat.num_objects();
        let mut lookup = HashMap::new();
        let mut homs: HashMap<(ObjId, ObjId), Vec<SpanId>> = HashMap::new();
        let mut by_dom = vec![Vec::new(); nobj];
        let mut by_cod = vec![Vec::new(); nobj];
        let mut dom_pos = Vec::with_capacity(classes_raw.len());
        for (id, c) in classes_raw.iter().enumerate() {
            for m in &c.members {
                lookup.insert(*m, id);
            }
            homs.entry((c.dom, c.cod)).or_default().push(id);
            dom_pos.push(by_dom[c.dom.idx()].len());
            by_dom[c.dom.idx()].push(id);
            by_cod[c.cod.idx()].push(id);
        }
        let identities: Vec<SpanId> = cat
            .object_ids()
            .map(|o| {
                let id = cat.identity(o);
                lookup[&Span {
                    apex: o,
                    s: id,
                    f: id,
                }]
            })
            .collect();
        let mut sc = SpanCategory {
            cat: cat.clone(),
            class: class.clone(),
            spans: classes_raw,
            lookup,
            homs,
            by_dom,
            by_cod,
            dom_pos,
            identities,
            comp: Vec::new(),
        };
        let mut comp = Vec::with_capacity(sc.spans.len());
        for sigma in 0..sc.spans.len() {
            let row = sc.by_dom[sc.spans[sigma].cod.idx()]
                .iter()
                .map(|&tau| sc.compose_raw(sigma, tau))
                .collect::<Result<Vec<_>>>()?;
            comp.push(row);
        }
        sc.comp = comp;
        Ok(sc)
    }

    fn compose_raw(&self, sigma: SpanId, tau: SpanId) -> Result<SpanId> {
        let cat = &self.cat;
        let a = self.spans[sigma].rep;
        let b = self.spans[tau].rep;
        let pb = limits::pullback(cat, a.f, b.s).ok_or_else(|| {
            Error::InvalidInstance(format!(
                "no pullback for cospan ⟨{}, {}⟩",
                cat.label(a.f),
                cat.label(b.s)
            ))
        })?;
        let raw = Span {
            apex: pb.apex,
            s: cat.comp(a.s, pb.p),
            f: cat.comp(b.f, pb.q),
        };
        self.lookup.get(&raw).copied().ok_or_else(|| {
            Error::InvalidInstance(format!(
                "composite span leaves the class: {} is not in S",
                cat.label(raw.s)
            ))
        })
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn ids(&self) -> std::ops::Range<SpanId> {
        0..self.spans.len()
    }

    pub fn get(&self, id: SpanId) -> &SpanClass {
        &self.spans[id]
    }

    pub fn spans(&self) -> &[SpanClass] {
        &self.spans
    }

    pub fn class_of(&self, span: Span) -> Option<SpanId> {
        self.lookup.get(&span).copied()
    }

    /// Class of the raw span `(s, f)`; `None` if `s ∉ S` or the legs do not
    /// share a domain.
    pub fn class_of_pair(&self, s: MorId, f: MorId) -> Option<SpanId> {
        if self.cat.dom(s) != self.cat.dom(f) {
            return None;
        }
        self.class_of(Span {
            apex: self.cat.dom(s),
            s,
            f,
        })
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[SpanId] {
        self.homs.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn out_of(&self, a: ObjId) -> &[SpanId] {
        &self.by_dom[a.idx()]
    }

    pub fn into(&self, b: ObjId) -> &[SpanId] {
        &self.by_cod[b.idx()]
    }

    pub fn identity(&self, o: ObjId) -> SpanId {
        self.identities[o.idx()]
    }

    /// `τ ∘ σ` (first `σ`, then `τ`).
    #[inline]
    pub fn compose(&self, tau: SpanId, sigma: SpanId) -> Option<SpanId> {
        if self.spans[sigma].cod != self.spans[tau].dom {
            return None;
        }
        Some(self.comp[sigma][self.dom_pos[tau]])
    }

    #[inline]
    pub fn comp(&self, tau: SpanId, sigma: SpanId) -> SpanId {
        self.compose(tau, sigma).expect("composable spans")
    }

    /// `[1, f]`.
    pub fn phi(&self, f: MorId) -> SpanId {
        self.class_of_pair(self.cat.identity(self.cat.dom(f)), f)
            .expect("identity spans exist")
    }

    /// `[s, 1]` for `s ∈ S`.
    pub fn psi(&self, s: MorId) -> Option<SpanId> {
        self.class_of_pair(s, self.cat.identity(self.cat.dom(s)))
    }

    pub fn label(&self, id: SpanId) -> String {
        let r = self.spans[id].rep;
        format!("[{},{}]", self.cat.label(r.s), self.cat.label(r.f))
    }
}

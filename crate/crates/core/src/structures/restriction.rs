use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId};
use crate::limits::{self, Ofs};
use crate::spans::{relation, QuotCat, RelationContext, RelationKind, SpanCategory, SpanId};

/// A finite category with a restriction operator `f ↦ f̄`.
#[derive(Clone, Debug)]
pub struct RestrictionCat {
    pub cat: FinCat,
    pub bar: Vec<MorId>,
}

/// A restriction category with a range operator `f ↦ f̂`.
#[derive(Clone, Debug)]
pub struct RangeCat {
    pub restriction: RestrictionCat,
    pub hat: Vec<MorId>,
}

impl RestrictionCat {
    pub fn new(cat: FinCat, bar: Vec<MorId>) -> Result<RestrictionCat> {
        if bar.len() != cat.num_morphisms() {
            return Err(Error::Input("restriction map has the wrong length".into()));
        }
        for m in cat.morphism_ids() {
            let b = bar[m.idx()];
            if b.idx() >= cat.num_morphisms() || cat.dom(b) != cat.dom(m) || cat.cod(b) != cat.dom(m) {
                return Err(Error::Input(format!(
                    "restriction of {} is not an endomorphism of its domain",
                    cat.label(m)
                )));
            }
        }
        Ok(RestrictionCat { cat, bar })
    }

    /// Every morphism total: `f̄ = 1`.
    pub fn trivial(cat: FinCat) -> RestrictionCat {
        let bar = cat.morphism_ids().map(|m| cat.identity(cat.dom(m))).collect();
        RestrictionCat { cat, bar }
    }

    #[inline]
    pub fn bar(&self, m: MorId) -> MorId {
        self.bar[m.idx()]
    }

    pub fn is_total(&self, m: MorId) -> bool {
        self.bar(m) == self.cat.identity(self.cat.dom(m))
    }
}

impl RangeCat {
    pub fn new(restriction: RestrictionCat, hat: Vec<MorId>) -> Result<RangeCat> {
        let cat = &restriction.cat;
        if hat.len() != cat.num_morphisms() {
            return Err(Error::Input("range map has the wrong length".into()));
        }
        for m in cat.morphism_ids() {
            let h = hat[m.idx()];
            if h.idx() >= cat.num_morphisms() || cat.dom(h) != cat.cod(m) || cat.cod(h) != cat.cod(m) {
                return Err(Error::Input(format!(
                    "range of {} is not an endomorphism of its codomain",
                    cat.label(m)
                )));
            }
        }
        Ok(RangeCat { restriction, hat })
    }

    #[inline]
    pub fn hat(&self, m: MorId) -> MorId {
        self.hat[m.idx()]
    }
}

fn quotient_kind_ok(kind: &RelationKind) -> bool {
    matches!(kind, RelationKind::ZStar | RelationKind::ZCirc | RelationKind::ZT(_))
}

/// `bar[s,f] = [s,s]` on a quotient by `z★`, `z∘` or a `T`-zig-zag relation.
pub fn restriction_on_quotient(sc: &SpanCategory, quot: &QuotCat) -> Result<RestrictionCat> {
    if !quotient_kind_ok(&quot.partition.kind) {
        return Err(Error::Input(format!(
            "no restriction structure for relation {}",
            quot.partition.kind
        )));
    }
    let mut bar = Vec::with_capacity(quot.reps.len());
    for block in quot.partition.blocks() {
        let value = |x: SpanId| {
            let r = sc.get(x).rep;
            sc.class_of_pair(r.s, r.s).map(|y| quot.morphism_of(y))
        };
        let first = value(block[0]).ok_or_else(|| Error::Internal("(s,s) is not a span".into()))?;
        for &y in &block[1..] {
            if value(y) != Some(first) {
                return Err(Error::Internal(format!(
                    "restriction not well defined: {} and {}",
                    sc.label(block[0]),
                    sc.label(y)
                )));
            }
        }
        bar.push(first);
    }
    RestrictionCat::new(quot.cat.clone(), bar)
}

/// `hat[s,f] = [s_f, s_f]` where `f = s_f∘p_f`.
pub fn range_on_quotient(sc: &SpanCategory, quot: &QuotCat, ofs: &Ofs) -> Result<RangeCat> {
    if quot.partition.kind != RelationKind::ZCirc {
        return Err(Error::Input("range structure needs the zcirc quotient".into()));
    }
    if !limits::validate_ofs(&sc.cat, ofs).is_ok() {
        return Err(Error::InvalidInstance("not a relatively stable factorization system".into()));
    }
    let restriction = restriction_on_quotient(sc, quot)?;
    let mut hat = Vec::with_capacity(quot.reps.len());
    for block in quot.partition.blocks() {
        let value = |x: SpanId| -> Result<MorId> {
            let r = sc.get(x).rep;
            let (_, sf) = limits::factorize(&sc.cat, ofs, r.f)?;
            sc.class_of_pair(sf, sf)
                .map(|y| quot.morphism_of(y))
                .ok_or_else(|| Error::Internal("(s_f,s_f) is not a span".into()))
        };
        let first = value(block[0])?;
        for &y in &block[1..] {
            if value(y)? != first {
                return Err(Error::Internal(format!(
                    "range not well defined: {} and {}",
                    sc.label(block[0]),
                    sc.label(y)
                )));
            }
        }
        hat.push(first);
    }
    RangeCat::new(restriction, hat)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomMode {
    Restriction,
    Range,
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub instances: usize,
    /// Morphisms involved in the first failing instance.
    pub counterexample: Option<Vec<MorId>>,
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub verdicts: Vec<AxiomVerdict>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.verdicts.iter().all(AxiomVerdict::passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|v| !v.passed())
            .map(|v| v.axiom.as_str())
            .collect()
    }
}

struct Tally {
    name: &'static str,
    instances: usize,
    counterexample: Option<Vec<MorId>>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            instances: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, witness: &[MorId]) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness.to_vec());
        }
    }

    fn done(self) -> AxiomVerdict {
        AxiomVerdict {
            axiom: self.name.into(),
            instances: self.instances,
            counterexample: self.counterexample,
        }
    }
}

fn restriction_axioms(x: &RestrictionCat) -> Vec<AxiomVerdict> {
    let c = &x.cat;
    let mut r1 = Tally::new("R1");
    let mut r2 = Tally::new("R2");
    let mut r3 = Tally::new("R3");
    let mut r4 = Tally::new("R4");
    let mut idem = Tally::new("bar-idempotent");
    for f in c.morphism_ids() {
        let bf = x.bar(f);
        r1.check(c.comp(f, bf) == f, &[f]);
        idem.check(x.bar(bf) == bf, &[f]);
        for &g in c.out_of(c.dom(f)) {
            let bg = x.bar(g);
            r2.check(c.comp(bf, bg) == c.comp(bg, bf), &[f, g]);
            r3.check(x.bar(c.comp(g, bf)) == c.comp(bg, bf), &[f, g]);
        }
        for &g in c.out_of(c.cod(f)) {
            r4.check(
                c.comp(x.bar(g), f) == c.comp(f, x.bar(c.comp(g, f))),
                &[f, g],
            );
        }
    }
    vec![r1.done(), r2.done(), r3.done(), r4.done(), idem.done()]
}

fn range_axioms(x: &RestrictionCat, hat: &[MorId]) -> Vec<AxiomVerdict> {
    let c = &x.cat;
    let h = |m: MorId| hat[m.idx()];
    let mut rr1 = Tally::new("RR1");
    let mut rr2 = Tally::new("RR2");
    let mut rr3 = Tally::new("RR3");
    let mut rr4 = Tally::new("RR4");
    for f in c.morphism_ids() {
        rr1.check(x.bar(h(f)) == h(f), &[f]);
        rr2.check(c.comp(h(f), f) == f, &[f]);
        for &g in c.out_of(c.cod(f)) {
            rr3.check(h(c.comp(x.bar(g), f)) == c.comp(x.bar(g), h(f)), &[f, g]);
            rr4.check(h(c.comp(g, h(f))) == h(c.comp(g, f)), &[f, g]);
        }
    }
    vec![rr1.done(), rr2.done(), rr3.done(), rr4.done()]
}

/// A splitting `(m, r)` of `e`: `m∘r = e`, `r∘m = 1`.
pub fn find_splitting(cat: &FinCat, e: MorId) -> Option<(MorId, MorId)> {
    let a = cat.dom(e);
    for &r in cat.out_of(a) {
        for &m in cat.hom(cat.cod(r), a) {
            if cat.comp(m, r) == e && cat.comp(r, m) == cat.identity(cat.cod(r)) {
                return Some((m, r));
            }
        }
    }
    None
}

fn split_axiom(x: &RestrictionCat) -> Vec<AxiomVerdict> {
    let mut split = Tally::new("split");
    for e in x.cat.morphism_ids() {
        if x.bar(e) == e {
            split.check(find_splitting(&x.cat, e).is_some(), &[e]);
        }
    }
    vec![split.done()]
}

/// Exhaustive axiom check. Range mode needs `hat`.
pub fn check_axioms(x: &RestrictionCat, hat: Option<&[MorId]>, mode: AxiomMode) -> Result<AxiomReport> {
    let verdicts = match mode {
        AxiomMode::Restriction => restriction_axioms(x),
        AxiomMode::Split => split_axiom(x),
        AxiomMode::Range => {
            let hat = hat.ok_or_else(|| Error::Input("range axioms need a range operator".into()))?;
            if hat.len() != x.cat.num_morphisms() {
                return Err(Error::Input("range map has the wrong length".into()));
            }
            range_axioms(x, hat)
        }
    };
    Ok(AxiomReport { verdicts })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectAudit {
    pub pairs_checked: usize,
    /// `[s,f]_a = [t,g]_a` but `[s,s]_a ≠ [t,t]_a`.
    pub counterexample: Option<(SpanId, SpanId)>,
}

/// Searches the `a`-quotient for a pair of equal classes whose candidate
/// restrictions `[s,s]_a`, `[t,t]_a` differ. Exploratory; either outcome is
/// reported as data.
pub fn bar_welldefined_on_sect(sc: &SpanCategory) -> Result<SectAudit> {
    let part = relation(sc, &RelationKind::A, &RelationContext::default())?;
    let mut pairs_checked = 0;
    for block in part.blocks() {
        let diag = |x: SpanId| {
            let r = sc.get(x).rep;
            sc.class_of_pair(r.s, r.s)
        };
        let first = diag(block[0]);
        for &y in &block[1..] {
            pairs_checked += 1;
            let other = diag(y);
            let same = match (first, other) {
                (Some(a), Some(b)) => part.same(a, b),
                _ => false,
            };
            if !same {
                return Ok(SectAudit {
                    pairs_checked,
                    counterexample: Some((block[0], y)),
                });
            }
        }
    }
    Ok(SectAudit {
        pairs_checked,
        counterexample: None,
    })
}

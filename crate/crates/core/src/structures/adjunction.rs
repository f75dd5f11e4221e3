//! Componentwise checks of the unit and counit of the partial-map
//! adjunction, its triangle identities, and the class inclusions needed for
//! the range version.

use serde::{Deserialize, Serialize};

use super::restriction::{check_axioms, restriction_on_quotient, AxiomMode, RestrictionCat};
use super::total::{total_and_classes, TotalData};
use crate::classes::{self, MorClass};
use crate::error::{Error, Result};
use crate::fincat::{validate_functor, FinCat, FunctorData, MorId, Variance};
use crate::limits::{self, Cospan, Ofs, PullbackCone};
use crate::spans::{relation, QuotCat, RelationContext, RelationKind, SpanCategory, SpanId};

/// The partial map category `Par(C,S)` with its restriction structure.
pub struct ParData {
    pub quot: QuotCat,
    pub restriction: RestrictionCat,
    pub total: TotalData,
}

pub fn par(sc: &SpanCategory) -> Result<ParData> {
    let part = relation(sc, &RelationKind::ZStar, &RelationContext::default())?;
    let quot = QuotCat::new(sc, &part)?;
    let restriction = restriction_on_quotient(sc, &quot)?;
    let total = total_and_classes(&restriction, None)?;
    Ok(ParData {
        quot,
        restriction,
        total,
    })
}

fn bijective(mmap: &[Option<MorId>], target_size: usize) -> bool {
    let mut hit = vec![false; target_size];
    for m in mmap {
        match m {
            Some(m) if !hit[m.idx()] => hit[m.idx()] = true,
            _ => return false,
        }
    }
    hit.iter().all(|&b| b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaReport {
    /// `f ↦ [1,f]`, into `Total(Par(C,S))`.
    pub functor: FunctorData,
    pub values_total: bool,
    pub functor_ok: bool,
    pub s_not_reiso: Vec<MorId>,
    /// `s` with `[s,1]∘[1,s] ≠ 1` in `Par(C,S)`.
    pub s_not_section: Vec<MorId>,
    /// Cospans `(f, s)` whose canonical pullback is not sent to a pullback.
    pub pullbacks_not_preserved: Vec<(MorId, MorId)>,
    pub is_iso: bool,
    pub all_mono: bool,
}

impl EtaReport {
    /// The unit is a morphism of stably structured categories.
    pub fn is_ok(&self) -> bool {
        self.values_total
            && self.functor_ok
            && self.s_not_reiso.is_empty()
            && self.s_not_section.is_empty()
            && self.pullbacks_not_preserved.is_empty()
    }
}

fn eta_with(sc: &SpanCategory, p: &ParData) -> Result<EtaReport> {
    let c = &sc.cat;
    let t = &p.total.total;
    let mut values_total = true;
    let mmap: Vec<Option<MorId>> = c
        .morphism_ids()
        .map(|f| {
            let v = t.from_ambient(p.quot.phi.at(f));
            values_total &= v.is_some();
            v
        })
        .collect();
    let functor = FunctorData {
        name: "eta".into(),
        omap: c.object_ids().collect(),
        mmap,
        variance: Variance::Covariant,
    };
    let functor_ok = values_total && validate_functor(&functor, c, &t.cat).is_ok();
    let mut s_not_reiso = Vec::new();
    let mut s_not_section = Vec::new();
    let mut pullbacks_not_preserved = Vec::new();
    let q = &p.quot.cat;
    for s in sc.class.iter() {
        match functor.mor(s) {
            Some(es) if p.total.reiso.contains(es) => {}
            _ => s_not_reiso.push(s),
        }
        let back = p.quot.psi.at(s);
        if q.comp(back, p.quot.phi.at(s)) != q.identity(c.dom(s)) {
            s_not_section.push(s);
        }
        if !functor_ok {
            continue;
        }
        for &f in c.into(c.cod(s)) {
            let cone = limits::pullback(c, f, s)
                .ok_or_else(|| Error::InvalidInstance("missing pullback".into()))?;
            let image = PullbackCone {
                apex: cone.apex,
                p: functor.at(cone.p),
                q: functor.at(cone.q),
            };
            let co = Cospan {
                f: functor.at(f),
                s: functor.at(s),
            };
            if !limits::is_pullback(&t.cat, co, image) {
                pullbacks_not_preserved.push((f, s));
            }
        }
    }
    let is_iso = functor_ok && bijective(&functor.mmap, t.cat.num_morphisms());
    Ok(EtaReport {
        functor,
        values_total,
        functor_ok,
        s_not_reiso,
        s_not_section,
        pullbacks_not_preserved,
        is_iso,
        all_mono: classes::non_monic_members(c, &sc.class).is_empty(),
    })
}

pub fn unit_eta(sc: &SpanCategory) -> Result<EtaReport> {
    let p = par(sc)?;
    eta_with(sc, &p)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub preconditions: Vec<String>,
    /// `Par(Total X, ReIso X)` coincides with the span category.
    pub par_is_span: bool,
    pub welldefined_failures: Vec<(SpanId, SpanId)>,
    pub functor_ok: bool,
    pub is_iso: bool,
    /// Total morphisms `f` with `ε[1,f] ≠ f`.
    pub triangle1_failures: Vec<MorId>,
    pub functor: Option<FunctorData>,
}

impl EpsilonReport {
    pub fn is_ok(&self) -> bool {
        self.preconditions.is_empty()
            && self.welldefined_failures.is_empty()
            && self.functor_ok
            && self.is_iso
            && self.triangle1_failures.is_empty()
    }
}

struct Counit {
    total: TotalData,
    spans: SpanCategory,
    par: QuotCat,
    eps: FunctorData,
}

fn build_counit(x: &RestrictionCat) -> Result<(Option<Counit>, EpsilonReport)> {
    let mut report = EpsilonReport::default();
    let axioms = check_axioms(x, None, AxiomMode::Restriction)?;
    for name in axioms.failed() {
        report.preconditions.push(format!("axiom {name} fails"));
    }
    let split = check_axioms(x, None, AxiomMode::Split)?;
    if !split.is_ok() {
        report.preconditions.push("a restriction idempotent does not split".into());
    }
    if !report.preconditions.is_empty() {
        return Ok((None, report));
    }
    let td = total_and_classes(x, None)?;
    let t = &td.total.cat;
    if !td.duplicate_inverses.is_empty() {
        report.preconditions.push("restricted inverses are not unique".into());
    }
    if !classes::non_monic_members(t, &td.reiso).is_empty() {
        report.preconditions.push("ReIso contains a non-monic morphism".into());
    }
    let stable = classes::validate_stable_class(t, &td.reiso);
    if !stable.is_ok() {
        report.preconditions.push(format!(
            "ReIso is not a stable class: {}",
            stable.describe(t).join("; ")
        ));
    }
    if !report.preconditions.is_empty() {
        return Ok((None, report));
    }
    let spans = SpanCategory::new(t, &td.reiso)?;
    let part = relation(&spans, &RelationKind::ZStar, &RelationContext::default())?;
    report.par_is_span = part.is_discrete();
    let par = QuotCat::new(&spans, &part)?;
    let value = |sid: SpanId| -> Result<MorId> {
        let r = spans.get(sid).rep;
        let inv = td.inverse[r.s.idx()]
            .ok_or_else(|| Error::Internal("ReIso member without inverse".into()))?;
        Ok(x.cat.comp(td.total.to_ambient(r.f), inv))
    };
    let mut mmap = Vec::with_capacity(par.reps.len());
    for block in par.partition.blocks() {
        let first = value(block[0])?;
        for &y in &block[1..] {
            if value(y)? != first {
                report.welldefined_failures.push((block[0], y));
            }
        }
        mmap.push(Some(first));
    }
    let eps = FunctorData {
        name: "epsilon".into(),
        omap: x.cat.object_ids().collect(),
        mmap,
        variance: Variance::Covariant,
    };
    report.functor_ok = validate_functor(&eps, &par.cat, &x.cat).is_ok();
    report.is_iso = report.functor_ok && bijective(&eps.mmap, x.cat.num_morphisms());
    for m in t.morphism_ids() {
        if eps.at(par.phi.at(m)) != td.total.to_ambient(m) {
            report.triangle1_failures.push(m);
        }
    }
    report.functor = Some(eps.clone());
    Ok((
        Some(Counit {
            total: td,
            spans,
            par,
            eps,
        }),
        report,
    ))
}

/// `ε_X: Par(Total X, ReIso X) → X`, `[s,f] ↦ f∘s⁻`.
pub fn counit_epsilon(x: &RestrictionCat) -> Result<EpsilonReport> {
    Ok(build_counit(x)?.1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub eta: EtaReport,
    pub epsilon: EpsilonReport,
    /// Total morphisms `f` of `Par(C,S)` with `ε(η f) ≠ f`.
    pub triangle1_failures: Vec<MorId>,
    /// Spans `[s,f]` with `ε[ηs, ηf] ≠ [s,f]`.
    pub triangle2_failures: Vec<SpanId>,
}

impl TriangleReport {
    pub fn is_ok(&self) -> bool {
        self.eta.is_ok()
            && self.epsilon.is_ok()
            && self.triangle1_failures.is_empty()
            && self.triangle2_failures.is_empty()
    }
}

/// Both triangle identities at `(C, S)` and at `Par(C, S)`.
pub fn triangles(sc: &SpanCategory) -> Result<TriangleReport> {
    let p = par(sc)?;
    let eta = eta_with(sc, &p)?;
    let (counit, epsilon) = build_counit(&p.restriction)?;
    let mut triangle1_failures = Vec::new();
    let mut triangle2_failures = Vec::new();
    match (&counit, eta.functor_ok) {
        (Some(cu), true) => {
            triangle1_failures = epsilon.triangle1_failures.clone();
            for sigma in sc.ids() {
                let r = sc.get(sigma).rep;
                let (es, ef) = (eta.functor.at(r.s), eta.functor.at(r.f));
                let ok = cu.total.reiso.contains(es)
                    && cu
                        .spans
                        .class_of_pair(es, ef)
                        .map(|x| cu.eps.at(cu.par.morphism_of(x)) == p.quot.morphism_of(sigma))
                        .unwrap_or(false);
                if !ok {
                    triangle2_failures.push(sigma);
                }
            }
        }
        _ => triangle2_failures.extend(sc.ids()),
    }
    Ok(TriangleReport {
        eta,
        epsilon,
        triangle1_failures,
        triangle2_failures,
    })
}

/// `Par(F): [s,f] ↦ [Fs, Ff]` between partial map categories.
pub fn par_functor(
    src: &SpanCategory,
    src_par: &QuotCat,
    tgt: &SpanCategory,
    tgt_par: &QuotCat,
    f: &FunctorData,
) -> Result<FunctorData> {
    if !f.is_total() || !validate_functor(f, &src.cat, &tgt.cat).is_ok() {
        return Err(Error::Input(format!("{} is not a functor", f.name)));
    }
    let value = |x: SpanId| -> Result<MorId> {
        let r = src.get(x).rep;
        tgt.class_of_pair(f.at(r.s), f.at(r.f))
            .map(|y| tgt_par.morphism_of(y))
            .ok_or_else(|| Error::Input(format!("{} does not map S into T", f.name)))
    };
    let mut mmap = Vec::with_capacity(src_par.reps.len());
    for block in src_par.partition.blocks() {
        let first = value(block[0])?;
        for &y in &block[1..] {
            if value(y)? != first {
                return Err(Error::Input(format!(
                    "Par({}) is not well defined on {}",
                    f.name,
                    src.label(y)
                )));
            }
        }
        mmap.push(Some(first));
    }
    Ok(FunctorData {
        name: format!("Par({})", f.name),
        omap: f.omap.clone(),
        mmap,
        variance: Variance::Covariant,
    })
}

/// Morphisms `f` with `Par(F)[1,f] ≠ [1,Ff]`.
pub fn eta_naturality(src: &SpanCategory, tgt: &SpanCategory, f: &FunctorData) -> Result<Vec<MorId>> {
    let sp = par(src)?;
    let tp = par(tgt)?;
    let pf = par_functor(src, &sp.quot, tgt, &tp.quot, f)?;
    Ok(src
        .cat
        .morphism_ids()
        .filter(|&m| pf.at(sp.quot.phi.at(m)) != tp.quot.phi.at(f.at(m)))
        .collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma91Report {
    pub preconditions: Vec<String>,
    /// Members of `S∘` whose image is outside `(F(S★))∘`.
    pub first_inclusion: Vec<MorId>,
    /// Members of `(F(S★))∘` outside `T∘`.
    pub second_inclusion: Vec<MorId>,
    pub s_circ: usize,
    pub image_circ: usize,
    pub t_circ: usize,
}

impl Lemma91Report {
    pub fn is_ok(&self) -> bool {
        self.preconditions.is_empty() && self.first_inclusion.is_empty() && self.second_inclusion.is_empty()
    }
}

fn image(f: &FunctorData, class: &MorClass, target: &FinCat) -> MorClass {
    MorClass::from_ids(target, class.iter().map(|m| f.at(m)))
}

/// `F(S∘) ⊆ (F(S★))∘ ⊆ T∘` for `F: (C,P,S) → (D,Q,T)`.
pub fn lemma91_check(
    src: &FinCat,
    src_ofs: &Ofs,
    tgt: &FinCat,
    tgt_ofs: &Ofs,
    f: &FunctorData,
) -> Result<Lemma91Report> {
    let mut report = Lemma91Report::default();
    if !limits::validate_ofs(src, src_ofs).is_ok() || !limits::validate_ofs(tgt, tgt_ofs).is_ok() {
        return Err(Error::InvalidInstance(
            "both sides need relatively stable factorization systems".into(),
        ));
    }
    if f.variance != Variance::Covariant || !f.is_total() || !validate_functor(f, src, tgt).is_ok() {
        report.preconditions.push(format!("{} is not a functor", f.name));
        return Ok(report);
    }
    if !image(f, &src_ofs.p, tgt).is_subset(&tgt_ofs.p) {
        report.preconditions.push("F(P) is not contained in Q".into());
    }
    if !image(f, &src_ofs.s, tgt).is_subset(&tgt_ofs.s) {
        report.preconditions.push("F(S) is not contained in T".into());
    }
    'outer: for s in src_ofs.s.iter() {
        for &g in src.into(src.cod(s)) {
            let Some(cone) = limits::pullback(src, g, s) else {
                continue;
            };
            let co = Cospan {
                f: f.at(g),
                s: f.at(s),
            };
            let img = PullbackCone {
                apex: f.obj(cone.apex),
                p: f.at(cone.p),
                q: f.at(cone.q),
            };
            if !limits::is_pullback(tgt, co, img) {
                report.preconditions.push(format!(
                    "F does not preserve the pullback of {} along {}",
                    src.label(s),
                    src.label(g)
                ));
                break 'outer;
            }
        }
    }
    if !report.preconditions.is_empty() {
        return Ok(report);
    }
    let s_circ = classes::compute_s_circ(src, src_ofs)?;
    let s_star = classes::compute_s_star(src, &src_ofs.s)?;
    let image_circ = classes::relative_closure(tgt, &image(f, &s_star, tgt), tgt_ofs)?;
    let t_circ = classes::compute_s_circ(tgt, tgt_ofs)?;
    report.first_inclusion = s_circ.iter().filter(|&m| !image_circ.contains(f.at(m))).collect();
    report.second_inclusion = image_circ.iter().filter(|&m| !t_circ.contains(m)).collect();
    report.s_circ = s_circ.len();
    report.image_circ = image_circ.len();
    report.t_circ = t_circ.len();
    Ok(report)
}

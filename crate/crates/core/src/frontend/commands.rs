use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::document::*;
use super::printer::print_certificate;
use super::report::{hom_dot, hom_json, hom_table, Report};
use crate::backends::{
    bounded_prover, check_certificate, derive_certificate, CertRelation, ProverBounds, ProverOutcome, Template,
    Verdict,
};
use crate::classes;
use crate::corpus::Instance;
use crate::error::{Error, Result};
use crate::fincat::{validate_functor, FinCat, MorId, RawCategory};
use crate::limits::{self, Ofs};
use crate::spans::{relation, Partition, QuotCat, RelationContext, RelationKind, SpanCategory};
use crate::structures::{
    check_axioms, counit_epsilon, lemma91_check, par, range_on_quotient, triangles,
    unit_eta, AxiomMode, AxiomReport, RestrictionCat,
};

fn labels(cat: &FinCat, ms: &[MorId]) -> String {
    let ls: Vec<&str> = ms.iter().map(|&m| cat.label(m)).collect();
    ls.join(", ")
}

fn mor_json(cat: &FinCat, ms: &[MorId]) -> Value {
    json!(ms.iter().map(|&m| cat.label(m)).collect::<Vec<_>>())
}

/// Span category of the designated instance.
fn span_category(doc: &Document) -> Result<(Resolved, SpanCategory)> {
    let r = Resolved::from_document(doc)?;
    let sc = SpanCategory::new(&r.cat, &r.class)?;
    Ok((r, sc))
}

fn context(r: &Resolved) -> RelationContext {
    RelationContext {
        ofs: r.ofs.clone(),
        custom: r.custom.clone(),
    }
}

fn partition_json(sc: &SpanCategory, p: &Partition) -> Value {
    json!(p
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&x| sc.label(x)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// Checks every declaration of the file.
pub fn validate(doc: &Document) -> Result<Report> {
    let mut rep = Report::new("validate");
    let mut cats: Vec<Option<FinCat>> = Vec::new();
    let mut cat_json = Vec::new();
    for decl in &doc.categories {
        match decl.raw.build() {
            Ok(cat) => {
                rep.check(
                    true,
                    &format!(
                        "category {} ({} objects, {} morphisms)",
                        cat.name(),
                        cat.num_objects(),
                        cat.num_morphisms()
                    ),
                );
                cat_json.push(json!({"name": cat.name(), "ok": true, "objects": cat.num_objects(), "morphisms": cat.num_morphisms()}));
                cats.push(Some(cat));
            }
            Err(r) => {
                let laws: Vec<&str> = r.violations.iter().map(|v| v.law()).collect();
                rep.check(false, &format!("category {}: {} violation(s), first {}", decl.raw.name, laws.len(), laws[0]));
                cat_json.push(json!({"name": decl.raw.name, "ok": false, "violations": format!("{:?}", r.violations)}));
                cats.push(None);
            }
        }
    }
    rep.set("categories", json!(cat_json));

    let mut class_json = Vec::new();
    for (i, c) in doc.classes.iter().enumerate() {
        let Some(cat) = &cats[c.category] else {
            rep.fail(format!("FAIL  class {}: its category is invalid", c.name));
            continue;
        };
        let class = doc.resolve_class(i, cat);
        // left classes of factorization systems need not be stable
        let left_only = doc.ofs.iter().any(|o| o.p == i) && !doc.ofs.iter().any(|o| o.s == i);
        if left_only && doc.designated_class() != Some(i) {
            rep.line(format!("info  class {} ({} members), left class only", c.name, class.len()));
            class_json.push(json!({"name": c.name, "members": class.len(), "left_only": true}));
            continue;
        }
        let report = classes::validate_stable_class(cat, &class);
        let problems = report.describe(cat);
        rep.check(report.is_ok(), &format!("class {} ({} members) is stable", c.name, class.len()));
        for p in problems.iter().take(5) {
            rep.line(format!("      {p}"));
        }
        let non_monic = classes::non_monic_members(cat, &class);
        if report.is_ok() && !non_monic.is_empty() {
            rep.line(format!("NOTABLE class {} has non-monic members: {}", c.name, labels(cat, &non_monic)));
        }
        class_json.push(json!({
            "name": c.name,
            "members": class.len(),
            "stable": report.is_ok(),
            "problems": problems,
            "non_monic": mor_json(cat, &non_monic),
        }));
    }
    rep.set("classes", json!(class_json));

    let mut ofs_json = Vec::new();
    for o in &doc.ofs {
        let Some(cat) = &cats[o.category] else {
            rep.fail(format!("FAIL  ofs {}: its category is invalid", o.name));
            continue;
        };
        let ofs = Ofs {
            p: doc.resolve_class(o.p, cat),
            s: doc.resolve_class(o.s, cat),
        };
        let r = limits::validate_ofs(cat, &ofs);
        rep.check(r.is_ok(), &format!("ofs {} is a relatively stable factorization system", o.name));
        for (ok, what) in [
            (r.factorization_ok(), "factorization"),
            (r.orthogonality_ok(), "orthogonality"),
            (r.closure_ok(), "closure"),
            (r.stability_ok(), "relative stability"),
        ] {
            if !ok {
                rep.line(format!("      {what} fails"));
            }
        }
        ofs_json.push(json!({
            "name": o.name,
            "ok": r.is_ok(),
            "factorization": r.factorization_ok(),
            "orthogonality": r.orthogonality_ok(),
            "closure": r.closure_ok(),
            "stability": r.stability_ok(),
        }));
    }
    rep.set("ofs", json!(ofs_json));

    let mut fun_json = Vec::new();
    for f in &doc.functors {
        let (Some(src), Some(tgt)) = (&cats[f.source], &cats[f.target]) else {
            rep.fail(format!("FAIL  functor {}: a category is invalid", f.data.name));
            continue;
        };
        let r = validate_functor(&f.data, src, tgt);
        rep.check(r.is_ok(), &format!("functor {}", f.data.name));
        fun_json.push(json!({"name": f.data.name, "ok": r.is_ok(), "violations": format!("{:?}", r.violations)}));
    }
    rep.set("functors", json!(fun_json));

    let mut res_json = Vec::new();
    for (i, r) in doc.restrictions.iter().enumerate() {
        if cats[r.category].is_none() {
            rep.fail(format!("FAIL  restriction {}: its category is invalid", r.name));
            continue;
        }
        let (x, hat) = doc.restriction_cat(i)?;
        let ax = check_axioms(&x, None, AxiomMode::Restriction)?;
        axiom_lines(&mut rep, &x, &format!("restriction {}", r.name), &ax);
        let mut entry = json!({"name": r.name, "restriction": axiom_json(&x, &ax)});
        if let Some(hat) = hat {
            let ax = check_axioms(&x, Some(&hat), AxiomMode::Range)?;
            axiom_lines(&mut rep, &x, &format!("range {}", r.name), &ax);
            entry["range"] = axiom_json(&x, &ax);
        }
        res_json.push(entry);
    }
    rep.set("restrictions", json!(res_json));

    let mut cert_json = Vec::new();
    for c in &doc.certificates {
        let v = check_certificate(c)?;
        verdict_line(&mut rep, &c.name, &v);
        cert_json.push(json!({"name": c.name, "verdict": serde_json::to_value(&v).expect("serializable")}));
    }
    rep.set("certificates", json!(cert_json));
    for p in &doc.problems {
        rep.line(format!("info  problem {} ({} backend, class {})", p.name, p.inputs.backend, p.inputs.class));
    }
    Ok(rep)
}

fn verdict_line(rep: &mut Report, name: &str, v: &Verdict) {
    match v {
        Verdict::Valid => rep.check(true, &format!("certificate {name}")),
        Verdict::Invalid { step, reason } => {
            let at = step.map_or("at the endpoints".to_string(), |s| format!("at step {s}"));
            rep.check(false, &format!("certificate {name}: {at}: {reason}"));
        }
    }
}

fn axiom_lines(rep: &mut Report, x: &RestrictionCat, what: &str, ax: &AxiomReport) {
    for v in &ax.verdicts {
        match &v.counterexample {
            None => rep.check(true, &format!("{what}: {} ({} instances)", v.axiom, v.instances)),
            Some(ce) => rep.check(false, &format!("{what}: {} fails at {}", v.axiom, labels(&x.cat, ce))),
        }
    }
}

fn axiom_json(x: &RestrictionCat, ax: &AxiomReport) -> Value {
    json!(ax
        .verdicts
        .iter()
        .map(|v| json!({
            "axiom": v.axiom,
            "instances": v.instances,
            "counterexample": v.counterexample.as_ref().map(|ce| mor_json(&x.cat, ce)),
        }))
        .collect::<Vec<_>>())
}

/// The quotient of the span category by one relation.
pub fn build(doc: &Document, kind: &RelationKind) -> Result<Report> {
    let (r, sc) = span_category(doc)?;
    let part = relation(&sc, kind, &context(&r))?;
    let quot = QuotCat::new(&sc, &part)?;
    let mut rep = Report::new("build");
    rep.line(format!(
        "category {}: {} objects, {} morphisms; class {}: {} members",
        r.cat.name(),
        r.cat.num_objects(),
        r.cat.num_morphisms(),
        r.class_name,
        r.class.len()
    ));
    rep.line(format!("relation {kind}: {} span classes in {} blocks", sc.len(), part.num_blocks()));
    rep.lines.extend(hom_table(&quot.cat));
    rep.set("category", json!(r.cat.name()));
    rep.set("class", json!(r.class_name));
    rep.set("relation", json!(kind.to_string()));
    rep.set("spans", json!(sc.len()));
    rep.set("blocks", json!(part.num_blocks()));
    rep.set("quotient", hom_json(&quot.cat));
    rep.set("partition", partition_json(&sc, &part));
    rep.dot = Some(hom_dot(&format!("{}/{kind}", r.cat.name()), &quot.cat));
    Ok(rep)
}

/// Axiom checks on a declared restriction, else on the quotients of the
/// designated instance.
pub fn check(doc: &Document, mode: AxiomMode) -> Result<Report> {
    let mut rep = Report::new("check");
    let mode_name = match mode {
        AxiomMode::Restriction => "restriction",
        AxiomMode::Range => "range",
        AxiomMode::Split => "split",
    };
    if !doc.restrictions.is_empty() {
        let mut out = Vec::new();
        for (i, decl) in doc.restrictions.iter().enumerate() {
            let (x, hat) = doc.restriction_cat(i)?;
            if mode == AxiomMode::Range && hat.is_none() {
                return Err(Error::InvalidInstance(format!("restriction {} declares no range operator", decl.name)));
            }
            let ax = check_axioms(&x, hat.as_deref(), mode)?;
            axiom_lines(&mut rep, &x, &decl.name, &ax);
            out.push(json!({"name": decl.name, "verdicts": axiom_json(&x, &ax)}));
        }
        rep.set("mode", json!(mode_name));
        rep.set("structures", json!(out));
        return Ok(rep);
    }
    let (r, sc) = span_category(doc)?;
    let mut out = Vec::new();
    match mode {
        AxiomMode::Restriction | AxiomMode::Split => {
            let p = par(&sc)?;
            let ax = check_axioms(&p.restriction, None, mode)?;
            axiom_lines(&mut rep, &p.restriction, "Par", &ax);
            out.push(json!({"name": "Par", "verdicts": axiom_json(&p.restriction, &ax)}));
            if let Some(ofs) = &r.ofs {
                let x = rapar(&sc, &r, ofs)?;
                let ax = check_axioms(&x.restriction, None, mode)?;
                axiom_lines(&mut rep, &x.restriction, "RaPar", &ax);
                out.push(json!({"name": "RaPar", "verdicts": axiom_json(&x.restriction, &ax)}));
            }
        }
        AxiomMode::Range => {
            let ofs = r
                .ofs
                .as_ref()
                .ok_or_else(|| Error::InvalidInstance("range axioms need a factorization system on S".into()))?;
            let x = rapar(&sc, &r, ofs)?;
            let ax = check_axioms(&x.restriction, Some(&x.hat), mode)?;
            axiom_lines(&mut rep, &x.restriction, "RaPar", &ax);
            out.push(json!({"name": "RaPar", "verdicts": axiom_json(&x.restriction, &ax)}));
        }
    }
    rep.set("mode", json!(mode_name));
    rep.set("structures", json!(out));
    Ok(rep)
}

fn rapar(sc: &SpanCategory, r: &Resolved, ofs: &Ofs) -> Result<crate::structures::RangeCat> {
    let part = relation(sc, &RelationKind::ZCirc, &context(r))?;
    let quot = QuotCat::new(sc, &part)?;
    range_on_quotient(sc, &quot, ofs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjunctionPart {
    Eta,
    Epsilon,
    Triangles,
    Lemma91,
}

impl FromStr for AdjunctionPart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eta" => AdjunctionPart::Eta,
            "epsilon" => AdjunctionPart::Epsilon,
            "triangles" => AdjunctionPart::Triangles,
            "lemma91" => AdjunctionPart::Lemma91,
            _ => return Err(Error::Input(format!("unknown adjunction check `{s}`"))),
        })
    }
}

impl fmt::Display for AdjunctionPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdjunctionPart::Eta => "eta",
            AdjunctionPart::Epsilon => "epsilon",
            AdjunctionPart::Triangles => "triangles",
            AdjunctionPart::Lemma91 => "lemma91",
        })
    }
}

pub fn adjunction(doc: &Document, part: AdjunctionPart) -> Result<Report> {
    let mut rep = Report::new(format!("adjunction {part}"));
    match part {
        AdjunctionPart::Eta => {
            let (_, sc) = span_category(doc)?;
            let e = unit_eta(&sc)?;
            let c = &sc.cat;
            rep.check(e.values_total, "eta lands in total maps");
            rep.check(e.functor_ok, "eta is a functor");
            rep.check(
                e.s_not_reiso.is_empty(),
                &format!("eta sends S into ReIso [{}]", labels(c, &e.s_not_reiso)),
            );
            rep.check(
                e.s_not_section.is_empty(),
                &format!("[s,1] retracts [1,s] [{}]", labels(c, &e.s_not_section)),
            );
            rep.check(e.pullbacks_not_preserved.is_empty(), "eta preserves pullbacks along S");
            rep.line(format!("info  eta is an isomorphism: {}", e.is_iso));
            rep.line(format!("info  S consists of monomorphisms: {}", e.all_mono));
            rep.check(e.is_iso == e.all_mono, "eta is an isomorphism exactly when S is mono");
            rep.set("eta", serde_json::to_value(&e).expect("serializable"));
        }
        AdjunctionPart::Epsilon => {
            let (x, source) = match doc.restrictions.first() {
                Some(decl) => (doc.restriction_cat(0)?.0, decl.name.clone()),
                None => {
                    let (_, sc) = span_category(doc)?;
                    (par(&sc)?.restriction, "Par".to_string())
                }
            };
            let e = counit_epsilon(&x)?;
            if !e.preconditions.is_empty() {
                return Err(Error::InvalidInstance(format!(
                    "{source} is not a split restriction category with a stable ReIso: {}",
                    e.preconditions.join("; ")
                )));
            }
            rep.line(format!("info  restriction category {source}"));
            rep.line(format!("info  ReIso spans need no quotient: {}", e.par_is_span));
            rep.check(e.welldefined_failures.is_empty(), "epsilon is well defined");
            rep.check(e.functor_ok, "epsilon is a functor");
            rep.check(e.is_iso, "epsilon is an isomorphism");
            rep.check(e.triangle1_failures.is_empty(), "epsilon sends [1,f] to f");
            rep.set("source", json!(source));
            rep.set("epsilon", serde_json::to_value(&e).expect("serializable"));
        }
        AdjunctionPart::Triangles => {
            let (_, sc) = span_category(doc)?;
            let t = triangles(&sc)?;
            if !t.epsilon.preconditions.is_empty() {
                return Err(Error::Internal(format!(
                    "Par fails the counit hypotheses: {}",
                    t.epsilon.preconditions.join("; ")
                )));
            }
            rep.check(t.eta.is_ok(), "eta is a morphism of stably structured categories");
            rep.check(t.epsilon.is_ok(), "epsilon at Par is an isomorphism");
            rep.check(
                t.triangle1_failures.is_empty(),
                &format!("first triangle ({} failures)", t.triangle1_failures.len()),
            );
            rep.check(
                t.triangle2_failures.is_empty(),
                &format!("second triangle ({} failures)", t.triangle2_failures.len()),
            );
            rep.set("triangles", serde_json::to_value(&t).expect("serializable"));
        }
        AdjunctionPart::Lemma91 => {
            let f = doc
                .functors
                .first()
                .ok_or_else(|| Error::Input("the file declares no functor".into()))?;
            let side = |cat_idx: usize| -> Result<(FinCat, Ofs)> {
                let cat = doc.build_category(cat_idx)?;
                let o = doc
                    .ofs
                    .iter()
                    .find(|o| o.category == cat_idx)
                    .ok_or_else(|| {
                        Error::InvalidInstance(format!(
                            "{} has no factorization system",
                            doc.categories[cat_idx].raw.name
                        ))
                    })?;
                let ofs = Ofs {
                    p: doc.resolve_class(o.p, &cat),
                    s: doc.resolve_class(o.s, &cat),
                };
                Ok((cat, ofs))
            };
            let (src, src_ofs) = side(f.source)?;
            let (tgt, tgt_ofs) = side(f.target)?;
            let r = lemma91_check(&src, &src_ofs, &tgt, &tgt_ofs, &f.data)?;
            if !r.preconditions.is_empty() {
                return Err(Error::InvalidInstance(format!(
                    "{} is not a morphism of factorization systems: {}",
                    f.data.name,
                    r.preconditions.join("; ")
                )));
            }
            rep.line(format!(
                "info  |S∘| = {}, |(F(S★))∘| = {}, |T∘| = {}",
                r.s_circ, r.image_circ, r.t_circ
            ));
            rep.check(
                r.first_inclusion.is_empty(),
                &format!("F(S∘) ⊆ (F(S★))∘ [{}]", labels(&src, &r.first_inclusion)),
            );
            rep.check(
                r.second_inclusion.is_empty(),
                &format!("(F(S★))∘ ⊆ T∘ [{}]", labels(&tgt, &r.second_inclusion)),
            );
            rep.set("functor", json!(f.data.name));
            rep.set("inclusions", serde_json::to_value(&r).expect("serializable"));
        }
    }
    Ok(rep)
}

pub fn cert_verify(doc: &Document) -> Result<Report> {
    if doc.certificates.is_empty() {
        return Err(Error::Input("the file declares no certificate".into()));
    }
    let mut rep = Report::new("cert verify");
    let mut out = Vec::new();
    for c in &doc.certificates {
        let v = check_certificate(c)?;
        verdict_line(&mut rep, &c.name, &v);
        out.push(json!({"name": c.name, "steps": c.steps.len(), "verdict": serde_json::to_value(&v).expect("serializable")}));
    }
    rep.set("certificates", json!(out));
    Ok(rep)
}

fn first_problem(doc: &Document) -> Result<&Problem> {
    doc.problems
        .first()
        .ok_or_else(|| Error::Input("the file declares no problem".into()))
}

/// Runs a template on the first problem and re-checks the result.
pub fn cert_derive(doc: &Document, template: Template) -> Result<Report> {
    let p = first_problem(doc)?;
    let d = derive_certificate(template, &p.inputs)?;
    let v = check_certificate(&d.certificate)?;
    if !v.is_valid() {
        return Err(Error::Internal(format!("{template} produced an invalid certificate: {v:?}")));
    }
    let mut rep = Report::new(format!("cert derive {template}"));
    if let Some(note) = &d.note {
        rep.line(format!("note  {note}"));
    }
    rep.check(true, &format!("certificate {} ({} steps)", d.certificate.name, d.certificate.steps.len()));
    let text = print_certificate(&d.certificate);
    rep.document = Some(text.clone());
    rep.set("template", json!(template.to_string()));
    rep.set("note", json!(d.note));
    rep.set("text", json!(text));
    rep.set("certificate", serde_json::to_value(&d.certificate).expect("serializable"));
    Ok(rep)
}

/// Bounded search between the problem span and its target. Never claims
/// that no certificate exists.
pub fn cert_search(doc: &Document, bounds: ProverBounds) -> Result<Report> {
    let p = first_problem(doc)?;
    let target = p
        .target
        .as_ref()
        .ok_or_else(|| Error::Input(format!("problem {} has no target span", p.name)))?;
    let relation = p.relation.unwrap_or(CertRelation::Az);
    let i = &p.inputs;
    let mut rep = Report::new("cert search");
    rep.set("relation", json!(relation.to_string()));
    rep.set("max_apex", json!(bounds.max_apex));
    rep.set("max_steps", json!(bounds.max_steps));
    match bounded_prover(i.backend, i.class, relation, &i.span, target, bounds)? {
        ProverOutcome::Found(c) => {
            rep.check(true, &format!("found a certificate with {} steps", c.steps.len()));
            let text = print_certificate(&c);
            rep.document = Some(text.clone());
            rep.set("outcome", json!("found"));
            rep.set("text", json!(text));
            rep.set("certificate", serde_json::to_value(&c).expect("serializable"));
        }
        ProverOutcome::Unknown { explored } => {
            rep.line(format!("unknown: no certificate within the bounds ({explored} spans explored)"));
            rep.set("outcome", json!("unknown"));
            rep.set("explored", json!(explored));
        }
    }
    Ok(rep)
}

/// Whether `left` is expected to refine `right` on every instance.
pub fn expected_refinement(left: &RelationKind, right: &RelationKind) -> bool {
    use RelationKind::*;
    let rank = |k: &RelationKind| match k {
        Iso => Some(0),
        A => Some(1),
        ZStar => Some(2),
        ZCirc => Some(3),
        Az => Some(4),
        _ => None,
    };
    if left == right || *left == Iso || *right == Az && *left == Z {
        return true;
    }
    matches!((rank(left), rank(right)), (Some(l), Some(r)) if l <= r)
}

pub fn compare(doc: &Document, left: &RelationKind, right: &RelationKind) -> Result<Report> {
    let (r, sc) = span_category(doc)?;
    let ctx = context(&r);
    let lp = relation(&sc, left, &ctx)?;
    let rp = relation(&sc, right, &ctx)?;
    let mut rep = Report::new("compare");
    rep.line(format!("{left}: {} blocks; {right}: {} blocks; {} spans", lp.num_blocks(), rp.num_blocks(), sc.len()));
    let forward = lp.refinement_witness(&rp);
    let backward = rp.refinement_witness(&lp);
    let expected = expected_refinement(left, right);
    let what = format!("{left} refines {right}");
    match forward {
        None => rep.check(true, &what),
        Some((a, b)) => {
            let msg = format!("{what}: {} and {} are {left}-equal only", sc.label(a), sc.label(b));
            if expected {
                rep.check(false, &msg);
            } else {
                rep.line(format!("no    {msg}"));
            }
        }
    }
    match backward {
        None => rep.line(format!("yes   {right} refines {left}")),
        Some(_) => rep.line(format!("no    {right} refines {left}")),
    }
    rep.line(format!("info  same partition: {}", lp.same_blocks(&rp)));
    rep.set("left", json!({"relation": left.to_string(), "blocks": lp.num_blocks()}));
    rep.set("right", json!({"relation": right.to_string(), "blocks": rp.num_blocks()}));
    rep.set("left_refines_right", json!(forward.is_none()));
    rep.set("right_refines_left", json!(backward.is_none()));
    rep.set("expected", json!(expected));
    Ok(rep)
}

/// A document holding one instance: its category, `S`, and the
/// factorization system if any.
pub fn instance_document(inst: &Instance) -> Document {
    let mut raw: RawCategory = inst.cat.to_raw();
    raw.name = inst.name.clone();
    let ids = |c: &classes::MorClass| ClassSpec::Explicit(c.iter().map(|m| m.idx()).collect());
    let mut doc = Document::default();
    doc.categories.push(CategoryDecl { raw, line: 0 });
    doc.classes.push(ClassDecl {
        name: "S".into(),
        category: 0,
        spec: ids(&inst.class),
        auto_close_isos: false,
    });
    if let Some(ofs) = &inst.ofs {
        doc.classes.push(ClassDecl {
            name: "P".into(),
            category: 0,
            spec: ids(&ofs.p),
            auto_close_isos: false,
        });
        doc.ofs.push(OfsDecl {
            name: "F".into(),
            category: 0,
            p: 1,
            s: 0,
        });
    }
    doc
}

/// Axiom checks over a list of instances: `Par` for restriction and split
/// mode, `RaPar` for every factorization system with right class `S` found
/// by brute force in range mode.
pub fn check_instances(instances: &[Instance], mode: AxiomMode) -> Result<Report> {
    let mut rep = Report::new("check");
    let mut out = Vec::new();
    for inst in instances {
        let sc = SpanCategory::new(&inst.cat, &inst.class)?;
        let mut verdicts = Vec::new();
        match mode {
            AxiomMode::Restriction | AxiomMode::Split => {
                let p = par(&sc)?;
                let ax = check_axioms(&p.restriction, None, mode)?;
                axiom_summary(&mut rep, &format!("{} Par", inst.name), &p.restriction, &ax);
                verdicts.push(axiom_json(&p.restriction, &ax));
            }
            AxiomMode::Range => {
                let all = match limits::enumerate_all_ofs(&inst.cat) {
                    Ok(all) => all,
                    Err(e) => {
                        rep.line(format!("skip  {}: {e}", inst.name));
                        continue;
                    }
                };
                let mine: Vec<MorId> = inst.class.iter().collect();
                for ofs in all.iter().filter(|o| o.s.iter().eq(mine.iter().copied())) {
                    let part = relation(
                        &sc,
                        &RelationKind::ZCirc,
                        &RelationContext {
                            ofs: Some(ofs.clone()),
                            custom: Default::default(),
                        },
                    )?;
                    let quot = QuotCat::new(&sc, &part)?;
                    let x = range_on_quotient(&sc, &quot, ofs)?;
                    let ax = check_axioms(&x.restriction, Some(&x.hat), mode)?;
                    axiom_summary(&mut rep, &format!("{} RaPar", inst.name), &x.restriction, &ax);
                    verdicts.push(axiom_json(&x.restriction, &ax));
                }
            }
        }
        out.push(json!({"name": inst.name, "checks": verdicts}));
    }
    rep.set("instances", json!(out));
    Ok(rep)
}

fn axiom_summary(rep: &mut Report, what: &str, x: &RestrictionCat, ax: &AxiomReport) {
    if ax.is_ok() {
        let names: Vec<&str> = ax.verdicts.iter().map(|v| v.axiom.as_str()).collect();
        rep.check(true, &format!("{what}: {}", names.join(" ")));
    } else {
        axiom_lines(rep, x, what, ax);
    }
}

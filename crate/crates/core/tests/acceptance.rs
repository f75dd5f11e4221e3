//! Acceptance run: one line per criterion, then a non-zero exit if any failed.

mod common;

use std::time::{Duration, Instant};

use spanforge_core::backends::{
    bounded_prover, check_certificate, derive_certificate, Backend, CertRelation, ProverBounds, ProverOutcome,
    SPred, Template, Verdict,
};
use spanforge_core::classes::{compute_s_circ, compute_s_star, validate_stable_class};
use spanforge_core::corpus::Instance;
use spanforge_core::fincat::FunctorData;
use spanforge_core::frontend::commands::{self, AdjunctionPart};
use spanforge_core::frontend::{Document, Emit, Report};
use spanforge_core::limits::{enumerate_all_ofs, validate_ofs};
use spanforge_core::spans::{oracle_a_pairs, relation, RelationContext};
use spanforge_core::structures::{
    check_axioms, counit_epsilon, lemma91_check, par, range_on_quotient, restriction_on_quotient, triangles,
    unit_eta, AxiomMode,
};
use spanforge_core::{MorClass, Ofs, Partition, QuotCat, RelationKind, SpanCategory};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn part(sc: &SpanCategory, inst: &Instance, kind: RelationKind) -> Result<Partition, String> {
    let ctx = RelationContext {
        ofs: inst.ofs.clone(),
        ..Default::default()
    };
    relation(sc, &kind, &ctx).map_err(|e| format!("{} {kind}: {e}", inst.name))
}

fn sc_of(inst: &Instance) -> Result<SpanCategory, String> {
    SpanCategory::new(&inst.cat, &inst.class).map_err(|e| format!("{}: {e}", inst.name))
}

fn err(name: &str) -> impl Fn(spanforge_core::Error) -> String + '_ {
    move |e| format!("{name}: {e}")
}

/// Factorization systems to try: the attached one plus, on small
/// categories, every system whose right class is the designated one.
fn systems(inst: &Instance) -> Result<Vec<Ofs>, String> {
    let mut out: Vec<Ofs> = inst.ofs.iter().cloned().collect();
    if inst.cat.morphism_ids().filter(|&m| !inst.cat.is_iso(m)).count() <= 10 {
        let all = enumerate_all_ofs(&inst.cat).map_err(err(&inst.name))?;
        out.extend(all.into_iter().filter(|o| o.s == inst.class && Some(o) != inst.ofs.as_ref()));
    }
    Ok(out)
}

fn zcirc_quotient(sc: &SpanCategory, ofs: &Ofs, name: &str) -> Result<QuotCat, String> {
    let ctx = RelationContext {
        ofs: Some(ofs.clone()),
        ..Default::default()
    };
    let p = relation(sc, &RelationKind::ZCirc, &ctx).map_err(err(name))?;
    QuotCat::new(sc, &p).map_err(err(name))
}

fn restriction_and_range(insts: &[Instance]) -> Outcome {
    let mut ranges = 0;
    for inst in insts {
        let sc = sc_of(inst)?;
        let p = par(&sc).map_err(err(&inst.name))?;
        for mode in [AxiomMode::Restriction, AxiomMode::Split] {
            let rep = check_axioms(&p.restriction, None, mode).map_err(err(&inst.name))?;
            ensure(rep.is_ok(), || format!("{} {mode:?} {:?}", inst.name, rep.failed()))?;
        }
        for ofs in systems(inst)? {
            ensure(validate_ofs(&inst.cat, &ofs).is_ok(), || format!("{} bad system", inst.name))?;
            let q = zcirc_quotient(&sc, &ofs, &inst.name)?;
            let x = restriction_on_quotient(&sc, &q).map_err(err(&inst.name))?;
            let r = range_on_quotient(&sc, &q, &ofs).map_err(err(&inst.name))?;
            let rep = check_axioms(&x, Some(&r.hat), AxiomMode::Range).map_err(err(&inst.name))?;
            ensure(rep.is_ok(), || format!("{} range {:?}", inst.name, rep.failed()))?;
            ranges += 1;
        }
    }
    Ok(format!("{} instances, {ranges} range structures", insts.len()))
}

fn section_retraction_iso(insts: &[Instance]) -> Outcome {
    let mut checked = 0;
    for inst in insts {
        let sc = sc_of(inst)?;
        let quot = |k| -> Result<QuotCat, String> { QuotCat::new(&sc, &part(&sc, inst, k)?).map_err(err(&inst.name)) };
        let (z, a, az) = (quot(RelationKind::Z)?, quot(RelationKind::A)?, quot(RelationKind::Az)?);
        for s in inst.class.iter() {
            let (d, c) = (inst.cat.dom(s), inst.cat.cod(s));
            ensure(z.cat.comp(z.phi.at(s), z.psi.at(s)) == z.cat.identity(c), || format!("{} section", inst.name))?;
            ensure(a.cat.comp(a.psi.at(s), a.phi.at(s)) == a.cat.identity(d), || format!("{} retraction", inst.name))?;
            ensure(common::iso(&az.cat, az.phi.at(s)), || format!("{} iso", inst.name))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} class members"))
}

fn oracle_closure_is_a(insts: &[Instance]) -> Outcome {
    for inst in insts {
        let sc = sc_of(inst)?;
        let pairs = oracle_a_pairs(&sc).map_err(err(&inst.name))?;
        let a = part(&sc, inst, RelationKind::A)?;
        ensure(common::agrees(&common::equivalence_closure(sc.len(), &pairs), &a), || inst.name.clone())?;
    }
    Ok(format!("{} instances", insts.len()))
}

fn mono_collapse(insts: &[Instance]) -> Outcome {
    let mut n = 0;
    for inst in insts.iter().filter(|i| common::all_mono(&i.cat, &i.class)) {
        let sc = sc_of(inst)?;
        let mut kinds = vec![RelationKind::A, RelationKind::ZStar];
        if inst.ofs.is_some() {
            kinds.push(RelationKind::ZCirc);
        }
        for k in kinds {
            ensure(part(&sc, inst, k.clone())?.is_discrete(), || format!("{} {k} not iso", inst.name))?;
        }
        let z = part(&sc, inst, RelationKind::Z)?;
        ensure(z.same_blocks(&part(&sc, inst, RelationKind::Az)?), || format!("{} z != az", inst.name))?;
        let p = par(&sc).map_err(err(&inst.name))?;
        let span = QuotCat::new(&sc, &part(&sc, inst, RelationKind::Iso)?).map_err(err(&inst.name))?;
        ensure(p.quot.hom_sizes() == span.hom_sizes(), || format!("{} Par != Span", inst.name))?;
        n += 1;
    }
    ensure(n == insts.len(), || format!("only {n} of {} classes are mono", insts.len()))?;
    Ok(format!("{n} mono instances"))
}

fn refinement_chain(insts: &[Instance]) -> Outcome {
    for inst in insts {
        let sc = sc_of(inst)?;
        let iso = part(&sc, inst, RelationKind::Iso)?;
        let a = part(&sc, inst, RelationKind::A)?;
        let zstar = part(&sc, inst, RelationKind::ZStar)?;
        let az = part(&sc, inst, RelationKind::Az)?;
        ensure(iso.refines(&a) && a.refines(&zstar) && zstar.refines(&az), || inst.name.clone())?;
        if inst.ofs.is_some() {
            let zc = part(&sc, inst, RelationKind::ZCirc)?;
            ensure(zstar.refines(&zc) && zc.refines(&az), || format!("{} zcirc", inst.name))?;
        }
    }
    Ok(format!("{} instances", insts.len()))
}

/// An initial object all of whose outgoing maps lie in the class.
fn initial_in_class(inst: &Instance) -> bool {
    common::initial_objects(&inst.cat)
        .into_iter()
        .any(|z| inst.cat.out_of(z).iter().all(|&m| inst.class.contains(m)))
}

fn initial_collapse(insts: &[Instance]) -> Outcome {
    let mut hits = Vec::new();
    for inst in insts.iter().filter(|i| initial_in_class(i)) {
        let sc = sc_of(inst)?;
        let q = QuotCat::new(&sc, &part(&sc, inst, RelationKind::Z)?).map_err(err(&inst.name))?;
        ensure(q.hom_sizes().iter().flatten().all(|&n| n == 1), || format!("{} hom not singleton", inst.name))?;
        if inst.cat.num_objects() > 1 {
            hits.push(inst.name.clone());
        }
    }
    ensure(hits.len() >= 2, || format!("hypothesis met non-vacuously only by {hits:?}"))?;
    Ok(format!("{} instances meet the hypothesis", hits.len()))
}

fn counit_and_triangles(insts: &[Instance]) -> Outcome {
    for inst in insts {
        let sc = sc_of(inst)?;
        let t = triangles(&sc).map_err(err(&inst.name))?;
        ensure(t.is_ok(), || format!("{} triangles", inst.name))?;
        let eps = counit_epsilon(&par(&sc).map_err(err(&inst.name))?.restriction).map_err(err(&inst.name))?;
        ensure(eps.is_ok() && eps.is_iso, || format!("{} epsilon", inst.name))?;
        let eta = unit_eta(&sc).map_err(err(&inst.name))?;
        ensure(eta.is_ok(), || format!("{} eta", inst.name))?;
        ensure(eta.is_iso == common::all_mono(&inst.cat, &inst.class), || format!("{} eta iso", inst.name))?;
    }
    let hand = common::hand_written();
    ensure(hand.len() >= 5, || "fewer than five hand-written categories".into())?;
    for (name, x) in &hand {
        let eps = counit_epsilon(x).map_err(err(name))?;
        ensure(eps.is_ok(), || format!("{name} epsilon"))?;
    }
    Ok(format!("{} instances, {} hand-written", insts.len(), hand.len()))
}

fn ofs_on(doc: &Document, idx: usize, cat: &spanforge_core::FinCat) -> Option<Ofs> {
    let o = doc.ofs.iter().find(|o| o.category == idx)?;
    Some(Ofs { p: doc.resolve_class(o.p, cat), s: doc.resolve_class(o.s, cat) })
}

fn class_laws(insts: &[Instance]) -> Outcome {
    for inst in insts {
        let cat = &inst.cat;
        ensure(validate_stable_class(cat, &inst.class).is_ok(), || format!("{} unstable", inst.name))?;
        let star = compute_s_star(cat, &inst.class).map_err(err(&inst.name))?;
        ensure(MorClass::isos(cat).is_subset(&star), || format!("{} isos", inst.name))?;
        ensure(validate_stable_class(cat, &star).is_ok(), || format!("{} S★ unstable", inst.name))?;
        if let Some(ofs) = &inst.ofs {
            let circ = compute_s_circ(cat, ofs).map_err(err(&inst.name))?;
            ensure(star.is_subset(&circ) && circ.is_subset(&ofs.s), || format!("{} S∘", inst.name))?;
            let id = FunctorData::identity(cat);
            let rep = lemma91_check(cat, ofs, cat, ofs, &id).map_err(err(&inst.name))?;
            ensure(rep.is_ok(), || format!("{} lemma91", inst.name))?;
        }
    }
    let doc = common::load("functor-chain");
    let f = &doc.functors[0];
    let src = doc.build_category(f.source).map_err(err("functor-chain"))?;
    let tgt = doc.build_category(f.target).map_err(err("functor-chain"))?;
    let (so, to) = (ofs_on(&doc, f.source, &src), ofs_on(&doc, f.target, &tgt));
    let (Some(so), Some(to)) = (so, to) else {
        return Err("functor-chain lacks factorization systems".into());
    };
    let rep = lemma91_check(&src, &so, &tgt, &to, &f.data).map_err(err("functor-chain"))?;
    ensure(rep.is_ok(), || "functor-chain lemma91".into())?;
    Ok(format!("{} instances plus a non-identity functor", insts.len()))
}

fn certificates() -> Outcome {
    let mut certs = Vec::new();
    for (file, t) in [
        ("remark47", Template::Remark47),
        ("thm48", Template::Thm48Stage1),
        ("thm48", Template::Thm48Stage2),
        ("thm48", Template::Thm48),
        ("example-ord", Template::ExampleOrd),
    ] {
        let doc = common::load(file);
        certs.push(derive_certificate(t, &doc.problems[0].inputs).map_err(err(file))?.certificate);
    }
    certs.extend(common::load("certificates").certificates);
    let mut muts = 0;
    for c in &certs {
        ensure(matches!(check_certificate(c), Ok(Verdict::Valid)), || format!("{} does not verify", c.name))?;
        for m in common::mutations(c) {
            ensure(!matches!(check_certificate(&m), Ok(Verdict::Valid)), || format!("{} mutation verifies", c.name))?;
            muts += 1;
        }
    }
    let doc = common::load("remark47");
    let target = doc.problems[0].target.clone().ok_or("remark47 has no target")?;
    let start = Instant::now();
    let out = bounded_prover(
        Backend::FinSet,
        SPred::All,
        CertRelation::A,
        &doc.problems[0].inputs.span,
        &target,
        ProverBounds { max_apex: 4, max_steps: 6 },
    )
    .map_err(err("prover"))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("prover took {took:?}"))?;
    let ProverOutcome::Found(c) = out else {
        return Err("prover did not find remark47".into());
    };
    ensure(matches!(check_certificate(&c), Ok(Verdict::Valid)), || "prover certificate invalid".into())?;
    Ok(format!("{} certificates, {muts} mutations rejected, prover {:.1}s", certs.len(), took.as_secs_f64()))
}

fn reports(doc: &Document) -> Vec<Report> {
    let mut out = Vec::new();
    out.extend(commands::validate(doc));
    for k in ["span", "z", "a", "zstar", "zcirc", "az"] {
        out.extend(commands::build(doc, &k.parse().unwrap()));
    }
    for m in [AxiomMode::Restriction, AxiomMode::Range, AxiomMode::Split] {
        out.extend(commands::check(doc, m));
    }
    for p in [AdjunctionPart::Eta, AdjunctionPart::Epsilon, AdjunctionPart::Triangles, AdjunctionPart::Lemma91] {
        out.extend(commands::adjunction(doc, p));
    }
    out.extend(commands::cert_verify(doc));
    out
}

fn deterministic_json() -> Outcome {
    let mut n = 0;
    for (name, doc) in common::corpus_files() {
        let first: Vec<String> = reports(&doc).iter().map(|r| r.render(Emit::Json)).collect();
        let again = spanforge_core::frontend::parse_document(&std::fs::read_to_string(common::corpus_dir().join(format!("{name}.sf"))).unwrap()).unwrap();
        let second: Vec<String> = reports(&again).iter().map(|r| r.render(Emit::Json)).collect();
        ensure(first == second, || format!("{name} differs between runs"))?;
        n += first.len();
    }
    Ok(format!("{n} reports"))
}

fn main() {
    let insts = common::all_instances();
    println!("corpus: {} instances", insts.len());
    let criteria: Vec<Criterion> = vec![
        ("restriction, split and range axioms", Box::new(|| restriction_and_range(&insts))),
        ("section, retraction and iso laws", Box::new(|| section_retraction_iso(&insts))),
        ("oracle pairs close to a", Box::new(|| oracle_closure_is_a(&insts))),
        ("mono collapse", Box::new(|| mono_collapse(&insts))),
        ("refinement chain", Box::new(|| refinement_chain(&insts))),
        ("initial object collapse", Box::new(|| initial_collapse(&insts))),
        ("counit, unit and triangles", Box::new(|| counit_and_triangles(&insts))),
        ("class laws and lemma91", Box::new(|| class_laws(&insts))),
        ("certificates and prover", Box::new(certificates)),
        ("deterministic reports", Box::new(deterministic_json)),
    ];
    let mut failed = 0;
    if insts.len() < 12 {
        println!("FAIL corpus has fewer than 12 instances");
        failed += 1;
    }
    for (i, (what, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {what} ({detail})", i + 1),
            Err(why) => {
                println!("FAIL criterion {}: {what}: {why}", i + 1);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

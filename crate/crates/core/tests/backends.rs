mod common;

use std::time::{Duration, Instant};

use spanforge_core::backends::{
    all_maps, bounded_prover, check_certificate, class_predicates, derive_certificate, is_pullback,
    objects_of_size, pullback, BSpan, Backend, CertRelation, Certificate, Mor, Obj, ProverBounds, ProverOutcome,
    SPred, Square, Step, Template, TemplateInputs, Verdict,
};

fn problem(file: &str) -> (TemplateInputs, Option<BSpan>) {
    let doc = common::load(file);
    let p = &doc.problems[0];
    (p.inputs.clone(), p.target.clone())
}

fn derive(file: &str, t: Template) -> Certificate {
    let (inputs, _) = problem(file);
    derive_certificate(t, &inputs).unwrap().certificate
}

fn shipped_derivations() -> Vec<Certificate> {
    vec![
        derive("remark47", Template::Remark47),
        derive("thm48", Template::Thm48Stage1),
        derive("thm48", Template::Thm48Stage2),
        derive("thm48", Template::Thm48),
        derive("example-ord", Template::ExampleOrd),
    ]
}

fn rejected(c: &Certificate) -> bool {
    !matches!(check_certificate(c), Ok(Verdict::Valid))
}

#[test]
fn pullback_along_identity_is_the_domain() {
    for o in objects_of_size(Backend::Preorder, 2) {
        for f in all_maps(&o, &Obj::chaotic(2)) {
            let id = Mor::identity(&f.cod);
            let sq = pullback(&id, &f).unwrap();
            assert_eq!(sq.p.dom.n, f.dom.n);
            assert!(is_pullback(&id, &f, &sq).is_ok());
        }
    }
}

#[test]
fn constants_into_a_point_have_a_four_element_pullback() {
    let (two, one) = (Obj::set(2), Obj::point());
    let c = Mor::constant(&two, &one, 0);
    assert_eq!(pullback(&c, &c).unwrap().p.dom.n, 4);
}

#[test]
fn preorder_pullback_carries_the_componentwise_order() {
    let chain = Obj::preorder(vec![vec![true, true], vec![false, true]]).unwrap();
    let target = Obj::chaotic(2);
    for f in all_maps(&chain, &target) {
        for s in all_maps(&chain, &target) {
            let sq = pullback(&f, &s).unwrap();
            let apex = &sq.p.dom;
            for i in 0..apex.n {
                for j in 0..apex.n {
                    let (x, y) = (sq.p.apply(i), sq.q.apply(i));
                    let (x2, y2) = (sq.p.apply(j), sq.q.apply(j));
                    assert_eq!(apex.le(i, j), chain.le(x, x2) && chain.le(y, y2));
                }
            }
        }
    }
}

#[test]
fn pullbacks_have_the_universal_property_on_small_sets() {
    let objs: Vec<Obj> = (0..3).map(Obj::set).collect();
    for a in &objs {
        for b in &objs {
            for p in &objs[1..] {
                for f in all_maps(a, p) {
                    for s in all_maps(b, p) {
                        let sq = pullback(&f, &s).unwrap();
                        for z in &objs {
                            for x in all_maps(z, a) {
                                for y in all_maps(z, b) {
                                    if f.after(&x) != s.after(&y) {
                                        continue;
                                    }
                                    let through = all_maps(z, &sq.p.dom)
                                        .into_iter()
                                        .filter(|u| sq.p.after(u) == Some(x.clone()) && sq.q.after(u) == Some(y.clone()))
                                        .count();
                                    assert_eq!(through, 1);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn class_predicates_on_examples() {
    let c2 = Obj::chaotic(2);
    let id = class_predicates(&Mor::identity(&c2));
    assert!(id.mono && id.epi && id.fully_faithful_surjection);
    let collapse = class_predicates(&Mor::bang(&c2));
    assert!(collapse.fully_faithful_surjection && !collapse.mono && collapse.epi);
    // identity-on-elements from the discrete 2 onto the chain 0 ≤ 1
    let chain = Obj::preorder(vec![vec![true, true], vec![false, true]]).unwrap();
    let m = Mor::new(Obj::set(2), chain, vec![0, 1]).unwrap();
    let f = class_predicates(&m);
    assert!(f.epi && f.mono && !f.fully_faithful_surjection);
    assert!(!m.is_iso());
}

#[test]
fn projections_belong_to_proj() {
    let sq = spanforge_core::backends::product(&Obj::set(2), &Obj::set(3));
    assert!(SPred::Proj.contains(&sq.p) && SPred::Proj.contains(&sq.q));
    assert!(!SPred::Proj.contains(&Mor::new(Obj::set(2), Obj::set(2), vec![0, 0]).unwrap()));
}

#[test]
fn single_identity_iso_step_is_valid() {
    let d = Obj::set(2);
    let sp = BSpan { s: Mor::identity(&d), f: Mor::constant(&d, &Obj::point(), 0) };
    let cert = Certificate {
        name: "ID".into(),
        backend: Backend::FinSet,
        class: SPred::All,
        relation: CertRelation::A,
        start: sp.clone(),
        steps: vec![Step::Iso { x: Mor::identity(&d), to: sp.clone() }],
        end: sp,
    };
    assert_eq!(check_certificate(&cert).unwrap(), Verdict::Valid);
}

#[test]
fn derived_certificates_verify() {
    for c in shipped_derivations() {
        assert_eq!(check_certificate(&c).unwrap(), Verdict::Valid, "{}", c.name);
    }
    let doc = common::load("certificates");
    assert_eq!(doc.certificates.len(), 5);
    for c in &doc.certificates {
        assert_eq!(check_certificate(c).unwrap(), Verdict::Valid, "{}", c.name);
    }
}

#[test]
fn remark47_certificate_reaches_the_empty_span() {
    let (_, target) = problem("remark47");
    let c = derive("remark47", Template::Remark47);
    assert_eq!(c.end, target.unwrap());
    assert!(c.steps.iter().any(|s| matches!(s, Step::A { .. })));
}

#[test]
fn one_element_apex_is_not_a_limit_cone() {
    let mut c = derive("remark47", Template::Remark47);
    let mut hit = false;
    for step in c.steps.iter_mut() {
        if let Step::A { w, .. } = step {
            for sq in [&mut w.small, &mut w.large] {
                if sq.p.dom.n == 0 && !hit {
                    let one = Obj::point();
                    *sq = Square {
                        p: Mor::constant(&one, &sq.p.cod, 0),
                        q: Mor::constant(&one, &sq.q.cod, 0),
                    };
                    hit = true;
                }
            }
        }
    }
    assert!(hit, "the certificate has an empty square");
    match check_certificate(&c).unwrap() {
        Verdict::Invalid { step, reason } => {
            assert!(step.is_some());
            assert!(reason.contains("not a limit cone"), "{reason}");
        }
        Verdict::Valid => panic!("mutated certificate verified"),
    }
}

#[test]
fn every_single_value_mutation_is_rejected() {
    for c in shipped_derivations() {
        let muts = common::mutations(&c);
        assert!(!muts.is_empty(), "{}", c.name);
        for (i, m) in muts.iter().enumerate() {
            assert!(rejected(m), "{} mutation {i} still verifies", c.name);
        }
    }
}

#[test]
fn changing_the_claimed_end_is_rejected() {
    for mut c in shipped_derivations() {
        c.end = c.start.clone();
        if c.steps.last().map(Step::to) != Some(&c.start) {
            assert!(rejected(&c), "{}", c.name);
        }
    }
}

#[test]
fn dropping_a_step_is_rejected() {
    for mut c in shipped_derivations() {
        if c.steps.len() > 1 {
            c.steps.remove(0);
            assert!(rejected(&c), "{}", c.name);
        }
    }
}

#[test]
fn wrong_relation_is_rejected() {
    let mut c = derive("remark47", Template::Remark47);
    c.relation = CertRelation::Z;
    assert!(rejected(&c));
}

#[test]
fn degenerate_remark47_returns_a_trivial_certificate() {
    let e = Obj::set(0);
    let a = Obj::set(2);
    let inputs = TemplateInputs {
        backend: Backend::FinSet,
        class: SPred::All,
        span: BSpan { s: Mor::from_empty(&a), f: Mor::identity(&e) },
        section: None,
        g: None,
        a: None,
    };
    let d = derive_certificate(Template::Remark47, &inputs).unwrap();
    assert!(d.note.is_some());
    assert!(d.certificate.steps.iter().all(|s| matches!(s, Step::Iso { .. })));
    assert_eq!(check_certificate(&d.certificate).unwrap(), Verdict::Valid);
}

#[test]
fn template_names_round_trip() {
    for t in Template::ALL {
        assert_eq!(t.to_string().parse::<Template>().unwrap(), t);
    }
    assert!("remark48".parse::<Template>().is_err());
}

#[test]
fn prover_returns_an_empty_chain_for_equal_spans() {
    let (inputs, _) = problem("remark47");
    let out = bounded_prover(
        Backend::FinSet,
        SPred::All,
        CertRelation::A,
        &inputs.span,
        &inputs.span,
        ProverBounds { max_apex: 4, max_steps: 6 },
    )
    .unwrap();
    match out {
        ProverOutcome::Found(c) => {
            assert!(c.steps.is_empty());
            assert_eq!(check_certificate(&c).unwrap(), Verdict::Valid);
        }
        ProverOutcome::Unknown { .. } => panic!("no certificate for equal spans"),
    }
}

#[test]
fn prover_rediscovers_remark47() {
    let (inputs, target) = problem("remark47");
    let start = Instant::now();
    let out = bounded_prover(
        Backend::FinSet,
        SPred::All,
        CertRelation::A,
        &inputs.span,
        &target.unwrap(),
        ProverBounds { max_apex: 4, max_steps: 6 },
    )
    .unwrap();
    assert!(start.elapsed() < Duration::from_secs(60));
    let ProverOutcome::Found(c) = out else { panic!("not found") };
    assert_eq!(check_certificate(&c).unwrap(), Verdict::Valid);
}

#[test]
fn prover_stays_silent_on_zero_versus_one_for_projections() {
    let a = Obj::set(1);
    let b = Obj::set(2);
    let zero = BSpan { s: Mor::from_empty(&a), f: Mor::from_empty(&b) };
    let prod = spanforge_core::backends::product(&a, &b);
    let one = BSpan { s: prod.p, f: prod.q };
    let out = bounded_prover(
        Backend::FinSet,
        SPred::Proj,
        CertRelation::A,
        &zero,
        &one,
        ProverBounds { max_apex: 3, max_steps: 3 },
    )
    .unwrap();
    assert!(matches!(out, ProverOutcome::Unknown { .. }));
}

#[test]
fn prover_refuses_zstar() {
    let (inputs, _) = problem("remark47");
    let b = ProverBounds { max_apex: 1, max_steps: 1 };
    assert!(bounded_prover(Backend::FinSet, SPred::All, CertRelation::ZStar, &inputs.span, &inputs.span, b).is_err());
}

mod common;

use common::mor;
use spanforge_core::classes::{
    compute_s_circ, compute_s_star, compute_s_star_with, conjugates, non_monic_members,
    relative_closure, validate_stable_class, weak_left_cancellation, ClassViolation, WorklistOrder,
};
use spanforge_core::corpus;
use spanforge_core::{Error, FinCat, MorClass, Ofs};

#[test]
fn diamond_all_is_stable() {
    let cat = corpus::diamond();
    assert!(validate_stable_class(&cat, &MorClass::all(&cat)).is_ok());
}

#[test]
fn identities_miss_a_non_identity_iso() {
    let cat = corpus::walking_iso();
    let ids = MorClass::from_predicate(&cat, |m| cat.is_identity(m));
    let rep = validate_stable_class(&cat, &ids);
    assert!(rep
        .violations
        .iter()
        .any(|v| matches!(v, ClassViolation::MissingIso { .. })));
}

#[test]
fn idempotent_class_lacks_a_kernel_pair() {
    let cat = corpus::idempotent_monoid();
    let e = mor(&cat, "e");
    let rep = validate_stable_class(&cat, &MorClass::all(&cat));
    assert!(rep
        .violations
        .iter()
        .any(|v| matches!(v, ClassViolation::NoPullback { f, s } if *f == e && *s == e)));
    assert!(!rep.describe(&cat).is_empty());
}

#[test]
fn unstable_class_is_reported_with_the_escaping_leg() {
    // 0≤2 pulled back along 1≤2 is 0≤1, which is not in the class
    let cat = corpus::chain(3);
    let mut class = MorClass::isos(&cat);
    class.insert(mor(&cat, "le_0_2"));
    let rep = validate_stable_class(&cat, &class);
    assert!(rep
        .violations
        .iter()
        .any(|v| matches!(v, ClassViolation::LegOutside { leg, .. } if *leg == mor(&cat, "le_0_1"))));
}

/// `s, s∘t ∈ S` with `t ∉ S`, found by scanning.
fn cancellation_failure(cat: &FinCat, class: &MorClass) -> bool {
    class.iter().any(|s| {
        cat.morphism_ids()
            .any(|t| cat.compose(s, t).is_some_and(|st| class.contains(st)) && !class.contains(t))
    })
}

#[test]
fn weak_left_cancellation_matches_a_scan() {
    for inst in common::all_instances() {
        let verdict = weak_left_cancellation(&inst.cat, &inst.class);
        assert_eq!(verdict.is_err(), cancellation_failure(&inst.cat, &inst.class), "{}", inst.name);
        if let Err((s, t)) = verdict {
            assert!(inst.class.contains(s) && !inst.class.contains(t));
        }
    }
    let cat = corpus::chain(3);
    assert!(weak_left_cancellation(&cat, &MorClass::all(&cat)).is_ok());
    assert!(weak_left_cancellation(&cat, &MorClass::isos(&cat)).is_ok());
}

#[test]
fn stable_classes_on_finite_categories_are_mono() {
    for inst in common::all_instances() {
        assert!(validate_stable_class(&inst.cat, &inst.class).is_ok(), "{}", inst.name);
        assert!(non_monic_members(&inst.cat, &inst.class).is_empty(), "{}", inst.name);
        assert!(common::all_mono(&inst.cat, &inst.class), "{}", inst.name);
    }
}

/// `S★` by fixpoint over every limit cone: conjugates first, then pulled-back
/// copies until nothing changes.
fn oracle_s_star(cat: &FinCat, class: &MorClass) -> MorClass {
    let mut out = MorClass::empty(cat);
    for s in class.iter() {
        for &f in cat.into(cat.cod(s)) {
            for &v in cat.out_of(cat.cod(s)) {
                if !class.contains(v) {
                    continue;
                }
                let (g, t) = (cat.comp(v, f), cat.comp(v, s));
                for (d1, p1, q1) in common::limit_cones(cat, f, s) {
                    for (d2, p2, q2) in common::limit_cones(cat, g, t) {
                        for &x in cat.hom(d1, d2) {
                            if cat.compose(p2, x) == Some(p1) && cat.compose(q2, x) == Some(q1) {
                                out.insert(x);
                            }
                        }
                    }
                }
            }
        }
    }
    stabilize(cat, out)
}

fn stabilize(cat: &FinCat, mut t: MorClass) -> MorClass {
    loop {
        let mut fresh = Vec::new();
        for x in t.iter() {
            for &h in cat.into(cat.cod(x)) {
                for (_, p, _) in common::limit_cones(cat, h, x) {
                    if !t.contains(p) {
                        fresh.push(p);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return t;
        }
        for m in fresh {
            t.insert(m);
        }
    }
}

fn oracle_s_circ(cat: &FinCat, ofs: &Ofs) -> MorClass {
    let mut t = oracle_s_star(cat, &ofs.s);
    loop {
        t = stabilize(cat, t);
        let add: Vec<_> = ofs
            .s
            .iter()
            .filter(|&x| !t.contains(x))
            .filter(|&x| {
                ofs.p.iter().filter(|&q| cat.cod(q) == cat.dom(x)).any(|q| {
                    t.iter().filter(|&y| cat.dom(y) == cat.dom(q)).any(|y| {
                        ofs.p.iter().any(|p| {
                            cat.dom(p) == cat.cod(y)
                                && cat.cod(p) == cat.cod(x)
                                && cat.compose(x, q) == cat.compose(p, y)
                        })
                    })
                })
            })
            .collect();
        if add.is_empty() {
            return t;
        }
        for x in add {
            t.insert(x);
        }
    }
}

#[test]
fn s_star_matches_the_fixpoint_oracle() {
    for inst in common::all_instances() {
        let star = compute_s_star(&inst.cat, &inst.class).unwrap();
        assert_eq!(star, oracle_s_star(&inst.cat, &inst.class), "{}", inst.name);
        let lifo = compute_s_star_with(&inst.cat, &inst.class, None, WorklistOrder::Lifo).unwrap();
        assert_eq!(star, lifo, "{}", inst.name);
    }
}

#[test]
fn s_star_laws() {
    for inst in common::all_instances() {
        let cat = &inst.cat;
        let star = compute_s_star(cat, &inst.class).unwrap();
        assert!(MorClass::isos(cat).is_subset(&star), "{}", inst.name);
        assert!(validate_stable_class(cat, &star).is_ok(), "{}", inst.name);
        if weak_left_cancellation(cat, &inst.class).is_ok() {
            assert!(star.is_subset(&inst.class), "{}", inst.name);
        }
        if common::all_mono(cat, &inst.class) {
            assert_eq!(star, MorClass::isos(cat), "{}", inst.name);
        }
    }
}

#[test]
fn diamond_s_star_is_the_identities() {
    let cat = corpus::diamond();
    let star = compute_s_star(&cat, &MorClass::all(&cat)).unwrap();
    assert_eq!(star, MorClass::from_predicate(&cat, |m| cat.is_identity(m)));
}

#[test]
fn identity_conjugates_are_identities() {
    for inst in corpus::builtin() {
        let cat = &inst.cat;
        for c in conjugates(cat, &inst.class).unwrap() {
            if cat.is_identity(c.v) {
                assert!(cat.is_identity(c.star), "{}", inst.name);
            }
        }
    }
}

#[test]
fn s_star_needs_pullbacks() {
    let cat = corpus::idempotent_monoid();
    assert!(matches!(
        compute_s_star(&cat, &MorClass::all(&cat)),
        Err(Error::InvalidInstance(_))
    ));
}

#[test]
fn s_circ_on_diamond_iso_all_is_the_isos() {
    let cat = corpus::diamond();
    let ofs = Ofs { p: MorClass::isos(&cat), s: MorClass::all(&cat) };
    assert_eq!(compute_s_circ(&cat, &ofs).unwrap(), MorClass::isos(&cat));
}

#[test]
fn s_circ_matches_oracle_and_sits_between_s_star_and_s() {
    for inst in common::all_instances() {
        let Some(ofs) = &inst.ofs else { continue };
        let cat = &inst.cat;
        let star = compute_s_star(cat, &ofs.s).unwrap();
        let circ = compute_s_circ(cat, ofs).unwrap();
        assert_eq!(circ, oracle_s_circ(cat, ofs), "{}", inst.name);
        assert!(star.is_subset(&circ) && circ.is_subset(&ofs.s), "{}", inst.name);
        if common::all_mono(cat, &ofs.s) {
            assert_eq!(circ, MorClass::isos(cat), "{}", inst.name);
        }
        // a closed seed is a fixed point
        assert_eq!(relative_closure(cat, &circ, ofs).unwrap(), circ, "{}", inst.name);
    }
}

#[test]
fn relative_closure_rejects_a_seed_outside_s() {
    let cat = corpus::chain(2);
    let ofs = Ofs { p: MorClass::all(&cat), s: MorClass::isos(&cat) };
    assert!(relative_closure(&cat, &MorClass::all(&cat), &ofs).is_err());
}
